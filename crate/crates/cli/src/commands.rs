use indoor_channel::datasets::{
    load_path_loss_csv, load_pattern_csv, load_reflection_csv, paper_dataset, same_frequency, validate_dataset,
    write_path_loss_csv, CiEnvironment, CiFitRecord, Material, PartitionRecord, PathLossSample, Polarization,
    ReflectionSample, SounderSpec, F142_GHZ, F28_GHZ, F73_GHZ,
};
use indoor_channel::partition::{
    cross_pol_mean_db, depolarization_margin, partition_loss, power_budget, summarize_xpd, LinkPowerMeasurement,
};
use indoor_channel::pathloss::{fit_ci, fit_directional, fspl_db, reduce_directional, CiFit, CiModel};
use indoor_channel::reflection::{
    estimate_permittivity_mmse, fit_linear_reflection, fresnel_gamma_perp, reflection_loss_db, IncidentAngle,
    Permittivity,
};
use indoor_channel::scattering::{classify_smooth, measurement_arc, DsParameters, ScatterGeometry, ScatterModel};
use indoor_channel::Error;
use serde::Serialize;

use crate::output::{to_csv, to_json};
use crate::{Command, Failure, Format, ReflectionInput, ScatterArgs};

type Outcome = Result<String, Failure>;

fn render<T: Serialize + ?Sized>(format: Format, value: &T) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Csv => to_csv(value),
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Failure {
    Failure::Domain(Error::InvalidParameter {
        name,
        reason: reason.into(),
    })
}

fn positive(name: &'static str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(name, "must be positive"))
    }
}

pub(crate) fn run(cmd: &Command, format: Format) -> Outcome {
    match cmd {
        Command::Fresnel { eps, angle } => fresnel(format, *eps, *angle),
        Command::EstimateEps(input) => estimate_eps(format, input),
        Command::FitLinear(input) => fit_linear(format, input),
        Command::ScatterPattern(args) => {
            let pattern = scatter_model(args)?.predict_pattern(&observation_angles(args))?;
            Ok(render(format, &pattern))
        }
        Command::Backscatter { model, input } => backscatter(format, model, input.as_deref()),
        Command::Partition {
            pt_dbm,
            pr_dbm,
            distance,
            freq,
            gains_dbi,
            tx_pol,
            rx_pol,
        } => {
            let mut meas = LinkPowerMeasurement::new(*pt_dbm, *pr_dbm, *distance, *freq, *tx_pol, *rx_pol)?;
            if let Some([tx, rx]) = gains_dbi.as_deref() {
                meas = meas.without_antenna_gains(*tx, *rx);
            }
            partition(format, &meas)
        }
        Command::Xpd { pairs } => {
            let pairs: Vec<(f64, f64)> = pairs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
            Ok(render(format, &summarize_xpd(&pairs)?))
        }
        Command::DepolMargin {
            freq,
            material,
            cross_db,
            xpd_db,
        } => depol_margin(format, *freq, *material, cross_db.zip(*xpd_db)),
        Command::Budget { refl_db, part_db } => budget(format, *refl_db, *part_db),
        Command::Fspl { freq, distance } => {
            #[derive(Serialize)]
            struct Out {
                frequency_hz: f64,
                distance_m: f64,
                fspl_db: f64,
            }
            let out = Out {
                frequency_hz: positive("frequency", *freq)?,
                distance_m: positive("distance", *distance)?,
                fspl_db: fspl_db(*freq, *distance),
            };
            Ok(render(format, &out))
        }
        Command::CiEval {
            freq,
            distance,
            ple,
            env,
        } => ci_eval(format, *freq, *distance, *ple, *env),
        Command::FitCi { input, freq, env } => {
            let samples = load_path_loss_csv(input)?;
            fit_ci_command(format, &samples, *freq, env.as_deref())
        }
        Command::ReduceDirectional { input } => {
            let r = reduce_directional(&load_path_loss_csv(input)?);
            match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_path_loss_csv(&mut buf, &r.nlos_best)?;
                    Ok(String::from_utf8(buf).expect("CSV of UTF-8 fields"))
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        los: usize,
                        nlos_all: usize,
                        nlos_best: &'a [PathLossSample],
                    }
                    Ok(to_json(&Out {
                        los: r.los.len(),
                        nlos_all: r.nlos_all.len(),
                        nlos_best: &r.nlos_best,
                    }))
                }
            }
        }
        Command::PaperTables => Ok(render(format, &tables())),
        Command::Validate { input } => Ok(render(format, &validate_dataset(&load_path_loss_csv(input)?))),
    }
}

fn fresnel(format: Format, eps: f64, angle: f64) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        eps_r: f64,
        incident_angle_deg: f64,
        gamma: f64,
        power_reflectivity: f64,
        loss_db: f64,
    }
    let theta = IncidentAngle::from_degrees(angle)?;
    let permittivity = Permittivity::new(eps)?;
    let gamma = fresnel_gamma_perp(theta, permittivity);
    let out = Out {
        eps_r: eps,
        incident_angle_deg: angle,
        gamma,
        power_reflectivity: gamma * gamma,
        loss_db: reflection_loss_db(theta, permittivity)?,
    };
    Ok(render(format, &out))
}

/// Reflection samples grouped by band, lowest band first.
fn reflection_groups(input: &ReflectionInput) -> Result<Vec<(f64, Vec<ReflectionSample>)>, Failure> {
    let samples = match &input.input {
        Some(path) => load_reflection_csv(path)?,
        None => paper_dataset().reflection.to_vec(),
    };
    let mut groups: Vec<(f64, Vec<ReflectionSample>)> = Vec::new();
    for s in samples {
        if input.freq.is_some_and(|f| !same_frequency(f, s.frequency_hz)) {
            continue;
        }
        match groups.iter_mut().find(|(f, _)| same_frequency(*f, s.frequency_hz)) {
            Some((_, g)) => g.push(s),
            None => groups.push((s.frequency_hz, vec![s])),
        }
    }
    if groups.is_empty() {
        groups.push((input.freq.unwrap_or(f64::NAN), Vec::new()));
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(groups)
}

fn estimate_eps(format: Format, input: &ReflectionInput) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        frequency_hz: f64,
        eps_r: f64,
        mse: f64,
        samples_used: usize,
    }
    let out = reflection_groups(input)?
        .into_iter()
        .map(|(frequency_hz, samples)| {
            let e = estimate_permittivity_mmse(&samples)?;
            Ok(Out {
                frequency_hz,
                eps_r: e.eps_r,
                mse: e.mse,
                samples_used: e.samples_used,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(render(format, &out))
}

fn fit_linear(format: Format, input: &ReflectionInput) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        frequency_hz: f64,
        slope: f64,
        intercept: f64,
        rmse: f64,
        samples_used: usize,
    }
    let out = reflection_groups(input)?
        .into_iter()
        .map(|(frequency_hz, samples)| {
            let r = fit_linear_reflection(&samples)?;
            Ok(Out {
                frequency_hz,
                slope: r.fit.slope,
                intercept: r.fit.intercept,
                rmse: r.rmse,
                samples_used: r.samples_used,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(render(format, &out))
}

fn scatter_model(a: &ScatterArgs) -> Result<ScatterModel, Failure> {
    let data = paper_dataset();
    let eps = match a.eps {
        Some(e) => e,
        None => data
            .drywall_permittivity(a.freq)
            .ok_or_else(|| Failure::Usage(format!("no embedded permittivity at {} Hz; pass --eps", a.freq)))?,
    };
    let hpbw = match a.hpbw {
        Some(h) => h,
        None => data
            .sounder(a.freq)
            .map(|s| s.narrow_beam().hpbw_deg)
            .ok_or_else(|| Failure::Usage(format!("no embedded antenna at {} Hz; pass --hpbw", a.freq)))?,
    };
    let geometry = ScatterGeometry::new(a.angle, a.tx_dist, a.rx_dist)?;
    let params = DsParameters::new(a.s, a.lambda, a.alpha_r, a.alpha_i)?;
    Ok(ScatterModel::new(geometry, Permittivity::new(eps)?, params, hpbw)?)
}

fn observation_angles(a: &ScatterArgs) -> Vec<f64> {
    if let Some(obs) = &a.obs {
        return obs.clone();
    }
    let mut arc = measurement_arc();
    if !arc.iter().any(|&o| (o - a.angle).abs() < 1e-9) {
        arc.push(a.angle);
        arc.sort_by(f64::total_cmp);
    }
    arc
}

fn backscatter(format: Format, model: &ScatterArgs, input: Option<&std::path::Path>) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        incident_angle_deg: f64,
        peak_angle_deg: f64,
        backscatter_margin_db: f64,
        window_min_db: f64,
        smooth: bool,
    }
    let pattern = match input {
        Some(path) => load_pattern_csv(path)?,
        None => scatter_model(model)?.predict_pattern(&observation_angles(model))?,
    };
    let r = classify_smooth(&pattern, IncidentAngle::from_degrees(model.angle)?)?;
    let out = Out {
        incident_angle_deg: model.angle,
        peak_angle_deg: r.peak_angle_deg,
        backscatter_margin_db: r.backscatter_margin_db,
        window_min_db: r.window_min_db,
        smooth: r.smooth,
    };
    Ok(render(format, &out))
}

fn partition(format: Format, meas: &LinkPowerMeasurement) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        frequency_hz: f64,
        distance_m: f64,
        tx_pol: Polarization,
        rx_pol: Polarization,
        rx_power_dbm: f64,
        fspl_db: f64,
        loss_db: f64,
        negative: bool,
    }
    let loss = partition_loss(meas);
    let out = Out {
        frequency_hz: meas.frequency_hz,
        distance_m: meas.distance_m,
        tx_pol: meas.tx_pol,
        rx_pol: meas.rx_pol,
        rx_power_dbm: meas.rx_power_dbm,
        fspl_db: fspl_db(meas.frequency_hz, meas.distance_m),
        loss_db: loss.loss_db,
        negative: loss.negative,
    };
    Ok(render(format, &out))
}

fn depol_margin(format: Format, freq: Option<f64>, material: Material, explicit: Option<(f64, f64)>) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        frequency_hz: Option<f64>,
        material: Option<Material>,
        cross_pol_mean_db: f64,
        xpd_db: f64,
        margin_db: f64,
    }
    if let Some((cross, xpd)) = explicit {
        let out = Out {
            frequency_hz: freq,
            material: None,
            cross_pol_mean_db: cross,
            xpd_db: xpd,
            margin_db: depolarization_margin(cross, xpd),
        };
        return Ok(render(format, &[out]));
    }
    let data = paper_dataset();
    let bands = match freq {
        Some(f) => vec![f],
        None => vec![F28_GHZ, F73_GHZ, F142_GHZ],
    };
    let out = bands
        .into_iter()
        .map(|f| {
            use Polarization::{Horizontal as H, Vertical as V};
            let missing = || invalid("frequency", format!("no embedded tables at {f} Hz"));
            let vh = data.partition(material, f, V, H).ok_or_else(missing)?;
            let hv = data.partition(material, f, H, V).ok_or_else(missing)?;
            let xpd = data.xpd_db(f).ok_or_else(missing)?;
            let cross = cross_pol_mean_db(vh.mean_loss_db, hv.mean_loss_db);
            Ok(Out {
                frequency_hz: Some(f),
                material: Some(material),
                cross_pol_mean_db: cross,
                xpd_db: xpd,
                margin_db: depolarization_margin(cross, xpd),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(render(format, &out))
}

fn budget(format: Format, refl_db: f64, part_db: f64) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        reflected: f64,
        transmitted: f64,
        absorbed: f64,
        absorption_loss_db: f64,
    }
    let b = power_budget(refl_db, part_db)?;
    let out = Out {
        reflected: b.reflected,
        transmitted: b.transmitted,
        absorbed: b.absorbed,
        absorption_loss_db: b.absorption_loss_db(),
    };
    Ok(render(format, &out))
}

fn ci_eval(format: Format, freq: f64, distance: f64, ple: Option<f64>, env: Option<CiEnvironment>) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        frequency_hz: f64,
        distance_m: f64,
        ple: f64,
        sigma_db: f64,
        path_loss_db: f64,
    }
    let tabulated = env
        .map(|e| {
            paper_dataset()
                .ci_fit(freq, e)
                .ok_or_else(|| invalid("frequency", format!("no embedded {} fit at {freq} Hz", e.as_str())))
        })
        .transpose()?;
    let ple = match (ple, tabulated) {
        (Some(n), _) => n,
        (None, Some(t)) => t.ple,
        (None, None) => unreachable!("clap requires --ple or --env"),
    };
    let model = CiModel::new(freq, ple, tabulated.map_or(0.0, |t| t.sigma_db))?;
    let out = Out {
        frequency_hz: freq,
        distance_m: distance,
        ple,
        sigma_db: model.sigma_db,
        path_loss_db: model.path_loss_db(distance)?,
    };
    Ok(render(format, &out))
}

#[derive(Serialize)]
struct FitRow {
    environment: &'static str,
    frequency_hz: f64,
    ple: f64,
    sigma_db: f64,
    n_samples: usize,
}

impl FitRow {
    fn new(environment: &'static str, fit: CiFit) -> Self {
        FitRow {
            environment,
            frequency_hz: fit.model.frequency_hz,
            ple: fit.model.ple,
            sigma_db: fit.model.sigma_db,
            n_samples: fit.n_samples,
        }
    }
}

fn fit_ci_command(format: Format, samples: &[PathLossSample], freq: Option<f64>, env: Option<&str>) -> Outcome {
    let freq = match freq.or_else(|| samples.first().map(|s| s.frequency_hz)) {
        Some(f) => f,
        None => return Err(Error::TooFewSamples { required: 2, got: 0 }.into()),
    };
    let rows = match env {
        None => fit_directional(samples, freq)?
            .into_iter()
            .map(|(e, fit)| FitRow::new(e.as_str(), fit))
            .collect(),
        Some(e) if e.eq_ignore_ascii_case("all") => vec![FitRow::new("ALL", fit_ci(samples, freq)?)],
        Some(e) => {
            let env = CiEnvironment::parse(e).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown environment {e:?}; expected LOS, NLOS_BEST, NLOS or ALL"
                ))
            })?;
            let reduction = reduce_directional(samples);
            vec![FitRow::new(env.as_str(), fit_ci(reduction.subset(env), freq)?)]
        }
    };
    Ok(render(format, &rows))
}

#[derive(Serialize)]
struct Permittivities {
    frequency_hz: f64,
    eps_r: f64,
}

#[derive(Serialize)]
struct Tables {
    sounders: &'static [SounderSpec],
    reflection: &'static [ReflectionSample],
    partition: &'static [PartitionRecord],
    ci_fits: &'static [CiFitRecord],
    drywall_permittivity: Vec<Permittivities>,
}

fn tables() -> Tables {
    let d = paper_dataset();
    Tables {
        sounders: d.sounders,
        reflection: d.reflection,
        partition: d.partition,
        ci_fits: d.ci_fits,
        drywall_permittivity: d
            .drywall_permittivity
            .iter()
            .map(|&(frequency_hz, eps_r)| Permittivities { frequency_hz, eps_r })
            .collect(),
    }
}
