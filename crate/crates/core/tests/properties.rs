use indoor_channel::datasets::{
    read_path_loss_csv, write_path_loss_csv, Environment, PathLossSample, Polarization, ReflectionSample,
};
use indoor_channel::partition::{partition_loss, power_budget, xpd_from_path_losses, LinkPowerMeasurement};
use indoor_channel::pathloss::{ci_path_loss_db, fit_ci, fspl_db, CiModel};
use indoor_channel::reflection::{estimate_permittivity_mmse, fresnel_gamma_perp, IncidentAngle, Permittivity};
use indoor_channel::scattering::{measurement_arc, DsParameters, ScatterGeometry, ScatterModel};
use proptest::prelude::*;

fn angle(d: f64) -> IncidentAngle {
    IncidentAngle::from_degrees(d).unwrap()
}

fn eps(e: f64) -> Permittivity {
    Permittivity::new(e).unwrap()
}

fn pl_sample(d: f64, pl: f64, tag: usize) -> PathLossSample {
    PathLossSample {
        frequency_hz: 73e9,
        tx_id: format!("TX{}", tag % 3),
        rx_id: format!("RX{tag}"),
        distance_m: d,
        environment: if tag.is_multiple_of(2) {
            Environment::Los
        } else {
            Environment::Nlos
        },
        tx_az_deg: (tag * 8 % 360) as f64,
        tx_el_deg: -8.0,
        rx_az_deg: 16.0,
        rx_el_deg: 8.0,
        tx_pol: Polarization::Vertical,
        rx_pol: if tag.is_multiple_of(3) {
            Polarization::Horizontal
        } else {
            Polarization::Vertical
        },
        path_loss_db: pl,
    }
}

proptest! {
    #[test]
    fn gamma_grows_toward_grazing(e in 1.0f64..40.0, a in 0.0f64..89.0, step in 0.0f64..1.0) {
        let b = a + step * (89.9 - a);
        let ga = fresnel_gamma_perp(angle(a), eps(e)).abs();
        let gb = fresnel_gamma_perp(angle(b), eps(e)).abs();
        prop_assert!(gb >= ga - 1e-12);
        prop_assert!((0.0..=1.0).contains(&ga));
    }

    #[test]
    fn gamma_grows_with_permittivity(t in 0.0f64..89.9, e in 1.0f64..40.0, de in 0.0f64..20.0) {
        let g1 = fresnel_gamma_perp(angle(t), eps(e)).abs();
        let g2 = fresnel_gamma_perp(angle(t), eps(e + de)).abs();
        prop_assert!(g2 >= g1 - 1e-12);
    }

    #[test]
    fn mmse_round_trip(e in 1.5f64..20.0) {
        let samples: Vec<_> = [10.0, 30.0, 60.0, 80.0]
            .iter()
            .map(|&t| {
                let g = fresnel_gamma_perp(angle(t), eps(e)).abs();
                ReflectionSample::new(28e9, t, -20.0 * g.log10()).unwrap()
            })
            .collect();
        let est = estimate_permittivity_mmse(&samples).unwrap();
        prop_assert!((est.eps_r - e).abs() <= 1e-3, "{} vs {}", est.eps_r, e);
    }

    #[test]
    fn ci_fit_ignores_order(points in prop::collection::vec((1.0f64..200.0, 60.0f64..160.0), 2..40), seed in any::<u64>()) {
        let samples: Vec<_> = points.iter().enumerate().map(|(i, &(d, pl))| pl_sample(d, pl, i)).collect();
        prop_assume!(samples.iter().any(|s| s.distance_m > 1.0));
        let mut shuffled = samples.clone();
        let n = shuffled.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = fit_ci(&samples, 73e9).unwrap();
        let b = fit_ci(&shuffled, 73e9).unwrap();
        prop_assert!((a.model.ple - b.model.ple).abs() <= 1e-9 * a.model.ple.abs().max(1.0));
        prop_assert!((a.model.sigma_db - b.model.sigma_db).abs() <= 1e-9 * a.model.sigma_db.max(1.0));
    }

    #[test]
    fn ci_sigma_is_rms_residual(points in prop::collection::vec((1.0f64..200.0, 60.0f64..160.0), 2..40)) {
        let samples: Vec<_> = points.iter().enumerate().map(|(i, &(d, pl))| pl_sample(d, pl, i)).collect();
        prop_assume!(samples.iter().any(|s| s.distance_m > 1.0));
        let fit = fit_ci(&samples, 73e9).unwrap();
        prop_assume!(fit.model.ple > 0.0);
        let model = CiModel::new(73e9, fit.model.ple, fit.model.sigma_db).unwrap();
        let ms = samples
            .iter()
            .map(|s| (s.path_loss_db - ci_path_loss_db(&model, s.distance_m).unwrap()).powi(2))
            .sum::<f64>() / samples.len() as f64;
        prop_assert!((ms.sqrt() - fit.model.sigma_db).abs() <= 1e-9);
    }

    #[test]
    fn free_space_exponent(f in 1e9f64..1e12, d in 1.0f64..1e4) {
        let m = CiModel::new(f, 2.0, 0.0).unwrap();
        prop_assert!((ci_path_loss_db(&m, d).unwrap() - fspl_db(f, d)).abs() <= 1e-9);
    }

    #[test]
    fn partition_shifts_with_received_power(pt in -10.0f64..30.0, pr in -120.0f64..-40.0, d in 0.5f64..10.0, x in -20.0f64..20.0) {
        let v = Polarization::Vertical;
        let a = partition_loss(&LinkPowerMeasurement::new(pt, pr, d, 142e9, v, v).unwrap());
        let b = partition_loss(&LinkPowerMeasurement::new(pt, pr + x, d, 142e9, v, v).unwrap());
        prop_assert!((a.loss_db - b.loss_db - x).abs() <= 1e-9);
    }

    #[test]
    fn xpd_translation_invariant(cross in 50.0f64..150.0, co in 50.0f64..150.0, c in -50.0f64..50.0) {
        let a = xpd_from_path_losses(cross, co);
        let b = xpd_from_path_losses(cross + c, co + c);
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn budget_sums_to_one(r in 0.0f64..60.0, p in 0.0f64..60.0) {
        if let Ok(b) = power_budget(r, p) {
            prop_assert!((b.reflected + b.transmitted + b.absorbed - 1.0).abs() <= 1e-9);
            for v in [b.reflected, b.transmitted, b.absorbed] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn path_loss_csv_round_trip(points in prop::collection::vec((1.0f64..1e3, 1.0f64..250.0), 0..20)) {
        let samples: Vec<_> = points.iter().enumerate().map(|(i, &(d, pl))| pl_sample(d, pl, i)).collect();
        let mut buf = Vec::new();
        write_path_loss_csv(&mut buf, &samples).unwrap();
        prop_assert_eq!(read_path_loss_csv(buf.as_slice()).unwrap(), samples);
    }

    #[test]
    fn ids_with_separators_round_trip(tx in "[A-Za-z0-9][A-Za-z0-9 ,\"_;-]{0,10}[A-Za-z0-9]", rx in "[A-Za-z0-9,\"]{1,8}") {
        let mut s = pl_sample(3.0, 90.0, 1);
        s.tx_id = tx;
        s.rx_id = rx;
        let mut buf = Vec::new();
        write_path_loss_csv(&mut buf, std::slice::from_ref(&s)).unwrap();
        prop_assert_eq!(read_path_loss_csv(buf.as_slice()).unwrap(), vec![s]);
    }
}

fn arc_with(theta_i: f64) -> Vec<f64> {
    let mut arc = measurement_arc();
    if !arc.contains(&theta_i) {
        arc.push(theta_i);
    }
    arc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn peak_at_specular_when_forward_lobe_dominates(
        theta_i in 1.0f64..85.0,
        e in 1.5f64..20.0,
        lambda in 0.5f64..=1.0,
        s_frac in 0.0f64..=1.0,
        alpha_r in 1u32..10,
        alpha_i in 1u32..10,
        hpbw in 5.0f64..15.0,
    ) {
        let gamma = fresnel_gamma_perp(angle(theta_i), eps(e)).abs();
        let params = DsParameters::new(s_frac * gamma.min(1.0), lambda, alpha_r, alpha_i).unwrap();
        let model = ScatterModel::new(ScatterGeometry::on_measurement_arc(theta_i).unwrap(), eps(e), params, hpbw).unwrap();
        let pattern = model.predict_pattern(&arc_with(theta_i)).unwrap();
        let top = pattern.iter().max_by(|a, b| a.relative_power_db.total_cmp(&b.relative_power_db)).unwrap();
        prop_assert_eq!(top.observation_angle_deg, theta_i);
    }

    #[test]
    fn pattern_is_scale_invariant_and_reciprocal(
        theta_i in 0.0f64..85.0,
        dt in 0.5f64..5.0,
        dr in 0.5f64..5.0,
        k in 0.1f64..10.0,
        s in 0.0f64..1.0,
    ) {
        let params = DsParameters::new(s, 0.8, 3, 5).unwrap();
        let angles = arc_with(theta_i);
        let run = |a: f64, b: f64| {
            ScatterModel::new(ScatterGeometry::new(theta_i, a, b).unwrap(), eps(5.2), params, 7.0)
                .unwrap()
                .predict_pattern(&angles)
                .unwrap()
        };
        let base = run(dt, dr);
        for other in [run(k * dt, k * dr), run(dr, dt)] {
            for (p, q) in base.iter().zip(&other) {
                prop_assert!((p.relative_power_db - q.relative_power_db).abs() <= 1e-9 * p.relative_power_db.abs().max(1.0));
            }
        }
    }
}
