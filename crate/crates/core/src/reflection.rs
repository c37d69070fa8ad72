//! Perpendicular-polarization Fresnel reflection off a lossless dielectric
//! half-space, and two ways of fitting measured reflection losses:
//!
//! * a minimum mean square error estimate of the relative permittivity,
//!   matching the Fresnel |Γ⊥|² curve to the measured power reflectivity;
//! * an empirical straight line of |Γ⊥| against the incident angle in degrees.
//!
//! Γ⊥ = (cos θ − √(ε_r − sin²θ)) / (cos θ + √(ε_r − sin²θ)), θ measured from
//! the surface normal. Only the perpendicular (TE, E-field normal to the plane
//! of incidence) coefficient is provided.

use serde::Serialize;

use crate::datasets::{same_frequency, ReflectionSample};
use crate::error::{Error, Result};

/// Real relative permittivity, ε_r ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Permittivity(f64);

impl Permittivity {
    pub fn new(eps_r: f64) -> Result<Self> {
        if eps_r.is_finite() && eps_r >= 1.0 {
            Ok(Permittivity(eps_r))
        } else {
            Err(Error::invalid("permittivity", format!("{eps_r} is not >= 1")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Incident angle from the surface normal, in [0°, 90°).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct IncidentAngle(pub(crate) f64);

impl IncidentAngle {
    pub fn from_degrees(deg: f64) -> Result<Self> {
        if (0.0..90.0).contains(&deg) {
            Ok(IncidentAngle(deg))
        } else {
            Err(Error::invalid(
                "incident angle",
                format!("{deg} deg is outside [0, 90)"),
            ))
        }
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0.to_radians()
    }
}

/// Signed Γ⊥. Always in (-1, 0] for ε_r ≥ 1.
pub fn fresnel_gamma_perp(theta: IncidentAngle, eps: Permittivity) -> f64 {
    let (sin, cos) = theta.radians().sin_cos();
    // ε_r ≥ 1 ≥ sin²θ keeps the root real
    let root = (eps.value() - sin * sin).max(0.0).sqrt();
    (cos - root) / (cos + root)
}

/// |Γ⊥|² for a raw angle in degrees; used by the fitting loops.
fn power_reflectivity(theta_deg: f64, eps_r: f64) -> f64 {
    let (sin, cos) = theta_deg.to_radians().sin_cos();
    let root = (eps_r - sin * sin).max(0.0).sqrt();
    let g = (cos - root) / (cos + root);
    g * g
}

/// Reflection loss `-20·log10|Γ⊥|` in dB.
pub fn reflection_loss_db(theta: IncidentAngle, eps: Permittivity) -> Result<f64> {
    let g = fresnel_gamma_perp(theta, eps).abs();
    if g <= f64::EPSILON {
        return Err(Error::PerfectTransmission);
    }
    Ok(-20.0 * g.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PermittivityEstimate {
    pub eps_r: f64,
    /// Mean over samples of (|Γ⊥,meas|² − |Γ⊥,model|²)².
    pub mse: f64,
    pub samples_used: usize,
}

impl PermittivityEstimate {
    pub fn permittivity(&self) -> Permittivity {
        Permittivity(self.eps_r)
    }
}

/// Search interval for the permittivity estimate.
pub const EPS_SEARCH_MIN: f64 = 1.0;
pub const EPS_SEARCH_MAX: f64 = 30.0;
const BRACKET_GRID_POINTS: usize = 300;
const GOLDEN_TOLERANCE: f64 = 1e-10;

fn check_single_frequency(samples: &[ReflectionSample]) -> Result<()> {
    let first = samples[0].frequency_hz;
    if let Some(other) = samples
        .iter()
        .map(|s| s.frequency_hz)
        .find(|&f| !same_frequency(f, first))
    {
        return Err(Error::MixedFrequencies { first, other });
    }
    Ok(())
}

fn validate_samples(samples: &[ReflectionSample], required: usize) -> Result<()> {
    if samples.len() < required {
        return Err(Error::TooFewSamples {
            required,
            got: samples.len(),
        });
    }
    for s in samples {
        s.check()
            .map_err(|reason| Error::invalid("reflection sample", reason))?;
    }
    check_single_frequency(samples)
}

/// Sum of squared |Γ⊥|² residuals at a trial permittivity.
pub fn mmse_objective(samples: &[ReflectionSample], eps_r: f64) -> f64 {
    samples
        .iter()
        .map(|s| {
            let r = s.power_reflectivity() - power_reflectivity(s.incident_angle_deg, eps_r);
            r * r
        })
        .sum()
}

/// Minimum mean square error estimate of ε_r over [1, 30].
///
/// The objective is sampled on a uniform grid, the best grid point's
/// neighbours form the bracket, and a golden-section search refines it.
pub fn estimate_permittivity_mmse(samples: &[ReflectionSample]) -> Result<PermittivityEstimate> {
    validate_samples(samples, 2)?;
    let objective = |eps: f64| mmse_objective(samples, eps);

    let step = (EPS_SEARCH_MAX - EPS_SEARCH_MIN) / (BRACKET_GRID_POINTS - 1) as f64;
    let grid = |i: usize| EPS_SEARCH_MIN + step * i as f64;
    let best = (0..BRACKET_GRID_POINTS)
        .map(|i| (i, objective(grid(i))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let lo = grid(best.saturating_sub(1));
    let hi = grid((best + 1).min(BRACKET_GRID_POINTS - 1));

    let (eps_r, value) = golden_section(objective, lo, hi, GOLDEN_TOLERANCE);
    Ok(PermittivityEstimate {
        eps_r,
        mse: value / samples.len() as f64,
        samples_used: samples.len(),
    })
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
/// Returns the best abscissa seen and its value.
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let candidates = [(a, f(a)), (b, f(b)), (c, fc), (d, fd)];
    candidates
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("four candidates")
}

/// |Γ⊥|(θ) = slope·θ_deg + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearReflectionFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearReflectionFit {
    /// Fitted |Γ⊥|, clamped to the physical range [0, 1].
    pub fn evaluate(&self, incident_angle_deg: f64) -> f64 {
        (self.slope * incident_angle_deg + self.intercept).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFitResult {
    pub fit: LinearReflectionFit,
    pub rmse: f64,
    pub samples_used: usize,
}

/// Ordinary least squares of measured |Γ⊥| against the incident angle in degrees.
pub fn fit_linear_reflection(samples: &[ReflectionSample]) -> Result<LinearFitResult> {
    validate_samples(samples, 2)?;
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.incident_angle_deg).sum::<f64>() / n;
    let mean_y = samples.iter().map(ReflectionSample::gamma_magnitude).sum::<f64>() / n;
    let (sxx, sxy) = samples.iter().fold((0.0, 0.0), |(sxx, sxy), s| {
        let dx = s.incident_angle_deg - mean_x;
        (sxx + dx * dx, sxy + dx * (s.gamma_magnitude() - mean_y))
    });
    if sxx <= f64::EPSILON * mean_x.abs().max(1.0) {
        return Err(Error::DegenerateAngles);
    }
    let slope = sxy / sxx;
    let fit = LinearReflectionFit {
        slope,
        intercept: mean_y - slope * mean_x,
    };
    let sse: f64 = samples
        .iter()
        .map(|s| {
            let r = s.gamma_magnitude() - (fit.slope * s.incident_angle_deg + fit.intercept);
            r * r
        })
        .sum();
    Ok(LinearFitResult {
        fit,
        rmse: (sse / n).sqrt(),
        samples_used: samples.len(),
    })
}
