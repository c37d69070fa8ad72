//! Specular reflection plus dual-lobe directive scattering off a flat wall,
//! and the backscatter-based smoothness test.
//!
//! # Model
//!
//! Directions live in the wall frame: `z` is the surface normal and `x` lies
//! in the plane of incidence, pointing away from the source. Observation
//! angles are signed from the normal, so the source side is negative and the
//! specular direction is `+θ_i`. The measurement arc (10° to 170° measured
//! from the wall on the source side) maps to `arc − 90°`.
//!
//! The scattered radiation pattern mixes two lobes of the form
//! `((1 + cos ψ)/2)^α`: a forward lobe around the specular direction weighted
//! by Λ and a back lobe around the incident direction weighted by 1 − Λ. The
//! pattern is divided by its integral `F` over the hemisphere, so the power
//! scattered by an area `A` is `S²·cos θ_i·A` times the incident power
//! density.
//!
//! Received power, relative to the free-space power at 1 m:
//!
//! * specular: `|Γ⊥|²·G(a_rx)·G(a_img) / D²`, where `D` is the distance from
//!   the receiver to the image of the transmitter and `a_rx`, `a_img` are the
//!   off-boresight angles of that path at the receiver and at the image;
//!   `G` is a Gaussian main lobe with the given half-power beamwidth;
//! * scattered: `S²·cos θ_i·A·pattern/F / (d_tx²·d_rx²)` with `A` the wall
//!   area inside the two-way half-power footprint of the antennas.
//!
//! The two add in power.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::HemisphereRule;
use crate::reflection::{fresnel_gamma_perp, IncidentAngle, Permittivity};

/// Quadrature resolution used for the lobe normalization.
pub const NORMALIZATION_POLAR_NODES: usize = 64;
pub const NORMALIZATION_AZIMUTH_NODES: usize = 128;

/// Backscatter must sit more than this far below the peak for a smooth surface.
pub const BACKSCATTER_THRESHOLD_DB: f64 = 20.0;
/// Half-width of the window around the specular angle.
pub const SPECULAR_WINDOW_DEG: f64 = 10.0;
/// Largest drop below the peak allowed inside the specular window.
pub const SPECULAR_WINDOW_DROP_DB: f64 = 10.0;

const ANGLE_MATCH_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsParameters {
    /// Scattering coefficient S.
    pub s_coeff: f64,
    /// Forward-lobe weight Λ.
    pub lambda_mix: f64,
    /// Forward-lobe exponent.
    pub alpha_r: u32,
    /// Back-lobe exponent.
    pub alpha_i: u32,
}

impl Default for DsParameters {
    fn default() -> Self {
        DsParameters {
            s_coeff: 0.4,
            lambda_mix: 0.9,
            alpha_r: 4,
            alpha_i: 4,
        }
    }
}

impl DsParameters {
    pub fn new(s_coeff: f64, lambda_mix: f64, alpha_r: u32, alpha_i: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&s_coeff) {
            return Err(Error::invalid(
                "scattering coefficient",
                format!("{s_coeff} not in [0, 1]"),
            ));
        }
        if !(0.0..=1.0).contains(&lambda_mix) {
            return Err(Error::invalid("lobe weight", format!("{lambda_mix} not in [0, 1]")));
        }
        if alpha_r == 0 || alpha_i == 0 {
            return Err(Error::invalid("lobe exponent", "must be at least 1"));
        }
        Ok(DsParameters {
            s_coeff,
            lambda_mix,
            alpha_r,
            alpha_i,
        })
    }
}

/// `((1 + cos ψ)/2)^α` for ψ in degrees.
pub fn ds_lobe_gain(psi_deg: f64, alpha: u32) -> f64 {
    lobe_from_cos(psi_deg.to_radians().cos(), alpha)
}

fn lobe_from_cos(cos_psi: f64, alpha: u32) -> f64 {
    (((1.0 + cos_psi) / 2.0).clamp(0.0, 1.0)).powi(alpha as i32)
}

/// Unit vector in the plane of incidence at a signed angle from the normal.
pub fn in_plane_direction(angle_deg: f64) -> [f64; 3] {
    let (s, c) = angle_deg.to_radians().sin_cos();
    [s, 0.0, c]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Un-normalized dual-lobe pattern for one incidence angle.
#[derive(Debug, Clone, Copy)]
pub struct DualLobe {
    params: DsParameters,
    specular: [f64; 3],
    backward: [f64; 3],
}

impl DualLobe {
    pub fn new(params: DsParameters, incident_angle_deg: f64) -> Self {
        DualLobe {
            params,
            specular: in_plane_direction(incident_angle_deg),
            backward: in_plane_direction(-incident_angle_deg),
        }
    }

    pub fn value(&self, direction: [f64; 3]) -> f64 {
        let p = &self.params;
        p.lambda_mix * lobe_from_cos(dot(direction, self.specular), p.alpha_r)
            + (1.0 - p.lambda_mix) * lobe_from_cos(dot(direction, self.backward), p.alpha_i)
    }

    pub fn value_in_plane(&self, observation_angle_deg: f64) -> f64 {
        self.value(in_plane_direction(observation_angle_deg))
    }
}

/// Hemispherical integral `F` of the dual-lobe pattern, so that `pattern/F`
/// integrates to one.
pub fn ds_normalization(params: &DsParameters, theta_i: IncidentAngle) -> f64 {
    ds_normalization_with(
        params,
        theta_i,
        &HemisphereRule::new(NORMALIZATION_POLAR_NODES, NORMALIZATION_AZIMUTH_NODES),
    )
}

pub fn ds_normalization_with(params: &DsParameters, theta_i: IncidentAngle, rule: &HemisphereRule) -> f64 {
    let lobe = DualLobe::new(*params, theta_i.degrees());
    rule.integrate(|d| lobe.value(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterGeometry {
    pub incident_angle_deg: f64,
    pub tx_distance_m: f64,
    pub rx_distance_m: f64,
}

impl ScatterGeometry {
    pub fn new(incident_angle_deg: f64, tx_distance_m: f64, rx_distance_m: f64) -> Result<Self> {
        IncidentAngle::from_degrees(incident_angle_deg)?;
        for (name, d) in [("tx distance", tx_distance_m), ("rx distance", rx_distance_m)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        Ok(ScatterGeometry {
            incident_angle_deg,
            tx_distance_m,
            rx_distance_m,
        })
    }

    /// Both antennas on a 1.5 m arc around the illuminated spot.
    pub fn on_measurement_arc(incident_angle_deg: f64) -> Result<Self> {
        Self::new(incident_angle_deg, 1.5, 1.5)
    }

    pub fn incident_angle(&self) -> IncidentAngle {
        IncidentAngle(self.incident_angle_deg)
    }
}

/// Observation angles covered by the rotating receiver: arc positions 10° to
/// 170° in 10° steps, as signed angles from the normal.
pub fn measurement_arc() -> Vec<f64> {
    (1..=17).map(|k| arc_to_observation_deg(10.0 * k as f64)).collect()
}

/// Arc position (degrees from the wall on the source side) to signed angle
/// from the normal.
pub fn arc_to_observation_deg(arc_deg: f64) -> f64 {
    arc_deg - 90.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPatternPoint {
    pub observation_angle_deg: f64,
    pub relative_power_db: f64,
}

/// Linear received power split by mechanism, relative to free space at 1 m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReceivedPower {
    pub specular: f64,
    pub scattered: f64,
}

impl ReceivedPower {
    pub fn total(&self) -> f64 {
        self.specular + self.scattered
    }
}

/// Gaussian main lobe, unit gain on boresight, half power at `hpbw/2`.
pub fn gaussian_main_lobe(off_boresight_rad: f64, hpbw_rad: f64) -> f64 {
    let x = off_boresight_rad / hpbw_rad;
    (-4.0 * LN_2 * x * x).exp()
}

/// Solid angle inside which the product of two identical Gaussian beams stays
/// above half power.
pub fn two_way_footprint_solid_angle(hpbw_rad: f64) -> f64 {
    PI * hpbw_rad * hpbw_rad / 8.0
}

/// A wall, an antenna pair and a set of directive-scattering parameters.
#[derive(Debug, Clone)]
pub struct ScatterModel {
    geometry: ScatterGeometry,
    params: DsParameters,
    hpbw_rad: f64,
    gamma_sq: f64,
    lobe: DualLobe,
    normalization: f64,
}

impl ScatterModel {
    pub fn new(
        geometry: ScatterGeometry,
        permittivity: Permittivity,
        params: DsParameters,
        antenna_hpbw_deg: f64,
    ) -> Result<Self> {
        if !(antenna_hpbw_deg > 0.0 && antenna_hpbw_deg < 180.0) {
            return Err(Error::invalid("antenna hpbw", "must lie in (0, 180) deg"));
        }
        let theta_i = geometry.incident_angle();
        let gamma = fresnel_gamma_perp(theta_i, permittivity);
        Ok(ScatterModel {
            geometry,
            params,
            hpbw_rad: antenna_hpbw_deg.to_radians(),
            gamma_sq: gamma * gamma,
            lobe: DualLobe::new(params, theta_i.degrees()),
            normalization: ds_normalization(&params, theta_i),
        })
    }

    pub fn geometry(&self) -> &ScatterGeometry {
        &self.geometry
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// |Γ⊥|² at the incidence angle.
    pub fn power_reflectivity(&self) -> f64 {
        self.gamma_sq
    }

    fn cos_incidence(&self) -> f64 {
        self.geometry.incident_angle_deg.to_radians().cos()
    }

    /// Wall area inside the two-way half-power footprint. The footprint is
    /// stretched along the plane of incidence by 1/cos θ_i.
    pub fn illuminated_area_m2(&self) -> f64 {
        let g = &self.geometry;
        two_way_footprint_solid_angle(self.hpbw_rad) * g.tx_distance_m * g.rx_distance_m / self.cos_incidence()
    }

    /// Scattered intensity per unit solid angle in `direction`, per unit
    /// illuminated area and unit incident power density.
    pub fn scattered_intensity(&self, direction: [f64; 3]) -> f64 {
        let s = self.params.s_coeff;
        s * s * self.cos_incidence() * self.lobe.value(direction) / self.normalization
    }

    pub fn received_power(&self, observation_angle_deg: f64) -> ReceivedPower {
        let g = &self.geometry;
        let (dt, dr) = (g.tx_distance_m, g.rx_distance_m);
        let delta = (observation_angle_deg - g.incident_angle_deg).to_radians().abs();
        let (sin_d, cos_d) = delta.sin_cos();
        let image_distance_sq = dt * dt + dr * dr + 2.0 * dt * dr * cos_d;
        let off_rx = (dt * sin_d).atan2(dr + dt * cos_d);
        let off_tx = (dr * sin_d).atan2(dt + dr * cos_d);
        let specular =
            self.gamma_sq * gaussian_main_lobe(off_rx, self.hpbw_rad) * gaussian_main_lobe(off_tx, self.hpbw_rad)
                / image_distance_sq;

        let scattered = self.scattered_intensity(in_plane_direction(observation_angle_deg))
            * self.illuminated_area_m2()
            / (dt * dt * dr * dr);
        ReceivedPower { specular, scattered }
    }

    /// Total received power at the specular angle in dB relative to free space at 1 m.
    pub fn peak_power_db(&self) -> f64 {
        10.0 * self.received_power(self.geometry.incident_angle_deg).total().log10()
    }

    /// Pattern over the given observation angles, normalized so the strongest
    /// point is 0 dB. The sweep must contain the specular angle.
    pub fn predict_pattern(&self, observation_angles_deg: &[f64]) -> Result<Vec<ScatterPatternPoint>> {
        if observation_angles_deg.len() < 2 {
            return Err(Error::TooFewSamples {
                required: 2,
                got: observation_angles_deg.len(),
            });
        }
        if let Some(&bad) = observation_angles_deg.iter().find(|a| !(a.abs() < 90.0)) {
            return Err(Error::invalid(
                "observation angle",
                format!("{bad} deg is outside (-90, 90)"),
            ));
        }
        let specular = self.geometry.incident_angle_deg;
        if !observation_angles_deg
            .iter()
            .any(|a| (a - specular).abs() <= ANGLE_MATCH_DEG)
        {
            return Err(Error::MissingSpecularAngle { specular_deg: specular });
        }
        let power: Vec<f64> = observation_angles_deg
            .iter()
            .map(|&a| self.received_power(a).total())
            .collect();
        let peak = power.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
        Ok(observation_angles_deg
            .iter()
            .zip(power)
            .map(|(&observation_angle_deg, p)| ScatterPatternPoint {
                observation_angle_deg,
                relative_power_db: 10.0 * (p / peak).log10(),
            })
            .collect())
    }
}

/// Convenience wrapper around [`ScatterModel::predict_pattern`].
pub fn predict_pattern(
    geometry: ScatterGeometry,
    observation_angles_deg: &[f64],
    permittivity: Permittivity,
    params: DsParameters,
    antenna_hpbw_deg: f64,
) -> Result<Vec<ScatterPatternPoint>> {
    ScatterModel::new(geometry, permittivity, params, antenna_hpbw_deg)?.predict_pattern(observation_angles_deg)
}

fn peak(pattern: &[ScatterPatternPoint]) -> Result<&ScatterPatternPoint> {
    pattern
        .iter()
        .max_by(|a, b| a.relative_power_db.total_cmp(&b.relative_power_db))
        .ok_or(Error::TooFewSamples { required: 1, got: 0 })
}

/// Peak power minus the strongest point on the source side of the normal
/// (negative observation angles).
pub fn backscatter_margin(pattern: &[ScatterPatternPoint]) -> Result<f64> {
    let top = peak(pattern)?.relative_power_db;
    let has_forward = pattern.iter().any(|p| p.observation_angle_deg > 0.0);
    let back = pattern
        .iter()
        .filter(|p| p.observation_angle_deg < 0.0)
        .map(|p| p.relative_power_db)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    match back {
        Some(back) if has_forward => Ok((top - back).max(0.0)),
        _ => Err(Error::OneSidedPattern),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub peak_angle_deg: f64,
    pub backscatter_margin_db: f64,
    /// Weakest point within ±10° of the specular angle, dB relative to the peak.
    pub window_min_db: f64,
    pub smooth: bool,
}

/// A surface is smooth when backscatter stays more than 20 dB under the peak
/// and every point within ±10° of the specular angle stays within 10 dB of it.
pub fn classify_smooth(pattern: &[ScatterPatternPoint], theta_i: IncidentAngle) -> Result<SmoothnessReport> {
    let margin = backscatter_margin(pattern)?;
    let top = peak(pattern)?;
    let specular = theta_i.degrees();
    let window_min_db = pattern
        .iter()
        .filter(|p| (p.observation_angle_deg - specular).abs() <= SPECULAR_WINDOW_DEG + ANGLE_MATCH_DEG)
        .map(|p| p.relative_power_db - top.relative_power_db)
        .fold(0.0, f64::min);
    Ok(SmoothnessReport {
        peak_angle_deg: top.observation_angle_deg,
        backscatter_margin_db: margin,
        window_min_db,
        smooth: margin > BACKSCATTER_THRESHOLD_DB && window_min_db >= -SPECULAR_WINDOW_DROP_DB,
    })
}
