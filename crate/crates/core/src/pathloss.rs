//! Free-space and close-in (CI) path loss.
//!
//! The CI model anchors the mean path loss to free space at d₀ = 1 m and
//! leaves one free parameter, the path loss exponent n:
//!
//! PL(d) = FSPL(f, 1 m) + 10·n·log10(d),  d ≥ 1 m
//!
//! Shadow fading σ is the RMS of the dB residuals around that line.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::datasets::{same_frequency, CiEnvironment, Environment, PathLossSample};
use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// CI reference distance in metres.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// Friis free-space path loss between isotropic antennas, `20·log10(4πdf/c)`.
pub fn fspl_db(frequency_hz: f64, distance_m: f64) -> f64 {
    debug_assert!(frequency_hz > 0.0 && distance_m > 0.0);
    20.0 * (4.0 * PI * distance_m * frequency_hz / SPEED_OF_LIGHT).log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiModel {
    pub frequency_hz: f64,
    pub ple: f64,
    pub sigma_db: f64,
}

impl CiModel {
    pub fn new(frequency_hz: f64, ple: f64, sigma_db: f64) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::invalid("frequency", "must be positive"));
        }
        if !(ple.is_finite() && ple > 0.0) {
            return Err(Error::invalid("ple", "must be positive"));
        }
        if !(sigma_db.is_finite() && sigma_db >= 0.0) {
            return Err(Error::invalid("sigma_db", "must be non-negative"));
        }
        Ok(CiModel {
            frequency_hz,
            ple,
            sigma_db,
        })
    }

    pub fn reference_distance_m(&self) -> f64 {
        REFERENCE_DISTANCE_M
    }

    /// Mean path loss at `distance_m`; shadow fading is not added.
    pub fn path_loss_db(&self, distance_m: f64) -> Result<f64> {
        ci_path_loss_db(self, distance_m)
    }
}

pub fn ci_path_loss_db(model: &CiModel, distance_m: f64) -> Result<f64> {
    if !(distance_m >= REFERENCE_DISTANCE_M) {
        return Err(Error::BelowReferenceDistance { distance_m });
    }
    Ok(fspl_db(model.frequency_hz, REFERENCE_DISTANCE_M) + 10.0 * model.ple * distance_m.log10())
}

/// Running sums for the anchored least-squares fit.
///
/// Accumulators built over disjoint chunks can be [`merge`](Self::merge)d in
/// any order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CiAccumulator {
    count: usize,
    sum_ab: f64,
    sum_bb: f64,
    sum_aa: f64,
}

impl CiAccumulator {
    /// `excess_db` is PL − FSPL(1 m), `log_distance` is 10·log10(d).
    pub fn push(&mut self, excess_db: f64, log_distance: f64) {
        self.count += 1;
        self.sum_ab += excess_db * log_distance;
        self.sum_bb += log_distance * log_distance;
        self.sum_aa += excess_db * excess_db;
    }

    pub fn merge(self, other: Self) -> Self {
        CiAccumulator {
            count: self.count + other.count,
            sum_ab: self.sum_ab + other.sum_ab,
            sum_bb: self.sum_bb + other.sum_bb,
            sum_aa: self.sum_aa + other.sum_aa,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// The exponent n = ΣAB / ΣB².
    pub fn ple(&self) -> Result<f64> {
        if self.count < 2 {
            return Err(Error::TooFewSamples {
                required: 2,
                got: self.count,
            });
        }
        if self.sum_bb <= 0.0 {
            return Err(Error::AllAtReferenceDistance);
        }
        Ok(self.sum_ab / self.sum_bb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiFit {
    pub model: CiModel,
    pub n_samples: usize,
}

fn check_fit_input(samples: &[PathLossSample], frequency_hz: f64) -> Result<()> {
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(Error::invalid("frequency", "must be positive"));
    }
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: samples.len(),
        });
    }
    for s in samples {
        if !same_frequency(s.frequency_hz, frequency_hz) {
            return Err(Error::MixedFrequencies {
                first: frequency_hz,
                other: s.frequency_hz,
            });
        }
        if !(s.distance_m >= REFERENCE_DISTANCE_M) {
            return Err(Error::BelowReferenceDistance {
                distance_m: s.distance_m,
            });
        }
    }
    Ok(())
}

/// Fits a CI model through the 1 m free-space anchor.
///
/// σ is the biased RMS residual (divided by N); `n_samples` is reported so an
/// unbiased figure can be recovered.
pub fn fit_ci(samples: &[PathLossSample], frequency_hz: f64) -> Result<CiFit> {
    check_fit_input(samples, frequency_hz)?;
    let anchor = fspl_db(frequency_hz, REFERENCE_DISTANCE_M);
    let mut acc = CiAccumulator::default();
    for s in samples {
        acc.push(s.path_loss_db - anchor, 10.0 * s.distance_m.log10());
    }
    let ple = acc.ple()?;
    // second pass for the residuals; the sum-of-squares shortcut cancels badly
    let sse: f64 = samples
        .iter()
        .map(|s| {
            let r = s.path_loss_db - anchor - ple * 10.0 * s.distance_m.log10();
            r * r
        })
        .sum();
    let sigma_db = (sse / samples.len() as f64).sqrt();
    Ok(CiFit {
        model: CiModel {
            frequency_hz,
            ple,
            sigma_db,
        },
        n_samples: samples.len(),
    })
}

/// LOS, all-NLOS and best-NLOS subsets of a directional sweep.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DirectionalReduction {
    pub los: Vec<PathLossSample>,
    pub nlos_all: Vec<PathLossSample>,
    /// One entry per NLOS (tx_id, rx_id) pair, sorted by that pair.
    pub nlos_best: Vec<PathLossSample>,
}

impl DirectionalReduction {
    pub fn subset(&self, env: CiEnvironment) -> &[PathLossSample] {
        match env {
            CiEnvironment::Los => &self.los,
            CiEnvironment::NlosBest => &self.nlos_best,
            CiEnvironment::Nlos => &self.nlos_all,
        }
    }
}

/// Splits samples by environment and keeps, per NLOS location pair, the
/// pointing combination with the lowest path loss. Ties go to the lowest
/// (tx_az, rx_az).
pub fn reduce_directional(samples: &[PathLossSample]) -> DirectionalReduction {
    let mut out = DirectionalReduction::default();
    let mut best: BTreeMap<(&str, &str), &PathLossSample> = BTreeMap::new();
    for s in samples {
        match s.environment {
            Environment::Los => out.los.push(s.clone()),
            Environment::Nlos => {
                out.nlos_all.push(s.clone());
                best.entry((&s.tx_id, &s.rx_id))
                    .and_modify(|cur| {
                        let better = s
                            .path_loss_db
                            .total_cmp(&cur.path_loss_db)
                            .then(s.tx_az_deg.total_cmp(&cur.tx_az_deg))
                            .then(s.rx_az_deg.total_cmp(&cur.rx_az_deg))
                            .is_lt();
                        if better {
                            *cur = s;
                        }
                    })
                    .or_insert(s);
            }
        }
    }
    out.nlos_best = best.into_values().cloned().collect();
    out
}

/// Fits every non-empty subset of a directional sweep.
pub fn fit_directional(samples: &[PathLossSample], frequency_hz: f64) -> Result<Vec<(CiEnvironment, CiFit)>> {
    let reduction = reduce_directional(samples);
    CiEnvironment::ALL
        .into_iter()
        .filter(|env| !reduction.subset(*env).is_empty())
        .map(|env| fit_ci(reduction.subset(env), frequency_hz).map(|fit| (env, fit)))
        .collect()
}
