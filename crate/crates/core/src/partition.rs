//! Partition loss, antenna cross-polarization discrimination and the
//! reflected / transmitted / absorbed split of power incident on a wall.

use serde::Serialize;

use crate::datasets::{PaperDataset, PartitionRecord, Polarization};
use crate::error::{Error, Result};
use crate::pathloss::fspl_db;

/// Received power through the material under test, with antenna gains
/// already removed from `rx_power_dbm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkPowerMeasurement {
    pub tx_power_dbm: f64,
    pub rx_power_dbm: f64,
    pub distance_m: f64,
    pub frequency_hz: f64,
    pub tx_pol: Polarization,
    pub rx_pol: Polarization,
}

impl LinkPowerMeasurement {
    pub fn new(
        tx_power_dbm: f64,
        rx_power_dbm: f64,
        distance_m: f64,
        frequency_hz: f64,
        tx_pol: Polarization,
        rx_pol: Polarization,
    ) -> Result<Self> {
        if !(distance_m.is_finite() && distance_m > 0.0) {
            return Err(Error::invalid("distance", "must be positive"));
        }
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::invalid("frequency", "must be positive"));
        }
        if !(tx_power_dbm.is_finite() && rx_power_dbm.is_finite()) {
            return Err(Error::invalid("power", "must be finite"));
        }
        Ok(LinkPowerMeasurement {
            tx_power_dbm,
            rx_power_dbm,
            distance_m,
            frequency_hz,
            tx_pol,
            rx_pol,
        })
    }

    /// Removes TX and RX antenna gains from a raw received power reading.
    pub fn without_antenna_gains(mut self, tx_gain_dbi: f64, rx_gain_dbi: f64) -> Self {
        self.rx_power_dbm -= tx_gain_dbi + rx_gain_dbi;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionLoss {
    pub loss_db: f64,
    /// More power arrived than free space predicts; kept rather than rejected.
    pub negative: bool,
}

/// L = P_t − P_r(d) − FSPL(d).
pub fn partition_loss(meas: &LinkPowerMeasurement) -> PartitionLoss {
    let loss_db = meas.tx_power_dbm - meas.rx_power_dbm - fspl_db(meas.frequency_hz, meas.distance_m);
    PartitionLoss {
        loss_db,
        negative: loss_db < 0.0,
    }
}

/// XPD as the cross-polarized minus co-polarized path loss at one distance.
pub fn xpd_from_path_losses(pl_cross_db: f64, pl_co_db: f64) -> f64 {
    pl_cross_db - pl_co_db
}

/// Largest per-distance XPD spread still accepted as distance-independent.
pub const XPD_CONSISTENCY_DB: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XpdSummary {
    pub mean_db: f64,
    /// max − min of the per-distance values.
    pub spread_db: f64,
    pub distances: usize,
    pub consistent: bool,
}

/// Per-distance XPD over `(cross, co)` path-loss pairs.
pub fn summarize_xpd(pairs: &[(f64, f64)]) -> Result<XpdSummary> {
    if pairs.is_empty() {
        return Err(Error::TooFewSamples { required: 1, got: 0 });
    }
    let xpd: Vec<f64> = pairs.iter().map(|&(x, c)| xpd_from_path_losses(x, c)).collect();
    let mean_db = xpd.iter().sum::<f64>() / xpd.len() as f64;
    let max = xpd.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xpd.iter().copied().fold(f64::INFINITY, f64::min);
    let spread_db = max - min;
    Ok(XpdSummary {
        mean_db,
        spread_db,
        distances: xpd.len(),
        consistent: spread_db <= XPD_CONSISTENCY_DB,
    })
}

/// Mean of the V-H and H-V partition losses.
pub fn cross_pol_mean_db(vh_db: f64, hv_db: f64) -> f64 {
    (vh_db + hv_db) / 2.0
}

/// Cross-polarized partition loss minus antenna XPD. Negative values mean the
/// material couples power into the orthogonal polarization.
pub fn depolarization_margin(cross_pol_partition_mean_db: f64, xpd_db: f64) -> f64 {
    cross_pol_partition_mean_db - xpd_db
}

/// Depolarization margin for one material and band, from the embedded tables.
pub fn tabulated_depolarization_margin(
    dataset: &PaperDataset,
    material: crate::datasets::Material,
    frequency_hz: f64,
) -> Option<f64> {
    use Polarization::{Horizontal as H, Vertical as V};
    let vh = dataset.partition(material, frequency_hz, V, H)?;
    let hv = dataset.partition(material, frequency_hz, H, V)?;
    let xpd = dataset.xpd_db(frequency_hz)?;
    Some(depolarization_margin(
        cross_pol_mean_db(vh.mean_loss_db, hv.mean_loss_db),
        xpd,
    ))
}

/// Fractions of incident power that are reflected, transmitted and absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBudget {
    pub reflected: f64,
    pub transmitted: f64,
    pub absorbed: f64,
}

impl PowerBudget {
    /// Power lost to absorption as a dB drop, `-10·log10(1 − absorbed)`.
    pub fn absorption_loss_db(&self) -> f64 {
        -10.0 * (self.reflected + self.transmitted).log10()
    }
}

/// Splits incident power given a reflection loss and a partition loss, both
/// non-negative dB. An infinite partition loss means nothing is transmitted.
pub fn power_budget(reflection_loss_db: f64, partition_loss_db: f64) -> Result<PowerBudget> {
    if !(reflection_loss_db >= 0.0) {
        return Err(Error::invalid("reflection loss", "must be non-negative"));
    }
    if !(partition_loss_db >= 0.0) {
        return Err(Error::invalid("partition loss", "must be non-negative"));
    }
    let reflected = 10f64.powf(-reflection_loss_db / 10.0);
    let transmitted = 10f64.powf(-partition_loss_db / 10.0);
    let absorbed = 1.0 - reflected - transmitted;
    if absorbed < 0.0 {
        return Err(Error::OverUnityBudget { reflected, transmitted });
    }
    Ok(PowerBudget {
        reflected,
        transmitted,
        absorbed,
    })
}

/// Budget of a tabulated co-polarized partition record against a reflection loss.
pub fn record_budget(record: &PartitionRecord, reflection_loss_db: f64) -> Result<PowerBudget> {
    power_budget(reflection_loss_db, record.mean_loss_db)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::datasets::{paper_dataset, Material, F142_GHZ, F28_GHZ, F73_GHZ};

    const V: Polarization = Polarization::Vertical;

    #[test]
    fn free_space_has_no_partition() {
        let d = 3.5;
        let m = LinkPowerMeasurement::new(10.0, 10.0 - fspl_db(73e9, d), d, 73e9, V, V).unwrap();
        let l = partition_loss(&m);
        assert_abs_diff_eq!(l.loss_db, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn glass_142ghz_vv_mean() {
        // FSPL(3 m, 142 GHz) = 85.035975... dB, so -95.255975 dBm leaves 10.22 dB
        let m = LinkPowerMeasurement::new(0.0, -95.255_975_203_937_75, 3.0, 142e9, V, V).unwrap();
        assert_abs_diff_eq!(partition_loss(&m).loss_db, 10.22, epsilon = 1e-9);
    }

    #[test]
    fn negative_loss_is_flagged() {
        let m = LinkPowerMeasurement::new(0.0, -80.0, 3.0, 142e9, V, V).unwrap();
        let l = partition_loss(&m);
        assert!(l.negative);
        assert!(l.loss_db < 0.0);
    }

    #[test]
    fn gains_are_removed() {
        let raw = LinkPowerMeasurement::new(0.0, -41.26, 3.0, 142e9, V, V).unwrap();
        let m = raw.without_antenna_gains(27.0, 27.0);
        assert_abs_diff_eq!(m.rx_power_dbm, -95.26, epsilon = 1e-12);
    }

    #[test]
    fn measurement_rejects_bad_distance() {
        assert!(LinkPowerMeasurement::new(0.0, -90.0, 0.0, 142e9, V, V).is_err());
    }

    #[test]
    fn xpd_values() {
        assert_abs_diff_eq!(xpd_from_path_losses(124.18, 80.0), 44.18, epsilon = 1e-12);
        assert_eq!(xpd_from_path_losses(91.3, 91.3), 0.0);
    }

    #[test]
    fn xpd_over_five_distances() {
        let pairs = [
            (124.0, 80.0),
            (127.9, 83.5),
            (130.6, 86.0),
            (132.4, 88.0),
            (134.1, 90.0),
        ];
        let s = summarize_xpd(&pairs).unwrap();
        assert_eq!(s.distances, 5);
        assert_abs_diff_eq!(s.mean_db, 44.3, epsilon = 1e-9);
        assert_abs_diff_eq!(s.spread_db, 0.6, epsilon = 1e-9);
        assert!(s.consistent);
        let s = summarize_xpd(&[(124.0, 80.0), (126.0, 80.0)]).unwrap();
        assert!(!s.consistent);
    }

    #[test]
    fn drywall_margins() {
        let d = paper_dataset();
        let m = |f| tabulated_depolarization_margin(d, Material::Drywall, f).unwrap();
        assert_abs_diff_eq!(m(F28_GHZ), 6.40, epsilon = 0.01);
        assert_abs_diff_eq!(m(F73_GHZ), -4.76, epsilon = 0.01);
        assert_abs_diff_eq!(m(F142_GHZ), -17.54, epsilon = 0.01);
        assert_abs_diff_eq!(
            depolarization_margin(cross_pol_mean_db(25.59, 25.81), 19.30),
            6.40,
            epsilon = 1e-9
        );
    }

    #[test]
    fn drywall_142ghz_budget() {
        let b = power_budget(7.25, 8.46).unwrap();
        assert_abs_diff_eq!(b.reflected, 0.188, epsilon = 0.005);
        assert_abs_diff_eq!(b.transmitted, 0.143, epsilon = 0.005);
        assert_abs_diff_eq!(b.absorbed, 0.669, epsilon = 0.005);
        assert_abs_diff_eq!(b.absorption_loss_db(), 4.8, epsilon = 0.05);
    }

    #[test]
    fn round_budget() {
        let b = power_budget(10.0, 10.0).unwrap();
        assert_abs_diff_eq!(b.reflected, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(b.transmitted, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(b.absorbed, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn total_reflection() {
        assert!(matches!(power_budget(0.0, 3.0), Err(Error::OverUnityBudget { .. })));
        let b = power_budget(0.0, f64::INFINITY).unwrap();
        assert_eq!((b.reflected, b.transmitted, b.absorbed), (1.0, 0.0, 0.0));
    }

    #[test]
    fn negative_inputs_rejected() {
        assert!(matches!(power_budget(-1.0, 3.0), Err(Error::InvalidParameter { .. })));
        assert!(matches!(
            power_budget(3.0, f64::NAN),
            Err(Error::InvalidParameter { .. })
        ));
    }
}
