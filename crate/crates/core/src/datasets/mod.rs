//! Embedded reference measurements and measurement-file ingestion.
//!
//! The measured tables (sounder antennas, drywall reflection loss, partition
//! loss of clear glass and drywall, directional close-in model fits) are
//! compiled into the binary and exposed through [`paper_dataset`]. Everything
//! returned from there is `'static` and immutable.
//!
//! Sign convention: reflection losses are stored as positive dB magnitudes.
//! A tabulated entry of `-12.98 dB` (a power ratio of |Γ⊥|²) is stored as
//! `12.98`.

mod io;
mod report;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    load_path_loss_csv, load_pattern_csv, load_reflection_csv, read_path_loss_csv, read_pattern_csv,
    read_reflection_csv, write_path_loss_csv, write_reflection_csv, PATH_LOSS_COLUMNS, PATTERN_COLUMNS,
    REFLECTION_COLUMNS,
};
pub use report::{validate_dataset, DatasetReport, DistanceRange, DuplicateKey};

/// 28 GHz band centre.
pub const F28_GHZ: f64 = 28e9;
/// 73 GHz band centre.
pub const F73_GHZ: f64 = 73e9;
/// 142 GHz band centre (the "140 GHz" D-band sounder).
pub const F142_GHZ: f64 = 142e9;

/// True when two frequencies agree to one part in 10⁹.
pub fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "V")]
    Vertical,
    #[serde(rename = "H")]
    Horizontal,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::Vertical => "V",
            Polarization::Horizontal => "H",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "V" | "v" => Some(Polarization::Vertical),
            "H" | "h" => Some(Polarization::Horizontal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Material {
    #[serde(rename = "clear_glass")]
    ClearGlass,
    #[serde(rename = "drywall")]
    Drywall,
}

impl Material {
    pub fn name(self) -> &'static str {
        match self {
            Material::ClearGlass => "clear_glass",
            Material::Drywall => "drywall",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', ' '], "_").as_str() {
            "clear_glass" | "glass" => Some(Material::ClearGlass),
            "drywall" => Some(Material::Drywall),
            _ => None,
        }
    }
}

/// Propagation condition of a single path-loss record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Environment {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS")]
    Nlos,
}

impl Environment {
    pub fn as_str(self) -> &'static str {
        match self {
            Environment::Los => "LOS",
            Environment::Nlos => "NLOS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "LOS" => Some(Environment::Los),
            "NLOS" => Some(Environment::Nlos),
            _ => None,
        }
    }
}

/// Sample set a close-in model was fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CiEnvironment {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS_BEST")]
    NlosBest,
    #[serde(rename = "NLOS")]
    Nlos,
}

impl CiEnvironment {
    pub const ALL: [CiEnvironment; 3] = [CiEnvironment::Los, CiEnvironment::NlosBest, CiEnvironment::Nlos];

    pub fn as_str(self) -> &'static str {
        match self {
            CiEnvironment::Los => "LOS",
            CiEnvironment::NlosBest => "NLOS_BEST",
            CiEnvironment::Nlos => "NLOS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "LOS" => Some(CiEnvironment::Los),
            "NLOS_BEST" | "NLOSBEST" => Some(CiEnvironment::NlosBest),
            "NLOS" => Some(CiEnvironment::Nlos),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyBand {
    pub center_frequency_hz: f64,
    pub label: &'static str,
}

impl FrequencyBand {
    pub fn new(center_frequency_hz: f64, label: &'static str) -> Result<Self> {
        if !(center_frequency_hz.is_finite() && center_frequency_hz > 0.0) {
            return Err(Error::invalid("center_frequency_hz", "must be positive"));
        }
        Ok(FrequencyBand {
            center_frequency_hz,
            label,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntennaSpec {
    pub hpbw_deg: f64,
    pub gain_dbi: f64,
    /// Cross-polarization discrimination of the antenna pair.
    pub xpd_db: f64,
}

impl AntennaSpec {
    pub fn new(hpbw_deg: f64, gain_dbi: f64, xpd_db: f64) -> Result<Self> {
        if !(hpbw_deg > 0.0 && hpbw_deg < 180.0) {
            return Err(Error::invalid("hpbw_deg", "must lie in (0, 180)"));
        }
        if !(xpd_db > 0.0) {
            return Err(Error::invalid("xpd_db", "must be positive"));
        }
        Ok(AntennaSpec {
            hpbw_deg,
            gain_dbi,
            xpd_db,
        })
    }
}

/// One row of the sounder summary: band, RF bandwidth and the horn antennas used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SounderSpec {
    pub band: FrequencyBand,
    pub rf_bandwidth_hz: f64,
    pub antennas: &'static [AntennaSpec],
}

impl SounderSpec {
    pub fn xpd_db(&self) -> f64 {
        self.antennas[0].xpd_db
    }

    /// The narrowest-beam horn, which is the one used for the reflection and
    /// scattering sweeps.
    pub fn narrow_beam(&self) -> &'static AntennaSpec {
        self.antennas
            .iter()
            .min_by(|a, b| a.hpbw_deg.total_cmp(&b.hpbw_deg))
            .expect("every band lists at least one antenna")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSample {
    pub frequency_hz: f64,
    /// Angle from the surface normal.
    pub incident_angle_deg: f64,
    /// Positive loss, `-10·log10(|Γ⊥|²)`.
    pub reflection_loss_db: f64,
}

impl ReflectionSample {
    pub fn new(frequency_hz: f64, incident_angle_deg: f64, reflection_loss_db: f64) -> Result<Self> {
        let s = ReflectionSample {
            frequency_hz,
            incident_angle_deg,
            reflection_loss_db,
        };
        s.check()
            .map_err(|reason| Error::invalid("reflection sample", reason))?;
        Ok(s)
    }

    pub(crate) fn check(&self) -> std::result::Result<(), String> {
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return Err(format!("frequency {} Hz must be positive", self.frequency_hz));
        }
        if !(self.incident_angle_deg > 0.0 && self.incident_angle_deg < 90.0) {
            return Err(format!(
                "incident angle {} deg must lie in (0, 90)",
                self.incident_angle_deg
            ));
        }
        if !(self.reflection_loss_db >= 0.0 && self.reflection_loss_db.is_finite()) {
            return Err(format!(
                "reflection loss {} dB must be a finite non-negative number",
                self.reflection_loss_db
            ));
        }
        Ok(())
    }

    /// Measured |Γ⊥|² recovered from the dB loss.
    pub fn power_reflectivity(&self) -> f64 {
        10f64.powf(-self.reflection_loss_db / 10.0)
    }

    /// Measured |Γ⊥|.
    pub fn gamma_magnitude(&self) -> f64 {
        self.power_reflectivity().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionRecord {
    pub frequency_hz: f64,
    pub material: Material,
    pub tx_pol: Polarization,
    pub rx_pol: Polarization,
    pub mean_loss_db: f64,
    pub std_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiFitRecord {
    pub frequency_hz: f64,
    pub environment: CiEnvironment,
    pub ple: f64,
    pub sigma_db: f64,
}

/// One directional path-loss observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLossSample {
    pub frequency_hz: f64,
    pub tx_id: String,
    pub rx_id: String,
    pub distance_m: f64,
    pub environment: Environment,
    pub tx_az_deg: f64,
    pub tx_el_deg: f64,
    pub rx_az_deg: f64,
    pub rx_el_deg: f64,
    pub tx_pol: Polarization,
    pub rx_pol: Polarization,
    pub path_loss_db: f64,
}

impl PathLossSample {
    pub(crate) fn check(&self) -> std::result::Result<(), String> {
        if !(self.frequency_hz.is_finite() && self.frequency_hz > 0.0) {
            return Err(format!("frequency {} Hz must be positive", self.frequency_hz));
        }
        if !(self.distance_m >= 1.0 && self.distance_m.is_finite()) {
            return Err(format!(
                "distance {} m is below the 1 m reference distance",
                self.distance_m
            ));
        }
        if !(self.path_loss_db > 0.0 && self.path_loss_db.is_finite()) {
            return Err(format!("path loss {} dB must be positive", self.path_loss_db));
        }
        for (name, v) in [
            ("tx_az_deg", self.tx_az_deg),
            ("tx_el_deg", self.tx_el_deg),
            ("rx_az_deg", self.rx_az_deg),
            ("rx_el_deg", self.rx_el_deg),
        ] {
            if !v.is_finite() {
                return Err(format!("{name} must be finite"));
            }
        }
        Ok(())
    }
}

/// The embedded reference tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperDataset {
    pub sounders: &'static [SounderSpec],
    pub reflection: &'static [ReflectionSample],
    pub partition: &'static [PartitionRecord],
    pub ci_fits: &'static [CiFitRecord],
    /// Drywall permittivity reported from the MMSE fit at each band.
    pub drywall_permittivity: &'static [(f64, f64)],
}

impl PaperDataset {
    pub fn sounder(&self, frequency_hz: f64) -> Option<&'static SounderSpec> {
        self.sounders
            .iter()
            .find(|s| same_frequency(s.band.center_frequency_hz, frequency_hz))
    }

    pub fn xpd_db(&self, frequency_hz: f64) -> Option<f64> {
        self.sounder(frequency_hz).map(SounderSpec::xpd_db)
    }

    pub fn reflection_samples(&self, frequency_hz: f64) -> Vec<ReflectionSample> {
        self.reflection
            .iter()
            .filter(|s| same_frequency(s.frequency_hz, frequency_hz))
            .copied()
            .collect()
    }

    pub fn reflection_loss_db(&self, frequency_hz: f64, incident_angle_deg: f64) -> Option<f64> {
        self.reflection
            .iter()
            .find(|s| {
                same_frequency(s.frequency_hz, frequency_hz) && (s.incident_angle_deg - incident_angle_deg).abs() < 1e-9
            })
            .map(|s| s.reflection_loss_db)
    }

    pub fn partition(
        &self,
        material: Material,
        frequency_hz: f64,
        tx_pol: Polarization,
        rx_pol: Polarization,
    ) -> Option<&'static PartitionRecord> {
        self.partition.iter().find(|r| {
            r.material == material
                && same_frequency(r.frequency_hz, frequency_hz)
                && r.tx_pol == tx_pol
                && r.rx_pol == rx_pol
        })
    }

    pub fn ci_fit(&self, frequency_hz: f64, environment: CiEnvironment) -> Option<&'static CiFitRecord> {
        self.ci_fits
            .iter()
            .find(|r| r.environment == environment && same_frequency(r.frequency_hz, frequency_hz))
    }

    pub fn drywall_permittivity(&self, frequency_hz: f64) -> Option<f64> {
        self.drywall_permittivity
            .iter()
            .find(|(f, _)| same_frequency(*f, frequency_hz))
            .map(|&(_, eps)| eps)
    }

    pub fn bands(&self) -> impl Iterator<Item = FrequencyBand> + '_ {
        self.sounders.iter().map(|s| s.band)
    }
}

const fn antenna(hpbw_deg: f64, gain_dbi: f64, xpd_db: f64) -> AntennaSpec {
    AntennaSpec {
        hpbw_deg,
        gain_dbi,
        xpd_db,
    }
}

const fn refl(frequency_hz: f64, incident_angle_deg: f64, reflection_loss_db: f64) -> ReflectionSample {
    ReflectionSample {
        frequency_hz,
        incident_angle_deg,
        reflection_loss_db,
    }
}

const fn part(
    material: Material,
    frequency_hz: f64,
    tx_pol: Polarization,
    rx_pol: Polarization,
    mean_loss_db: f64,
    std_db: f64,
) -> PartitionRecord {
    PartitionRecord {
        frequency_hz,
        material,
        tx_pol,
        rx_pol,
        mean_loss_db,
        std_db,
    }
}

const fn ci(frequency_hz: f64, environment: CiEnvironment, ple: f64, sigma_db: f64) -> CiFitRecord {
    CiFitRecord {
        frequency_hz,
        environment,
        ple,
        sigma_db,
    }
}

static ANTENNAS_28: [AntennaSpec; 2] = [antenna(30.0, 15.0, 19.30), antenna(10.0, 24.5, 19.30)];
static ANTENNAS_73: [AntennaSpec; 2] = [antenna(15.0, 20.0, 28.94), antenna(7.0, 27.0, 28.94)];
static ANTENNAS_142: [AntennaSpec; 1] = [antenna(8.0, 27.0, 44.18)];

static SOUNDERS: [SounderSpec; 3] = [
    SounderSpec {
        band: FrequencyBand {
            center_frequency_hz: F28_GHZ,
            label: "28GHz",
        },
        rf_bandwidth_hz: 1e9,
        antennas: &ANTENNAS_28,
    },
    SounderSpec {
        band: FrequencyBand {
            center_frequency_hz: F73_GHZ,
            label: "73GHz",
        },
        rf_bandwidth_hz: 1e9,
        antennas: &ANTENNAS_73,
    },
    SounderSpec {
        band: FrequencyBand {
            center_frequency_hz: F142_GHZ,
            label: "142GHz",
        },
        rf_bandwidth_hz: 1e9,
        antennas: &ANTENNAS_142,
    },
];

// Drywall, V-V, angles from the normal.
static REFLECTION: [ReflectionSample; 12] = [
    refl(F28_GHZ, 10.0, 12.98),
    refl(F28_GHZ, 30.0, 4.22),
    refl(F28_GHZ, 60.0, 4.06),
    refl(F28_GHZ, 80.0, 3.18),
    refl(F73_GHZ, 10.0, 12.65),
    refl(F73_GHZ, 30.0, 8.08),
    refl(F73_GHZ, 60.0, 3.16),
    refl(F73_GHZ, 80.0, 1.28),
    refl(F142_GHZ, 10.0, 9.81),
    refl(F142_GHZ, 30.0, 7.53),
    refl(F142_GHZ, 60.0, 3.54),
    refl(F142_GHZ, 80.0, 0.36),
];

use Material::{ClearGlass, Drywall};
use Polarization::{Horizontal as H, Vertical as V};

// Cross-polarized rows still include the antenna XPD.
static PARTITION: [PartitionRecord; 24] = [
    part(ClearGlass, F28_GHZ, V, V, 1.53, 0.60),
    part(ClearGlass, F28_GHZ, V, H, 20.63, 1.32),
    part(ClearGlass, F28_GHZ, H, V, 22.25, 0.88),
    part(ClearGlass, F28_GHZ, H, H, 1.48, 0.54),
    part(ClearGlass, F73_GHZ, V, V, 7.17, 0.17),
    part(ClearGlass, F73_GHZ, V, H, 37.65, 0.53),
    part(ClearGlass, F73_GHZ, H, V, 36.92, 1.11),
    part(ClearGlass, F73_GHZ, H, H, 7.15, 0.44),
    part(ClearGlass, F142_GHZ, V, V, 10.22, 0.22),
    part(ClearGlass, F142_GHZ, V, H, 46.92, 2.05),
    part(ClearGlass, F142_GHZ, H, V, 37.37, 1.79),
    part(ClearGlass, F142_GHZ, H, H, 10.43, 0.55),
    part(Drywall, F28_GHZ, V, V, 4.15, 0.59),
    part(Drywall, F28_GHZ, V, H, 25.59, 2.85),
    part(Drywall, F28_GHZ, H, V, 25.81, 0.65),
    part(Drywall, F28_GHZ, H, H, 3.31, 1.13),
    part(Drywall, F73_GHZ, V, V, 2.57, 0.61),
    part(Drywall, F73_GHZ, V, H, 24.97, 0.58),
    part(Drywall, F73_GHZ, H, V, 23.38, 0.65),
    part(Drywall, F73_GHZ, H, H, 3.17, 0.68),
    part(Drywall, F142_GHZ, V, V, 8.46, 1.22),
    part(Drywall, F142_GHZ, V, H, 27.28, 1.77),
    part(Drywall, F142_GHZ, H, V, 26.00, 1.42),
    part(Drywall, F142_GHZ, H, H, 9.31, 0.61),
];

static CI_FITS: [CiFitRecord; 9] = [
    ci(F28_GHZ, CiEnvironment::Los, 1.70, 2.50),
    ci(F28_GHZ, CiEnvironment::NlosBest, 3.00, 10.80),
    ci(F28_GHZ, CiEnvironment::Nlos, 4.40, 11.60),
    ci(F73_GHZ, CiEnvironment::Los, 1.60, 3.20),
    ci(F73_GHZ, CiEnvironment::NlosBest, 3.40, 11.80),
    ci(F73_GHZ, CiEnvironment::Nlos, 5.30, 15.70),
    ci(F142_GHZ, CiEnvironment::Los, 1.99, 2.71),
    ci(F142_GHZ, CiEnvironment::NlosBest, 3.03, 6.91),
    ci(F142_GHZ, CiEnvironment::Nlos, 4.70, 14.10),
];

static DRYWALL_PERMITTIVITY: [(f64, f64); 3] = [(F28_GHZ, 4.7), (F73_GHZ, 5.2), (F142_GHZ, 6.4)];

static PAPER: PaperDataset = PaperDataset {
    sounders: &SOUNDERS,
    reflection: &REFLECTION,
    partition: &PARTITION,
    ci_fits: &CI_FITS,
    drywall_permittivity: &DRYWALL_PERMITTIVITY,
};

/// The embedded reference tables, exactly as published.
pub fn paper_dataset() -> &'static PaperDataset {
    &PAPER
}
