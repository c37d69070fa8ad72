//! CSV ingestion and export.
//!
//! Row numbers in errors count data rows from 1; the header is not counted.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use super::{Environment, PathLossSample, Polarization, ReflectionSample};
use crate::error::{Error, Result};
use crate::scattering::ScatterPatternPoint;

pub const PATH_LOSS_COLUMNS: [&str; 12] = [
    "freq_hz",
    "tx_id",
    "rx_id",
    "distance_m",
    "environment",
    "tx_az_deg",
    "tx_el_deg",
    "rx_az_deg",
    "rx_el_deg",
    "tx_pol",
    "rx_pol",
    "path_loss_db",
];

pub const REFLECTION_COLUMNS: [&str; 3] = ["freq_hz", "incident_angle_deg", "reflection_loss_db"];

pub const PATTERN_COLUMNS: [&str; 2] = ["observation_angle_deg", "relative_power_db"];

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

fn csv_error(err: csv::Error, row: usize) -> Error {
    match err.kind() {
        csv::ErrorKind::Io(e) => Error::Io(e.to_string()),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::InvariantViolation {
            row,
            reason: format!("expected {expected_len} fields, found {len}"),
        },
        _ => Error::InvariantViolation {
            row,
            reason: err.to_string(),
        },
    }
}

/// Column positions for a required set of header names.
struct Columns<const N: usize> {
    index: [usize; N],
    names: [&'static str; N],
}

impl<const N: usize> Columns<N> {
    fn resolve(header: &StringRecord, names: [&'static str; N]) -> Result<Self> {
        let mut index = [0; N];
        for (slot, name) in index.iter_mut().zip(names) {
            *slot = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        }
        Ok(Columns { index, names })
    }

    fn text<'r>(&self, record: &'r StringRecord, col: usize) -> &'r str {
        record.get(self.index[col]).unwrap_or("")
    }

    fn number(&self, record: &StringRecord, col: usize, row: usize) -> Result<f64> {
        self.text(record, col)
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::BadNumeric {
                row,
                column: self.names[col].to_string(),
            })
    }
}

fn reader<R: Read>(rdr: R) -> csv::Reader<R> {
    ReaderBuilder::new().has_headers(true).trim(Trim::All).from_reader(rdr)
}

/// Parses path-loss records from any reader carrying the path-loss CSV schema.
pub fn read_path_loss_csv<R: Read>(rdr: R) -> Result<Vec<PathLossSample>> {
    let mut rdr = reader(rdr);
    let header = rdr.headers().map_err(|e| csv_error(e, 0))?.clone();
    let cols = Columns::resolve(&header, PATH_LOSS_COLUMNS)?;
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| csv_error(e, row))?;
        let environment = Environment::parse(cols.text(&record, 4)).ok_or_else(|| Error::InvariantViolation {
            row,
            reason: format!("environment `{}` is not LOS or NLOS", cols.text(&record, 4)),
        })?;
        let pol = |col: usize| {
            Polarization::parse(cols.text(&record, col)).ok_or_else(|| Error::InvariantViolation {
                row,
                reason: format!("{} `{}` is not V or H", cols.names[col], cols.text(&record, col)),
            })
        };
        let sample = PathLossSample {
            frequency_hz: cols.number(&record, 0, row)?,
            tx_id: cols.text(&record, 1).to_string(),
            rx_id: cols.text(&record, 2).to_string(),
            distance_m: cols.number(&record, 3, row)?,
            environment,
            tx_az_deg: cols.number(&record, 5, row)?,
            tx_el_deg: cols.number(&record, 6, row)?,
            rx_az_deg: cols.number(&record, 7, row)?,
            rx_el_deg: cols.number(&record, 8, row)?,
            tx_pol: pol(9)?,
            rx_pol: pol(10)?,
            path_loss_db: cols.number(&record, 11, row)?,
        };
        sample
            .check()
            .map_err(|reason| Error::InvariantViolation { row, reason })?;
        out.push(sample);
    }
    Ok(out)
}

pub fn load_path_loss_csv(path: impl AsRef<Path>) -> Result<Vec<PathLossSample>> {
    read_path_loss_csv(open(path.as_ref())?)
}

/// Writes records in the path-loss CSV schema. Floats use the shortest
/// representation that parses back to the same value, so a write/read cycle
/// is lossless.
pub fn write_path_loss_csv<W: Write>(w: W, samples: &[PathLossSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    let err = |e: csv::Error| csv_error(e, 0);
    w.write_record(PATH_LOSS_COLUMNS).map_err(err)?;
    for s in samples {
        w.write_record([
            s.frequency_hz.to_string(),
            s.tx_id.clone(),
            s.rx_id.clone(),
            s.distance_m.to_string(),
            s.environment.as_str().to_string(),
            s.tx_az_deg.to_string(),
            s.tx_el_deg.to_string(),
            s.rx_az_deg.to_string(),
            s.rx_el_deg.to_string(),
            s.tx_pol.as_str().to_string(),
            s.rx_pol.as_str().to_string(),
            s.path_loss_db.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_reflection_csv<R: Read>(rdr: R) -> Result<Vec<ReflectionSample>> {
    let mut rdr = reader(rdr);
    let header = rdr.headers().map_err(|e| csv_error(e, 0))?.clone();
    let cols = Columns::resolve(&header, REFLECTION_COLUMNS)?;
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| csv_error(e, row))?;
        let sample = ReflectionSample {
            frequency_hz: cols.number(&record, 0, row)?,
            incident_angle_deg: cols.number(&record, 1, row)?,
            reflection_loss_db: cols.number(&record, 2, row)?,
        };
        sample
            .check()
            .map_err(|reason| Error::InvariantViolation { row, reason })?;
        out.push(sample);
    }
    Ok(out)
}

pub fn load_reflection_csv(path: impl AsRef<Path>) -> Result<Vec<ReflectionSample>> {
    read_reflection_csv(open(path.as_ref())?)
}

pub fn write_reflection_csv<W: Write>(w: W, samples: &[ReflectionSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    let err = |e: csv::Error| csv_error(e, 0);
    w.write_record(REFLECTION_COLUMNS).map_err(err)?;
    for s in samples {
        w.write_record([
            s.frequency_hz.to_string(),
            s.incident_angle_deg.to_string(),
            s.reflection_loss_db.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Reads a measured or predicted pattern (`observation_angle_deg,relative_power_db`).
/// Angles are signed from the surface normal, positive on the specular side.
pub fn read_pattern_csv<R: Read>(rdr: R) -> Result<Vec<ScatterPatternPoint>> {
    let mut rdr = reader(rdr);
    let header = rdr.headers().map_err(|e| csv_error(e, 0))?.clone();
    let cols = Columns::resolve(&header, PATTERN_COLUMNS)?;
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| csv_error(e, row))?;
        let observation_angle_deg = cols.number(&record, 0, row)?;
        if observation_angle_deg.abs() >= 90.0 {
            return Err(Error::InvariantViolation {
                row,
                reason: format!("observation angle {observation_angle_deg} deg must lie in (-90, 90)"),
            });
        }
        out.push(ScatterPatternPoint {
            observation_angle_deg,
            relative_power_db: cols.number(&record, 1, row)?,
        });
    }
    Ok(out)
}

pub fn load_pattern_csv(path: impl AsRef<Path>) -> Result<Vec<ScatterPatternPoint>> {
    read_pattern_csv(open(path.as_ref())?)
}
