use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{Environment, PathLossSample, Polarization};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceRange {
    pub min_m: f64,
    pub max_m: f64,
}

/// A (TX, RX, pointing angles, polarization) key that appears on more than one row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuplicateKey {
    pub tx_id: String,
    pub rx_id: String,
    pub tx_az_deg: f64,
    pub tx_el_deg: f64,
    pub rx_az_deg: f64,
    pub rx_el_deg: f64,
    pub tx_pol: Polarization,
    pub rx_pol: Polarization,
    /// Zero-based positions of every row carrying this key.
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetReport {
    pub count: usize,
    pub per_environment: BTreeMap<Environment, usize>,
    pub distance_range: Option<DistanceRange>,
    pub duplicates: Vec<DuplicateKey>,
}

impl DatasetReport {
    pub fn environment_count(&self, env: Environment) -> usize {
        self.per_environment.get(&env).copied().unwrap_or(0)
    }
}

type KeyBits<'a> = (&'a str, &'a str, [u64; 4], Polarization, Polarization);

fn key(s: &PathLossSample) -> KeyBits<'_> {
    // +0.0 so that -0 and 0 pointing angles compare equal
    let bits = |v: f64| (v + 0.0).to_bits();
    (
        &s.tx_id,
        &s.rx_id,
        [
            bits(s.tx_az_deg),
            bits(s.tx_el_deg),
            bits(s.rx_az_deg),
            bits(s.rx_el_deg),
        ],
        s.tx_pol,
        s.rx_pol,
    )
}

/// Summarizes a path-loss dataset. Duplicated keys are reported, never removed.
pub fn validate_dataset(samples: &[PathLossSample]) -> DatasetReport {
    let mut per_environment = BTreeMap::new();
    for env in [Environment::Los, Environment::Nlos] {
        per_environment.insert(env, 0);
    }
    let mut range: Option<DistanceRange> = None;
    let mut seen: HashMap<KeyBits<'_>, Vec<usize>> = HashMap::new();
    let mut order = Vec::new();

    for (i, s) in samples.iter().enumerate() {
        *per_environment.entry(s.environment).or_insert(0) += 1;
        range = Some(match range {
            None => DistanceRange {
                min_m: s.distance_m,
                max_m: s.distance_m,
            },
            Some(r) => DistanceRange {
                min_m: r.min_m.min(s.distance_m),
                max_m: r.max_m.max(s.distance_m),
            },
        });
        let k = key(s);
        let rows = seen.entry(k).or_default();
        if rows.len() == 1 {
            order.push(k);
        }
        rows.push(i);
    }

    let duplicates = order
        .into_iter()
        .map(|k| {
            let rows = seen[&k].clone();
            let s = &samples[rows[0]];
            DuplicateKey {
                tx_id: s.tx_id.clone(),
                rx_id: s.rx_id.clone(),
                tx_az_deg: s.tx_az_deg,
                tx_el_deg: s.tx_el_deg,
                rx_az_deg: s.rx_az_deg,
                rx_el_deg: s.rx_el_deg,
                tx_pol: s.tx_pol,
                rx_pol: s.rx_pol,
                rows,
            }
        })
        .collect();

    DatasetReport {
        count: samples.len(),
        per_environment,
        distance_range: range,
        duplicates,
    }
}
