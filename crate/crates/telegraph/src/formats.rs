//! On-disk formats: curve CSV, rate-ensemble JSON, run manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use telegraph_core::noise::{FluctuatorEnsemble, NoiseParams};

use crate::config::ExperimentConfig;
use crate::{Error, Result};

/// One row of a curve table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub experiment_id: String,
    pub alpha: f64,
    pub sample: usize,
    pub bath_mode: String,
    pub tau: f64,
    pub gamma_factor: f64,
    pub negativity: f64,
    pub discord: f64,
}

/// A sampled set of switching rates with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub alpha: f64,
    pub sample: usize,
    pub bath: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub n_fluctuators: usize,
    pub seed: u64,
    pub rates: Vec<f64>,
}

impl EnsembleRecord {
    pub fn new(ensemble: &FluctuatorEnsemble, sample: usize, bath: usize) -> Self {
        let p = ensemble.params();
        Self {
            alpha: p.alpha(),
            sample,
            bath,
            gamma_min: p.gamma_min(),
            gamma_max: p.gamma_max(),
            n_fluctuators: p.n_fluctuators(),
            seed: ensemble.sample_seed(),
            rates: ensemble.rates().to_vec(),
        }
    }

    /// Rebuilds the ensemble, re-checking every rate against the stored range.
    pub fn to_ensemble(&self) -> Result<FluctuatorEnsemble> {
        let params = NoiseParams::new(self.alpha, self.gamma_min, self.gamma_max, self.n_fluctuators)?;
        Ok(FluctuatorEnsemble::from_rates(params, self.rates.clone(), self.seed)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub program: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a ExperimentConfig,
}

impl<'a> Manifest<'a> {
    pub fn new(command: &'a str, config: &'a ExperimentConfig) -> Self {
        Self {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut w = csv::Writer::from_writer(create(path)?);
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_curves(path: &Path) -> Result<Vec<CurveRecord>> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_ensembles(path: &Path) -> Result<Vec<EnsembleRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
