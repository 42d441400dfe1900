//! Experiment configuration, loaded from JSON or TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use telegraph_core::noise::NoiseParams;

use crate::{Error, Result};

/// How the rates of the two baths are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BathMode {
    /// One rate sample used for both qubits.
    #[serde(alias = "shared-sample")]
    Shared,
    /// Each qubit gets its own rate sample.
    #[default]
    #[serde(alias = "independent-samples")]
    Independent,
}

impl BathMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BathMode::Shared => "shared",
            BathMode::Independent => "independent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauGrid {
    pub tau_max: f64,
    pub n_points: usize,
}

impl TauGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        Ok(telegraph_core::uniform_grid(self.tau_max, self.n_points)?)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(Error::Config(format!("{name}.tau_max must be finite and > 0")));
        }
        if self.n_points == 0 {
            return Err(Error::Config(format!("{name}.n_points must be >= 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub dir: PathBuf,
    pub curves: String,
    pub summary: String,
    pub ensembles: String,
    pub spectrum: String,
    pub manifest: String,
    pub report: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            curves: "curves.csv".into(),
            summary: "summary.json".into(),
            ensembles: "ensembles.json".into(),
            spectrum: "spectrum.csv".into(),
            manifest: "manifest.json".into(),
            report: "verify.json".into(),
        }
    }
}

impl Outputs {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

/// Frequency grid for the `spectrum` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub n_freqs: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            f_min: 1e-2,
            f_max: 1e2,
            n_freqs: 25,
        }
    }
}

/// Sizes of the cross-checks run by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub dephasing_rates: Vec<f64>,
    pub dephasing_grid: TauGrid,
    pub dephasing_trajectories: u64,
    /// Fraction of grid points that must lie within 4 standard errors.
    pub dephasing_min_fraction: f64,

    pub state_alpha: f64,
    pub state_gamma_range: (f64, f64),
    pub state_n_fluctuators: usize,
    pub state_grid: TauGrid,
    pub state_trajectories: u64,

    pub closed_form_points: usize,

    pub slope_alphas: Vec<f64>,
    pub slope_gamma_range: (f64, f64),
    pub slope_n_fluctuators: usize,
    pub slope_freq_range: (f64, f64),
    pub slope_n_freqs: usize,
    pub slope_tolerance: f64,
    /// Replaces −α as the expected slope when set.
    pub slope_target: Option<f64>,

    pub ks_alphas: Vec<f64>,
    pub ks_gamma_range: (f64, f64),
    pub ks_samples: usize,
    pub ks_threshold: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dephasing_rates: vec![0.1, 1.0, 2.0, 4.0, 20.0],
            dephasing_grid: TauGrid {
                tau_max: 5.0,
                n_points: 50,
            },
            dephasing_trajectories: 100_000,
            dephasing_min_fraction: 0.95,
            state_alpha: 1.5,
            state_gamma_range: (0.1, 10.0),
            state_n_fluctuators: 3,
            state_grid: TauGrid {
                tau_max: 5.0,
                n_points: 21,
            },
            state_trajectories: 100_000,
            closed_form_points: 1001,
            slope_alphas: vec![1.0, 1.5, 2.0],
            slope_gamma_range: (1e-4, 1e4),
            slope_n_fluctuators: 10_000,
            slope_freq_range: (1e-2, 1e2),
            slope_n_freqs: 25,
            slope_tolerance: 0.15,
            slope_target: None,
            ks_alphas: vec![1.0, 1.25, 1.5, 1.75, 2.0],
            ks_gamma_range: (1e-4, 1e4),
            ks_samples: 1_000_000,
            ks_threshold: 0.002,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_experiment_id")]
    pub experiment_id: String,
    pub alpha_values: Vec<f64>,
    pub gamma_range: (f64, f64),
    pub n_fluctuators: usize,
    #[serde(default = "default_rate_samples")]
    pub n_rate_samples: usize,
    pub tau_grid: TauGrid,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub bath_mode: BathMode,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

fn default_experiment_id() -> String {
    "experiment".into()
}

fn default_rate_samples() -> usize {
    1
}

impl ExperimentConfig {
    /// Reads a config file; `.toml` files are parsed as TOML, anything else as JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_toml = path
            .extension()
            .is_some_and(|ext| ext.eq_ignore_ascii_case("toml"));
        let parse_err = |message: String| Error::Parse {
            path: path.to_owned(),
            message,
        };
        let config: Self = if is_toml {
            toml::from_str(&text).map_err(|e| parse_err(e.to_string()))?
        } else {
            serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Noise parameters of the main experiment at one α.
    pub fn noise_params(&self, alpha: f64) -> Result<NoiseParams> {
        let (lo, hi) = self.gamma_range;
        Ok(NoiseParams::new(alpha, lo, hi, self.n_fluctuators)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_values.is_empty() {
            return Err(Error::Config("alpha_values is empty".into()));
        }
        let (lo, hi) = self.gamma_range;
        if lo == hi {
            return Err(Error::Config(format!(
                "gamma_range is degenerate: gamma_min = gamma_max = {lo}"
            )));
        }
        for &alpha in &self.alpha_values {
            self.noise_params(alpha)
                .map_err(|e| Error::Config(format!("alpha = {alpha}: {e}")))?;
        }
        if self.n_rate_samples == 0 {
            return Err(Error::Config("n_rate_samples must be >= 1".into()));
        }
        self.tau_grid.validate("tau_grid")?;
        let s = &self.spectrum;
        if !(s.f_min > 0.0 && s.f_max > s.f_min && s.f_max.is_finite() && s.n_freqs >= 2) {
            return Err(Error::Config(
                "spectrum needs 0 < f_min < f_max and n_freqs >= 2".into(),
            ));
        }
        self.verify.validate()
    }
}

impl VerifyConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("verify: {m}")));
        if self.dephasing_rates.iter().any(|&g| !(g >= 0.0 && g.is_finite())) {
            return bad("dephasing_rates must be finite and >= 0");
        }
        self.dephasing_grid.validate("verify.dephasing_grid")?;
        self.state_grid.validate("verify.state_grid")?;
        if self.dephasing_trajectories == 0 || self.state_trajectories == 0 {
            return bad("trajectory counts must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.dephasing_min_fraction) {
            return bad("dephasing_min_fraction must lie in [0, 1]");
        }
        let (lo, hi) = self.state_gamma_range;
        NoiseParams::new(self.state_alpha, lo, hi, self.state_n_fluctuators)
            .map_err(|e| Error::Config(format!("verify state bath: {e}")))?;
        let (lo, hi) = self.slope_gamma_range;
        for &alpha in &self.slope_alphas {
            NoiseParams::new(alpha, lo, hi, self.slope_n_fluctuators)
                .map_err(|e| Error::Config(format!("verify slope alpha = {alpha}: {e}")))?;
        }
        let (f_lo, f_hi) = self.slope_freq_range;
        if !(f_lo > 0.0 && f_hi > f_lo && f_hi.is_finite()) || self.slope_n_freqs < 2 {
            return bad("slope_freq_range needs 0 < f_lo < f_hi and slope_n_freqs >= 2");
        }
        let (lo, hi) = self.ks_gamma_range;
        for &alpha in &self.ks_alphas {
            NoiseParams::new(alpha, lo, hi, self.ks_samples.max(1))
                .map_err(|e| Error::Config(format!("verify ks alpha = {alpha}: {e}")))?;
        }
        if self.ks_samples == 0 && !self.ks_alphas.is_empty() {
            return bad("ks_samples must be >= 1");
        }
        if self.closed_form_points < 2 {
            return bad("closed_form_points must be >= 2");
        }
        Ok(())
    }
}
