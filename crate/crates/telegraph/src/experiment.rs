//! Correlation-curve experiments over sampled rate ensembles.

use serde::Serialize;
use telegraph_core::dephasing::gamma_curve;
use telegraph_core::noise::{sample_switching_rates, FluctuatorEnsemble};
use telegraph_core::rng::derive_seed;
use telegraph_core::state::correlations_closed;

use crate::config::{BathMode, ExperimentConfig};
use crate::formats::{CurveRecord, EnsembleRecord};
use crate::revival::{find_revivals, Peak};
use crate::runner::Runtime;
use crate::Result;

/// Seed of the rate sample for (α index, sample index, bath index).
pub fn rate_seed(master_seed: u64, alpha_index: usize, sample: usize, bath: usize) -> u64 {
    derive_seed(master_seed, &[alpha_index as u64, sample as u64, bath as u64])
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSummary {
    pub alpha: f64,
    pub sample: usize,
    pub n_revivals: usize,
    pub first_revival: Option<Peak>,
    /// Height of the first revival, 0 when there is none.
    pub first_revival_height: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub experiment_id: String,
    pub curves: Vec<CurveSummary>,
}

impl EnsembleSummary {
    /// Mean first-revival height over the samples at one α.
    pub fn mean_first_revival_height(&self, alpha: f64) -> Option<f64> {
        let heights: Vec<f64> = self
            .curves
            .iter()
            .filter(|c| c.alpha == alpha)
            .map(|c| c.first_revival_height)
            .collect();
        (!heights.is_empty()).then(|| heights.iter().sum::<f64>() / heights.len() as f64)
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub records: Vec<CurveRecord>,
    pub ensembles: Vec<EnsembleRecord>,
    pub summary: EnsembleSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub experiment_id: String,
    pub alpha_values: Vec<f64>,
    pub first_revival_heights: Vec<f64>,
    pub first_revival_taus: Vec<Option<f64>>,
    pub heights_nondecreasing: bool,
    pub argmax_alpha: f64,
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub records: Vec<CurveRecord>,
    pub ensembles: Vec<EnsembleRecord>,
    pub summary: SweepSummary,
}

struct Cell {
    records: Vec<CurveRecord>,
    ensembles: Vec<EnsembleRecord>,
    summary: CurveSummary,
}

fn draw_baths(
    config: &ExperimentConfig,
    alpha: f64,
    seed_of: impl Fn(usize) -> u64,
) -> Result<(FluctuatorEnsemble, FluctuatorEnsemble)> {
    let params = config.noise_params(alpha)?;
    let a = sample_switching_rates(&params, seed_of(0));
    let b = match config.bath_mode {
        BathMode::Shared => a.clone(),
        BathMode::Independent => sample_switching_rates(&params, seed_of(1)),
    };
    Ok((a, b))
}

fn run_cell(
    config: &ExperimentConfig,
    tau: &[f64],
    alpha: f64,
    sample: usize,
    baths: (FluctuatorEnsemble, FluctuatorEnsemble),
) -> Result<Cell> {
    let (a, b) = baths;
    let curve = gamma_curve(&a, &b, tau)?;
    let mut records = Vec::with_capacity(tau.len());
    let mut negativity = Vec::with_capacity(tau.len());
    for (t, g) in curve.iter() {
        let c = correlations_closed(t, g)?;
        negativity.push(c.negativity);
        records.push(CurveRecord {
            experiment_id: config.experiment_id.clone(),
            alpha,
            sample,
            bath_mode: config.bath_mode.as_str().into(),
            tau: t,
            gamma_factor: c.gamma_factor,
            negativity: c.negativity,
            discord: c.discord,
        });
    }
    let peaks = find_revivals(tau, &negativity);
    let first = peaks.first().copied();
    let mut ensembles = vec![EnsembleRecord::new(&a, sample, 0)];
    if config.bath_mode == BathMode::Independent {
        ensembles.push(EnsembleRecord::new(&b, sample, 1));
    }
    Ok(Cell {
        records,
        ensembles,
        summary: CurveSummary {
            alpha,
            sample,
            n_revivals: peaks.len(),
            first_revival: first,
            first_revival_height: first.map_or(0.0, |p| p.height),
        },
    })
}

/// Correlation curves for every α and each of `n_rate_samples` rate samples.
pub fn run_ensemble(config: &ExperimentConfig, runtime: &Runtime) -> Result<EnsembleRun> {
    config.validate()?;
    let tau = config.tau_grid.points()?;
    let n_samples = config.n_rate_samples;
    let cells = runtime.map(config.alpha_values.len() * n_samples, |k| {
        let (ai, sample) = (k / n_samples, k % n_samples);
        let alpha = config.alpha_values[ai];
        let baths = draw_baths(config, alpha, |bath| {
            rate_seed(config.master_seed, ai, sample, bath)
        })?;
        run_cell(config, &tau, alpha, sample, baths)
    });
    let mut run = EnsembleRun {
        records: Vec::new(),
        ensembles: Vec::new(),
        summary: EnsembleSummary {
            experiment_id: config.experiment_id.clone(),
            curves: Vec::new(),
        },
    };
    for cell in cells {
        let cell = cell?;
        run.records.extend(cell.records);
        run.ensembles.extend(cell.ensembles);
        run.summary.curves.push(cell.summary);
    }
    Ok(run)
}

/// One curve per α (rate sample 0 of each α) on a shared time grid, with the
/// first-revival height of each row.
pub fn run_alpha_sweep(config: &ExperimentConfig, runtime: &Runtime) -> Result<SweepRun> {
    config.validate()?;
    let tau = config.tau_grid.points()?;
    let cells = runtime.map(config.alpha_values.len(), |ai| {
        let alpha = config.alpha_values[ai];
        let baths = draw_baths(config, alpha, |bath| rate_seed(config.master_seed, ai, 0, bath))?;
        run_cell(config, &tau, alpha, 0, baths)
    });
    let mut records = Vec::new();
    let mut ensembles = Vec::new();
    let mut heights = Vec::new();
    let mut taus = Vec::new();
    for cell in cells {
        let cell = cell?;
        records.extend(cell.records);
        ensembles.extend(cell.ensembles);
        heights.push(cell.summary.first_revival_height);
        taus.push(cell.summary.first_revival.map(|p| p.tau));
    }
    let (argmax, _) = heights
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &h)| if h > best.1 { (i, h) } else { best });
    let summary = SweepSummary {
        experiment_id: config.experiment_id.clone(),
        alpha_values: config.alpha_values.clone(),
        heights_nondecreasing: nondecreasing_in_alpha(&config.alpha_values, &heights),
        first_revival_heights: heights,
        first_revival_taus: taus,
        argmax_alpha: config.alpha_values[argmax],
    };
    Ok(SweepRun {
        records,
        ensembles,
        summary,
    })
}

fn nondecreasing_in_alpha(alphas: &[f64], heights: &[f64]) -> bool {
    let mut order: Vec<usize> = (0..alphas.len()).collect();
    order.sort_by(|&i, &j| alphas[i].total_cmp(&alphas[j]));
    order.windows(2).all(|w| heights[w[1]] >= heights[w[0]])
}
