//! Noise spectra of sampled ensembles against the quadrature over p_α(γ).

use serde::Serialize;
use telegraph_core::noise::{
    analytic_spectrum, ensemble_spectrum, fit_spectral_slope, sample_switching_rates,
    FluctuatorEnsemble, NoiseParams,
};

use crate::config::ExperimentConfig;
use crate::experiment::rate_seed;
use crate::runner::Runtime;
use crate::Result;

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => (a + step * i as f64).exp(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub experiment_id: String,
    pub alpha: f64,
    pub frequency: f64,
    /// Ensemble spectrum divided by the number of fluctuators.
    pub ensemble_mean: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumFit {
    pub alpha: f64,
    pub n_fluctuators: usize,
    pub ensemble_slope: f64,
    pub analytic_slope: f64,
    /// max over the grid of |ensemble_mean / analytic − 1|
    pub max_rel_deviation: f64,
}

/// (frequency, ensemble spectrum per fluctuator, analytic spectrum)
pub type SpectrumPoint = (f64, f64, f64);

/// Per-fluctuator ensemble spectrum and the analytic one on a frequency grid.
pub fn compare_spectra(
    ensemble: &FluctuatorEnsemble,
    params: &NoiseParams,
    freqs: &[f64],
) -> Result<(Vec<SpectrumPoint>, SpectrumFit)> {
    let n = ensemble.len() as f64;
    let mut points = Vec::with_capacity(freqs.len());
    for &f in freqs {
        points.push((f, ensemble_spectrum(ensemble, f)? / n, analytic_spectrum(params, f)?));
    }
    let ens: Vec<f64> = points.iter().map(|p| p.1).collect();
    let ana: Vec<f64> = points.iter().map(|p| p.2).collect();
    let fit = SpectrumFit {
        alpha: params.alpha(),
        n_fluctuators: ensemble.len(),
        ensemble_slope: fit_spectral_slope(freqs, &ens)?,
        analytic_slope: fit_spectral_slope(freqs, &ana)?,
        max_rel_deviation: points
            .iter()
            .map(|p| (p.1 / p.2 - 1.0).abs())
            .fold(0.0, f64::max),
    };
    Ok((points, fit))
}

#[derive(Debug, Clone)]
pub struct SpectrumRun {
    pub rows: Vec<SpectrumRow>,
    pub fits: Vec<SpectrumFit>,
}

/// Spectra of the first rate sample (bath A) at every α of the config.
pub fn run_spectrum(config: &ExperimentConfig, runtime: &Runtime) -> Result<SpectrumRun> {
    config.validate()?;
    let s = &config.spectrum;
    let freqs = log_grid(s.f_min, s.f_max, s.n_freqs);
    let results = runtime.map(config.alpha_values.len(), |ai| {
        let params = config.noise_params(config.alpha_values[ai])?;
        let ensemble = sample_switching_rates(&params, rate_seed(config.master_seed, ai, 0, 0));
        compare_spectra(&ensemble, &params, &freqs)
    });
    let mut run = SpectrumRun {
        rows: Vec::new(),
        fits: Vec::new(),
    };
    for (ai, result) in results.into_iter().enumerate() {
        let (points, fit) = result?;
        for (frequency, ensemble_mean, analytic) in points {
            run.rows.push(SpectrumRow {
                experiment_id: config.experiment_id.clone(),
                alpha: config.alpha_values[ai],
                frequency,
                ensemble_mean,
                analytic,
            });
        }
        run.fits.push(fit);
    }
    Ok(run)
}
