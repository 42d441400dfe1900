//! Cross-checks of the closed forms against trajectory averages, spectra and
//! sampling statistics.

use serde::Serialize;
use serde_json::json;
use telegraph_core::dephasing::{gamma_factor, phase_mass, rtn_dephasing};
use telegraph_core::montecarlo::{mc_phase_factor_with, mc_two_qubit_state_with, SignSampling};
use telegraph_core::noise::{
    sample_switching_rates, switching_rate_cdf, switching_rate_pdf, NoiseParams,
};
use telegraph_core::quad::integrate;
use telegraph_core::rng::derive_seed;
use telegraph_core::state::{bell_mixture, binary_h, correlations_closed, negativity_eig};

use crate::config::ExperimentConfig;
use crate::runner::Runtime;
use crate::spectrum::{compare_spectra, log_grid};
use crate::Result;

/// Rates and times at which the phase distribution's mass is checked.
pub const PHASE_MASS_RATES: [f64; 3] = [0.5, 2.0, 4.0];
pub const PHASE_MASS_TIMES: [f64; 3] = [0.5, 1.0, 3.0];
pub const PHASE_MASS_TOLERANCE: f64 = 1e-6;
pub const RATE_MASS_TOLERANCE: f64 = 1e-8;
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;

// keeps verify streams apart from the experiment rate samples
const VERIFY_STREAM: u64 = 0x7665_7269_6679;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub values: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment_id: String,
    pub master_seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn verify_seed(master: u64, check: u64, index: usize) -> u64 {
    derive_seed(master, &[VERIFY_STREAM, check, index as u64])
}

pub fn verify(config: &ExperimentConfig, runtime: &Runtime) -> Result<Report> {
    config.validate()?;
    let checks = vec![
        dephasing_check(config, runtime)?,
        state_check(config, runtime)?,
        closed_form_check(config)?,
        slope_check(config, runtime)?,
        rate_mass_check(config)?,
        phase_mass_check()?,
        ks_check(config, runtime)?,
    ];
    Ok(Report {
        experiment_id: config.experiment_id.clone(),
        master_seed: config.master_seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Trajectory-averaged single-fluctuator phase factor against D(γ, τ).
pub fn dephasing_check(config: &ExperimentConfig, runtime: &Runtime) -> Result<Check> {
    let v = &config.verify;
    let grid = v.dephasing_grid.points()?;
    let mut per_rate = Vec::new();
    let mut passed = true;
    for (k, &gamma) in v.dephasing_rates.iter().enumerate() {
        let est = mc_phase_factor_with(
            runtime,
            &[gamma],
            &grid,
            v.dephasing_trajectories,
            verify_seed(config.master_seed, 0, k),
            SignSampling::Random,
        )?;
        let mut re_hits = 0;
        let mut im_hits = 0;
        let mut max_z: f64 = 0.0;
        for (e, &tau) in est.iter().zip(&grid) {
            let d = rtn_dephasing(gamma, tau)?;
            re_hits += usize::from(e.re.within(d, 4.0));
            im_hits += usize::from(e.im.within(0.0, 5.0));
            max_z = max_z.max(e.re.z_score(d));
        }
        let fraction = re_hits as f64 / grid.len() as f64;
        let ok = fraction >= v.dephasing_min_fraction && im_hits == grid.len();
        passed &= ok;
        per_rate.push(json!({
            "gamma": gamma,
            "fraction_within_4se": fraction,
            "imaginary_within_5se": im_hits,
            "max_z": max_z,
            "passed": ok,
        }));
    }
    Ok(Check {
        name: "dephasing_mc",
        passed,
        detail: format!(
            "{} trajectories per rate, {} grid points, need >= {} of points within 4 se",
            v.dephasing_trajectories,
            grid.len(),
            v.dephasing_min_fraction
        ),
        values: json!(per_rate),
    })
}

/// Negativity of the trajectory-averaged two-qubit state against |Γ(τ)|.
pub fn state_check(config: &ExperimentConfig, runtime: &Runtime) -> Result<Check> {
    let v = &config.verify;
    let grid = v.state_grid.points()?;
    let (lo, hi) = v.state_gamma_range;
    let params = NoiseParams::new(v.state_alpha, lo, hi, v.state_n_fluctuators)?;
    let a = sample_switching_rates(&params, verify_seed(config.master_seed, 1, 0));
    let b = sample_switching_rates(&params, verify_seed(config.master_seed, 1, 1));
    let est = mc_two_qubit_state_with(
        runtime,
        &a,
        &b,
        &grid,
        v.state_trajectories,
        verify_seed(config.master_seed, 1, 2),
    )?;
    let mut neg_hits = 0;
    let mut off_x_total = 0;
    let mut off_x_hits = 0;
    let mut max_z: f64 = 0.0;
    for (e, &tau) in est.iter().zip(&grid) {
        let target = gamma_factor(&a, &b, tau)?.abs();
        let n = e.negativity()?;
        neg_hits += usize::from(n.within(target, 4.0));
        max_z = max_z.max(n.z_score(target));
        for (_, _, re, im) in e.off_x_entries() {
            off_x_total += 2;
            off_x_hits += usize::from(re.within(0.0, 5.0)) + usize::from(im.within(0.0, 5.0));
        }
    }
    let passed = neg_hits == grid.len() && off_x_hits == off_x_total;
    Ok(Check {
        name: "state_mc",
        passed,
        detail: format!(
            "{} trajectories, {} fluctuators per bath; negativity within 4 se and off-X entries within 5 se at every point",
            v.state_trajectories, v.state_n_fluctuators
        ),
        values: json!({
            "rates_a": a.rates(),
            "rates_b": b.rates(),
            "negativity_within_4se": neg_hits,
            "points": grid.len(),
            "max_negativity_z": max_z,
            "off_x_within_5se": off_x_hits,
            "off_x_total": off_x_total,
        }),
    })
}

/// Eigen-decomposition negativity of the Bell mixture against |Γ|.
pub fn closed_form_check(config: &ExperimentConfig) -> Result<Check> {
    let n = config.verify.closed_form_points;
    let mut max_neg: f64 = 0.0;
    let mut max_discord: f64 = 0.0;
    for i in 0..n {
        let g = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let eig = negativity_eig(&bell_mixture(g)?)?;
        let c = correlations_closed(0.0, g)?;
        max_neg = max_neg.max((eig - c.negativity).abs());
        max_discord = max_discord.max((c.discord - binary_h(c.negativity)?).abs());
    }
    Ok(Check {
        name: "closed_form",
        passed: max_neg <= CLOSED_FORM_TOLERANCE && max_discord <= 1e-12,
        detail: format!("{n} values of Gamma in [-1, 1], tolerance {CLOSED_FORM_TOLERANCE:e}"),
        values: json!({ "max_negativity_error": max_neg, "max_discord_error": max_discord }),
    })
}

/// Fitted log-log slope of sampled ensemble spectra against −α (or the
/// configured target).
pub fn slope_check(config: &ExperimentConfig, runtime: &Runtime) -> Result<Check> {
    let v = &config.verify;
    let (lo, hi) = v.slope_gamma_range;
    let freqs = log_grid(v.slope_freq_range.0, v.slope_freq_range.1, v.slope_n_freqs);
    let fits = runtime.map(v.slope_alphas.len(), |k| {
        let params = NoiseParams::new(v.slope_alphas[k], lo, hi, v.slope_n_fluctuators)?;
        let ensemble = sample_switching_rates(&params, verify_seed(config.master_seed, 2, k));
        compare_spectra(&ensemble, &params, &freqs).map(|(_, fit)| fit)
    });
    let mut passed = true;
    let mut rows = Vec::new();
    for fit in fits {
        let fit = fit?;
        let target = v.slope_target.unwrap_or(-fit.alpha);
        let ok = (fit.ensemble_slope - target).abs() <= v.slope_tolerance;
        passed &= ok;
        rows.push(json!({
            "alpha": fit.alpha,
            "target": target,
            "ensemble_slope": fit.ensemble_slope,
            "analytic_slope": fit.analytic_slope,
            "max_rel_deviation_from_quadrature": fit.max_rel_deviation,
            "passed": ok,
        }));
    }
    Ok(Check {
        name: "spectrum_slope",
        passed,
        detail: format!(
            "{} fluctuators, f in [{}, {}], |slope - target| <= {}",
            v.slope_n_fluctuators, v.slope_freq_range.0, v.slope_freq_range.1, v.slope_tolerance
        ),
        values: json!(rows),
    })
}

/// ∫ p_α(γ) dγ over the band, integrated in ln γ.
pub fn rate_mass(params: &NoiseParams) -> Result<f64> {
    let (lo, hi) = (params.gamma_min(), params.gamma_max());
    let integral = integrate(
        |u| {
            let g = u.exp().clamp(lo, hi);
            switching_rate_pdf(params, g).map_or(f64::NAN, |p| p * g)
        },
        lo.ln(),
        hi.ln(),
        0.0,
        1e-12,
    )?;
    Ok(integral.value)
}

pub fn rate_mass_check(config: &ExperimentConfig) -> Result<Check> {
    let v = &config.verify;
    let mut cases: Vec<(f64, (f64, f64))> = Vec::new();
    for &a in &v.slope_alphas {
        cases.push((a, v.slope_gamma_range));
    }
    for &a in &v.ks_alphas {
        cases.push((a, v.ks_gamma_range));
    }
    for &a in &config.alpha_values {
        cases.push((a, config.gamma_range));
    }
    let mut rows = Vec::new();
    let mut max_err: f64 = 0.0;
    for (alpha, (lo, hi)) in cases {
        let mass = rate_mass(&NoiseParams::new(alpha, lo, hi, 1)?)?;
        max_err = max_err.max((mass - 1.0).abs());
        rows.push(json!({ "alpha": alpha, "gamma_min": lo, "gamma_max": hi, "mass": mass }));
    }
    Ok(Check {
        name: "rate_pdf_normalization",
        passed: max_err <= RATE_MASS_TOLERANCE,
        detail: format!("|mass - 1| <= {RATE_MASS_TOLERANCE:e}"),
        values: json!({ "max_error": max_err, "cases": rows }),
    })
}

pub fn phase_mass_check() -> Result<Check> {
    let mut rows = Vec::new();
    let mut max_err: f64 = 0.0;
    for gamma in PHASE_MASS_RATES {
        for tau in PHASE_MASS_TIMES {
            let mass = phase_mass(gamma, tau)?;
            max_err = max_err.max((mass - 1.0).abs());
            rows.push(json!({ "gamma": gamma, "tau": tau, "mass": mass }));
        }
    }
    Ok(Check {
        name: "phase_pdf_normalization",
        passed: max_err <= PHASE_MASS_TOLERANCE,
        detail: format!("|mass - 1| <= {PHASE_MASS_TOLERANCE:e} on a 3x3 (gamma, tau) grid"),
        values: json!({ "max_error": max_err, "cases": rows }),
    })
}

/// Kolmogorov–Smirnov distance of a sorted sample to a CDF.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).max((i + 1) as f64 / n - c)
        })
        .fold(0.0, f64::max)
}

pub fn ks_check(config: &ExperimentConfig, runtime: &Runtime) -> Result<Check> {
    let v = &config.verify;
    let (lo, hi) = v.ks_gamma_range;
    let stats = runtime.map(v.ks_alphas.len(), |k| -> Result<f64> {
        let params = NoiseParams::new(v.ks_alphas[k], lo, hi, v.ks_samples)?;
        let mut rates = sample_switching_rates(&params, verify_seed(config.master_seed, 3, k))
            .rates()
            .to_vec();
        rates.sort_by(f64::total_cmp);
        Ok(ks_distance(&rates, |g| switching_rate_cdf(&params, g).unwrap_or(f64::NAN)))
    });
    let mut rows = Vec::new();
    let mut passed = true;
    for (k, d) in stats.into_iter().enumerate() {
        let d = d?;
        let ok = d < v.ks_threshold;
        passed &= ok;
        rows.push(json!({ "alpha": v.ks_alphas[k], "ks": d, "passed": ok }));
    }
    Ok(Check {
        name: "rate_sampling_ks",
        passed,
        detail: format!("{} draws per alpha, KS < {}", v.ks_samples, v.ks_threshold),
        values: json!(rows),
    })
}
