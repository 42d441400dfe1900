//! Switching-rate ensembles and the spectra they produce.
//!
//! A 1/f^α spectrum over a band is built by summing Lorentzians of telegraph
//! fluctuators whose rates γ follow p_α(γ) ∝ γ^{-α} on [γ₁, γ₂]. Rates are in
//! units of the coupling ν.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::rng::{substream, unit};
use crate::{Error, Result};

/// |α − 1| below which the logarithmic (α = 1) branch is used.
pub const ALPHA_ONE_TOLERANCE: f64 = 1e-9;

/// Requested relative accuracy of [`analytic_spectrum`].
pub const SPECTRUM_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    alpha: f64,
    gamma_min: f64,
    gamma_max: f64,
    n_fluctuators: usize,
}

impl NoiseParams {
    pub fn new(alpha: f64, gamma_min: f64, gamma_max: f64, n_fluctuators: usize) -> Result<Self> {
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::param("alpha", alpha, "1 <= alpha <= 2"));
        }
        if !(gamma_min > 0.0 && gamma_min.is_finite()) {
            return Err(Error::param("gamma_min", gamma_min, "a finite rate > 0"));
        }
        if !(gamma_max > gamma_min && gamma_max.is_finite()) {
            return Err(Error::param("gamma_max", gamma_max, "a finite rate > gamma_min"));
        }
        if n_fluctuators == 0 {
            return Err(Error::param("n_fluctuators", 0.0, "at least one fluctuator"));
        }
        Ok(Self {
            alpha,
            gamma_min,
            gamma_max,
            n_fluctuators,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma_min(&self) -> f64 {
        self.gamma_min
    }

    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }

    pub fn n_fluctuators(&self) -> usize {
        self.n_fluctuators
    }

    fn is_log_uniform(&self) -> bool {
        libm::fabs(self.alpha - 1.0) < ALPHA_ONE_TOLERANCE
    }

    /// ln(γ₂/γ₁)
    fn log_span(&self) -> f64 {
        libm::log(self.gamma_max / self.gamma_min)
    }

    fn check_in_range(&self, gamma: f64) -> Result<()> {
        if gamma >= self.gamma_min && gamma <= self.gamma_max {
            Ok(())
        } else {
            Err(Error::Domain {
                name: "gamma",
                value: gamma,
                lo: self.gamma_min,
                hi: self.gamma_max,
            })
        }
    }
}

/// A sampled set of switching rates together with what generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuatorEnsemble {
    params: NoiseParams,
    rates: Vec<f64>,
    sample_seed: u64,
}

impl FluctuatorEnsemble {
    /// Rebuilds an ensemble from stored rates, checking they are consistent
    /// with `params`.
    pub fn from_rates(params: NoiseParams, rates: Vec<f64>, sample_seed: u64) -> Result<Self> {
        if rates.len() != params.n_fluctuators {
            return Err(Error::param(
                "rates",
                rates.len() as f64,
                "exactly n_fluctuators rates",
            ));
        }
        for &g in &rates {
            params.check_in_range(g)?;
        }
        Ok(Self {
            params,
            rates,
            sample_seed,
        })
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn sample_seed(&self) -> u64 {
        self.sample_seed
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

impl AsRef<[f64]> for FluctuatorEnsemble {
    fn as_ref(&self) -> &[f64] {
        &self.rates
    }
}

/// p_α(γ) on [γ₁, γ₂].
///
/// The α > 1 branch is written as `a/expm1(a·L) · (γ₂/γ)^a / γ` with
/// a = α − 1 and L = ln(γ₂/γ₁), which is algebraically the textbook
/// normalization and tends smoothly to 1/(γL) as a → 0.
pub fn switching_rate_pdf(params: &NoiseParams, gamma: f64) -> Result<f64> {
    params.check_in_range(gamma)?;
    let span = params.log_span();
    if params.is_log_uniform() {
        return Ok(1.0 / (gamma * span));
    }
    let a = params.alpha - 1.0;
    let norm = a / libm::expm1(a * span);
    Ok(norm * libm::pow(params.gamma_max / gamma, a) / gamma)
}

/// Cumulative distribution of p_α.
pub fn switching_rate_cdf(params: &NoiseParams, gamma: f64) -> Result<f64> {
    params.check_in_range(gamma)?;
    let span = params.log_span();
    let x = libm::log(gamma / params.gamma_min);
    if params.is_log_uniform() {
        return Ok(x / span);
    }
    let a = params.alpha - 1.0;
    Ok(libm::expm1(-a * x) / libm::expm1(-a * span))
}

/// Inverse of [`switching_rate_cdf`] for u ∈ [0, 1].
///
/// For α > 1 this is γ = [γ₁^{1−α} − u(γ₁^{1−α} − γ₂^{1−α})]^{1/(1−α)},
/// evaluated as γ₁·(1 − u·c)^{-1/a} with c = 1 − (γ₁/γ₂)^a.
pub fn switching_rate_inverse_cdf(params: &NoiseParams, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            name: "u",
            value: u,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let span = params.log_span();
    let gamma = if params.is_log_uniform() {
        params.gamma_min * libm::exp(u * span)
    } else {
        let a = params.alpha - 1.0;
        let c = -libm::expm1(-a * span);
        params.gamma_min * libm::exp(-libm::log1p(-u * c) / a)
    };
    Ok(gamma.clamp(params.gamma_min, params.gamma_max))
}

/// Draws `n_fluctuators` i.i.d. rates by inverse-CDF sampling from the
/// substream `(seed, 0, 0, 0)`.
pub fn sample_switching_rates(params: &NoiseParams, seed: u64) -> FluctuatorEnsemble {
    let mut stream = substream(seed, [0, 0, 0]);
    let rates = (0..params.n_fluctuators)
        .map(|_| {
            switching_rate_inverse_cdf(params, unit(&mut stream))
                .expect("unit draws lie in [0, 1)")
        })
        .collect();
    FluctuatorEnsemble {
        params: *params,
        rates,
        sample_seed: seed,
    }
}

/// Lorentzian spectrum 4γ/(4π²f² + γ²) of a single telegraph fluctuator.
pub fn rtn_spectrum(gamma: f64, f: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", gamma, "a finite rate > 0"));
    }
    if !(f >= 0.0 && f.is_finite()) {
        return Err(Error::param("f", f, "a finite frequency >= 0"));
    }
    Ok(lorentzian(gamma, f))
}

#[inline]
fn lorentzian(gamma: f64, f: f64) -> f64 {
    let w = 2.0 * PI * f;
    4.0 * gamma / (w * w + gamma * gamma)
}

/// Sum of the fluctuator Lorentzians, S(f) = Σ_j S_RTN(f, γ_j).
pub fn ensemble_spectrum(ensemble: &FluctuatorEnsemble, f: f64) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble("ensemble"));
    }
    rtn_spectrum(ensemble.rates[0], f)?;
    Ok(crate::sum::sum(
        ensemble.rates.iter().map(|&g| lorentzian(g, f)),
    ))
}

/// ∫_{γ₁}^{γ₂} S_RTN(f, γ) p_α(γ) dγ by adaptive quadrature in ln γ.
pub fn analytic_spectrum(params: &NoiseParams, f: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::param("f", f, "a finite frequency > 0"));
    }
    let lo = libm::log(params.gamma_min);
    let hi = libm::log(params.gamma_max);
    let integrand = |u: f64| {
        let gamma = libm::exp(u).clamp(params.gamma_min, params.gamma_max);
        let p = switching_rate_pdf(params, gamma).unwrap_or(0.0);
        lorentzian(gamma, f) * p * gamma
    };
    // aim two digits tighter than the contract so the estimate is not marginal
    crate::quad::integrate(integrand, lo, hi, 0.0, SPECTRUM_REL_TOL * 1e-2)
        .map(|i| i.value)
        .map_err(|e| match e {
            Error::Quadrature { achieved, .. } => Error::Quadrature {
                achieved,
                requested: SPECTRUM_REL_TOL,
            },
            other => other,
        })
}

/// Least-squares slope of ln S against ln f.
pub fn fit_spectral_slope(freqs: &[f64], spectrum: &[f64]) -> Result<f64> {
    if freqs.len() != spectrum.len() {
        return Err(Error::LengthMismatch {
            left: freqs.len(),
            right: spectrum.len(),
        });
    }
    if freqs.len() < 2 {
        return Err(Error::TooFewPoints(freqs.len()));
    }
    for (&f, &s) in freqs.iter().zip(spectrum) {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::param("frequency", f, "finite and > 0"));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::param("spectral density", s, "finite and > 0"));
        }
    }
    let n = freqs.len() as f64;
    let mean_x = crate::sum::sum(freqs.iter().map(|&f| libm::log(f))) / n;
    let mean_y = crate::sum::sum(spectrum.iter().map(|&s| libm::log(s))) / n;
    let mut sxx = crate::sum::CompensatedSum::new();
    let mut sxy = crate::sum::CompensatedSum::new();
    for (&f, &s) in freqs.iter().zip(spectrum) {
        let dx = libm::log(f) - mean_x;
        sxx += dx * dx;
        sxy += dx * (libm::log(s) - mean_y);
    }
    if sxx.value() <= 0.0 {
        return Err(Error::param("frequency", freqs[0], "at least two distinct frequencies"));
    }
    Ok(sxy.value() / sxx.value())
}
