//! Dephasing factors of telegraph fluctuators.
//!
//! A fluctuator flipping at rate γ imprints a phase φ(τ) = −∫₀^τ c(s) ds on
//! its qubit. The averaged phase factor D(γ, τ) = ⟨e^{2iφ(τ)}⟩ is
//!
//! ```text
//! D = e^{-γτ} [cosh(κτ) + (γ/κ) sinh(κτ)],  κ = √(γ² − 4),  γ > 2
//! D = e^{-γτ} [cos(κτ)  + (γ/κ) sin(κτ)],   κ = √(4 − γ²),  γ < 2
//! ```
//!
//! and the two-qubit state depends only on Γ(τ) = Π_j D_{jA}(τ) D_{jB}(τ).

use alloc::vec::Vec;

use crate::special::{i0e, i1e};
use crate::{Error, Result};

/// Distance from γ = 2 (in units of ν) inside which the boundary series is used.
pub const CRITICAL_BAND: f64 = 1e-6;

/// Coupling of a qubit to its bath.
///
/// Rates and times elsewhere in the crate are already scaled by `nu`; the
/// qubit energy `epsilon` multiplies the identity and only adds a global
/// phase, so no dynamics depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    nu: f64,
    epsilon: f64,
}

impl CouplingParams {
    pub fn new(nu: f64, epsilon: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::param("nu", nu, "a finite coupling > 0"));
        }
        Ok(Self { nu, epsilon })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// τ = ν·t
    pub fn dimensionless_time(&self, t: f64) -> f64 {
        self.nu * t
    }

    /// γ/ν
    pub fn dimensionless_rate(&self, gamma: f64) -> f64 {
        gamma / self.nu
    }
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self {
            nu: 1.0,
            epsilon: 0.0,
        }
    }
}

/// D(τ) or Γ(τ) sampled on a time grid starting at τ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingCurve {
    tau_grid: Vec<f64>,
    values: Vec<f64>,
}

impl DephasingCurve {
    pub fn tau_grid(&self) -> &[f64] {
        &self.tau_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.tau_grid.iter().copied().zip(self.values.iter().copied())
    }
}

/// Checks the invariants of a curve grid: starts at 0, strictly increasing.
pub fn validate_curve_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.first() != Some(&0.0) {
        return Err(Error::Grid(0));
    }
    for (i, w) in tau_grid.windows(2).enumerate() {
        if !(w[1] > w[0] && w[1].is_finite()) {
            return Err(Error::Grid(i + 1));
        }
    }
    Ok(())
}

/// Uniform grid of `n_points` times on [0, τ_max] (just `[0]` for one point).
pub fn uniform_grid(tau_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::param("tau_max", tau_max, "a finite time > 0"));
    }
    if n_points == 0 {
        return Err(Error::param("n_points", 0.0, "at least one point"));
    }
    if n_points == 1 {
        return Ok(alloc::vec![0.0]);
    }
    let step = tau_max / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| if i + 1 == n_points { tau_max } else { i as f64 * step })
        .collect())
}

fn check_rate_time(gamma: f64, tau: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", gamma, "a finite rate >= 0"));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::param("tau", tau, "a finite time >= 0"));
    }
    Ok(())
}

/// Single-fluctuator dephasing factor D(γ, τ), with γ in units of ν.
pub fn rtn_dephasing(gamma: f64, tau: f64) -> Result<f64> {
    check_rate_time(gamma, tau)?;
    Ok(dephasing_unchecked(gamma, tau))
}

pub(crate) fn dephasing_unchecked(gamma: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        return 1.0;
    }
    // γ² − 4 without cancellation near the boundary
    let delta = (gamma - 2.0) * (gamma + 2.0);
    let d = if libm::fabs(gamma - 2.0) < CRITICAL_BAND {
        libm::exp(-gamma * tau) * boundary_series(gamma, delta, tau)
    } else if delta > 0.0 {
        let kappa = libm::sqrt(delta);
        let ratio = gamma / kappa;
        // e^{-γτ}cosh and e^{-γτ}sinh rewritten with κ − γ = −4/(γ + κ) so
        // neither exponential overflows for large γτ
        let slow = libm::exp(-4.0 * tau / (gamma + kappa));
        let fast = libm::exp(-(gamma + kappa) * tau);
        0.5 * ((1.0 + ratio) * slow + (1.0 - ratio) * fast)
    } else {
        let kappa = libm::sqrt(-delta);
        let phase = kappa * tau;
        libm::exp(-gamma * tau) * (libm::cos(phase) + gamma / kappa * libm::sin(phase))
    };
    d.clamp(-1.0, 1.0)
}

/// cosh(√δ τ) + γ sinh(√δ τ)/√δ as a power series in δτ², valid for either
/// sign of δ and exact at δ = 0, where it reduces to 1 + γτ.
fn boundary_series(gamma: f64, delta: f64, tau: f64) -> f64 {
    let x = delta * tau * tau;
    let mut even = 1.0; // x^k / (2k)!
    let mut odd = tau; // τ x^k / (2k+1)!
    let mut total = even + gamma * odd;
    let mut k = 1.0;
    loop {
        even *= x / ((2.0 * k - 1.0) * (2.0 * k));
        odd *= x / ((2.0 * k) * (2.0 * k + 1.0));
        let term = even + gamma * odd;
        total += term;
        if libm::fabs(term) <= 1e-17 * libm::fabs(total) || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    total
}

fn check_rates(name: &'static str, rates: &[f64]) -> Result<()> {
    if rates.is_empty() {
        return Err(Error::EmptyEnsemble(name));
    }
    for &g in rates {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::param("gamma", g, "a finite rate >= 0"));
        }
    }
    Ok(())
}

/// Γ(τ) = Π_j D(γ_{jA}, τ) · Π_j D(γ_{jB}, τ).
///
/// Accepts anything that exposes its rates as a slice, including
/// [`crate::FluctuatorEnsemble`]. The product is accumulated as a log
/// magnitude and a sign so it does not underflow for hundreds of factors.
pub fn gamma_factor<A, B>(bath_a: &A, bath_b: &B, tau: f64) -> Result<f64>
where
    A: AsRef<[f64]> + ?Sized,
    B: AsRef<[f64]> + ?Sized,
{
    let (a, b) = (bath_a.as_ref(), bath_b.as_ref());
    check_rates("bath A", a)?;
    check_rates("bath B", b)?;
    check_rate_time(0.0, tau)?;
    Ok(gamma_unchecked(a.iter().chain(b), tau))
}

/// ln|Γ(τ)| and the sign of Γ(τ); the magnitude is `-inf` when some factor
/// vanishes exactly.
pub fn log_gamma_factor<A, B>(bath_a: &A, bath_b: &B, tau: f64) -> Result<(f64, f64)>
where
    A: AsRef<[f64]> + ?Sized,
    B: AsRef<[f64]> + ?Sized,
{
    let (a, b) = (bath_a.as_ref(), bath_b.as_ref());
    check_rates("bath A", a)?;
    check_rates("bath B", b)?;
    check_rate_time(0.0, tau)?;
    Ok(log_product(a.iter().chain(b), tau))
}

fn log_product<'a>(rates: impl Iterator<Item = &'a f64>, tau: f64) -> (f64, f64) {
    let mut log_mag = crate::sum::CompensatedSum::new();
    let mut negative = false;
    for &g in rates {
        let d = dephasing_unchecked(g, tau);
        if d == 0.0 {
            return (f64::NEG_INFINITY, 1.0);
        }
        negative ^= d < 0.0;
        log_mag += libm::log(libm::fabs(d));
    }
    (log_mag.value().min(0.0), if negative { -1.0 } else { 1.0 })
}

fn gamma_unchecked<'a>(rates: impl Iterator<Item = &'a f64>, tau: f64) -> f64 {
    let (log_mag, sign) = log_product(rates, tau);
    sign * libm::exp(log_mag)
}

/// D(γ, τ) over a grid.
pub fn dephasing_curve(gamma: f64, tau_grid: &[f64]) -> Result<DephasingCurve> {
    validate_curve_grid(tau_grid)?;
    check_rate_time(gamma, 0.0)?;
    Ok(DephasingCurve {
        tau_grid: tau_grid.to_vec(),
        values: tau_grid.iter().map(|&t| dephasing_unchecked(gamma, t)).collect(),
    })
}

/// Γ(τ) over a grid.
pub fn gamma_curve<A, B>(bath_a: &A, bath_b: &B, tau_grid: &[f64]) -> Result<DephasingCurve>
where
    A: AsRef<[f64]> + ?Sized,
    B: AsRef<[f64]> + ?Sized,
{
    let (a, b) = (bath_a.as_ref(), bath_b.as_ref());
    check_rates("bath A", a)?;
    check_rates("bath B", b)?;
    validate_curve_grid(tau_grid)?;
    Ok(DephasingCurve {
        tau_grid: tau_grid.to_vec(),
        values: tau_grid
            .iter()
            .map(|&t| gamma_unchecked(a.iter().chain(b), t))
            .collect(),
    })
}

/// Distribution of the accumulated phase of one fluctuator at time τ
/// (ν = 1, support [−τ, τ]).
///
/// With no flip the phase sits at ±τ, each with weight ½e^{-γτ}; otherwise it
/// spreads over the open interval with the continuous density reported in
/// `density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDensity {
    pub density: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

/// Continuous density at `phi` plus the two endpoint atoms.
pub fn phase_pdf(phi: f64, gamma: f64, tau: f64) -> Result<PhaseDensity> {
    check_rate_time(gamma, tau)?;
    if tau == 0.0 {
        return Err(Error::param("tau", tau, "a time > 0"));
    }
    if !phi.is_finite() {
        return Err(Error::param("phi", phi, "a finite phase"));
    }
    let atom = 0.5 * libm::exp(-gamma * tau);
    let density = if libm::fabs(phi) >= tau || gamma == 0.0 {
        0.0
    } else {
        continuous_density(phi / tau, gamma, tau)
    };
    Ok(PhaseDensity {
        density,
        delta_plus: atom,
        delta_minus: atom,
    })
}

/// ½γ e^{-γτ} [I₁(γτs)/s + I₀(γτs)] with s = √(1 − r²), r = φ/τ ∈ (−1, 1).
fn continuous_density(r: f64, gamma: f64, tau: f64) -> f64 {
    let x = gamma * tau;
    let s = libm::sqrt((1.0 - r) * (1.0 + r));
    let xs = x * s;
    let i1_over_s = if xs < 1e-8 {
        // I₁(xs)/s → x/2 (1 + (xs)²/8)
        0.5 * x * (1.0 + xs * xs / 8.0) * libm::exp(-x)
    } else {
        i1e(xs) / s * libm::exp(xs - x)
    };
    let i0 = i0e(xs) * libm::exp(xs - x);
    0.5 * gamma * (i1_over_s + i0)
}

/// Total probability carried by [`phase_pdf`]: quadrature of the continuous
/// part plus both atoms. Equals 1 up to quadrature error.
pub fn phase_mass(gamma: f64, tau: f64) -> Result<f64> {
    phase_expectation(gamma, tau, |_| 1.0)
}

/// ⟨g(φ)⟩ under [`phase_pdf`]; with g = cos(2φ) this reproduces D(γ, τ).
pub fn phase_expectation<G: Fn(f64) -> f64>(gamma: f64, tau: f64, g: G) -> Result<f64> {
    let atoms = phase_pdf(0.0, gamma, tau)?;
    let edges = atoms.delta_plus * g(tau) + atoms.delta_minus * g(-tau);
    if gamma == 0.0 {
        return Ok(edges);
    }
    // φ = τ sin θ removes the square-root behaviour at the support edges
    let half_pi = 0.5 * core::f64::consts::PI;
    let integrand = |theta: f64| {
        let r = libm::sin(theta);
        let phi = tau * r;
        continuous_density(r, gamma, tau) * g(phi) * tau * libm::cos(theta)
    };
    let inner = crate::quad::integrate(integrand, -half_pi, half_pi, 1e-14, 1e-12)?;
    Ok(edges + inner.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn starts_at_one() {
        for &g in &[0.0, 0.3, 2.0, 5.0, 1e4] {
            assert_eq!(rtn_dephasing(g, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn frozen_fluctuator_oscillates() {
        for i in 0..50 {
            let tau = i as f64 * 0.13;
            let d = rtn_dephasing(0.0, tau).unwrap();
            assert!((d - libm::cos(2.0 * tau)).abs() < 1e-15);
        }
    }

    #[test]
    fn critical_rate_limit() {
        let want = 3.0 * libm::exp(-2.0); // e^{-γτ}(1 + γτ) at γ=2, τ=1
        assert!((rtn_dephasing(2.0, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.406005849709838).abs() < 1e-14);
        // both analytic branches agree with the limit just off the boundary
        let below = rtn_dephasing(2.0 * (1.0 - 1e-5), 1.0).unwrap();
        let above = rtn_dephasing(2.0 * (1.0 + 1e-5), 1.0).unwrap();
        assert!((below - want).abs() < 1e-4);
        assert!((above - want).abs() < 1e-4);
    }

    #[test]
    fn branch_values() {
        // direct evaluation of the closed forms (numpy)
        assert!((rtn_dephasing(0.5, 1.0).unwrap() - (-0.0706445509194641)).abs() < 1e-14);
        assert!((rtn_dephasing(4.0, 3.0).unwrap() - 0.21584589335406892).abs() < 1e-14);
        assert!((rtn_dephasing(1.0, 2.0).unwrap() - (-0.1531227684140493)).abs() < 1e-14);
    }

    #[test]
    fn fast_fluctuator_does_not_overflow() {
        let d = rtn_dephasing(1e6, 1e3).unwrap();
        // motional narrowing: D ≈ e^{-4τ/(2γ)}
        assert!((d - libm::exp(-2e-3)).abs() < 1e-9);
    }

    #[test]
    fn rejects_negative_inputs() {
        assert!(rtn_dephasing(-1.0, 1.0).is_err());
        assert!(rtn_dephasing(1.0, -1.0).is_err());
    }

    #[test]
    fn gamma_factor_basic() {
        let d = rtn_dephasing(0.7, 1.3).unwrap();
        let g = gamma_factor(&[0.7][..], &[0.7][..], 1.3).unwrap();
        assert!((g - d * d).abs() < 1e-15);
        assert_eq!(gamma_factor(&[0.1, 3.0][..], &[5.0][..], 0.0).unwrap(), 1.0);
        assert!(gamma_factor(&[][..], &[1.0][..], 1.0).is_err());
    }

    #[test]
    fn frozen_baths_fully_revive() {
        let frozen = vec![0.0; 50];
        let g = gamma_factor(&frozen, &frozen, core::f64::consts::FRAC_PI_2).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_factor_sign_bookkeeping() {
        let rates = vec![0.5; 3];
        let tau = 1.0;
        let d = rtn_dephasing(0.5, tau).unwrap();
        let g = gamma_factor(&rates, &rates, tau).unwrap();
        assert!((g - d.powi(6)).abs() < 1e-15);
        let odd = gamma_factor(&rates, &rates[..2], tau).unwrap();
        assert!(odd < 0.0 && (odd - d.powi(5)).abs() < 1e-15);
    }

    #[test]
    fn log_form_keeps_magnitude_below_f64_range() {
        // 400 factors of |D| ≈ 0.07 multiply to ~1e-462, below the smallest f64
        let rates = vec![0.5; 200];
        let (log_mag, sign) = log_gamma_factor(&rates, &rates, 1.0).unwrap();
        let d = rtn_dephasing(0.5, 1.0).unwrap();
        assert!((log_mag / (400.0 * libm::log(d.abs())) - 1.0).abs() < 1e-13);
        assert_eq!(sign, 1.0);
        assert_eq!(gamma_factor(&rates, &rates, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn curve_grid_validation() {
        assert!(validate_curve_grid(&[0.0, 1.0, 2.0]).is_ok());
        assert!(validate_curve_grid(&[0.1, 1.0]).is_err());
        assert!(validate_curve_grid(&[0.0, 1.0, 1.0]).is_err());
        assert!(validate_curve_grid(&[]).is_err());
        assert_eq!(uniform_grid(2.0, 1).unwrap(), vec![0.0]);
        let g = uniform_grid(5.0, 50).unwrap();
        assert_eq!((g[0], g[49], g.len()), (0.0, 5.0, 50));
    }

    #[test]
    fn phase_pdf_frozen_limit() {
        let p = phase_pdf(0.3, 0.0, 1.0).unwrap();
        assert_eq!(p.density, 0.0);
        assert_eq!(p.delta_plus + p.delta_minus, 1.0);
        assert_eq!(phase_mass(0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn phase_pdf_outside_support_is_zero() {
        assert_eq!(phase_pdf(1.5, 1.0, 1.0).unwrap().density, 0.0);
        assert!(phase_pdf(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn phase_pdf_edge_limit_is_finite() {
        let inside = phase_pdf(1.0 - 1e-12, 2.0, 1.0).unwrap().density;
        // ½γe^{-x}[x/2 + 1] at the support edge, x = γτ
        let want = 0.5 * 2.0 * libm::exp(-2.0) * (1.0 + 1.0);
        assert!((inside - want).abs() < 1e-6);
    }

    #[test]
    fn phase_moment_reproduces_dephasing() {
        for &g in &[0.5, 2.0, 4.0] {
            for &t in &[0.5, 1.0, 3.0] {
                let m = phase_expectation(g, t, |phi| libm::cos(2.0 * phi)).unwrap();
                assert!((m - rtn_dephasing(g, t).unwrap()).abs() < 1e-9, "{g} {t}");
                assert!((phase_mass(g, t).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn coupling_params() {
        assert!(CouplingParams::new(0.0, 1.0).is_err());
        let c = CouplingParams::new(2.0, 5.0).unwrap();
        assert_eq!(c.dimensionless_time(3.0), 6.0);
        assert_eq!(c.dimensionless_rate(3.0), 1.5);
        assert_eq!(CouplingParams::default().nu(), 1.0);
    }
}
