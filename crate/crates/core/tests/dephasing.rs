mod oracle;

use std::f64::consts::{FRAC_PI_2, PI};

use oracle::{bessel_i, simpson};
use telegraph_core::dephasing::{gamma_factor, phase_pdf, rtn_dephasing};

const PAIRS: [(f64, f64); 9] = [
    (0.5, 0.5),
    (0.5, 1.0),
    (0.5, 3.0),
    (2.0, 0.5),
    (2.0, 1.0),
    (2.0, 3.0),
    (4.0, 0.5),
    (4.0, 1.0),
    (4.0, 3.0),
];

/// ∫ g(φ) p(φ) dφ over the open support, with φ = τ sin θ to smooth the edges.
fn continuous_part<G: Fn(f64) -> f64>(gamma: f64, tau: f64, g: G) -> f64 {
    simpson(
        |theta| {
            let phi = tau * theta.sin();
            let density = if theta.abs() >= FRAC_PI_2 {
                // edge limit ½γe^{-γτ}(γτ/2 + 1)
                0.5 * gamma * (-gamma * tau).exp() * (0.5 * gamma * tau + 1.0)
            } else {
                phase_pdf(phi, gamma, tau).unwrap().density
            };
            density * g(phi) * tau * theta.cos()
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        20_000,
    )
}

#[test]
fn phase_density_matches_bessel_series() {
    // ½γe^{-γτ}[I₁(γτs)/s + I₀(γτs)] with unscaled series Bessel functions
    for (gamma, tau) in PAIRS {
        for r in [-0.9_f64, -0.3, 0.0, 0.6] {
            let s: f64 = (1.0 - r * r).sqrt();
            let x = gamma * tau * s;
            let want =
                0.5 * gamma * (-gamma * tau).exp() * (bessel_i(1, x) / s + bessel_i(0, x));
            let got = phase_pdf(r * tau, gamma, tau).unwrap().density;
            assert!((got / want - 1.0).abs() < 1e-12, "{gamma} {tau} {r}");
        }
    }
}

#[test]
fn phase_distribution_has_unit_mass() {
    for (gamma, tau) in PAIRS {
        let atoms = phase_pdf(0.0, gamma, tau).unwrap();
        let mass = continuous_part(gamma, tau, |_| 1.0) + atoms.delta_plus + atoms.delta_minus;
        assert!((mass - 1.0).abs() < 1e-6, "{gamma} {tau}: {mass}");
    }
}

#[test]
fn phase_average_reproduces_dephasing_factor() {
    for (gamma, tau) in PAIRS {
        let atoms = phase_pdf(0.0, gamma, tau).unwrap();
        // the sine part vanishes by symmetry; atoms contribute cos(2τ)
        let avg = continuous_part(gamma, tau, |phi| (2.0 * phi).cos())
            + (atoms.delta_plus + atoms.delta_minus) * (2.0 * tau).cos();
        let d = rtn_dephasing(gamma, tau).unwrap();
        assert!((avg - d).abs() < 1e-6, "{gamma} {tau}: {avg} vs {d}");
    }
}

#[test]
fn continuous_across_critical_rate() {
    for i in 0..=100 {
        let tau = i as f64 * 0.1;
        let below = rtn_dephasing(2.0 * (1.0 - 1e-8), tau).unwrap();
        let above = rtn_dephasing(2.0 * (1.0 + 1e-8), tau).unwrap();
        assert!((below - above).abs() < 1e-6);
    }
    // just outside the series band both closed-form branches still agree
    for i in 0..=100 {
        let tau = i as f64 * 0.1;
        let below = rtn_dephasing(2.0 - 2e-6, tau).unwrap();
        let above = rtn_dephasing(2.0 + 2e-6, tau).unwrap();
        let at = rtn_dephasing(2.0, tau).unwrap();
        assert!((below - at).abs() < 1e-5 && (above - at).abs() < 1e-5);
    }
}

#[test]
fn fast_fluctuators_decay_monotonically() {
    for gamma in [2.01, 3.0, 10.0, 100.0] {
        let mut prev = 1.0;
        for i in 1..=500 {
            let d = rtn_dephasing(gamma, i as f64 * 0.02).unwrap();
            assert!(d > 0.0 && d < prev, "gamma = {gamma}");
            prev = d;
        }
    }
}

#[test]
fn slow_fluctuators_cross_zero_at_analytic_roots() {
    for gamma in [0.1_f64, 0.7, 1.5, 1.9] {
        let kappa = (4.0 - gamma * gamma).sqrt();
        // cos κτ + (γ/κ) sin κτ = 0  ⇔  κτ = π − atan(κ/γ) + mπ
        for m in 0..4 {
            let root = (PI - (kappa / gamma).atan() + m as f64 * PI) / kappa;
            let (mut lo, mut hi) = (root - 0.5 * PI / kappa, root + 0.5 * PI / kappa);
            let f = |t: f64| rtn_dephasing(gamma, t).unwrap();
            assert!(f(lo) * f(hi) < 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!((0.5 * (lo + hi) - root).abs() < 1e-6, "gamma = {gamma}, m = {m}");
        }
    }
}

#[test]
fn dephasing_is_bounded() {
    for gamma in [0.0, 0.05, 1.0, 1.999_999_5, 2.0, 2.5, 50.0] {
        for i in 0..=1000 {
            let d = rtn_dephasing(gamma, i as f64 * 0.05).unwrap();
            assert!(d.abs() <= 1.0);
        }
    }
}

#[test]
fn gamma_factor_factorizes_over_concatenation() {
    let (a1, a2) = ([0.1, 0.9, 3.0], [1.7, 25.0]);
    let (b1, b2) = ([0.4], [2.2, 0.05]);
    let a: Vec<f64> = a1.iter().chain(&a2).copied().collect();
    let b: Vec<f64> = b1.iter().chain(&b2).copied().collect();
    for i in 0..=40 {
        let tau = i as f64 * 0.125;
        let whole = gamma_factor(&a, &b, tau).unwrap();
        let parts = gamma_factor(&a1, &b1, tau).unwrap() * gamma_factor(&a2, &b2, tau).unwrap();
        assert!((whole - parts).abs() <= 1e-12 * parts.abs(), "tau = {tau}");
    }
}

#[test]
fn gamma_factor_bounded_by_smallest_factor() {
    let a = [0.3, 1.1, 4.0];
    let b = [0.05, 2.5];
    for i in 0..=100 {
        let tau = i as f64 * 0.05;
        let g = gamma_factor(&a, &b, tau).unwrap().abs();
        let min = a
            .iter()
            .chain(&b)
            .map(|&r| rtn_dephasing(r, tau).unwrap().abs())
            .fold(1.0, f64::min);
        assert!(g <= min + 1e-15);
    }
}
