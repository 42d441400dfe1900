//! Exponentially scaled modified Bessel functions of the first kind.
//!
//! `i0e(x) = e^{-x} I₀(x)` and `i1e(x) = e^{-x} I₁(x)` for x ≥ 0. The
//! scaling keeps the telegraph phase density finite for large γτ.

/// Below this argument the power series is summed; above it the asymptotic
/// expansion is already accurate to machine precision.
const SERIES_LIMIT: f64 = 25.0;

pub fn i0e(x: f64) -> f64 {
    scaled(0, x)
}

pub fn i1e(x: f64) -> f64 {
    scaled(1, x)
}

fn scaled(order: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= SERIES_LIMIT {
        series(order, x) * libm::exp(-x)
    } else {
        asymptotic(order, x)
    }
}

/// Σ_k (x/2)^{2k+n} / (k! (k+n)!). All terms are positive, so the sum is
/// accurate to a few ulps.
fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut total = term;
    let n = order as f64;
    let mut k = 1.0;
    while term > total * 1e-17 {
        term *= q / (k * (k + n));
        total += term;
        k += 1.0;
    }
    total
}

/// e^{-x} I_n(x) ~ (2πx)^{-1/2} Σ_k (-1)^k a_k(n) / x^k, truncated at the
/// smallest term.
fn asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut total = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if libm::fabs(next) >= libm::fabs(term) || libm::fabs(next) < 1e-17 * libm::fabs(total) {
            if libm::fabs(next) < libm::fabs(term) {
                total += next;
            }
            break;
        }
        total += next;
        term = next;
        k += 1.0;
    }
    total / libm::sqrt(2.0 * core::f64::consts::PI * x)
}
