mod oracle;

use oracle::{ks_statistic, log_grid, simpson};
use telegraph_core::noise::{
    analytic_spectrum, ensemble_spectrum, fit_spectral_slope, sample_switching_rates,
    switching_rate_cdf, switching_rate_pdf, FluctuatorEnsemble, NoiseParams,
};

const ALPHAS: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];

#[test]
fn pdf_integrates_to_one() {
    for alpha in ALPHAS {
        let p = NoiseParams::new(alpha, 1e-4, 1e4, 1).unwrap();
        let (lo, hi) = (1e-4_f64.ln(), 1e4_f64.ln());
        // ∫ p(γ) dγ = ∫ p(e^u) e^u du; smooth in u, Simpson error ~ h⁴
        let mass = simpson(
            |u| {
                let g = u.exp().clamp(1e-4, 1e4);
                switching_rate_pdf(&p, g).unwrap() * g
            },
            lo,
            hi,
            200_000,
        );
        assert!((mass - 1.0).abs() < 1e-8, "alpha = {alpha}: {mass}");
    }
}

#[test]
fn cdf_is_the_integral_of_the_pdf() {
    let p = NoiseParams::new(1.6, 1e-2, 1e2, 1).unwrap();
    for &g in &[0.05, 0.3, 1.0, 17.0] {
        let integral = simpson(
            |u| {
                let x = u.exp();
                switching_rate_pdf(&p, x.clamp(1e-2, 1e2)).unwrap() * x
            },
            1e-2_f64.ln(),
            f64::ln(g),
            20_000,
        );
        assert!((integral - switching_rate_cdf(&p, g).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn samples_pass_kolmogorov_smirnov() {
    for alpha in ALPHAS {
        let p = NoiseParams::new(alpha, 1e-4, 1e4, 1_000_000).unwrap();
        let mut rates = sample_switching_rates(&p, 2024).rates().to_vec();
        let d = ks_statistic(&mut rates, |g| switching_rate_cdf(&p, g).unwrap());
        assert!(d < 0.002, "alpha = {alpha}: KS = {d}");
    }
}

#[test]
fn spectrum_is_linear_in_the_ensemble() {
    let pa = NoiseParams::new(1.5, 1e-3, 1e3, 40).unwrap();
    let pb = NoiseParams::new(1.5, 1e-3, 1e3, 60).unwrap();
    let a = sample_switching_rates(&pa, 1);
    let b = sample_switching_rates(&pb, 2);
    let both_params = NoiseParams::new(1.5, 1e-3, 1e3, 100).unwrap();
    let mut rates = a.rates().to_vec();
    rates.extend_from_slice(b.rates());
    let both = FluctuatorEnsemble::from_rates(both_params, rates, 0).unwrap();
    for f in log_grid(1e-3, 1e3, 13) {
        let sum = ensemble_spectrum(&a, f).unwrap() + ensemble_spectrum(&b, f).unwrap();
        let joint = ensemble_spectrum(&both, f).unwrap();
        assert!((joint / sum - 1.0).abs() < 1e-14);
    }
}

#[test]
fn analytic_spectrum_slope_tracks_alpha() {
    let (g1, g2) = (1e-4, 1e4);
    let freqs = log_grid(10.0 * g1, g2 / 10.0, 25);
    for alpha in [1.0, 1.5, 2.0] {
        let p = NoiseParams::new(alpha, g1, g2, 1).unwrap();
        let s: Vec<f64> = freqs.iter().map(|&f| analytic_spectrum(&p, f).unwrap()).collect();
        let slope = fit_spectral_slope(&freqs, &s).unwrap();
        assert!((slope + alpha).abs() < 0.1, "alpha = {alpha}: slope {slope}");
    }
}

#[test]
fn sampled_ensemble_slope_at_three_halves() {
    let p = NoiseParams::new(1.5, 1e-4, 1e4, 10_000).unwrap();
    let e = sample_switching_rates(&p, 77);
    let freqs = log_grid(1e-3, 1e3, 25);
    let s: Vec<f64> = freqs.iter().map(|&f| ensemble_spectrum(&e, f).unwrap()).collect();
    let slope = fit_spectral_slope(&freqs, &s).unwrap();
    assert!((slope + 1.5).abs() < 0.15, "slope {slope}");
}

#[test]
fn pink_ensemble_mean_matches_quadrature() {
    let n = 100_000;
    let p = NoiseParams::new(1.0, 1e-4, 1e4, n).unwrap();
    let e = sample_switching_rates(&p, 5);
    for f in log_grid(1e-2, 1e2, 9) {
        let mc = ensemble_spectrum(&e, f).unwrap() / n as f64;
        let quad = analytic_spectrum(&p, f).unwrap();
        assert!((mc / quad - 1.0).abs() < 0.01, "f = {f}: {mc} vs {quad}");
    }
}

#[test]
fn pink_ensemble_slope_is_minus_one() {
    let p = NoiseParams::new(1.0, 1e-4, 1e4, 1000).unwrap();
    let e = sample_switching_rates(&p, 6);
    let freqs = log_grid(1e-2, 1e2, 25);
    let s: Vec<f64> = freqs.iter().map(|&f| ensemble_spectrum(&e, f).unwrap()).collect();
    assert!((fit_spectral_slope(&freqs, &s).unwrap() + 1.0).abs() < 0.1);
}

#[test]
fn analytic_slope_at_the_smallest_band_ratio() {
    let (g1, g2) = (1e-3, 1e3);
    let freqs = log_grid(10.0 * g1, g2 / 10.0, 25);
    let slope = |alpha| {
        let p = NoiseParams::new(alpha, g1, g2, 1).unwrap();
        let s: Vec<f64> = freqs.iter().map(|&f| analytic_spectrum(&p, f).unwrap()).collect();
        fit_spectral_slope(&freqs, &s).unwrap()
    };
    for alpha in [1.0, 1.25, 1.5, 1.75] {
        assert!((slope(alpha) + alpha).abs() < 0.1, "alpha = {alpha}");
    }
    // edge rolloff flattens the brown spectrum by more than 0.1 at this ratio
    let brown = slope(2.0);
    assert!((brown + 1.8785).abs() < 1e-3, "{brown}");
}
