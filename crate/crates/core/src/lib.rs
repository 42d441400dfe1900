//! Two-qubit dephasing under classical 1/f^α telegraph noise.
//!
//! Each qubit couples to its own bath of bistable fluctuators whose switching
//! rates are drawn from a power-law distribution. The crate evaluates:
//!
//! - rate ensembles and their Lorentzian-sum spectra ([`noise`]),
//! - per-fluctuator dephasing factors and their product Γ(τ) ([`dephasing`]),
//! - the resulting Bell-mixture state with its negativity and discord ([`state`]),
//! - an exact-event trajectory simulator that checks all of the above
//!   independently of the closed forms ([`montecarlo`]).
//!
//! All rates are in units of the qubit-bath coupling ν and all times are the
//! dimensionless τ = ν·t.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dephasing;
mod error;
pub mod montecarlo;
pub mod noise;
pub mod quad;
pub mod rng;
pub mod special;
pub mod state;
pub mod sum;

pub use dephasing::{
    dephasing_curve, gamma_curve, gamma_factor, log_gamma_factor, phase_expectation, phase_mass,
    phase_pdf, rtn_dephasing, uniform_grid, CouplingParams, DephasingCurve, PhaseDensity,
};
pub use error::{Error, Result};
pub use montecarlo::{
    accumulate_phase, mc_dephasing, mc_phase_factor, mc_phase_factor_with, mc_two_qubit_state,
    mc_two_qubit_state_with, simulate_telegraph, CHUNK_SIZE,
    ChunkRunner, McEstimate, McStateEstimate, PhasorEstimate, Sequential, SignSampling,
    TelegraphTrajectory,
};
pub use noise::{
    analytic_spectrum, ensemble_spectrum, fit_spectral_slope, rtn_spectrum,
    sample_switching_rates, switching_rate_cdf, switching_rate_inverse_cdf, switching_rate_pdf,
    FluctuatorEnsemble, NoiseParams,
};
pub use state::{
    bell_mixture, binary_h, correlations_closed, negativity_eig, partial_transpose,
    CorrelationSample, TwoQubitState,
};
