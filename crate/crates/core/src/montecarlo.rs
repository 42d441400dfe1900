//! Exact-event trajectory simulation of telegraph noise.
//!
//! Each fluctuator is simulated as a ±1 signal with exponential waiting
//! times, its phase φ(τ) = −∫₀^τ c(s) ds is integrated exactly, and phase
//! factors or two-qubit states are averaged over trajectories. None of this
//! touches the closed forms in [`crate::dephasing`] or [`crate::state`]; it
//! is the independent check on them.
//!
//! Trajectory `n` of fluctuator `j` in bath `b` always reads the substream
//! `(seed, b, j, n)`. Trajectories are grouped in fixed chunks of
//! [`CHUNK_SIZE`] and chunk results are merged in chunk order, so the output
//! is bit-identical for any [`ChunkRunner`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use nalgebra::Vector4;
use num_complex::Complex64;
use rand::Rng;

use crate::rng::{exponential, substream, unit, Stream};
use crate::state::{self, Matrix, TwoQubitState};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

pub const CHUNK_SIZE: u64 = 4096;

/// Runs independent chunk jobs and returns their results in chunk order.
pub trait ChunkRunner {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ChunkRunner for Sequential {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n_chunks).map(job).collect()
    }
}

fn chunk_range(chunk: usize, n_traj: u64) -> Range<u64> {
    let start = chunk as u64 * CHUNK_SIZE;
    start..(start + CHUNK_SIZE).min(n_traj)
}

fn n_chunks(n_traj: u64) -> usize {
    n_traj.div_ceil(CHUNK_SIZE) as usize
}

/// A ±1 telegraph signal on [0, τ_max].
#[derive(Debug, Clone, PartialEq)]
pub struct TelegraphTrajectory {
    initial_sign: f64,
    flip_times: Vec<f64>,
    tau_max: f64,
}

impl TelegraphTrajectory {
    pub fn initial_sign(&self) -> f64 {
        self.initial_sign
    }

    pub fn flip_times(&self) -> &[f64] {
        &self.flip_times
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    fn flips_before(&self, tau: f64) -> usize {
        self.flip_times.partition_point(|&t| t < tau)
    }

    /// c(τ), right-continuous at flips.
    pub fn sign_at(&self, tau: f64) -> f64 {
        let k = self.flip_times.partition_point(|&t| t <= tau);
        if k % 2 == 0 {
            self.initial_sign
        } else {
            -self.initial_sign
        }
    }
}

/// Draws a stationary telegraph trajectory: c(0) = ±1 with equal
/// probability, then flips after i.i.d. exponential waits of mean 1/γ.
pub fn simulate_telegraph<R: Rng + ?Sized>(
    gamma: f64,
    tau_max: f64,
    rng: &mut R,
) -> Result<TelegraphTrajectory> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", gamma, "a finite rate >= 0"));
    }
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::param("tau_max", tau_max, "a finite time > 0"));
    }
    let initial_sign = draw_sign(rng);
    let mut flip_times = Vec::new();
    if gamma > 0.0 {
        let mut t = exponential(rng, gamma);
        while t < tau_max {
            flip_times.push(t);
            t += exponential(rng, gamma);
        }
    }
    Ok(TelegraphTrajectory {
        initial_sign,
        flip_times,
        tau_max,
    })
}

#[inline]
fn draw_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if unit(rng) < 0.5 {
        1.0
    } else {
        -1.0
    }
}

/// φ(τ) = −∫₀^τ c(s) ds at each grid time, integrated exactly over the
/// piecewise-constant signal (ν = 1).
pub fn accumulate_phase(traj: &TelegraphTrajectory, tau_grid: &[f64]) -> Result<Vec<f64>> {
    for (i, &tau) in tau_grid.iter().enumerate() {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Grid(i));
        }
        if tau > traj.tau_max {
            return Err(Error::BeyondHorizon {
                tau,
                horizon: traj.tau_max,
            });
        }
    }
    // ∫₀^{t_k} c at each flip time
    let mut integral_at_flip = Vec::with_capacity(traj.flip_times.len() + 1);
    integral_at_flip.push(0.0);
    let (mut acc, mut sign, mut last) = (0.0, traj.initial_sign, 0.0);
    for &t in &traj.flip_times {
        acc += sign * (t - last);
        integral_at_flip.push(acc);
        sign = -sign;
        last = t;
    }
    Ok(tau_grid
        .iter()
        .map(|&tau| {
            let k = traj.flips_before(tau);
            let start = if k == 0 { 0.0 } else { traj.flip_times[k - 1] };
            let c = if k.is_multiple_of(2) {
                traj.initial_sign
            } else {
                -traj.initial_sign
            };
            -(integral_at_flip[k] + c * (tau - start))
        })
        .collect())
}

/// Generates a telegraph signal lazily while walking forward in time, adding
/// the fluctuator's phase at each grid point into `phases`.
///
/// Consumes the stream in the same order as [`simulate_telegraph`].
fn add_fluctuator_phase(rng: &mut Stream, gamma: f64, tau_grid: &[f64], phases: &mut [f64]) {
    let mut sign = draw_sign(rng);
    let mut next_flip = if gamma > 0.0 {
        exponential(rng, gamma)
    } else {
        f64::INFINITY
    };
    let (mut integral, mut last) = (0.0, 0.0);
    for (phase, &tau) in phases.iter_mut().zip(tau_grid) {
        while next_flip < tau {
            integral += sign * (next_flip - last);
            last = next_flip;
            sign = -sign;
            next_flip += exponential(rng, gamma);
        }
        *phase -= integral + sign * (tau - last);
    }
}

fn check_mc_grid(tau_grid: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (i, &tau) in tau_grid.iter().enumerate() {
        if !(tau >= prev && tau.is_finite()) {
            return Err(Error::Grid(i));
        }
        prev = tau;
    }
    Ok(())
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

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_trajectories: u64,
}

impl McEstimate {
    /// |mean − reference| in units of the standard error, with a tiny
    /// absolute floor so exact (zero-variance) estimates compare cleanly.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference).abs() / self.std_error.max(1e-300).max(1e-13)
    }

    pub fn within(&self, reference: f64, n_sigma: f64) -> bool {
        (self.mean - reference).abs() <= n_sigma * self.std_error + 1e-12
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
    }

    fn estimate(&self, n: u64) -> McEstimate {
        let nf = n as f64;
        let mean = self.sum.value() / nf;
        let std_error = if n > 1 {
            let var = ((self.sum_sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
            libm::sqrt(var / nf)
        } else {
            0.0
        };
        McEstimate {
            mean,
            std_error,
            n_trajectories: n,
        }
    }
}

/// How the initial fluctuator signs enter a phase-factor average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignSampling {
    /// Signs drawn at random; each trajectory contributes e^{2iφ}.
    #[default]
    Random,
    /// Each trajectory is paired with its sign-reversed twin (φ → −φ), so it
    /// contributes cos 2φ and the imaginary part is exactly zero.
    Symmetrized,
}

/// Monte Carlo estimate of ⟨e^{2iφ(τ)}⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasorEstimate {
    pub re: McEstimate,
    pub im: McEstimate,
}

impl PhasorEstimate {
    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.re.mean, self.im.mean)
    }
}

#[derive(Debug, Clone)]
struct PhasorAccumulator {
    n: u64,
    re: Vec<Moments>,
    im: Vec<Moments>,
}

impl PhasorAccumulator {
    fn new(len: usize) -> Self {
        Self {
            n: 0,
            re: vec![Moments::default(); len],
            im: vec![Moments::default(); len],
        }
    }

    fn merge(&mut self, other: &Self) {
        self.n += other.n;
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            a.merge(b);
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            a.merge(b);
        }
    }

    fn finish(&self) -> Vec<PhasorEstimate> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(re, im)| PhasorEstimate {
                re: re.estimate(self.n),
                im: im.estimate(self.n),
            })
            .collect()
    }
}

/// ⟨e^{2iΣ_jφ_j(τ)}⟩ for a set of independent fluctuators on one qubit.
pub fn mc_phase_factor_with<C: ChunkRunner>(
    runner: &C,
    rates: &[f64],
    tau_grid: &[f64],
    n_traj: u64,
    seed: u64,
    sampling: SignSampling,
) -> Result<Vec<PhasorEstimate>> {
    check_rates("rates", rates)?;
    check_mc_grid(tau_grid)?;
    if n_traj == 0 {
        return Err(Error::param("n_traj", 0.0, "at least one trajectory"));
    }
    let chunks = runner.map_chunks(n_chunks(n_traj), |chunk| {
        let mut acc = PhasorAccumulator::new(tau_grid.len());
        let mut phases = vec![0.0; tau_grid.len()];
        for n in chunk_range(chunk, n_traj) {
            phases.fill(0.0);
            for (j, &gamma) in rates.iter().enumerate() {
                let mut rng = substream(seed, [0, j as u64, n]);
                add_fluctuator_phase(&mut rng, gamma, tau_grid, &mut phases);
            }
            for (i, &phi) in phases.iter().enumerate() {
                acc.re[i].push(libm::cos(2.0 * phi));
                acc.im[i].push(match sampling {
                    SignSampling::Random => libm::sin(2.0 * phi),
                    SignSampling::Symmetrized => 0.0,
                });
            }
            acc.n += 1;
        }
        acc
    });
    Ok(merge_in_order(chunks, |a, b| a.merge(b)).finish())
}

pub fn mc_phase_factor(
    rates: &[f64],
    tau_grid: &[f64],
    n_traj: u64,
    seed: u64,
    sampling: SignSampling,
) -> Result<Vec<PhasorEstimate>> {
    mc_phase_factor_with(&Sequential, rates, tau_grid, n_traj, seed, sampling)
}

/// Single-fluctuator estimate of D(γ, τ) = ⟨e^{2iφ(τ)}⟩.
pub fn mc_dephasing(
    gamma: f64,
    tau_grid: &[f64],
    n_traj: u64,
    seed: u64,
    sampling: SignSampling,
) -> Result<Vec<PhasorEstimate>> {
    mc_phase_factor(&[gamma], tau_grid, n_traj, seed, sampling)
}

fn merge_in_order<T>(chunks: Vec<T>, merge: impl Fn(&mut T, &T)) -> T {
    let mut iter = chunks.into_iter();
    let mut acc = iter.next().expect("at least one chunk");
    for c in iter {
        merge(&mut acc, &c);
    }
    acc
}

/// Number of real coordinates of a 4×4 Hermitian matrix.
const DIM: usize = 16;
const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Diagonal entries, then (Re, Im) of each upper-triangle entry.
fn hermitian_coords(m: &Matrix) -> [f64; DIM] {
    let mut v = [0.0; DIM];
    for i in 0..4 {
        v[i] = m[(i, i)].re;
    }
    for (k, &(r, c)) in UPPER.iter().enumerate() {
        v[4 + 2 * k] = m[(r, c)].re;
        v[5 + 2 * k] = m[(r, c)].im;
    }
    v
}

fn from_hermitian_coords(v: &[f64; DIM]) -> Matrix {
    let mut m = Matrix::zeros();
    for i in 0..4 {
        m[(i, i)] = Complex64::new(v[i], 0.0);
    }
    for (k, &(r, c)) in UPPER.iter().enumerate() {
        let z = Complex64::new(v[4 + 2 * k], v[5 + 2 * k]);
        m[(r, c)] = z;
        m[(c, r)] = z.conj();
    }
    m
}

/// Weights w with tr(G ρ) = w · coords(ρ) for Hermitian G.
fn linear_weights(g: &Matrix) -> [f64; DIM] {
    let mut w = [0.0; DIM];
    for i in 0..4 {
        w[i] = g[(i, i)].re;
    }
    for (k, &(r, c)) in UPPER.iter().enumerate() {
        w[4 + 2 * k] = 2.0 * g[(r, c)].re;
        w[5 + 2 * k] = 2.0 * g[(r, c)].im;
    }
    w
}

#[derive(Debug, Clone)]
struct StateAccumulator {
    sum: [CompensatedSum; DIM],
    // upper triangle of Σ v vᵀ, row-major
    outer: Vec<CompensatedSum>,
}

impl StateAccumulator {
    fn new() -> Self {
        Self {
            sum: [CompensatedSum::new(); DIM],
            outer: vec![CompensatedSum::new(); DIM * (DIM + 1) / 2],
        }
    }

    #[inline]
    fn push(&mut self, v: &[f64; DIM]) {
        let mut k = 0;
        for i in 0..DIM {
            self.sum[i] += v[i];
            for j in i..DIM {
                self.outer[k] += v[i] * v[j];
                k += 1;
            }
        }
    }

    fn merge(&mut self, other: &Self) {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            a.merge(b);
        }
        for (a, b) in self.outer.iter_mut().zip(&other.outer) {
            a.merge(b);
        }
    }

    fn finish(&self, n: u64) -> McStateEstimate {
        let nf = n as f64;
        let mean: [f64; DIM] = core::array::from_fn(|i| self.sum[i].value() / nf);
        let mut covariance = [[0.0; DIM]; DIM];
        if n > 1 {
            let mut k = 0;
            for i in 0..DIM {
                for j in i..DIM {
                    let c = (self.outer[k].value() - nf * mean[i] * mean[j]) / (nf - 1.0);
                    covariance[i][j] = c;
                    covariance[j][i] = c;
                    k += 1;
                }
            }
        }
        McStateEstimate {
            state: TwoQubitState::from_matrix_unchecked(from_hermitian_coords(&mean)),
            covariance,
            n_trajectories: n,
        }
    }
}

/// Trajectory-averaged two-qubit state with the covariance of the
/// per-trajectory projectors, for error bars on linear and smooth functionals.
#[derive(Debug, Clone)]
pub struct McStateEstimate {
    state: TwoQubitState,
    covariance: [[f64; DIM]; DIM],
    n_trajectories: u64,
}

impl McStateEstimate {
    pub fn state(&self) -> &TwoQubitState {
        &self.state
    }

    pub fn n_trajectories(&self) -> u64 {
        self.n_trajectories
    }

    /// Standard error of tr(G ρ̂) for Hermitian G.
    pub fn linear_std_error(&self, g: &Matrix) -> f64 {
        let w = linear_weights(g);
        let mut var = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                var += w[i] * self.covariance[i][j] * w[j];
            }
        }
        libm::sqrt(var.max(0.0) / self.n_trajectories as f64)
    }

    /// Standard errors of (Re ρ_rc, Im ρ_rc).
    pub fn entry_std_error(&self, row: usize, col: usize) -> (f64, f64) {
        let n = self.n_trajectories as f64;
        let se = |k: usize| libm::sqrt(self.covariance[k][k].max(0.0) / n);
        if row == col {
            return (se(row), 0.0);
        }
        let (r, c) = if row < col { (row, col) } else { (col, row) };
        let k = UPPER.iter().position(|&p| p == (r, c)).expect("upper entry");
        (se(4 + 2 * k), se(5 + 2 * k))
    }

    /// Entries outside the X pattern, as (real, imaginary) estimates.
    pub fn off_x_entries(&self) -> impl Iterator<Item = (usize, usize, McEstimate, McEstimate)> + '_ {
        UPPER
            .iter()
            .filter(|&&(r, c)| !state::is_x_entry(r, c))
            .map(move |&(r, c)| {
                let z = self.state.matrix()[(r, c)];
                let (se_re, se_im) = self.entry_std_error(r, c);
                let est = |mean, std_error| McEstimate {
                    mean,
                    std_error,
                    n_trajectories: self.n_trajectories,
                };
                (r, c, est(z.re, se_re), est(z.im, se_im))
            })
    }

    /// Negativity of the averaged state, with a delta-method standard error.
    pub fn negativity(&self) -> Result<McEstimate> {
        let mean = state::negativity_eig(&self.state)?;
        let gradient = state::negativity_gradient(&self.state)?;
        Ok(McEstimate {
            mean,
            std_error: self.linear_std_error(&gradient),
            n_trajectories: self.n_trajectories,
        })
    }
}

/// e^{iφσx} applied to both qubits of |φ⁺⟩.
fn kicked_bell_state(phase_a: f64, phase_b: f64) -> Vector4<Complex64> {
    let u = |phi: f64| {
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        [
            [Complex64::new(c, 0.0), Complex64::new(0.0, s)],
            [Complex64::new(0.0, s), Complex64::new(c, 0.0)],
        ]
    };
    let (ua, ub) = (u(phase_a), u(phase_b));
    let amp = core::f64::consts::FRAC_1_SQRT_2;
    Vector4::from_fn(|idx, _| {
        let (a, b) = (idx >> 1, idx & 1);
        (ua[a][0] * ub[b][0] + ua[a][1] * ub[b][1]) * amp
    })
}

/// Average of |ψ⟩⟨ψ| where |ψ⟩ = U_A ⊗ U_B |φ⁺⟩ and U = e^{iφσx} carries the
/// summed phase of each bath's fluctuators.
pub fn mc_two_qubit_state_with<C, A, B>(
    runner: &C,
    bath_a: &A,
    bath_b: &B,
    tau_grid: &[f64],
    n_traj: u64,
    seed: u64,
) -> Result<Vec<McStateEstimate>>
where
    C: ChunkRunner,
    A: AsRef<[f64]> + ?Sized,
    B: AsRef<[f64]> + ?Sized,
{
    let (rates_a, rates_b) = (bath_a.as_ref(), bath_b.as_ref());
    check_rates("bath A", rates_a)?;
    check_rates("bath B", rates_b)?;
    check_mc_grid(tau_grid)?;
    if n_traj == 0 {
        return Err(Error::param("n_traj", 0.0, "at least one trajectory"));
    }
    let len = tau_grid.len();
    let chunks = runner.map_chunks(n_chunks(n_traj), |chunk| {
        let mut acc: Vec<StateAccumulator> = (0..len).map(|_| StateAccumulator::new()).collect();
        let mut phases_a = vec![0.0; len];
        let mut phases_b = vec![0.0; len];
        let range = chunk_range(chunk, n_traj);
        let count = range.end - range.start;
        for n in range {
            for (bath, rates, phases) in [(0, rates_a, &mut phases_a), (1, rates_b, &mut phases_b)] {
                phases.fill(0.0);
                for (j, &gamma) in rates.iter().enumerate() {
                    let mut rng = substream(seed, [bath, j as u64, n]);
                    add_fluctuator_phase(&mut rng, gamma, tau_grid, phases);
                }
            }
            for i in 0..len {
                let psi = kicked_bell_state(phases_a[i], phases_b[i]);
                let projector = psi * psi.adjoint();
                acc[i].push(&hermitian_coords(&projector));
            }
        }
        (count, acc)
    });
    let (n, acc) = merge_in_order(chunks, |a, b| {
        a.0 += b.0;
        for (x, y) in a.1.iter_mut().zip(&b.1) {
            x.merge(y);
        }
    });
    Ok(acc.iter().map(|a| a.finish(n)).collect())
}

pub fn mc_two_qubit_state<A, B>(
    bath_a: &A,
    bath_b: &B,
    tau_grid: &[f64],
    n_traj: u64,
    seed: u64,
) -> Result<Vec<McStateEstimate>>
where
    A: AsRef<[f64]> + ?Sized,
    B: AsRef<[f64]> + ?Sized,
{
    mc_two_qubit_state_with(&Sequential, bath_a, bath_b, tau_grid, n_traj, seed)
}
