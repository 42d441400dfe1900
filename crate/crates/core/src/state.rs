//! Two-qubit density matrices, negativity and discord.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with qubit A the high bit. Under
//! local dephasing the initial |φ⁺⟩ stays a mixture of |φ⁺⟩ and |ψ⁺⟩ with a
//! single parameter Γ, for which negativity is |Γ| and discord is h(Γ).
//! [`negativity_eig`] computes negativity from the spectrum of the partial
//! transpose of any state and serves as the check on the closed form.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::{Error, Result};

pub type Matrix = Matrix4<Complex64>;

/// Eigenvalue sums closer to zero than this count as zero negativity.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Positions of the diagonal and anti-diagonal, the only entries an X state
/// may populate.
#[inline]
pub fn is_x_entry(row: usize, col: usize) -> bool {
    row == col || row + col == 3
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix,
}

impl TwoQubitState {
    /// Validates Hermiticity and unit trace to `tol` and positivity to `-tol`.
    pub fn new(matrix: Matrix, tol: f64) -> Result<Self> {
        let state = Self { matrix };
        let herm = state.hermiticity_defect();
        if herm > tol {
            return Err(Error::param("matrix", herm, "a Hermitian matrix"));
        }
        let trace = state.trace();
        if (trace - 1.0).abs() > tol {
            return Err(Error::param("trace", trace, "unit trace"));
        }
        let min = state.eigenvalues()?.min();
        if min < -tol {
            return Err(Error::param("eigenvalue", min, "a positive semidefinite matrix"));
        }
        Ok(state)
    }

    /// Wraps a matrix without checking the density-matrix invariants.
    pub fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(psi: &Vector4<Complex64>) -> Self {
        Self {
            matrix: psi * psi.adjoint(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// max |ρ − ρ†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest modulus among entries outside the X pattern.
    pub fn off_x_magnitude(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if !is_x_entry(r, c) {
                    worst = worst.max(self.matrix[(r, c)].norm());
                }
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<Vector4<f64>> {
        hermitian_eigen(self.matrix).map(|e| e.eigenvalues)
    }

    /// ⟨v|ρ|v⟩
    pub fn expectation(&self, v: &Vector4<Complex64>) -> f64 {
        (v.adjoint() * self.matrix * v)[(0, 0)].re
    }
}

pub(crate) fn hermitian_eigen(m: Matrix) -> Result<SymmetricEigen<Complex64, nalgebra::U4>> {
    SymmetricEigen::try_new(m, f64::EPSILON, 10_000).ok_or(Error::Eigen)
}

/// |φ⁺⟩ = (|00⟩ + |11⟩)/√2
pub fn phi_plus() -> Vector4<Complex64> {
    let a = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    Vector4::new(a, ZERO, ZERO, a)
}

/// |ψ⁺⟩ = (|01⟩ + |10⟩)/√2
pub fn psi_plus() -> Vector4<Complex64> {
    let a = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    Vector4::new(ZERO, a, a, ZERO)
}

/// ½[(1+Γ)|φ⁺⟩⟨φ⁺| + (1−Γ)|ψ⁺⟩⟨ψ⁺|]
pub fn bell_mixture(gamma_factor: f64) -> Result<TwoQubitState> {
    if !(gamma_factor.abs() <= 1.0) {
        return Err(Error::param("gamma_factor", gamma_factor, "|gamma_factor| <= 1"));
    }
    let p = Complex64::new(0.25 * (1.0 + gamma_factor), 0.0);
    let q = Complex64::new(0.25 * (1.0 - gamma_factor), 0.0);
    #[rustfmt::skip]
    let matrix = Matrix::new(
        p,    ZERO, ZERO, p,
        ZERO, q,    q,    ZERO,
        ZERO, q,    q,    ZERO,
        p,    ZERO, ZERO, p,
    );
    Ok(TwoQubitState { matrix })
}

/// Transpose on qubit B: ⟨a b|ρ^{T_B}|a' b'⟩ = ⟨a b'|ρ|a' b⟩.
pub fn partial_transpose(state: &TwoQubitState) -> Matrix {
    partial_transpose_matrix(&state.matrix)
}

pub(crate) fn partial_transpose_matrix(m: &Matrix) -> Matrix {
    Matrix::from_fn(|row, col| {
        let (a, b) = (row >> 1, row & 1);
        let (a2, b2) = (col >> 1, col & 1);
        m[((a << 1) | b2, (a2 << 1) | b)]
    })
}

/// 2·|Σ negative eigenvalues of ρ^{T_B}|, floored to exactly 0 within
/// [`NEGATIVITY_FLOOR`].
pub fn negativity_eig(state: &TwoQubitState) -> Result<f64> {
    let eig = hermitian_eigen(partial_transpose(state))?;
    let negative: f64 = crate::sum::sum(eig.eigenvalues.iter().copied().filter(|&l| l < 0.0));
    let n = 2.0 * negative.abs();
    Ok(if n < NEGATIVITY_FLOOR { 0.0 } else { n })
}

/// Derivative of the negativity with respect to ρ, as a Hermitian matrix G
/// with dN = tr(G dρ).
///
/// When no eigenvalue is negative the gradient of −2·λ_min is returned, which
/// is the direction in which entanglement would first appear.
pub(crate) fn negativity_gradient(state: &TwoQubitState) -> Result<Matrix> {
    let eig = hermitian_eigen(partial_transpose(state))?;
    let mut projector = Matrix::zeros();
    let mut any = false;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < 0.0 {
            let v = eig.eigenvectors.column(k);
            projector += v * v.adjoint();
            any = true;
        }
    }
    if !any {
        let k = eig.eigenvalues.imin();
        let v = eig.eigenvectors.column(k);
        projector = v * v.adjoint();
    }
    // tr(E^{T_B} P) = tr(E P^{T_B})
    Ok(partial_transpose_matrix(&projector) * Complex64::new(-2.0, 0.0))
}

/// h(x) = ½[(1+x)log₂(1+x) + (1−x)log₂(1−x)], with 0·log 0 = 0.
pub fn binary_h(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::param("x", x, "|x| <= 1"));
    }
    let term = |y: f64| if y == 0.0 { 0.0 } else { y * libm::log2(y) };
    Ok(0.5 * (term(1.0 + x) + term(1.0 - x)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSample {
    pub tau: f64,
    pub gamma_factor: f64,
    pub negativity: f64,
    /// Quantum discord in bits.
    pub discord: f64,
}

/// Negativity |Γ| and discord h(Γ) of the Bell mixture at time `tau`.
pub fn correlations_closed(tau: f64, gamma_factor: f64) -> Result<CorrelationSample> {
    let discord = binary_h(gamma_factor)?;
    Ok(CorrelationSample {
        tau,
        gamma_factor,
        negativity: gamma_factor.abs(),
        discord,
    })
}
