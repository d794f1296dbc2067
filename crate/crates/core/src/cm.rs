//! Covariance-matrix algebra for two-mode Gaussian states: physicality,
//! symplectic spectra, and classicality diagnostics.
//!
//! Conventions (fixed across the whole crate):
//! - quadrature ordering `(q1, p1, q2, p2)`;
//! - vacuum variance `1/2`, so a state is physical iff both symplectic
//!   eigenvalues are `>= 1/2`;
//! - the symplectic form is `Omega = [[0,1],[-1,0]] ⊕ [[0,1],[-1,0]]`.

use nalgebra::{Matrix2, Matrix4};
use thiserror::Error;

/// Default absolute tolerance on matrix entries and invariants.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CmError {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NonSymmetric(f64),
    #[error("matrix is not positive definite (min eigenvalue {0:.6e})")]
    NotPositiveDefinite(f64),
    #[error("unphysical state: min symplectic eigenvalue {nu_minus:.12} < 1/2 (margin {margin:.3e})")]
    Unphysical { nu_minus: f64, margin: f64 },
    #[error("symplectic spectrum is complex (discriminant {0:.6e})")]
    ComplexSpectrum(f64),
}

/// Physicality summary: both symplectic eigenvalues and the determinant
/// of the uncertainty matrix `V + (i/2) Omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityVerdict {
    /// Smallest symplectic eigenvalue; `>= 1/2` for physical states.
    pub nu_minus: f64,
    /// Largest symplectic eigenvalue.
    pub nu_plus: f64,
    /// `det(V + (i/2) Omega) = (nu_minus^2 - 1/4)(nu_plus^2 - 1/4) >= 0`.
    pub d: f64,
}

/// Real symmetric 4x4 matrix of quadrature second moments in the
/// `(q1, p1, q2, p2)` ordering with vacuum variance `1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(m: Matrix4<f64>) -> Self {
        CovarianceMatrix(m)
    }

    /// Builds from 16 entries in row-major order.
    pub fn from_row_major(entries: &[f64; 16]) -> Self {
        CovarianceMatrix(Matrix4::from_row_slice(entries))
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[4 * i + j] = self.0[(i, j)];
            }
        }
        out
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// The symplectic form in the `(q1, p1, q2, p2)` ordering.
    pub fn omega() -> Matrix4<f64> {
        Matrix4::new(
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, -1.0, 0.0,
        )
    }

    /// Upper-left one-mode block (mode 1).
    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Lower-right one-mode block (mode 2).
    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Upper-right cross-correlation block.
    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// Symplectic invariant `det A + det B + 2 det C`.
    pub fn delta(&self) -> f64 {
        self.block_a().determinant() + self.block_b().determinant()
            + 2.0 * self.block_c().determinant()
    }

    /// Partial-transpose invariant `det A + det B - 2 det C`.
    pub fn delta_tilde(&self) -> f64 {
        self.block_a().determinant() + self.block_b().determinant()
            - 2.0 * self.block_c().determinant()
    }

    /// `det(V + (i/2) Omega) = det V - Delta/4 + 1/16`.
    pub fn physicality_discriminant(&self) -> f64 {
        self.det() - self.delta() / 4.0 + 1.0 / 16.0
    }

    /// Maximum absolute deviation from symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)]).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the (symmetrized) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (self.0 + self.0.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// Symplectic eigenvalues `(nu_minus, nu_plus)` from the invariants
    /// `Delta` and `det V`, at the default tolerance.
    pub fn symplectic_spectrum(&self) -> Result<(f64, f64), CmError> {
        spectrum_from_invariants(self.delta(), self.det(), DEFAULT_TOL)
    }

    /// Symplectic eigenvalues of the partial transpose,
    /// `(kappa_tilde_minus, kappa_tilde_plus)`, from `Delta_tilde` and
    /// `det V` (partial transposition leaves the determinant unchanged).
    pub fn ppt_spectrum(&self) -> Result<(f64, f64), CmError> {
        spectrum_from_invariants(self.delta_tilde(), self.det(), DEFAULT_TOL)
    }

    /// Full physicality check: symmetry, positive definiteness, and
    /// `nu_minus >= 1/2 - tol`.
    pub fn validate_physical(&self, tol: f64) -> Result<PhysicalityVerdict, CmError> {
        let scale = self.0.iter().fold(1.0f64, |m, &v| m.max(v.abs()));
        let defect = self.symmetry_defect();
        if defect > tol * scale {
            return Err(CmError::NonSymmetric(defect));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig <= 0.0 {
            return Err(CmError::NotPositiveDefinite(min_eig));
        }
        let (nu_minus, nu_plus) = spectrum_from_invariants(self.delta(), self.det(), tol)?;
        if nu_minus < 0.5 - tol {
            return Err(CmError::Unphysical {
                nu_minus,
                margin: 0.5 - nu_minus,
            });
        }
        Ok(PhysicalityVerdict {
            nu_minus,
            nu_plus,
            d: self.physicality_discriminant(),
        })
    }

    /// Smallest eigenvalue of `V - (1/2) I`; the state is classical
    /// (admits a non-negative P function) iff the margin is `>= 0`.
    pub fn classicality_margin(&self) -> f64 {
        let shifted = (self.0 + self.0.transpose()) * 0.5 - Matrix4::identity() * 0.5;
        shifted.symmetric_eigenvalues().min()
    }

    /// Leading principal minors of `V - (1/2) I`, orders 1 through 4;
    /// all non-negative iff the state is classical.
    pub fn classicality_minors(&self) -> [f64; 4] {
        let shifted = (self.0 + self.0.transpose()) * 0.5 - Matrix4::identity() * 0.5;
        let mut minors = [0.0; 4];
        minors[0] = shifted[(0, 0)];
        minors[1] = shifted.fixed_view::<2, 2>(0, 0).determinant();
        minors[2] = shifted.fixed_view::<3, 3>(0, 0).determinant();
        minors[3] = shifted.determinant();
        minors
    }
}

impl std::ops::Sub for CovarianceMatrix {
    type Output = Matrix4<f64>;
    fn sub(self, rhs: Self) -> Matrix4<f64> {
        self.0 - rhs.0
    }
}

/// Symplectic eigenvalue pair from the invariants of a (possibly partially
/// transposed) covariance matrix:
/// `nu_∓^2 = [Delta ∓ sqrt(Delta^2 - 4 det V)] / 2`.
///
/// The discriminant is clamped to zero within `-1e-12` of the degenerate
/// double root (pure states); values below `-tol` (scale-relative) report
/// a complex spectrum.
pub fn spectrum_from_invariants(delta: f64, det_v: f64, tol: f64) -> Result<(f64, f64), CmError> {
    let scale = (delta * delta).max(1.0);
    let mut disc = delta * delta - 4.0 * det_v;
    if disc < 0.0 {
        if disc >= -1e-12 * scale {
            disc = 0.0;
        } else if disc >= -tol.max(1e-12) * scale {
            disc = 0.0;
        } else {
            return Err(CmError::ComplexSpectrum(disc));
        }
    }
    let root = disc.sqrt();
    let nu_minus_sq = ((delta - root) / 2.0).max(0.0);
    let nu_plus_sq = ((delta + root) / 2.0).max(0.0);
    Ok((nu_minus_sq.sqrt(), nu_plus_sq.sqrt()))
}
