//! Construction and verification of the optimal decomposition.
//!
//! A solved state factors as `V(w1, w2) = V0 + VC - I/2`: the covariance
//! matrix of the scaled state is the sum of a pure TMSVS part `V0` and a
//! classical partner `VC`, minus the vacuum. The partner of an optimal
//! decomposition sits exactly on the classicality threshold
//! (`VC - I/2` is singular PSD) and on the separability boundary (its Simon
//! discriminant vanishes). At the level of normally ordered characteristic
//! functions the addition rule is a multiplication law, checked here as a
//! quadratic-form identity at random points.

use crate::cm::CovarianceMatrix;
use crate::solver::TmsvsParams;
use crate::standard_form::{reduce_to_standard_form, SfError};
use nalgebra::Matrix4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// Default sample count for the characteristic-function law check.
pub const CF_LAW_SAMPLES: usize = 32;
/// Default seed for the characteristic-function law check.
pub const CF_LAW_SEED: u64 = 0x746d_6773;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("decomposition certificate failed on {field} (value {value:.6e})")]
    CertificationFailed { field: &'static str, value: f64 },
    #[error(transparent)]
    StandardForm(#[from] SfError),
}

/// Verified facts about a solved decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    pub v0: CovarianceMatrix,
    pub vc: CovarianceMatrix,
    /// Smallest eigenvalue of `VC - I/2`; non-negative for a classical
    /// partner.
    pub classicality_boundary_gap: f64,
    /// `det(VC - I/2)`; zero when the partner touches the classicality
    /// threshold. Factors into the product of the two optimality residuals.
    pub det_gap: f64,
    /// Simon discriminant of the partner; zero when the partner sits on the
    /// separability boundary.
    pub simon_of_partner: f64,
    /// Largest deviation in the characteristic-function multiplication law.
    pub cf_law_max_residual: f64,
}

/// Covariance matrix of the two-mode squeezed vacuum with parameters
/// `(x, y)`: `b1 = b2 = x`, `c = -d = y`.
pub fn build_tmsvs_cm(t: &TmsvsParams) -> CovarianceMatrix {
    let (x, y) = (t.x(), t.y());
    CovarianceMatrix::new(Matrix4::new(
        x, 0.0, y, 0.0, //
        0.0, x, 0.0, -y, //
        y, 0.0, x, 0.0, //
        0.0, -y, 0.0, x,
    ))
}

/// Classical partner from the addition rule: `VC = V_scaled - V0 + I/2`.
pub fn build_classical_partner(
    v_scaled: &CovarianceMatrix,
    v0: &CovarianceMatrix,
) -> CovarianceMatrix {
    let m = *v_scaled - *v0 + Matrix4::identity() * 0.5;
    CovarianceMatrix::new(m)
}

/// Quadratic form `-1/2 lambda^T (V - I/2) lambda` of the normally ordered
/// characteristic-function exponent.
fn cf_exponent(v: &CovarianceMatrix, lambda: &nalgebra::Vector4<f64>) -> f64 {
    let m = v.matrix() - Matrix4::identity() * 0.5;
    -0.5 * (lambda.transpose() * m * lambda)[(0, 0)]
}

/// Max residual of the multiplication law
/// `chi_G = chi_0 * chi_C` over `n_samples` seeded Gaussian points,
/// evaluated on the log scale as a quadratic-form identity.
pub fn verify_multiplication_law(
    v_scaled: &CovarianceMatrix,
    v0: &CovarianceMatrix,
    vc: &CovarianceMatrix,
    n_samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    for _ in 0..n_samples {
        let lambda = nalgebra::Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let lhs = cf_exponent(v_scaled, &lambda);
        let rhs = cf_exponent(v0, &lambda) + cf_exponent(vc, &lambda);
        max_residual = max_residual.max((lhs - rhs).abs());
    }
    max_residual
}

/// Builds the partner and checks the structural facts of an optimal
/// decomposition: the partner is classical and touches both the
/// classicality threshold and the separability boundary, and the
/// characteristic-function law closes.
pub fn certify(
    v_scaled: &CovarianceMatrix,
    v0: &CovarianceMatrix,
    tol: f64,
) -> Result<DecompositionCertificate, CertError> {
    let vc = build_classical_partner(v_scaled, v0);
    let edge = *v_scaled - *v0;
    let classicality_boundary_gap = edge.symmetric_eigenvalues().min();
    let det_gap = edge.determinant();
    let simon_of_partner = reduce_to_standard_form(&vc, tol)?.simon_discriminant();
    let cf_law_max_residual =
        verify_multiplication_law(v_scaled, v0, &vc, CF_LAW_SAMPLES, CF_LAW_SEED);

    let cert = DecompositionCertificate {
        v0: *v0,
        vc,
        classicality_boundary_gap,
        det_gap,
        simon_of_partner,
        cf_law_max_residual,
    };
    if classicality_boundary_gap < -tol {
        return Err(CertError::CertificationFailed {
            field: "classicality_boundary_gap",
            value: classicality_boundary_gap,
        });
    }
    if det_gap.abs() > tol {
        return Err(CertError::CertificationFailed {
            field: "det_gap",
            value: det_gap,
        });
    }
    if simon_of_partner.abs() > tol {
        return Err(CertError::CertificationFailed {
            field: "simon_of_partner",
            value: simon_of_partner,
        });
    }
    if cf_law_max_residual > tol.max(1e-12) {
        return Err(CertError::CertificationFailed {
            field: "cf_law_max_residual",
            value: cf_law_max_residual,
        });
    }
    Ok(cert)
}
