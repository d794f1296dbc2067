//! Standard-form reduction and separability classification.
//!
//! Every two-mode covariance matrix is locally symplectically congruent to a
//! four-parameter standard form `(b1, b2, c, d)`; an optional pair of
//! one-mode squeeze factors `(u1, u2)` gives the scaled standard form. The
//! four parameters are local invariants and fix the entanglement properties
//! of the whole equivalence class.

use crate::cm::{spectrum_from_invariants, CmError, CovarianceMatrix, DEFAULT_TOL};
use nalgebra::Matrix4;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SfError {
    #[error("degenerate one-mode blocks (b1*b2 = {0:.3e})")]
    DegenerateBlocks(f64),
    #[error("inconsistent invariants: reconstructed det V deviates by {0:.3e}")]
    InconsistentInvariants(f64),
    #[error("scaling factors must be positive and finite (u1 = {u1}, u2 = {u2})")]
    NonPositiveScaling { u1: f64, u2: f64 },
    #[error("standard-form convention violated: {0}")]
    Convention(String),
}

/// Local invariants `(b1, b2, c, d)` of a two-mode Gaussian state, in the
/// convention `b1, b2 >= 1/2` (for physical states), `c >= |d| >= 0`, with
/// `d` carrying the sign of `det C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    b1: f64,
    b2: f64,
    c: f64,
    d: f64,
}

impl StandardFormParams {
    pub fn new(b1: f64, b2: f64, c: f64, d: f64) -> Result<Self, SfError> {
        for (name, v) in [("b1", b1), ("b2", b2), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(SfError::Convention(format!("{name} is not finite")));
            }
        }
        if b1 <= 0.0 || b2 <= 0.0 {
            return Err(SfError::Convention(format!(
                "one-mode variances must be positive (b1 = {b1}, b2 = {b2})"
            )));
        }
        if c < 0.0 {
            return Err(SfError::Convention(format!("c must be non-negative (c = {c})")));
        }
        if c < d.abs() {
            return Err(SfError::Convention(format!(
                "convention requires c >= |d| (c = {c}, d = {d})"
            )));
        }
        Ok(StandardFormParams { b1, b2, c, d })
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn abs_d(&self) -> f64 {
        self.d.abs()
    }

    /// `det V = (b1 b2 - c^2)(b1 b2 - d^2)` for the standard form.
    pub fn det_v(&self) -> f64 {
        let m = self.b1 * self.b2;
        (m - self.c * self.c) * (m - self.d * self.d)
    }

    /// Symplectic invariant `Delta = b1^2 + b2^2 + 2 c d` (also written `Z`);
    /// `Delta >= 1/2` for physical states.
    pub fn delta(&self) -> f64 {
        self.b1 * self.b1 + self.b2 * self.b2 + 2.0 * self.c * self.d
    }

    /// Partial-transpose invariant `b1^2 + b2^2 - 2 c d`.
    pub fn delta_tilde(&self) -> f64 {
        self.b1 * self.b1 + self.b2 * self.b2 - 2.0 * self.c * self.d
    }

    /// `D = det(V + (i/2) Omega) = det V - Delta/4 + 1/16`; non-negative for
    /// physical states, zero iff `nu_minus = 1/2`.
    pub fn physicality_discriminant(&self) -> f64 {
        self.det_v() - self.delta() / 4.0 + 1.0 / 16.0
    }

    /// Simon separability discriminant
    /// `D_tilde = det V - (b1^2 + b2^2 + 2 c |d|)/4 + 1/16`;
    /// the state is separable iff `D_tilde >= 0`. For `c d >= 0` this equals
    /// the physicality discriminant, so such states are always separable.
    pub fn simon_discriminant(&self) -> f64 {
        self.det_v()
            - (self.b1 * self.b1 + self.b2 * self.b2 + 2.0 * self.c * self.d.abs()) / 4.0
            + 1.0 / 16.0
    }

    /// Symplectic eigenvalues `(nu_minus, nu_plus)`.
    pub fn symplectic_spectrum(&self) -> Result<(f64, f64), CmError> {
        spectrum_from_invariants(self.delta(), self.det_v(), DEFAULT_TOL)
    }

    /// Smallest symplectic eigenvalue of the partial transpose, computed with
    /// the sign-worst cross correlation (`2 c |d|`), so that
    /// `kappa_tilde_minus < 1/2 <=> D_tilde < 0` holds exactly.
    pub fn kappa_tilde_minus(&self) -> Result<f64, CmError> {
        let delta_ppt =
            self.b1 * self.b1 + self.b2 * self.b2 + 2.0 * self.c * self.d.abs();
        spectrum_from_invariants(delta_ppt, self.det_v(), DEFAULT_TOL).map(|(lo, _)| lo)
    }

    /// `true` iff both symplectic eigenvalues are `>= 1/2 - tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        match self.symplectic_spectrum() {
            Ok((lo, _)) => lo >= 0.5 - tol,
            Err(_) => false,
        }
    }

    /// Swaps the two modes: `(b1, b2)` exchange, `(c, d)` are unchanged.
    pub fn swap_modes(&self) -> Self {
        StandardFormParams {
            b1: self.b2,
            b2: self.b1,
            c: self.c,
            d: self.d,
        }
    }
}

/// One-mode squeeze factors `(u1, u2)` of the scaled standard form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFactors {
    u1: f64,
    u2: f64,
}

impl ScalingFactors {
    pub fn new(u1: f64, u2: f64) -> Result<Self, SfError> {
        if !(u1.is_finite() && u2.is_finite() && u1 > 0.0 && u2 > 0.0) {
            return Err(SfError::NonPositiveScaling { u1, u2 });
        }
        Ok(ScalingFactors { u1, u2 })
    }

    pub fn identity() -> Self {
        ScalingFactors { u1: 1.0, u2: 1.0 }
    }

    pub fn u1(&self) -> f64 {
        self.u1
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }

    /// `p = u1 * u2`.
    pub fn product(&self) -> f64 {
        self.u1 * self.u2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Boundary,
    Entangled,
}

impl Separability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Separability::Separable => "separable",
            Separability::Boundary => "boundary",
            Separability::Entangled => "entangled",
        }
    }
}

/// Separability classification with its deciding quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    pub verdict: Separability,
    /// Simon discriminant `D_tilde`; negative iff entangled.
    pub d_tilde: f64,
    /// Smallest partial-transpose symplectic eigenvalue; `< 1/2` iff entangled.
    pub kappa_tilde_minus: f64,
}

/// Classifies a standard form: `Entangled` iff `D_tilde < -tol`,
/// `Boundary` iff `|D_tilde| <= tol`, `Separable` otherwise.
pub fn classify(sf: &StandardFormParams, tol: f64) -> Result<SeparabilityVerdict, CmError> {
    let d_tilde = sf.simon_discriminant();
    let kappa_tilde_minus = sf.kappa_tilde_minus()?;
    let verdict = if d_tilde < -tol {
        Separability::Entangled
    } else if d_tilde <= tol {
        Separability::Boundary
    } else {
        Separability::Separable
    };
    Ok(SeparabilityVerdict {
        verdict,
        d_tilde,
        kappa_tilde_minus,
    })
}

/// Classifies an arbitrary physical covariance matrix by first reducing it
/// to standard form.
pub fn classify_separability(
    v: &CovarianceMatrix,
    tol: f64,
) -> Result<SeparabilityVerdict, SfError> {
    let sf = reduce_to_standard_form(v, tol)?;
    classify(&sf, tol).map_err(|e| SfError::Convention(e.to_string()))
}

/// Extracts the local invariants `(b1, b2, c, d)` from an arbitrary
/// covariance matrix:
/// `b1 = sqrt(det A)`, `b2 = sqrt(det B)`, and `c^2 >= d^2` are the roots of
/// `w^2 - S w + (det C)^2` with `S = [(b1 b2)^2 + (det C)^2 - det V]/(b1 b2)`;
/// `d` carries the sign of `det C`.
pub fn reduce_to_standard_form(
    v: &CovarianceMatrix,
    tol: f64,
) -> Result<StandardFormParams, SfError> {
    let det_a = v.block_a().determinant();
    let det_b = v.block_b().determinant();
    let m = v.block_c().determinant();
    let det_v = v.det();

    if det_a <= 0.0 || det_b <= 0.0 {
        return Err(SfError::DegenerateBlocks(det_a.min(det_b)));
    }
    let b1 = det_a.sqrt();
    let b2 = det_b.sqrt();
    let prod = b1 * b2;
    if prod < tol {
        return Err(SfError::DegenerateBlocks(prod));
    }

    let s = (prod * prod + m * m - det_v) / prod;
    // Discriminant (c^2 - d^2)^2 >= 0; small negatives are rounding noise.
    let scale = (s * s).max(1.0);
    let mut disc = s * s - 4.0 * m * m;
    if disc < 0.0 {
        if disc < -tol.max(1e-12) * scale {
            return Err(SfError::InconsistentInvariants(disc));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let w_plus = ((s + root) / 2.0).max(0.0);
    let w_minus = ((s - root) / 2.0).max(0.0);
    let c = w_plus.sqrt();
    let d_abs = w_minus.sqrt();
    let d = if m.abs() <= tol * prod.max(1.0) {
        0.0
    } else {
        d_abs.copysign(m)
    };

    let sf = StandardFormParams::new(b1, b2, c, d)?;
    let deviation = (sf.det_v() - det_v).abs();
    if deviation > tol.max(1e-12) * det_v.abs().max(1.0) * 1e2 {
        return Err(SfError::InconsistentInvariants(deviation));
    }
    Ok(sf)
}

/// Builds the scaled standard-form matrix
///
/// ```text
/// [ b1 u1        0            c sqrt(u1 u2)   0              ]
/// [ 0            b1 / u1      0               d / sqrt(u1 u2)]
/// [ c sqrt(u1u2) 0            b2 u2           0              ]
/// [ 0            d / sqrt(..) 0               b2 / u2        ]
/// ```
///
/// `build_scaled_cm(sf, identity)` is the unscaled standard form.
pub fn build_scaled_cm(
    sf: &StandardFormParams,
    u: &ScalingFactors,
) -> CovarianceMatrix {
    let (u1, u2) = (u.u1(), u.u2());
    let root = (u1 * u2).sqrt();
    let c_s = sf.c() * root;
    let d_s = sf.d() / root;
    CovarianceMatrix::new(Matrix4::new(
        sf.b1() * u1, 0.0, c_s, 0.0, //
        0.0, sf.b1() / u1, 0.0, d_s, //
        c_s, 0.0, sf.b2() * u2, 0.0, //
        0.0, d_s, 0.0, sf.b2() / u2,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sf(b1: f64, b2: f64, c: f64, d: f64) -> StandardFormParams {
        StandardFormParams::new(b1, b2, c, d).unwrap()
    }

    #[test]
    fn reduction_is_a_fixed_point_on_standard_forms() {
        let p = sf(1.2, 1.0, 0.8, -0.8);
        let v = build_scaled_cm(&p, &ScalingFactors::identity());
        let r = reduce_to_standard_form(&v, DEFAULT_TOL).unwrap();
        assert_relative_eq!(r.b1(), 1.2, max_relative = 1e-12);
        assert_relative_eq!(r.b2(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.c(), 0.8, max_relative = 1e-12);
        assert_relative_eq!(r.d(), -0.8, max_relative = 1e-12);
    }

    #[test]
    fn reduction_removes_scalings() {
        let p = sf(1.0, 1.0, 0.8, -0.6);
        let v = build_scaled_cm(&p, &ScalingFactors::new(2.0, 1.0).unwrap());
        let r = reduce_to_standard_form(&v, DEFAULT_TOL).unwrap();
        assert_relative_eq!(r.b1(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.b2(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.c(), 0.8, max_relative = 1e-12);
        assert_relative_eq!(r.d(), -0.6, max_relative = 1e-12);
    }

    #[test]
    fn reduction_is_invariant_under_local_rotations() {
        let p = sf(1.0, 1.0, 0.8, -0.6);
        let v = build_scaled_cm(&p, &ScalingFactors::identity());
        // Phase rotation of mode 1 by pi/3.
        let (s, c) = (std::f64::consts::FRAC_PI_3).sin_cos();
        let rot = Matrix4::new(
            c, s, 0.0, 0.0, //
            -s, c, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        );
        let conjugated = CovarianceMatrix::new(rot * v.matrix() * rot.transpose());
        let r = reduce_to_standard_form(&conjugated, DEFAULT_TOL).unwrap();
        assert_relative_eq!(r.b1(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.b2(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.c(), 0.8, epsilon = 1e-12);
        assert_relative_eq!(r.d(), -0.6, epsilon = 1e-12);
    }

    #[test]
    fn scaled_matrix_entries_match_direct_substitution() {
        let p = sf(1.0, 1.0, 0.8, -0.6);
        let v = build_scaled_cm(&p, &ScalingFactors::new(2.0, 1.0).unwrap());
        let m = v.matrix();
        assert_relative_eq!(m[(0, 0)], 2.0, max_relative = 1e-15);
        assert_relative_eq!(m[(1, 1)], 0.5, max_relative = 1e-15);
        assert_relative_eq!(m[(0, 2)], 0.8 * 2.0f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(m[(1, 3)], -0.6 / 2.0f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn simon_discriminant_examples() {
        // det V - (b1^2 + b2^2 + 2 c |d|)/4 + 1/16 = 0.2304 - 0.74 + 0.0625.
        let entangled = sf(1.0, 1.0, 0.8, -0.6);
        assert_relative_eq!(entangled.simon_discriminant(), -0.4471, max_relative = 1e-12);

        let boundary = sf(1.0, 1.0, 0.5, -0.5);
        assert!(boundary.simon_discriminant().abs() < 1e-15);

        // Product state: D_tilde reduces to the physicality discriminant.
        let product = sf(0.7, 0.9, 0.0, 0.0);
        assert_relative_eq!(
            product.simon_discriminant(),
            product.physicality_discriminant(),
            max_relative = 1e-15
        );
        assert!(product.simon_discriminant() >= 0.0);
    }

    #[test]
    fn classification_matches_the_ppt_eigenvalue() {
        let cases = [
            (sf(1.0, 1.0, 0.8, -0.6), Separability::Entangled),
            (sf(1.0, 1.0, 0.5, -0.5), Separability::Boundary),
            (sf(0.7, 0.9, 0.0, 0.0), Separability::Separable),
        ];
        for (p, expected) in cases {
            let verdict = classify(&p, 1e-10).unwrap();
            assert_eq!(verdict.verdict, expected);
            match expected {
                Separability::Entangled => assert!(verdict.kappa_tilde_minus < 0.5),
                Separability::Boundary => {
                    assert_relative_eq!(verdict.kappa_tilde_minus, 0.5, epsilon = 1e-9)
                }
                Separability::Separable => assert!(verdict.kappa_tilde_minus >= 0.5),
            }
        }
    }

    #[test]
    fn nonpositive_cross_correlations_mean_separable() {
        // c d >= 0 forces D_tilde = D >= 0 for physical states.
        let p = sf(1.0, 1.0, 0.6, 0.1);
        assert!(p.is_physical(1e-10));
        assert_relative_eq!(
            p.simon_discriminant(),
            p.physicality_discriminant(),
            max_relative = 1e-15
        );
        let verdict = classify(&p, 1e-10).unwrap();
        assert_eq!(verdict.verdict, Separability::Separable);
    }

    #[test]
    fn convention_violations_are_rejected() {
        assert!(StandardFormParams::new(1.0, 1.0, 0.5, -0.6).is_err());
        assert!(StandardFormParams::new(1.0, 1.0, -0.2, 0.1).is_err());
        assert!(StandardFormParams::new(1.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(ScalingFactors::new(0.0, 1.0).is_err());
        assert!(ScalingFactors::new(1.0, -2.0).is_err());
    }
}
