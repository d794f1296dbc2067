//! Reproducible random-state generation.
//!
//! All generators draw from a caller-supplied RNG (seed it for
//! reproducibility) and rejection-sample until the requested family's
//! constraints hold: physicality with margin, entanglement, or membership
//! in one of the special-case manifolds. Sampling ranges follow the
//! standard-form box `b ∈ [0.6, 3]`, `0 < c < sqrt(b1 b2)`, `0 < |d| <= c`,
//! `d < 0`.

use crate::cm::CovarianceMatrix;
use crate::standard_form::{reduce_to_standard_form, StandardFormParams};
use nalgebra::{Matrix2, Matrix4};
use rand::Rng;
use thiserror::Error;

/// Physicality margin on `nu_minus` for generated states.
pub const PHYSICAL_MARGIN: f64 = 1e-6;
/// Entanglement margin on the Simon discriminant for generated states.
pub const ENTANGLED_MARGIN: f64 = 1e-6;
/// Rejection-sampling budget per generated state.
pub const DRAW_LIMIT: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("state generation stalled after {0} rejected draws")]
    GenerationStalled(usize),
}

fn attempt<R: Rng, T>(
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Option<T>,
) -> Result<T, GenError> {
    for _ in 0..DRAW_LIMIT {
        if let Some(t) = draw(rng) {
            return Ok(t);
        }
    }
    Err(GenError::GenerationStalled(DRAW_LIMIT))
}

fn in_range<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + rng.gen::<f64>() * (hi - lo)
}

fn physical(sf: &StandardFormParams) -> bool {
    sf.symplectic_spectrum()
        .map(|(nu_minus, _)| nu_minus >= 0.5 + PHYSICAL_MARGIN)
        .unwrap_or(false)
}

fn entangled(sf: &StandardFormParams) -> bool {
    sf.simon_discriminant() < -ENTANGLED_MARGIN
}

/// Random physical standard form from the sampling box (not necessarily
/// entangled).
pub fn random_standard_form<R: Rng>(rng: &mut R) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let b1 = in_range(rng, 0.6, 3.0);
        let b2 = in_range(rng, 0.6, 3.0);
        let c = rng.gen::<f64>() * (b1 * b2).sqrt();
        let e = rng.gen::<f64>() * c;
        let sf = StandardFormParams::new(b1, b2, c, -e).ok()?;
        physical(&sf).then_some(sf)
    })
}

/// Random entangled state (Simon discriminant below the margin).
pub fn random_entangled<R: Rng>(rng: &mut R) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let b1 = in_range(rng, 0.6, 3.0);
        let b2 = in_range(rng, 0.6, 3.0);
        let c = rng.gen::<f64>() * (b1 * b2).sqrt();
        let e = rng.gen::<f64>() * c;
        let sf = StandardFormParams::new(b1, b2, c, -e).ok()?;
        (physical(&sf) && entangled(&sf)).then_some(sf)
    })
}

/// Random entangled symmetric state (`b1 = b2`).
pub fn random_symmetric_entangled<R: Rng>(
    rng: &mut R,
) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let b = in_range(rng, 0.6, 3.0);
        let c = rng.gen::<f64>() * b;
        let e = rng.gen::<f64>() * c;
        let sf = StandardFormParams::new(b, b, c, -e).ok()?;
        (physical(&sf) && entangled(&sf)).then_some(sf)
    })
}

/// Random entangled squeezed thermal state (`c = |d|`).
pub fn random_squeezed_thermal<R: Rng>(
    rng: &mut R,
) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let b1 = in_range(rng, 0.6, 3.0);
        let b2 = in_range(rng, 0.6, 3.0);
        let c = rng.gen::<f64>() * (b1 * b2).sqrt();
        let sf = StandardFormParams::new(b1, b2, c, -c).ok()?;
        (physical(&sf) && entangled(&sf)).then_some(sf)
    })
}

/// Random physical state exactly on the separability boundary: at fixed
/// `(b1, b2, c)` the magnitude `|d|` solves the quadratic
/// `(b1 b2 - c^2) e^2 + (c/2) e - [(b1 b2 - c^2) b1 b2 - (b1^2 + b2^2)/4 + 1/16] = 0`,
/// which makes the Simon discriminant vanish.
pub fn random_boundary<R: Rng>(rng: &mut R) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let b1 = in_range(rng, 0.6, 3.0);
        let b2 = in_range(rng, 0.6, 3.0);
        let m = b1 * b2;
        let c = rng.gen::<f64>() * m.sqrt();
        let a2 = m - c * c;
        let a1 = c / 2.0;
        let a0 = -(a2 * m - (b1 * b1 + b2 * b2) / 4.0 + 1.0 / 16.0);
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc < 0.0 || a2 <= 0.0 {
            return None;
        }
        let e = (-a1 + disc.sqrt()) / (2.0 * a2);
        if !(e > 1e-6 && e <= c) {
            return None;
        }
        let sf = StandardFormParams::new(b1, b2, c, -e).ok()?;
        let nu_ok = sf
            .symplectic_spectrum()
            .map(|(nu_minus, _)| nu_minus >= 0.5 - 1e-9)
            .unwrap_or(false);
        (nu_ok && sf.simon_discriminant().abs() <= 1e-9).then_some(sf)
    })
}

fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    Matrix4::new(
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    )
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (co, si) = (theta.cos(), theta.sin());
    Matrix4::new(
        co, 0.0, si, 0.0, //
        0.0, co, 0.0, si, //
        -si, 0.0, co, 0.0, //
        0.0, -si, 0.0, co,
    )
}

/// Random entangled state with `nu_minus = 1/2` exactly (zero physicality
/// discriminant): a Williamson normal form `diag(1/2, 1/2, nu, nu)` pushed
/// through a two-mode squeezer and a beam splitter, then reduced back to
/// standard form. Modes are swapped at random so both signs of
/// `b2 c - b1 |d|` occur.
pub fn random_kappa_half<R: Rng>(rng: &mut R) -> Result<StandardFormParams, GenError> {
    attempt(rng, |rng| {
        let nu = in_range(rng, 0.55, 2.2);
        let r = in_range(rng, 0.1, 0.8);
        let theta = in_range(rng, 0.1, std::f64::consts::FRAC_PI_2 - 0.1);
        let swap = rng.gen::<bool>();
        let s = two_mode_squeezer(r) * beam_splitter(theta);
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.5, 0.5, nu, nu));
        let v = CovarianceMatrix::new(s * d * s.transpose());
        let sf = reduce_to_standard_form(&v, 1e-10).ok()?;
        let sf = if swap { sf.swap_modes() } else { sf };
        (entangled(&sf) && sf.physicality_discriminant().abs() <= 1e-9).then_some(sf)
    })
}

/// Random local symplectic `S = (R(theta1) Z(z1)) ⊕ (R(theta2) Z(z2))`:
/// a phase rotation and a squeeze per mode. Conjugation `S V S^T` leaves
/// every entanglement quantity invariant.
pub fn random_local_symplectic<R: Rng>(rng: &mut R) -> Matrix4<f64> {
    let block = |rng: &mut R| -> Matrix2<f64> {
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let z = in_range(rng, 0.5, 2.0);
        let rot = Matrix2::new(theta.cos(), theta.sin(), -theta.sin(), theta.cos());
        rot * Matrix2::new(z, 0.0, 0.0, 1.0 / z)
    };
    let s1 = block(rng);
    let s2 = block(rng);
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&s1);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&s2);
    s
}
