//! Entanglement of formation for two-mode Gaussian states.
//!
//! For an entangled standard form the optimal pure-state decomposition is
//! built from a single displaced two-mode squeezed vacuum with parameters
//! `(x, y)` and per-mode squeeze factors `(w1, w2)`. The optimum solves the
//! system
//!
//! ```text
//! purity: x^2 - y^2 = 1/4
//! (c1):   (b1 u1 - x)(b2 u2 - x) - (c sqrt(u1 u2) - y)^2 = 0
//! (c2):   (b1/u1 - x)(b2/u2 - x) - (|d|/sqrt(u1 u2) - y)^2 = 0
//! (c3):   (b1 u1 - x)(b2/u2 - x) = (b2 u2 - x)(b1/u1 - x)
//! ```
//!
//! which reduces to a quartic in `p = u1 u2`; given an admissible root, `y`
//! is the smaller root of a quadratic trinomial, `x = sqrt(y^2 + 1/4)`, and
//! the scalings follow from a quadratic in `u1`. The entanglement of
//! formation is the entropy function of `x` alone. Four families admit
//! closed forms (symmetric, squeezed-thermal, separability boundary,
//! `nu_minus = 1/2`) and are dispatched directly; the general path gates
//! every quartic root by residual feasibility plus classicality of the
//! decomposition partner and keeps the candidate with minimal `x`.

use crate::polyroot::{self, PolyError, Polynomial};
use crate::standard_form::{build_scaled_cm, ScalingFactors, StandardFormParams};
use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

/// Residual gate applied to every returned solution.
pub const RESIDUAL_GATE: f64 = 1e-9;
/// Relative tolerance for special-case manifold dispatch.
const MANIFOLD_TOL: f64 = 1e-9;
/// Classicality gate on the decomposition partner.
const PARTNER_GATE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("entangled convention requires c >= |d| = -d > 0 (c = {c}, d = {d})")]
    ConventionViolation { c: f64, d: f64 },
    #[error("TMSVS parameter out of domain: x = {0} < 1/2")]
    DomainError(f64),
    #[error("state is not symmetric (b1 = {b1}, b2 = {b2})")]
    NotSymmetric { b1: f64, b2: f64 },
    #[error("state is not squeezed-thermal (c = {c}, |d| = {d_abs})")]
    NotSqueezedThermal { c: f64, d_abs: f64 },
    #[error("physicality discriminant is not zero (D = {0:.6e})")]
    NotOnKappaManifold(f64),
    #[error("scaling quadratic has no positive root (p = {p}, x = {x})")]
    NoPositiveRoot { p: f64, x: f64 },
    #[error("scaling residual too large ({0:.6e})")]
    ResidualTooLarge(f64),
    #[error("no quartic root yields a feasible decomposition ({0:?})")]
    NoFeasibleRoot(Vec<Candidate>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Two-mode squeezed vacuum parameters with `x^2 - y^2 = 1/4` held exactly
/// (`y` is always derived from `x` or vice versa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmsvsParams {
    x: f64,
    y: f64,
}

impl TmsvsParams {
    /// From the one-mode variance `x >= 1/2` (tiny deficits are clamped).
    pub fn from_x(x: f64) -> Result<Self, SolveError> {
        if !(x >= 0.5 - 1e-12) || !x.is_finite() {
            return Err(SolveError::DomainError(x));
        }
        let x = x.max(0.5);
        Ok(TmsvsParams {
            x,
            y: (x * x - 0.25).max(0.0).sqrt(),
        })
    }

    /// From the cross-correlation `y >= 0` (tiny negatives are clamped).
    pub fn from_y(y: f64) -> Result<Self, SolveError> {
        if !y.is_finite() {
            return Err(SolveError::DomainError(y));
        }
        let y = y.max(0.0);
        Ok(TmsvsParams {
            x: (y * y + 0.25).sqrt(),
            y,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Standard form of the TMSVS: `b1 = b2 = x`, `c = y = -d`.
    pub fn standard_form(&self) -> StandardFormParams {
        StandardFormParams::new(self.x, self.x, self.y, -self.y)
            .expect("TMSVS parameters always satisfy the convention")
    }
}

/// Which solution path produced a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    GeneralQuartic,
    Symmetric,
    SqueezedThermal,
    Boundary,
    KappaHalf,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::GeneralQuartic => "general-quartic",
            Branch::Symmetric => "symmetric",
            Branch::SqueezedThermal => "squeezed-thermal",
            Branch::Boundary => "boundary",
            Branch::KappaHalf => "kappa-half",
        }
    }
}

/// Residuals of the optimality system at the returned solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub purity: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Residuals {
    pub fn to_array(&self) -> [f64; 4] {
        [self.purity, self.c1, self.c2, self.c3]
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

/// Diagnostic record for one quartic-root candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub p: f64,
    pub x: f64,
    pub y: f64,
    pub u1: f64,
    pub u2: f64,
    /// Largest optimality residual after refinement.
    pub max_residual: f64,
    /// Smallest eigenvalue of `V(u1, u2) - V0(x)`; the partner is classical
    /// iff this is non-negative.
    pub partner_gap: f64,
    pub feasible: bool,
}

/// Solved optimal decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalDecomposition {
    /// `p_m = w1 * w2 >= 1`.
    pub p_m: f64,
    /// Optimal squeeze factors `(w1, w2)`.
    pub scalings: ScalingFactors,
    /// The minimally entangled pure state of the decomposition.
    pub tmsvs: TmsvsParams,
    pub ef_nats: f64,
    pub ef_ebits: f64,
    pub residuals: Residuals,
    pub branch: Branch,
    /// Set when a returned squeeze factor is below one; such solutions are
    /// accepted but flagged.
    pub subunit_scaling: bool,
    /// Feasible quartic candidates other than the selected one.
    pub alternates: Vec<Candidate>,
}

impl OptimalDecomposition {
    pub fn w1(&self) -> f64 {
        self.scalings.u1()
    }

    pub fn w2(&self) -> f64 {
        self.scalings.u2()
    }
}

fn entangled_convention(sf: &StandardFormParams) -> Result<(), SolveError> {
    if sf.d() >= 0.0 || sf.c() < sf.abs_d() {
        return Err(SolveError::ConventionViolation {
            c: sf.c(),
            d: sf.d(),
        });
    }
    Ok(())
}

/// Coefficients `[A0, A1, A2, A3, A4]` of the quartic in `p = u1 u2`.
///
/// `A0 > 0`, `A1 <= 0`, `A4 >= 0`, and `A3 = A1`, `A4 = A0` under the swap
/// `c <-> |d|`; `A2` is symmetric under that swap.
pub fn quartic_coefficients(sf: &StandardFormParams) -> Result<[f64; 5], SolveError> {
    entangled_convention(sf)?;
    let (b1, b2, c, e) = (sf.b1(), sf.b2(), sf.c(), sf.abs_d());
    let m = b1 * b2;
    let det_v = sf.det_v();
    let z = sf.delta();
    let d_inv = sf.physicality_discriminant();

    let a0 = |ee: f64| -> f64 {
        let g = m - ee * ee;
        g * (b1 * g - b2 / 4.0) * (b2 * g - b1 / 4.0)
    };
    let a1 = |cc: f64, ee: f64| -> f64 {
        let g = m - ee * ee;
        let f = cc * g + ee / 4.0;
        -f * ((b1 - b2).powi(2) * f + 2.0 * m * (cc - ee) * (g - 0.25))
    };
    let a2 = ((b1 * c - b2 * e) * (b1 * e - b2 * c) + c * e * z) * (det_v + 1.0 / 16.0)
        - 2.0 * (m * m - c * c * e * e) * d_inv
        - c * e * det_v;

    Ok([a0(e), a1(c, e), a2, a1(e, c), a0(c)])
}

/// Value of the quartic at `p`; negative at `p = 1` for every entangled
/// state with `c > |d|`, zero there when `c = |d|`.
pub fn quartic_at(sf: &StandardFormParams, p: f64) -> Result<f64, SolveError> {
    let a = quartic_coefficients(sf)?;
    Ok(a.iter().rev().fold(0.0, |acc, &coeff| acc * p + coeff))
}

/// Coefficients `[B0, B1, B2]` of the trinomial whose smaller root is the
/// optimal `y` at fixed `p`; for entangled states `B0 >= 0`, `B1 < 0`,
/// `B2 > 0`.
pub fn y_trinomial(sf: &StandardFormParams, p: f64) -> [f64; 3] {
    let (b1, b2, c, e) = (sf.b1(), sf.b2(), sf.c(), sf.abs_d());
    let m = b1 * b2;
    let b0 = -sf.simon_discriminant() * p;
    let b1_coeff =
        -2.0 * p.sqrt() * ((e * (m - c * c) + c / 4.0) * p + (c * (m - e * e) + e / 4.0));
    let b2_coeff = (m - c * c) * p * p + sf.delta() * p + (m - e * e);
    [b0, b1_coeff, b2_coeff]
}

/// Optimality residuals at a candidate solution.
pub fn residuals(sf: &StandardFormParams, u1: f64, u2: f64, x: f64, y: f64) -> Residuals {
    let (b1, b2, c, e) = (sf.b1(), sf.b2(), sf.c(), sf.abs_d());
    let root = (u1 * u2).sqrt();
    let c1 = (b1 * u1 - x) * (b2 * u2 - x) - (c * root - y).powi(2);
    let c2 = (b1 / u1 - x) * (b2 / u2 - x) - (e / root - y).powi(2);
    // Cross-multiplied form of (c3); finite even when a factor vanishes.
    let c3 = (b1 * u1 - x) * (b2 / u2 - x) - (b2 * u2 - x) * (b1 / u1 - x);
    Residuals {
        purity: x * x - y * y - 0.25,
        c1,
        c2,
        c3,
    }
}

/// Scale of the optimality equations, used for relative residual tests.
fn residual_scale(sf: &StandardFormParams, u1: f64, u2: f64) -> f64 {
    1.0 + (sf.b1() * u1 * sf.b2() * u2).abs() + sf.c() * sf.c() * (u1 * u2).abs()
}

/// Solves condition (c1) for `u1` at fixed `p = u1 u2`, returning the
/// positive root that minimizes the joint `(c2, c3)` residual.
pub fn recover_scalings(
    sf: &StandardFormParams,
    p: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64), SolveError> {
    let (u1, u2, joint) = recover_scalings_lenient(sf, p, x, y)?;
    if joint > 1e-7 {
        return Err(SolveError::ResidualTooLarge(joint));
    }
    Ok((u1, u2))
}

/// As `recover_scalings` but reports the joint residual instead of gating
/// on it, so callers can refine before judging the candidate.
fn recover_scalings_lenient(
    sf: &StandardFormParams,
    p: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64, f64), SolveError> {
    let (b1, b2, c) = (sf.b1(), sf.b2(), sf.c());
    let k = (c * p.sqrt() - y).powi(2);
    // x b1 u1^2 - (b1 b2 p + x^2 - K) u1 + x b2 p = 0.
    let a = x * b1;
    let q = b1 * b2 * p + x * x - k;
    if q <= 0.0 {
        return Err(SolveError::NoPositiveRoot { p, x });
    }
    let mut disc = q * q - 4.0 * a * (x * b2 * p);
    if disc < 0.0 {
        if disc >= -1e-9 * q * q {
            // Double root: u1 = u2 = sqrt(p) up to rounding.
            disc = 0.0;
        } else {
            return Err(SolveError::NoPositiveRoot { p, x });
        }
    }
    let big = (q + disc.sqrt()) / (2.0 * a);
    let small = b2 * p / (b1 * big);
    let mut best: Option<(f64, f64, f64)> = None;
    for u1 in [big, small] {
        if !(u1.is_finite() && u1 > 0.0) {
            continue;
        }
        let u2 = p / u1;
        let r = residuals(sf, u1, u2, x, y);
        let joint = r.c2.abs() + r.c3.abs();
        if best.map_or(true, |(_, _, j)| joint < j) {
            best = Some((u1, u2, joint));
        }
    }
    best.ok_or(SolveError::NoPositiveRoot { p, x })
}

/// Von Neumann entropy of the one-mode reductions of a TMSVS:
/// `(x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)`, in nats and in ebits.
/// Increasing and concave for `x > 1/2`, with limit 0 at `x = 1/2`.
pub fn entropy_of_formation(x: f64) -> Result<(f64, f64), SolveError> {
    if !(x >= 0.5 - 1e-12) || !x.is_finite() {
        return Err(SolveError::DomainError(x));
    }
    let t = x - 0.5;
    let nats = if t <= 0.0 {
        0.0
    } else {
        (x + 0.5) * (x + 0.5).ln() - t * t.ln()
    };
    Ok((nats, nats / std::f64::consts::LN_2))
}

/// Damped Newton refinement of `(u1, u2, y)` on the system `(c1, c2, c3)`
/// with `x = sqrt(y^2 + 1/4)` substituted, using a numeric Jacobian.
fn refine(sf: &StandardFormParams, v: &mut [f64; 3]) {
    let eval = |v: &[f64; 3]| -> Vector3<f64> {
        let x = (v[2] * v[2] + 0.25).sqrt();
        let r = residuals(sf, v[0], v[1], x, v[2]);
        Vector3::new(r.c1, r.c2, r.c3)
    };
    for _ in 0..60 {
        let fv = eval(v);
        let n0 = fv.amax();
        let scale = residual_scale(sf, v[0], v[1]);
        if n0 <= 1e-14 * scale {
            return;
        }
        let mut jac = Matrix3::<f64>::zeros();
        for j in 0..3 {
            let h = 1e-7 * v[j].abs().max(1.0);
            let mut vp = *v;
            let mut vm = *v;
            vp[j] += h;
            vm[j] -= h;
            let (fp, fm) = (eval(&vp), eval(&vm));
            for i in 0..3 {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let Some(step) = jac.lu().solve(&(-fv)) else {
            return;
        };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..8 {
            let cand = [
                v[0] + lambda * step[0],
                v[1] + lambda * step[1],
                (v[2] + lambda * step[2]).max(0.0),
            ];
            if cand[0] > 1e-9 && cand[1] > 1e-9 && eval(&cand).amax() < n0 {
                *v = cand;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            // The Jacobian degenerates where the quartic has a double root
            // (nu_minus = 1/2 states); switch to Levenberg-Marquardt steps.
            let jt = jac.transpose();
            let jtj = jt * jac;
            let jtf = jt * fv;
            let mut mu = 1e-8 * jtj.diagonal().amax().max(f64::MIN_POSITIVE);
            for _ in 0..24 {
                let damped = jtj + Matrix3::identity() * mu;
                if let Some(step) = damped.lu().solve(&(-jtf)) {
                    let cand = [
                        v[0] + step[0],
                        v[1] + step[1],
                        (v[2] + step[2]).max(0.0),
                    ];
                    if cand[0] > 1e-9 && cand[1] > 1e-9 && eval(&cand).amax() < n0 {
                        *v = cand;
                        improved = true;
                        break;
                    }
                }
                mu *= 10.0;
            }
        }
        if !improved {
            return;
        }
    }
}

/// Smallest eigenvalue of `V(u1, u2) - V0(x, y)`; equals the classicality
/// margin of the decomposition partner.
fn partner_gap(sf: &StandardFormParams, u1: f64, u2: f64, t: &TmsvsParams) -> f64 {
    let Ok(u) = ScalingFactors::new(u1, u2) else {
        return f64::NEG_INFINITY;
    };
    let v = build_scaled_cm(sf, &u);
    let v0 = build_scaled_cm(&t.standard_form(), &ScalingFactors::identity());
    (v - v0).symmetric_eigenvalues().min()
}

fn assemble(
    sf: &StandardFormParams,
    u1: f64,
    u2: f64,
    t: TmsvsParams,
    branch: Branch,
    alternates: Vec<Candidate>,
) -> Result<OptimalDecomposition, SolveError> {
    let scalings =
        ScalingFactors::new(u1, u2).map_err(|_| SolveError::NoPositiveRoot { p: u1 * u2, x: t.x() })?;
    let r = residuals(sf, u1, u2, t.x(), t.y());
    if !(r.max_abs() <= RESIDUAL_GATE) && branch != Branch::Boundary {
        return Err(SolveError::ResidualTooLarge(r.max_abs()));
    }
    let (ef_nats, ef_ebits) = entropy_of_formation(t.x())?;
    Ok(OptimalDecomposition {
        p_m: scalings.product(),
        subunit_scaling: u1 < 1.0 - 1e-12 || u2 < 1.0 - 1e-12,
        scalings,
        tmsvs: t,
        ef_nats,
        ef_ebits,
        residuals: r,
        branch,
        alternates,
    })
}

/// Closed form for entangled symmetric states (`b1 = b2 = b`):
/// `w1 = w2 = sqrt((b - |d|)/(b - c))` and
/// `x_m = (kappa^2 + 1/4)/(2 kappa)` with `kappa = sqrt((b - c)(b - |d|))`.
pub fn solve_special_symmetric(
    sf: &StandardFormParams,
) -> Result<OptimalDecomposition, SolveError> {
    entangled_convention(sf)?;
    let (b1, b2) = (sf.b1(), sf.b2());
    if (b1 - b2).abs() > MANIFOLD_TOL * b1.max(b2) {
        return Err(SolveError::NotSymmetric { b1, b2 });
    }
    let (b, c, e) = (0.5 * (b1 + b2), sf.c(), sf.abs_d());
    let kappa = ((b - c) * (b - e)).sqrt();
    let mut x = (kappa * kappa + 0.25) / (2.0 * kappa);
    // Pure inputs have x_m = b exactly; the kappa form merely reconstructs
    // it through a cancellation-prone quotient, so snap the last ulps back.
    if (x - b).abs() <= 512.0 * f64::EPSILON * (1.0 + b) {
        x = b;
    }
    let w = ((b - e) / (b - c)).sqrt();
    assemble(sf, w, w, TmsvsParams::from_x(x)?, Branch::Symmetric, Vec::new())
}

/// Closed form for squeezed thermal states (`c = |d|`): `w1 = w2 = 1` and
/// `x_m = [(b1 + b2)(b1 b2 - c^2 + 1/4) - 2 c sqrt(D)] / [(b1 + b2)^2 - 4 c^2]`.
pub fn solve_special_squeezed_thermal(
    sf: &StandardFormParams,
) -> Result<OptimalDecomposition, SolveError> {
    entangled_convention(sf)?;
    let (b1, b2, c, e) = (sf.b1(), sf.b2(), sf.c(), sf.abs_d());
    if (c - e).abs() > MANIFOLD_TOL * c {
        return Err(SolveError::NotSqueezedThermal { c, d_abs: e });
    }
    let sum = b1 + b2;
    let x = (sum * (b1 * b2 - c * c + 0.25) - 2.0 * c * sf.physicality_discriminant().max(0.0).sqrt())
        / (sum * sum - 4.0 * c * c);
    assemble(sf, 1.0, 1.0, TmsvsParams::from_x(x)?, Branch::SqueezedThermal, Vec::new())
}

/// Squeeze factor used by the boundary and `nu_minus = 1/2` closed forms:
/// `sqrt([b2(b1 b2 - d^2) - b1/4] / [b2(b1 b2 - c^2) - b1/4])`.
fn edge_scaling(b1: f64, b2: f64, c: f64, e: f64) -> f64 {
    let m = b1 * b2;
    let num = b2 * (m - e * e) - b1 / 4.0;
    let den = b2 * (m - c * c) - b1 / 4.0;
    (num / den).sqrt()
}

/// Closed form at the separability boundary (`D_tilde = 0`): `x = 1/2`,
/// `y = 0`, and the squeeze factors make the state touch the classicality
/// threshold.
fn solve_boundary(sf: &StandardFormParams) -> Result<OptimalDecomposition, SolveError> {
    let (b1, b2, c, e) = (sf.b1(), sf.b2(), sf.c(), sf.abs_d());
    let w1 = edge_scaling(b1, b2, c, e);
    let w2 = edge_scaling(b2, b1, c, e);
    if !(w1.is_finite() && w2.is_finite() && w1 > 0.0 && w2 > 0.0) {
        return Err(SolveError::NoPositiveRoot { p: w1 * w2, x: 0.5 });
    }
    let t = TmsvsParams::from_x(0.5)?;
    let dec = assemble(sf, w1, w2, t, Branch::Boundary, Vec::new())?;
    // x = 1/2 is exact here, so the optimality system must still close.
    if dec.residuals.max_abs() > RESIDUAL_GATE {
        return Err(SolveError::ResidualTooLarge(dec.residuals.max_abs()));
    }
    Ok(dec)
}

/// Trivial decomposition for strictly separable states: vacuum TMSVS and
/// unit scalings. The optimality system does not apply; residuals are
/// reported as computed but not gated.
fn solve_separable(sf: &StandardFormParams) -> Result<OptimalDecomposition, SolveError> {
    let t = TmsvsParams::from_x(0.5)?;
    let r = residuals(sf, 1.0, 1.0, 0.5, 0.0);
    Ok(OptimalDecomposition {
        p_m: 1.0,
        scalings: ScalingFactors::identity(),
        tmsvs: t,
        ef_nats: 0.0,
        ef_ebits: 0.0,
        residuals: r,
        branch: Branch::Boundary,
        subunit_scaling: false,
        alternates: Vec::new(),
    })
}

/// Closed forms on the `D = 0` manifold (`nu_minus = 1/2`), after enforcing
/// `b1 >= b2`. Two candidate solutions exist: one with edge-form scalings and
/// `x_m = (b1^2 - b2^2)/(8 (det V - 1/16))`, one with
/// `x_m = sqrt(b1 b2 / (b1 b2 - d^2))/2`. A sign test on `b2 c - b1 |d|` does
/// not separate them reliably, so both are evaluated and the one whose
/// decomposition partner is classical wins (smaller `x` when both qualify).
pub fn solve_special_kappa_half(
    sf: &StandardFormParams,
) -> Result<OptimalDecomposition, SolveError> {
    entangled_convention(sf)?;
    let d_inv = sf.physicality_discriminant();
    if d_inv.abs() > MANIFOLD_TOL {
        return Err(SolveError::NotOnKappaManifold(d_inv));
    }
    let swapped = sf.b1() < sf.b2();
    let s = if swapped { sf.swap_modes() } else { *sf };
    let (b1, b2, c, e) = (s.b1(), s.b2(), s.c(), s.abs_d());
    let m = b1 * b2;

    let edge = (
        (b1 * b1 - b2 * b2) / (8.0 * (s.det_v() - 1.0 / 16.0)),
        edge_scaling(b1, b2, c, e),
        edge_scaling(b2, b1, c, e),
    );
    let interior = (
        0.5 * (m / (m - e * e)).sqrt(),
        2.0 * ((b1 / b2) * (m - e * e)).sqrt(),
        2.0 * ((b2 / b1) * (m - e * e)).sqrt(),
    );

    let mut diagnostics = Vec::new();
    let mut best: Option<(bool, f64, f64, f64, f64)> = None;
    for (x, w1, w2) in [edge, interior] {
        if !(x >= 0.5 - 1e-12 && w1.is_finite() && w2.is_finite() && w1 > 0.0 && w2 > 0.0) {
            continue;
        }
        let t = TmsvsParams::from_x(x)?;
        let gap = partner_gap(&s, w1, w2, &t);
        let feasible = gap >= -PARTNER_GATE;
        diagnostics.push(Candidate {
            p: w1 * w2,
            x: t.x(),
            y: t.y(),
            u1: w1,
            u2: w2,
            max_residual: residuals(&s, w1, w2, t.x(), t.y()).max_abs(),
            partner_gap: gap,
            feasible,
        });
        let better = match best {
            None => true,
            // Feasibility first; among feasible candidates the smaller x
            // wins, among infeasible ones the larger classicality gap.
            Some((bf, bgap, bx, _, _)) => match (feasible, bf) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => x < bx,
                (false, false) => gap > bgap,
            },
        };
        if better {
            best = Some((feasible, gap, x, w1, w2));
        }
    }
    let Some((feasible, _, x, w1, w2)) = best else {
        return Err(SolveError::NoFeasibleRoot(diagnostics));
    };
    if !feasible {
        return Err(SolveError::NoFeasibleRoot(diagnostics));
    }
    let (w1, w2) = if swapped { (w2, w1) } else { (w1, w2) };
    assemble(sf, w1, w2, TmsvsParams::from_x(x)?, Branch::KappaHalf, Vec::new())
}

/// General path: quartic roots `p >= 1`, `y` from the trinomial,
/// `x = sqrt(y^2 + 1/4)`, scalings from (c1), Newton refinement, then the
/// residual and partner-classicality gates; minimal `x` wins.
fn solve_general(sf: &StandardFormParams) -> Result<OptimalDecomposition, SolveError> {
    entangled_convention(sf)?;
    let coeffs = quartic_coefficients(sf)?;
    let roots = polyroot::real_roots(&Polynomial::new(&coeffs)?)?;

    let mut rejected: Vec<Candidate> = Vec::new();
    let mut feasible: Vec<Candidate> = Vec::new();
    for &(root, _) in &roots.roots {
        if root < 1.0 - 1e-9 {
            continue;
        }
        let p = root.max(1.0);
        let trin = y_trinomial(sf, p);
        let y0 = match polyroot::smallest_root_quadratic(trin[0], trin[1], trin[2]) {
            Ok(y) => y.max(0.0),
            Err(_) => {
                rejected.push(Candidate {
                    p,
                    x: f64::NAN,
                    y: f64::NAN,
                    u1: f64::NAN,
                    u2: f64::NAN,
                    max_residual: f64::INFINITY,
                    partner_gap: f64::NEG_INFINITY,
                    feasible: false,
                });
                continue;
            }
        };
        let x0 = (y0 * y0 + 0.25).sqrt();
        let (u1, u2, _) = match recover_scalings_lenient(sf, p, x0, y0) {
            Ok(t) => t,
            Err(_) => {
                rejected.push(Candidate {
                    p,
                    x: x0,
                    y: y0,
                    u1: f64::NAN,
                    u2: f64::NAN,
                    max_residual: f64::INFINITY,
                    partner_gap: f64::NEG_INFINITY,
                    feasible: false,
                });
                continue;
            }
        };
        let mut v = [u1, u2, y0];
        refine(sf, &mut v);
        let t = match TmsvsParams::from_y(v[2]) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let r = residuals(sf, v[0], v[1], t.x(), t.y());
        let gap = partner_gap(sf, v[0], v[1], &t);
        let cand = Candidate {
            p: v[0] * v[1],
            x: t.x(),
            y: t.y(),
            u1: v[0],
            u2: v[1],
            max_residual: r.max_abs(),
            partner_gap: gap,
            feasible: r.max_abs() <= RESIDUAL_GATE && gap >= -PARTNER_GATE,
        };
        if cand.feasible {
            feasible.push(cand);
        } else {
            rejected.push(cand);
        }
    }

    feasible.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    let Some(best) = feasible.first().copied() else {
        return Err(SolveError::NoFeasibleRoot(rejected));
    };
    let alternates: Vec<Candidate> = feasible
        .iter()
        .skip(1)
        .filter(|c| (c.x - best.x).abs() > 1e-10)
        .copied()
        .collect();
    assemble(
        sf,
        best.u1,
        best.u2,
        TmsvsParams::from_y(best.y)?,
        Branch::GeneralQuartic,
        alternates,
    )
}

/// Entanglement of formation with special-case dispatch.
///
/// Dispatch order: separable/boundary (`D_tilde >= -tol`), symmetric,
/// squeezed-thermal, `D = 0`, then the general quartic path. Separable
/// inputs are not an error: they return the trivial decomposition with
/// `EF = 0`.
pub fn solve_eof(sf: &StandardFormParams, tol: f64) -> Result<OptimalDecomposition, SolveError> {
    let d_tilde = sf.simon_discriminant();
    let tol = tol.max(1e-15);
    if d_tilde >= -tol {
        if d_tilde.abs() <= tol.max(MANIFOLD_TOL) {
            match solve_boundary(sf) {
                Ok(dec) => return Ok(dec),
                // The boundary closed form assumes the entangled sign
                // convention; cd >= 0 boundary states fall back to the
                // trivial decomposition (EF = 0 either way).
                Err(e) if sf.d() < 0.0 => return Err(e),
                Err(_) => return solve_separable(sf),
            }
        }
        return solve_separable(sf);
    }
    let (b1, b2) = (sf.b1(), sf.b2());
    if (b1 - b2).abs() <= MANIFOLD_TOL * b1.max(b2) {
        return solve_special_symmetric(sf);
    }
    if (sf.c() - sf.abs_d()).abs() <= MANIFOLD_TOL * sf.c() {
        return solve_special_squeezed_thermal(sf);
    }
    if sf.physicality_discriminant().abs() <= MANIFOLD_TOL {
        return solve_special_kappa_half(sf);
    }
    solve_general(sf)
}

/// As `solve_eof` but forcing the general quartic path on every entangled
/// state (including the special-case manifolds). Strictly separable states
/// still take the trivial path, since the optimality system has no solution
/// there.
pub fn solve_eof_general(
    sf: &StandardFormParams,
    tol: f64,
) -> Result<OptimalDecomposition, SolveError> {
    let d_tilde = sf.simon_discriminant();
    let tol = tol.max(1e-15);
    if d_tilde > tol.max(MANIFOLD_TOL)
        || (d_tilde >= -tol && entangled_convention(sf).is_err())
    {
        return solve_separable(sf);
    }
    solve_general(sf)
}
