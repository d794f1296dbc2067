//! Real-root extraction for polynomials of degree at most four, with Newton
//! polishing and multiplicity detection.
//!
//! The entanglement solver only ever needs the real roots of one quartic and
//! the smaller root of one quadratic per state, so robustness matters far
//! more than asymptotics here. Quartics and cubics are solved through the
//! eigenvalues of the companion matrix of the scale-normalized polynomial;
//! every candidate is then polished on the original coefficients.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("degree {0} exceeds the supported maximum of 4")]
    DegreeTooHigh(usize),
    #[error("coefficient {0} is not finite")]
    NonFiniteCoefficient(usize),
    #[error("quadratic leading coefficient must be positive (B2 = {0})")]
    NonPositiveLeading(f64),
    #[error("negative discriminant beyond tolerance ({0:.6e})")]
    NegativeDiscriminant(f64),
}

/// Dense polynomial with ascending-degree coefficients, `len <= 5`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// Real roots with multiplicities, sorted ascending, plus the residual
/// `|poly(root)|` for each root.
#[derive(Debug, Clone, Default)]
pub struct RootSet {
    pub roots: Vec<(f64, usize)>,
    pub residuals: Vec<f64>,
}

impl RootSet {
    /// Root values, one entry per distinct root.
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|&(r, _)| r).collect()
    }
}

/// Outcome of Newton polishing; `converged` is false only when the
/// iteration stalled above the widened residual tolerance.
#[derive(Debug, Clone, Copy)]
pub struct PolishResult {
    pub x: f64,
    pub residual: f64,
    pub converged: bool,
}

impl Polynomial {
    pub fn new(coeffs: &[f64]) -> Result<Self, PolyError> {
        if coeffs.len() > 5 {
            return Err(PolyError::DegreeTooHigh(coeffs.len() - 1));
        }
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(PolyError::NonFiniteCoefficient(i));
            }
        }
        Ok(Polynomial {
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Derivative evaluation.
    pub fn eval_deriv(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * x + c * i as f64)
    }

    /// Magnitude of the polynomial's terms at `x`; the natural scale for
    /// residual tolerances.
    fn eval_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        let s = self
            .coeffs
            .iter()
            .fold((0.0f64, 1.0f64), |(sum, pow), &c| (sum + c.abs() * pow, pow * ax))
            .0;
        s.max(f64::MIN_POSITIVE)
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()))
    }

    /// Effective degree after trimming leading coefficients below
    /// `1e-13 * max|coeff|`.
    fn trimmed(&self) -> Vec<f64> {
        let scale = self.max_coeff();
        let mut c = self.coeffs.clone();
        while let Some(&last) = c.last() {
            if c.len() > 1 && last.abs() <= 1e-13 * scale {
                c.pop();
            } else {
                break;
            }
        }
        c
    }
}

/// All real roots of a polynomial of degree at most four.
///
/// Roots closer than `1e-7 * max(1, |root|)` are merged into a single root
/// with raised multiplicity; near-real companion eigenvalue pairs collapse
/// onto such double roots, so genuinely complex pairs are never reported.
pub fn real_roots(poly: &Polynomial) -> Result<RootSet, PolyError> {
    let scale = poly.max_coeff();
    if scale == 0.0 {
        return Err(PolyError::ZeroPolynomial);
    }
    let c = poly.trimmed();
    let degree = c.len() - 1;

    let mut raw: Vec<f64> = Vec::new();
    match degree {
        0 => {}
        1 => raw.push(-c[0] / c[1]),
        2 => raw.extend(quadratic_roots(c[0], c[1], c[2])),
        _ => {
            // Companion matrix of the monic normalization.
            let lead = c[degree];
            let n = degree;
            let mut comp = DMatrix::<f64>::zeros(n, n);
            for i in 1..n {
                comp[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                comp[(i, n - 1)] = -c[i] / lead;
            }
            for z in comp.complex_eigenvalues().iter() {
                if z.im.abs() <= 1e-7 * z.re.abs().max(1.0) {
                    raw.push(z.re);
                }
            }
        }
    }

    // Polish on the untrimmed polynomial and keep genuine real roots only.
    let mut polished: Vec<(f64, f64)> = Vec::new();
    for x0 in raw {
        let r = polish(poly, x0);
        if r.residual <= 1e-10 * poly.eval_scale(r.x) {
            polished.push((r.x, r.residual));
        }
    }
    polished.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut out = RootSet::default();
    let mut i = 0;
    while i < polished.len() {
        let mut j = i + 1;
        let mut best = polished[i];
        while j < polished.len()
            && (polished[j].0 - polished[i].0).abs() <= 1e-7 * polished[i].0.abs().max(1.0)
        {
            if polished[j].1 < best.1 {
                best = polished[j];
            }
            j += 1;
        }
        out.roots.push((best.0, j - i));
        out.residuals.push(best.1);
        i = j;
    }
    Ok(out)
}

/// Both real roots of `c0 + c1 x + c2 x^2` (ascending), using the stable
/// quadratic branch; an empty vector when the discriminant is negative
/// beyond rounding noise.
fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let scale = (c1 * c1).max((4.0 * c2 * c0).abs()).max(f64::MIN_POSITIVE);
    let mut disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        if disc >= -1e-12 * scale {
            disc = 0.0;
        } else {
            return Vec::new();
        }
    }
    let root = disc.sqrt();
    // q = -(c1 + sign(c1) sqrt(disc))/2 avoids cancellation in one root;
    // the other follows from the product c0/c2.
    let q = -0.5 * (c1 + root.copysign(if c1 == 0.0 { 1.0 } else { c1 }));
    let mut roots = if q == 0.0 {
        vec![0.0, -c1 / c2]
    } else {
        vec![q / c2, c0 / q]
    };
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// The smaller real root of `B2 y^2 + B1 y + B0` with `B2 > 0`, computed on
/// the branch that avoids cancellation; the discriminant is clamped to zero
/// within `-1e-12` (scale-relative) and rejected beyond that.
pub fn smallest_root_quadratic(b0: f64, b1: f64, b2: f64) -> Result<f64, PolyError> {
    if !(b2 > 0.0) {
        return Err(PolyError::NonPositiveLeading(b2));
    }
    let scale = (b1 * b1).max((4.0 * b2 * b0).abs()).max(f64::MIN_POSITIVE);
    let mut disc = b1 * b1 - 4.0 * b2 * b0;
    if disc < 0.0 {
        if disc >= -1e-12 * scale {
            disc = 0.0;
        } else {
            return Err(PolyError::NegativeDiscriminant(disc));
        }
    }
    let root = disc.sqrt();
    // Roots are (-b1 ± root) / (2 b2); the smaller one takes the minus sign.
    // When b1 < 0 that difference cancels, so use the product form instead.
    if b1 < 0.0 {
        Ok(2.0 * b0 / (-b1 + root))
    } else {
        Ok((-b1 - root) / (2.0 * b2))
    }
}

/// Newton iteration with a bisection safeguard, starting from `x0`.
///
/// Stops when the residual drops below `1e-13` of the evaluation scale or
/// after 100 iterations; a multiple root is accepted under a widened
/// tolerance (`1e-9` of scale) instead of being flagged as non-converged.
pub fn polish(poly: &Polynomial, x0: f64) -> PolishResult {
    let mut x = x0;
    let mut fx = poly.eval(x);
    let (mut best_x, mut best_f) = (x, fx.abs());
    // Opposite-sign bracket, discovered opportunistically.
    let mut bracket: Option<(f64, f64, f64)> = None; // (lo, hi, f_lo)

    for _ in 0..100 {
        let scale = poly.eval_scale(x);
        if fx.abs() <= 1e-13 * scale {
            return PolishResult {
                x,
                residual: fx.abs(),
                converged: true,
            };
        }
        let dfx = poly.eval_deriv(x);
        let mut next = if dfx != 0.0 {
            let step = fx / dfx;
            // Limit steps to keep the iteration inside the root's basin.
            let max_step = 1.0 + x.abs();
            x - step.clamp(-max_step, max_step)
        } else {
            x + 1e-8 * (1.0 + x.abs())
        };
        if let Some((lo, hi, f_lo)) = bracket {
            if next <= lo || next >= hi {
                next = 0.5 * (lo + hi);
            }
            let f_next = poly.eval(next);
            if (f_next > 0.0) == (f_lo > 0.0) {
                bracket = Some((next, hi, f_next));
            } else {
                bracket = Some((lo, next, f_lo));
            }
        }
        let f_next = poly.eval(next);
        if bracket.is_none() && (f_next > 0.0) != (fx > 0.0) {
            let (lo, hi, f_lo) = if x < next { (x, next, fx) } else { (next, x, f_next) };
            bracket = Some((lo, hi, f_lo));
        }
        x = next;
        fx = f_next;
        if fx.abs() < best_f {
            best_x = x;
            best_f = fx.abs();
        }
    }
    let scale = poly.eval_scale(best_x);
    PolishResult {
        x: best_x,
        residual: best_f,
        converged: best_f <= 1e-9 * scale,
    }
}
