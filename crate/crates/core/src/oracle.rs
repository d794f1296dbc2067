//! Brute-force cross-check of the algebraic solver.
//!
//! The entanglement of formation is the entropy function of the smallest
//! TMSVS parameter `x` such that `V(u1, u2) - V0(x)` is positive
//! semidefinite for some scalings `(u1, u2)`. This module minimizes that
//! quantity directly: a logarithmic grid over the scalings with a
//! one-dimensional feasibility search in `x` at every node, shrink-and-
//! rescan refinement around a small beam of surviving local minima, and a
//! terminal polish that tracks the valley floor between grid nodes.
//! It deliberately shares nothing
//! with the algebraic solution path beyond the covariance types, so
//! agreement between the two is meaningful evidence.

use crate::standard_form::{build_scaled_cm, ScalingFactors, StandardFormParams};
use nalgebra::Matrix4;
use rayon::prelude::*;

/// PSD feasibility tolerance on the smallest eigenvalue.
const FEAS_TOL: f64 = 1e-12;
/// Nodes of the linear feasibility scan in `x`.
const X_SCAN_NODES: usize = 64;

/// Grid-search configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Grid points per scaling axis.
    pub grid_points_per_axis: usize,
    /// Initial scan covers `u ∈ [1/L, L]` on a log scale.
    pub log_range: f64,
    /// Shrink-and-rescan rounds after the initial scan (shrink factor 0.1).
    pub refine_iterations: usize,
    /// Termination width for the feasibility-edge bisection in `x`.
    pub x_bisection_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_points_per_axis: 81,
            log_range: 8.0,
            refine_iterations: 3,
            x_bisection_tol: 1e-10,
        }
    }
}

/// Result of the brute-force minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub ef_nats: f64,
    pub u1_star: f64,
    pub u2_star: f64,
    pub x_star: f64,
    /// Empirical sensitivity of the entanglement to one final-grid cell,
    /// plus the `x`-bisection tolerance mapped through the entropy slope.
    pub estimated_resolution: f64,
    /// Log-scale spacing of the final grid.
    pub final_cell_log: f64,
}

/// Entropy of the TMSVS one-mode reduction (the defining map from `x` to
/// entanglement); duplicated here so the oracle stays independent of the
/// solver module.
fn entropy(x: f64) -> f64 {
    let t = x - 0.5;
    if t <= 0.0 {
        0.0
    } else {
        (x + 0.5) * (x + 0.5).ln() - t * t.ln()
    }
}

/// TMSVS covariance matrix entries for the feasibility difference.
fn tmsvs_matrix(x: f64) -> Matrix4<f64> {
    let y = (x * x - 0.25).max(0.0).sqrt();
    Matrix4::new(
        x, 0.0, y, 0.0, //
        0.0, x, 0.0, -y, //
        y, 0.0, x, 0.0, //
        0.0, -y, 0.0, x,
    )
}

/// Smallest TMSVS parameter `x >= 1/2` with `V(u1, u2) - V0(x)` PSD, or
/// `None` when no `x` is feasible at this scaling. Infeasibility is an
/// ordinary value: most scalings far from the optimum admit no `x` at all.
pub fn min_x_given_scaling(
    sf: &StandardFormParams,
    u1: f64,
    u2: f64,
    tol: f64,
) -> Option<f64> {
    let u = ScalingFactors::new(u1, u2).ok()?;
    let v = *build_scaled_cm(sf, &u).matrix();
    // Any feasible x is bounded by every diagonal entry of V(u1, u2).
    let x_cap = (sf.b1() * u1)
        .min(sf.b1() / u1)
        .min(sf.b2() * u2)
        .min(sf.b2() / u2);
    if x_cap < 0.5 {
        return None;
    }
    let gap = |x: f64| (v - tmsvs_matrix(x)).symmetric_eigenvalues().min();
    let feasible = |x: f64| gap(x) >= -FEAS_TOL;

    // Linear scan locates the first feasible node; the feasible x-set is an
    // interval in practice, so the lower edge lies just before it.
    let step = (x_cap - 0.5) / (X_SCAN_NODES - 1) as f64;
    let mut bracket = None;
    let mut prev = 0.5;
    for i in 0..X_SCAN_NODES {
        let x = 0.5 + step * i as f64;
        if feasible(x) {
            bracket = Some((prev, x));
            break;
        }
        prev = x;
    }

    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => {
            // The feasible set may be narrower than the scan spacing
            // (exactly a point for pure states): maximize the eigenvalue
            // gap by golden-section search instead.
            let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
            let (mut a, mut b) = (0.5, x_cap);
            let (mut c, mut d) = (b - inv_phi * (b - a), a + inv_phi * (b - a));
            let (mut gc, mut gd) = (gap(c), gap(d));
            for _ in 0..200 {
                // Fixed tight stop: a singleton feasible set (pure state)
                // must be located to well under the PSD tolerance.
                if b - a <= 1e-13 {
                    break;
                }
                if gc > gd {
                    b = d;
                    d = c;
                    gd = gc;
                    c = b - inv_phi * (b - a);
                    gc = gap(c);
                } else {
                    a = c;
                    c = d;
                    gc = gd;
                    d = a + inv_phi * (b - a);
                    gd = gap(d);
                }
            }
            let peak = 0.5 * (a + b);
            if !feasible(peak) {
                return None;
            }
            (0.5, peak)
        }
    };
    if hi <= 0.5 {
        return Some(0.5);
    }
    // lo == 0.5 may itself be feasible only when the scan hit it first, in
    // which case hi == 0.5 and we returned above; otherwise lo is
    // infeasible and hi feasible.
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn lex_less(a: &(f64, f64, f64), b: &(f64, f64, f64)) -> bool {
    (a.0, a.1, a.2) < (b.0, b.1, b.2)
}

/// A surviving grid candidate: value, log-coordinates, and whether it sat
/// near the border of the window that produced it.
#[derive(Debug, Clone, Copy)]
struct Seed {
    x: f64,
    l1: f64,
    l2: f64,
    edge: bool,
}

/// Scan an `n x n` log-grid window and return the strongest lattice local
/// minima, best first. Infeasible nodes count as infinitely high. Keeping a
/// handful of separated minima instead of the single best node matters:
/// distinct valleys of the objective can sit closer together than one
/// coarse cell, and committing to one node before they resolve can zoom
/// into the wrong valley.
fn window_minima(
    sf: &StandardFormParams,
    config: &OracleConfig,
    center: (f64, f64),
    half: f64,
    keep: usize,
) -> Vec<Seed> {
    let n = config.grid_points_per_axis.max(2);
    let cell = 2.0 * half / (n - 1) as f64;
    let coord = |i: usize, c: f64| c - half + cell * i as f64;
    let field: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let l1 = coord(idx / n, center.0);
            let l2 = coord(idx % n, center.1);
            min_x_given_scaling(sf, l1.exp(), l2.exp(), config.x_bisection_tol)
        })
        .collect();
    let at = |i: i64, j: i64| -> f64 {
        if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
            f64::INFINITY
        } else {
            field[i as usize * n + j as usize].unwrap_or(f64::INFINITY)
        }
    };
    let mut minima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let Some(x) = field[i * n + j] else { continue };
            let mut lowest = true;
            for (di, dj) in [(-1i64, -1i64), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                if at(i as i64 + di, j as i64 + dj) < x {
                    lowest = false;
                    break;
                }
            }
            if lowest {
                minima.push((x, i, j));
            }
        }
    }
    minima.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut kept: Vec<(f64, usize, usize)> = Vec::new();
    for m in minima {
        if kept.len() >= keep {
            break;
        }
        // A flat run of equal nodes is one minimum, not several.
        if kept
            .iter()
            .all(|k| k.1.abs_diff(m.1).max(k.2.abs_diff(m.2)) >= 3)
        {
            kept.push(m);
        }
    }
    kept.into_iter()
        .map(|(x, i, j)| Seed {
            x,
            l1: coord(i, center.0),
            l2: coord(j, center.1),
            edge: i < 2 || j < 2 || i >= n - 2 || j >= n - 2,
        })
        .collect()
}

/// Nested brute-force minimization of the entanglement of formation over
/// scalings and TMSVS parameter. Separable states short-circuit to zero via
/// the Simon test. Grid nodes are evaluated in parallel with deterministic
/// reductions, so results are reproducible regardless of thread scheduling.
pub fn brute_force_eof(sf: &StandardFormParams, config: &OracleConfig) -> OracleResult {
    if sf.simon_discriminant() >= 0.0 {
        return OracleResult {
            ef_nats: 0.0,
            u1_star: 1.0,
            u2_star: 1.0,
            x_star: 0.5,
            estimated_resolution: 0.0,
            final_cell_log: 0.0,
        };
    }
    let n = config.grid_points_per_axis.max(2);
    let full_half_width = config.log_range.ln();
    const BEAM: usize = 4;

    // Beam of surviving candidates across the shrink-and-rescan rounds.
    let mut beam = window_minima(sf, config, (0.0, 0.0), full_half_width, BEAM);
    let mut cell = 2.0 * full_half_width / (n - 1) as f64;
    for round in 1..=config.refine_iterations {
        let half = full_half_width * 0.1f64.powi(round as i32);
        cell = 2.0 * half / (n - 1) as f64;
        // Pan before shrinking: when a window's winner sits on its border,
        // the true minimum lies beyond it, and shrinking would strand the
        // zoom partway down a long valley. Rescanning at the same scale
        // around the winner chases the border until the winner is interior.
        for _pan in 0..8 {
            let mut pool: Vec<Seed> = Vec::new();
            for s in &beam {
                pool.extend(window_minima(sf, config, (s.l1, s.l2), half, 3));
            }
            pool.sort_by(|a, b| (a.x, a.l1, a.l2).partial_cmp(&(b.x, b.l1, b.l2)).unwrap());
            let mut next: Vec<Seed> = Vec::new();
            for m in pool {
                if next.len() >= BEAM {
                    break;
                }
                // Windows of different beam members overlap; candidates
                // closer than a couple of cells are the same valley twice.
                if next
                    .iter()
                    .all(|k| (k.l1 - m.l1).abs().max((k.l2 - m.l2).abs()) > 2.0 * cell)
                {
                    next.push(m);
                }
            }
            let settled = next.first().map_or(true, |s| !s.edge);
            if !next.is_empty() {
                beam = next;
            }
            if settled {
                break;
            }
        }
    }
    let mut best: Option<(f64, f64, f64)> = beam
        .first()
        .map(|s| (s.x, s.l1.exp(), s.l2.exp()));

    // The minimizer generically sits on a crease of x_min(u1, u2): two
    // eigenvalue constraints bind at the optimum, so the surface is a
    // V-shaped valley whose floor runs in a direction unrelated to the
    // lattice axes. The best grid node lands wherever the lattice happens
    // to graze the floor, which can be many cells from the true minimizer,
    // and no lattice-direction move improves on it (the kink across the
    // floor dwarfs the slope along it). The polish below walks the floor
    // itself with alternating moves: estimate the crease normal, step along
    // the rotated tangent, re-drop onto the floor across the V. The re-drop
    // erases the cross-floor error of each step, which matters because the
    // along-floor slope can be microscopic compared to the kink and no
    // direction estimate is accurate enough to dead-reckon along it.
    // Every beam survivor is polished; everything below is deterministic.
    {
        let polish_tol = config.x_bisection_tol.min(1e-13);
        let eval =
            |p: [f64; 2]| min_x_given_scaling(sf, p[0].exp(), p[1].exp(), polish_tol)
                .unwrap_or(f64::INFINITY);
        let golden = |p: [f64; 2], d: [f64; 2], mut a: f64, mut b: f64, stop: f64| -> f64 {
            let at = |t: f64| eval([p[0] + t * d[0], p[1] + t * d[1]]);
            let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
            let (mut c, mut q) = (b - inv_phi * (b - a), a + inv_phi * (b - a));
            let (mut fc, mut fq) = (at(c), at(q));
            while b - a > stop {
                if fc < fq {
                    b = q;
                    q = c;
                    fq = fc;
                    c = b - inv_phi * (b - a);
                    fc = at(c);
                } else {
                    a = c;
                    c = q;
                    fc = fq;
                    q = a + inv_phi * (b - a);
                    fq = at(q);
                }
            }
            0.5 * (a + b)
        };

        // Crease normal from second differences: the one-sided kink slopes
        // add instead of cancelling, so m_i ~ kink * |n_i| and the estimate
        // stays sharp even though the along-floor slope is orders of
        // magnitude smaller. The soft diagonal pair fixes the relative sign.
        let normal_at = |p: [f64; 2], fp: f64, eps: f64| -> Option<[f64; 2]> {
            let r = eps / 2.0f64.sqrt();
            let m1 = eval([p[0] + eps, p[1]]) + eval([p[0] - eps, p[1]]) - 2.0 * fp;
            let m2 = eval([p[0], p[1] + eps]) + eval([p[0], p[1] - eps]) - 2.0 * fp;
            let ma = eval([p[0] + r, p[1] + r]) + eval([p[0] - r, p[1] - r]) - 2.0 * fp;
            let mb = eval([p[0] + r, p[1] - r]) + eval([p[0] - r, p[1] + r]) - 2.0 * fp;
            if !(m1.is_finite() && m2.is_finite() && ma.is_finite() && mb.is_finite()) {
                return None;
            }
            let s2 = if ma >= mb { 1.0 } else { -1.0 };
            let nr = [m1.max(0.0), s2 * m2.max(0.0)];
            let nn = nr[0].hypot(nr[1]);
            if nn <= 0.0 {
                return None;
            }
            Some([nr[0] / nn, nr[1] / nn])
        };
        // The V across the crease localizes its bottom far below one cell,
        // so a tight golden section recovers the floor after every move.
        let drop = |p: [f64; 2], n: [f64; 2], radius: f64| -> [f64; 2] {
            let t = golden(p, n, -radius, radius, 1e-6 * cell);
            [p[0] + t * n[0], p[1] + t * n[1]]
        };

        for s in &beam {
            let mut p = [s.l1, s.l2];
            let mut fp = eval(p);
            let eps = 0.25 * cell;
            if let Some(n0) = normal_at(p, fp, eps) {
                let q = drop(p, n0, cell);
                let fq = eval(q);
                if fq < fp {
                    p = q;
                    fp = fq;
                }
                // Walk the floor by zigzag: a tangent step of length `len`
                // followed by a re-drop onto the floor. The pair is kept
                // only when it lowers the objective, and the step length
                // adapts (grow on success, halve on failure) until no scale
                // makes progress. The travel budget is generous because the
                // grid can strand its incumbent a long way up a narrow
                // valley whose floor runs between lattice columns.
                let mut len = 4.0 * cell;
                let len_cap = 0.05 * full_half_width;
                for _ in 0..160 {
                    let Some(n) = normal_at(p, fp, eps) else { break };
                    let tg = [-n[1], n[0]];
                    let gd = eval([p[0] + eps * tg[0], p[1] + eps * tg[1]])
                        - eval([p[0] - eps * tg[0], p[1] - eps * tg[1]]);
                    let d = if gd <= 0.0 { tg } else { [-tg[0], -tg[1]] };
                    let trial =
                        drop([p[0] + len * d[0], p[1] + len * d[1]], n, cell + 0.25 * len);
                    let ft = eval(trial);
                    if ft < fp {
                        p = trial;
                        fp = ft;
                        len = (len * 1.6).min(len_cap);
                    } else {
                        len *= 0.5;
                        if len < cell / 16.0 {
                            break;
                        }
                    }
                }
            }
            let polished = (fp, p[0].exp(), p[1].exp());
            if polished.0.is_finite()
                && best.map_or(true, |b| lex_less(&polished, &b))
            {
                best = Some(polished);
            }
        }
    }

    let Some((x_star, u1_star, u2_star)) = best else {
        // No scaling admitted any x: report the trivial upper bound with an
        // infinite resolution estimate rather than inventing a number.
        return OracleResult {
            ef_nats: f64::INFINITY,
            u1_star: 1.0,
            u2_star: 1.0,
            x_star: f64::INFINITY,
            estimated_resolution: f64::INFINITY,
            final_cell_log: cell,
        };
    };

    // Sensitivity estimate: entanglement change across one final-grid cell
    // around the minimizer, plus the bisection tolerance through the
    // entropy slope.
    let ef = entropy(x_star);
    let mut resolution: f64 = 0.0;
    for (s1, s2) in [(cell, 0.0), (-cell, 0.0), (0.0, cell), (0.0, -cell)] {
        let u1 = (u1_star.ln() + s1).exp();
        let u2 = (u2_star.ln() + s2).exp();
        if let Some(x) = min_x_given_scaling(sf, u1, u2, config.x_bisection_tol) {
            resolution = resolution.max((entropy(x) - ef).abs());
        }
    }
    let slope = ((x_star + 0.5) / (x_star - 0.5).max(1e-12)).ln();
    resolution += slope * config.x_bisection_tol;

    OracleResult {
        ef_nats: ef,
        u1_star,
        u2_star,
        x_star,
        estimated_resolution: resolution,
        final_cell_log: cell,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_eof, TmsvsParams};
    use approx::assert_relative_eq;

    fn sf(b1: f64, b2: f64, c: f64, d: f64) -> StandardFormParams {
        StandardFormParams::new(b1, b2, c, d).unwrap()
    }

    fn quick_config() -> OracleConfig {
        OracleConfig {
            grid_points_per_axis: 41,
            log_range: 4.0,
            refine_iterations: 3,
            x_bisection_tol: 1e-10,
        }
    }

    #[test]
    fn tmsvs_is_feasible_exactly_at_itself() {
        let t = TmsvsParams::from_x(1.3).unwrap();
        let x = min_x_given_scaling(&t.standard_form(), 1.0, 1.0, 1e-11).unwrap();
        assert_relative_eq!(x, 1.3, epsilon = 1e-6);
    }

    #[test]
    fn optimal_scaling_of_the_symmetric_state_reproduces_x_m() {
        let state = sf(1.0, 1.0, 0.8, -0.6);
        let w = 2.0f64.sqrt();
        let x = min_x_given_scaling(&state, w, w, 1e-11).unwrap();
        let x_m = 0.33 / (2.0 * 0.08f64.sqrt());
        assert_relative_eq!(x, x_m, epsilon = 1e-8);

        // Any other scaling can only do worse.
        let suboptimal = min_x_given_scaling(&state, 1.0, 1.0, 1e-11).unwrap();
        assert!(suboptimal > x_m + 1e-6);
    }

    #[test]
    fn extreme_scalings_are_infeasible() {
        let state = sf(1.0, 1.0, 0.8, -0.6);
        assert_eq!(min_x_given_scaling(&state, 40.0, 40.0, 1e-11), None);
    }

    #[test]
    fn grid_search_matches_the_closed_form_on_the_benchmark() {
        let state = sf(1.0, 1.0, 0.8, -0.6);
        let oracle = brute_force_eof(&state, &quick_config());
        let solver = solve_eof(&state, 1e-10).unwrap();
        assert!((oracle.ef_nats - solver.ef_nats).abs() <= 1e-4);
        assert!(oracle.ef_nats >= solver.ef_nats - 1e-6);
        assert_relative_eq!(oracle.u1_star, 2.0f64.sqrt(), epsilon = 1e-2);
        assert_relative_eq!(oracle.u2_star, 2.0f64.sqrt(), epsilon = 1e-2);
    }

    #[test]
    fn separable_states_short_circuit() {
        let state = sf(1.0, 1.0, 0.2, -0.1);
        let oracle = brute_force_eof(&state, &quick_config());
        assert_eq!(oracle.ef_nats, 0.0);
        assert_eq!(oracle.x_star, 0.5);
    }
}
