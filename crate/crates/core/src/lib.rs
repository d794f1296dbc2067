//! Entanglement of formation for two-mode Gaussian states.
//!
//! A two-mode Gaussian state is fully described by its 4x4 covariance
//! matrix (vacuum variance 1/2, quadrature ordering `q1, p1, q2, p2`).
//! This crate computes the state's exact entanglement of formation from
//! that matrix alone:
//!
//! 1. [`cm`] validates physicality and computes symplectic invariants.
//! 2. [`standard_form`] reduces the matrix to its local invariants
//!    `(b1, b2, c, d)` and classifies separability.
//! 3. [`solver`] finds the optimal pure-state decomposition: the unique
//!    two-mode squeezed vacuum (parameters `x`, `y`) and per-mode squeeze
//!    factors `(w1, w2)` minimizing the entropy function of `x`, via
//!    closed forms on four special manifolds and a quartic-equation path in
//!    general (root finding in [`polyroot`]).
//! 4. [`decomposition`] rebuilds the decomposition explicitly and certifies
//!    its structure: the classical partner touches the classicality
//!    threshold and the separability boundary, and the
//!    characteristic-function multiplication law closes.
//! 5. [`oracle`] cross-checks every answer with a brute-force grid search
//!    that shares nothing with the algebraic path.
//! 6. [`generate`] and [`report`] provide reproducible random states and
//!    the JSON pipeline used by the `tmgs-eof` binary.
//!
//! # Quick start
//!
//! ```
//! use tmgs_eof::solver::solve_eof;
//! use tmgs_eof::standard_form::StandardFormParams;
//!
//! // An entangled symmetric state in standard form.
//! let sf = StandardFormParams::new(1.0, 1.0, 0.8, -0.6).unwrap();
//! let dec = solve_eof(&sf, 1e-10).unwrap();
//! assert!((dec.ef_ebits - 0.42396).abs() < 1e-4);
//! ```
//!
//! # Examples
//!
//! Each major capability has a runnable example
//! (`cargo run --release -p tmgs-eof --example <name>`):
//!
//! - `analyze_state` — full pipeline on one state, text and JSON reports.
//! - `standard_form_tour` — invariants, physicality, and separability
//!   classification for a range of states.
//! - `special_cases` — the four closed-form families and their agreement
//!   with the general quartic path.
//! - `decomposition_certificate` — building `V0` and the classical partner
//!   and verifying the structural properties.
//! - `oracle_crosscheck` — brute-force grid search versus the solver.
//! - `batch_random` — reproducible random-state generation and batch
//!   analysis.
//!
//! The `tmgs-eof` binary exposes the same pipeline as `analyze`, `batch`,
//! `random`, and `oracle-check` subcommands.

#![forbid(unsafe_code)]

pub mod cm;
pub mod decomposition;
pub mod generate;
pub mod oracle;
pub mod polyroot;
pub mod report;
pub mod solver;
pub mod standard_form;

pub use cm::{CmError, CovarianceMatrix, PhysicalityVerdict, DEFAULT_TOL};
pub use decomposition::{certify, DecompositionCertificate};
pub use oracle::{brute_force_eof, OracleConfig, OracleResult};
pub use report::{analyze_state, EntanglementReport, PipelineOptions, StateInput};
pub use solver::{solve_eof, OptimalDecomposition, SolveError, TmsvsParams};
pub use standard_form::{
    classify_separability, reduce_to_standard_form, ScalingFactors, Separability,
    StandardFormParams,
};
