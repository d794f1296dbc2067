//! State input/output, the analysis pipeline, and the command front ends.
//!
//! Input is JSON (`StateInput`): either a 16-entry row-major covariance
//! matrix or standard-form parameters with optional scalings, always with
//! an explicit `"convention": "vacuum-half"`. Output is an
//! `EntanglementReport` (schema 1), emitted as text or as JSON with every
//! float at 17 significant digits so values round-trip losslessly.
//!
//! The pipeline runs validate -> reduce -> classify -> solve -> certify,
//! with an optional brute-force oracle cross-check.

use crate::cm::{CmError, CovarianceMatrix};
use crate::decomposition::{build_tmsvs_cm, certify, CertError};
use crate::generate::{random_entangled, random_standard_form, GenError};
use crate::oracle::{brute_force_eof, OracleConfig};
use crate::solver::{solve_eof, solve_eof_general, SolveError, RESIDUAL_GATE};
use crate::standard_form::{
    build_scaled_cm, classify, reduce_to_standard_form, ScalingFactors, Separability, SfError,
    StandardFormParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

/// Report schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Parse(String),
    #[error("state validation failed: {0}")]
    Physicality(#[from] CmError),
    #[error("standard-form reduction failed: {0}")]
    Reduce(SfError),
    #[error("solver failed: {0}")]
    Solve(#[from] SolveError),
    #[error("certification failed: {0}")]
    Certify(#[from] CertError),
    #[error("generation failed: {0}")]
    Generate(#[from] GenError),
    #[error("io error: {0}")]
    Io(String),
}

impl PipelineError {
    /// Process exit code: 2 parse/convention, 3 unphysical, 4 no feasible
    /// root, 5 certification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) | PipelineError::Io(_) | PipelineError::Generate(_) => 2,
            PipelineError::Physicality(CmError::NonSymmetric(_)) => 2,
            PipelineError::Physicality(_) => 3,
            PipelineError::Reduce(SfError::Convention(_)) => 2,
            PipelineError::Reduce(_) => 3,
            PipelineError::Solve(_) => 4,
            PipelineError::Certify(_) => 5,
        }
    }
}

/// One state, as read from or written to JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateInput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Must be "vacuum-half" (vacuum variance 1/2); other conventions are
    /// rejected, not converted.
    pub convention: String,
    /// Row-major 4x4 covariance matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_form: Option<StandardFormInput>,
    /// Optional scalings applied to `standard_form`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingInput>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StandardFormInput {
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScalingInput {
    pub u1: f64,
    pub u2: f64,
}

impl StateInput {
    pub fn from_standard_form(label: Option<String>, sf: &StandardFormParams) -> Self {
        StateInput {
            label,
            convention: "vacuum-half".to_string(),
            covariance: None,
            standard_form: Some(StandardFormInput {
                b1: sf.b1(),
                b2: sf.b2(),
                c: sf.c(),
                d: sf.d(),
            }),
            scaling: None,
        }
    }

    /// Builds the covariance matrix, enforcing the input invariants.
    pub fn to_covariance(&self) -> Result<CovarianceMatrix, PipelineError> {
        if self.convention != "vacuum-half" {
            return Err(PipelineError::Parse(format!(
                "unsupported convention {:?} (expected \"vacuum-half\")",
                self.convention
            )));
        }
        match (&self.covariance, &self.standard_form) {
            (Some(_), Some(_)) | (None, None) => Err(PipelineError::Parse(
                "exactly one of \"covariance\" and \"standard_form\" is required".into(),
            )),
            (Some(entries), None) => {
                if self.scaling.is_some() {
                    return Err(PipelineError::Parse(
                        "\"scaling\" is only valid with \"standard_form\"".into(),
                    ));
                }
                let entries: &[f64; 16] = entries.as_slice().try_into().map_err(|_| {
                    PipelineError::Parse(format!(
                        "\"covariance\" must have 16 entries, got {}",
                        entries.len()
                    ))
                })?;
                Ok(CovarianceMatrix::from_row_major(entries))
            }
            (None, Some(p)) => {
                let sf = StandardFormParams::new(p.b1, p.b2, p.c, p.d)
                    .map_err(|e| PipelineError::Parse(e.to_string()))?;
                let u = match self.scaling {
                    Some(s) => ScalingFactors::new(s.u1, s.u2)
                        .map_err(|e| PipelineError::Parse(e.to_string()))?,
                    None => ScalingFactors::identity(),
                };
                Ok(build_scaled_cm(&sf, &u))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct PhysicalitySection {
    pub nu_minus: f64,
    pub nu_plus: f64,
    #[serde(rename = "D")]
    pub discriminant: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeparabilitySection {
    pub verdict: String,
    #[serde(rename = "DTilde")]
    pub d_tilde: f64,
    #[serde(rename = "kappaTilde_minus")]
    pub kappa_tilde_minus: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ResidualSection {
    pub purity: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EofSection {
    pub ef_nats: f64,
    pub ef_ebits: f64,
    pub x_m: f64,
    pub y_m: f64,
    pub p_m: f64,
    pub w1: f64,
    pub w2: f64,
    pub branch: String,
    pub residuals: ResidualSection,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct CertificateSection {
    pub classicality_boundary_gap: f64,
    pub det_gap: f64,
    pub simon_of_partner: f64,
    pub cf_law_max_residual: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct OracleSection {
    pub ef_nats: f64,
    pub u1_star: f64,
    pub u2_star: f64,
    pub x_star: f64,
    pub estimated_resolution: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct VersionsSection {
    pub schema: u32,
}

/// Full analysis result for one state. In batch mode a failed line carries
/// only `label`, `error`, and `versions`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EntanglementReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub physicality: Option<PhysicalitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_form: Option<StandardFormInput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separability: Option<SeparabilitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eof: Option<EofSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub versions: VersionsSection,
}

impl EntanglementReport {
    pub fn from_error(label: Option<String>, err: &PipelineError) -> Self {
        EntanglementReport {
            label,
            physicality: None,
            standard_form: None,
            separability: None,
            eof: None,
            certificate: None,
            oracle: None,
            error: Some(err.to_string()),
            versions: VersionsSection {
                schema: SCHEMA_VERSION,
            },
        }
    }
}

/// JSON formatter emitting every float with 17 significant digits
/// (scientific notation), enough for lossless f64 round-trips and
/// byte-reproducible output.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

/// Serializes any value with 17-significant-digit floats.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

/// Pipeline configuration shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub tol: f64,
    pub force_general: bool,
    pub with_oracle: bool,
    pub oracle: OracleConfig,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            tol: crate::cm::DEFAULT_TOL,
            force_general: false,
            with_oracle: false,
            oracle: OracleConfig::default(),
        }
    }
}

/// Full pipeline for one state: validate, reduce, classify, solve,
/// certify, optional oracle.
pub fn analyze_state(
    input: &StateInput,
    opts: &PipelineOptions,
) -> Result<EntanglementReport, PipelineError> {
    let v = input.to_covariance()?;
    let verdict_phys = v.validate_physical(opts.tol)?;
    let sf = reduce_to_standard_form(&v, opts.tol).map_err(PipelineError::Reduce)?;
    let sep = classify(&sf, opts.tol)?;

    let dec = if opts.force_general {
        solve_eof_general(&sf, opts.tol)?
    } else {
        solve_eof(&sf, opts.tol)?
    };

    // The certificate applies when the optimality system actually closed:
    // always for entangled states, and for boundary states solved by the
    // closed form. Strictly separable states take the trivial
    // decomposition, whose partner is not constrained to the thresholds.
    let certificate = if sep.verdict != Separability::Separable
        && dec.residuals.max_abs() <= RESIDUAL_GATE
    {
        let v_scaled = build_scaled_cm(&sf, &dec.scalings);
        let v0 = build_tmsvs_cm(&dec.tmsvs);
        let cert = certify(&v_scaled, &v0, opts.tol.max(1e-8))?;
        Some(CertificateSection {
            classicality_boundary_gap: cert.classicality_boundary_gap,
            det_gap: cert.det_gap,
            simon_of_partner: cert.simon_of_partner,
            cf_law_max_residual: cert.cf_law_max_residual,
        })
    } else {
        None
    };

    let oracle = if opts.with_oracle {
        let r = brute_force_eof(&sf, &opts.oracle);
        Some(OracleSection {
            ef_nats: r.ef_nats,
            u1_star: r.u1_star,
            u2_star: r.u2_star,
            x_star: r.x_star,
            estimated_resolution: r.estimated_resolution,
        })
    } else {
        None
    };

    Ok(EntanglementReport {
        label: input.label.clone(),
        physicality: Some(PhysicalitySection {
            nu_minus: verdict_phys.nu_minus,
            nu_plus: verdict_phys.nu_plus,
            discriminant: verdict_phys.d,
        }),
        standard_form: Some(StandardFormInput {
            b1: sf.b1(),
            b2: sf.b2(),
            c: sf.c(),
            d: sf.d(),
        }),
        separability: Some(SeparabilitySection {
            verdict: sep.verdict.as_str().to_string(),
            d_tilde: sep.d_tilde,
            kappa_tilde_minus: sep.kappa_tilde_minus,
        }),
        eof: Some(EofSection {
            ef_nats: dec.ef_nats,
            ef_ebits: dec.ef_ebits,
            x_m: dec.tmsvs.x(),
            y_m: dec.tmsvs.y(),
            p_m: dec.p_m,
            w1: dec.w1(),
            w2: dec.w2(),
            branch: dec.branch.as_str().to_string(),
            residuals: ResidualSection {
                purity: dec.residuals.purity,
                c1: dec.residuals.c1,
                c2: dec.residuals.c2,
                c3: dec.residuals.c3,
            },
        }),
        certificate,
        oracle,
        error: None,
        versions: VersionsSection {
            schema: SCHEMA_VERSION,
        },
    })
}

/// Renders the human-readable report.
pub fn render_text(report: &EntanglementReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    if let Some(label) = &report.label {
        push(&mut out, format!("state: {label}"));
    }
    if let Some(e) = &report.error {
        push(&mut out, format!("error: {e}"));
        return out;
    }
    if let Some(p) = &report.physicality {
        push(
            &mut out,
            format!(
                "physicality: nu_minus={:.9} nu_plus={:.9} D={:.3e}",
                p.nu_minus, p.nu_plus, p.discriminant
            ),
        );
    }
    if let Some(s) = &report.standard_form {
        push(
            &mut out,
            format!(
                "standard form: b1={:.9} b2={:.9} c={:.9} d={:.9}",
                s.b1, s.b2, s.c, s.d
            ),
        );
    }
    if let Some(s) = &report.separability {
        push(
            &mut out,
            format!(
                "separability: {} (DTilde={:.3e}, kappaTilde_minus={:.9})",
                s.verdict, s.d_tilde, s.kappa_tilde_minus
            ),
        );
    }
    if let Some(e) = &report.eof {
        push(
            &mut out,
            format!(
                "entanglement of formation: {:.12} nats = {:.12} ebits",
                e.ef_nats, e.ef_ebits
            ),
        );
        push(
            &mut out,
            format!(
                "decomposition: branch={} x_m={:.12} y_m={:.12} w1={:.12} w2={:.12} p_m={:.12}",
                e.branch, e.x_m, e.y_m, e.w1, e.w2, e.p_m
            ),
        );
        push(
            &mut out,
            format!(
                "residuals: purity={:.3e} c1={:.3e} c2={:.3e} c3={:.3e}",
                e.residuals.purity, e.residuals.c1, e.residuals.c2, e.residuals.c3
            ),
        );
    }
    if let Some(c) = &report.certificate {
        push(
            &mut out,
            format!(
                "certificate: classicality_gap={:.3e} det_gap={:.3e} simon_of_partner={:.3e} cf_law={:.3e}",
                c.classicality_boundary_gap, c.det_gap, c.simon_of_partner, c.cf_law_max_residual
            ),
        );
    }
    if let Some(o) = &report.oracle {
        let delta = report
            .eof
            .as_ref()
            .map(|e| (e.ef_nats - o.ef_nats).abs())
            .unwrap_or(f64::NAN);
        push(
            &mut out,
            format!(
                "oracle: ef_nats={:.12} |delta|={:.3e} resolution={:.3e} u*=({:.6}, {:.6})",
                o.ef_nats, delta, o.estimated_resolution, o.u1_star, o.u2_star
            ),
        );
    }
    out
}

fn read_to_string(path: &str) -> Result<String, PipelineError> {
    std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Io(format!("cannot read {path}: {e}")))
}

fn parse_state(text: &str) -> Result<StateInput, PipelineError> {
    serde_json::from_str(text).map_err(|e| PipelineError::Parse(e.to_string()))
}

/// Analyze a single state file. Returns the rendered report.
pub fn run_analyze(
    path: &str,
    opts: &PipelineOptions,
    json: bool,
) -> Result<String, PipelineError> {
    let input = parse_state(&read_to_string(path)?)?;
    let report = analyze_state(&input, opts)?;
    Ok(if json {
        to_json_17(&report)
    } else {
        render_text(&report)
    })
}

/// Analyze a JSON-lines file; one report line per input line, in input
/// order. Per-line failures become error reports on that line; only an
/// unreadable file is a process-level error.
pub fn run_batch(
    path: &str,
    opts: &PipelineOptions,
    parallel: bool,
) -> Result<String, PipelineError> {
    let text = read_to_string(path)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let analyze_line = |line: &&str| -> String {
        let report = match parse_state(line) {
            Err(e) => EntanglementReport::from_error(None, &e),
            Ok(input) => match analyze_state(&input, opts) {
                Ok(report) => report,
                Err(e) => EntanglementReport::from_error(input.label.clone(), &e),
            },
        };
        to_json_17(&report)
    };
    let rendered: Vec<String> = if parallel {
        lines.par_iter().map(analyze_line).collect()
    } else {
        lines.iter().map(analyze_line).collect()
    };
    Ok(rendered.join("\n") + if rendered.is_empty() { "" } else { "\n" })
}

/// Generate `count` random physical states as JSON-lines of `StateInput`.
/// Fixed seed gives byte-identical output.
pub fn run_random(
    count: usize,
    seed: u64,
    entangled_only: bool,
) -> Result<String, PipelineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..count {
        let sf = if entangled_only {
            random_entangled(&mut rng)?
        } else {
            random_standard_form(&mut rng)?
        };
        let label = format!("random-{seed}-{i:04}");
        let input = StateInput::from_standard_form(Some(label), &sf);
        out.push_str(&to_json_17(&input));
        out.push('\n');
    }
    Ok(out)
}

/// Solver-versus-oracle comparison over a JSON-lines file. Returns the
/// rendered table and the maximal |EF_solver - EF_oracle|; callers exit 6
/// when the threshold is exceeded.
pub fn run_oracle_check(
    path: &str,
    opts: &PipelineOptions,
    max_delta: f64,
) -> Result<(String, f64, bool), PipelineError> {
    let text = read_to_string(path)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let mut out = String::new();
    let mut worst = 0.0f64;
    let results: Vec<(String, f64, f64)> = lines
        .par_iter()
        .map(|line| -> Result<(String, f64, f64), PipelineError> {
            let input = parse_state(line)?;
            let v = input.to_covariance()?;
            v.validate_physical(opts.tol)?;
            let sf = reduce_to_standard_form(&v, opts.tol).map_err(PipelineError::Reduce)?;
            let dec = solve_eof(&sf, opts.tol)?;
            let oracle = brute_force_eof(&sf, &opts.oracle);
            Ok((
                input.label.unwrap_or_else(|| "-".into()),
                dec.ef_nats,
                oracle.ef_nats,
            ))
        })
        .collect::<Result<_, _>>()?;
    out.push_str("label                     solver_ef_nats      oracle_ef_nats      |delta|\n");
    for (label, solver_ef, oracle_ef) in &results {
        let delta = (solver_ef - oracle_ef).abs();
        worst = worst.max(delta);
        out.push_str(&format!(
            "{label:<25} {solver_ef:<19.12} {oracle_ef:<19.12} {delta:.3e}\n"
        ));
    }
    out.push_str(&format!(
        "max |delta| = {worst:.6e} (threshold {max_delta:.6e})\n"
    ));
    Ok((out, worst, worst <= max_delta))
}
