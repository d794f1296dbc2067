//! Full analysis of a single state through the high-level pipeline: parse an
//! input document, validate physicality, reduce, classify, solve for the
//! entanglement of formation, and certify the optimal decomposition. Prints
//! the human-readable report first and the JSON document second, exactly as
//! `tmgs-eof analyze` and `tmgs-eof analyze --json` would.

use tmgs_eof::report::{analyze_state, render_text, to_json_17, PipelineOptions, StateInput};

fn main() {
    // A symmetric entangled state given by its standard-form parameters.
    // The same document, one per line, is what `batch` consumes.
    let document = r#"{
        "label": "symmetric-benchmark",
        "convention": "vacuum-half",
        "standard_form": { "b1": 1.0, "b2": 1.0, "c": 0.8, "d": -0.6 }
    }"#;

    let input: StateInput = serde_json::from_str(document).expect("well-formed input");
    let report = analyze_state(&input, &PipelineOptions::default()).expect("analyzable state");

    println!("--- text report ---");
    print!("{}", render_text(&report));

    println!("\n--- JSON report (17 significant digits) ---");
    println!("{}", to_json_17(&report));

    // The same pipeline accepts a raw 4x4 covariance matrix, row-major in
    // (q1, p1, q2, p2) ordering with vacuum variance 1/2 on each quadrature
    // after the conventional factor of 2 used here.
    let matrix_document = r#"{
        "label": "same-state-as-matrix",
        "convention": "vacuum-half",
        "covariance": [
            1.0,  0.0, 0.8,  0.0,
            0.0,  1.0, 0.0, -0.6,
            0.8,  0.0, 1.0,  0.0,
            0.0, -0.6, 0.0,  1.0
        ]
    }"#;
    let matrix_input: StateInput = serde_json::from_str(matrix_document).unwrap();
    let matrix_report = analyze_state(&matrix_input, &PipelineOptions::default()).unwrap();

    let a = report.eof.as_ref().unwrap().ef_nats;
    let b = matrix_report.eof.as_ref().unwrap().ef_nats;
    println!("\nmatrix input agrees with standard-form input: |delta| = {:e}", (a - b).abs());
}
