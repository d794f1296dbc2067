//! Library-level batch processing: generate a reproducible population of
//! random physical states, push every one through the analysis pipeline, and
//! summarize the verdicts and solver branches. This is what the `random` and
//! `batch` subcommands do, minus the JSONL plumbing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use tmgs_eof::generate::random_standard_form;
use tmgs_eof::report::{analyze_state, to_json_17, PipelineOptions, StateInput};
use tmgs_eof::solver::solve_eof;
use tmgs_eof::standard_form::{classify, Separability};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let states: Vec<_> = (0..400)
        .map(|_| random_standard_form(&mut rng).expect("generator converges"))
        .collect();

    let mut verdicts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut branches: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut ef_min = f64::INFINITY;
    let mut ef_max: f64 = 0.0;

    for sf in &states {
        let verdict = classify(sf, 1e-10).unwrap();
        *verdicts.entry(verdict.verdict.as_str()).or_default() += 1;
        let dec = solve_eof(sf, 1e-10).unwrap();
        *branches.entry(dec.branch.as_str()).or_default() += 1;
        if verdict.verdict == Separability::Entangled {
            ef_min = ef_min.min(dec.ef_nats);
            ef_max = ef_max.max(dec.ef_nats);
        }
    }

    println!("400 random physical states, seed 2024");
    println!("\nverdicts:");
    for (verdict, count) in &verdicts {
        println!("  {verdict:<12} {count}");
    }
    println!("\nsolver branches:");
    for (branch, count) in &branches {
        println!("  {branch:<16} {count}");
    }
    println!("\nentangled EF range: [{ef_min:.6e}, {ef_max:.6e}] nats");

    // The same states as the CLI would exchange them: one input document per
    // line in, one report per line out.
    println!("\nfirst three states through the full pipeline:");
    for (i, sf) in states.iter().take(3).enumerate() {
        let input = StateInput::from_standard_form(Some(format!("demo-{i:04}")), sf);
        println!("  in:  {}", to_json_17(&input));
        let report = analyze_state(&input, &PipelineOptions::default()).unwrap();
        let ef = report.eof.as_ref().map(|e| e.ef_nats).unwrap_or(0.0);
        let verdict = report.separability.as_ref().unwrap().verdict.clone();
        let label = report.label.as_deref().unwrap_or("?");
        println!("  out: label={label} verdict={verdict} EF={ef:.12} nats");
    }
}
