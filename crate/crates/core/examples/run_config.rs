//! Runs any experiment config from data/configs through the library without
//! the command-line front end and prints the staged output files.
//!
//! cargo run --release --example run_config data/configs/murb-bitflip-0.9.toml

use std::path::PathBuf;

use urbench::cli::{murb_outputs, ngurb_outputs, theory_report, ExperimentConfig};

fn main() -> urbench::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/configs/murb-depolarizing-0.9.toml"));
    let outputs = match ExperimentConfig::load(&path)? {
        ExperimentConfig::Murb(exp) => murb_outputs(&exp)?,
        ExperimentConfig::Ngurb(exp) => ngurb_outputs(&exp)?.0,
        ExperimentConfig::Theory(exp) => {
            println!("{}", serde_json::to_string_pretty(&theory_report(&exp)?)?);
            return Ok(());
        }
    };
    for rel in outputs.paths() {
        if rel.file_name().is_some_and(|f| f == "fit.json" || f == "crosstalk_report.json") {
            println!("== {}\n{}", rel.display(), outputs.get(rel).unwrap_or_default());
        }
    }
    Ok(())
}
