//! Native-gate URB against a shipped backend noise file, followed by the
//! cross-talk check that compares cx with the best single-qubit gate.
//!
//! cargo run --release --example ngurb_crosstalk [backend.toml]

use std::collections::BTreeMap;
use std::path::PathBuf;

use urbench::ng_urb::{
    crosstalk_report, load_backend_spec, run_ngurb, GateName, NativeGate, DEFAULT_CROSSTALK_THRESHOLD,
};
use urbench::urb::UrbConfig;

fn main() -> urbench::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/backends/melbourne-like.toml"));
    let spec = load_backend_spec(&path)?;
    let depths: Vec<usize> = (1..=10).map(|k| 5 * k).collect();

    let mut fits = BTreeMap::new();
    for name in GateName::ALL {
        let cfg = UrbConfig::new(name.num_qubits(), depths.clone(), 15, 5, 1024, 2021);
        let out = run_ngurb(&NativeGate::default_for(name), &spec, &cfg)?;
        println!("{:<3} u = {:.6}  (+- {:.1e})", name, out.fit.u, out.fit.u_variance.sqrt());
        fits.insert(name, out.fit);
    }

    let report = crosstalk_report(&fits, DEFAULT_CROSSTALK_THRESHOLD)?;
    println!(
        "{}: deficit {:.4} vs threshold {} -> {}",
        spec.backend,
        report.deficit,
        report.threshold,
        if report.significant { "cross-talk suspected" } else { "no significant cross-talk" }
    );
    Ok(())
}
