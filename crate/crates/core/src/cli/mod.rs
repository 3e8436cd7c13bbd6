//! Command-line front end: `murb`, `ngurb` and `theory` subcommands.
//!
//! Every run computes all of its results before touching the output
//! directory, and each file is written to a temporary sibling and renamed into
//! place, so a failed run leaves no partial outputs.

pub mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{
    ChannelSpec, ExperimentConfig, FixedGate, MurbExperiment, NgurbExperiment, Sampling, TheoryExperiment,
};

use crate::channels::{avg_gate_fidelity, diamond_bounds, fidelity_unitarity_bound_holds, unitarity, DiamondBounds};
use crate::clifford::CliffordGroup;
use crate::error::{Error, Result};
use crate::ng_urb::{
    crosstalk_report, load_backend_spec, run_ngurb, BackendNoiseSpec, CrosstalkReport, GateName, NativeGate,
};
use crate::simulator::stream_id;
use crate::urb::{run_murb, FitMethod, UrbConfig, UrbOutcome};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "urbench", version, about = "Unitarity randomized benchmarking for one- and two-qubit noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m-URB over the Clifford group with an inline noise channel.
    Murb(RunArgs),
    /// Native-gate URB against a backend noise file, with a cross-talk report.
    Ngurb(NgurbArgs),
    /// Exact unitarity, fidelity and diamond-distance bounds of a channel.
    Theory(TheoryArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub shots: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_name = "DIR", default_value = "urbench-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub repetitions: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NgurbArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_name = "PHI,LAMBDA", value_delimiter = ',', num_args = 2)]
    pub u2_angles: Option<Vec<f64>>,
    #[arg(long, value_name = "THETA,PHI,LAMBDA", value_delimiter = ',', num_args = 3)]
    pub u3_angles: Option<Vec<f64>>,
    #[arg(long)]
    pub crosstalk_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Benchmarking decay parameter for the diamond-distance bounds.
    #[arg(long)]
    pub p_rb: Option<f64>,
    /// Also write `theory.json` here.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

/// Fitted results of one experiment, as written to `fit.json`.
#[derive(Clone, Debug, Serialize)]
pub struct ResultSummary {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: &'static str,
    pub seed: u64,
    pub u: f64,
    #[serde(rename = "B")]
    pub b: f64,
    /// Variance of `u` from the fit covariance of the first repetition.
    pub u_variance: f64,
    /// Sample variance of `u` over repetitions; absent for a single run.
    pub across_repetition_variance: Option<f64>,
    pub repetition_u: Vec<f64>,
    pub low_signal: bool,
    pub fit_method: FitMethod,
    pub fit_weights: &'static str,
    pub points_used: usize,
    pub residual_sum_sq: f64,
    pub config: serde_json::Value,
}

/// Output files staged in memory, keyed by path relative to the output
/// directory.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<PathBuf, String>,
}

impl Outputs {
    pub fn add(&mut self, rel: impl Into<PathBuf>, contents: String) {
        self.files.insert(rel.into(), contents);
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.keys().map(|p| p.as_path())
    }

    pub fn get(&self, rel: &Path) -> Option<&str> {
        self.files.get(rel).map(|s| s.as_str())
    }

    pub fn commit(&self, dir: &Path) -> Result<()> {
        for (rel, contents) in &self.files {
            let path = dir.join(rel);
            let parent = path.parent().unwrap_or(dir);
            std::fs::create_dir_all(parent)?;
            let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        }
        Ok(())
    }
}

fn repetition_seed(seed: u64, repetition: usize) -> u64 {
    if repetition == 0 {
        seed
    } else {
        stream_id(&[seed, repetition as u64])
    }
}

fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    Some(xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

pub fn records_csv(outcome: &UrbOutcome) -> String {
    let mut s = String::from("depth,iteration,sample,shifted_purity\n");
    for r in &outcome.records {
        writeln!(s, "{},{},{},{}", r.depth, r.iteration, r.sample, r.value).expect("write to string");
    }
    s
}

pub fn plot_csv(outcome: &UrbOutcome) -> String {
    let mut s = String::from("depth,mean,fitted\n");
    for a in &outcome.averages {
        writeln!(s, "{},{},{}", a.depth, a.mean, outcome.fit.predict(a.depth)).expect("write to string");
    }
    s
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Runs `repetitions` experiments with derived seeds and summarises them.
fn repeat<F>(cfg: &UrbConfig, repetitions: usize, run: F) -> Result<(UrbOutcome, Vec<f64>)>
where
    F: Fn(&UrbConfig) -> Result<UrbOutcome>,
{
    if repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let first = run(cfg)?;
    let mut us = vec![first.fit.u];
    for r in 1..repetitions {
        let cfg_r = UrbConfig { seed: repetition_seed(cfg.seed, r), ..cfg.clone() };
        us.push(run(&cfg_r)?.fit.u);
    }
    Ok((first, us))
}

fn summary(
    mode: &'static str,
    seed: u64,
    outcome: &UrbOutcome,
    us: Vec<f64>,
    config: serde_json::Value,
) -> ResultSummary {
    let f = &outcome.fit;
    ResultSummary {
        tool: "urbench",
        version: VERSION,
        mode,
        seed,
        u: f.u,
        b: f.b,
        u_variance: f.u_variance,
        across_repetition_variance: sample_variance(&us),
        repetition_u: us,
        low_signal: f.low_signal,
        fit_method: f.method,
        fit_weights: "unweighted",
        points_used: f.points_used,
        residual_sum_sq: f.residual_sum_sq,
        config,
    }
}

fn experiment_outputs(
    outputs: &mut Outputs,
    prefix: &Path,
    outcome: &UrbOutcome,
    summary: &ResultSummary,
) -> Result<()> {
    outputs.add(prefix.join("records.csv"), records_csv(outcome));
    outputs.add(prefix.join("plot.csv"), plot_csv(outcome));
    outputs.add(prefix.join("fit.json"), to_json(summary)?);
    Ok(())
}

fn apply_overrides(sampling: &mut Sampling, repetitions: &mut usize, args: &RunArgs) {
    if let Some(seed) = args.seed {
        sampling.seed = seed;
    }
    if let Some(shots) = args.shots {
        sampling.shots = shots;
    }
    if let Some(r) = args.repetitions {
        *repetitions = r;
    }
}

fn load_mode(path: &Path, mode: &str) -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig::load(path)?;
    if cfg.mode() != mode {
        return Err(Error::Config(format!("{} is a {} config, not {mode}", path.display(), cfg.mode())));
    }
    Ok(cfg)
}

/// Runs the m-URB experiment described by `exp` and stages its outputs.
pub fn murb_outputs(exp: &MurbExperiment) -> Result<Outputs> {
    let cfg = exp.sampling.urb_config(exp.n);
    cfg.validate()?;
    if exp.noise.num_qubits() != exp.n {
        return Err(Error::Config(format!("noise acts on {} qubit(s), n = {}", exp.noise.num_qubits(), exp.n)));
    }
    let noise = exp.noise.build()?;
    let group = CliffordGroup::shared(exp.n)?;
    let (outcome, us) = repeat(&cfg, exp.repetitions, |c| run_murb(group, &noise, c))?;
    let summary = summary("murb", cfg.seed, &outcome, us, serde_json::to_value(exp)?);
    let mut outputs = Outputs::default();
    experiment_outputs(&mut outputs, Path::new(""), &outcome, &summary)?;
    Ok(outputs)
}

#[derive(Serialize)]
struct GateEcho<'a> {
    gate: &'a NativeGate,
    backend: &'a BackendNoiseSpec,
    repetitions: usize,
    sampling: &'a Sampling,
}

#[derive(Serialize)]
struct CrosstalkOutput<'a> {
    tool: &'static str,
    version: &'static str,
    backend: &'a str,
    seed: u64,
    #[serde(flatten)]
    report: &'a CrosstalkReport,
}

/// Runs every requested native gate and stages per-gate outputs plus the
/// cross-talk report (when `cx` and a single-qubit gate are both present).
pub fn ngurb_outputs(exp: &NgurbExperiment) -> Result<(Outputs, Option<CrosstalkReport>)> {
    if exp.gates.is_empty() {
        return Err(Error::Config("no gates requested".into()));
    }
    let spec = load_backend_spec(&exp.backend)?;
    let mut outputs = Outputs::default();
    let mut fits = BTreeMap::new();
    for &name in &exp.gates {
        let gate = exp.native_gate(name)?;
        let cfg = exp.sampling.urb_config(name.num_qubits());
        cfg.validate()?;
        let (outcome, us) = repeat(&cfg, exp.repetitions, |c| run_ngurb(&gate, &spec, c))?;
        let echo = GateEcho { gate: &gate, backend: &spec, repetitions: exp.repetitions, sampling: &exp.sampling };
        let summary = summary("ngurb", cfg.seed, &outcome, us, serde_json::to_value(&echo)?);
        experiment_outputs(&mut outputs, Path::new(name.as_str()), &outcome, &summary)?;
        fits.insert(name, outcome.fit);
    }
    let has_single = fits.keys().any(|g| g.num_qubits() == 1);
    let report = if fits.contains_key(&GateName::Cx) && has_single {
        let report = crosstalk_report(&fits, exp.crosstalk_threshold)?;
        let out = CrosstalkOutput {
            tool: "urbench",
            version: VERSION,
            backend: &spec.backend,
            seed: exp.sampling.seed,
            report: &report,
        };
        outputs.add("crosstalk_report.json", to_json(&out)?);
        Some(report)
    } else {
        None
    };
    Ok((outputs, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoryReport {
    pub channel: ChannelSpec,
    pub u: f64,
    pub closed_form: Option<f64>,
    #[serde(rename = "F_avg")]
    pub f_avg: f64,
    pub bound_slack: f64,
    pub bound_holds: bool,
    pub p_rb: Option<f64>,
    pub diamond: Option<DiamondBounds>,
}

pub fn theory_report(exp: &TheoryExperiment) -> Result<TheoryReport> {
    let ch = exp.channel.build()?;
    let bound = fidelity_unitarity_bound_holds(&ch)?;
    let u = unitarity(&ch);
    let diamond = exp.p_rb.map(|p| diamond_bounds(p, u, ch.dim())).transpose()?;
    Ok(TheoryReport {
        channel: exp.channel.clone(),
        u,
        closed_form: exp.channel.closed_form_unitarity(),
        f_avg: avg_gate_fidelity(&ch)?,
        bound_slack: bound.slack,
        bound_holds: bound.holds,
        p_rb: exp.p_rb,
        diamond,
    })
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers {
        None => f(),
        Some(0) => Err(Error::Config("--workers must be at least 1".into())),
        Some(w) => {
            rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|e| Error::Config(e.to_string()))?.install(f)
        }
    }
}

pub fn cmd_murb(args: &RunArgs) -> Result<()> {
    let ExperimentConfig::Murb(mut exp) = load_mode(&args.config, "murb")? else { unreachable!() };
    apply_overrides(&mut exp.sampling, &mut exp.repetitions, args);
    let outputs = with_workers(args.workers, || murb_outputs(&exp))?;
    outputs.commit(&args.out)
}

pub fn cmd_ngurb(args: &NgurbArgs) -> Result<()> {
    let ExperimentConfig::Ngurb(mut exp) = load_mode(&args.run.config, "ngurb")? else { unreachable!() };
    apply_overrides(&mut exp.sampling, &mut exp.repetitions, &args.run);
    if let Some(a) = &args.u2_angles {
        exp.u2_angles = [a[0], a[1]];
    }
    if let Some(a) = &args.u3_angles {
        exp.u3_angles = [a[0], a[1], a[2]];
    }
    if let Some(t) = args.crosstalk_threshold {
        exp.crosstalk_threshold = t;
    }
    let (outputs, report) = with_workers(args.run.workers, || ngurb_outputs(&exp))?;
    outputs.commit(&args.run.out)?;
    if report.is_none() {
        eprintln!("note: cross-talk report needs cx and at least one single-qubit gate; skipped");
    }
    Ok(())
}

pub fn cmd_theory(args: &TheoryArgs) -> Result<()> {
    let ExperimentConfig::Theory(mut exp) = load_mode(&args.config, "theory")? else { unreachable!() };
    if args.p_rb.is_some() {
        exp.p_rb = args.p_rb;
    }
    let json = to_json(&theory_report(&exp)?)?;
    if let Some(dir) = &args.out {
        let mut outputs = Outputs::default();
        outputs.add("theory.json", json.clone());
        outputs.commit(dir)?;
    }
    print!("{json}");
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Murb(a) => cmd_murb(a),
        Command::Ngurb(a) => cmd_ngurb(a),
        Command::Theory(a) => cmd_theory(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_seeds() {
        assert_eq!(repetition_seed(7, 0), 7);
        assert_ne!(repetition_seed(7, 1), repetition_seed(7, 2));
        assert_eq!(sample_variance(&[1.0]), None);
        assert_eq!(sample_variance(&[1.0, 3.0]), Some(2.0));
    }

    #[test]
    fn theory_depolarizing() {
        let r = theory_report(&TheoryExperiment { channel: ChannelSpec::Depolarizing { n: 1, p: 0.8 }, p_rb: None })
            .unwrap();
        assert!((r.u - 0.64).abs() < 1e-12);
        assert!((r.closed_form.unwrap() - 0.64).abs() < 1e-15);
        assert!((r.f_avg - 0.9).abs() < 1e-12);
        assert!(r.bound_slack.abs() < 1e-12);
        let r =
            theory_report(&TheoryExperiment { channel: ChannelSpec::Unitary { gate: FixedGate::H }, p_rb: Some(1.0) })
                .unwrap();
        assert!((r.u - 1.0).abs() < 1e-12);
        assert!(r.diamond.unwrap().upper.abs() < 1e-6);
    }

    #[test]
    fn murb_outputs_identity() {
        let exp = MurbExperiment {
            n: 1,
            repetitions: 2,
            sampling: Sampling {
                depths: vec![1, 2, 3],
                iterations: 2,
                samples: 2,
                shots: 0,
                seed: 3,
                include_identity: true,
                epsilon: Some(0.05),
                delta: None,
            },
            noise: ChannelSpec::Identity { n: 1 },
        };
        let out = murb_outputs(&exp).unwrap();
        let names: Vec<_> = out.paths().map(|p| p.to_string_lossy().into_owned()).collect();
        assert_eq!(names, ["fit.json", "plot.csv", "records.csv"]);
        let fit: serde_json::Value = serde_json::from_str(out.get(Path::new("fit.json")).unwrap()).unwrap();
        assert_eq!(fit["u"], 1.0);
        assert_eq!(fit["across_repetition_variance"], 0.0);
        assert_eq!(fit["config"]["sampling"]["epsilon"], 0.05);
        let records = out.get(Path::new("records.csv")).unwrap();
        assert_eq!(records.lines().count(), 1 + 3 * 2 * 2);
        assert!(records.lines().skip(1).all(|l| l.ends_with(",1")));
    }

    #[test]
    fn murb_rejects_mismatched_noise() {
        let exp = MurbExperiment {
            n: 2,
            repetitions: 1,
            sampling: Sampling {
                depths: vec![1, 2],
                iterations: 1,
                samples: 1,
                shots: 0,
                seed: 3,
                include_identity: true,
                epsilon: None,
                delta: None,
            },
            noise: ChannelSpec::BitFlip { p: 0.9 },
        };
        assert!(matches!(murb_outputs(&exp), Err(Error::Config(_))));
    }
}
