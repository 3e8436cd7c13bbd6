//! Unitarity randomized benchmarking: shifted-purity estimation from paired
//! Pauli-eigenstate inputs and the m-URB sequence engine.

mod fit;

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fit::{
    fit_decay, fit_decay_averages, DecayFit, DepthAverage, FitMethod, Q_FLOOR, RELATIVE_PRECISION, RESOLUTION_SIGMAS,
};

use crate::channels::{unitarity_pauli_sum, QuantumChannel};
use crate::clifford::{sample_non_identity, sample_uniform, CliffordGroup};
use crate::error::{Error, Result};
use crate::pauli::{eigenspace_pure_states, PauliLabel};
use crate::qmath::{ComplexMatrix, PureState};
use crate::simulator::{measurement_table, sample_expectation, GateSequence, RngStream};

const TAG_GATES: u64 = 0x6761_7465;
const TAG_SHOTS: u64 = 0x7368_6f74;

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UrbConfig {
    pub n: usize,
    pub depths: Vec<usize>,
    pub iterations: usize,
    pub samples: usize,
    pub shots: u64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub include_identity: bool,
    /// Confidence parameters; recorded with the results, not enforced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl UrbConfig {
    pub fn new(n: usize, depths: Vec<usize>, iterations: usize, samples: usize, shots: u64, seed: u64) -> Self {
        Self { n, depths, iterations, samples, shots, seed, include_identity: true, epsilon: None, delta: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.n) {
            return Err(Error::UnsupportedQubits(self.n));
        }
        if self.depths.is_empty() {
            return Err(Error::Config("depths must be non-empty".into()));
        }
        if self.depths.contains(&0) {
            return Err(Error::Config("depths must be positive".into()));
        }
        if self.depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("depths must be strictly ascending".into()));
        }
        check_shots(self.shots)?;
        if self.iterations == 0 || self.samples == 0 {
            return Err(Error::Config("iterations and samples must be at least 1".into()));
        }
        for (name, v) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if let Some(v) = v {
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::Config(format!("{name} must lie in (0, 1)")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftedPurityRecord {
    pub depth: usize,
    pub iteration: usize,
    pub sample: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UrbOutcome {
    /// Sorted by `(depth, iteration, sample)`.
    pub records: Vec<ShiftedPurityRecord>,
    /// Per-depth means after averaging samples then iterations.
    pub averages: Vec<DepthAverage>,
    pub fit: DecayFit,
}

#[derive(Clone, Debug)]
pub struct InputEnsembles {
    pub plus: Vec<(PureState, f64)>,
    pub minus: Vec<(PureState, f64)>,
}

/// Pure-state decompositions of `(I + P)/d` and `(I - P)/d`.
pub fn input_ensembles(p: &PauliLabel, n: usize) -> Result<InputEnsembles> {
    if p.num_qubits() != n {
        return Err(Error::dims(1 << n, p.dim()));
    }
    Ok(InputEnsembles { plus: eigenspace_pure_states(p, 1)?, minus: eigenspace_pure_states(p, -1)? })
}

struct Branch {
    sign: f64,
    weight: f64,
    rho: ComplexMatrix,
}

/// Input branches for every non-identity `P`, in label order.
fn input_table(n: usize) -> Result<&'static [Vec<Branch>]> {
    static ONE: OnceLock<Vec<Vec<Branch>>> = OnceLock::new();
    static TWO: OnceLock<Vec<Vec<Branch>>> = OnceLock::new();
    let build = |n| -> Vec<Vec<Branch>> {
        PauliLabel::non_identity(n)
            .expect("n checked")
            .iter()
            .map(|p| {
                let ens = input_ensembles(p, n).expect("non-identity label");
                let plus =
                    ens.plus.into_iter().map(|(s, w)| Branch { sign: 1.0, weight: w, rho: s.outer().into_matrix() });
                let minus =
                    ens.minus.into_iter().map(|(s, w)| Branch { sign: -1.0, weight: w, rho: s.outer().into_matrix() });
                plus.chain(minus).collect()
            })
            .collect()
    };
    match n {
        1 => Ok(ONE.get_or_init(|| build(1))),
        2 => Ok(TWO.get_or_init(|| build(2))),
        other => Err(Error::UnsupportedQubits(other)),
    }
}

/// `+1` outcome probabilities of every observable for every evolved input
/// branch of one sequence. Indexed `[p][branch]`, each holding
/// `(sign, weight, probabilities per q)`.
pub(crate) struct OutputTable {
    n: usize,
    rows: Vec<Vec<(f64, f64, Vec<f64>)>>,
}

impl OutputTable {
    pub(crate) fn new(seq: &GateSequence) -> Result<Self> {
        let n = seq.num_qubits();
        let inputs = input_table(n)?;
        let meas = measurement_table(n)?;
        let rows = inputs
            .iter()
            .map(|branches| {
                branches
                    .iter()
                    .map(|b| {
                        let out = seq.evolve(&b.rho);
                        (b.sign, b.weight, meas.iter().map(|m| m.prob_positive(&out)).collect())
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, rows })
    }

    /// Shifted purity with `expect(p, q, branch, prob)` supplying each
    /// single-observable expectation value estimated from `shots` outcomes.
    ///
    /// With finite shots the square of an estimated difference exceeds the
    /// square of the true difference by the estimator variance, so the
    /// unbiased variance estimate `sum w^2 (1 - e^2) / (shots - 1)` is
    /// subtracted from every term.
    fn shifted_purity(&self, shots: u64, mut expect: impl FnMut(usize, usize, usize, f64) -> f64) -> f64 {
        let dsq = (1usize << (2 * self.n)) as f64;
        let nq = self.rows[0][0].2.len();
        let mut acc = 0.0;
        for (pi, branches) in self.rows.iter().enumerate() {
            for qi in 0..nq {
                let (mut diff, mut var) = (0.0, 0.0);
                for (bi, (sign, weight, probs)) in branches.iter().enumerate() {
                    let e = expect(pi, qi, bi, probs[qi]);
                    diff += sign * weight * e;
                    var += weight * weight * (1.0 - e * e);
                }
                acc += diff * diff;
                if shots > 0 {
                    acc -= var / (shots - 1) as f64;
                }
            }
        }
        acc / (dsq - 1.0) / 4.0
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 1 {
        return Err(Error::Config("shots must be 0 (exact) or at least 2".into()));
    }
    Ok(())
}

fn check_pair(seq: &GateSequence, p: &PauliLabel, q: &PauliLabel) -> Result<()> {
    if p.is_identity() || q.is_identity() {
        return Err(Error::IdentityPauli);
    }
    for l in [p, q] {
        if l.dim() != seq.dim() {
            return Err(Error::dims(seq.dim(), l.dim()));
        }
    }
    Ok(())
}

/// Weighted expectations of `q` after `seq` on the `+` and `-` input
/// ensembles of `p`.
pub fn pair_expectation(
    seq: &GateSequence,
    p: &PauliLabel,
    q: &PauliLabel,
    shots: u64,
    rng: &mut RngStream,
) -> Result<(f64, f64)> {
    check_pair(seq, p, q)?;
    let ens = input_ensembles(p, seq.num_qubits())?;
    let meas = crate::simulator::PauliMeasurement::new(q)?;
    let mut side = |members: &[(PureState, f64)]| {
        members
            .iter()
            .map(|(s, w)| {
                let out = seq.evolve(s.outer().matrix());
                w * sample_expectation(meas.prob_positive(&out), shots, rng)
            })
            .sum::<f64>()
    };
    let plus = side(&ens.plus);
    let minus = side(&ens.minus);
    Ok((plus, minus))
}

/// `1/(d^2-1) * sum_{P,Q != I} (e+ - e-)^2 / 4` for one sequence, with the
/// squares estimated without shot-noise bias.
pub fn shifted_purity(seq: &GateSequence, n: usize, shots: u64, rng: &mut RngStream) -> Result<f64> {
    if seq.num_qubits() != n {
        return Err(Error::dims(1 << n, seq.dim()));
    }
    check_shots(shots)?;
    let table = OutputTable::new(seq)?;
    Ok(table.shifted_purity(shots, |_, _, _, prob| sample_expectation(prob, shots, rng)))
}

/// Infinite-shot value of the shifted purity of a sequence whose composed
/// map is `ch`.
pub fn exact_shifted_purity(ch: &QuantumChannel) -> f64 {
    unitarity_pauli_sum(ch)
}

/// Evaluates every `(depth, iteration)` cell in parallel. `table(depth,
/// iteration)` provides the output probabilities of that cell's sequence;
/// shot streams are keyed by the full cell coordinates so the result does not
/// depend on scheduling.
pub(crate) fn run_cells<F>(cfg: &UrbConfig, table: F) -> Result<UrbOutcome>
where
    F: Fn(usize, usize) -> Result<Arc<OutputTable>> + Sync,
{
    cfg.validate()?;
    let cells: Vec<(usize, usize)> =
        cfg.depths.iter().flat_map(|&m| (0..cfg.iterations).map(move |i| (m, i))).collect();
    let per_cell: Vec<Vec<ShiftedPurityRecord>> = cells
        .par_iter()
        .map(|&(m, it)| {
            let t = table(m, it)?;
            Ok((0..cfg.samples)
                .map(|s| {
                    let value = t.shifted_purity(cfg.shots, |pi, qi, bi, prob| {
                        if cfg.shots == 0 {
                            return 2.0 * prob - 1.0;
                        }
                        let key = [TAG_SHOTS, m as u64, it as u64, s as u64, pi as u64, qi as u64, bi as u64];
                        sample_expectation(prob, cfg.shots, &mut RngStream::keyed(cfg.seed, &key))
                    });
                    ShiftedPurityRecord { depth: m, iteration: it, sample: s, value }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<ShiftedPurityRecord> = per_cell.into_iter().flatten().collect();
    records.sort_by_key(|r| (r.depth, r.iteration, r.sample));

    let averages: Vec<DepthAverage> = cfg
        .depths
        .iter()
        .map(|&m| {
            let at_depth: Vec<&ShiftedPurityRecord> = records.iter().filter(|r| r.depth == m).collect();
            let means: Vec<f64> =
                at_depth.chunks(cfg.samples).map(|c| c.iter().map(|r| r.value).sum::<f64>() / c.len() as f64).collect();
            let (mean, std_err) = mean_and_std_err(&means);
            DepthAverage::new(m, mean, std_err)
        })
        .collect();
    let fit = fit_decay_averages(&averages)?;
    Ok(UrbOutcome { records, averages, fit })
}

/// Mean and its standard error; the error is zero for a single value.
fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// m-URB: each sequence applies `m` uniformly sampled Cliffords, each followed
/// by `noise`.
pub fn run_murb(group: &CliffordGroup, noise: &QuantumChannel, cfg: &UrbConfig) -> Result<UrbOutcome> {
    cfg.validate()?;
    if group.num_qubits() != cfg.n {
        return Err(Error::dims(1 << cfg.n, group.dim()));
    }
    if noise.dim() != group.dim() {
        return Err(Error::dims(group.dim(), noise.dim()));
    }
    let noise = Arc::new(noise.clone());
    run_cells(cfg, |m, it| {
        let mut rng = RngStream::keyed(cfg.seed, &[TAG_GATES, m as u64, it as u64]);
        let mut seq = GateSequence::new(cfg.n)?;
        for _ in 0..m {
            let g = if cfg.include_identity {
                sample_uniform(group, &mut rng)
            } else {
                sample_non_identity(group, &mut rng)
            };
            seq.push_unitary(g.matrix().clone())?;
            seq.push_channel(noise.clone())?;
        }
        OutputTable::new(&seq).map(Arc::new)
    })
}
