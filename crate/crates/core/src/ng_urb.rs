//! Native-gate URB: a single native gate composed with itself, interleaved
//! with ideal identities, under per-gate backend noise; plus the cross-talk
//! comparison of single- and two-qubit unitarities.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{depolarizing, QuantumChannel};
use crate::error::{Error, Result};
use crate::pauli::cnot;
use crate::qmath::{c, ComplexMatrix, C64};
use crate::simulator::GateSequence;
use crate::urb::{run_cells, DecayFit, OutputTable, UrbConfig, UrbOutcome};

pub const DEFAULT_CROSSTALK_THRESHOLD: f64 = 0.01;
pub const DEFAULT_U2_ANGLES: [f64; 2] = [0.0, PI];
pub const DEFAULT_U3_ANGLES: [f64; 3] = [FRAC_PI_2, FRAC_PI_4, FRAC_PI_8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateName {
    Id,
    U2,
    U3,
    Cx,
}

impl GateName {
    pub const ALL: [GateName; 4] = [GateName::Id, GateName::U2, GateName::U3, GateName::Cx];

    pub fn num_qubits(self) -> usize {
        match self {
            GateName::Cx => 2,
            _ => 1,
        }
    }

    pub fn angle_count(self) -> usize {
        match self {
            GateName::Id | GateName::Cx => 0,
            GateName::U2 => 2,
            GateName::U3 => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Id => "id",
            GateName::U2 => "u2",
            GateName::U3 => "u3",
            GateName::Cx => "cx",
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateName::ALL.into_iter().find(|g| g.as_str() == s).ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NativeGate {
    name: GateName,
    angles: Vec<f64>,
}

impl NativeGate {
    pub fn new(name: GateName, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != name.angle_count() {
            return Err(Error::Config(format!("{name} takes {} angles, got {}", name.angle_count(), angles.len())));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { name, angles })
    }

    pub fn id() -> Self {
        Self { name: GateName::Id, angles: vec![] }
    }

    pub fn u2(phi: f64, lambda: f64) -> Result<Self> {
        Self::new(GateName::U2, vec![phi, lambda])
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64) -> Result<Self> {
        Self::new(GateName::U3, vec![theta, phi, lambda])
    }

    pub fn cx() -> Self {
        Self { name: GateName::Cx, angles: vec![] }
    }

    /// The gate with its default angles.
    pub fn default_for(name: GateName) -> Self {
        let angles = match name {
            GateName::U2 => DEFAULT_U2_ANGLES.to_vec(),
            GateName::U3 => DEFAULT_U3_ANGLES.to_vec(),
            _ => vec![],
        };
        Self { name, angles }
    }

    pub fn name(&self) -> GateName {
        self.name
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn num_qubits(&self) -> usize {
        self.name.num_qubits()
    }
}

fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |a: f64| C64::from_polar(1.0, a);
    ComplexMatrix::new(2, 2, vec![c(co, 0.0), -e(lambda) * s, e(phi) * s, e(phi + lambda) * co]).expect("finite angles")
}

/// `u3(t, p, l) = [[cos t/2, -e^{il} sin t/2], [e^{ip} sin t/2, e^{i(p+l)} cos t/2]]`,
/// `u2(p, l) = u3(pi/2, p, l)`, `cx` = CNOT with control on qubit 0.
pub fn native_unitary(g: &NativeGate) -> ComplexMatrix {
    let a = &g.angles;
    match g.name {
        GateName::Id => ComplexMatrix::identity(2),
        GateName::U2 => u3_matrix(FRAC_PI_2, a[0], a[1]),
        GateName::U3 => u3_matrix(a[0], a[1], a[2]),
        GateName::Cx => cnot(0, 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    Depolarizing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateNoise {
    pub model: NoiseModel,
    /// Depolarizing survival probability.
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackendNoiseSpec {
    pub backend: String,
    pub gates: BTreeMap<GateName, GateNoise>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGateNoise {
    model: String,
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    backend: String,
    gates: BTreeMap<String, RawGateNoise>,
}

impl BackendNoiseSpec {
    /// Parses the TOML form; `origin` names the source in schema errors.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let schema = |message: String| Error::Schema { path: origin.to_path_buf(), message };
        let raw: RawSpec = toml::from_str(text).map_err(|e| schema(e.message().to_string()))?;
        let mut gates = BTreeMap::new();
        for (key, entry) in raw.gates {
            let name: GateName = key.parse()?;
            let model = match entry.model.as_str() {
                "depolarizing" => NoiseModel::Depolarizing,
                other => return Err(schema(format!("gate {key}: unsupported noise model {other:?}"))),
            };
            if !(0.0..=1.0).contains(&entry.p) {
                return Err(Error::ProbabilityOutOfRange { value: entry.p });
            }
            gates.insert(name, GateNoise { model, p: entry.p });
        }
        Ok(Self { backend: raw.backend, gates })
    }

    pub fn noise_for(&self, gate: GateName) -> Result<QuantumChannel> {
        let entry = self.gates.get(&gate).ok_or_else(|| Error::MissingGate(gate.to_string()))?;
        match entry.model {
            NoiseModel::Depolarizing => depolarizing(gate.num_qubits(), entry.p),
        }
    }
}

pub fn load_backend_spec(path: &Path) -> Result<BackendNoiseSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    BackendNoiseSpec::from_toml_str(&text, path)
}

/// `m` applications of the gate followed by `noise`, separated by ideal
/// identities: `[G, noise, I, G, noise, ..., I, G, noise]`.
pub fn compose_ngurb_sequence(g: &NativeGate, m: usize, noise: &QuantumChannel) -> Result<GateSequence> {
    if m == 0 {
        return Err(Error::Config("depth must be at least 1".into()));
    }
    let n = g.num_qubits();
    if noise.num_qubits() != n {
        return Err(Error::dims(1 << n, noise.dim()));
    }
    let gate = native_unitary(g);
    let noise = Arc::new(noise.clone());
    let mut seq = GateSequence::new(n)?;
    for i in 0..m {
        if i > 0 {
            seq.push_unitary(ComplexMatrix::identity(1 << n))?;
        }
        seq.push_unitary(gate.clone())?;
        seq.push_channel(noise.clone())?;
    }
    Ok(seq)
}

/// Ng-URB for one native gate. Every iteration at a given depth runs the same
/// sequence; only the shot draws differ.
pub fn run_ngurb(g: &NativeGate, spec: &BackendNoiseSpec, cfg: &UrbConfig) -> Result<UrbOutcome> {
    cfg.validate()?;
    if cfg.n != g.num_qubits() {
        return Err(Error::Config(format!("{} acts on {} qubit(s), config has n = {}", g.name, g.num_qubits(), cfg.n)));
    }
    let noise = spec.noise_for(g.name)?;
    let tables: BTreeMap<usize, Arc<OutputTable>> = cfg
        .depths
        .par_iter()
        .map(|&m| Ok((m, Arc::new(OutputTable::new(&compose_ngurb_sequence(g, m, &noise)?)?))))
        .collect::<Result<_>>()?;
    run_cells(cfg, |m, _| Ok(tables[&m].clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateUnitarity {
    pub gate: GateName,
    pub u: f64,
    pub u_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrosstalkReport {
    /// In `id, u2, u3, cx` order.
    pub gates: Vec<GateUnitarity>,
    pub single_qubit_min: f64,
    pub two_qubit_u: f64,
    /// `single_qubit_min - two_qubit_u`.
    pub deficit: f64,
    pub threshold: f64,
    pub significant: bool,
}

pub fn crosstalk_report(fits: &BTreeMap<GateName, DecayFit>, threshold: f64) -> Result<CrosstalkReport> {
    if !threshold.is_finite() {
        return Err(Error::NonFinite);
    }
    let cx = fits.get(&GateName::Cx).ok_or_else(|| Error::MissingGate("cx".into()))?;
    let single_qubit_min = fits
        .iter()
        .filter(|(g, _)| g.num_qubits() == 1)
        .map(|(_, f)| f.u)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::MissingGate("single-qubit gate".into()))?;
    let deficit = single_qubit_min - cx.u;
    Ok(CrosstalkReport {
        gates: fits.iter().map(|(&gate, f)| GateUnitarity { gate, u: f.u, u_variance: f.u_variance }).collect(),
        single_qubit_min,
        two_qubit_u: cx.u,
        deficit,
        threshold,
        significant: deficit > threshold,
    })
}
