//! Experiment configuration files (TOML).
//!
//! ```toml
//! mode = "murb"
//! n = 1
//! repetitions = 1
//!
//! [sampling]
//! depths = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
//! iterations = 15
//! samples = 5
//! shots = 1024
//! seed = 2021
//!
//! [noise]
//! kind = "depolarizing"
//! p = 0.9
//! ```
//!
//! `mode = "ngurb"` replaces `n` and `[noise]` with `backend` (a path relative
//! to the config file), `gates`, optional `u2_angles` / `u3_angles` and
//! `crosstalk_threshold`. `mode = "theory"` takes a `[channel]` table and an
//! optional `p_rb`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channels::{
    bit_flip, dephasing, depolarizing, unitarity_bitflip_closed, unitarity_depolarizing_closed, unitary_channel,
    QuantumChannel,
};
use crate::error::{Error, Result};
use crate::ng_urb::{GateName, NativeGate, DEFAULT_CROSSTALK_THRESHOLD, DEFAULT_U2_ANGLES, DEFAULT_U3_ANGLES};
use crate::pauli::{cnot, pauli_matrix};
use crate::qmath::{c, ComplexMatrix};
use crate::urb::UrbConfig;

fn one() -> usize {
    1
}

fn default_true() -> bool {
    true
}

/// Sampling parameters shared by both protocols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    pub depths: Vec<usize>,
    pub iterations: usize,
    pub samples: usize,
    pub shots: u64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub include_identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Sampling {
    pub fn urb_config(&self, n: usize) -> UrbConfig {
        UrbConfig {
            n,
            depths: self.depths.clone(),
            iterations: self.iterations,
            samples: self.samples,
            shots: self.shots,
            seed: self.seed,
            include_identity: self.include_identity,
            epsilon: self.epsilon,
            delta: self.delta,
        }
    }
}

/// Fixed gates accepted by `kind = "unitary"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedGate {
    H,
    S,
    X,
    Y,
    Z,
    Cx,
}

impl FixedGate {
    pub fn matrix(self) -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pauli = |l: &str| pauli_matrix(&l.parse().expect("valid label"));
        match self {
            FixedGate::H => ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).expect("2x2"),
            FixedGate::S => ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]),
            FixedGate::X => pauli("X"),
            FixedGate::Y => pauli("Y"),
            FixedGate::Z => pauli("Z"),
            FixedGate::Cx => cnot(0, 1),
        }
    }
}

/// Inline noise channel description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Identity {
        #[serde(default = "one")]
        n: usize,
    },
    Depolarizing {
        #[serde(default = "one")]
        n: usize,
        p: f64,
    },
    BitFlip {
        p: f64,
    },
    Dephasing {
        p: f64,
    },
    Unitary {
        gate: FixedGate,
    },
}

impl ChannelSpec {
    pub fn num_qubits(&self) -> usize {
        match self {
            ChannelSpec::Identity { n } | ChannelSpec::Depolarizing { n, .. } => *n,
            ChannelSpec::Unitary { gate: FixedGate::Cx } => 2,
            _ => 1,
        }
    }

    pub fn build(&self) -> Result<QuantumChannel> {
        match *self {
            ChannelSpec::Identity { n } => {
                check_qubits(n)?;
                QuantumChannel::identity(1 << n)
            }
            ChannelSpec::Depolarizing { n, p } => {
                check_qubits(n)?;
                depolarizing(n, p)
            }
            ChannelSpec::BitFlip { p } => bit_flip(p),
            ChannelSpec::Dephasing { p } => dephasing(p),
            ChannelSpec::Unitary { gate } => unitary_channel(&gate.matrix()),
        }
    }

    /// Closed-form unitarity where one is known.
    pub fn closed_form_unitarity(&self) -> Option<f64> {
        match *self {
            ChannelSpec::Identity { .. } | ChannelSpec::Unitary { .. } => Some(1.0),
            ChannelSpec::Depolarizing { n, p } => Some(unitarity_depolarizing_closed(n, p)),
            ChannelSpec::BitFlip { p } | ChannelSpec::Dephasing { p } => Some(unitarity_bitflip_closed(p)),
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if (1..=2).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedQubits(n))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MurbExperiment {
    pub n: usize,
    #[serde(default = "one")]
    pub repetitions: usize,
    pub sampling: Sampling,
    pub noise: ChannelSpec,
}

fn all_gates() -> Vec<GateName> {
    GateName::ALL.to_vec()
}

fn default_threshold() -> f64 {
    DEFAULT_CROSSTALK_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NgurbExperiment {
    /// Backend noise file, relative to the config file.
    pub backend: PathBuf,
    #[serde(default = "all_gates")]
    pub gates: Vec<GateName>,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default = "default_u2")]
    pub u2_angles: [f64; 2],
    #[serde(default = "default_u3")]
    pub u3_angles: [f64; 3],
    #[serde(default = "default_threshold")]
    pub crosstalk_threshold: f64,
    pub sampling: Sampling,
}

fn default_u2() -> [f64; 2] {
    DEFAULT_U2_ANGLES
}

fn default_u3() -> [f64; 3] {
    DEFAULT_U3_ANGLES
}

impl NgurbExperiment {
    pub fn native_gate(&self, name: GateName) -> Result<NativeGate> {
        match name {
            GateName::U2 => NativeGate::new(name, self.u2_angles.to_vec()),
            GateName::U3 => NativeGate::new(name, self.u3_angles.to_vec()),
            other => Ok(NativeGate::default_for(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryExperiment {
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_rb: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ExperimentConfig {
    Murb(MurbExperiment),
    Ngurb(NgurbExperiment),
    Theory(TheoryExperiment),
}

impl ExperimentConfig {
    pub fn mode(&self) -> &'static str {
        match self {
            ExperimentConfig::Murb(_) => "murb",
            ExperimentConfig::Ngurb(_) => "ngurb",
            ExperimentConfig::Theory(_) => "theory",
        }
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schema { path: origin.to_path_buf(), message: e.message().to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let mut cfg = Self::from_toml_str(&text, path)?;
        if let ExperimentConfig::Ngurb(ng) = &mut cfg {
            if ng.backend.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                ng.backend = base.join(&ng.backend);
            }
        }
        Ok(cfg)
    }
}
