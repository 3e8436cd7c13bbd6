//! Unitarity randomized benchmarking for one- and two-qubit noise.
//!
//! Two protocols share one estimator. m-URB interleaves uniformly random
//! Cliffords with a fixed noise channel; native-gate URB repeats a single
//! native gate (`id`, `u2`, `u3`, `cx`) under a per-gate backend noise model.
//! Both estimate the shifted purity at each depth and fit `B u^(m-1)`.
//!
//! Examples (`cargo run --release --example <name>`):
//!
//! - `murb_depolarizing`: fitted unitarity for depolarizing noise.
//! - `murb_bitflip`: per-depth averages and the low-signal flag.
//! - `ngurb_crosstalk`: native gates against a backend file, then the
//!   cross-talk check.
//! - `exact_unitarity`: closed forms against zero-shot shifted purity.
//! - `clifford_groups`: group generation and generator words.
//! - `diamond_bounds`: diamond-distance bounds from `p_rb` and `u`.
//! - `shot_statistics`: estimator spread versus shot count.
//! - `run_config`: any TOML experiment config, without the binary.

pub mod channels;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod ng_urb;
pub mod pauli;
pub mod qmath;
pub mod simulator;
pub mod urb;

pub use error::{Error, Result};
