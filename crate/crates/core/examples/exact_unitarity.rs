//! Exact unitarity of a few channels, computed from the Pauli transfer
//! matrix and checked against the noiseless (zero-shot) shifted purity of a
//! single noisy Clifford.

use urbench::channels::{bit_flip, compose, dephasing, depolarizing, unitarity, unitary_channel, QuantumChannel};
use urbench::clifford::{sample_uniform, CliffordGroup};
use urbench::simulator::{GateSequence, RngStream};
use urbench::urb::shifted_purity;

fn main() -> urbench::Result<()> {
    let channels: Vec<(&str, QuantumChannel)> = vec![
        ("depolarizing(1, 0.9)", depolarizing(1, 0.9)?),
        ("depolarizing(2, 0.9)", depolarizing(2, 0.9)?),
        ("bit_flip(0.9)", bit_flip(0.9)?),
        ("dephasing(0.9)", dephasing(0.9)?),
        ("bit_flip then dephasing", compose(&dephasing(0.9)?, &bit_flip(0.9)?)?),
    ];
    let mut rng = RngStream::new(7, 0);
    for (name, ch) in channels {
        let n = ch.num_qubits();
        let g = sample_uniform(CliffordGroup::shared(n)?, &mut rng).matrix().clone();
        let mut seq = GateSequence::new(n)?;
        seq.push_unitary(g.clone())?;
        seq.push_channel(ch.clone().into())?;
        let q = shifted_purity(&seq, n, 0, &mut rng)?;
        let composed = compose(&ch, &unitary_channel(&g)?)?;
        println!("{name:<26} u = {:.6}   q(m=1) = {q:.6}   u(E G) = {:.6}", unitarity(&ch), unitarity(&composed));
    }
    Ok(())
}
