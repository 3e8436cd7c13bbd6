//! Spread of the shot-based shifted-purity estimate around the exact value
//! for a fixed noisy sequence, as the shot count grows.

use urbench::channels::{compose, depolarizing, unitary_channel};
use urbench::clifford::{sample_uniform, CliffordGroup};
use urbench::simulator::{GateSequence, RngStream};
use urbench::urb::{exact_shifted_purity, shifted_purity};

fn main() -> urbench::Result<()> {
    let noise = depolarizing(1, 0.8)?;
    let group = CliffordGroup::shared(1)?;
    let mut pick = RngStream::new(3, 0);
    let mut seq = GateSequence::new(1)?;
    let mut composed = depolarizing(1, 1.0)?;
    for _ in 0..4 {
        let g = sample_uniform(group, &mut pick).matrix().clone();
        composed = compose(&noise, &compose(&unitary_channel(&g)?, &composed)?)?;
        seq.push_unitary(g)?;
        seq.push_channel(noise.clone().into())?;
    }
    let exact = exact_shifted_purity(&composed);
    println!("exact q = {exact:.6}");

    for shots in [16, 64, 256, 1024, 4096] {
        let mut rng = RngStream::new(3, shots);
        let draws: Vec<f64> = (0..400).map(|_| shifted_purity(&seq, 1, shots, &mut rng)).collect::<Result<_, _>>()?;
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64).sqrt();
        println!("shots = {shots:>4}: mean {mean:.6}  bias {:+.1e}  sd {sd:.4}", mean - exact);
    }
    Ok(())
}
