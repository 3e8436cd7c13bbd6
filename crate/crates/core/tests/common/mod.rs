#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use urbench::channels::{mixed_unitary, QuantumChannel};
use urbench::qmath::{ComplexMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Orthonormalizes the columns of a random `rows x cols` Gaussian matrix.
fn random_isometry(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<C64>> {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| gaussian(rng)).collect();
        for q in &columns {
            let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, qi) in v.iter_mut().zip(q) {
                *x -= overlap * qi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            columns.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    columns
}

/// Haar-distributed unitary.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let cols = random_isometry(d, d, rng);
    let data = (0..d).flat_map(|r| cols.iter().map(move |c| c[r])).collect();
    ComplexMatrix::new(d, d, data).unwrap()
}

/// Trace-preserving channel with `rank` Kraus operators, cut from a random
/// isometry `C^d -> C^(rank d)`.
pub fn random_channel(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> QuantumChannel {
    let cols = random_isometry(rank * d, d, rng);
    let kraus = (0..rank)
        .map(|k| {
            let data = (0..d).flat_map(|r| cols.iter().map(move |c| c[k * d + r])).collect();
            ComplexMatrix::new(d, d, data).unwrap()
        })
        .collect();
    QuantumChannel::new(kraus).unwrap()
}

pub fn random_mixed_unitary(d: usize, terms: usize, rng: &mut ChaCha8Rng) -> QuantumChannel {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let parts: Vec<(f64, ComplexMatrix)> = weights.iter().map(|w| (w / total, random_unitary(d, rng))).collect();
    mixed_unitary(&parts).unwrap()
}
