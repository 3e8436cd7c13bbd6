//! Density-matrix execution of gate sequences and shot-sampled Pauli
//! expectation values.

use std::sync::{Arc, OnceLock};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::pauli::{basis_change_unitary, positive_eigenspace_indices, z_tilde, PauliLabel};
use crate::qmath::{validate_density, ComplexMatrix, DensityMatrix};

/// Seeded ChaCha8 stream. The same `(seed, stream)` pair yields the same draws
/// on every platform.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Stream keyed by a tuple of integers (see [`stream_id`]).
    pub fn keyed(seed: u64, key: &[u64]) -> Self {
        Self::new(seed, stream_id(key))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix of a key tuple.
pub fn stream_id(key: &[u64]) -> u64 {
    key.iter().fold(0x243f_6a88_85a3_08d3, |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

#[derive(Clone, Debug)]
pub enum SequenceElement {
    Unitary(ComplexMatrix),
    Channel(Arc<QuantumChannel>),
}

impl SequenceElement {
    fn dim(&self) -> usize {
        match self {
            SequenceElement::Unitary(u) => u.rows(),
            SequenceElement::Channel(ch) => ch.dim(),
        }
    }
}

/// Elements in application order (first element acts first). Empty is the
/// identity map.
#[derive(Clone, Debug)]
pub struct GateSequence {
    n: usize,
    elements: Vec<SequenceElement>,
}

impl GateSequence {
    pub fn new(n: usize) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::UnsupportedQubits(n));
        }
        Ok(Self { n, elements: Vec::new() })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn elements(&self) -> &[SequenceElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, element: SequenceElement) -> Result<()> {
        if element.dim() != self.dim() {
            return Err(Error::dims(self.dim(), element.dim()));
        }
        if let SequenceElement::Unitary(u) = &element {
            if !u.is_unitary(crate::qmath::tol::UNITARY) {
                return Err(Error::NotUnitary { deviation: u.unitarity_deviation() });
            }
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn push_unitary(&mut self, u: ComplexMatrix) -> Result<()> {
        self.push(SequenceElement::Unitary(u))
    }

    pub fn push_channel(&mut self, ch: Arc<QuantumChannel>) -> Result<()> {
        self.push(SequenceElement::Channel(ch))
    }

    pub fn concat(&self, other: &GateSequence) -> Result<GateSequence> {
        if self.n != other.n {
            return Err(Error::dims(self.n, other.n));
        }
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        Ok(GateSequence { n: self.n, elements })
    }

    pub fn channel_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, SequenceElement::Channel(_))).count()
    }

    pub(crate) fn evolve(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.elements.iter().fold(rho.clone(), |acc, el| match el {
            SequenceElement::Unitary(u) => u.mul_unchecked(&acc).mul_unchecked(&u.dagger()),
            SequenceElement::Channel(ch) => ch.apply_matrix_unchecked(&acc),
        })
    }
}

pub fn run_exact(seq: &GateSequence, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    if rho0.dim() != seq.dim() {
        return Err(Error::dims(seq.dim(), rho0.dim()));
    }
    validate_density(seq.evolve(rho0.matrix()), false)
}

/// Measurement plan for one observable: rotation plus +1 outcome indices.
#[derive(Clone, Debug)]
pub struct PauliMeasurement {
    pub label: PauliLabel,
    rotation: ComplexMatrix,
    positive: Vec<usize>,
}

impl PauliMeasurement {
    pub fn new(q: &PauliLabel) -> Result<Self> {
        let rotation = basis_change_unitary(q)?;
        let positive = positive_eigenspace_indices(&z_tilde(q)?)?;
        Ok(Self { label: q.clone(), rotation, positive })
    }

    /// Diagonal of `U rho U^dagger`.
    fn rotated_diagonal(&self, rho: &ComplexMatrix) -> Vec<f64> {
        let u = &self.rotation;
        let d = u.rows();
        (0..d)
            .map(|b| {
                let mut acc = num_complex::Complex64::default();
                for i in 0..d {
                    let ubi = u[(b, i)];
                    if ubi.norm_sqr() == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        acc += ubi * rho[(i, j)] * u[(b, j)].conj();
                    }
                }
                acc.re
            })
            .collect()
    }

    pub fn prob_positive(&self, rho: &ComplexMatrix) -> f64 {
        let diag = self.rotated_diagonal(rho);
        self.positive.iter().map(|&b| diag[b]).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn prob_negative(&self, rho: &ComplexMatrix) -> f64 {
        let diag = self.rotated_diagonal(rho);
        (0..diag.len()).filter(|b| !self.positive.contains(b)).map(|b| diag[b]).sum::<f64>().clamp(0.0, 1.0)
    }
}

/// Cached measurement plans for every non-identity label, in label order.
pub fn measurement_table(n: usize) -> Result<&'static [PauliMeasurement]> {
    static ONE: OnceLock<Vec<PauliMeasurement>> = OnceLock::new();
    static TWO: OnceLock<Vec<PauliMeasurement>> = OnceLock::new();
    let build = |n| {
        PauliLabel::non_identity(n)
            .and_then(|ls| ls.iter().map(PauliMeasurement::new).collect::<Result<Vec<_>>>())
            .expect("non-identity labels")
    };
    match n {
        1 => Ok(ONE.get_or_init(|| build(1))),
        2 => Ok(TWO.get_or_init(|| build(2))),
        other => Err(Error::UnsupportedQubits(other)),
    }
}

fn check_measurable(rho: &DensityMatrix, q: &PauliLabel) -> Result<()> {
    if q.is_identity() {
        return Err(Error::IdentityPauli);
    }
    if q.dim() != rho.dim() {
        return Err(Error::dims(rho.dim(), q.dim()));
    }
    Ok(())
}

/// Probability of the +1 outcome of `q`, measured by rotating into the
/// computational basis.
pub fn prob_positive(rho: &DensityMatrix, q: &PauliLabel) -> Result<f64> {
    check_measurable(rho, q)?;
    Ok(PauliMeasurement::new(q)?.prob_positive(rho.matrix()))
}

pub fn prob_negative(rho: &DensityMatrix, q: &PauliLabel) -> Result<f64> {
    check_measurable(rho, q)?;
    Ok(PauliMeasurement::new(q)?.prob_negative(rho.matrix()))
}

pub fn exact_expectation(rho: &DensityMatrix, q: &PauliLabel) -> Result<f64> {
    Ok(2.0 * prob_positive(rho, q)? - 1.0)
}

/// `2 k / shots - 1` with `k ~ Binomial(shots, p)`; `shots == 0` returns the
/// exact value `2 p - 1`.
pub fn sample_expectation(p: f64, shots: u64, rng: &mut RngStream) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if shots == 0 {
        return 2.0 * p - 1.0;
    }
    let k = Binomial::new(shots, p).expect("p clamped to [0, 1]").sample(rng);
    2.0 * (k as f64 / shots as f64) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;
    use crate::qmath::{c, PureState};

    fn h() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
    }

    fn label(s: &str) -> PauliLabel {
        s.parse().unwrap()
    }

    fn plus() -> DensityMatrix {
        PureState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap().outer()
    }

    #[test]
    fn run_exact_examples() {
        let rho = PureState::basis(2, 0).unwrap().outer();
        let empty = GateSequence::new(1).unwrap();
        assert_eq!(run_exact(&empty, &rho).unwrap(), rho);

        let mut flip = GateSequence::new(1).unwrap();
        flip.push_unitary(crate::pauli::pauli_matrix(&label("X"))).unwrap();
        let out = run_exact(&flip, &rho).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[0.0, 1.0]), 1e-15));

        let mut seq = GateSequence::new(1).unwrap();
        seq.push_unitary(h()).unwrap();
        seq.push_channel(Arc::new(depolarizing(1, 0.8).unwrap())).unwrap();
        let out = run_exact(&seq, &rho).unwrap();
        let want = plus().matrix().scale_real(0.8).add(&ComplexMatrix::identity(2).scale_real(0.1)).unwrap();
        assert!(out.matrix().approx_eq(&want, 1e-12));

        let two = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(run_exact(&seq, &two).is_err());
        assert!(seq.push_unitary(ComplexMatrix::identity(4)).is_err());
        assert!(seq.push_unitary(ComplexMatrix::diag_real(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn probabilities() {
        assert!((prob_positive(&plus(), &label("X")).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        for q in ["X", "Y", "Z"] {
            assert!((prob_positive(&mixed, &label(q)).unwrap() - 0.5).abs() < 1e-12);
        }
        let bell = PureState::normalized(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap().outer();
        // |psi+> has ZZ parity -1 and XX parity +1
        assert!((prob_positive(&bell, &label("XX")).unwrap() - 1.0).abs() < 1e-12);
        let phi = PureState::normalized(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap().outer();
        assert!((prob_positive(&phi, &label("ZZ")).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(prob_positive(&phi, &label("II")), Err(Error::IdentityPauli)));
        assert!(prob_positive(&phi, &label("Z")).is_err());
    }

    #[test]
    fn exact_expectations() {
        let zero = PureState::basis(2, 0).unwrap().outer();
        let one = PureState::basis(2, 1).unwrap().outer();
        assert!((exact_expectation(&zero, &label("Z")).unwrap() - 1.0).abs() < 1e-15);
        assert!((exact_expectation(&one, &label("Z")).unwrap() + 1.0).abs() < 1e-15);
        assert!(exact_expectation(&plus(), &label("Z")).unwrap().abs() < 1e-15);
    }

    #[test]
    fn sampled_expectations() {
        let mut rng = RngStream::new(1, 1);
        assert_eq!(sample_expectation(1.0, 100, &mut rng), 1.0);
        assert_eq!(sample_expectation(0.0, 100, &mut rng), -1.0);
        assert_eq!(sample_expectation(0.25, 0, &mut rng), -0.5);

        let within =
            (0..1000).filter(|&seed| sample_expectation(0.5, 4096, &mut RngStream::new(seed, 3)).abs() <= 0.05).count();
        assert!(within >= 990, "{within}");
    }

    #[test]
    fn streams_are_deterministic() {
        let mut a = RngStream::keyed(9, &[1, 2, 3]);
        let mut b = RngStream::keyed(9, &[1, 2, 3]);
        let mut other = RngStream::keyed(9, &[1, 3, 2]);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..4).map(|_| other.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert_ne!(stream_id(&[0]), stream_id(&[0, 0]));
    }

    #[test]
    fn channel_count() {
        let mut seq = GateSequence::new(1).unwrap();
        let noise = Arc::new(depolarizing(1, 0.9).unwrap());
        for _ in 0..3 {
            seq.push_unitary(h()).unwrap();
            seq.push_channel(noise.clone()).unwrap();
        }
        assert_eq!(seq.channel_count(), 3);
        assert_eq!(seq.concat(&seq).unwrap().len(), 12);
    }
}
