//! Kraus-form quantum channels, their Pauli transfer matrices, unitarity, and
//! the fidelity and diamond-distance bounds that follow from it.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::pauli::{normalized_pauli_group, pauli_matrix, PauliLabel};
use crate::qmath::{c, tol, validate_density, ComplexMatrix, DensityMatrix, C64};

/// Small dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:>9.5}", self.get(r, c))).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `max |M^T M - I|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        self.transpose().mul(self).map(|g| g.max_abs_diff(&Self::identity(self.cols))).unwrap_or(f64::INFINITY)
    }
}

/// Real `d^2 x d^2` transfer matrix in the normalized Pauli basis, identity first.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTransferMatrix {
    matrix: RealMatrix,
}

impl PauliTransferMatrix {
    pub fn dim_sq(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.mul(&other.matrix)? })
    }

    pub fn approx(&self, other: &Self, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    /// Lower-right `(d^2 - 1) x (d^2 - 1)` block.
    pub fn unital_block(&self) -> RealMatrix {
        let n = self.dim_sq() - 1;
        let mut out = RealMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self.get(r + 1, c + 1));
            }
        }
        out
    }

    /// First column below the top entry.
    pub fn non_unital_part(&self) -> Vec<f64> {
        (1..self.dim_sq()).map(|r| self.get(r, 0)).collect()
    }
}

pub fn unital_block(ptm: &PauliTransferMatrix) -> RealMatrix {
    ptm.unital_block()
}

/// A completely positive, non-trace-increasing map in Kraus form.
#[derive(Clone)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
    ptm: OnceLock<PauliTransferMatrix>,
}

impl fmt::Debug for QuantumChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantumChannel")
            .field("dim", &self.dim)
            .field("kraus_ops", &self.kraus.len())
            .field("trace_preserving", &self.trace_preserving)
            .finish()
    }
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let dim = first.rows();
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for k in &kraus {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::dims(format!("{dim}x{dim}"), format!("{}x{}", k.rows(), k.cols())));
            }
        }
        let gram = kraus
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, k| acc.add(&k.dagger().mul_unchecked(k)).expect("same shape"));
        let id = ComplexMatrix::identity(dim);
        let trace_preserving = gram.max_abs_diff(&id) <= tol::KRAUS;
        if !trace_preserving {
            let slack = id.sub(&gram)?;
            let herm = slack.add(&slack.dagger())?.scale_real(0.5);
            if !herm.is_psd_with_slack(tol::KRAUS) {
                let deviation = gram.max_abs_diff(&id);
                return Err(Error::TraceIncreasing { deviation });
            }
        }
        Ok(Self { dim, kraus, trace_preserving, ptm: OnceLock::new() })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![ComplexMatrix::identity(dim)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        if self.dim == 2 {
            1
        } else {
            2
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `sum_k K_k m K_k^dagger` on an arbitrary operator of matching size.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::dims(self.dim, m.rows()));
        }
        Ok(self.apply_matrix_unchecked(m))
    }

    pub(crate) fn apply_matrix_unchecked(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            let term = k.mul_unchecked(m).mul_unchecked(&k.dagger());
            out = out.add(&term).expect("same shape");
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.matrix())?;
        validate_density(out, false)
    }

    pub fn ptm(&self) -> &PauliTransferMatrix {
        self.ptm.get_or_init(|| compute_ptm(self))
    }
}

pub fn apply(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// `after` applied to the output of `before`; Kraus set `{A_i B_j}`.
pub fn compose(after: &QuantumChannel, before: &QuantumChannel) -> Result<QuantumChannel> {
    if after.dim != before.dim {
        return Err(Error::dims(after.dim, before.dim));
    }
    let kraus = after.kraus.iter().flat_map(|a| before.kraus.iter().map(move |b| a.mul_unchecked(b))).collect();
    QuantumChannel::new(kraus)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { value: p });
    }
    Ok(())
}

/// `rho -> p rho + (1 - p) Tr[rho] I / d` via the uniform Pauli-twirl Kraus set.
pub fn depolarizing(n: usize, p: f64) -> Result<QuantumChannel> {
    check_probability(p)?;
    let labels = PauliLabel::all(n)?;
    let d2 = (1usize << (2 * n)) as f64;
    let rest = ((1.0 - p) / d2).sqrt();
    let kraus = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let w = if i == 0 { (p + (1.0 - p) / d2).sqrt() } else { rest };
            pauli_matrix(l).scale_real(w)
        })
        .collect();
    QuantumChannel::new(kraus)
}

/// `rho -> p rho + (1 - p) X rho X` on one qubit.
pub fn bit_flip(p: f64) -> Result<QuantumChannel> {
    check_probability(p)?;
    let x: PauliLabel = "X".parse()?;
    QuantumChannel::new(vec![
        ComplexMatrix::identity(2).scale_real(p.sqrt()),
        pauli_matrix(&x).scale_real((1.0 - p).sqrt()),
    ])
}

/// `rho -> sum_k p_k U_k rho U_k^dagger`.
pub fn mixed_unitary(terms: &[(f64, ComplexMatrix)]) -> Result<QuantumChannel> {
    if terms.is_empty() {
        return Err(Error::EmptyKraus);
    }
    let mut sum = 0.0;
    for (p, u) in terms {
        if *p < 0.0 || !p.is_finite() {
            return Err(Error::ProbabilityOutOfRange { value: *p });
        }
        let deviation = u.unitarity_deviation();
        if deviation > tol::UNITARY {
            return Err(Error::NotUnitary { deviation });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tol::PROBABILITY {
        return Err(Error::ProbabilitySum { sum });
    }
    QuantumChannel::new(terms.iter().map(|(p, u)| u.scale_real(p.sqrt())).collect())
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    let deviation = u.unitarity_deviation();
    if deviation > tol::UNITARY {
        return Err(Error::NotUnitary { deviation });
    }
    QuantumChannel::new(vec![u.clone()])
}

fn normalized_basis(dim: usize) -> Vec<ComplexMatrix> {
    let n = if dim == 2 { 1 } else { 2 };
    let mut basis = vec![ComplexMatrix::identity(dim).scale_real(1.0 / (dim as f64).sqrt())];
    basis.extend(normalized_pauli_group(n).expect("dim is 2 or 4").members().iter().map(|(_, m)| m.clone()));
    basis
}

// Builds the row-major Liouville superoperator sum_k K (x) conj(K) and
// projects it onto the normalized Pauli basis: R_ij = <vec s_i, S vec s_j>.
fn compute_ptm(ch: &QuantumChannel) -> PauliTransferMatrix {
    let d = ch.dim;
    let d2 = d * d;
    let mut liouville = ComplexMatrix::zeros(d2, d2);
    for k in &ch.kraus {
        let conj = ComplexMatrix::new(d, d, k.entries().iter().map(|z| z.conj()).collect()).expect("finite");
        liouville = liouville.add(&k.kron(&conj)).expect("same shape");
    }
    let basis = normalized_basis(d);
    let images: Vec<Vec<C64>> = basis
        .iter()
        .map(|s| (0..d2).map(|row| (0..d2).map(|col| liouville[(row, col)] * s.entries()[col]).sum()).collect())
        .collect();
    let mut matrix = RealMatrix::zeros(d2, d2);
    for (i, si) in basis.iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            let v: C64 = si.entries().iter().zip(img).map(|(a, b)| a.conj() * *b).sum();
            matrix.set(i, j, v.re);
        }
    }
    PauliTransferMatrix { matrix }
}

pub fn to_ptm(ch: &QuantumChannel) -> PauliTransferMatrix {
    ch.ptm().clone()
}

/// `||E_u||_F^2 / (d^2 - 1)` from the unital block of the transfer matrix.
pub fn unitarity(ch: &QuantumChannel) -> f64 {
    let d2 = (ch.dim * ch.dim) as f64;
    ch.ptm().unital_block().frobenius_norm_sq() / (d2 - 1.0)
}

/// `(1 / (d^2 - 1)) sum_{sigma, tau} Tr[tau E(sigma)]^2` over the normalized
/// non-identity Paulis, evaluated through the channel action.
pub fn unitarity_pauli_sum(ch: &QuantumChannel) -> f64 {
    let set = normalized_pauli_group(ch.num_qubits()).expect("dim is 2 or 4");
    let mut sum = 0.0;
    for (_, sigma) in set.members() {
        let image = ch.apply_matrix_unchecked(sigma);
        for (_, tau) in set.members() {
            let t = tau.mul_unchecked(&image).trace().expect("square").re;
            sum += t * t;
        }
    }
    sum / set.len() as f64
}

pub fn unitarity_depolarizing_closed(_n: usize, p: f64) -> f64 {
    p * p
}

pub fn unitarity_bitflip_closed(p: f64) -> f64 {
    (8.0 * p * p - 8.0 * p + 3.0) / 3.0
}

/// `(d F_e + 1) / (d + 1)` with entanglement fidelity `F_e = Tr[R] / d^2`.
pub fn avg_gate_fidelity(ch: &QuantumChannel) -> Result<f64> {
    if !ch.trace_preserving {
        return Err(Error::NotTracePreserving);
    }
    let d = ch.dim as f64;
    let fe = ch.ptm().matrix().trace() / (d * d);
    Ok(((d * fe + 1.0) / (d + 1.0)).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityBound {
    pub holds: bool,
    /// `u - ((d F - 1) / (d - 1))^2`
    pub slack: f64,
}

pub fn fidelity_unitarity_bound_holds(ch: &QuantumChannel) -> Result<FidelityBound> {
    let f = avg_gate_fidelity(ch)?;
    let d = ch.dim as f64;
    let lhs = ((d * f - 1.0) / (d - 1.0)).powi(2);
    let slack = unitarity(ch) - lhs;
    Ok(FidelityBound { holds: slack >= -1e-12, slack })
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DiamondBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Diamond-distance bounds from the benchmarking decay `p_rb` and unitarity `u`.
pub fn diamond_bounds(p_rb: f64, u: f64, d: usize) -> Result<DiamondBounds> {
    let mut radicand = 1.0 - 2.0 * p_rb + u;
    if radicand < -1e-12 || !radicand.is_finite() {
        return Err(Error::NegativeRadicand { radicand });
    }
    radicand = radicand.max(0.0);
    let d = d as f64;
    let root = ((d * d - 1.0) * radicand).sqrt();
    Ok(DiamondBounds { lower: root / (2.0 * d), upper: d * root / 2.0 })
}

/// Phase-flip mixture, handy in examples and tests.
pub fn dephasing(p: f64) -> Result<QuantumChannel> {
    check_probability(p)?;
    let z = ComplexMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    mixed_unitary(&[(p, ComplexMatrix::identity(2)), (1.0 - p, z)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::PureState;

    fn x() -> ComplexMatrix {
        pauli_matrix(&"X".parse().unwrap())
    }

    fn h() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
    }

    fn ket0() -> DensityMatrix {
        PureState::basis(2, 0).unwrap().outer()
    }

    #[test]
    fn apply_examples() {
        let rho = PureState::normalized(vec![c(1.0, 0.0), c(0.3, 0.4)]).unwrap().outer();
        let id = QuantumChannel::identity(2).unwrap();
        assert!(id.apply(&rho).unwrap().matrix().approx_eq(rho.matrix(), 1e-15));

        let full = depolarizing(1, 0.0).unwrap();
        let out = full.apply(&ket0()).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[0.5, 0.5]), 1e-15));

        let bf = bit_flip(0.8).unwrap();
        let out = bf.apply(&ket0()).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[0.8, 0.2]), 1e-15));

        let two = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(bf.apply(&two), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let a = depolarizing(1, 0.7).unwrap();
        let b = depolarizing(1, 0.4).unwrap();
        let ab = compose(&a, &b).unwrap();
        assert!(ab.ptm().approx(depolarizing(1, 0.28).unwrap().ptm(), 1e-12));

        let id = QuantumChannel::identity(2).unwrap();
        let bf = bit_flip(0.9).unwrap();
        assert!(compose(&id, &bf).unwrap().ptm().approx(bf.ptm(), 1e-15));

        assert!(compose(&depolarizing(2, 0.5).unwrap(), &bf).is_err());
    }

    #[test]
    fn constructor_ranges() {
        assert!(matches!(depolarizing(1, 1.1), Err(Error::ProbabilityOutOfRange { .. })));
        assert!(matches!(bit_flip(-0.1), Err(Error::ProbabilityOutOfRange { .. })));
        assert!(matches!(
            mixed_unitary(&[(0.5, ComplexMatrix::identity(2)), (0.4, x())]),
            Err(Error::ProbabilitySum { .. })
        ));
        let not_unitary = ComplexMatrix::diag_real(&[1.0, 0.5]);
        assert!(matches!(mixed_unitary(&[(1.0, not_unitary.clone())]), Err(Error::NotUnitary { .. })));
        assert!(matches!(unitary_channel(&not_unitary), Err(Error::NotUnitary { .. })));
        let too_big = ComplexMatrix::identity(2).scale_real(1.1);
        assert!(matches!(QuantumChannel::new(vec![too_big]), Err(Error::TraceIncreasing { .. })));
        assert!(matches!(QuantumChannel::new(vec![]), Err(Error::EmptyKraus)));
    }

    #[test]
    fn trace_decreasing_channel_is_allowed() {
        let k = ComplexMatrix::diag_real(&[1.0, 0.5]);
        let ch = QuantumChannel::new(vec![k]).unwrap();
        assert!(!ch.is_trace_preserving());
        let plus = PureState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap().outer();
        let out = ch.apply(&plus).unwrap();
        assert!((out.trace() - 0.625).abs() < 1e-15);
        assert!(matches!(avg_gate_fidelity(&ch), Err(Error::NotTracePreserving)));
    }

    #[test]
    fn ptm_examples() {
        assert!(QuantumChannel::identity(4).unwrap().ptm().matrix().approx_eq(&RealMatrix::identity(16), 1e-15));
        assert!(depolarizing(1, 0.7)
            .unwrap()
            .ptm()
            .matrix()
            .approx_eq(&RealMatrix::diag(&[1.0, 0.7, 0.7, 0.7]), 1e-15));
        let p = 0.9;
        let bf = bit_flip(p).unwrap();
        assert!(bf.ptm().matrix().approx_eq(&RealMatrix::diag(&[1.0, 1.0, 2.0 * p - 1.0, 2.0 * p - 1.0]), 1e-15));
        assert!(bf.ptm().unital_block().approx_eq(&RealMatrix::diag(&[1.0, 0.8, 0.8]), 1e-12));
        assert!(depolarizing(1, 0.6).unwrap().ptm().unital_block().approx_eq(&RealMatrix::diag(&[0.6; 3]), 1e-15));
        assert!(unital_block(QuantumChannel::identity(2).unwrap().ptm()).approx_eq(&RealMatrix::identity(3), 1e-15));
    }

    #[test]
    fn ptm_row_zero_for_tp_channel() {
        let ch = compose(&bit_flip(0.3).unwrap(), &unitary_channel(&h()).unwrap()).unwrap();
        let ptm = ch.ptm();
        assert!((ptm.get(0, 0) - 1.0).abs() < 1e-12);
        for j in 1..4 {
            assert!(ptm.get(0, j).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_damping_has_non_unital_part() {
        let g: f64 = 0.3;
        let k0 = ComplexMatrix::diag_real(&[1.0, (1.0 - g).sqrt()]);
        let k1 = ComplexMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap();
        let ch = QuantumChannel::new(vec![k0, k1]).unwrap();
        assert!(ch.is_trace_preserving());
        let n = ch.ptm().non_unital_part();
        assert!((n[2] - g).abs() < 1e-12, "{n:?}");
        assert!((unitarity(&ch) - unitarity_pauli_sum(&ch)).abs() < 1e-12);
    }

    #[test]
    fn unitarity_examples() {
        assert!((unitarity(&unitary_channel(&h()).unwrap()) - 1.0).abs() < 1e-12);
        for n in 1..=2 {
            assert!((unitarity(&depolarizing(n, 0.7).unwrap()) - 0.49).abs() < 1e-12);
        }
        assert!((unitarity(&bit_flip(0.9).unwrap()) - 0.76).abs() < 1e-12);

        let dephase =
            mixed_unitary(&[(0.5, ComplexMatrix::identity(2)), (0.5, ComplexMatrix::diag_real(&[1.0, -1.0]))]).unwrap();
        assert!((unitarity(&dephase) - 1.0 / 3.0).abs() < 1e-12);

        let single = mixed_unitary(&[(1.0, h())]).unwrap();
        assert!((unitarity(&single) - 1.0).abs() < 1e-12);

        let mixed_bf = mixed_unitary(&[(0.8, ComplexMatrix::identity(2)), (0.2, x())]).unwrap();
        assert!(mixed_bf.ptm().approx(bit_flip(0.8).unwrap().ptm(), 1e-12));
    }

    #[test]
    fn closed_forms() {
        assert!((unitarity_depolarizing_closed(1, 0.9) - 0.81).abs() < 1e-15);
        assert_eq!(unitarity_depolarizing_closed(2, 1.0), 1.0);
        assert!((unitarity_depolarizing_closed(1, 0.6) - 0.36).abs() < 1e-15);
        assert_eq!(unitarity_bitflip_closed(1.0), 1.0);
        assert!((unitarity_bitflip_closed(0.5) - 1.0 / 3.0).abs() < 1e-15);
        assert!((unitarity_bitflip_closed(0.975) - 0.935).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        assert!((avg_gate_fidelity(&QuantumChannel::identity(2).unwrap()).unwrap() - 1.0).abs() < 1e-15);
        for p in [0.0, 0.3, 0.8, 1.0] {
            let f = avg_gate_fidelity(&depolarizing(1, p).unwrap()).unwrap();
            assert!((f - (p + (1.0 - p) / 2.0)).abs() < 1e-12);
        }
        for p in [0.0, 0.3, 0.8] {
            let b = fidelity_unitarity_bound_holds(&depolarizing(1, p).unwrap()).unwrap();
            assert!(b.holds && b.slack.abs() < 1e-12);
        }
        let u = fidelity_unitarity_bound_holds(&unitary_channel(&h()).unwrap()).unwrap();
        assert!(u.holds);
        let bf = fidelity_unitarity_bound_holds(&bit_flip(0.8).unwrap()).unwrap();
        assert!(bf.holds && bf.slack > 1e-3);
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond_bounds(1.0, 1.0, 2).unwrap(), DiamondBounds { lower: 0.0, upper: 0.0 });
        let b = diamond_bounds(0.9, 0.81, 2).unwrap();
        assert!((b.lower - 0.0433012701892219).abs() < 1e-12);
        assert!((b.upper - 0.1732050807568877).abs() < 1e-12);
        assert!((b.upper / b.lower - 4.0).abs() < 1e-12);
        assert!(diamond_bounds(0.5, 0.0 - 1e-13, 2).is_ok());
        assert!(matches!(diamond_bounds(1.0, 0.5, 2), Err(Error::NegativeRadicand { .. })));
    }

    #[test]
    fn unitary_channel_block_is_orthogonal() {
        let ch = unitary_channel(&h()).unwrap();
        assert!(ch.ptm().unital_block().orthogonality_deviation() < 1e-12);
        assert_eq!(unitary_channel(&ComplexMatrix::identity(2)).unwrap().kraus().len(), 1);
    }
}
