//! Pauli strings, the normalized non-identity Pauli set, eigenspace
//! decompositions used for state preparation, and the computational-basis
//! measurement rotations.
//!
//! Qubit 0 is the leftmost letter of a label and the most significant bit of a
//! computational basis index.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qmath::{c, ComplexMatrix, PureState, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let data = match self {
            PauliLetter::I => vec![l, o, o, l],
            PauliLetter::X => vec![o, l, l, o],
            PauliLetter::Y => vec![o, -i, i, o],
            PauliLetter::Z => vec![l, o, o, -l],
        };
        ComplexMatrix::new(2, 2, data).expect("2x2 literal")
    }

    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A Pauli string on one or two qubits, ordered lexicographically (I < X < Y < Z).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliLabel(Vec<PauliLetter>);

impl PauliLabel {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        match letters.len() {
            1 | 2 => Ok(Self(letters)),
            n => Err(Error::UnsupportedQubits(n)),
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![PauliLetter::I; n])
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.0
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|&l| matches!(l, PauliLetter::I | PauliLetter::Z))
    }

    /// All `4^n` labels in lexicographic order, identity first.
    pub fn all(n: usize) -> Result<Vec<PauliLabel>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<PauliLetter>| {
                    PauliLetter::ALL.iter().map(move |&l| {
                        let mut v = prefix.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(PauliLabel::new).collect()
    }

    pub fn non_identity(n: usize) -> Result<Vec<PauliLabel>> {
        Ok(Self::all(n)?.into_iter().skip(1).collect())
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                'I' => Ok(PauliLetter::I),
                'X' => Ok(PauliLetter::X),
                'Y' => Ok(PauliLetter::Y),
                'Z' => Ok(PauliLetter::Z),
                _ => Err(Error::InvalidLabel(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() || letters.len() > 2 {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        PauliLabel::new(letters)
    }
}

/// Unnormalized tensor product of single-qubit Pauli matrices.
pub fn pauli_matrix(label: &PauliLabel) -> ComplexMatrix {
    label.letters().iter().skip(1).fold(label.letters()[0].matrix(), |acc, l| acc.kron(&l.matrix()))
}

/// The non-identity Pauli matrices divided by `sqrt(d)`, which makes them
/// orthonormal under the Hilbert-Schmidt inner product.
#[derive(Clone, Debug)]
pub struct NormalizedPauliSet {
    n: usize,
    members: Vec<(PauliLabel, ComplexMatrix)>,
}

impl NormalizedPauliSet {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[(PauliLabel, ComplexMatrix)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn build_normalized(n: usize) -> NormalizedPauliSet {
    let scale = 1.0 / ((1usize << n) as f64).sqrt();
    let members = PauliLabel::non_identity(n)
        .expect("n is 1 or 2")
        .into_iter()
        .map(|label| {
            let m = pauli_matrix(&label).scale_real(scale);
            (label, m)
        })
        .collect();
    NormalizedPauliSet { n, members }
}

pub fn normalized_pauli_group(n: usize) -> Result<&'static NormalizedPauliSet> {
    static ONE: OnceLock<NormalizedPauliSet> = OnceLock::new();
    static TWO: OnceLock<NormalizedPauliSet> = OnceLock::new();
    match n {
        1 => Ok(ONE.get_or_init(|| build_normalized(1))),
        2 => Ok(TWO.get_or_init(|| build_normalized(2))),
        other => Err(Error::UnsupportedQubits(other)),
    }
}

/// Orthonormal pure states `v_k` with equal weights `2/d` whose mixture is
/// `(I + sign * P) / d`. Basis vectors come from modified Gram-Schmidt over the
/// columns of the projector `(I + sign * P) / 2`, scanned left to right.
pub fn eigenspace_pure_states(p: &PauliLabel, sign: i8) -> Result<Vec<(PureState, f64)>> {
    if p.is_identity() {
        return Err(Error::IdentityPauli);
    }
    let d = p.dim();
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    let projector = ComplexMatrix::identity(d).add(&pauli_matrix(p).scale_real(s))?.scale_real(0.5);

    let weight = 2.0 / d as f64;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(d / 2);
    for col in 0..d {
        let mut v: Vec<_> = (0..d).map(|r| projector[(r, col)]).collect();
        for b in &basis {
            let overlap: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
        if basis.len() == d / 2 {
            break;
        }
    }
    basis.into_iter().map(|v| Ok((PureState::normalized(v)?, weight))).collect()
}

/// The diagonal observable measured in place of `q` after the basis change.
///
/// Two-qubit labels follow a fixed table: `ZI` for {XI, XZ, YI, YZ}, `IZ` for
/// {IX, ZZ, IY, ZY}, `ZZ` for {XX, YY, XY, YX}. The remaining labels keep ZI
/// and IZ unchanged and send ZX to IZ, mirroring ZY.
pub fn z_tilde(q: &PauliLabel) -> Result<PauliLabel> {
    use PauliLetter::*;
    if q.is_identity() {
        return Err(Error::IdentityPauli);
    }
    let letters = match q.letters() {
        [_] => vec![Z],
        [a, b] => match (a, b) {
            (I, _) => vec![I, Z],
            (_, I) => vec![Z, I],
            (X | Y, Z) => vec![Z, I],
            (Z, _) => vec![I, Z],
            (X | Y, X | Y) => vec![Z, Z],
        },
        _ => unreachable!("labels hold one or two letters"),
    };
    PauliLabel::new(letters)
}

fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2 literal")
}

fn h_s_dagger() -> ComplexMatrix {
    let s_dag = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, -1.0)]);
    hadamard().mul_unchecked(&s_dag)
}

fn local_rotation(letter: PauliLetter) -> ComplexMatrix {
    match letter {
        PauliLetter::I | PauliLetter::Z => ComplexMatrix::identity(2),
        PauliLetter::X => hadamard(),
        PauliLetter::Y => h_s_dagger(),
    }
}

/// CNOT with `control` and `target` given as qubit indices (0 = leftmost).
pub(crate) fn cnot(control: usize, target: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for b in 0..4usize {
        let ctrl_bit = (b >> (1 - control)) & 1;
        let out = if ctrl_bit == 1 { b ^ (1 << (1 - target)) } else { b };
        m[(out, b)] = c(1.0, 0.0);
    }
    m
}

/// Unitary `U` with `U^dagger * z_tilde(q) * U = q`.
///
/// Built from per-letter rotations (I for I/Z, H for X, H S^dagger for Y),
/// followed by a CNOT that folds the parity onto one qubit when the table maps
/// a weight-two label to a single-qubit `Z`.
pub fn basis_change_unitary(q: &PauliLabel) -> Result<ComplexMatrix> {
    let target = z_tilde(q)?;
    let letters = q.letters();
    let local = letters.iter().skip(1).fold(local_rotation(letters[0]), |acc, &l| acc.kron(&local_rotation(l)));
    if letters.len() == 1 {
        return Ok(local);
    }
    // support pattern after the local rotation
    let pattern: Vec<PauliLetter> =
        letters.iter().map(|&l| if l == PauliLetter::I { PauliLetter::I } else { PauliLetter::Z }).collect();
    if pattern == target.letters() {
        return Ok(local);
    }
    // pattern is ZZ here; fold onto the qubit that the table keeps
    let fold = match target.letters() {
        [PauliLetter::Z, PauliLetter::I] => cnot(1, 0),
        [PauliLetter::I, PauliLetter::Z] => cnot(0, 1),
        _ => unreachable!("table only folds ZZ onto ZI or IZ"),
    };
    Ok(fold.mul_unchecked(&local))
}

/// Computational basis indices spanning the +1 eigenspace of a diagonal label.
pub fn positive_eigenspace_indices(z: &PauliLabel) -> Result<Vec<usize>> {
    if !z.is_diagonal() {
        return Err(Error::NotDiagonal(z.to_string()));
    }
    let n = z.num_qubits();
    let mask = z
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == PauliLetter::Z)
        .fold(0usize, |m, (q, _)| m | (1 << (n - 1 - q)));
    Ok((0..1usize << n).filter(|b| (b & mask).count_ones() % 2 == 0).collect())
}
