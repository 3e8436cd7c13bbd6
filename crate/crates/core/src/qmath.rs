//! Dense complex linear algebra for the small (at most 16x16) matrices used
//! throughout the crate, plus the validated state types built on it.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Numerical tolerances shared by operations and tests.
pub mod tol {
    /// Max entrywise |A - A^dagger| for a density matrix.
    pub const HERMITIAN: f64 = 1e-10;
    /// Slack on the smallest eigenvalue of a density matrix.
    pub const PSD: f64 = 1e-9;
    /// Slack on the trace of a density matrix.
    pub const TRACE: f64 = 1e-10;
    /// Euclidean norm slack for pure states.
    pub const NORM: f64 = 1e-12;
    /// Unitarity slack, `max |U^dagger U - I|`.
    pub const UNITARY: f64 = 1e-10;
    /// Slack on `sum K^dagger K <= I` and trace preservation.
    pub const KRAUS: f64 = 1e-10;
    /// Probability sums of mixtures.
    pub const PROBABILITY: f64 = 1e-10;
    /// Entries with modulus below this are treated as zero when fixing phases.
    pub const PHASE_PIVOT: f64 = 1e-8;
}

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for col in 0..self.cols {
                let z = self[(r, col)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + col]
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::ShapeMismatch { rows, cols, entries: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::default(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let v: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(self.shape(), other.shape()));
        }
        Ok(())
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for col in 0..self.cols {
                out[(col, r)] = self[(r, col)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(format!("{} rows", self.cols), format!("{} rows", other.rows)));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == C64::default() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self * inner * self^dagger`.
    pub fn conjugate(&self, inner: &Self) -> Result<Self> {
        if !inner.is_square() || self.cols != inner.rows {
            return Err(Error::dims(format!("{} square", self.cols), inner.shape()));
        }
        Ok(self.mul_unchecked(inner).mul_unchecked(&self.dagger()))
    }

    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::dims("square", self.shape()));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Hilbert-Schmidt inner product `Tr[a^dagger b]`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.dagger().mul_unchecked(self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Checks `self + slack * I` with a complex Cholesky factorization;
    /// succeeds iff every eigenvalue of a Hermitian `self` is above `-slack`.
    pub fn is_psd_with_slack(&self, slack: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut l = vec![C64::default(); n * n];
        for j in 0..n {
            let mut pivot = self[(j, j)].re + slack;
            for k in 0..j {
                pivot -= l[j * n + k].norm_sqr();
            }
            if pivot.is_nan() || pivot <= 0.0 {
                return false;
            }
            let d = pivot.sqrt();
            l[j * n + j] = c(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Normalized state vector on `d = 2^n` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::dims(format!("index < {dim}"), index));
        }
        let mut v = vec![C64::default(); dim];
        v[index] = c(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|s><s|` as a (trace one, rank one) density matrix.
    pub fn outer(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix { matrix: m }
    }
}

pub fn outer(s: &PureState) -> DensityMatrix {
    s.outer()
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// Hermitian, positive semidefinite, trace in `(0, 1]` (all within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }
}

/// Validates `m` against every [`DensityMatrix`] invariant. With
/// `trace_preserving` the trace must equal one; otherwise it may lie anywhere
/// in `(0, 1]`.
pub fn validate_density(m: ComplexMatrix, trace_preserving: bool) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::dims("square", m.shape()));
    }
    check_dim(m.rows())?;
    let deviation = m.hermiticity_deviation();
    if deviation > tol::HERMITIAN {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace()?.re;
    let trace_ok =
        if trace_preserving { (trace - 1.0).abs() <= tol::TRACE } else { trace > 0.0 && trace <= 1.0 + tol::TRACE };
    if !trace_ok {
        return Err(Error::TraceOutOfRange { trace });
    }
    // Hermitian part only; the anti-Hermitian residue is below tolerance.
    let herm = m.add(&m.dagger())?.scale_real(0.5);
    if !herm.is_psd_with_slack(tol::PSD) {
        return Err(Error::NotPositive);
    }
    Ok(DensityMatrix { matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn z() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let xx = kron(&x(), &x());
        let mut anti = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            anti[(i, 3 - i)] = c(1.0, 0.0);
        }
        assert_eq!(xx, anti);

        assert_eq!(kron(&z(), &i2), ComplexMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn inner_products() {
        assert_eq!(x().hs_inner(&x()).unwrap(), c(2.0, 0.0));
        assert_eq!(x().hs_inner(&z()).unwrap(), c(0.0, 0.0));
        let mixed = ComplexMatrix::diag_real(&[0.5, 0.5]);
        assert_eq!(z().mul(&mixed).unwrap().trace().unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(4);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.hs_inner(&b), Err(Error::DimensionMismatch { .. })));
        assert!(ComplexMatrix::zeros(2, 3).trace().is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let r = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite)));
        assert!(matches!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn outer_products() {
        let zero = PureState::basis(2, 0).unwrap();
        assert_eq!(*zero.outer().matrix(), ComplexMatrix::diag_real(&[1.0, 0.0]));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.5; 4]).unwrap();
        assert!(plus.outer().matrix().approx_eq(&expected, 1e-15));

        let bell = PureState::normalized(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rho = bell.outer();
        for i in 0..4 {
            for j in 0..4 {
                let corner = (i == 0 || i == 3) && (j == 0 || j == 3);
                let want = if corner { 0.5 } else { 0.0 };
                assert!((rho.matrix()[(i, j)] - c(want, 0.0)).norm() < 1e-15);
            }
        }
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validate_density_examples() {
        assert!(validate_density(ComplexMatrix::diag_real(&[0.5, 0.5]), true).is_ok());

        let bad_psd = ComplexMatrix::from_real(2, 2, &[0.5, 0.6, 0.6, 0.5]).unwrap();
        assert!(matches!(validate_density(bad_psd, true), Err(Error::NotPositive)));

        let bad_trace = ComplexMatrix::diag_real(&[0.7, 0.7]);
        assert!(matches!(validate_density(bad_trace, false), Err(Error::TraceOutOfRange { .. })));

        let mut non_herm = ComplexMatrix::diag_real(&[0.5, 0.5]);
        non_herm[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(validate_density(non_herm, true), Err(Error::NotHermitian { .. })));

        // trace-decreasing output is allowed when not trace preserving
        let sub = ComplexMatrix::diag_real(&[0.4, 0.4]);
        assert!(validate_density(sub.clone(), false).is_ok());
        assert!(validate_density(sub, true).is_err());

        assert!(matches!(validate_density(ComplexMatrix::identity(3), false), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn pure_state_rank_one_passes_psd() {
        let bell = PureState::normalized(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert!(validate_density(bell.outer().into_matrix(), true).is_ok());
    }
}
