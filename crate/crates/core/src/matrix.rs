//! Dense complex matrices.
//!
//! Storage is row-major. All constructors reject non-finite entries, so every
//! `ComplexMatrix` in circulation holds finite values only.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    InvalidLength { expected: usize, found: usize },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("dimension {dim} does not factor as {m} blocks of size {n}")]
    BlockSize { dim: usize, m: usize, n: usize },
    #[error("block grid is malformed: {0}")]
    BadGrid(String),
}

/// Dense row-major matrix of `Complex64`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// On-disk layout: `{"rows": r, "cols": c, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = MatrixError;

    fn try_from(repr: MatrixRepr) -> Result<Self, Self::Error> {
        let data = repr
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(repr.rows, repr.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimension { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::InvalidLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(MatrixError::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real entries given in row-major order.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self, MatrixError> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(MatrixError::InvalidLength {
                expected: c,
                found: bad.len(),
            });
        }
        Self::new(r, c, rows.concat())
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    /// # Panics
    /// If `n` is zero.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Permutation matrix with a one at `(i, perm[i])` for every row `i`.
    ///
    /// Returns `None` if `perm` is empty or not a permutation of `0..perm.len()`.
    pub fn permutation(perm: &[usize]) -> Option<Self> {
        let n = perm.len();
        if n == 0 {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        let mut m = Self::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.data[i * n + p] = ONE;
        }
        Some(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn require_square(&self, op: &'static str) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<(), MatrixError> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(MatrixError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = self.transpose();
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.require_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.require_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &Self) -> Result<(), MatrixError> {
        self.require_same_shape(other, "add")?;
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, &b)| *a += b);
        Ok(())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Standard matrix product. Summation order is fixed (ascending inner
    /// index), so results are reproducible bit for bit.
    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, MatrixError> {
        if self.cols != v.len() {
            return Err(MatrixError::DimensionMismatch {
                op: "matvec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (&a, &x)| acc + a * x)
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`. The index of `self` is the slow
    /// one: entry `(i·p + k, j·q + l)` is `self[i][j] · other[k][l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = other.shape();
        let cols = self.cols * q;
        let mut out = Self::zeros(self.rows * p, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        let b = other.data[k * q + l];
                        // Zero factors leave a +0 entry rather than a signed zero.
                        if b != ZERO {
                            out.data[(i * p + k) * cols + j * q + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, MatrixError> {
        self.require_same_shape(other, "compare")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Shapes agree and the max-norm of the difference is within
    /// `abs_eps + rel_eps · max(‖self‖, ‖other‖)`.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        match self.max_abs_diff(other) {
            Ok(d) => d <= tol.abs_eps + tol.rel_eps * self.max_norm().max(other.max_norm()),
            Err(_) => false,
        }
    }

    /// Max-norm of `self† · self - I`.
    pub fn unitarity_residual(&self) -> Result<f64, MatrixError> {
        let n = self.require_square("is_unitary")?;
        let gram = self.adjoint().matmul(self)?;
        gram.max_abs_diff(&Self::identity(n))
    }

    pub fn is_unitary(&self, tol: Tolerance) -> Result<bool, MatrixError> {
        Ok(self.unitarity_residual()? <= tol.abs_eps)
    }

    /// True if every entry is exactly 0 or 1 with a single 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut col_seen = vec![false; n];
        for i in 0..n {
            let mut ones = 0;
            for j in 0..n {
                let z = self.data[i * n + j];
                if z == ONE {
                    if col_seen[j] {
                        return false;
                    }
                    col_seen[j] = true;
                    ones += 1;
                } else if z != ZERO {
                    return false;
                }
            }
            if ones != 1 {
                return false;
            }
        }
        true
    }

    /// Copies the `rows × cols` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            let src = &self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols];
            out.data[i * cols..(i + 1) * cols].copy_from_slice(src);
        }
        out
    }

    /// Splits a square `m·n` matrix into an `m × m` grid of `n × n` blocks.
    /// Block `(i, j)` covers rows `[i·n, (i+1)·n)` and columns `[j·n, (j+1)·n)`.
    pub fn block_partition(&self, m: usize, n: usize) -> Result<Vec<Vec<Self>>, MatrixError> {
        let dim = self.require_square("block_partition")?;
        if m == 0 || n == 0 || m * n != dim {
            return Err(MatrixError::BlockSize { dim, m, n });
        }
        Ok((0..m)
            .map(|i| (0..m).map(|j| self.submatrix(i * n, j * n, n, n)).collect())
            .collect())
    }

    /// Inverse of [`block_partition`](Self::block_partition): assembles a square
    /// grid of equally sized square blocks.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Result<Self, MatrixError> {
        let m = blocks.len();
        if m == 0 {
            return Err(MatrixError::BadGrid("empty grid".into()));
        }
        let n = blocks[0][0].rows;
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != m {
                return Err(MatrixError::BadGrid(format!(
                    "row {i} has {} blocks, expected {m}",
                    row.len()
                )));
            }
            for (j, b) in row.iter().enumerate() {
                if b.shape() != (n, n) {
                    return Err(MatrixError::BadGrid(format!(
                        "block ({i},{j}) is {}x{}, expected {n}x{n}",
                        b.rows, b.cols
                    )));
                }
            }
        }
        let dim = m * n;
        let mut out = Self::zeros(dim, dim);
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                for k in 0..n {
                    let dst = (bi * n + k) * dim + bj * n;
                    out.data[dst..dst + n].copy_from_slice(b.row(k));
                }
            }
        }
        Ok(out)
    }

    /// `self^t` by repeated squaring; `t = 0` gives the identity.
    pub fn matpow(&self, t: u64) -> Result<Self, MatrixError> {
        let n = self.require_square("matpow")?;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    /// Sum of all entries of each row.
    pub fn row_sums(&self) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Sum of all entries of each column.
    pub fn col_sums(&self) -> Vec<Complex64> {
        let mut sums = vec![ZERO; self.cols];
        for i in 0..self.rows {
            for (s, z) in sums.iter_mut().zip(self.row(i)) {
                *s += z;
            }
        }
        sums
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0])
            .unwrap()
            .scale(c(FRAC_1_SQRT_2))
    }

    fn swap2() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn swap4() -> ComplexMatrix {
        ComplexMatrix::permutation(&[0, 2, 1, 3]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(
            ComplexMatrix::new(2, 2, vec![ZERO; 3]),
            Err(MatrixError::InvalidLength {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            ComplexMatrix::new(1, 2, vec![ZERO, Complex64::new(f64::NAN, 0.0)]),
            Err(MatrixError::NonFinite { index: 1 })
        );
        assert!(matches!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(MatrixError::EmptyDimension { .. })
        ));
        assert!(ComplexMatrix::permutation(&[0, 0]).is_none());
    }

    #[test]
    fn matmul_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
        assert_eq!(swap2().matmul(&swap2()).unwrap(), i2);
        let h = hadamard();
        assert!(h.matmul(&h).unwrap().approx_eq(&i2, Tolerance::default()));
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&a),
            Err(MatrixError::DimensionMismatch { op: "matmul", .. })
        ));
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));

        // X ⊗ I exchanges the two halves of a length-4 vector.
        let x_i = swap2().kron(&i2);
        assert_eq!(x_i, ComplexMatrix::permutation(&[2, 3, 0, 1]).unwrap());

        let e0 = [c(1.0), c(0.0), c(0.0), c(0.0)];
        let v = hadamard().kron(&i2).matvec(&e0).unwrap();
        let expected = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        for (z, e) in v.iter().zip(expected) {
            assert!((z - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_shape() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 5);
        assert_eq!(a.kron(&b).shape(), (8, 15));
    }

    #[test]
    fn unitarity_examples() {
        let tol = Tolerance::default();
        assert!(ComplexMatrix::identity(4).is_unitary(tol).unwrap());
        let ones = ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        assert!(!ones.is_unitary(tol).unwrap());
        assert!(hadamard().is_unitary(tol).unwrap());
        assert!(matches!(
            ComplexMatrix::zeros(2, 3).is_unitary(tol),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn partition_identity() {
        let blocks = ComplexMatrix::identity(4).block_partition(2, 2).unwrap();
        let z = ComplexMatrix::zeros(2, 2);
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(blocks, vec![vec![i2.clone(), z.clone()], vec![z, i2]]);
    }

    #[test]
    fn partition_swap4() {
        // SWAP4 sends basis index 1 to 2, so S[1][2] = S[2][1] = 1; the
        // off-diagonal blocks pick up those entries at local (1,0) and (0,1).
        let blocks = swap4().block_partition(2, 2).unwrap();
        let m = |v: [f64; 4]| ComplexMatrix::from_real(2, 2, &v).unwrap();
        assert_eq!(blocks[0][0], m([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(blocks[0][1], m([0.0, 0.0, 1.0, 0.0]));
        assert_eq!(blocks[1][0], m([0.0, 1.0, 0.0, 0.0]));
        assert_eq!(blocks[1][1], m([0.0, 0.0, 0.0, 1.0]));
        assert_eq!(ComplexMatrix::from_blocks(&blocks).unwrap(), swap4());
    }

    #[test]
    fn partition_errors() {
        let a = ComplexMatrix::identity(6);
        assert_eq!(
            a.block_partition(4, 2),
            Err(MatrixError::BlockSize { dim: 6, m: 4, n: 2 })
        );
        assert!(a.block_partition(0, 6).is_err());
        assert!(ComplexMatrix::zeros(2, 3).block_partition(1, 2).is_err());
    }

    #[test]
    fn matpow_examples() {
        let h = hadamard();
        assert_eq!(h.matpow(0).unwrap(), ComplexMatrix::identity(2));
        assert!(h
            .matpow(2)
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(2), Tolerance::default()));
        let cyc = ComplexMatrix::permutation(&[1, 2, 3, 0]).unwrap();
        assert_eq!(cyc.matpow(4).unwrap(), ComplexMatrix::identity(4));
        assert_ne!(cyc.matpow(3).unwrap(), ComplexMatrix::identity(4));
        assert!(ComplexMatrix::zeros(1, 2).matpow(1).is_err());
    }

    #[test]
    fn permutation_predicate() {
        assert!(swap4().is_permutation());
        assert!(!hadamard().is_permutation());
        assert!(!ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0])
            .unwrap()
            .is_permutation());
    }

    #[test]
    fn json_layout() {
        let m = ComplexMatrix::new(1, 2, vec![c(1.0), Complex64::new(0.0, -0.5)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"entries":[[1.0,0.0],[0.0,-0.5]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"rows": 2, "cols": 2, "entries": [[1, 0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
