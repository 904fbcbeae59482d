//! Shift operators as block matrices of Kraus operators.
//!
//! A shift operator on `m` coin states and `n` vertices is an `nm × nm`
//! unitary `S = Σᵢⱼ |cᵢ⟩⟨cⱼ| ⊗ Bᵀᵢⱼ`. The blocks `Bᵀᵢⱼ` are stored exactly
//! as they sit inside `S`; the graph-side matrices `Bᵢⱼ` (and the adjacency
//! matrix `A = Σᵢⱼ Bᵢⱼ`) only appear after transposing at the graph boundary.
//!
//! `S` is unitary exactly when the blocks of every block column and every
//! block row form complete Kraus sets:
//!
//! * columns: `Σᵢ (Bᵀᵢⱼ)† Bᵀᵢₖ = δⱼₖ I`   (`S†S = I`)
//! * rows:    `Σᵢ Bᵀⱼᵢ (Bᵀₖᵢ)† = δⱼₖ I`   (`SS† = I`)

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Arc, MultiGraph};
use crate::matching::perfect_matching;
use crate::matrix::{ComplexMatrix, MatrixError};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("entry ({row},{col}) = {value} is not a nonnegative integer")]
    NotNonnegativeInteger {
        row: usize,
        col: usize,
        value: Complex64,
    },
    #[error("matrix is not regular: row sums {row_sums:?}, column sums {col_sums:?}")]
    NotRegular {
        row_sums: Vec<f64>,
        col_sums: Vec<f64>,
    },
    #[error("no perfect matching found after {extracted} permutations (internal error)")]
    MatchingFailed { extracted: usize },
    #[error("grid has position dimension {grid}, adjacency has {adjacency}")]
    DimensionMismatch { grid: usize, adjacency: usize },
    #[error("Kraus completeness violated (column residual {column:e}, row residual {row:e})")]
    Incomplete { column: f64, row: f64 },
    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("dimension {dim} is not divisible by coin dimension {m}")]
    Indivisible { dim: usize, m: usize },
}

/// `m × m` grid of `n × n` blocks `Bᵀᵢⱼ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct KrausGrid {
    m: usize,
    n: usize,
    blocks: Vec<Vec<ComplexMatrix>>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    m: usize,
    n: usize,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl TryFrom<GridRepr> for KrausGrid {
    type Error = ShiftError;

    fn try_from(r: GridRepr) -> Result<Self, ShiftError> {
        let grid = KrausGrid::new(r.blocks)?;
        if (grid.m, grid.n) != (r.m, r.n) {
            return Err(MatrixError::BadGrid(format!(
                "header says m={}, n={} but blocks form m={}, n={}",
                r.m, r.n, grid.m, grid.n
            ))
            .into());
        }
        Ok(grid)
    }
}

impl From<KrausGrid> for GridRepr {
    fn from(g: KrausGrid) -> Self {
        GridRepr {
            m: g.m,
            n: g.n,
            blocks: g.blocks,
        }
    }
}

impl KrausGrid {
    /// Validates that `blocks` is a square grid of equally sized square blocks.
    pub fn new(blocks: Vec<Vec<ComplexMatrix>>) -> Result<Self, ShiftError> {
        let m = blocks.len();
        if m == 0 || blocks[0].is_empty() {
            return Err(MatrixError::BadGrid("empty grid".into()).into());
        }
        let n = blocks[0][0].rows();
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != m {
                return Err(MatrixError::BadGrid(format!(
                    "row {i} has {} blocks, expected {m}",
                    row.len()
                ))
                .into());
            }
            if let Some((j, b)) = row.iter().enumerate().find(|(_, b)| b.shape() != (n, n)) {
                return Err(MatrixError::BadGrid(format!(
                    "block ({i},{j}) is {}x{}, expected {n}x{n}",
                    b.rows(),
                    b.cols()
                ))
                .into());
            }
        }
        Ok(Self { m, n, blocks })
    }

    /// Block-diagonal grid with the given blocks on the diagonal and zeros
    /// elsewhere.
    pub fn diagonal(diag: Vec<ComplexMatrix>) -> Result<Self, ShiftError> {
        let m = diag.len();
        let n = diag.first().map_or(0, ComplexMatrix::rows);
        if n == 0 {
            return Err(MatrixError::BadGrid("empty grid".into()).into());
        }
        let mut diag = diag.into_iter();
        let blocks = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            diag.next().expect("one block per diagonal slot")
                        } else {
                            ComplexMatrix::zeros(n, n)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(blocks)
    }

    /// Partitions a square matrix whose dimension is divisible by `m`.
    pub fn from_matrix(u: &ComplexMatrix, m: usize) -> Result<Self, ShiftError> {
        if !u.is_square() {
            return Err(MatrixError::NotSquare {
                op: "partition",
                rows: u.rows(),
                cols: u.cols(),
            }
            .into());
        }
        let dim = u.rows();
        if m == 0 || !dim.is_multiple_of(m) {
            return Err(ShiftError::Indivisible { dim, m });
        }
        Ok(Self {
            m,
            n: dim / m,
            blocks: u.block_partition(m, dim / m)?,
        })
    }

    /// Coin dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Position dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i][j]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut ComplexMatrix {
        &mut self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<ComplexMatrix>] {
        &self.blocks
    }

    /// The `nm × nm` block matrix, with no unitarity check.
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.blocks).expect("grid shape validated at construction")
    }

    /// `Σᵢⱼ Bᵀᵢⱼ`, the transposed adjacency matrix encoded by the grid.
    pub fn block_sum(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.n, self.n);
        for b in self.blocks.iter().flatten() {
            sum.add_assign(b).expect("uniform block size");
        }
        sum
    }

    /// Max-norm over all `(j, k)` of `Σᵢ (Bᵀᵢⱼ)† Bᵀᵢₖ − δⱼₖ I`.
    pub fn column_residual(&self) -> f64 {
        self.completeness_residual(|i, j| &self.blocks[i][j], true)
    }

    /// Max-norm over all `(j, k)` of `Σᵢ Bᵀⱼᵢ (Bᵀₖᵢ)† − δⱼₖ I`.
    pub fn row_residual(&self) -> f64 {
        self.completeness_residual(|i, j| &self.blocks[j][i], false)
    }

    fn completeness_residual<'a>(
        &'a self,
        pick: impl Fn(usize, usize) -> &'a ComplexMatrix,
        adjoint_left: bool,
    ) -> f64 {
        let eye = ComplexMatrix::identity(self.n);
        let mut worst: f64 = 0.0;
        for j in 0..self.m {
            for k in 0..self.m {
                let mut acc = ComplexMatrix::zeros(self.n, self.n);
                for i in 0..self.m {
                    let (a, b) = (pick(i, j), pick(i, k));
                    let term = if adjoint_left {
                        a.adjoint().matmul(b)
                    } else {
                        a.matmul(&b.adjoint())
                    };
                    acc.add_assign(&term.expect("uniform block size"))
                        .expect("uniform block size");
                }
                let target = if j == k {
                    eye.clone()
                } else {
                    ComplexMatrix::zeros(self.n, self.n)
                };
                worst = worst.max(acc.max_abs_diff(&target).expect("uniform block size"));
            }
        }
        worst
    }

    /// Multigraph encoded by the grid: for every block `(i, j)` and every
    /// entry of `Bᵢⱼ = (Bᵀᵢⱼ)ᵀ` with modulus at least `tol.abs_eps`, an arc
    /// `r → c` tagged with coin `j`. Arcs are emitted block by block in
    /// row-major grid order.
    pub fn to_graph(&self, tol: Tolerance) -> MultiGraph {
        let mut g = MultiGraph::new(self.n).expect("n >= 1");
        for row in &self.blocks {
            for (j, bt) in row.iter().enumerate() {
                // (Bᵀ)[c][r] is B[r][c]: the arc r → c.
                for c in 0..self.n {
                    for r in 0..self.n {
                        let w = bt[(c, r)];
                        if w.norm() >= tol.abs_eps && w.norm() > 0.0 {
                            g.add_arc(Arc::new(r, c, w).with_coin(j))
                                .expect("indices in range, weight nonzero");
                        }
                    }
                }
            }
        }
        g
    }
}

/// Outcome of one completeness or sum condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub passed: bool,
    pub residual: f64,
}

impl Condition {
    fn new(residual: f64, tol: Tolerance) -> Self {
        Self {
            passed: residual <= tol.abs_eps,
            residual,
        }
    }
}

/// Result of checking a grid against the shift-operator conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausReport {
    /// `Σᵢⱼ Bᵀᵢⱼ == Aᵀ`; absent when no adjacency matrix was given.
    pub sum: Option<Condition>,
    pub column: Condition,
    pub row: Condition,
}

impl KrausReport {
    pub fn passed(&self) -> bool {
        self.sum.is_none_or(|c| c.passed) && self.column.passed && self.row.passed
    }

    pub fn complete(&self) -> bool {
        self.column.passed && self.row.passed
    }
}

/// Checks the two completeness relations only.
pub fn verify_completeness(grid: &KrausGrid, tol: Tolerance) -> KrausReport {
    KrausReport {
        sum: None,
        column: Condition::new(grid.column_residual(), tol),
        row: Condition::new(grid.row_residual(), tol),
    }
}

/// Checks that `grid` decomposes the transpose of the adjacency matrix
/// `adjacency` and that both completeness relations hold.
pub fn verify_kraus(
    adjacency: &ComplexMatrix,
    grid: &KrausGrid,
    tol: Tolerance,
) -> Result<KrausReport, ShiftError> {
    if adjacency.shape() != (grid.n, grid.n) {
        return Err(ShiftError::DimensionMismatch {
            grid: grid.n,
            adjacency: adjacency.rows(),
        });
    }
    let residual = grid.block_sum().max_abs_diff(&adjacency.transpose())?;
    Ok(KrausReport {
        sum: Some(Condition::new(residual, tol)),
        ..verify_completeness(grid, tol)
    })
}

/// Validated shift operator: the grid together with its assembled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator {
    grid: KrausGrid,
    matrix: ComplexMatrix,
}

impl ShiftOperator {
    pub fn grid(&self) -> &KrausGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn m(&self) -> usize {
        self.grid.m
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }
}

/// Assembles `S` from a grid, refusing grids that violate either
/// completeness relation.
pub fn assemble_shift(grid: KrausGrid, tol: Tolerance) -> Result<ShiftOperator, ShiftError> {
    let report = verify_completeness(&grid, tol);
    if !report.complete() {
        return Err(ShiftError::Incomplete {
            column: report.column.residual,
            row: report.row.residual,
        });
    }
    let matrix = grid.to_matrix();
    Ok(ShiftOperator { grid, matrix })
}

/// Wraps an already unitary matrix as a shift operator with coin dimension `m`.
pub fn shift_from_unitary(
    u: &ComplexMatrix,
    m: usize,
    tol: Tolerance,
) -> Result<ShiftOperator, ShiftError> {
    let grid = KrausGrid::from_matrix(u, m)?;
    let residual = u.unitarity_residual()?;
    if residual > tol.abs_eps {
        return Err(ShiftError::NotUnitary { residual });
    }
    Ok(ShiftOperator {
        grid,
        matrix: u.clone(),
    })
}

/// Checks that `a` is a square nonnegative-integer matrix with all row and
/// column sums equal to some `d ≥ 1`, returning `d` and the integer counts.
fn regular_counts(a: &ComplexMatrix) -> Result<(usize, Vec<Vec<u64>>), ShiftError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            op: "decompose_permutations",
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.rows();
    let mut counts = vec![vec![0u64; n]; n];
    for (i, row) in counts.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let z = a[(i, j)];
            if z.im != 0.0 || z.re < 0.0 || z.re.fract() != 0.0 || z.re > u32::MAX as f64 {
                return Err(ShiftError::NotNonnegativeInteger {
                    row: i,
                    col: j,
                    value: z,
                });
            }
            *cell = z.re as u64;
        }
    }
    let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..n).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
    let d = row_sums[0];
    if d == 0 || row_sums.iter().chain(&col_sums).any(|&s| s != d) {
        return Err(ShiftError::NotRegular {
            row_sums: row_sums.iter().map(|&s| s as f64).collect(),
            col_sums: col_sums.iter().map(|&s| s as f64).collect(),
        });
    }
    Ok((d as usize, counts))
}

/// Writes a regular nonnegative-integer matrix as a sum of `d` permutation
/// matrices. Each permutation is returned as `row → column`.
///
/// Matchings are extracted one at a time from the support of the remaining
/// counts; after each extraction the remainder is still regular, so a perfect
/// matching always exists.
pub fn permutation_decomposition(a: &ComplexMatrix) -> Result<Vec<Vec<usize>>, ShiftError> {
    let (d, mut counts) = regular_counts(a)?;
    let n = counts.len();
    let mut perms = Vec::with_capacity(d);
    for extracted in 0..d {
        let adj: Vec<Vec<usize>> = counts
            .iter()
            .map(|row| (0..n).filter(|&j| row[j] > 0).collect())
            .collect();
        let perm = perfect_matching(&adj, n).ok_or(ShiftError::MatchingFailed { extracted })?;
        for (i, &j) in perm.iter().enumerate() {
            counts[i][j] -= 1;
        }
        perms.push(perm);
    }
    Ok(perms)
}

/// Block-diagonal Kraus grid for a regular nonnegative-integer adjacency
/// matrix `a`: block `i` is the transpose of the `i`th permutation in
/// [`permutation_decomposition`], so the blocks sum to `aᵀ` and `m` equals
/// the common degree.
pub fn decompose_permutations(a: &ComplexMatrix) -> Result<KrausGrid, ShiftError> {
    let perms = permutation_decomposition(a)?;
    let diag = perms
        .iter()
        .map(|p| {
            ComplexMatrix::permutation(p)
                .expect("matching is a permutation")
                .transpose()
        })
        .collect();
    KrausGrid::diagonal(diag)
}

/// Reads a bipartite unitary as a shift operator with coin dimension `m`
/// and returns its Kraus grid together with the multigraph it encodes.
pub fn extract_graph(
    u: &ComplexMatrix,
    m: usize,
    tol: Tolerance,
) -> Result<(KrausGrid, MultiGraph), ShiftError> {
    let shift = shift_from_unitary(u, m, tol)?;
    let graph = shift.grid.to_graph(tol);
    Ok((shift.grid, graph))
}

/// [`extract_graph`] for every coin dimension dividing the size of `u`, in
/// ascending order of `m`.
pub fn extract_all_partitions(
    u: &ComplexMatrix,
    tol: Tolerance,
) -> Result<Vec<(KrausGrid, MultiGraph)>, ShiftError> {
    let residual = u.unitarity_residual()?;
    if residual > tol.abs_eps {
        return Err(ShiftError::NotUnitary { residual });
    }
    let dim = u.rows();
    (1..=dim)
        .filter(|m| dim.is_multiple_of(*m))
        .map(|m| {
            let grid = KrausGrid::from_matrix(u, m)?;
            let graph = grid.to_graph(tol);
            Ok((grid, graph))
        })
        .collect()
}
