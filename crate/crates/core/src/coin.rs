//! Coin operators and the evolution operator `U = S·𝒞`.
//!
//! A coin is either one `m × m` unitary applied at every vertex, giving
//! `C ⊗ Iₙ`, or one unitary per vertex, giving `𝒞 = Σₖ Cₖ ⊗ |vₖ⟩⟨vₖ|`. The
//! coin index is the slow axis throughout: basis state `|c⟩ ⊗ |v⟩` sits at
//! position `c·n + v`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{ComplexMatrix, MatrixError};
use crate::shift::ShiftOperator;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoinError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("coin {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error("coin {index} is {rows}x{cols}, expected {m}x{m}")]
    WrongSize {
        index: usize,
        rows: usize,
        cols: usize,
        m: usize,
    },
    #[error("{given} per-vertex coins for {n} vertices")]
    TooManyCoins { given: usize, n: usize },
    #[error("Hadamard coin needs a power-of-two dimension, got {0}")]
    NotPowerOfTwo(usize),
    #[error("coin and position dimensions must be positive (m={m}, n={n})")]
    EmptyDimension { m: usize, n: usize },
    #[error("unknown coin name {0:?}")]
    UnknownName(String),
    #[error("coin spec of kind {kind:?} is missing {field}")]
    MissingField { kind: String, field: &'static str },
    #[error("operator is {op}x{op} but the coin acts on dimension {coin}")]
    DimensionMismatch { op: usize, coin: usize },
    #[error("column index {j} out of range for coin dimension {m}")]
    ColumnOutOfRange { j: usize, m: usize },
    #[error("dimension {dim} is not divisible by coin dimension {m}")]
    Indivisible { dim: usize, m: usize },
}

/// Standard coins available by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedCoin {
    Identity,
    Hadamard,
    Grover,
    Dft,
}

impl FromStr for NamedCoin {
    type Err = CoinError;

    fn from_str(s: &str) -> Result<Self, CoinError> {
        match s.to_ascii_lowercase().as_str() {
            "identity" => Ok(Self::Identity),
            "hadamard" => Ok(Self::Hadamard),
            "grover" => Ok(Self::Grover),
            "dft" | "fourier" => Ok(Self::Dft),
            _ => Err(CoinError::UnknownName(s.to_owned())),
        }
    }
}

impl fmt::Display for NamedCoin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Identity => "identity",
            Self::Hadamard => "hadamard",
            Self::Grover => "grover",
            Self::Dft => "dft",
        })
    }
}

/// The `m × m` unitary for a named coin.
///
/// * identity: `I`
/// * hadamard: `H^{⊗k}` with `m = 2^k`
/// * grover: `(2/m)·J − I`
/// * dft: `ω^{jk}/√m` with `ω = e^{2πi/m}`
pub fn named_coin(name: NamedCoin, m: usize) -> Result<ComplexMatrix, CoinError> {
    if m == 0 {
        return Err(CoinError::EmptyDimension { m, n: 1 });
    }
    Ok(match name {
        NamedCoin::Identity => ComplexMatrix::identity(m),
        NamedCoin::Hadamard => {
            if !m.is_power_of_two() {
                return Err(CoinError::NotPowerOfTwo(m));
            }
            let h = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0])?
                .scale(Complex64::new(FRAC_1_SQRT_2, 0.0));
            let mut out = ComplexMatrix::identity(1);
            for _ in 0..m.trailing_zeros() {
                out = out.kron(&h);
            }
            out
        }
        NamedCoin::Grover => {
            let off = 2.0 / m as f64;
            let data: Vec<f64> = (0..m * m)
                .map(|k| if k / m == k % m { off - 1.0 } else { off })
                .collect();
            ComplexMatrix::from_real(m, m, &data)?
        }
        NamedCoin::Dft => {
            let norm = 1.0 / (m as f64).sqrt();
            let data = (0..m * m)
                .map(|k| {
                    // Reduce the exponent mod m to keep the phase argument small.
                    let e = ((k / m) * (k % m)) % m;
                    Complex64::from_polar(norm, 2.0 * PI * e as f64 / m as f64)
                })
                .collect();
            ComplexMatrix::new(m, m, data)?
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coins {
    Global(ComplexMatrix),
    /// One coin per vertex, `coins[k]` acting at vertex `k`.
    PerVertex(Vec<ComplexMatrix>),
}

/// Validated coin description for `m` coin states on `n` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec {
    m: usize,
    n: usize,
    coins: Coins,
}

fn check_coin(index: usize, c: &ComplexMatrix, m: usize, tol: Tolerance) -> Result<(), CoinError> {
    if c.shape() != (m, m) {
        return Err(CoinError::WrongSize {
            index,
            rows: c.rows(),
            cols: c.cols(),
            m,
        });
    }
    let residual = c.unitarity_residual()?;
    if residual > tol.abs_eps {
        return Err(CoinError::NotUnitary { index, residual });
    }
    Ok(())
}

impl CoinSpec {
    pub fn global(coin: ComplexMatrix, n: usize, tol: Tolerance) -> Result<Self, CoinError> {
        let m = coin.rows();
        if n == 0 {
            return Err(CoinError::EmptyDimension { m, n });
        }
        check_coin(0, &coin, m, tol)?;
        Ok(Self {
            m,
            n,
            coins: Coins::Global(coin),
        })
    }

    pub fn named(name: NamedCoin, m: usize, n: usize) -> Result<Self, CoinError> {
        Self::global(named_coin(name, m)?, n, Tolerance::default())
    }

    /// Per-vertex coins. Fewer than `n` coins is allowed; the remaining
    /// vertices get the identity.
    pub fn per_vertex(
        m: usize,
        n: usize,
        mut coins: Vec<ComplexMatrix>,
        tol: Tolerance,
    ) -> Result<Self, CoinError> {
        if m == 0 || n == 0 {
            return Err(CoinError::EmptyDimension { m, n });
        }
        if coins.len() > n {
            return Err(CoinError::TooManyCoins {
                given: coins.len(),
                n,
            });
        }
        for (k, c) in coins.iter().enumerate() {
            check_coin(k, c, m, tol)?;
        }
        coins.resize(n, ComplexMatrix::identity(m));
        Ok(Self {
            m,
            n,
            coins: Coins::PerVertex(coins),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coins(&self) -> &Coins {
        &self.coins
    }

    /// The coin acting at vertex `k`.
    pub fn coin_at(&self, k: usize) -> &ComplexMatrix {
        match &self.coins {
            Coins::Global(c) => c,
            Coins::PerVertex(cs) => &cs[k],
        }
    }
}

/// The `nm × nm` coin operator. A global coin gives `C ⊗ Iₙ`; per-vertex
/// coins give blocks `D_ij = diag(c⁰ᵢⱼ, …, cⁿ⁻¹ᵢⱼ)`.
pub fn coin_matrix(spec: &CoinSpec) -> ComplexMatrix {
    let (m, n) = (spec.m, spec.n);
    match &spec.coins {
        Coins::Global(c) => c.kron(&ComplexMatrix::identity(n)),
        Coins::PerVertex(cs) => {
            let mut out = ComplexMatrix::zeros(m * n, m * n);
            for (k, c) in cs.iter().enumerate() {
                for i in 0..m {
                    for j in 0..m {
                        out[(i * n + k, j * n + k)] = c[(i, j)];
                    }
                }
            }
            out
        }
    }
}

/// `U = S · 𝒞`.
pub fn evolution(shift: &ShiftOperator, spec: &CoinSpec) -> Result<ComplexMatrix, CoinError> {
    evolution_from_matrix(shift.matrix(), spec)
}

/// `U = S · 𝒞` for a shift operator given as a bare matrix.
pub fn evolution_from_matrix(
    shift: &ComplexMatrix,
    spec: &CoinSpec,
) -> Result<ComplexMatrix, CoinError> {
    let dim = spec.m * spec.n;
    if !shift.is_square() || shift.rows() != dim {
        return Err(CoinError::DimensionMismatch {
            op: shift.rows(),
            coin: dim,
        });
    }
    Ok(shift.matmul(&coin_matrix(spec))?)
}

/// Sum of the blocks in block column `j` of `u` (partitioned with coin
/// dimension `m`): the transposed adjacency matrix followed by walkers whose
/// coin state is `|cⱼ⟩`.
pub fn column_adjacency(u: &ComplexMatrix, m: usize, j: usize) -> Result<ComplexMatrix, CoinError> {
    if !u.is_square() {
        return Err(MatrixError::NotSquare {
            op: "column_adjacency",
            rows: u.rows(),
            cols: u.cols(),
        }
        .into());
    }
    let dim = u.rows();
    if m == 0 || !dim.is_multiple_of(m) {
        return Err(CoinError::Indivisible { dim, m });
    }
    if j >= m {
        return Err(CoinError::ColumnOutOfRange { j, m });
    }
    let n = dim / m;
    let mut acc = ComplexMatrix::zeros(n, n);
    for i in 0..m {
        acc.add_assign(&u.submatrix(i * n, j * n, n, n))?;
    }
    Ok(acc)
}

/// File layout:
/// `{"m", "n", "kind": "global"|"per_vertex"|"named", "name", "matrices"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoinFile {
    pub m: usize,
    pub n: usize,
    pub kind: CoinKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub matrices: Option<Vec<ComplexMatrix>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoinKind {
    Global,
    PerVertex,
    Named,
}

impl CoinFile {
    pub fn into_spec(self, tol: Tolerance) -> Result<CoinSpec, CoinError> {
        let missing = |field| CoinError::MissingField {
            kind: format!("{:?}", self.kind),
            field,
        };
        let spec = match self.kind {
            CoinKind::Named => {
                let name: NamedCoin = self
                    .name
                    .as_deref()
                    .ok_or_else(|| missing("name"))?
                    .parse()?;
                CoinSpec::global(named_coin(name, self.m)?, self.n, tol)?
            }
            CoinKind::Global => {
                let c = self
                    .matrices
                    .as_ref()
                    .and_then(|v| v.first())
                    .ok_or_else(|| missing("matrices"))?;
                check_coin(0, c, self.m, tol)?;
                CoinSpec::global(c.clone(), self.n, tol)?
            }
            CoinKind::PerVertex => {
                let cs = self.matrices.clone().ok_or_else(|| missing("matrices"))?;
                CoinSpec::per_vertex(self.m, self.n, cs, tol)?
            }
        };
        Ok(spec)
    }

    pub fn from_spec(spec: &CoinSpec) -> Self {
        let (kind, matrices) = match &spec.coins {
            Coins::Global(c) => (CoinKind::Global, vec![c.clone()]),
            Coins::PerVertex(cs) => (CoinKind::PerVertex, cs.clone()),
        };
        Self {
            m: spec.m,
            n: spec.n,
            kind,
            name: None,
            matrices: Some(matrices),
        }
    }
}
