//! Quantum walk simulation and the classical random-walk baseline.
//!
//! Walker amplitudes are stored coin-major: the amplitude of `|c⟩ ⊗ |v⟩`
//! lives at index `c·n + v`, so the state is `m` stacked position subvectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{ComplexMatrix, MatrixError};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("dimensions must be positive (m={m}, n={n})")]
    EmptyDimension { m: usize, n: usize },
    #[error("expected {expected} amplitudes, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("state norm² is {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude {0} is not finite")]
    NonFinite(usize),
    #[error("basis index out of range: coin {coin} < {m}, vertex {vertex} < {n} required")]
    IndexOutOfRange {
        coin: usize,
        vertex: usize,
        m: usize,
        n: usize,
    },
    #[error("operator is {rows}x{cols} but the state has dimension {dim}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("probabilities sum to {sum}, expected 1")]
    BadProbabilitySum { sum: f64 },
    #[error("probability {index} is {value}, expected a finite value >= 0")]
    BadProbability { index: usize, value: f64 },
    #[error("adjacency entry ({row},{col}) = {value} is not a nonnegative real")]
    NotStochastic {
        row: usize,
        col: usize,
        value: Complex64,
    },
    #[error("vertex {0} has zero out-degree")]
    ZeroRow(usize),
}

/// Normalised pure state of a walker on `m` coin states and `n` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    m: usize,
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkerState {
    /// Validates length and normalisation. States off by more than
    /// `tol.abs_eps` in squared norm are rejected, never rescaled.
    pub fn new(
        m: usize,
        n: usize,
        amplitudes: Vec<Complex64>,
        tol: Tolerance,
    ) -> Result<Self, WalkError> {
        if m == 0 || n == 0 {
            return Err(WalkError::EmptyDimension { m, n });
        }
        if amplitudes.len() != m * n {
            return Err(WalkError::WrongLength {
                expected: m * n,
                found: amplitudes.len(),
            });
        }
        if let Some(i) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(WalkError::NonFinite(i));
        }
        let state = Self { m, n, amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > tol.abs_eps {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// `|c_coin⟩ ⊗ |v_vertex⟩`.
    pub fn basis(m: usize, n: usize, coin: usize, vertex: usize) -> Result<Self, WalkError> {
        if m == 0 || n == 0 {
            return Err(WalkError::EmptyDimension { m, n });
        }
        if coin >= m || vertex >= n {
            return Err(WalkError::IndexOutOfRange { coin, vertex, m, n });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); m * n];
        amplitudes[coin * n + vertex] = Complex64::new(1.0, 0.0);
        Ok(Self { m, n, amplitudes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, coin: usize, vertex: usize) -> Complex64 {
        self.amplitudes[coin * self.n + vertex]
    }

    /// Position amplitudes for coin state `coin`.
    pub fn subvector(&self, coin: usize) -> &[Complex64] {
        &self.amplitudes[coin * self.n..(coin + 1) * self.n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        Self {
            m: self.m,
            n: self.n,
            amplitudes,
        }
    }
}

/// Vertex occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>, tol: Tolerance) -> Result<Self, WalkError> {
        if probs.is_empty() {
            return Err(WalkError::EmptyDimension { m: 1, n: 0 });
        }
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(WalkError::BadProbability { index, value });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol.abs_eps {
            return Err(WalkError::BadProbabilitySum { sum });
        }
        Ok(Self { probs })
    }

    /// All mass on vertex `k`.
    pub fn basis(n: usize, k: usize) -> Result<Self, WalkError> {
        if k >= n {
            return Err(WalkError::IndexOutOfRange {
                coin: 0,
                vertex: k,
                m: 1,
                n,
            });
        }
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        Ok(Self { probs })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Entries nonnegative and summing to one within `tol.abs_eps`.
    pub fn is_valid(&self, tol: Tolerance) -> bool {
        self.probs.iter().all(|&p| p >= 0.0) && (self.total() - 1.0).abs() <= tol.abs_eps
    }
}

fn check_operator(u: &ComplexMatrix, dim: usize) -> Result<(), WalkError> {
    if u.shape() != (dim, dim) {
        return Err(WalkError::DimensionMismatch {
            rows: u.rows(),
            cols: u.cols(),
            dim,
        });
    }
    Ok(())
}

/// One application of the evolution operator. `u` is assumed unitary.
pub fn step(u: &ComplexMatrix, s: &WalkerState) -> Result<WalkerState, WalkError> {
    check_operator(u, s.dim())?;
    Ok(s.with_amplitudes(u.matvec(&s.amplitudes)?))
}

/// `t` successive steps.
pub fn evolve(u: &ComplexMatrix, s0: &WalkerState, t: usize) -> Result<WalkerState, WalkError> {
    check_operator(u, s0.dim())?;
    let mut s = s0.clone();
    for _ in 0..t {
        s = step(u, &s)?;
    }
    Ok(s)
}

/// States after `0, 1, …, t` steps.
pub fn evolve_trajectory(
    u: &ComplexMatrix,
    s0: &WalkerState,
    t: usize,
) -> Result<Vec<WalkerState>, WalkError> {
    check_operator(u, s0.dim())?;
    let mut states = Vec::with_capacity(t + 1);
    states.push(s0.clone());
    for k in 0..t {
        let next = step(u, &states[k])?;
        states.push(next);
    }
    Ok(states)
}

/// `Uᵗ |ψ₀⟩` through the matrix power.
pub fn evolve_by_power(
    u: &ComplexMatrix,
    s0: &WalkerState,
    t: u64,
) -> Result<WalkerState, WalkError> {
    check_operator(u, s0.dim())?;
    Ok(s0.with_amplitudes(u.matpow(t)?.matvec(&s0.amplitudes)?))
}

/// Probability of finding the walker at each vertex, whatever its coin:
/// `P(v_k) = ⟨ψ| (I ⊗ |v_k⟩⟨v_k|) |ψ⟩ = Σ_c |ψ(c, k)|²`.
pub fn measure_position(s: &WalkerState) -> ProbabilityVector {
    let mut probs = vec![0.0; s.n];
    for coin in 0..s.m {
        for (p, z) in probs.iter_mut().zip(s.subvector(coin)) {
            *p += z.norm_sqr();
        }
    }
    ProbabilityVector { probs }
}

/// Row-stochastic transition matrix `M = D⁻¹A` of the random walk on the
/// graph with adjacency `a`, where `D` holds the out-degrees (row sums).
/// The walk itself advances with `Mᵀ`.
pub fn classical_transition(a: &ComplexMatrix) -> Result<ComplexMatrix, WalkError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            op: "classical_transition",
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            if z.im != 0.0 || z.re < 0.0 {
                return Err(WalkError::NotStochastic {
                    row: i,
                    col: j,
                    value: z,
                });
            }
        }
        let degree: f64 = a.row(i).iter().map(|z| z.re).sum();
        if degree == 0.0 {
            return Err(WalkError::ZeroRow(i));
        }
        for j in 0..n {
            m[(i, j)] = Complex64::new(a[(i, j)].re / degree, 0.0);
        }
    }
    Ok(m)
}

/// `P_{t+1} = Mᵀ P_t` for a transition matrix `m`.
pub fn classical_step(
    m: &ComplexMatrix,
    p: &ProbabilityVector,
) -> Result<ProbabilityVector, WalkError> {
    check_operator(m, p.n())?;
    let n = p.n();
    let mut next = vec![0.0; n];
    for i in 0..n {
        let pi = p.probs[i];
        if pi == 0.0 {
            continue;
        }
        for (j, q) in next.iter_mut().enumerate() {
            *q += m[(i, j)].re * pi;
        }
    }
    Ok(ProbabilityVector { probs: next })
}

/// Distributions after `0, 1, …, t` steps of the random walk on `a`.
pub fn classical_trajectory(
    a: &ComplexMatrix,
    p0: &ProbabilityVector,
    t: usize,
) -> Result<Vec<ProbabilityVector>, WalkError> {
    let m = classical_transition(a)?;
    check_operator(&m, p0.n())?;
    let mut out = Vec::with_capacity(t + 1);
    out.push(p0.clone());
    for k in 0..t {
        let next = classical_step(&m, &out[k])?;
        out.push(next);
    }
    Ok(out)
}

/// `t` steps of the update rule `P_{t+1} = Mᵀ P_t`.
pub fn classical_walk(
    a: &ComplexMatrix,
    p0: &ProbabilityVector,
    t: usize,
) -> Result<ProbabilityVector, WalkError> {
    Ok(classical_trajectory(a, p0, t)?
        .pop()
        .expect("trajectory holds t + 1 entries"))
}

/// `(Mᵀ)ᵗ P₀` through the matrix power.
pub fn classical_walk_power(
    a: &ComplexMatrix,
    p0: &ProbabilityVector,
    t: u64,
) -> Result<ProbabilityVector, WalkError> {
    let m = classical_transition(a)?;
    check_operator(&m, p0.n())?;
    let p: Vec<Complex64> = p0.probs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let out = m.transpose().matpow(t)?.matvec(&p)?;
    Ok(ProbabilityVector {
        probs: out.iter().map(|z| z.re).collect(),
    })
}

/// State file layout: `{"m", "n", "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self, tol: Tolerance) -> Result<WalkerState, WalkError> {
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        WalkerState::new(self.m, self.n, amps, tol)
    }

    pub fn from_state(s: &WalkerState) -> Self {
        Self {
            m: s.m,
            n: s.n,
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Classical initial distribution layout: `{"n", "probs": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionFile {
    pub n: usize,
    pub probs: Vec<f64>,
}

impl DistributionFile {
    pub fn into_distribution(self, tol: Tolerance) -> Result<ProbabilityVector, WalkError> {
        if self.probs.len() != self.n {
            return Err(WalkError::WrongLength {
                expected: self.n,
                found: self.probs.len(),
            });
        }
        ProbabilityVector::new(self.probs, tol)
    }
}
