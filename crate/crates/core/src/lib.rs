//! Compiler and simulator for unitary coined discrete-time quantum walks.
//!
//! The pipeline runs in both directions:
//!
//! * graph → walk: a regular adjacency matrix is decomposed into permutation
//!   blocks ([`shift::decompose_permutations`]), assembled into a unitary
//!   shift operator ([`shift::assemble_shift`]), combined with a coin
//!   ([`coin::evolution`]) and simulated ([`walk`]).
//! * unitary → graph: any `nm × nm` unitary is read as a block matrix of
//!   Kraus operators and mapped to the directed multigraph it encodes
//!   ([`shift::extract_graph`]).
//!
//! Basis ordering is coin-major everywhere: `|c⟩ ⊗ |v⟩` has index `c·n + v`.

pub mod coin;
pub mod graph;
pub mod matching;
pub mod matrix;
pub mod random;
pub mod shift;
pub mod tolerance;
pub mod walk;

pub use coin::{
    coin_matrix, column_adjacency, evolution, evolution_from_matrix, named_coin, CoinError,
    CoinFile, CoinKind, CoinSpec, Coins, NamedCoin,
};
pub use graph::{
    from_adjacency, split_directed, split_undirected, union, Arc, GraphError, MultiGraph,
    UndirectedEdge,
};
pub use matrix::{ComplexMatrix, MatrixError};
pub use num_complex::Complex64;
pub use shift::{
    assemble_shift, decompose_permutations, extract_all_partitions, extract_graph,
    permutation_decomposition, shift_from_unitary, verify_completeness, verify_kraus, Condition,
    KrausGrid, KrausReport, ShiftError, ShiftOperator,
};
pub use tolerance::Tolerance;
pub use walk::{
    classical_step, classical_trajectory, classical_transition, classical_walk,
    classical_walk_power, evolve, evolve_by_power, evolve_trajectory, measure_position, step,
    DistributionFile, ProbabilityVector, StateFile, WalkError, WalkerState,
};
