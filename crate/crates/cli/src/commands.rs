//! The `qwalk` subcommands as plain functions over file paths.
//!
//! Each command writes its artifact to an [`Output`] and returns the summary
//! text that the binary prints.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qwalk_core::{
    assemble_shift, classical_trajectory, coin_matrix, decompose_permutations, evolution,
    evolution_from_matrix, evolve_trajectory, extract_all_partitions, extract_graph,
    measure_position, shift_from_unitary, verify_completeness, verify_kraus, CoinFile, CoinSpec,
    ComplexMatrix, Condition, DistributionFile, KrausGrid, MultiGraph, NamedCoin,
    ProbabilityVector, StateFile, Tolerance,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;
use crate::format::distribution_csv;

/// Where a command writes its artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    File(PathBuf),
    Stdout,
}

impl Output {
    pub fn from_option(path: Option<PathBuf>) -> Self {
        path.map_or(Output::Stdout, Output::File)
    }

    fn emit(&self, contents: &str) -> Result<(), CliError> {
        match self {
            Output::File(path) => write_text(path, contents),
            Output::Stdout => {
                print!("{contents}");
                Ok(())
            }
        }
    }
}

/// A coin given either as a coin file or by name. Named coins take their
/// dimensions from the command's other inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoinSource {
    File(PathBuf),
    Named(NamedCoin),
}

impl CoinSource {
    fn load(&self, m: usize, n: usize, tol: Tolerance) -> Result<CoinSpec, CliError> {
        let spec = match self {
            CoinSource::File(path) => read_json::<CoinFile>(path)?.into_spec(tol)?,
            CoinSource::Named(name) => CoinSpec::named(*name, m, n)?,
        };
        if (spec.m(), spec.n()) != (m, n) {
            return Err(CliError::Precondition(format!(
                "coin has m = {}, n = {} but the operator needs m = {m}, n = {n}",
                spec.m(),
                spec.n()
            )));
        }
        Ok(spec)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn write_text(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

fn condition_line(out: &mut String, label: &str, c: &Condition) {
    let verdict = if c.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{label}: {verdict} (residual {:e})", c.residual).expect("write to String");
}

/// Decomposes a regular nonnegative-integer adjacency matrix into a
/// block-diagonal grid of permutation blocks.
pub fn decompose(adjacency: &Path, out: &Output) -> Result<String, CliError> {
    let a: ComplexMatrix = read_json(adjacency)?;
    let grid = decompose_permutations(&a)?;
    let residual = grid.block_sum().max_abs_diff(&a.transpose())?;
    out.emit(&to_json(&grid))?;
    Ok(format!(
        "m = {}\nn = {}\nresidual = {residual:e}\n",
        grid.m(),
        grid.n()
    ))
}

/// Checks completeness of a grid, and its block sum against an adjacency
/// matrix when one is given.
pub fn verify(grid: &Path, adjacency: Option<&Path>, tol: Tolerance) -> Result<String, CliError> {
    let grid: KrausGrid = read_json(grid)?;
    let report = match adjacency {
        Some(path) => verify_kraus(&read_json(path)?, &grid, tol)?,
        None => verify_completeness(&grid, tol),
    };
    let mut text = String::new();
    if let Some(sum) = &report.sum {
        condition_line(&mut text, "sum", sum);
    }
    condition_line(&mut text, "column", &report.column);
    condition_line(&mut text, "row", &report.row);
    if report.passed() {
        Ok(text)
    } else {
        Err(CliError::VerificationFailed(text))
    }
}

/// Assembles the shift matrix of a complete grid.
pub fn assemble(grid: &Path, out: &Output, tol: Tolerance) -> Result<String, CliError> {
    let grid: KrausGrid = read_json(grid)?;
    let shift = assemble_shift(grid, tol)?;
    let residual = shift.matrix().unitarity_residual()?;
    out.emit(&to_json(shift.matrix()))?;
    Ok(format!(
        "dimension = {}\nunitarity residual = {residual:e}\n",
        shift.matrix().rows()
    ))
}

/// Builds the full coin operator. A named coin needs explicit `m` and `n`.
pub fn coin(
    source: &CoinSource,
    dims: Option<(usize, usize)>,
    out: &Output,
    tol: Tolerance,
) -> Result<String, CliError> {
    let spec = match (source, dims) {
        (CoinSource::File(path), _) => read_json::<CoinFile>(path)?.into_spec(tol)?,
        (CoinSource::Named(name), Some((m, n))) => CoinSpec::named(*name, m, n)?,
        (CoinSource::Named(_), None) => {
            return Err(CliError::Precondition(
                "a named coin needs --m and --n".to_owned(),
            ))
        }
    };
    let c = coin_matrix(&spec);
    out.emit(&to_json(&c))?;
    Ok(format!(
        "m = {}\nn = {}\ndimension = {}\n",
        spec.m(),
        spec.n(),
        c.rows()
    ))
}

/// Composes a shift matrix with a coin: `U = S · C`. The coin dimension is
/// `m` when given and otherwise read from the coin file.
pub fn evolve_op(
    shift: &Path,
    coin: &CoinSource,
    m: Option<usize>,
    out: &Output,
    tol: Tolerance,
) -> Result<String, CliError> {
    let s: ComplexMatrix = read_json(shift)?;
    let m = match (m, coin) {
        (Some(m), _) => m,
        (None, CoinSource::File(path)) => read_json::<CoinFile>(path)?.m,
        (None, CoinSource::Named(_)) => {
            return Err(CliError::Precondition("a named coin needs --m".to_owned()))
        }
    };
    let shift = shift_from_unitary(&s, m, tol)?;
    let spec = coin.load(shift.m(), shift.n(), tol)?;
    let u = evolution(&shift, &spec)?;
    let residual = u.unitarity_residual()?;
    out.emit(&to_json(&u))?;
    Ok(format!(
        "dimension = {}\nunitarity residual = {residual:e}\n",
        u.rows()
    ))
}

/// Runs a coined quantum walk and writes the position distribution as CSV.
/// With a coin, the operator file holds the shift and `U = S · C`; without
/// one it holds `U` itself.
pub fn walk(
    operator: &Path,
    coin: Option<&CoinSource>,
    init: &Path,
    steps: usize,
    trajectory: bool,
    out: &Output,
    tol: Tolerance,
) -> Result<String, CliError> {
    let op: ComplexMatrix = read_json(operator)?;
    let s0 = read_json::<StateFile>(init)?.into_state(tol)?;
    if op.shape() != (s0.dim(), s0.dim()) {
        return Err(CliError::Precondition(format!(
            "operator is {}x{} but the state has dimension {}",
            op.rows(),
            op.cols(),
            s0.dim()
        )));
    }
    let u = match coin {
        Some(source) => evolution_from_matrix(&op, &source.load(s0.m(), s0.n(), tol)?)?,
        None => op,
    };
    let residual = u.unitarity_residual()?;
    if residual > tol.abs_eps {
        return Err(CliError::NotUnitary { residual });
    }
    let states = evolve_trajectory(&u, &s0, steps)?;
    let dists: Vec<(usize, ProbabilityVector)> =
        states.iter().map(measure_position).enumerate().collect();
    write_distributions(dists, trajectory, out)
}

/// Runs the classical random walk `P_{t+1} = Mᵀ P_t` with `M = D⁻¹A`.
pub fn classical(
    adjacency: &Path,
    init: &Path,
    steps: usize,
    trajectory: bool,
    out: &Output,
    tol: Tolerance,
) -> Result<String, CliError> {
    let a: ComplexMatrix = read_json(adjacency)?;
    let p0 = read_json::<DistributionFile>(init)?.into_distribution(tol)?;
    let dists = classical_trajectory(&a, &p0, steps)?
        .into_iter()
        .enumerate()
        .collect();
    write_distributions(dists, trajectory, out)
}

fn write_distributions(
    mut dists: Vec<(usize, ProbabilityVector)>,
    trajectory: bool,
    out: &Output,
) -> Result<String, CliError> {
    if !trajectory {
        dists.drain(..dists.len() - 1);
    }
    out.emit(&distribution_csv(&dists))?;
    let (t, last) = dists.last().expect("at least the initial distribution");
    Ok(format!(
        "steps = {t}\ntotal probability = {:e}\n",
        last.total()
    ))
}

/// Path of the adjacency sidecar written next to a graph file.
pub fn sidecar_path(graph: &Path) -> PathBuf {
    with_suffix(graph, "adjacency")
}

/// Path of the graph file for coin dimension `m` in all-partitions mode.
pub fn partition_path(graph: &Path, m: usize) -> PathBuf {
    with_suffix(graph, &format!("m{m}"))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map_or("json".to_owned(), |e| e.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

/// How many coin dimensions `extract` should try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partitions {
    Single(usize),
    All,
}

/// Reads a unitary as a shift operator and writes the encoded multigraph,
/// plus its adjacency matrix in a sidecar file.
pub fn extract(
    unitary: &Path,
    partitions: Partitions,
    out: &Path,
    tol: Tolerance,
) -> Result<String, CliError> {
    let u: ComplexMatrix = read_json(unitary)?;
    let mut summary = String::new();
    match partitions {
        Partitions::Single(m) => {
            let (_, graph) = extract_graph(&u, m, tol)?;
            write_graph(out, &graph, m, &mut summary)?;
        }
        Partitions::All => {
            for (grid, graph) in extract_all_partitions(&u, tol)? {
                let m = grid.m();
                write_graph(&partition_path(out, m), &graph, m, &mut summary)?;
            }
        }
    }
    Ok(summary)
}

fn write_graph(
    path: &Path,
    graph: &MultiGraph,
    m: usize,
    summary: &mut String,
) -> Result<(), CliError> {
    write_text(path, &to_json(graph))?;
    write_text(&sidecar_path(path), &to_json(&graph.adjacency()))?;
    let connected = if graph.is_connected() {
        ""
    } else {
        " (disconnected)"
    };
    writeln!(
        summary,
        "m = {m}: n = {}, arcs = {}{connected} -> {}",
        graph.n(),
        graph.arcs().len(),
        path.display()
    )
    .expect("write to String");
    Ok(())
}

/// Paths written by [`compile`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileOutputs {
    pub operator: Output,
    pub grid: Option<PathBuf>,
    pub shift: Option<PathBuf>,
}

/// Decomposes an adjacency matrix, assembles its shift and applies a coin,
/// writing the evolution operator.
pub fn compile(
    adjacency: &Path,
    coin: &CoinSource,
    outputs: &CompileOutputs,
    tol: Tolerance,
) -> Result<String, CliError> {
    let a: ComplexMatrix = read_json(adjacency)?;
    let grid = decompose_permutations(&a)?;
    if let Some(path) = &outputs.grid {
        write_text(path, &to_json(&grid))?;
    }
    let shift = assemble_shift(grid, tol)?;
    if let Some(path) = &outputs.shift {
        write_text(path, &to_json(shift.matrix()))?;
    }
    let spec = coin.load(shift.m(), shift.n(), tol)?;
    let u = evolution(&shift, &spec)?;
    let residual = u.unitarity_residual()?;
    outputs.operator.emit(&to_json(&u))?;
    Ok(format!(
        "m = {}\nn = {}\nunitarity residual = {residual:e}\n",
        shift.m(),
        shift.n()
    ))
}
