//! Weighted directed multigraphs and their adjacency matrices.
//!
//! Vertices are the integers `0..n`. A graph stores arcs (ordered pairs, with
//! parallel arcs allowed) and undirected edges side by side; both feed the
//! adjacency matrix. An undirected self-loop `{v, v, w}` adds `w` to `a_vv`
//! twice, once for each orientation, so it contributes `2w`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} out of range for a graph of {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("zero-weight arcs are not stored")]
    ZeroWeight,
    #[error("split weights sum to {found}, expected {expected}")]
    WeightSumMismatch {
        expected: Complex64,
        found: Complex64,
    },
    #[error("cannot split into an empty list of weights")]
    EmptySplit,
    #[error("vertex count mismatch: expected {expected}, found {found}")]
    VertexCountMismatch { expected: usize, found: usize },
    #[error("union of an empty list of graphs")]
    EmptyUnion,
    #[error("adjacency matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("name table has {found} entries for {n} vertices")]
    NameCount { n: usize, found: usize },
    #[error("index {index} out of range ({len} entries)")]
    NoSuchEdge { index: usize, len: usize },
}

/// Directed, weighted edge `tail → head`, optionally tagged with the coin
/// basis state whose walker may traverse it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: Complex64,
    pub coin_tag: Option<usize>,
}

impl Arc {
    pub fn new(tail: usize, head: usize, weight: Complex64) -> Self {
        Self {
            tail,
            head,
            weight,
            coin_tag: None,
        }
    }

    pub fn with_coin(mut self, coin: usize) -> Self {
        self.coin_tag = Some(coin);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UndirectedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Complex64,
}

impl UndirectedEdge {
    pub fn new(u: usize, v: usize, weight: Complex64) -> Self {
        Self { u, v, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct MultiGraph {
    n: usize,
    arcs: Vec<Arc>,
    undirected: Vec<UndirectedEdge>,
    names: Option<Vec<String>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Self {
            n,
            arcs: Vec::new(),
            undirected: Vec::new(),
            names: None,
        })
    }

    /// Attaches external vertex labels; vertex `i` is called `names[i]`.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, GraphError> {
        if names.len() != self.n {
            return Err(GraphError::NameCount {
                n: self.n,
                found: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn undirected(&self) -> &[UndirectedEdge] {
        &self.undirected
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    fn check_vertex(&self, vertex: usize) -> Result<(), GraphError> {
        if vertex < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex, n: self.n })
        }
    }

    pub fn add_arc(&mut self, arc: Arc) -> Result<(), GraphError> {
        self.check_vertex(arc.tail)?;
        self.check_vertex(arc.head)?;
        if arc.weight == Complex64::new(0.0, 0.0) {
            return Err(GraphError::ZeroWeight);
        }
        self.arcs.push(arc);
        Ok(())
    }

    pub fn add_undirected(&mut self, edge: UndirectedEdge) -> Result<(), GraphError> {
        self.check_vertex(edge.u)?;
        self.check_vertex(edge.v)?;
        if edge.weight == Complex64::new(0.0, 0.0) {
            return Err(GraphError::ZeroWeight);
        }
        self.undirected.push(edge);
        Ok(())
    }

    /// `a_ij` is the sum of the weights of all arcs `i → j`; each undirected
    /// edge `{i, j, w}` adds `w` to both `a_ij` and `a_ji`.
    pub fn adjacency(&self) -> ComplexMatrix {
        let mut a = ComplexMatrix::zeros(self.n, self.n);
        for arc in &self.arcs {
            a[(arc.tail, arc.head)] += arc.weight;
        }
        for e in &self.undirected {
            a[(e.u, e.v)] += e.weight;
            a[(e.v, e.u)] += e.weight;
        }
        a
    }

    /// Number of arcs leaving `v`, counting each undirected edge once per
    /// orientation.
    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.tail == v).count()
            + self
                .undirected
                .iter()
                .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
                .sum::<usize>()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
            + self
                .undirected
                .iter()
                .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
                .sum::<usize>()
    }

    /// Connected when edge directions are ignored.
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let pairs = self
            .arcs
            .iter()
            .map(|a| (a.tail, a.head))
            .chain(self.undirected.iter().map(|e| (e.u, e.v)));
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (1..self.n).all(|v| find(&mut parent, v) == root)
    }

    /// Replaces arc `index` with parallel copies carrying `weights`.
    /// The new arcs are appended at the end of the arc list.
    pub fn split_arc(
        &mut self,
        index: usize,
        weights: &[Complex64],
        tol: Tolerance,
    ) -> Result<(), GraphError> {
        let arc = *self.arcs.get(index).ok_or(GraphError::NoSuchEdge {
            index,
            len: self.arcs.len(),
        })?;
        let pieces = split_directed(arc, weights, tol)?;
        self.arcs.remove(index);
        self.arcs.extend(pieces);
        Ok(())
    }

    /// Replaces undirected edge `index` with its two opposing arcs.
    pub fn split_edge(&mut self, index: usize) -> Result<(), GraphError> {
        if index >= self.undirected.len() {
            return Err(GraphError::NoSuchEdge {
                index,
                len: self.undirected.len(),
            });
        }
        let e = self.undirected.remove(index);
        self.arcs.extend(split_undirected(e));
        Ok(())
    }

    /// Splits every undirected edge, leaving a pure directed multigraph.
    pub fn to_directed(&self) -> Self {
        let mut g = self.clone();
        let edges = std::mem::take(&mut g.undirected);
        g.arcs.extend(edges.into_iter().flat_map(split_undirected));
        g
    }
}

/// Splits one arc into parallel arcs with the given weights. The weights must
/// sum to the original weight within `tol`; every piece must be nonzero.
pub fn split_directed(
    arc: Arc,
    weights: &[Complex64],
    tol: Tolerance,
) -> Result<Vec<Arc>, GraphError> {
    if weights.is_empty() {
        return Err(GraphError::EmptySplit);
    }
    if weights.iter().any(|w| *w == Complex64::new(0.0, 0.0)) {
        return Err(GraphError::ZeroWeight);
    }
    let total: Complex64 = weights.iter().sum();
    if (total - arc.weight).norm() > tol.abs_eps + tol.rel_eps * arc.weight.norm() {
        return Err(GraphError::WeightSumMismatch {
            expected: arc.weight,
            found: total,
        });
    }
    Ok(weights
        .iter()
        .map(|&weight| Arc { weight, ..arc })
        .collect())
}

/// An undirected edge `{u, v, w}` becomes `u → v` and `v → u`, each with the
/// full weight `w`.
pub fn split_undirected(edge: UndirectedEdge) -> [Arc; 2] {
    [
        Arc::new(edge.u, edge.v, edge.weight),
        Arc::new(edge.v, edge.u, edge.weight),
    ]
}

/// Union over a shared vertex set: arc and edge lists are concatenated in
/// order. Names are taken from the first graph that has them.
pub fn union(graphs: &[MultiGraph]) -> Result<MultiGraph, GraphError> {
    let first = graphs.first().ok_or(GraphError::EmptyUnion)?;
    let mut out = MultiGraph::new(first.n)?;
    for g in graphs {
        if g.n != first.n {
            return Err(GraphError::VertexCountMismatch {
                expected: first.n,
                found: g.n,
            });
        }
        out.arcs.extend_from_slice(&g.arcs);
        out.undirected.extend_from_slice(&g.undirected);
        if out.names.is_none() {
            out.names.clone_from(&g.names);
        }
    }
    Ok(out)
}

/// Canonical digraph of an adjacency matrix: one arc `i → j` with weight
/// `a_ij` for each nonzero entry, in row-major order.
pub fn from_adjacency(a: &ComplexMatrix) -> Result<MultiGraph, GraphError> {
    if !a.is_square() {
        return Err(GraphError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut g = MultiGraph::new(n)?;
    for i in 0..n {
        for j in 0..n {
            let w = a[(i, j)];
            if w != Complex64::new(0.0, 0.0) {
                g.arcs.push(Arc::new(i, j, w));
            }
        }
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct ArcRepr {
    tail: usize,
    head: usize,
    w: [f64; 2],
    #[serde(default)]
    coin: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    u: usize,
    v: usize,
    w: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    #[serde(default)]
    arcs: Vec<ArcRepr>,
    #[serde(default)]
    undirected: Vec<EdgeRepr>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl TryFrom<GraphRepr> for MultiGraph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new(r.n)?;
        for a in r.arcs {
            g.add_arc(Arc {
                tail: a.tail,
                head: a.head,
                weight: complex(a.w),
                coin_tag: a.coin,
            })?;
        }
        for e in r.undirected {
            g.add_undirected(UndirectedEdge::new(e.u, e.v, complex(e.w)))?;
        }
        match r.names {
            Some(names) => g.with_names(names),
            None => Ok(g),
        }
    }
}

impl From<MultiGraph> for GraphRepr {
    fn from(g: MultiGraph) -> Self {
        GraphRepr {
            n: g.n,
            arcs: g
                .arcs
                .iter()
                .map(|a| ArcRepr {
                    tail: a.tail,
                    head: a.head,
                    w: [a.weight.re, a.weight.im],
                    coin: a.coin_tag,
                })
                .collect(),
            undirected: g
                .undirected
                .iter()
                .map(|e| EdgeRepr {
                    u: e.u,
                    v: e.v,
                    w: [e.weight.re, e.weight.im],
                })
                .collect(),
            names: g.names,
        }
    }
}
