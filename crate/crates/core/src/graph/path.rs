use std::collections::BTreeSet;

use super::{EdgeId, Graph, VertexId};
use crate::error::{Error, Result};

/// A directed path: a base vertex and a chain of edges leaving it.
/// The empty path at `v` is the vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPath {
    start: VertexId,
    end: VertexId,
    edges: Vec<EdgeId>,
}

impl DirectedPath {
    pub fn empty(v: VertexId) -> Self {
        DirectedPath { start: v, end: v, edges: Vec::new() }
    }

    pub(crate) fn from_parts_unchecked(start: VertexId, end: VertexId, edges: Vec<EdgeId>) -> Self {
        DirectedPath { start, end, edges }
    }

    /// Validates that `edges` is a directed path starting at `base`.
    pub fn new(g: &Graph, base: VertexId, edges: Vec<EdgeId>) -> Result<Self> {
        if !g.contains_vertex(base) {
            return Err(Error::InvalidPath(format!("vertex index {} out of range", base.0)));
        }
        let mut cur = base;
        for &e in &edges {
            if !g.contains_edge(e) {
                return Err(Error::InvalidPath(format!("edge index {} out of range", e.0)));
            }
            if g.src(e) != cur {
                return Err(Error::InvalidPath(format!(
                    "edge {} does not start at {}",
                    g.edge_name(e),
                    g.vertex_name(cur)
                )));
            }
            cur = g.rng(e);
        }
        Ok(DirectedPath { start: base, end: cur, edges })
    }

    /// A nonempty path given only by its edges.
    pub fn from_edges(g: &Graph, edges: &[EdgeId]) -> Result<Self> {
        let first = edges.first().ok_or_else(|| Error::InvalidPath("no edges".into()))?;
        Self::new(g, g.src(*first), edges.to_vec())
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Self {
        DirectedPath { start: g.src(e), end: g.rng(e), edges: vec![e] }
    }

    /// Parses `e1.e2.e3` or `@v`.
    pub fn parse(g: &Graph, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix('@') {
            return Ok(DirectedPath::empty(g.vertex(v)?));
        }
        if s.is_empty() {
            return Err(Error::Syntax("empty path needs `@vertex`".into()));
        }
        let edges = s.split('.').map(|t| g.edge(t)).collect::<Result<Vec<_>>>()?;
        Self::from_edges(g, &edges)
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            format!("@{}", g.vertex_name(self.start))
        } else {
            self.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join(".")
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first_edge(&self) -> Option<EdgeId> {
        self.edges.first().copied()
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    pub fn is_circuit(&self) -> bool {
        self.start == self.end
    }

    /// `self` followed by `other`; `None` unless `r(self) = s(other)`.
    pub fn concat(&self, other: &DirectedPath) -> Option<DirectedPath> {
        if self.end != other.start {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(DirectedPath { start: self.start, end: other.end, edges })
    }

    pub fn push(&mut self, g: &Graph, e: EdgeId) -> Result<()> {
        if g.src(e) != self.end {
            return Err(Error::InvalidPath(format!("edge {} does not continue the path", g.edge_name(e))));
        }
        self.edges.push(e);
        self.end = g.rng(e);
        Ok(())
    }

    pub fn pop_last(&mut self, g: &Graph) -> Option<EdgeId> {
        let e = self.edges.pop()?;
        self.end = g.src(e);
        Some(e)
    }

    /// Removes the first edge.
    pub fn drop_first(&self, g: &Graph) -> Option<DirectedPath> {
        let e = *self.edges.first()?;
        Some(DirectedPath { start: g.rng(e), end: self.end, edges: self.edges[1..].to_vec() })
    }

    pub fn is_prefix_of(&self, other: &DirectedPath) -> bool {
        self.start == other.start && other.edges.starts_with(&self.edges)
    }

    /// The path `t` with `self = prefix · t`.
    pub fn strip_prefix(&self, prefix: &DirectedPath) -> Option<DirectedPath> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        Some(DirectedPath { start: prefix.end, end: self.end, edges: self.edges[prefix.len()..].to_vec() })
    }

    /// The first `n` edges.
    pub fn prefix(&self, g: &Graph, n: usize) -> DirectedPath {
        let edges = self.edges[..n].to_vec();
        let end = edges.last().map_or(self.start, |&e| g.rng(e));
        DirectedPath { start: self.start, end, edges }
    }

    /// The last `n` edges.
    pub fn suffix(&self, g: &Graph, n: usize) -> DirectedPath {
        let k = self.edges.len() - n;
        let edges = self.edges[k..].to_vec();
        let start = edges.first().map_or(self.end, |&e| g.src(e));
        DirectedPath { start, end: self.end, edges }
    }

    /// Vertices visited, `s(p)` first.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        let mut vs = vec![self.start];
        vs.extend(self.edges.iter().map(|&e| g.rng(e)));
        vs
    }

    /// True iff every edge's source has out-degree 1.
    pub fn is_ne(&self, g: &Graph) -> bool {
        self.edges.iter().all(|&e| g.out_degree(g.src(e)) == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A path in the underlying undirected graph; reverse steps traverse `e*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralPath {
    start: VertexId,
    end: VertexId,
    steps: Vec<(EdgeId, Direction)>,
}

impl GeneralPath {
    pub fn new(g: &Graph, base: VertexId, steps: Vec<(EdgeId, Direction)>) -> Result<Self> {
        let mut cur = base;
        for &(e, d) in &steps {
            let (from, to) = match d {
                Direction::Forward => (g.src(e), g.rng(e)),
                Direction::Reverse => (g.rng(e), g.src(e)),
            };
            if from != cur {
                return Err(Error::InvalidPath(format!("step {} does not continue the path", g.edge_name(e))));
            }
            cur = to;
        }
        Ok(GeneralPath { start: base, end: cur, steps })
    }

    pub fn from_directed(p: &DirectedPath) -> Self {
        GeneralPath {
            start: p.start(),
            end: p.end(),
            steps: p.edges().iter().map(|&e| (e, Direction::Forward)).collect(),
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn steps(&self) -> &[(EdgeId, Direction)] {
        &self.steps
    }

    pub fn inverse(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|&(e, d)| {
                let d = match d {
                    Direction::Forward => Direction::Reverse,
                    Direction::Reverse => Direction::Forward,
                };
                (e, d)
            })
            .collect();
        GeneralPath { start: self.end, end: self.start, steps }
    }

    /// No step is immediately followed by its own reverse.
    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !(w[0].0 == w[1].0 && w[0].1 != w[1].1))
    }

    pub fn is_circuit(&self) -> bool {
        self.start == self.end
    }
}

/// A directed circuit whose edge sources are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    path: DirectedPath,
}

impl Cycle {
    pub fn new(g: &Graph, path: DirectedPath) -> Result<Self> {
        if path.is_empty() || !path.is_circuit() {
            return Err(Error::InvalidPath("a cycle is a nonempty circuit".into()));
        }
        let mut seen = BTreeSet::new();
        for &e in path.edges() {
            if !seen.insert(g.src(e)) {
                return Err(Error::InvalidPath("cycle repeats a vertex".into()));
            }
        }
        Ok(Cycle { path })
    }

    pub(crate) fn new_unchecked(_g: &Graph, path: DirectedPath) -> Self {
        Cycle { path }
    }

    pub fn path(&self) -> &DirectedPath {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The cycle started at its `k`-th edge.
    pub fn rotate(&self, g: &Graph, k: usize) -> Cycle {
        let n = self.len();
        let edges: Vec<EdgeId> = (0..n).map(|i| self.path.edges()[(i + k) % n]).collect();
        let s = g.src(edges[0]);
        Cycle { path: DirectedPath { start: s, end: s, edges } }
    }

    pub fn rotations(&self, g: &Graph) -> Vec<Cycle> {
        (0..self.len()).map(|k| self.rotate(g, k)).collect()
    }

    /// Rotation with the lexicographically smallest edge sequence.
    pub fn canonical(&self, g: &Graph) -> Cycle {
        self.rotations(g).into_iter().min_by(|a, b| a.path.edges.cmp(&b.path.edges)).expect("nonempty")
    }

    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.path.edges().iter().map(|&e| g.src(e)).collect()
    }

    pub fn is_conjugate(&self, g: &Graph, other: &Cycle) -> bool {
        self.canonical(g) == other.canonical(g)
    }
}
