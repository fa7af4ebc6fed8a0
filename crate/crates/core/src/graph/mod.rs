//! Finite directed multigraphs, paths, cycles and vertex partitions.

mod morphism;
mod path;

pub use morphism::{
    check_morphism, classify_circle_immersion, lift_circuit_power, lift_max_prefix, lift_path, CircleImmersion,
    CircuitLift, GraphMorphism, MorphismKind,
};
pub use path::{Cycle, DirectedPath, Direction, GeneralPath};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

/// Default cap on the number of vertices accepted by [`Graph::parse`].
pub const DEFAULT_MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite directed multigraph. Vertices and edges are ordered by insertion
/// (file) order, and every tie-break in the crate uses that order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vnames: Vec<String>,
    enames: Vec<String>,
    src: Vec<VertexId>,
    rng: Vec<VertexId>,
    out: Vec<Vec<EdgeId>>,
    vindex: HashMap<String, VertexId>,
    eindex: HashMap<String, EdgeId>,
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if !valid_ident(name) {
            return Err(Error::Syntax(format!("bad identifier `{name}`")));
        }
        if self.vindex.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = VertexId(self.vnames.len());
        self.vnames.push(name.to_string());
        self.out.push(Vec::new());
        self.vindex.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, name: &str, s: &str, r: &str) -> Result<EdgeId> {
        if !valid_ident(name) {
            return Err(Error::Syntax(format!("bad identifier `{name}`")));
        }
        if self.eindex.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let s = self.vertex(s)?;
        let r = self.vertex(r)?;
        let id = EdgeId(self.enames.len());
        self.enames.push(name.to_string());
        self.src.push(s);
        self.rng.push(r);
        self.out[s.0].push(id);
        self.eindex.insert(name.to_string(), id);
        Ok(id)
    }

    /// Builds a graph from vertex names and `(edge, source, range)` triples.
    pub fn from_lists(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for (e, s, r) in edges {
            g.add_edge(e, s, r)?;
        }
        Ok(g)
    }

    /// Parses the line-oriented graph format with the default size cap.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_MAX_VERTICES)
    }

    pub fn parse_with_cap(text: &str, max_vertices: usize) -> Result<Self> {
        let mut g = Graph::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            match toks.as_slice() {
                ["vertex", v] => {
                    if !valid_ident(v) {
                        return Err(bad(&format!("bad identifier `{v}`")));
                    }
                    g.add_vertex(v)?;
                }
                ["edge", e, s, r] => {
                    for t in [e, s, r] {
                        if !valid_ident(t) {
                            return Err(bad(&format!("bad identifier `{t}`")));
                        }
                    }
                    g.add_edge(e, s, r)?;
                }
                ["vertex", ..] => return Err(bad("expected `vertex <id>`")),
                ["edge", ..] => return Err(bad("expected `edge <id> <src> <rng>`")),
                _ => return Err(bad(&format!("unrecognised line `{line}`"))),
            }
            if g.num_vertices() > max_vertices {
                return Err(Error::TooLarge(max_vertices));
            }
        }
        if g.num_vertices() == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.vnames.len()
    }

    pub fn num_edges(&self) -> usize {
        self.enames.len()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator {
        (0..self.vnames.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl DoubleEndedIterator<Item = EdgeId> + ExactSizeIterator {
        (0..self.enames.len()).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vindex.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId> {
        self.eindex.get(name).copied().ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vnames[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.enames[e.0]
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.src[e.0]
    }

    pub fn rng(&self, e: EdgeId) -> VertexId {
        self.rng[e.0]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.0]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.0].len()
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out[v.0].is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 < self.vnames.len()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.0 < self.enames.len()
    }

    /// The induced subgraph on `keep`, preserving names and relative order.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut h = Graph::new();
        for &v in keep {
            h.add_vertex(self.vertex_name(v)).expect("names are unique");
        }
        for e in self.edges() {
            if keep.contains(&self.src(e)) && keep.contains(&self.rng(e)) {
                h.add_edge(self.edge_name(e), self.vertex_name(self.src(e)), self.vertex_name(self.rng(e)))
                    .expect("endpoints kept");
            }
        }
        h
    }

    /// Subgraph with the given vertices and the given edges (endpoints must be kept).
    pub fn subgraph(&self, keep: &BTreeSet<VertexId>, edges: &BTreeSet<EdgeId>) -> Graph {
        let mut h = Graph::new();
        for &v in keep {
            h.add_vertex(self.vertex_name(v)).expect("names are unique");
        }
        for &e in edges {
            h.add_edge(self.edge_name(e), self.vertex_name(self.src(e)), self.vertex_name(self.rng(e)))
                .expect("endpoints kept");
        }
        h
    }

    /// Vertices reachable from `v` by a possibly empty directed path.
    pub fn reachable(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([v]);
        seen[v.0] = true;
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let w = self.rng(e);
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        self.vertices().filter(|u| seen[u.0]).collect()
    }

    /// Shortest directed path from `a` to `b` (BFS, ties broken by edge order).
    pub fn shortest_path(&self, a: VertexId, b: VertexId) -> Option<DirectedPath> {
        let mut pred: Vec<Option<EdgeId>> = vec![None; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        seen[a.0] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &e in self.out_edges(u) {
                let w = self.rng(e);
                if !seen[w.0] {
                    seen[w.0] = true;
                    pred[w.0] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[b.0] {
            return None;
        }
        let mut edges = Vec::new();
        let mut cur = b;
        while cur != a {
            let e = pred[cur.0].expect("bfs predecessor");
            edges.push(e);
            cur = self.src(e);
        }
        edges.reverse();
        Some(DirectedPath::from_parts_unchecked(a, b, edges))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.num_vertices() == 0 {
            return true;
        }
        let mut uf = UnionFind::<usize>::new(self.num_vertices());
        for e in self.edges() {
            uf.union(self.src(e).0, self.rng(e).0);
        }
        let root = uf.find(0);
        self.vertices().all(|v| uf.find(v.0) == root)
    }

    /// True iff the graph has no directed cycle (loops included).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.num_vertices()];
        for e in self.edges() {
            indeg[self.rng(e).0] += 1;
        }
        let mut stack: Vec<VertexId> = self.vertices().filter(|v| indeg[v.0] == 0).collect();
        let mut done = 0;
        while let Some(v) = stack.pop() {
            done += 1;
            for &e in self.out_edges(v) {
                let w = self.rng(e);
                indeg[w.0] -= 1;
                if indeg[w.0] == 0 {
                    stack.push(w);
                }
            }
        }
        done == self.num_vertices()
    }

    /// Serialises back into the file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in self.vertices() {
            s.push_str(&format!("vertex {}\n", self.vertex_name(v)));
        }
        for e in self.edges() {
            s.push_str(&format!(
                "edge {} {} {}\n",
                self.edge_name(e),
                self.vertex_name(self.src(e)),
                self.vertex_name(self.rng(e))
            ));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

/// Parses a graph file (see [`Graph::parse`]).
pub fn load_graph(text: &str) -> Result<Graph> {
    Graph::parse(text)
}

/// A partition of the vertex set. Blocks are sorted by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<VertexId>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Normalises an arbitrary labelling into a partition.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        let mut block_of = vec![0; labels.len()];
        for (i, &l) in labels.iter().enumerate() {
            let b = *first.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(VertexId(i));
            block_of[i] = b;
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<VertexId>] {
        &self.blocks
    }

    pub fn block_of(&self, v: VertexId) -> usize {
        self.block_of[v.0]
    }

    pub fn block(&self, i: usize) -> &[VertexId] {
        &self.blocks[i]
    }

    pub fn same(&self, a: VertexId, b: VertexId) -> bool {
        self.block_of[a.0] == self.block_of[b.0]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks rendered with vertex names.
    pub fn named(&self, g: &Graph) -> Vec<Vec<String>> {
        self.blocks.iter().map(|b| b.iter().map(|&v| g.vertex_name(v).to_string()).collect()).collect()
    }
}

/// The ~-classes: union-find closure of `(s(e), r(e))` over edges whose
/// source has out-degree 1.
pub fn sim_classes(g: &Graph) -> Partition {
    let mut uf = UnionFind::<usize>::new(g.num_vertices());
    for e in g.edges() {
        if g.out_degree(g.src(e)) == 1 {
            uf.union(g.src(e).0, g.rng(e).0);
        }
    }
    Partition::from_labels(&uf.into_labeling())
}

/// Induced subgraph on the ~-class of `v`.
pub fn class_subgraph(g: &Graph, v: VertexId) -> Graph {
    let p = sim_classes(g);
    let keep = p.block(p.block_of(v)).iter().copied().collect();
    g.induced_subgraph(&keep)
}

/// Induced subgraph on the vertices reachable from `v`.
pub fn reachable_subgraph(g: &Graph, v: VertexId) -> Graph {
    g.induced_subgraph(&g.reachable(v))
}

/// BFS tree of the vertices reachable from `v`; every tree path from `v` is directed.
pub fn directed_spanning_tree(g: &Graph, v: VertexId) -> BTreeSet<EdgeId> {
    let mut seen = vec![false; g.num_vertices()];
    seen[v.0] = true;
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let w = g.rng(e);
            if !seen[w.0] {
                seen[w.0] = true;
                tree.insert(e);
                queue.push_back(w);
            }
        }
    }
    tree
}

pub fn strongly_connected_components(g: &Graph) -> Partition {
    let mut pg = petgraph::graph::DiGraph::<(), ()>::with_capacity(g.num_vertices(), g.num_edges());
    let nodes: Vec<_> = g.vertices().map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(nodes[g.src(e).0], nodes[g.rng(e).0], ());
    }
    let mut labels = vec![0; g.num_vertices()];
    for (i, comp) in petgraph::algo::tarjan_scc(&pg).into_iter().enumerate() {
        for n in comp {
            labels[n.index()] = i;
        }
    }
    Partition::from_labels(&labels)
}

/// One canonical representative per conjugacy class of cycles, sorted by
/// edge sequence.
pub fn cycles_up_to_conjugacy(g: &Graph) -> Vec<Cycle> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for s in g.vertices() {
        // Cycles whose smallest vertex is s: search only through larger vertices.
        let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
        let mut path: Vec<EdgeId> = Vec::new();
        on_path[s.0] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let outs = g.out_edges(u);
            if *next >= outs.len() {
                stack.pop();
                on_path[u.0] = false;
                path.pop();
                continue;
            }
            let e = outs[*next];
            *next += 1;
            let w = g.rng(e);
            if w == s {
                let mut edges = path.clone();
                edges.push(e);
                let c = Cycle::new_unchecked(g, DirectedPath::from_parts_unchecked(s, s, edges));
                out.push(c.canonical(g));
            } else if w > s && !on_path[w.0] {
                on_path[w.0] = true;
                path.push(e);
                stack.push((w, 0));
            }
        }
        on_path[s.0] = false;
    }
    out.sort_by(|a, b| a.path().edges().cmp(b.path().edges()));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g72() -> Graph {
        Graph::parse(include_str!("../../fixtures/g72.graph")).unwrap()
    }

    fn names(g: &Graph, s: &BTreeSet<EdgeId>) -> Vec<String> {
        s.iter().map(|&e| g.edge_name(e).to_string()).collect()
    }

    #[test]
    fn parses_bouquets() {
        let b1 = Graph::parse("vertex v\nedge a v v").unwrap();
        assert_eq!((b1.num_vertices(), b1.num_edges()), (1, 1));
        let b2 = Graph::parse("vertex v\nedge a v v\nedge b v v").unwrap();
        assert_eq!(b2.out_degree(b2.vertex("v").unwrap()), 2);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Graph::parse("edge a v w"), Err(Error::UnknownVertex("v".into())));
        assert!(matches!(Graph::parse("vertex v\nvertex v"), Err(Error::Duplicate(_))));
        assert!(matches!(Graph::parse("vertex v\nedgy a v v"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("vertex v-1"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(Graph::parse("# nothing\n"), Err(Error::EmptyGraph));
        let big: String = (0..70).map(|i| format!("vertex v{i}\n")).collect();
        assert_eq!(Graph::parse(&big), Err(Error::TooLarge(64)));
        assert!(Graph::parse_with_cap(&big, 100).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let g = g72();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn degrees_and_classes() {
        let g = g72();
        assert_eq!(g.out_degree(g.vertex("v1").unwrap()), 1);
        assert_eq!(sim_classes(&g).named(&g), vec![vec!["v1", "v2", "v3"], vec!["v4", "v5", "v6"]]);
        let sub = class_subgraph(&g, g.vertex("v1").unwrap());
        let es: Vec<_> = sub.edges().map(|e| sub.edge_name(e).to_string()).collect();
        assert_eq!(es, vec!["e1", "e2", "eC1"]);
    }

    #[test]
    fn reachability_and_trees() {
        let g = g72();
        let v4 = g.vertex("v4").unwrap();
        assert_eq!(reachable_subgraph(&g, v4).num_vertices(), 3);
        assert_eq!(reachable_subgraph(&g, g.vertex("v1").unwrap()), g);
        assert_eq!(names(&g, &directed_spanning_tree(&g, v4)), vec!["eC2", "e3"]);
        let c3 = Graph::parse(include_str!("../../fixtures/c3.graph")).unwrap();
        assert_eq!(names(&c3, &directed_spanning_tree(&c3, VertexId(0))), vec!["c1", "c2"]);
    }

    #[test]
    fn sccs_and_cycles() {
        let g = g72();
        assert_eq!(strongly_connected_components(&g).len(), 2);
        let cs = cycles_up_to_conjugacy(&g);
        let shown: Vec<String> = cs.iter().map(|c| c.path().display(&g)).collect();
        assert_eq!(shown, vec!["e1.e2.eC1", "eC2.e4.e3"]);
        let l2 = Graph::parse(include_str!("../../fixtures/l2.graph")).unwrap();
        assert!(cycles_up_to_conjugacy(&l2).is_empty());
        assert!(l2.is_acyclic());
        assert_eq!(strongly_connected_components(&l2).len(), 3);
    }

    #[test]
    fn parallel_edges_give_distinct_cycles() {
        let g = Graph::from_lists(&["x", "y"], &[("a", "x", "y"), ("b", "x", "y"), ("c", "y", "x")]).unwrap();
        assert_eq!(cycles_up_to_conjugacy(&g).len(), 2);
    }
}
