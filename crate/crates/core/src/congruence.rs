//! Ideals, Rees quotients and 0-restricted congruences `℘(W, f)` on I(Γ).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::gis::{enumerate_elements, gis_multiply, GisElement};
use crate::graph::{cycles_up_to_conjugacy, Cycle, DirectedPath, EdgeId, Graph, VertexId};

/// An out-edge-closed set of vertices; it determines the ideal `{pq* : r(p) ∈ H} ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HereditarySet {
    vertices: BTreeSet<VertexId>,
}

impl HereditarySet {
    pub fn new(g: &Graph, vertices: BTreeSet<VertexId>) -> Result<Self> {
        for &v in &vertices {
            if !g.contains_vertex(v) {
                return Err(Error::UnknownVertex(format!("#{}", v.0)));
            }
            if g.out_edges(v).iter().any(|&e| !vertices.contains(&g.rng(e))) {
                return Err(Error::NotHereditary);
            }
        }
        Ok(HereditarySet { vertices })
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// True iff `x` lies in the ideal.
    pub fn contains_element(&self, x: &GisElement) -> bool {
        x.p().is_none_or(|p| self.contains(p.end()))
    }
}

pub fn hereditary_closure(g: &Graph, seed: &BTreeSet<VertexId>) -> Result<HereditarySet> {
    let mut all = BTreeSet::new();
    for &v in seed {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
        all.extend(g.reachable(v));
    }
    Ok(HereditarySet { vertices: all })
}

/// The graph `Δ` of the Rees quotient `I(Γ)/J(H) ≅ I(Δ)`, with index maps.
#[derive(Clone, Debug)]
pub struct ReesQuotient {
    pub graph: Graph,
    vmap: Vec<Option<VertexId>>,
    emap: Vec<Option<EdgeId>>,
}

impl ReesQuotient {
    pub fn new(g: &Graph, h: &HereditarySet) -> Result<Self> {
        HereditarySet::new(g, h.vertices.clone())?;
        let keep: BTreeSet<VertexId> = g.vertices().filter(|v| !h.contains(*v)).collect();
        let graph = g.induced_subgraph(&keep);
        let vmap = g.vertices().map(|v| graph.vertex(g.vertex_name(v)).ok()).collect();
        let emap = g.edges().map(|e| graph.edge(g.edge_name(e)).ok()).collect();
        Ok(ReesQuotient { graph, vmap, emap })
    }

    fn map_path(&self, p: &DirectedPath) -> DirectedPath {
        let edges = p.edges().iter().map(|e| self.emap[e.0].expect("path avoids the ideal")).collect();
        DirectedPath::new(&self.graph, self.vmap[p.start().0].unwrap(), edges).expect("paths map to paths")
    }

    /// The image of `x` in I(Δ); elements of the ideal go to zero.
    pub fn project(&self, x: &GisElement) -> GisElement {
        match x.pair() {
            Some((p, q)) if self.vmap[p.end().0].is_some() => {
                GisElement::new(self.map_path(p), self.map_path(q)).expect("ranges agree")
            }
            _ => GisElement::zero(),
        }
    }
}

pub fn rees_quotient_graph(g: &Graph, h: &HereditarySet) -> Result<Graph> {
    Ok(ReesQuotient::new(g, h)?.graph)
}

/// Value of a cycle function: a positive exponent or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CycleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleOrder::Finite(n) => write!(f, "{n}"),
            CycleOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// A vertex set `W` of out-degree-1 vertices and a cycle function `f` on the
/// cycles inside `W`, keyed by canonical rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruencePair {
    pub w: BTreeSet<VertexId>,
    pub f: BTreeMap<Cycle, CycleOrder>,
}

impl CongruencePair {
    pub fn new(g: &Graph, w: BTreeSet<VertexId>, f: impl IntoIterator<Item = (Cycle, CycleOrder)>) -> Self {
        let f = f.into_iter().map(|(c, o)| (c.canonical(g), o)).collect();
        CongruencePair { w, f }
    }

    /// `W={v1,v2} f={c1.c2.c3:3, a:inf}`.
    pub fn parse(g: &Graph, s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Syntax(format!("congruence pair: {m}"));
        let s = s.trim();
        let rest = s.strip_prefix("W={").ok_or_else(|| bad("expected `W={`"))?;
        let (ws, rest) = rest.split_once('}').ok_or_else(|| bad("unclosed W set"))?;
        let mut w = BTreeSet::new();
        for t in ws.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            w.insert(g.vertex(t)?);
        }
        let rest = rest.trim();
        let mut f = BTreeMap::new();
        if !rest.is_empty() {
            let body =
                rest.strip_prefix("f={").and_then(|r| r.strip_suffix('}')).ok_or_else(|| bad("expected `f={...}`"))?;
            for item in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (c, o) = item.split_once(':').ok_or_else(|| bad("expected `cycle:order`"))?;
                let path = DirectedPath::parse(g, c)?;
                let cycle = Cycle::new(g, path)?.canonical(g);
                let order = match o.trim() {
                    "inf" => CycleOrder::Infinite,
                    n => match n.parse::<u32>() {
                        Ok(k) if k >= 1 => CycleOrder::Finite(k),
                        _ => return Err(bad(&format!("bad order `{n}`"))),
                    },
                };
                if f.insert(cycle, order).is_some() {
                    return Err(bad("cycle listed twice"));
                }
            }
        }
        Ok(CongruencePair { w, f })
    }

    pub fn display(&self, g: &Graph) -> String {
        let ws: Vec<&str> = self.w.iter().map(|&v| g.vertex_name(v)).collect();
        let fs: Vec<String> = self.f.iter().map(|(c, o)| format!("{}:{}", c.path().display(g), o)).collect();
        format!("W={{{}}} f={{{}}}", ws.join(","), fs.join(", "))
    }
}

/// Canonical representatives of the cycles with every vertex in `w`.
pub fn cycles_in(g: &Graph, w: &BTreeSet<VertexId>) -> Vec<Cycle> {
    cycles_up_to_conjugacy(g).into_iter().filter(|c| c.vertices(g).iter().all(|v| w.contains(v))).collect()
}

pub fn validate_pair(g: &Graph, pair: &CongruencePair) -> bool {
    if pair.w.iter().any(|&v| !g.contains_vertex(v) || g.out_degree(v) != 1) {
        return false;
    }
    if pair.f.values().any(|o| *o == CycleOrder::Finite(0)) {
        return false;
    }
    let want: BTreeSet<Cycle> = cycles_in(g, &pair.w).into_iter().collect();
    let have: BTreeSet<Cycle> = pair.f.keys().cloned().collect();
    want == have
}

fn require_valid(g: &Graph, pair: &CongruencePair) -> Result<()> {
    if validate_pair(g, pair) {
        Ok(())
    } else {
        Err(Error::InvalidPair(pair.display(g)))
    }
}

/// The W-cycle through `r`, as its edge set, length and order.
fn w_cycle_at(g: &Graph, pair: &CongruencePair, r: VertexId) -> Option<(BTreeSet<EdgeId>, usize, CycleOrder)> {
    let mut edges = Vec::new();
    let mut v = r;
    loop {
        if !pair.w.contains(&v) || edges.len() > g.num_vertices() {
            return None;
        }
        let e = g.out_edges(v)[0];
        edges.push(e);
        v = g.rng(e);
        if v == r {
            break;
        }
    }
    let cycle = Cycle::new(g, DirectedPath::from_edges(g, &edges).ok()?).ok()?.canonical(g);
    let order = *pair.f.get(&cycle)?;
    let len = edges.len();
    Some((edges.into_iter().collect(), len, order))
}

/// Walk of length `n` from `v` along unique out-edges.
fn walk(g: &Graph, v: VertexId, n: usize) -> DirectedPath {
    let mut p = DirectedPath::empty(v);
    for _ in 0..n {
        let e = g.out_edges(p.end())[0];
        p.push(g, e).unwrap();
    }
    p
}

fn split_suffix(g: &Graph, p: &DirectedPath, edges: &BTreeSet<EdgeId>) -> (DirectedPath, usize) {
    let k = p.edges().iter().rev().take_while(|e| edges.contains(e)).count();
    (p.prefix(g, p.len() - k), k)
}

/// Normal form for `℘(W, f)`. When `r(p)` lies on a W-cycle `C` of length `L`,
/// the trailing runs of `C` are cut from `p` and `q` and their length
/// difference (taken mod `f(C)·L` when finite) is put back on one side; if that
/// difference vanishes, common trailing edges with source in `W` are stripped.
pub fn quotient_normal_form(g: &Graph, pair: &CongruencePair, x: &GisElement) -> GisElement {
    let Some((p, q)) = x.pair() else {
        return GisElement::zero();
    };
    let (mut p, mut q) = (p.clone(), q.clone());
    if let Some((cedges, len, order)) = w_cycle_at(g, pair, p.end()) {
        let (p0, kp) = split_suffix(g, &p, &cedges);
        let (q0, kq) = split_suffix(g, &q, &cedges);
        let mut n = kp as i64 - kq as i64;
        if let CycleOrder::Finite(f) = order {
            n = n.rem_euclid(f as i64 * len as i64);
        }
        if n > 0 {
            let tail = walk(g, p0.end(), n as usize);
            return GisElement::new(p0.concat(&tail).unwrap(), q0).expect("walk ends at r(q0)");
        }
        if n < 0 {
            let tail = walk(g, q0.end(), (-n) as usize);
            return GisElement::new(p0, q0.concat(&tail).unwrap()).expect("walk ends at r(p0)");
        }
        p = p0;
        q = q0;
    }
    while let (Some(a), Some(b)) = (p.last_edge(), q.last_edge()) {
        if a != b || !pair.w.contains(&g.src(a)) {
            break;
        }
        p.pop_last(g);
        q.pop_last(g);
    }
    GisElement::new(p, q).expect("stripping keeps ranges equal")
}

pub fn quotient_equal(g: &Graph, pair: &CongruencePair, x: &GisElement, y: &GisElement) -> Result<bool> {
    require_valid(g, pair)?;
    Ok(quotient_normal_form(g, pair, x) == quotient_normal_form(g, pair, y))
}

/// True iff every `v ∈ W` carries its out-edge as a loop with `f = 1`.
pub fn preserves_gis(g: &Graph, pair: &CongruencePair) -> Result<bool> {
    require_valid(g, pair)?;
    Ok(pair.w.iter().all(|&v| {
        let e = g.out_edges(v)[0];
        if g.rng(e) != v {
            return false;
        }
        let c = Cycle::new(g, DirectedPath::edge(g, e)).expect("loop is a cycle");
        pair.f.get(&c) == Some(&CycleOrder::Finite(1))
    }))
}

/// Γ with the W-loops removed, plus the retraction `I(Γ) → I(Δ')`.
#[derive(Clone, Debug)]
pub struct LoopQuotient {
    pub graph: Graph,
    loops: BTreeSet<EdgeId>,
    emap: Vec<Option<EdgeId>>,
}

impl LoopQuotient {
    pub fn new(g: &Graph, pair: &CongruencePair) -> Result<Self> {
        if !preserves_gis(g, pair)? {
            return Err(Error::Precondition("pair does not satisfy the loop conditions".into()));
        }
        let loops: BTreeSet<EdgeId> = pair.w.iter().map(|&v| g.out_edges(v)[0]).collect();
        let keep_edges: BTreeSet<EdgeId> = g.edges().filter(|e| !loops.contains(e)).collect();
        let graph = g.subgraph(&g.vertices().collect(), &keep_edges);
        let emap = g.edges().map(|e| graph.edge(g.edge_name(e)).ok()).collect();
        Ok(LoopQuotient { graph, loops, emap })
    }

    /// `p e^k (e*)^t q* ↦ pq*` for a W-loop `e` at `r(p)`.
    pub fn retract(&self, g: &Graph, x: &GisElement) -> GisElement {
        let Some((p, q)) = x.pair() else {
            return GisElement::zero();
        };
        let (p0, _) = split_suffix(g, p, &self.loops);
        let (q0, _) = split_suffix(g, q, &self.loops);
        let map = |d: &DirectedPath| {
            let edges = d.edges().iter().map(|e| self.emap[e.0].expect("no loop left")).collect();
            DirectedPath::new(&self.graph, d.start(), edges).expect("vertex ids are shared")
        };
        GisElement::new(map(&p0), map(&q0)).expect("ranges agree")
    }

    /// Inclusion `I(Δ') → I(Γ)`.
    pub fn include(&self, g: &Graph, x: &GisElement) -> GisElement {
        let Some((p, q)) = x.pair() else {
            return GisElement::zero();
        };
        let map = |d: &DirectedPath| {
            let edges = d.edges().iter().map(|&e| g.edge(self.graph.edge_name(e)).unwrap()).collect();
            DirectedPath::new(g, d.start(), edges).unwrap()
        };
        GisElement::new(map(p), map(q)).unwrap()
    }
}

pub fn quotient_graph_if_gis(g: &Graph, pair: &CongruencePair) -> Result<Graph> {
    Ok(LoopQuotient::new(g, pair)?.graph)
}

pub fn retraction(g: &Graph, pair: &CongruencePair, x: &GisElement) -> Result<GisElement> {
    Ok(LoopQuotient::new(g, pair)?.retract(g, x))
}

/// Every pair with `W` a subset of the out-degree-1 vertices and `f` valued in
/// `{1..max_f, ∞}`. Ordered by `W` (as a bitmask over those vertices), then `f`.
pub fn enumerate_pairs(g: &Graph, max_f: u32) -> Vec<CongruencePair> {
    let ones: Vec<VertexId> = g.vertices().filter(|&v| g.out_degree(v) == 1).collect();
    let all_cycles = cycles_up_to_conjugacy(g);
    let values: Vec<CycleOrder> =
        (1..=max_f).map(CycleOrder::Finite).chain(std::iter::once(CycleOrder::Infinite)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << ones.len()) {
        let w: BTreeSet<VertexId> =
            ones.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        let cs: Vec<&Cycle> = all_cycles.iter().filter(|c| c.vertices(g).iter().all(|v| w.contains(v))).collect();
        let mut idx = vec![0usize; cs.len()];
        loop {
            let f = cs.iter().zip(&idx).map(|(c, &i)| ((*c).clone(), values[i])).collect();
            out.push(CongruencePair { w: w.clone(), f });
            let mut k = cs.len();
            let mut carry = true;
            while carry && k > 0 {
                k -= 1;
                idx[k] += 1;
                if idx[k] == values.len() {
                    idx[k] = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
    }
    out
}

/// Generating pairs of `℘(W, f)`: `(e_v e_v*, v)` and `(c^f, s(c))` over all rotations.
pub fn pair_generators(g: &Graph, pair: &CongruencePair) -> Vec<(GisElement, GisElement)> {
    let mut gens = Vec::new();
    for &v in &pair.w {
        let e = DirectedPath::edge(g, g.out_edges(v)[0]);
        gens.push((GisElement::new(e.clone(), e).unwrap(), GisElement::vertex(v)));
    }
    for (c, o) in &pair.f {
        if let CycleOrder::Finite(n) = o {
            for rot in c.rotations(g) {
                let mut p = DirectedPath::empty(rot.path().start());
                for _ in 0..*n {
                    p = p.concat(rot.path()).unwrap();
                }
                gens.push((GisElement::path(p), GisElement::vertex(rot.path().start())));
            }
        }
    }
    gens
}

/// An equivalence relation on a bounded set of elements.
#[derive(Clone, Debug)]
pub struct BoundedRelation {
    pub elements: Vec<GisElement>,
    index: BTreeMap<GisElement, usize>,
    class: Vec<usize>,
}

impl BoundedRelation {
    pub fn index_of(&self, x: &GisElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn related(&self, x: &GisElement, y: &GisElement) -> Option<bool> {
        Some(self.class[self.index_of(x)?] == self.class[self.index_of(y)?])
    }

    pub fn related_idx(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }

    pub fn num_classes(&self) -> usize {
        self.class.iter().collect::<BTreeSet<_>>().len()
    }
}

/// Smallest equivalence on `enumerate_elements(g, max_len)` containing the
/// generators (those inside the bounded set) and closed under left and right
/// multiplication whenever both products stay inside the set.
pub fn closure_oracle(g: &Graph, generators: &[(GisElement, GisElement)], max_len: usize) -> BoundedRelation {
    let elements = enumerate_elements(g, max_len);
    let n = elements.len();
    let index: BTreeMap<GisElement, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mul: Vec<Vec<Option<usize>>> =
        elements.iter().map(|x| elements.iter().map(|y| index.get(&gis_multiply(x, y)).copied()).collect()).collect();
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in generators {
        if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
            uf.union(i, j);
        }
    }
    loop {
        let mut changed = false;
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            classes.entry(uf.find(i)).or_default().push(i);
        }
        for members in classes.values() {
            for (a, &x) in members.iter().enumerate() {
                for &y in &members[a + 1..] {
                    for k in 0..n {
                        if let (Some(u), Some(v)) = (mul[k][x], mul[k][y]) {
                            changed |= uf.union(u, v);
                        }
                        if let (Some(u), Some(v)) = (mul[x][k], mul[y][k]) {
                            changed |= uf.union(u, v);
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let class = (0..n).map(|i| uf.find(i)).collect();
    BoundedRelation { elements, index, class }
}
