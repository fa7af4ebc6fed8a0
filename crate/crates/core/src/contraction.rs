//! NE spanning forests, contracted graphs, the maps χ̃ and χ̂, connectors, and
//! the LI-isomorphism decision with an explicit witness.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gis::GisElement;
use crate::graph::{sim_classes, DirectedPath, EdgeId, Graph, Partition, VertexId};
use crate::leavitt::{li_inverse, li_multiply, li_reduce, LiElement};

/// One spanning tree of NE edges per ~-class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeSpanningForest {
    classes: Partition,
    tree: BTreeSet<EdgeId>,
    tree_out: Vec<Option<EdgeId>>,
    roots: Vec<VertexId>,
}

impl NeSpanningForest {
    pub fn classes(&self) -> &Partition {
        &self.classes
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.tree
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.tree.contains(&e)
    }

    /// Tree edges inside the class of `v`.
    pub fn class_tree(&self, g: &Graph, v: VertexId) -> BTreeSet<EdgeId> {
        self.tree.iter().copied().filter(|&e| self.classes.same(g.src(e), v)).collect()
    }

    /// The vertex of the class of `v` with no tree out-edge.
    pub fn root(&self, v: VertexId) -> VertexId {
        self.roots[self.classes.block_of(v)]
    }

    /// The tree path from `v` to the root of its class.
    pub fn path_to_root(&self, g: &Graph, v: VertexId) -> DirectedPath {
        let mut p = DirectedPath::empty(v);
        while let Some(e) = self.tree_out[p.end().0] {
            p.push(g, e).expect("tree edges chain");
        }
        p
    }
}

/// The NE cycles of `g`, each as its edge sequence starting at the smallest edge.
pub fn ne_cycles(g: &Graph) -> Vec<Vec<EdgeId>> {
    let mut seen = vec![false; g.num_vertices()];
    let mut out = Vec::new();
    for v in g.vertices() {
        // Walk the out-degree-1 chain; a repeat marks an NE cycle.
        let mut order = Vec::new();
        let mut w = v;
        while g.out_degree(w) == 1 && !seen[w.0] && !order.contains(&w) {
            order.push(w);
            w = g.rng(g.out_edges(w)[0]);
        }
        if let Some(i) = order.iter().position(|&u| u == w) {
            let mut cyc: Vec<EdgeId> = order[i..].iter().map(|&u| g.out_edges(u)[0]).collect();
            let k = (0..cyc.len()).min_by_key(|&k| cyc[k]).unwrap();
            cyc.rotate_left(k);
            out.push(cyc);
        }
        for u in order {
            seen[u.0] = true;
        }
    }
    out.sort();
    out
}

/// NE spanning forest. `choice` names the excluded edge of some NE cycles; any
/// NE cycle it does not mention loses its smallest edge.
pub fn ne_spanning_forest(g: &Graph, choice: &[EdgeId]) -> Result<NeSpanningForest> {
    let cycles = ne_cycles(g);
    let mut excluded = BTreeSet::new();
    for &e in choice {
        if !g.contains_edge(e) {
            return Err(Error::InvalidChoice(format!("edge index {}", e.0)));
        }
        let Some(c) = cycles.iter().find(|c| c.contains(&e)) else {
            return Err(Error::InvalidChoice(format!("{} is not on an NE cycle", g.edge_name(e))));
        };
        if c.iter().any(|d| *d != e && choice.contains(d)) {
            return Err(Error::InvalidChoice(format!("two edges chosen on the cycle through {}", g.edge_name(e))));
        }
        excluded.insert(e);
    }
    for c in &cycles {
        if !c.iter().any(|e| excluded.contains(e)) {
            excluded.insert(c[0]);
        }
    }
    let classes = sim_classes(g);
    let mut tree = BTreeSet::new();
    let mut tree_out = vec![None; g.num_vertices()];
    let mut roots = vec![None; classes.len()];
    for v in g.vertices() {
        let outs = g.out_edges(v);
        if outs.len() == 1 && !excluded.contains(&outs[0]) {
            tree.insert(outs[0]);
            tree_out[v.0] = Some(outs[0]);
        } else {
            let b = classes.block_of(v);
            if roots[b].is_some() {
                return Err(Error::Internal("class with two roots".into()));
            }
            roots[b] = Some(v);
        }
    }
    let roots = roots
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::Internal("class without root".into())))
        .collect::<Result<_>>()?;
    Ok(NeSpanningForest { classes, tree, tree_out, roots })
}

/// Γ̄: one vertex per ~-class, one edge per non-forest edge of Γ.
#[derive(Clone, Debug)]
pub struct ContractedGraph {
    pub graph: Graph,
    pub forest: NeSpanningForest,
    class_of: Vec<VertexId>,
    edge_of: Vec<Option<EdgeId>>,
    edge_back: Vec<EdgeId>,
    members: Vec<Vec<VertexId>>,
}

impl ContractedGraph {
    pub fn chi_vertex(&self, v: VertexId) -> VertexId {
        self.class_of[v.0]
    }

    pub fn chi_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_of[e.0]
    }

    /// The Γ-edge behind a contracted edge.
    pub fn lift_edge(&self, e: EdgeId) -> EdgeId {
        self.edge_back[e.0]
    }

    pub fn members(&self, c: VertexId) -> &[VertexId] {
        &self.members[c.0]
    }

    pub fn class_size(&self, c: VertexId) -> usize {
        self.members[c.0].len()
    }

    /// Smallest vertex of each class.
    pub fn default_base(&self) -> Vec<VertexId> {
        self.members.iter().map(|m| m[0]).collect()
    }
}

/// Contracted vertices take the name of their smallest member; edges keep their names.
pub fn contract(g: &Graph, forest: &NeSpanningForest) -> ContractedGraph {
    let classes = forest.classes();
    let mut graph = Graph::new();
    for b in classes.blocks() {
        graph.add_vertex(g.vertex_name(b[0])).expect("names are unique");
    }
    let class_of: Vec<VertexId> = g.vertices().map(|v| VertexId(classes.block_of(v))).collect();
    let mut edge_of = vec![None; g.num_edges()];
    let mut edge_back = Vec::new();
    for e in g.edges().filter(|&e| !forest.contains(e)) {
        let s = g.vertex_name(classes.block(classes.block_of(g.src(e)))[0]);
        let r = g.vertex_name(classes.block(classes.block_of(g.rng(e)))[0]);
        edge_of[e.0] = Some(graph.add_edge(g.edge_name(e), s, r).expect("names are unique"));
        edge_back.push(e);
    }
    let members = classes.blocks().to_vec();
    ContractedGraph { graph, forest: forest.clone(), class_of, edge_of, edge_back, members }
}

/// `p[v1, v2] = p q*` with `p`, `q` the tree paths from `v1`, `v2` to where they meet.
pub fn connector(g: &Graph, forest: &NeSpanningForest, v1: VertexId, v2: VertexId) -> Result<GisElement> {
    if !forest.classes().same(v1, v2) {
        return Err(Error::NotRelated(g.vertex_name(v1).into(), g.vertex_name(v2).into()));
    }
    let a = forest.path_to_root(g, v1);
    let b = forest.path_to_root(g, v2);
    let bv = b.vertices(g);
    let av = a.vertices(g);
    let i = av.iter().position(|v| bv.contains(v)).expect("both paths end at the root");
    let j = bv.iter().position(|v| *v == av[i]).unwrap();
    GisElement::new(a.prefix(g, i), b.prefix(g, j))
}

fn conn_li(g: &Graph, forest: &NeSpanningForest, v1: VertexId, v2: VertexId) -> LiElement {
    li_reduce(g, &connector(g, forest, v1, v2).expect("same class"))
}

/// χ̃: delete forest edges and rename to Γ̄, reduced in LI(Γ̄).
pub fn chi_tilde(_g: &Graph, cg: &ContractedGraph, x: &GisElement) -> GisElement {
    let Some((p, q)) = x.pair() else {
        return GisElement::zero();
    };
    let map = |d: &DirectedPath| {
        let edges = d.edges().iter().filter_map(|&e| cg.chi_edge(e)).collect();
        DirectedPath::new(&cg.graph, cg.chi_vertex(d.start()), edges).expect("χ carries paths to paths")
    };
    let y = GisElement::new(map(p), map(q)).expect("ranges map to one class");
    li_reduce(&cg.graph, &y).into_gis()
}

fn check_base(g: &Graph, cg: &ContractedGraph, base: &[VertexId]) -> Result<()> {
    if base.len() != cg.graph.num_vertices() {
        return Err(Error::Precondition("one base vertex per class".into()));
    }
    for (c, &b) in base.iter().enumerate() {
        if !g.contains_vertex(b) || cg.chi_vertex(b) != VertexId(c) {
            return Err(Error::Precondition(format!("base vertex for class {} is outside it", c)));
        }
    }
    Ok(())
}

fn chi_hat_path(g: &Graph, cg: &ContractedGraph, base: &[VertexId], p: &DirectedPath) -> LiElement {
    let f = &cg.forest;
    let mut cur = base[p.start().0];
    let mut acc = li_reduce(g, &GisElement::vertex(cur));
    for &eb in p.edges() {
        let e = cg.lift_edge(eb);
        acc = li_multiply(g, &acc, &conn_li(g, f, cur, g.src(e)));
        acc = li_multiply(g, &acc, &li_reduce(g, &GisElement::edge(g, e)));
        cur = g.rng(e);
    }
    li_multiply(g, &acc, &conn_li(g, f, cur, base[p.end().0]))
}

/// χ̂: lift an element of LI(Γ̄) through connectors anchored at `base`.
pub fn chi_hat(g: &Graph, cg: &ContractedGraph, base: &[VertexId], x: &GisElement) -> Result<GisElement> {
    check_base(g, cg, base)?;
    let Some((p, q)) = x.pair() else {
        return Ok(GisElement::zero());
    };
    let hp = chi_hat_path(g, cg, base, p);
    let hq = chi_hat_path(g, cg, base, q);
    Ok(li_multiply(g, &hp, &li_inverse(&hq)).into_gis())
}

/// Data realising an isomorphism `LI(Γ) → LI(Δ)`.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub domain: Graph,
    pub codomain: Graph,
    pub contracted_domain: ContractedGraph,
    pub contracted_codomain: ContractedGraph,
    /// Γ⁰ → Δ⁰.
    pub psi: Vec<VertexId>,
    /// Γ̄⁰ → Δ̄⁰.
    pub phi_vertex: Vec<VertexId>,
    /// Γ̄¹ → Δ̄¹.
    pub phi_edge: Vec<EdgeId>,
    pub base_domain: Vec<VertexId>,
    pub base_codomain: Vec<VertexId>,
}

/// Multigraph isomorphism `a → b` preserving the vertex labels.
pub fn find_labeled_isomorphism(
    a: &Graph,
    b: &Graph,
    label_a: &[usize],
    label_b: &[usize],
) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
    let n = a.num_vertices();
    if n != b.num_vertices() || a.num_edges() != b.num_edges() {
        return None;
    }
    let mult = |g: &Graph| {
        let mut m = vec![vec![0usize; g.num_vertices()]; g.num_vertices()];
        for e in g.edges() {
            m[g.src(e).0][g.rng(e).0] += 1;
        }
        m
    };
    let (ma, mb) = (mult(a), mult(b));
    let sig = |g: &Graph, m: &[Vec<usize>], lab: &[usize], v: usize| {
        let indeg: usize = (0..g.num_vertices()).map(|u| m[u][v]).sum();
        (lab[v], g.out_degree(VertexId(v)), indeg, m[v][v])
    };
    let sa: Vec<_> = (0..n).map(|v| sig(a, &ma, label_a, v)).collect();
    let sb: Vec<_> = (0..n).map(|v| sig(b, &mb, label_b, v)).collect();
    let (mut xa, mut xb) = (sa.clone(), sb.clone());
    xa.sort();
    xb.sort();
    if xa != xb {
        return None;
    }

    fn search(
        k: usize,
        sa: &[(usize, usize, usize, usize)],
        sb: &[(usize, usize, usize, usize)],
        ma: &[Vec<usize>],
        mb: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == sa.len() {
            return true;
        }
        for c in 0..sb.len() {
            if used[c] || sa[k] != sb[c] {
                continue;
            }
            let ok = (0..k).all(|u| ma[k][u] == mb[c][map[u]] && ma[u][k] == mb[map[u]][c]);
            if !ok {
                continue;
            }
            map.push(c);
            used[c] = true;
            if search(k + 1, sa, sb, ma, mb, map, used) {
                return true;
            }
            map.pop();
            used[c] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if !search(0, &sa, &sb, &ma, &mb, &mut map, &mut used) {
        return None;
    }
    let mut by_pair: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
    for e in b.edges() {
        by_pair.entry((b.src(e).0, b.rng(e).0)).or_default().push(e);
    }
    let mut cursor: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let emap = a
        .edges()
        .map(|e| {
            let key = (map[a.src(e).0], map[a.rng(e).0]);
            let i = cursor.entry(key).or_insert(0);
            let img = by_pair[&key][*i];
            *i += 1;
            img
        })
        .collect();
    Some((map.into_iter().map(VertexId).collect(), emap))
}

/// Decides `LI(Γ) ≅ LI(Δ)` with default forests and bases.
pub fn li_isomorphic(g: &Graph, d: &Graph) -> Option<IsoWitness> {
    let fg = ne_spanning_forest(g, &[]).expect("default choice is valid");
    let fd = ne_spanning_forest(d, &[]).expect("default choice is valid");
    li_isomorphic_with(g, d, &fg, &fd)
}

pub fn li_isomorphic_with(g: &Graph, d: &Graph, fg: &NeSpanningForest, fd: &NeSpanningForest) -> Option<IsoWitness> {
    let cg = contract(g, fg);
    let cd = contract(d, fd);
    let la: Vec<usize> = cg.graph.vertices().map(|c| cg.class_size(c)).collect();
    let lb: Vec<usize> = cd.graph.vertices().map(|c| cd.class_size(c)).collect();
    let (phi_vertex, phi_edge) = find_labeled_isomorphism(&cg.graph, &cd.graph, &la, &lb)?;
    let mut psi = vec![VertexId(0); g.num_vertices()];
    for c in cg.graph.vertices() {
        for (&u, &v) in cg.members(c).iter().zip(cd.members(phi_vertex[c.0])) {
            psi[u.0] = v;
        }
    }
    Some(IsoWitness {
        domain: g.clone(),
        codomain: d.clone(),
        base_domain: cg.default_base(),
        base_codomain: cd.default_base(),
        contracted_domain: cg,
        contracted_codomain: cd,
        psi,
        phi_vertex,
        phi_edge,
    })
}

impl IsoWitness {
    /// `φ̄(χ(v)) = χ(ψ(v))` for every vertex, and ψ is a bijection.
    pub fn is_consistent(&self) -> bool {
        let (cg, cd) = (&self.contracted_domain, &self.contracted_codomain);
        let image: BTreeSet<VertexId> = self.psi.iter().copied().collect();
        image.len() == self.codomain.num_vertices()
            && self.domain.vertices().all(|v| self.phi_vertex[cg.chi_vertex(v).0] == cd.chi_vertex(self.psi[v.0]))
    }

    /// φ̄ applied to an element over Γ̄.
    fn phi_bar(&self, x: &GisElement) -> GisElement {
        let Some((p, q)) = x.pair() else {
            return GisElement::zero();
        };
        let cd = &self.contracted_codomain.graph;
        let map = |d: &DirectedPath| {
            let edges = d.edges().iter().map(|e| self.phi_edge[e.0]).collect();
            DirectedPath::new(cd, self.phi_vertex[d.start().0], edges).expect("graph isomorphism")
        };
        GisElement::new(map(p), map(q)).expect("graph isomorphism")
    }

    /// `φ(pq*) = p[ψ(s(p)), s(φ̃(p))] · φ̃(pq*) · p[s(φ̃(q)), ψ(s(q))]`.
    pub fn apply(&self, x: &GisElement) -> LiElement {
        let (g, d) = (&self.domain, &self.codomain);
        let (cg, cd) = (&self.contracted_domain, &self.contracted_codomain);
        let x = li_reduce(g, x);
        let Some((p, q)) = x.as_gis().pair() else {
            return LiElement::zero();
        };
        let bar = self.phi_bar(&chi_tilde(g, cg, x.as_gis()));
        let tilde = li_reduce(d, &chi_hat(d, cd, &self.base_codomain, &bar).expect("base is valid"));
        let anchor = |v: VertexId| self.base_codomain[self.phi_vertex[cg.chi_vertex(v).0].0];
        let left = conn_li(d, &cd.forest, self.psi[p.start().0], anchor(p.start()));
        let right = conn_li(d, &cd.forest, anchor(q.start()), self.psi[q.start().0]);
        li_multiply(d, &li_multiply(d, &left, &tilde), &right)
    }

    /// Image of every Γ-edge, in edge order.
    pub fn edge_images(&self) -> Vec<(EdgeId, LiElement)> {
        self.domain.edges().map(|e| (e, self.apply(&GisElement::edge(&self.domain, e)))).collect()
    }
}

pub fn apply_witness(w: &IsoWitness, x: &GisElement) -> LiElement {
    w.apply(x)
}
