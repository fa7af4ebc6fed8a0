//! The Leavitt inverse semigroup LI(Γ): I(Γ) modulo `e_v e_v* = v` at
//! out-degree-1 vertices.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gis::{gis_inverse, gis_multiply, ElementDisplay, GisElement};
use crate::graph::{
    check_morphism, sim_classes, strongly_connected_components, DirectedPath, EdgeId, Graph, GraphMorphism,
    MorphismKind, VertexId,
};

/// An element of I(Γ) with no common trailing edge whose source has out-degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiElement(GisElement);

impl LiElement {
    pub fn zero() -> Self {
        LiElement(GisElement::zero())
    }

    pub fn as_gis(&self) -> &GisElement {
        &self.0
    }

    pub fn into_gis(self) -> GisElement {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> ElementDisplay<'a> {
        self.0.display(g)
    }
}

pub fn li_reduce(g: &Graph, x: &GisElement) -> LiElement {
    let Some((p, q)) = x.pair() else {
        return LiElement::zero();
    };
    let (mut p, mut q) = (p.clone(), q.clone());
    while let (Some(a), Some(b)) = (p.last_edge(), q.last_edge()) {
        if a != b || g.out_degree(g.src(a)) != 1 {
            break;
        }
        p.pop_last(g);
        q.pop_last(g);
    }
    LiElement(GisElement::pair_unchecked(p, q))
}

pub fn li_multiply(g: &Graph, x: &LiElement, y: &LiElement) -> LiElement {
    li_reduce(g, &gis_multiply(&x.0, &y.0))
}

pub fn li_inverse(x: &LiElement) -> LiElement {
    LiElement(gis_inverse(&x.0))
}

pub fn li_equal(g: &Graph, x: &GisElement, y: &GisElement) -> bool {
    li_reduce(g, x) == li_reduce(g, y)
}

/// True iff `x = p e e* p*` with `p` an NE path and `s(e)` of out-degree at least 2.
pub fn is_maximal_nonvertex_idempotent(g: &Graph, x: &LiElement) -> Result<bool> {
    let Some((p, q)) = x.0.pair() else {
        return Err(Error::NotIdempotent);
    };
    if p != q {
        return Err(Error::NotIdempotent);
    }
    let Some(e) = p.last_edge() else {
        return Ok(false);
    };
    let prefix = p.prefix(g, p.len() - 1);
    Ok(prefix.is_ne(g) && g.out_degree(g.src(e)) >= 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GreenRelation {
    R,
    L,
    H,
    D,
    J,
}

impl FromStr for GreenRelation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(GreenRelation::R),
            "L" | "l" => Ok(GreenRelation::L),
            "H" | "h" => Ok(GreenRelation::H),
            "D" | "d" => Ok(GreenRelation::D),
            "J" | "j" => Ok(GreenRelation::J),
            _ => Err(Error::Syntax(format!("unknown Green relation `{s}`"))),
        }
    }
}

/// Green's relations on LI(Γ). Zero is related only to itself.
pub fn green_relation(g: &Graph, rel: GreenRelation, x: &GisElement, y: &GisElement) -> bool {
    let (x, y) = (li_reduce(g, x), li_reduce(g, y));
    let (Some((p, _)), Some((s, _))) = (x.0.pair(), y.0.pair()) else {
        return x.is_zero() && y.is_zero();
    };
    let r_rel = || li_equal(g, &x.0.range_idempotent(), &y.0.range_idempotent());
    let l_rel = || li_equal(g, &x.0.domain_idempotent(), &y.0.domain_idempotent());
    match rel {
        GreenRelation::R => r_rel(),
        GreenRelation::L => l_rel(),
        GreenRelation::H => r_rel() && l_rel(),
        GreenRelation::D => sim_classes(g).same(p.end(), s.end()),
        GreenRelation::J => {
            let sim = sim_classes(g);
            let scc = strongly_connected_components(g);
            let a = sim.block(sim.block_of(p.end()));
            let b = sim.block(sim.block_of(s.end()));
            a.iter().any(|&u| b.iter().any(|&v| scc.same(u, v)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupType {
    Trivial,
    IntegersZ,
}

/// Follows out-degree-1 edges from `v`; true iff the walk enters a cycle.
fn ne_walk_cycles(g: &Graph, v: VertexId) -> bool {
    let mut seen = vec![false; g.num_vertices()];
    let mut w = v;
    while g.out_degree(w) == 1 {
        if seen[w.0] {
            return true;
        }
        seen[w.0] = true;
        w = g.rng(g.out_edges(w)[0]);
    }
    false
}

/// Maximal subgroup at a nonzero idempotent `pp*`.
pub fn max_subgroup(g: &Graph, e: &GisElement) -> Result<GroupType> {
    match e.pair() {
        Some((p, q)) if p == q => {
            Ok(if ne_walk_cycles(g, p.end()) { GroupType::IntegersZ } else { GroupType::Trivial })
        }
        _ => Err(Error::NotIdempotent),
    }
}

/// True iff the graph has no NE cycle.
pub fn is_combinatorial(g: &Graph) -> bool {
    !g.vertices().any(|v| ne_walk_cycles(g, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BrandtDescriptor {
    pub index_size: usize,
    pub group: GroupType,
}

impl fmt::Display for BrandtDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grp = match self.group {
            GroupType::Trivial => "trivial",
            GroupType::IntegersZ => "Z",
        };
        write!(f, "B({}, {})", self.index_size, grp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BrandtClass {
    Brandt(BrandtDescriptor),
    NotCircleImmersible,
}

pub fn classify_brandt(g: &Graph) -> Result<BrandtClass> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertices().any(|v| g.out_degree(v) >= 2) {
        return Ok(BrandtClass::NotCircleImmersible);
    }
    let group = if g.num_edges() + 1 == g.num_vertices() { GroupType::Trivial } else { GroupType::IntegersZ };
    Ok(BrandtClass::Brandt(BrandtDescriptor { index_size: g.num_vertices(), group }))
}

/// Generators `r_a = p q_a p*` of a polycyclic submonoid, one per bouquet letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycyclicWitness {
    pub prefix: DirectedPath,
    pub cycles: BTreeMap<EdgeId, DirectedPath>,
    pub generators: BTreeMap<EdgeId, GisElement>,
}

pub fn polycyclic_witness(m: &GraphMorphism, v: VertexId) -> Result<PolycyclicWitness> {
    if check_morphism(m) != MorphismKind::DirectedCover {
        return Err(Error::Precondition("morphism is not a directed cover".into()));
    }
    let (g, b) = (m.domain(), m.codomain());
    if b.num_vertices() != 1 {
        return Err(Error::Precondition("codomain is not a bouquet".into()));
    }
    if !g.contains_vertex(v) {
        return Err(Error::Precondition("start vertex not in the domain".into()));
    }
    // Cycle through the a-edge at w, if r(that edge) leads back to w.
    let cycle_at = |w: VertexId, a: EdgeId| -> Option<DirectedPath> {
        let e = *g.out_edges(w).iter().find(|&&d| m.map_edge(d) == a)?;
        let back = g.shortest_path(g.rng(e), w)?;
        DirectedPath::edge(g, e).concat(&back)
    };
    let good = |w: VertexId| b.edges().all(|a| cycle_at(w, a).is_some());
    let mut seen = vec![false; g.num_vertices()];
    seen[v.0] = true;
    let mut queue = VecDeque::from([v]);
    let mut target = None;
    while let Some(u) = queue.pop_front() {
        if good(u) {
            target = Some(u);
            break;
        }
        for &e in g.out_edges(u) {
            if !seen[g.rng(e).0] {
                seen[g.rng(e).0] = true;
                queue.push_back(g.rng(e));
            }
        }
    }
    let w = target.ok_or_else(|| Error::Internal("no vertex carries a cycle for every letter".into()))?;
    let prefix = g.shortest_path(v, w).expect("w was reached by search");
    let mut cycles = BTreeMap::new();
    let mut generators = BTreeMap::new();
    for a in b.edges() {
        let c = cycle_at(w, a).expect("w is good");
        let r = GisElement::new(prefix.concat(&c).expect("cycle at r(prefix)"), prefix.clone())?;
        cycles.insert(a, c);
        generators.insert(a, r);
    }
    let pp = GisElement::new(prefix.clone(), prefix.clone())?;
    for (a, ra) in &generators {
        for (b2, rb) in &generators {
            let prod = gis_multiply(&gis_inverse(ra), rb);
            let expect = if a == b2 { pp.clone() } else { GisElement::zero() };
            if prod != expect {
                return Err(Error::Internal("polycyclic relations fail".into()));
            }
        }
    }
    Ok(PolycyclicWitness { prefix, cycles, generators })
}

/// Nonzero `x, y` have a nonzero common lower bound in I(Γ) iff one is a
/// common right extension of the other.
pub fn have_common_lower_bound(x: &GisElement, y: &GisElement) -> bool {
    let (Some((p, q)), Some((s, t))) = (x.pair(), y.pair()) else {
        return false;
    };
    let ext = |a: &DirectedPath, b: &DirectedPath, c: &DirectedPath, d: &DirectedPath| matches!((c.strip_prefix(a), d.strip_prefix(b)), (Some(z1), Some(z2)) if z1.edges() == z2.edges());
    ext(p, q, s, t) || ext(s, t, p, q)
}

/// `x -> y` tested over the lower bounds `(pt)(qt)*` of `x` with `|t| <= depth`.
fn lenz_arrow(g: &Graph, x: &GisElement, y: &GisElement, depth: usize) -> bool {
    let Some((p, q)) = x.pair() else {
        return true;
    };
    let mut frontier = vec![DirectedPath::empty(p.end())];
    for level in 0..=depth {
        for t in &frontier {
            let lower = GisElement::pair_unchecked(p.concat(t).unwrap(), q.concat(t).unwrap());
            if !have_common_lower_bound(&lower, y) {
                return false;
            }
        }
        if level == depth {
            break;
        }
        let mut next = Vec::new();
        for t in &frontier {
            for &e in g.out_edges(t.end()) {
                let mut u = t.clone();
                u.push(g, e).unwrap();
                next.push(u);
            }
        }
        frontier = next;
    }
    true
}

/// Bounded test of Lenz's relation `x <-> y` on I(Γ).
pub fn lenz_oracle(g: &Graph, x: &GisElement, y: &GisElement, depth: usize) -> bool {
    if x.is_zero() || y.is_zero() {
        return x.is_zero() && y.is_zero();
    }
    lenz_arrow(g, x, y, depth) && lenz_arrow(g, y, x, depth)
}

/// `max(|p|+|q|) + |Γ⁰|` over the two operands.
pub fn lenz_default_depth(g: &Graph, x: &GisElement, y: &GisElement) -> usize {
    x.len().max(y.len()) + g.num_vertices()
}
