//! Leavitt path algebras over ℚ in the natural basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::contraction::{connector, IsoWitness};
use crate::error::{Error, Result};
use crate::gis::{enumerate_elements, gis_multiply, paths_up_to, GisElement};
use crate::graph::{DirectedPath, EdgeId, Graph, VertexId};
use crate::leavitt::{li_inverse, li_multiply, li_reduce, LiElement};

/// The special edge γ(v) at every non-sink v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialEdgeChoice {
    gamma: Vec<Option<EdgeId>>,
}

impl SpecialEdgeChoice {
    /// Smallest out-edge at every non-sink.
    pub fn default_for(g: &Graph) -> Self {
        SpecialEdgeChoice { gamma: g.vertices().map(|v| g.out_edges(v).first().copied()).collect() }
    }

    /// Default choice overridden by `picks`, each an out-edge of its own source.
    pub fn with(g: &Graph, picks: &[EdgeId]) -> Result<Self> {
        let mut c = Self::default_for(g);
        let mut seen = BTreeSet::new();
        for &e in picks {
            if !g.contains_edge(e) {
                return Err(Error::InvalidChoice(format!("edge index {}", e.0)));
            }
            if !seen.insert(g.src(e)) {
                return Err(Error::InvalidChoice(format!("two special edges at {}", g.vertex_name(g.src(e)))));
            }
            c.gamma[g.src(e).0] = Some(e);
        }
        Ok(c)
    }

    pub fn gamma(&self, v: VertexId) -> Option<EdgeId> {
        self.gamma[v.0]
    }

    pub fn is_special(&self, g: &Graph, e: EdgeId) -> bool {
        self.gamma[g.src(e).0] == Some(e)
    }

    /// Every choice at once; the count is the product of the out-degrees.
    pub fn all(g: &Graph) -> Vec<SpecialEdgeChoice> {
        let mut out = vec![Self::default_for(g)];
        for v in g.vertices() {
            if g.out_degree(v) < 2 {
                continue;
            }
            out = out
                .into_iter()
                .flat_map(|c| {
                    g.out_edges(v).iter().map(move |&e| {
                        let mut d = c.clone();
                        d.gamma[v.0] = Some(e);
                        d
                    })
                })
                .collect();
        }
        out
    }
}

/// A finite ℚ-combination of natural-basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<GisElement, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c·x` with `x` taken as a natural-basis element.
    pub fn term(x: GisElement, c: BigRational) -> Self {
        let mut a = Self::zero();
        a.add_term(x, c);
        a
    }

    pub fn basis(x: GisElement) -> Self {
        Self::term(x, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &GisElement) -> BigRational {
        self.terms.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GisElement, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, x: GisElement, c: BigRational) {
        if x.is_zero() || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> AlgebraDisplay<'a> {
        AlgebraDisplay { g, x: self }
    }
}

pub struct AlgebraDisplay<'a> {
    g: &'a Graph,
    x: &'a AlgebraElement,
}

impl fmt::Display for AlgebraDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.x.terms().collect();
        terms.sort_by_cached_key(|(x, _)| x.word_key());
        for (i, (x, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, x.display(self.g))?;
        }
        Ok(())
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Natural-basis membership: nonzero, and no shared special last edge.
pub fn is_basis_element(g: &Graph, gamma: &SpecialEdgeChoice, x: &GisElement) -> bool {
    match x.pair() {
        None => false,
        Some((p, q)) => match (p.last_edge(), q.last_edge()) {
            (Some(a), Some(b)) if a == b => !gamma.is_special(g, a),
            _ => true,
        },
    }
}

/// Rewrites `x` in the natural basis.
pub fn to_basis(g: &Graph, gamma: &SpecialEdgeChoice, x: &GisElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    let Some((p, q)) = x.pair() else {
        return out;
    };
    let (mut p, mut q) = (p.clone(), q.clone());
    // p'e e* q'* = p'q'* - Σ_{g ≠ e} p'g g* q'*, and each p'g g* q'* is already basic.
    while let (Some(a), Some(b)) = (p.last_edge(), q.last_edge()) {
        if a != b || !gamma.is_special(g, a) {
            break;
        }
        p.pop_last(g);
        q.pop_last(g);
        for &h in g.out_edges(g.src(a)) {
            if h != a {
                let (mut ph, mut qh) = (p.clone(), q.clone());
                ph.push(g, h).expect("out-edge continues");
                qh.push(g, h).expect("out-edge continues");
                out.add_term(GisElement::pair_unchecked(ph, qh), -BigRational::one());
            }
        }
    }
    out.add_term(GisElement::pair_unchecked(p, q), BigRational::one());
    out
}

pub fn alg_add(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let mut out = x.clone();
    for (k, c) in y.terms() {
        out.add_term(k.clone(), c.clone());
    }
    out
}

pub fn alg_scale(c: &BigRational, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, d) in x.terms() {
        out.add_term(k.clone(), c * d);
    }
    out
}

pub fn alg_multiply(g: &Graph, gamma: &SpecialEdgeChoice, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (a, c) in x.terms() {
        for (b, d) in y.terms() {
            let ab = gis_multiply(a, b);
            if ab.is_zero() {
                continue;
            }
            let cd = c * d;
            for (k, e) in to_basis(g, gamma, &ab).terms() {
                out.add_term(k.clone(), &cd * e);
            }
        }
    }
    out
}

/// The involution `pq* ↦ qp*`, extended linearly.
pub fn alg_star(x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, c) in x.terms() {
        let (p, q) = k.pair().expect("basis terms are nonzero");
        out.add_term(GisElement::pair_unchecked(q.clone(), p.clone()), c.clone());
    }
    out
}

/// Every natural-basis element `pq*` with `|p| + |q| <= max_len`.
pub fn basis_up_to(g: &Graph, gamma: &SpecialEdgeChoice, max_len: usize) -> Vec<GisElement> {
    enumerate_elements(g, max_len).into_iter().filter(|x| is_basis_element(g, gamma, x)).collect()
}

/// Size of the natural basis, which is finite exactly when `g` is acyclic.
pub fn dimension_if_acyclic(g: &Graph) -> Result<usize> {
    if !g.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let gamma = SpecialEdgeChoice::default_for(g);
    let paths = paths_up_to(g, g.num_vertices());
    let mut by_end: Vec<Vec<&DirectedPath>> = vec![Vec::new(); g.num_vertices()];
    for p in &paths {
        by_end[p.end().0].push(p);
    }
    let mut n = 0;
    for group in &by_end {
        for p in group {
            for q in group {
                if is_basis_element(g, &gamma, &GisElement::pair_unchecked((*p).clone(), (*q).clone())) {
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// `L(1, n) ⊗ M_k1 ≅ L(1, n) ⊗ M_k2` test for bouquets of `n` circles over
/// `k1` and `k2` vertices.
pub fn bouquet_lpa_iso(n: u64, k1: u64, k2: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::Precondition(format!("bouquet needs at least 2 circles, got {}", n)));
    }
    if k1 == 0 || k2 == 0 {
        return Err(Error::Precondition("vertex counts must be positive".into()));
    }
    Ok(n == 2 || k1.gcd(&(n - 1)) == k2.gcd(&(n - 1)))
}

/// Images of the generators of LI(Γ) inside LI(Δ).
#[derive(Clone, Debug)]
pub struct GeneratorImages {
    pub vertices: Vec<LiElement>,
    pub edges: Vec<LiElement>,
}

impl GeneratorImages {
    pub fn from_witness(w: &IsoWitness) -> Self {
        let g = &w.domain;
        GeneratorImages {
            vertices: g.vertices().map(|v| w.apply(&GisElement::vertex(v))).collect(),
            edges: g.edges().map(|e| w.apply(&GisElement::edge(g, e))).collect(),
        }
    }

    pub fn swap_edges(&mut self, a: EdgeId, b: EdgeId) {
        self.edges.swap(a.0, b.0);
    }

    fn path_image(&self, d: &Graph, p: &DirectedPath) -> LiElement {
        p.edges().iter().fold(self.vertices[p.start().0].clone(), |acc, e| li_multiply(d, &acc, &self.edges[e.0]))
    }

    /// The semigroup map on `pq*`.
    pub fn apply(&self, d: &Graph, x: &GisElement) -> LiElement {
        match x.pair() {
            None => LiElement::zero(),
            Some((p, q)) => li_multiply(d, &self.path_image(d, p), &li_inverse(&self.path_image(d, q))),
        }
    }

    /// Linear extension on natural-basis combinations.
    pub fn apply_linear(&self, d: &Graph, gamma_d: &SpecialEdgeChoice, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in x.terms() {
            out = alg_add(&out, &alg_scale(c, &to_basis(d, gamma_d, self.apply(d, k).as_gis())));
        }
        out
    }
}

/// CK images vanish and the linear extension is multiplicative on basis pairs
/// of total length at most `max_len`.
pub fn generator_images_respect_algebra(
    g: &Graph,
    d: &Graph,
    gamma_g: &SpecialEdgeChoice,
    gamma_d: &SpecialEdgeChoice,
    images: &GeneratorImages,
    max_len: usize,
) -> bool {
    for v in g.vertices().filter(|&v| g.out_degree(v) >= 1) {
        let mut ck = alg_scale(&-BigRational::one(), &to_basis(d, gamma_d, images.vertices[v.0].as_gis()));
        for &e in g.out_edges(v) {
            let ee = li_multiply(d, &images.edges[e.0], &li_inverse(&images.edges[e.0]));
            ck = alg_add(&ck, &to_basis(d, gamma_d, ee.as_gis()));
        }
        if !ck.is_zero() {
            return false;
        }
    }
    let basis = basis_up_to(g, gamma_g, max_len);
    let eta: Vec<AlgebraElement> = basis.iter().map(|x| to_basis(d, gamma_d, images.apply(d, x).as_gis())).collect();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let lhs = images.apply_linear(
                d,
                gamma_d,
                &alg_multiply(g, gamma_g, &AlgebraElement::basis(x.clone()), &AlgebraElement::basis(y.clone())),
            );
            let rhs = alg_multiply(d, gamma_d, &eta[i], &eta[j]);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// At each vertex `v` of out-degree ≥ 2, `Σ φ(e)φ(e)* - φ(v) = P(Σ ěě* - u)P*`
/// with `u` the root of the image class and `P = p[ψ(v), u]`.
fn ck_connector_identity(w: &IsoWitness, gamma_d: &SpecialEdgeChoice) -> bool {
    let (g, d) = (&w.domain, &w.codomain);
    let (cg, cd) = (&w.contracted_domain, &w.contracted_codomain);
    for v in g.vertices().filter(|&v| g.out_degree(v) >= 2) {
        let pv = w.psi[v.0];
        let u = cd.forest.root(pv);
        let mut lhs = alg_scale(&-BigRational::one(), &to_basis(d, gamma_d, w.apply(&GisElement::vertex(v)).as_gis()));
        let mut mid = alg_scale(&-BigRational::one(), &AlgebraElement::basis(GisElement::vertex(u)));
        for &e in g.out_edges(v) {
            let img = w.apply(&GisElement::edge(g, e));
            lhs = alg_add(&lhs, &to_basis(d, gamma_d, li_multiply(d, &img, &li_inverse(&img)).as_gis()));
            let Some(eb) = cg.chi_edge(e) else {
                return false;
            };
            let ed = cd.lift_edge(w.phi_edge[eb.0]);
            if d.src(ed) != u {
                return false;
            }
            let p = DirectedPath::edge(d, ed);
            mid = alg_add(&mid, &AlgebraElement::basis(GisElement::pair_unchecked(p.clone(), p)));
        }
        let Ok(conn) = connector(d, &cd.forest, pv, u) else {
            return false;
        };
        let big_p = to_basis(d, gamma_d, li_reduce(d, &conn).as_gis());
        let rhs = alg_multiply(d, gamma_d, &alg_multiply(d, gamma_d, &big_p, &mid), &alg_star(&big_p));
        if lhs != rhs {
            return false;
        }
    }
    true
}

pub fn induced_algebra_iso_check(w: &IsoWitness, max_len: usize) -> bool {
    let gg = SpecialEdgeChoice::default_for(&w.domain);
    let gd = SpecialEdgeChoice::default_for(&w.codomain);
    induced_algebra_iso_check_with(w, &gg, &gd, max_len)
}

pub fn induced_algebra_iso_check_with(
    w: &IsoWitness,
    gamma_g: &SpecialEdgeChoice,
    gamma_d: &SpecialEdgeChoice,
    max_len: usize,
) -> bool {
    w.is_consistent()
        && ck_connector_identity(w, gamma_d)
        && generator_images_respect_algebra(
            &w.domain,
            &w.codomain,
            gamma_g,
            gamma_d,
            &GeneratorImages::from_witness(w),
            max_len,
        )
}

/// The retraction that deletes a source `s(e)` of out-degree 1 together with `e`.
#[derive(Clone, Debug)]
pub struct NeRetraction {
    pub graph: Graph,
    pub gamma: SpecialEdgeChoice,
    edge: EdgeId,
    vmap: Vec<Option<VertexId>>,
    emap: Vec<Option<EdgeId>>,
}

pub fn ne_retraction(g: &Graph, gamma: &SpecialEdgeChoice, e: EdgeId) -> Result<NeRetraction> {
    if !g.contains_edge(e) {
        return Err(Error::Precondition(format!("edge index {}", e.0)));
    }
    let s = g.src(e);
    if g.out_degree(s) != 1 || g.edges().any(|f| g.rng(f) == s) {
        return Err(Error::Precondition(format!("{} is not a source of out-degree 1", g.vertex_name(s))));
    }
    let keep: BTreeSet<VertexId> = g.vertices().filter(|&v| v != s).collect();
    let h = g.induced_subgraph(&keep);
    let vmap = g.vertices().map(|v| h.vertex(g.vertex_name(v)).ok()).collect();
    let emap = g.edges().map(|f| if f == e { None } else { h.edge(g.edge_name(f)).ok() }).collect();
    let picks: Vec<EdgeId> = g
        .vertices()
        .filter(|&v| v != s)
        .filter_map(|v| gamma.gamma(v))
        .map(|f| h.edge(g.edge_name(f)).expect("kept edge"))
        .collect();
    let gamma = SpecialEdgeChoice::with(&h, &picks)?;
    Ok(NeRetraction { graph: h, gamma, edge: e, vmap, emap })
}

impl NeRetraction {
    fn map_path(&self, g: &Graph, p: &DirectedPath) -> DirectedPath {
        let edges: Vec<EdgeId> =
            p.edges().iter().filter(|&&f| f != self.edge).map(|f| self.emap[f.0].unwrap()).collect();
        let start = if p.start() == g.src(self.edge) { g.rng(self.edge) } else { p.start() };
        DirectedPath::new(&self.graph, self.vmap[start.0].unwrap(), edges).expect("path survives")
    }

    /// `pq* ↦ p'q'*`, extended linearly.
    pub fn apply(&self, g: &Graph, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in x.terms() {
            let (p, q) = k.pair().expect("basis terms are nonzero");
            let y = GisElement::pair_unchecked(self.map_path(g, p), self.map_path(g, q));
            out = alg_add(&out, &alg_scale(c, &to_basis(&self.graph, &self.gamma, &y)));
        }
        out
    }

    /// Inclusion of the retract back into the algebra over `g`.
    pub fn include(&self, g: &Graph, x: &AlgebraElement) -> AlgebraElement {
        let h = &self.graph;
        let back = |p: &DirectedPath| {
            let edges = p.edges().iter().map(|&f| g.edge(h.edge_name(f)).unwrap()).collect();
            DirectedPath::new(g, g.vertex(h.vertex_name(p.start())).unwrap(), edges).unwrap()
        };
        let mut out = AlgebraElement::zero();
        for (k, c) in x.terms() {
            let (p, q) = k.pair().expect("basis terms are nonzero");
            out.add_term(GisElement::pair_unchecked(back(p), back(q)), c.clone());
        }
        out
    }
}

pub fn ne_contraction_retraction(g: &Graph, e: EdgeId, x: &AlgebraElement) -> Result<(Graph, AlgebraElement)> {
    let r = ne_retraction(g, &SpecialEdgeChoice::default_for(g), e)?;
    let y = r.apply(g, x);
    Ok((r.graph, y))
}
