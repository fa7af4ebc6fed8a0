//! The graph inverse semigroup I(Γ): elements `pq*` with `r(p) = r(q)`, and zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{reachable_subgraph, DirectedPath, EdgeId, Graph, VertexId};

/// Zero, or a pair of directed paths `(p, q)` with a common range, read as `pq*`.
/// Length, letters as (edge index, is ghost), and end vertices.
pub type WordKey = (usize, Vec<(usize, bool)>, Option<(VertexId, VertexId)>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GisElement(Option<(DirectedPath, DirectedPath)>);

impl GisElement {
    pub fn zero() -> Self {
        GisElement(None)
    }

    pub fn new(p: DirectedPath, q: DirectedPath) -> Result<Self> {
        if p.end() != q.end() {
            return Err(Error::RangeMismatch(format!("{:?}", p.end()), format!("{:?}", q.end())));
        }
        Ok(GisElement(Some((p, q))))
    }

    pub(crate) fn pair_unchecked(p: DirectedPath, q: DirectedPath) -> Self {
        debug_assert_eq!(p.end(), q.end());
        GisElement(Some((p, q)))
    }

    pub fn vertex(v: VertexId) -> Self {
        GisElement(Some((DirectedPath::empty(v), DirectedPath::empty(v))))
    }

    /// `p`, i.e. `p·r(p)*`.
    pub fn path(p: DirectedPath) -> Self {
        let v = DirectedPath::empty(p.end());
        GisElement(Some((p, v)))
    }

    /// `q*`.
    pub fn ghost(q: DirectedPath) -> Self {
        let v = DirectedPath::empty(q.end());
        GisElement(Some((v, q)))
    }

    pub fn edge(g: &Graph, e: EdgeId) -> Self {
        Self::path(DirectedPath::edge(g, e))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    pub fn pair(&self) -> Option<(&DirectedPath, &DirectedPath)> {
        self.0.as_ref().map(|(p, q)| (p, q))
    }

    pub fn into_pair(self) -> Option<(DirectedPath, DirectedPath)> {
        self.0
    }

    pub fn p(&self) -> Option<&DirectedPath> {
        self.0.as_ref().map(|(p, _)| p)
    }

    pub fn q(&self) -> Option<&DirectedPath> {
        self.0.as_ref().map(|(_, q)| q)
    }

    /// `|p| + |q|`; zero has length 0.
    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |(p, q)| p.len() + q.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.as_ref().is_none_or(|(p, q)| p == q)
    }

    pub fn is_vertex(&self) -> bool {
        matches!(&self.0, Some((p, q)) if p.is_empty() && q.is_empty())
    }

    /// `pp*` for `x = pq*`.
    pub fn range_idempotent(&self) -> GisElement {
        match &self.0 {
            None => GisElement::zero(),
            Some((p, _)) => GisElement::pair_unchecked(p.clone(), p.clone()),
        }
    }

    /// `qq*` for `x = pq*`.
    pub fn domain_idempotent(&self) -> GisElement {
        match &self.0 {
            None => GisElement::zero(),
            Some((_, q)) => GisElement::pair_unchecked(q.clone(), q.clone()),
        }
    }

    /// Ordering key reading `pq*` as the word `p1..pn qm*..q1*`.
    pub fn word_key(&self) -> WordKey {
        match &self.0 {
            None => (0, Vec::new(), None),
            Some((p, q)) => {
                let mut w: Vec<(usize, bool)> = p.edges().iter().map(|e| (e.0, false)).collect();
                w.extend(q.edges().iter().rev().map(|e| (e.0, true)));
                (w.len(), w, Some((p.start(), q.start())))
            }
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> ElementDisplay<'a> {
        ElementDisplay { g, x: self }
    }
}

pub struct ElementDisplay<'a> {
    g: &'a Graph,
    x: &'a GisElement,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.x.0 {
            None => f.write_str("0"),
            Some((p, q)) if p.is_empty() && q.is_empty() => write!(f, "@{}", self.g.vertex_name(p.start())),
            Some((p, q)) => write!(f, "{}|{}", p.display(self.g), q.display(self.g)),
        }
    }
}

/// Element syntax: `0`, `@v`, or `p|q` with each side `e1.e2...` or `@v`.
pub fn parse_element(g: &Graph, s: &str) -> Result<GisElement> {
    let s = s.trim();
    if s == "0" {
        return Ok(GisElement::zero());
    }
    match s.split_once('|') {
        Some((a, b)) => {
            let p = DirectedPath::parse(g, a)?;
            let q = DirectedPath::parse(g, b)?;
            make_element(g, p, q)
        }
        None if s.starts_with('@') => Ok(GisElement::vertex(g.vertex(&s[1..])?)),
        None => Err(Error::Syntax(format!("expected `p|q`, `@v` or `0`, got `{s}`"))),
    }
}

pub fn format_element(g: &Graph, x: &GisElement) -> String {
    x.display(g).to_string()
}

pub fn make_element(g: &Graph, p: DirectedPath, q: DirectedPath) -> Result<GisElement> {
    if p.end() != q.end() {
        return Err(Error::RangeMismatch(g.vertex_name(p.end()).into(), g.vertex_name(q.end()).into()));
    }
    Ok(GisElement(Some((p, q))))
}

/// `pq*·rs*`: `pts*` if `r = qt`, `p(st)*` if `q = rt`, zero otherwise.
pub fn gis_multiply(x: &GisElement, y: &GisElement) -> GisElement {
    let (Some((p, q)), Some((r, s))) = (&x.0, &y.0) else {
        return GisElement::zero();
    };
    if let Some(t) = r.strip_prefix(q) {
        GisElement::pair_unchecked(p.concat(&t).expect("t starts at r(q)"), s.clone())
    } else if let Some(t) = q.strip_prefix(r) {
        GisElement::pair_unchecked(p.clone(), s.concat(&t).expect("t starts at r(s)"))
    } else {
        GisElement::zero()
    }
}

/// Left-to-right product of a sequence; the empty product is not defined.
pub fn gis_product<'a>(xs: impl IntoIterator<Item = &'a GisElement>) -> Option<GisElement> {
    let mut it = xs.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, x| gis_multiply(&acc, x)))
}

pub fn gis_inverse(x: &GisElement) -> GisElement {
    match &x.0 {
        None => GisElement::zero(),
        Some((p, q)) => GisElement(Some((q.clone(), p.clone()))),
    }
}

/// Natural partial order: `x <= y` iff `x = x x⁻¹ y`.
pub fn gis_leq(x: &GisElement, y: &GisElement) -> bool {
    let e = gis_multiply(x, &gis_inverse(x));
    gis_multiply(&e, y) == *x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

/// A freely reduced word over the edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<(EdgeId, Sign)>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (EdgeId, Sign)>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, (e, s): (EdgeId, Sign)) {
        match self.0.last() {
            Some(&(f, t)) if f == e && t != s => {
                self.0.pop();
            }
            _ => self.0.push((e, s)),
        }
    }

    pub fn letters(&self) -> &[(EdgeId, Sign)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&(e, s)| (e, if s == Sign::Pos { Sign::Neg } else { Sign::Pos })).collect())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !(w[0].0 == w[1].0 && w[0].1 != w[1].1))
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(e, s)| match s {
                Sign::Pos => g.edge_name(e).to_string(),
                Sign::Neg => format!("{}^-1", g.edge_name(e)),
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tau {
    ZeroMark,
    Word(FreeWord),
}

/// `pq* ↦ red(p q⁻¹)`; zero goes to the zero mark.
pub fn tau(x: &GisElement) -> Tau {
    match &x.0 {
        None => Tau::ZeroMark,
        Some((p, q)) => Tau::Word(FreeWord::from_letters(
            p.edges().iter().map(|&e| (e, Sign::Pos)).chain(q.edges().iter().rev().map(|&e| (e, Sign::Neg))),
        )),
    }
}

/// Rank of the free universal group of I(Γ).
pub fn universal_rank(g: &Graph) -> usize {
    g.num_edges()
}

/// Rank of π₁ of the subgraph reachable from `v`.
pub fn local_universal_rank(g: &Graph, v: VertexId) -> usize {
    let h = reachable_subgraph(g, v);
    h.num_edges() + 1 - h.num_vertices()
}

pub fn local_rank_at_idempotent(g: &Graph, e: &GisElement) -> Result<usize> {
    match e.pair() {
        Some((p, q)) if p == q => Ok(local_universal_rank(g, p.end())),
        _ => Err(Error::NotIdempotent),
    }
}

/// All directed paths of length at most `max_len`, including the empty ones.
pub fn paths_up_to(g: &Graph, max_len: usize) -> Vec<DirectedPath> {
    let mut all: Vec<DirectedPath> = g.vertices().map(DirectedPath::empty).collect();
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &e in g.out_edges(p.end()) {
                let mut q = p.clone();
                q.push(g, e).expect("out-edge continues");
                next.push(q);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Zero and every `pq*` with `|p| + |q| <= max_len`, ordered by word length
/// and then by the word read as edges and ghost edges.
pub fn enumerate_elements(g: &Graph, max_len: usize) -> Vec<GisElement> {
    let paths = paths_up_to(g, max_len);
    let mut by_end: Vec<Vec<&DirectedPath>> = vec![Vec::new(); g.num_vertices()];
    for p in &paths {
        by_end[p.end().0].push(p);
    }
    let mut out = vec![GisElement::zero()];
    for group in &by_end {
        for p in group {
            for q in group {
                if p.len() + q.len() <= max_len {
                    out.push(GisElement::pair_unchecked((*p).clone(), (*q).clone()));
                }
            }
        }
    }
    out.sort_by_cached_key(|x| x.word_key());
    out
}
