use std::collections::BTreeSet;

use super::{DirectedPath, EdgeId, Graph, VertexId};
use crate::error::{Error, Result};

/// A map of graphs given by vertex and edge tables. Incidence is not
/// enforced at construction; [`check_morphism`] reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    domain: Graph,
    codomain: Graph,
    vmap: Vec<VertexId>,
    emap: Vec<EdgeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismKind {
    NotMorphism,
    Morphism,
    DirectedImmersion,
    DirectedCover,
}

impl GraphMorphism {
    pub fn new(domain: Graph, codomain: Graph, vmap: Vec<VertexId>, emap: Vec<EdgeId>) -> Result<Self> {
        if vmap.len() != domain.num_vertices() || emap.len() != domain.num_edges() {
            return Err(Error::Precondition("morphism tables must be total on the domain".into()));
        }
        if vmap.iter().any(|&v| !codomain.contains_vertex(v)) || emap.iter().any(|&e| !codomain.contains_edge(e)) {
            return Err(Error::Precondition("morphism image outside the codomain".into()));
        }
        Ok(GraphMorphism { domain, codomain, vmap, emap })
    }

    pub fn from_names(
        domain: Graph,
        codomain: Graph,
        vpairs: &[(&str, &str)],
        epairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut vmap = vec![None; domain.num_vertices()];
        let mut emap = vec![None; domain.num_edges()];
        for (a, b) in vpairs {
            vmap[domain.vertex(a)?.0] = Some(codomain.vertex(b)?);
        }
        for (a, b) in epairs {
            emap[domain.edge(a)?.0] = Some(codomain.edge(b)?);
        }
        Self::from_tables(domain, codomain, vmap, emap)
    }

    fn from_tables(
        domain: Graph,
        codomain: Graph,
        vmap: Vec<Option<VertexId>>,
        emap: Vec<Option<EdgeId>>,
    ) -> Result<Self> {
        let vmap = vmap
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::Precondition(format!("vertex {} unmapped", domain.vertex_name(VertexId(i)))))
            })
            .collect::<Result<Vec<_>>>()?;
        let emap = emap
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| Error::Precondition(format!("edge {} unmapped", domain.edge_name(EdgeId(i)))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, vmap, emap)
    }

    /// Parses a morphism file. `load` resolves the two `graph <path>` lines.
    pub fn parse(text: &str, mut load: impl FnMut(&str) -> Result<Graph>) -> Result<Self> {
        let mut graphs: Vec<Graph> = Vec::new();
        let mut vpairs: Vec<(usize, String, String)> = Vec::new();
        let mut epairs: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["graph", path] => {
                    if graphs.len() == 2 {
                        return Err(bad("more than two `graph` lines"));
                    }
                    graphs.push(load(path)?);
                }
                ["map-vertex", a, b] => vpairs.push((i + 1, a.to_string(), b.to_string())),
                ["map-edge", a, b] => epairs.push((i + 1, a.to_string(), b.to_string())),
                _ => return Err(bad(&format!("unrecognised line `{line}`"))),
            }
            if graphs.len() < 2 && !line.starts_with("graph") {
                return Err(bad("`graph` lines must come first"));
            }
        }
        if graphs.len() != 2 {
            return Err(Error::Parse { line: 0, msg: "expected two `graph` lines".into() });
        }
        let codomain = graphs.pop().unwrap();
        let domain = graphs.pop().unwrap();
        let mut vmap = vec![None; domain.num_vertices()];
        let mut emap = vec![None; domain.num_edges()];
        for (line, a, b) in &vpairs {
            let slot = &mut vmap[domain.vertex(a)?.0];
            if slot.is_some() {
                return Err(Error::Parse { line: *line, msg: format!("vertex {a} mapped twice") });
            }
            *slot = Some(codomain.vertex(b)?);
        }
        for (line, a, b) in &epairs {
            let slot = &mut emap[domain.edge(a)?.0];
            if slot.is_some() {
                return Err(Error::Parse { line: *line, msg: format!("edge {a} mapped twice") });
            }
            *slot = Some(codomain.edge(b)?);
        }
        Self::from_tables(domain, codomain, vmap, emap)
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            vmap: g.vertices().collect(),
            emap: g.edges().collect(),
        }
    }

    /// The map onto the bouquet with one loop `a` at `v`.
    pub fn onto_circle(g: &Graph) -> Self {
        let b1 = Graph::from_lists(&["v"], &[("a", "v", "v")]).expect("static graph");
        GraphMorphism {
            domain: g.clone(),
            codomain: b1,
            vmap: vec![VertexId(0); g.num_vertices()],
            emap: vec![EdgeId(0); g.num_edges()],
        }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vmap[v.0]
    }

    pub fn map_edge(&self, e: EdgeId) -> EdgeId {
        self.emap[e.0]
    }

    pub fn map_path(&self, p: &DirectedPath) -> DirectedPath {
        let edges = p.edges().iter().map(|&e| self.map_edge(e)).collect();
        DirectedPath::new(&self.codomain, self.map_vertex(p.start()), edges).expect("morphisms carry paths to paths")
    }

    /// Out-edge of `v` lying over `e`, if any.
    fn lift_edge(&self, v: VertexId, e: EdgeId) -> Option<EdgeId> {
        self.domain.out_edges(v).iter().copied().find(|&d| self.emap[d.0] == e)
    }
}

pub fn check_morphism(m: &GraphMorphism) -> MorphismKind {
    let (d, c) = (&m.domain, &m.codomain);
    for e in d.edges() {
        let img = m.map_edge(e);
        if m.map_vertex(d.src(e)) != c.src(img) || m.map_vertex(d.rng(e)) != c.rng(img) {
            return MorphismKind::NotMorphism;
        }
    }
    let mut injective = true;
    let mut bijective = true;
    for v in d.vertices() {
        let imgs: BTreeSet<EdgeId> = d.out_edges(v).iter().map(|&e| m.map_edge(e)).collect();
        if imgs.len() < d.out_degree(v) {
            injective = false;
        }
        if imgs.len() != c.out_degree(m.map_vertex(v)) {
            bijective = false;
        }
    }
    match (injective, bijective) {
        (true, true) => MorphismKind::DirectedCover,
        (true, false) => MorphismKind::DirectedImmersion,
        _ => MorphismKind::Morphism,
    }
}

fn require(m: &GraphMorphism, cover: bool) -> Result<()> {
    let k = check_morphism(m);
    let ok = match k {
        MorphismKind::DirectedCover => true,
        MorphismKind::DirectedImmersion => !cover,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        let want = if cover { "a directed cover" } else { "a directed immersion" };
        Err(Error::Precondition(format!("morphism is {k:?}, not {want}")))
    }
}

fn check_fiber(m: &GraphMorphism, p: &DirectedPath, v: VertexId) -> Result<()> {
    if !m.domain.contains_vertex(v) || m.map_vertex(v) != p.start() {
        return Err(Error::Precondition("start vertex is not in the fiber of s(p)".into()));
    }
    Ok(())
}

/// The unique lift of `p` starting at `v` through a directed cover.
pub fn lift_path(m: &GraphMorphism, p: &DirectedPath, v: VertexId) -> Result<DirectedPath> {
    require(m, true)?;
    check_fiber(m, p, v)?;
    let (_, lift) = lift_prefix(m, p, v);
    Ok(lift)
}

/// Longest prefix of `p` that lifts at `v` through a directed immersion, with its lift.
pub fn lift_max_prefix(m: &GraphMorphism, p: &DirectedPath, v: VertexId) -> Result<(DirectedPath, DirectedPath)> {
    require(m, false)?;
    check_fiber(m, p, v)?;
    Ok(lift_prefix(m, p, v))
}

fn lift_prefix(m: &GraphMorphism, p: &DirectedPath, v: VertexId) -> (DirectedPath, DirectedPath) {
    let mut lift = DirectedPath::empty(v);
    let mut taken = 0;
    for &e in p.edges() {
        match m.lift_edge(lift.end(), e) {
            Some(d) => {
                lift.push(&m.domain, d).expect("lifted edge continues the path");
                taken += 1;
            }
            None => break,
        }
    }
    (p.prefix(&m.codomain, taken), lift)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitLift {
    pub vertex: VertexId,
    pub period: usize,
    pub lift: DirectedPath,
}

/// Lifts `p, p, p, ...` from the first fiber vertex until the walk revisits
/// a vertex; returns that vertex, the period, and the lift of `p^period`.
pub fn lift_circuit_power(m: &GraphMorphism, p: &DirectedPath) -> Result<CircuitLift> {
    require(m, true)?;
    if p.is_empty() || !p.is_circuit() {
        return Err(Error::Precondition("expected a nonempty directed circuit".into()));
    }
    let start = m
        .domain
        .vertices()
        .find(|&v| m.map_vertex(v) == p.start())
        .ok_or_else(|| Error::Precondition("empty fiber".into()))?;
    let mut visited = vec![start];
    let mut lifts: Vec<DirectedPath> = Vec::new();
    loop {
        let cur = *visited.last().unwrap();
        let (_, l) = lift_prefix(m, p, cur);
        let next = l.end();
        lifts.push(l);
        if let Some(i) = visited.iter().position(|&w| w == next) {
            let lift = lifts[i..].iter().skip(1).fold(lifts[i].clone(), |acc, l| acc.concat(l).expect("lifts chain"));
            return Ok(CircuitLift { vertex: next, period: lifts.len() - i, lift });
        }
        visited.push(next);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircleImmersion {
    NotImmersible,
    TreeWithSink {
        sink: VertexId,
        max_depth: usize,
    },
    /// Infinite-tree case; finite graphs never land here.
    TreeNoSinkCover,
    UniqueCycleCover {
        cycle_length: usize,
    },
}

pub fn classify_circle_immersion(g: &Graph) -> Result<CircleImmersion> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertices().any(|v| g.out_degree(v) >= 2) {
        return Ok(CircleImmersion::NotImmersible);
    }
    let next = |v: VertexId| g.out_edges(v).first().map(|&e| g.rng(e));
    if let Some(sink) = g.vertices().find(|&v| g.is_sink(v)) {
        let max_depth = g
            .vertices()
            .map(|mut v| {
                let mut d = 0;
                while let Some(w) = next(v) {
                    v = w;
                    d += 1;
                }
                d
            })
            .max()
            .unwrap_or(0);
        return Ok(CircleImmersion::TreeWithSink { sink, max_depth });
    }
    let mut v = VertexId(0);
    for _ in 0..g.num_vertices() {
        v = next(v).expect("no sinks");
    }
    let mut len = 1;
    let mut w = next(v).unwrap();
    while w != v {
        w = next(w).unwrap();
        len += 1;
    }
    Ok(CircleImmersion::UniqueCycleCover { cycle_length: len })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(name: &str) -> Result<Graph> {
        let text = match name {
            "c3.graph" => include_str!("../../fixtures/c3.graph"),
            "b1.graph" => include_str!("../../fixtures/b1.graph"),
            "b2.graph" => include_str!("../../fixtures/b2.graph"),
            "cov2.graph" => include_str!("../../fixtures/cov2.graph"),
            "edge.graph" => include_str!("../../fixtures/edge.graph"),
            _ => return Err(Error::Load(name.into())),
        };
        Graph::parse(text)
    }

    fn morph(text: &str) -> GraphMorphism {
        GraphMorphism::parse(text, load).unwrap()
    }

    #[test]
    fn kinds() {
        let c3 = morph(include_str!("../../fixtures/c3_b1.morph"));
        assert_eq!(check_morphism(&c3), MorphismKind::DirectedCover);
        let e = morph(include_str!("../../fixtures/edge_b1.morph"));
        assert_eq!(check_morphism(&e), MorphismKind::DirectedImmersion);
        let cov = morph(include_str!("../../fixtures/cov2_b2.morph"));
        assert_eq!(check_morphism(&cov), MorphismKind::DirectedCover);
        let b2 = load("b2.graph").unwrap();
        let fold = GraphMorphism::onto_circle(&b2);
        assert_eq!(check_morphism(&fold), MorphismKind::Morphism);
        let c3g = load("c3.graph").unwrap();
        let broken = GraphMorphism::new(
            c3g.clone(),
            c3g.clone(),
            vec![VertexId(0), VertexId(1), VertexId(2)],
            vec![EdgeId(1), EdgeId(1), EdgeId(2)],
        )
        .unwrap();
        assert_eq!(check_morphism(&broken), MorphismKind::NotMorphism);
    }

    #[test]
    fn lifting() {
        let m = morph(include_str!("../../fixtures/c3_b1.morph"));
        let (c, b) = (m.domain().clone(), m.codomain().clone());
        let aaa = DirectedPath::parse(&b, "a.a.a").unwrap();
        let l = lift_path(&m, &aaa, c.vertex("x1").unwrap()).unwrap();
        assert_eq!(l.display(&c), "c1.c2.c3");
        let v = DirectedPath::parse(&b, "@v").unwrap();
        assert_eq!(lift_path(&m, &v, c.vertex("x2").unwrap()).unwrap().display(&c), "@x2");

        let cov = morph(include_str!("../../fixtures/cov2_b2.morph"));
        let ab = DirectedPath::parse(cov.codomain(), "a.b").unwrap();
        let l = lift_path(&cov, &ab, VertexId(0)).unwrap();
        assert_eq!(l.display(cov.domain()), "aX.bY");

        let e = morph(include_str!("../../fixtures/edge_b1.morph"));
        assert!(lift_path(&e, &aaa, VertexId(0)).is_err());
        let aa = DirectedPath::parse(e.codomain(), "a.a").unwrap();
        let (pre, l) = lift_max_prefix(&e, &aa, VertexId(0)).unwrap();
        assert_eq!((pre.len(), l.display(e.domain())), (1, "et".to_string()));
        let (pre, l) = lift_max_prefix(&e, &v, VertexId(1)).unwrap();
        assert!(pre.is_empty() && l.is_empty());
    }

    #[test]
    fn circuit_powers() {
        let m = morph(include_str!("../../fixtures/c3_b1.morph"));
        let a = DirectedPath::parse(m.codomain(), "a").unwrap();
        let r = lift_circuit_power(&m, &a).unwrap();
        assert_eq!(r.period, 3);
        assert_eq!(r.lift.display(m.domain()), "c1.c2.c3");
        let id = GraphMorphism::identity(&load("b1.graph").unwrap());
        let r = lift_circuit_power(&id, &a).unwrap();
        assert_eq!((r.period, r.lift.len()), (1, 1));
        let cov = morph(include_str!("../../fixtures/cov2_b2.morph"));
        let a = DirectedPath::parse(cov.codomain(), "a").unwrap();
        let r = lift_circuit_power(&cov, &a).unwrap();
        assert_eq!((r.period, r.lift.display(cov.domain())), (2, "aX.aY".to_string()));
    }

    #[test]
    fn circle_classification() {
        let l2 = Graph::parse(include_str!("../../fixtures/l2.graph")).unwrap();
        assert_eq!(
            classify_circle_immersion(&l2).unwrap(),
            CircleImmersion::TreeWithSink { sink: l2.vertex("w0").unwrap(), max_depth: 2 }
        );
        let c3 = load("c3.graph").unwrap();
        assert_eq!(classify_circle_immersion(&c3).unwrap(), CircleImmersion::UniqueCycleCover { cycle_length: 3 });
        assert_eq!(classify_circle_immersion(&load("b2.graph").unwrap()).unwrap(), CircleImmersion::NotImmersible);
        let two = Graph::from_lists(&["a", "b"], &[]).unwrap();
        assert_eq!(classify_circle_immersion(&two), Err(Error::Disconnected));
    }
}
