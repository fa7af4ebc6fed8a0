//! Exhaustive bounded checks shared by the property and acceptance targets.
//! Each returns the number of individual checks made, or the first failure.

use std::collections::{BTreeMap, BTreeSet};

use graphinv::contraction::{chi_hat, chi_tilde, connector, contract, ne_cycles, ne_spanning_forest};
use graphinv::gis::{
    enumerate_elements, gis_inverse, gis_multiply, local_universal_rank, tau, universal_rank, GisElement, Tau,
};
use graphinv::graph::{strongly_connected_components, DirectedPath, Graph, VertexId};
use graphinv::leavitt::{li_inverse, li_multiply, li_reduce};
use graphinv::lpa::{alg_add, alg_multiply, is_basis_element, to_basis, AlgebraElement, SpecialEdgeChoice};

pub type Outcome = Result<usize, String>;

fn fail<T>(g: &Graph, what: &str, xs: &[&GisElement]) -> Result<T, String> {
    let shown: Vec<String> = xs.iter().map(|x| x.display(g).to_string()).collect();
    Err(format!("{}: {}", what, shown.join(", ")))
}

pub fn semigroup_axioms(g: &Graph, max_len: usize, triple_len: usize) -> Outcome {
    let xs = enumerate_elements(g, max_len);
    let mut n = 0;
    for x in &xs {
        let xi = gis_inverse(x);
        if gis_inverse(&xi) != *x {
            return fail(g, "double inverse", &[x]);
        }
        if gis_multiply(&gis_multiply(x, &xi), x) != *x || gis_multiply(&gis_multiply(&xi, x), &xi) != xi {
            return fail(g, "regularity", &[x]);
        }
        n += 2;
    }
    for x in &xs {
        for y in &xs {
            let xy = gis_multiply(x, y);
            if gis_inverse(&xy) != gis_multiply(&gis_inverse(y), &gis_inverse(x)) {
                return fail(g, "inverse of product", &[x, y]);
            }
            if x.is_idempotent() && y.is_idempotent() && xy != gis_multiply(y, x) {
                return fail(g, "idempotents commute", &[x, y]);
            }
            n += 1;
        }
    }
    let small = enumerate_elements(g, triple_len);
    for x in &small {
        for y in &small {
            let xy = gis_multiply(x, y);
            for z in &small {
                if gis_multiply(&xy, z) != gis_multiply(x, &gis_multiply(y, z)) {
                    return fail(g, "associativity", &[x, y, z]);
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

pub fn tau_properties(g: &Graph, max_len: usize) -> Outcome {
    let xs = enumerate_elements(g, max_len);
    let word = |x: &GisElement| match tau(x) {
        Tau::Word(w) => Some(w),
        Tau::ZeroMark => None,
    };
    let mut n = 0;
    for x in &xs {
        if let Some(w) = word(x) {
            if w.is_identity() != x.is_idempotent() {
                return fail(g, "idempotent purity", &[x]);
            }
            if !w.is_reduced() {
                return fail(g, "tau word not reduced", &[x]);
            }
        } else if !x.is_zero() {
            return fail(g, "tau of nonzero is zero mark", &[x]);
        }
        n += 1;
    }
    for x in &xs {
        for y in &xs {
            let xy = gis_multiply(x, y);
            if xy.is_zero() {
                continue;
            }
            let expect = word(x).unwrap().multiply(&word(y).unwrap());
            if word(&xy) != Some(expect) {
                return fail(g, "tau is a 0-morphism", &[x, y]);
            }
            n += 1;
        }
    }
    Ok(n)
}

pub fn li_reduce_properties(g: &Graph, max_len: usize) -> Outcome {
    let xs = enumerate_elements(g, max_len);
    let mut n = 0;
    for x in &xs {
        let r = li_reduce(g, x);
        if li_reduce(g, r.as_gis()) != r {
            return fail(g, "reduction is idempotent", &[x]);
        }
        // Every one-step expansion has the same normal form.
        if let Some((p, q)) = x.pair() {
            for &e in g.out_edges(p.end()) {
                if g.out_degree(p.end()) != 1 {
                    break;
                }
                let (mut pe, mut qe) = (p.clone(), q.clone());
                pe.push(g, e).unwrap();
                qe.push(g, e).unwrap();
                if li_reduce(g, &GisElement::new(pe, qe).unwrap()) != r {
                    return fail(g, "confluence", &[x]);
                }
                n += 1;
            }
        }
        n += 1;
    }
    for x in &xs {
        let rx = li_reduce(g, x);
        for y in &xs {
            if li_reduce(g, &gis_multiply(x, y)) != li_multiply(g, &rx, &li_reduce(g, y)) {
                return fail(g, "quotient compatibility", &[x, y]);
            }
            n += 1;
        }
    }
    Ok(n)
}

/// Default choice, plus one choice moved off the smallest edge at every
/// branching vertex.
fn gamma_variants(g: &Graph) -> Vec<SpecialEdgeChoice> {
    let picks: Vec<_> =
        g.vertices().filter(|&v| g.out_degree(v) >= 2).map(|v| *g.out_edges(v).last().unwrap()).collect();
    vec![SpecialEdgeChoice::default_for(g), SpecialEdgeChoice::with(g, &picks).unwrap()]
}

pub fn lpa_properties(g: &Graph, max_len: usize, triple_len: usize) -> Outcome {
    let mut n = 0;
    let xs = enumerate_elements(g, max_len);
    for gamma in gamma_variants(g) {
        for v in g.vertices().filter(|&v| g.out_degree(v) > 0) {
            let mut sum = AlgebraElement::zero();
            for &e in g.out_edges(v) {
                let p = DirectedPath::edge(g, e);
                sum = alg_add(&sum, &to_basis(g, &gamma, &GisElement::new(p.clone(), p).unwrap()));
            }
            if sum != to_basis(g, &gamma, &GisElement::vertex(v)) {
                return fail(g, "CK relation", &[&GisElement::vertex(v)]);
            }
            n += 1;
        }
        let mut by_class: BTreeMap<GisElement, (AlgebraElement, GisElement)> = BTreeMap::new();
        for x in &xs {
            let b = to_basis(g, &gamma, x);
            if is_basis_element(g, &gamma, x) && b != AlgebraElement::basis(x.clone()) {
                return fail(g, "basis element rewritten", &[x]);
            }
            let key = li_reduce(g, x).into_gis();
            match by_class.get(&key) {
                Some((b0, x0)) if *b0 != b => return fail(g, "LI-equal elements expand differently", &[x0, x]),
                Some(_) => {}
                None => {
                    by_class.insert(key, (b, x.clone()));
                }
            }
            n += 1;
        }
        let small: Vec<AlgebraElement> =
            enumerate_elements(g, triple_len).iter().filter(|x| !x.is_zero()).map(|x| to_basis(g, &gamma, x)).collect();
        for a in &small {
            for b in &small {
                let ab = alg_multiply(g, &gamma, a, b);
                for c in &small {
                    if alg_multiply(g, &gamma, &ab, c) != alg_multiply(g, &gamma, a, &alg_multiply(g, &gamma, b, c)) {
                        return Err("algebra associativity".into());
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// Forests under the default choice and under the last edge of every NE cycle.
fn forests(g: &Graph) -> Vec<graphinv::contraction::NeSpanningForest> {
    let alt: Vec<_> = ne_cycles(g).iter().map(|c| *c.last().unwrap()).collect();
    vec![ne_spanning_forest(g, &[]).unwrap(), ne_spanning_forest(g, &alt).unwrap()]
}

pub fn connector_properties(g: &Graph) -> Outcome {
    let mut n = 0;
    for f in forests(g) {
        let c = |a: VertexId, b: VertexId| li_reduce(g, &connector(g, &f, a, b).unwrap());
        for block in f.classes().blocks() {
            for &a in block {
                if c(a, a).as_gis() != &GisElement::vertex(a) {
                    return Err(format!("connector at {} is not the vertex", g.vertex_name(a)));
                }
                for &b in block {
                    if li_inverse(&c(a, b)) != c(b, a) {
                        return Err("connector inverse".into());
                    }
                    for &d in block {
                        if li_multiply(g, &c(a, b), &c(b, d)) != c(a, d) {
                            return Err(format!(
                                "telescoping {} {} {}",
                                g.vertex_name(a),
                                g.vertex_name(b),
                                g.vertex_name(d)
                            ));
                        }
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

pub fn chi_properties(g: &Graph, max_len: usize) -> Outcome {
    let mut n = 0;
    for f in forests(g) {
        let cg = contract(g, &f);
        let bases = [cg.default_base(), cg.graph.vertices().map(|c| *cg.members(c).last().unwrap()).collect()];
        let xs = enumerate_elements(&cg.graph, max_len);
        for base in &bases {
            for x in &xs {
                let back = chi_tilde(g, &cg, &chi_hat(g, &cg, base, x).unwrap());
                if back != li_reduce(&cg.graph, x).into_gis() {
                    return Err(format!("chi_tilde(chi_hat({})) = {}", x.display(&cg.graph), back.display(&cg.graph)));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Cycle rank of the reachable subgraph, computed from a union-find forest.
fn reachable_cycle_rank(g: &Graph, v: VertexId) -> usize {
    let reach: BTreeSet<VertexId> = g.reachable(v);
    let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut extra = 0;
    for e in g.edges().filter(|&e| reach.contains(&g.src(e))) {
        let (a, b) = (find(&mut parent, g.src(e).0), find(&mut parent, g.rng(e).0));
        if a == b {
            extra += 1;
        } else {
            parent[a] = b;
        }
    }
    extra
}

pub fn rank_properties(g: &Graph) -> Outcome {
    let mut n = 0;
    if universal_rank(g) != g.num_edges() {
        return Err("universal rank differs from edge count".into());
    }
    let scc = strongly_connected_components(g);
    for v in g.vertices() {
        let k = local_universal_rank(g, v);
        if k != reachable_cycle_rank(g, v) {
            return Err(format!("local rank at {}", g.vertex_name(v)));
        }
        for w in g.vertices().filter(|&w| scc.same(v, w)) {
            if local_universal_rank(g, w) != k {
                return Err(format!("local rank differs inside an SCC at {}", g.vertex_name(w)));
            }
        }
        n += 1;
    }
    for e in g.edges() {
        if local_universal_rank(g, g.src(e)) < local_universal_rank(g, g.rng(e)) {
            return Err(format!("local rank increases along {}", g.edge_name(e)));
        }
        n += 1;
    }
    Ok(n)
}
