mod common;

use std::collections::BTreeSet;

use graphinv::gis::{enumerate_elements, tau, GisElement};
use graphinv::graph::{DirectedPath, Graph};
use graphinv::leavitt::{classify_brandt, green_relation, li_equal, li_reduce, BrandtClass, GreenRelation};

/// `y` is `x` with both sides extended by a common path of out-degree-1 sources.
fn ne_extends(g: &Graph, x: &GisElement, y: &GisElement) -> bool {
    let (Some((p, q)), Some((r, s))) = (x.pair(), y.pair()) else {
        return false;
    };
    let (Some(t), Some(u)) = (r.strip_prefix(p), s.strip_prefix(q)) else {
        return false;
    };
    t == u && t.is_ne(g)
}

#[test]
fn li_equality_is_a_common_ne_root() {
    for (name, g) in common::fixtures() {
        let xs = enumerate_elements(&g, 5);
        for x in &xs {
            for y in &xs {
                let oracle = common_ne_root(&g, x, y);
                assert_eq!(li_equal(&g, x, y), oracle, "{name}: {} {}", x.display(&g), y.display(&g));
                assert_eq!(li_reduce(&g, x) == li_reduce(&g, y), oracle);
            }
        }
    }
}

/// Some NE-suffix truncation of `x` has `y` as an NE extension.
fn common_ne_root(g: &Graph, x: &GisElement, y: &GisElement) -> bool {
    let (Some((p, q)), Some((r, s))) = (x.pair(), y.pair()) else {
        return x.is_zero() && y.is_zero();
    };
    let (mut p, mut q) = (p.clone(), q.clone());
    loop {
        let z = GisElement::new(p.clone(), q.clone()).unwrap();
        let w = GisElement::new(r.clone(), s.clone()).unwrap();
        if z == w || ne_extends(g, &z, &w) {
            return true;
        }
        match (p.last_edge(), q.last_edge()) {
            (Some(a), Some(b)) if a == b && g.out_degree(g.src(a)) == 1 => {
                p.pop_last(g);
                q.pop_last(g);
            }
            _ => return false,
        }
    }
}

#[test]
fn range_idempotents_agree_iff_paths_differ_by_ne() {
    for (name, g) in common::fixtures() {
        let paths: Vec<DirectedPath> = graphinv::gis::paths_up_to(&g, 5);
        for p in &paths {
            for q in &paths {
                let pp = GisElement::new(p.clone(), p.clone()).unwrap();
                let qq = GisElement::new(q.clone(), q.clone()).unwrap();
                let ext = |a: &DirectedPath, b: &DirectedPath| b.strip_prefix(a).is_some_and(|t| t.is_ne(&g));
                assert_eq!(
                    li_equal(&g, &pp, &qq),
                    ext(p, q) || ext(q, p),
                    "{name}: {} {}",
                    p.display(&g),
                    q.display(&g)
                );
            }
        }
    }
}

#[test]
fn brandt_counts_for_acyclic_circle_immersible_fixtures() {
    for name in ["l2", "edge"] {
        let g = common::fixture(name);
        let BrandtClass::Brandt(d) = classify_brandt(&g).unwrap() else { panic!("{name}") };
        let nonzero: BTreeSet<GisElement> = enumerate_elements(&g, 2 * g.num_vertices())
            .iter()
            .map(|x| li_reduce(&g, x).into_gis())
            .filter(|x| !x.is_zero())
            .collect();
        assert_eq!(nonzero.len(), d.index_size * d.index_size, "{name}");
    }
}

#[test]
fn green_relations_fit_together() {
    use GreenRelation::*;
    for (name, g) in common::fixtures() {
        let xs = enumerate_elements(&g, 3);
        for x in &xs {
            for y in &xs {
                let rel = |r| green_relation(&g, r, x, y);
                assert_eq!(rel(H), rel(R) && rel(L), "{name}");
                assert!(!rel(R) || rel(D), "{name}: R not inside D");
                assert!(!rel(L) || rel(D), "{name}: L not inside D");
                assert!(!rel(D) || rel(J), "{name}: D not inside J");
            }
        }
    }
}

#[test]
fn tau_factors_through_li_reduce() {
    for (name, g) in common::corpus(30, 31) {
        for x in enumerate_elements(&g, 4) {
            assert_eq!(tau(&x), tau(li_reduce(&g, &x).as_gis()), "{name}");
        }
    }
}
