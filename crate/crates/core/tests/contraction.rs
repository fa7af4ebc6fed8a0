mod common;

use std::collections::BTreeSet;

use graphinv::contraction::{
    chi_hat, chi_tilde, contract, li_isomorphic, li_isomorphic_with, ne_cycles, ne_spanning_forest,
};
use graphinv::gis::{enumerate_elements, GisElement};
use graphinv::graph::{sim_classes, EdgeId, Graph};
use graphinv::leavitt::{li_multiply, li_reduce, LiElement};

#[test]
fn chi_hat_after_chi_tilde_is_a_retraction() {
    for (name, g) in common::corpus(50, 51) {
        let cg = contract(&g, &ne_spanning_forest(&g, &[]).unwrap());
        let base = cg.default_base();
        let r = |x: &GisElement| li_reduce(&g, &chi_hat(&g, &cg, &base, &chi_tilde(&g, &cg, x)).unwrap());
        for x in enumerate_elements(&g, 4) {
            let once = r(&x);
            assert_eq!(r(once.as_gis()), once, "{name}: {}", x.display(&g));
        }
    }
}

#[test]
fn witness_is_an_isomorphism_on_bounded_elements() {
    let (g, d) = (common::fixture("g72"), common::fixture("d72"));
    let w = li_isomorphic(&g, &d).unwrap();
    let xs: Vec<LiElement> =
        enumerate_elements(&g, 4).iter().map(|x| li_reduce(&g, x)).collect::<BTreeSet<_>>().into_iter().collect();
    let images: Vec<LiElement> = xs.iter().map(|x| w.apply(x.as_gis())).collect();
    assert_eq!(images.iter().collect::<BTreeSet<_>>().len(), xs.len(), "not injective");
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in xs.iter().enumerate() {
            let xy = li_multiply(&g, x, y);
            assert_eq!(w.apply(xy.as_gis()), li_multiply(&d, &images[i], &images[j]));
        }
    }
    let all: BTreeSet<LiElement> = enumerate_elements(&g, 8).iter().map(|x| w.apply(x)).collect();
    for e in d.edges() {
        assert!(all.contains(&li_reduce(&d, &GisElement::edge(&d, e))), "{} has no preimage", d.edge_name(e));
    }
}

/// Every way of choosing one excluded edge per NE cycle.
fn all_choices(g: &Graph) -> Vec<Vec<EdgeId>> {
    ne_cycles(g).iter().fold(vec![Vec::new()], |acc, c| {
        acc.iter().flat_map(|pre| c.iter().map(move |&e| [pre.clone(), vec![e]].concat())).collect()
    })
}

#[test]
fn verdict_does_not_depend_on_forest_choice() {
    let fixtures = common::fixtures();
    for (na, a) in &fixtures {
        for (nb, b) in &fixtures {
            let expected = li_isomorphic(a, b).is_some();
            for ca in all_choices(a) {
                for cb in all_choices(b) {
                    let fa = ne_spanning_forest(a, &ca).unwrap();
                    let fb = ne_spanning_forest(b, &cb).unwrap();
                    let w = li_isomorphic_with(a, b, &fa, &fb);
                    assert_eq!(w.is_some(), expected, "{na} vs {nb}");
                    if let Some(w) = w {
                        assert!(w.is_consistent());
                    }
                }
            }
        }
    }
}

/// A bouquet of `loops` circles at `w` with `k - 1` further vertices feeding
/// into it through out-degree-1 edges: all straight into `w` (shape 0), a
/// chain (1), or a star into `t1` (2).
fn bouquet_with_tree(loops: usize, k: usize, shape: u64) -> Graph {
    let mut g = Graph::new();
    g.add_vertex("w").unwrap();
    for i in 0..loops {
        g.add_edge(&format!("l{i}"), "w", "w").unwrap();
    }
    for i in 1..k {
        g.add_vertex(&format!("t{i}")).unwrap();
        let target = match (shape, i) {
            (_, 1) | (0, _) => "w".to_string(),
            (1, _) => format!("t{}", i - 1),
            _ => "t1".to_string(),
        };
        g.add_edge(&format!("f{i}"), &format!("t{i}"), &target).unwrap();
    }
    g
}

#[test]
fn bouquet_families_are_classified_by_vertex_count() {
    for loops in [2, 3] {
        let family: Vec<(usize, Graph)> =
            (1..=5).flat_map(|k| (0..3).map(move |s| (k, bouquet_with_tree(loops, k, s)))).collect();
        for (ka, a) in &family {
            for (kb, b) in &family {
                assert_eq!(li_isomorphic(a, b).is_some(), ka == kb, "{ka} vs {kb}");
            }
        }
    }
}

#[test]
fn contracted_graphs_have_loops_at_out_degree_one_and_discrete_classes() {
    for (name, g) in common::corpus(100, 52) {
        for choice in all_choices(&g).into_iter().take(4) {
            let cg = contract(&g, &ne_spanning_forest(&g, &choice).unwrap());
            let h = &cg.graph;
            for v in h.vertices().filter(|&v| h.out_degree(v) == 1) {
                assert_eq!(h.rng(h.out_edges(v)[0]), v, "{name}");
            }
            assert_eq!(sim_classes(h).len(), h.num_vertices(), "{name}");
        }
    }
}
