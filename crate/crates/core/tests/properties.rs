mod common;
#[path = "common/suites.rs"]
mod suites;

use graphinv::gis::{enumerate_elements, gis_multiply, parse_element, GisElement};
use graphinv::graph::Graph;
use graphinv::leavitt::{lenz_default_depth, lenz_oracle, li_equal};
use graphinv::lpa::{alg_add, alg_multiply, alg_scale, rational, to_basis, AlgebraElement, SpecialEdgeChoice};
use proptest::prelude::*;

fn each(check: impl Fn(&Graph) -> suites::Outcome) {
    for (name, g) in common::corpus(50, 7) {
        if let Err(e) = check(&g) {
            panic!("{name}: {e}\n{}", g.to_text());
        }
    }
}

#[test]
fn inverse_semigroup_axioms() {
    each(|g| suites::semigroup_axioms(g, 4, 2));
}

#[test]
fn tau_is_an_idempotent_pure_zero_morphism() {
    each(|g| suites::tau_properties(g, 4));
}

#[test]
fn li_reduction_is_confluent_and_compatible() {
    each(|g| suites::li_reduce_properties(g, 4));
}

#[test]
fn cuntz_krieger_and_basis_expansion() {
    each(|g| suites::lpa_properties(g, 4, 2));
}

#[test]
fn connectors_telescope() {
    each(suites::connector_properties);
}

#[test]
fn chi_tilde_inverts_chi_hat() {
    each(|g| suites::chi_properties(g, 4));
}

#[test]
fn universal_ranks() {
    for (name, g) in common::corpus(100, 11) {
        suites::rank_properties(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn lenz_matches_li_equality_on_random_graphs() {
    for g in common::random_graphs(20, 5, 4, 5) {
        let xs = enumerate_elements(&g, 3);
        for x in &xs {
            for y in &xs {
                let depth = lenz_default_depth(&g, x, y);
                assert_eq!(lenz_oracle(&g, x, y, depth), li_equal(&g, x, y), "{}", g.to_text());
            }
        }
    }
}

fn graph_and_elements() -> impl Strategy<Value = (Graph, Vec<GisElement>)> {
    (0usize..common::FIXTURES.len()).prop_map(|i| {
        let g = common::fixture(common::FIXTURES[i]);
        let xs = enumerate_elements(&g, 4);
        (g, xs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn element_text_round_trips((g, xs) in graph_and_elements(), i in any::<prop::sample::Index>()) {
        let x = &xs[i.index(xs.len())];
        let shown = x.display(&g).to_string();
        prop_assert_eq!(&parse_element(&g, &shown).unwrap(), x);
    }

    #[test]
    fn associativity_on_long_triples(
        (_g, xs) in graph_and_elements(),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        k in any::<prop::sample::Index>(),
    ) {
        let (x, y, z) = (&xs[i.index(xs.len())], &xs[j.index(xs.len())], &xs[k.index(xs.len())]);
        prop_assert_eq!(gis_multiply(&gis_multiply(x, y), z), gis_multiply(x, &gis_multiply(y, z)));
    }

    #[test]
    fn algebra_is_associative_and_distributive(
        (g, xs) in graph_and_elements(),
        picks in prop::collection::vec((any::<prop::sample::Index>(), -3i64..=3), 6),
    ) {
        let gamma = SpecialEdgeChoice::default_for(&g);
        let el = |s: &[(prop::sample::Index, i64)]| {
            s.iter().fold(AlgebraElement::zero(), |acc, (i, c)| {
                alg_add(&acc, &alg_scale(&rational(*c), &to_basis(&g, &gamma, &xs[i.index(xs.len())])))
            })
        };
        let (a, b, c) = (el(&picks[0..2]), el(&picks[2..4]), el(&picks[4..6]));
        let m = |x: &AlgebraElement, y: &AlgebraElement| alg_multiply(&g, &gamma, x, y);
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(m(&a, &alg_add(&b, &c)), alg_add(&m(&a, &b), &m(&a, &c)));
        prop_assert_eq!(m(&alg_add(&a, &b), &c), alg_add(&m(&a, &c), &m(&b, &c)));
    }
}
