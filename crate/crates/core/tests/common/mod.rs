#![allow(dead_code)]

use graphinv::graph::{Graph, GraphMorphism};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const FIXTURES: &[&str] = &["b1", "b2", "c3", "l2", "g61", "g62", "g72", "d72", "cov2", "edge"];

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

pub fn fixture(name: &str) -> Graph {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.graph"))).unwrap();
    Graph::parse(&text).unwrap()
}

pub fn fixtures() -> Vec<(&'static str, Graph)> {
    FIXTURES.iter().map(|&n| (n, fixture(n))).collect()
}

pub fn morphism(name: &str) -> GraphMorphism {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.morph"))).unwrap();
    GraphMorphism::parse(&text, |p| Graph::parse(&std::fs::read_to_string(fixture_path(p)).unwrap())).unwrap()
}

/// A graph with 1..=max_v vertices and at most `max_e` edges, each vertex
/// of out-degree at most 3.
pub fn random_graph(rng: &mut StdRng, max_v: usize, max_e: usize) -> Graph {
    let n = rng.gen_range(1..=max_v);
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    let m = rng.gen_range(0..=max_e);
    let mut outdeg = vec![0; n];
    for j in 0..m {
        let s = rng.gen_range(0..n);
        if outdeg[s] == 3 {
            continue;
        }
        outdeg[s] += 1;
        let r = rng.gen_range(0..n);
        g.add_edge(&format!("e{j}"), &format!("v{s}"), &format!("v{r}")).unwrap();
    }
    g
}

pub fn random_graphs(count: usize, seed: u64, max_v: usize, max_e: usize) -> Vec<Graph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, max_v, max_e)).collect()
}

/// Fixtures followed by `count` random graphs.
pub fn corpus(count: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = fixtures().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    for (i, g) in random_graphs(count, seed, 6, 8).into_iter().enumerate() {
        out.push((format!("random#{i}"), g));
    }
    out
}
