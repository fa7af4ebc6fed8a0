use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphinv::congruence::{enumerate_pairs, preserves_gis, validate_pair};
use graphinv::contraction::li_isomorphic;
use graphinv::gis::{gis_multiply, local_universal_rank, parse_element, tau, universal_rank, Tau};
use graphinv::graph::{
    check_morphism, classify_circle_immersion, cycles_up_to_conjugacy, lift_circuit_power, lift_max_prefix, lift_path,
    sim_classes, strongly_connected_components, CircleImmersion, DirectedPath, Graph, GraphMorphism, MorphismKind,
};
use graphinv::leavitt::{classify_brandt, green_relation, is_combinatorial, li_reduce, BrandtClass, GreenRelation};
use graphinv::lpa::{dimension_if_acyclic, to_basis, SpecialEdgeChoice};
use graphinv::Error;

#[derive(Parser)]
#[command(
    name = "graphinv",
    version,
    about = "Graph inverse semigroups, Leavitt inverse semigroups and Leavitt path algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classes, components, cycles, ranks and classifications of a graph
    Analyze {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also tabulate congruence pairs with cycle orders up to this bound
        #[arg(long)]
        max_f: Option<u32>,
    },
    /// Product of two elements
    Mul {
        graph: PathBuf,
        x: String,
        y: String,
        /// Multiply in LI(Γ) instead of I(Γ)
        #[arg(long)]
        leavitt: bool,
    },
    /// Normal form in LI(Γ)
    Reduce { graph: PathBuf, x: String },
    /// Green's relation test in LI(Γ); exit 1 when unrelated
    Green {
        graph: PathBuf,
        #[arg(value_parser = parse_relation)]
        relation: GreenRelation,
        x: String,
        y: String,
    },
    /// Brandt type of LI(Γ) for a connected graph
    Brandt { graph: PathBuf },
    /// Decide LI(Γ) ≅ LI(Δ); exit 1 when not isomorphic
    Iso {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// Congruence pairs and whether each quotient is again a graph inverse semigroup
    Congruences {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_f: u32,
    },
    /// Universal group rank, local ranks, and the image of an element
    Universal { graph: PathBuf, x: Option<String> },
    /// Leavitt path algebra arithmetic
    Lpa {
        #[command(subcommand)]
        cmd: LpaCmd,
    },
    /// Graph morphisms: classification and path lifting
    Morphism {
        #[command(subcommand)]
        cmd: MorphismCmd,
    },
}

#[derive(Subcommand)]
enum LpaCmd {
    /// Natural-basis expansion of an element
    Reduce {
        graph: PathBuf,
        x: String,
        /// Comma-separated special edges overriding the smallest out-edge
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<String>,
    },
    /// Dimension of L(Γ), or `infinite (cyclic)`
    Dim { graph: PathBuf },
}

#[derive(Subcommand)]
enum MorphismCmd {
    /// Morphism, directed immersion or directed cover
    Check { morphism: PathBuf },
    /// Lift a codomain path into the domain
    Lift {
        morphism: PathBuf,
        path: String,
        /// Domain vertex to start from; defaults to the first in the fiber
        #[arg(long)]
        from: Option<String>,
        /// Lift powers of a circuit until the lift closes up
        #[arg(long)]
        power: bool,
    },
}

fn parse_relation(s: &str) -> std::result::Result<GreenRelation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_morphism(path: &Path) -> Result<GraphMorphism> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let m = GraphMorphism::parse(&text, |rel| {
        let p = dir.join(rel);
        let t = std::fs::read_to_string(&p).map_err(|e| Error::Load(format!("{}: {}", p.display(), e)))?;
        Graph::parse(&t)
    })
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(m)
}

#[derive(Serialize)]
struct CongruenceRow {
    pair: String,
    gis_quotient: bool,
}

#[derive(Serialize)]
struct Report {
    vertices: usize,
    edges: usize,
    classes: Vec<Vec<String>>,
    sccs: Vec<Vec<String>>,
    cycles: Vec<String>,
    universal_rank: usize,
    local_ranks: Vec<(String, usize)>,
    circle_immersion: String,
    combinatorial: bool,
    brandt: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    congruences: Option<Vec<CongruenceRow>>,
}

fn immersion_text(g: &Graph) -> String {
    match classify_circle_immersion(g) {
        Err(_) => "disconnected".into(),
        Ok(CircleImmersion::NotImmersible) => "not-immersible".into(),
        Ok(CircleImmersion::TreeWithSink { sink, max_depth }) => {
            format!("tree-with-sink {} depth {}", g.vertex_name(sink), max_depth)
        }
        Ok(CircleImmersion::TreeNoSinkCover) => "tree-without-sink".into(),
        Ok(CircleImmersion::UniqueCycleCover { cycle_length }) => format!("unique-cycle length {}", cycle_length),
    }
}

fn brandt_text(g: &Graph) -> String {
    match classify_brandt(g) {
        Err(_) => "disconnected".into(),
        Ok(BrandtClass::NotCircleImmersible) => "not-circle-immersible".into(),
        Ok(BrandtClass::Brandt(d)) => d.to_string(),
    }
}

fn congruence_rows(g: &Graph, max_f: u32) -> Result<Vec<CongruenceRow>> {
    enumerate_pairs(g, max_f)
        .into_iter()
        .filter(|p| validate_pair(g, p))
        .map(|p| Ok(CongruenceRow { pair: p.display(g), gis_quotient: preserves_gis(g, &p)? }))
        .collect()
}

fn report(g: &Graph, max_f: Option<u32>) -> Result<Report> {
    Ok(Report {
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        classes: sim_classes(g).named(g),
        sccs: strongly_connected_components(g).named(g),
        cycles: cycles_up_to_conjugacy(g).iter().map(|c| c.path().display(g)).collect(),
        universal_rank: universal_rank(g),
        local_ranks: g.vertices().map(|v| (g.vertex_name(v).to_string(), local_universal_rank(g, v))).collect(),
        circle_immersion: immersion_text(g),
        combinatorial: is_combinatorial(g),
        brandt: brandt_text(g),
        congruences: max_f.map(|k| congruence_rows(g, k)).transpose()?,
    })
}

fn blocks(b: &[Vec<String>]) -> String {
    b.iter().map(|c| format!("{{{}}}", c.join(","))).collect::<Vec<_>>().join(" ")
}

fn print_report(r: &Report) {
    println!("vertices: {}", r.vertices);
    println!("edges: {}", r.edges);
    println!("classes: {}", blocks(&r.classes));
    println!("sccs: {}", blocks(&r.sccs));
    println!("cycles: {}", if r.cycles.is_empty() { "none".into() } else { r.cycles.join(" ") });
    println!("universal-rank: {}", r.universal_rank);
    for (v, k) in &r.local_ranks {
        println!("local-rank {}: {}", v, k);
    }
    println!("circle-immersion: {}", r.circle_immersion);
    println!("combinatorial: {}", if r.combinatorial { "yes" } else { "no" });
    println!("brandt: {}", r.brandt);
    if let Some(rows) = &r.congruences {
        for row in rows {
            println!("congruence: {} gis-quotient: {}", row.pair, if row.gis_quotient { "yes" } else { "no" });
        }
    }
}

fn kind_text(k: MorphismKind) -> &'static str {
    match k {
        MorphismKind::NotMorphism => "not-a-morphism",
        MorphismKind::Morphism => "morphism",
        MorphismKind::DirectedImmersion => "directed-immersion",
        MorphismKind::DirectedCover => "directed-cover",
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Analyze { graph, format, max_f } => {
            let g = load(&graph)?;
            let r = report(&g, max_f)?;
            match format {
                Format::Text => print_report(&r),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r)?),
            }
        }
        Cmd::Mul { graph, x, y, leavitt } => {
            let g = load(&graph)?;
            let (x, y) = (parse_element(&g, &x)?, parse_element(&g, &y)?);
            let z = gis_multiply(&x, &y);
            let z = if leavitt { li_reduce(&g, &z).into_gis() } else { z };
            println!("{}", z.display(&g));
        }
        Cmd::Reduce { graph, x } => {
            let g = load(&graph)?;
            println!("{}", li_reduce(&g, &parse_element(&g, &x)?).display(&g));
        }
        Cmd::Green { graph, relation, x, y } => {
            let g = load(&graph)?;
            let related = green_relation(&g, relation, &parse_element(&g, &x)?, &parse_element(&g, &y)?);
            println!("{}", if related { "related" } else { "not-related" });
            return Ok(if related { 0 } else { 1 });
        }
        Cmd::Brandt { graph } => {
            let g = load(&graph)?;
            match classify_brandt(&g)? {
                BrandtClass::Brandt(d) => println!("{}", d),
                BrandtClass::NotCircleImmersible => {
                    println!("not-circle-immersible");
                    return Ok(1);
                }
            }
        }
        Cmd::Iso { g1, g2, witness } => {
            let (g, d) = (load(&g1)?, load(&g2)?);
            match li_isomorphic(&g, &d) {
                None => {
                    println!("not-isomorphic");
                    return Ok(1);
                }
                Some(w) => {
                    println!("isomorphic");
                    if witness {
                        for (e, img) in w.edge_images() {
                            println!("{} -> {}", g.edge_name(e), img.display(&d));
                        }
                    }
                }
            }
        }
        Cmd::Congruences { graph, max_f } => {
            let g = load(&graph)?;
            for row in congruence_rows(&g, max_f)? {
                println!("{} gis-quotient: {}", row.pair, if row.gis_quotient { "yes" } else { "no" });
            }
        }
        Cmd::Universal { graph, x } => {
            let g = load(&graph)?;
            println!("rank: {}", universal_rank(&g));
            for v in g.vertices() {
                println!("local-rank {}: {}", g.vertex_name(v), local_universal_rank(&g, v));
            }
            if let Some(x) = x {
                match tau(&parse_element(&g, &x)?) {
                    Tau::ZeroMark => println!("tau: zero"),
                    Tau::Word(w) => println!("tau: {}", w.display(&g)),
                }
            }
        }
        Cmd::Lpa { cmd: LpaCmd::Reduce { graph, x, gamma } } => {
            let g = load(&graph)?;
            let picks = gamma.iter().map(|e| g.edge(e)).collect::<graphinv::Result<Vec<_>>>()?;
            let gamma = SpecialEdgeChoice::with(&g, &picks)?;
            println!("{}", to_basis(&g, &gamma, &parse_element(&g, &x)?).display(&g));
        }
        Cmd::Lpa { cmd: LpaCmd::Dim { graph } } => {
            let g = load(&graph)?;
            match dimension_if_acyclic(&g) {
                Ok(n) => println!("{}", n),
                Err(Error::Cyclic) => println!("infinite (cyclic)"),
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::Morphism { cmd: MorphismCmd::Check { morphism } } => {
            let m = load_morphism(&morphism)?;
            let k = check_morphism(&m);
            println!("{}", kind_text(k));
            return Ok(if k == MorphismKind::NotMorphism { 1 } else { 0 });
        }
        Cmd::Morphism { cmd: MorphismCmd::Lift { morphism, path, from, power } } => {
            let m = load_morphism(&morphism)?;
            let (dom, cod) = (m.domain(), m.codomain());
            let p = DirectedPath::parse(cod, &path)?;
            if power {
                let l = lift_circuit_power(&m, &p)?;
                println!("vertex: {}", dom.vertex_name(l.vertex));
                println!("period: {}", l.period);
                println!("lift: {}", l.lift.display(dom));
                return Ok(0);
            }
            let v = match from {
                Some(name) => dom.vertex(&name)?,
                None => match dom.vertices().find(|&v| m.map_vertex(v) == p.start()) {
                    Some(v) => v,
                    None => bail!("empty fiber over {}", cod.vertex_name(p.start())),
                },
            };
            if check_morphism(&m) == MorphismKind::DirectedCover {
                println!("lift: {}", lift_path(&m, &p, v)?.display(dom));
            } else {
                let (prefix, lift) = lift_max_prefix(&m, &p, v)?;
                println!("lifted-prefix: {}", prefix.display(cod));
                println!("lift: {}", lift.display(dom));
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(3)
        }
    }
}
