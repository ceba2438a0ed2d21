//! `graphcurves`: command-line front end over JSON graph, divisor and
//! morphism files.
//!
//! Exit codes: 0 success or property true, 1 checked property false,
//! 2 usage or parse error, 3 hypothesis violation or budget exceeded.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphcurves::divisor::{self, canonical_divisor, clifford_check, rank, reduce_with_script, Divisor};
use graphcurves::enumerate::two_edge_connected_multigraphs;
use graphcurves::forms::{canonical_fibers, canonical_map, FlowBasis};
use graphcurves::hyperelliptic::{
    classify_weierstrass_free, is_hyperelliptic, pm_one_report, recognize_family, weierstrass_points,
};
use graphcurves::io::{read_graph, read_json, DivisorJson, GraphJson, MorphismJson, WitnessJson};
use graphcurves::jacobian::{
    eulerian_cut, morphism_to_b2, sk_injectivity, symmetric_power, two_torsion_flow, JacobianStructure,
};
use graphcurves::{automorphism, Error, Exec, GraphMorphism, HarmonicMorphism, Multigraph, VertexFunction};
use graphcurves::{VertexId, WeierstrassClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "graphcurves", version, about = "Divisor theory, Jacobians and harmonic morphisms of multigraphs")]
struct Cli {
    /// Worker threads for the parallel scans; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on enumerated group elements and automorphisms.
    #[arg(long, global = true, default_value_t = 5000)]
    budget: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basic invariants of a graph.
    Info { graph: PathBuf },
    /// Rank of a divisor.
    Rank {
        graph: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// The q-reduced representative and its firing script.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: VertexId,
    },
    /// Riemann–Roch for one divisor, or Riemann–Roch and Clifford on seeded samples.
    RrCheck {
        graph: PathBuf,
        #[arg(long)]
        divisor: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Spanning-tree count and invariant factors of the Jacobian.
    Jacobian {
        graph: PathBuf,
        /// Keep the leading 1s.
        #[arg(long)]
        all_factors: bool,
    },
    /// Injectivity of S^(k), or the class of a list of points.
    AbelJacobi {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        base: VertexId,
        /// Comma-separated vertices; prints the class of their sum.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<VertexId>>,
    },
    /// An Eulerian cut, present exactly when the spanning-tree count is even.
    EulerianCut { graph: PathBuf },
    /// A non-constant harmonic morphism onto B_2, as morphism JSON.
    ToB2 { graph: PathBuf },
    /// Harmonicity, multiplicities and degree of a morphism.
    MorphismCheck { source: PathBuf, target: PathBuf, morphism: PathBuf },
    /// Riemann–Hurwitz for a harmonic morphism.
    RhCheck { source: PathBuf, target: PathBuf, morphism: PathBuf },
    /// Push a divisor or function forward along a harmonic morphism.
    Push {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        divisor: Option<PathBuf>,
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Pull a divisor or function back along a harmonic morphism.
    Pull {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        divisor: Option<PathBuf>,
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Flow basis, Gram matrix and 2-torsion flow.
    Forms { graph: PathBuf },
    /// Hyperplane of each edge under the canonical map.
    CanonicalMap { graph: PathBuf },
    /// Automorphism and involution counts.
    Aut { graph: PathBuf },
    /// Hyperelliptic witness as JSON, with the ±1 report.
    Hyperelliptic { graph: PathBuf },
    /// Weierstrass points.
    Weierstrass { graph: PathBuf },
    /// Which Weierstrass-free family a hyperelliptic graph belongs to.
    Classify { graph: PathBuf },
    /// One JSON line per 2-edge-connected multigraph with at most `max_edges` edges.
    Scan {
        #[arg(long, default_value_t = 7)]
        max_edges: usize,
    },
}

/// `{"values": [...]}`
#[derive(Serialize, Deserialize)]
struct FunctionJson {
    values: Vec<i64>,
}

#[derive(Serialize)]
struct ScanLine {
    vertices: usize,
    edges: Vec<[VertexId; 2]>,
    genus: usize,
    hyperelliptic: bool,
    weierstrass: Vec<VertexId>,
    family: String,
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Run = Result<bool, Failure>;

fn list<T: Display>(items: &[T]) -> String {
    format!("[{}]", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn family_name(c: &WeierstrassClass) -> String {
    match c {
        WeierstrassClass::BananaUnit(n) => format!("B_{n}"),
        WeierstrassClass::OddTripleBanana(a, b, c) => format!("B({a},{b},{c})"),
        WeierstrassClass::Theta(l) => format!("Phi({l})"),
        WeierstrassClass::NotInFamilies => "none".into(),
    }
}

fn read_divisor(path: &Path, g: &Multigraph) -> Result<Divisor, Failure> {
    Ok(read_json::<DivisorJson>(path)?.to_divisor(g)?)
}

fn read_function(path: &Path, g: &Multigraph) -> Result<VertexFunction, Failure> {
    let f: FunctionJson = read_json(path)?;
    if f.values.len() != g.vertex_count() {
        return Err(Error::Dimension { expected: g.vertex_count(), got: f.values.len() }.into());
    }
    Ok(VertexFunction::new(f.values))
}

fn read_morphism(source: &Path, target: &Path, morphism: &Path) -> Result<GraphMorphism, Failure> {
    let (s, t) = (read_graph(source)?, read_graph(target)?);
    Ok(read_json::<MorphismJson>(morphism)?.to_morphism(&s, &t)?)
}

fn harmonic(source: &Path, target: &Path, morphism: &Path) -> Result<HarmonicMorphism, Failure> {
    Ok(HarmonicMorphism::new(read_morphism(source, target, morphism)?)?)
}

fn run(cli: &Cli, exec: Exec) -> Run {
    match &cli.command {
        Command::Info { graph } => {
            let g = read_graph(graph)?;
            println!("vertices={} edges={} genus={}", g.vertex_count(), g.edge_count(), g.genus());
            match g.edge_connectivity() {
                Some(l) => println!("edge_connectivity={l}"),
                None => println!("edge_connectivity=none"),
            }
            println!("bridges={}", list(&g.bridges()));
            println!("simple={} tree={}", g.is_simple(), g.is_tree());
            Ok(true)
        }
        Command::Rank { graph, divisor } => {
            let g = read_graph(graph)?;
            let d = read_divisor(divisor, &g)?;
            println!("rank={}", divisor::rank_with(&g, &d, exec));
            Ok(true)
        }
        Command::Reduce { graph, divisor, base } => {
            let g = read_graph(graph)?;
            let d = read_divisor(divisor, &g)?;
            if *base >= g.vertex_count() {
                return Err(Failure::Usage(format!("base vertex {base} out of range")));
            }
            let (r, script) = reduce_with_script(&g, &d, *base);
            println!("reduced={}", list(r.divisor.coeffs()));
            println!("script={}", list(script.values()));
            Ok(true)
        }
        Command::RrCheck { graph, divisor, samples } => {
            let g = read_graph(graph)?;
            let k = canonical_divisor(&g);
            if let Some(path) = divisor {
                let d = read_divisor(path, &g)?;
                let residual = divisor::riemann_roch_residual(&g, &d);
                println!(
                    "degree={} rank={} rank_dual={} genus={} residual={residual}",
                    d.degree(),
                    rank(&g, &d),
                    rank(&g, &(&k - &d)),
                    g.genus()
                );
                return Ok(residual == 0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let n = g.vertex_count();
            let hi = 2 * g.genus() as i64 + 1;
            let (mut rr_failures, mut applicable, mut clifford_failures) = (0, 0, 0);
            for _ in 0..*samples {
                let degree = rng.gen_range(-3..=hi);
                let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                c[n - 1] += degree - c.iter().sum::<i64>();
                let d = Divisor::new(c);
                rr_failures += usize::from(divisor::riemann_roch_residual(&g, &d) != 0);
                match clifford_check(&g, &d) {
                    Ok(ok) => {
                        applicable += 1;
                        clifford_failures += usize::from(!ok);
                    }
                    Err(Error::NotApplicable(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            println!("samples={samples} rr_failures={rr_failures}");
            println!("clifford_applicable={applicable} clifford_failures={clifford_failures}");
            Ok(rr_failures == 0 && clifford_failures == 0)
        }
        Command::Jacobian { graph, all_factors } => {
            let g = read_graph(graph)?;
            let s = JacobianStructure::of(&g);
            let factors = if *all_factors { s.invariant_factors.clone() } else { s.nontrivial_factors() };
            println!("kappa={} factors={}", s.order, list(&factors));
            Ok(true)
        }
        Command::AbelJacobi { graph, k, base, points } => {
            let g = read_graph(graph)?;
            if *base >= g.vertex_count() {
                return Err(Failure::Usage(format!("base vertex {base} out of range")));
            }
            if let Some(points) = points {
                if let Some(p) = points.iter().find(|&&p| p >= g.vertex_count()) {
                    return Err(Failure::Usage(format!("vertex {p} out of range")));
                }
                let class = symmetric_power(&g, *base, points);
                println!("class={}", list(class.representative().coeffs()));
                return Ok(true);
            }
            let injective = sk_injectivity(&g, *k, exec)?;
            println!("k={k} injective={injective} edge_connected_k_plus_1={}", g.is_k_edge_connected(k + 1));
            Ok(injective)
        }
        Command::EulerianCut { graph } => {
            let g = read_graph(graph)?;
            match eulerian_cut(&g) {
                Some(cut) => {
                    println!("side={} edges={}", list(&cut.side), list(&cut.edges));
                    Ok(true)
                }
                None => {
                    println!("no Eulerian cut (kappa is odd)");
                    Ok(false)
                }
            }
        }
        Command::ToB2 { graph } => {
            let g = read_graph(graph)?;
            match morphism_to_b2(&g) {
                Some(phi) => {
                    println!("{}", serde_json::to_string(&MorphismJson::from(&phi)).map_err(Error::from)?);
                    Ok(true)
                }
                None => {
                    println!("no morphism onto B_2 (kappa is odd)");
                    Ok(false)
                }
            }
        }
        Command::MorphismCheck { source, target, morphism } => {
            let phi = read_morphism(source, target, morphism)?;
            match phi.is_harmonic() {
                Some(c) => {
                    println!("harmonic degree={}", c.degree);
                    println!("m={} v={}", list(&c.horizontal), list(&c.vertical));
                    println!("covering={}", phi.is_covering());
                    Ok(true)
                }
                None => {
                    println!("not harmonic");
                    Ok(false)
                }
            }
        }
        Command::RhCheck { source, target, morphism } => {
            let phi = harmonic(source, target, morphism)?;
            let rh = phi.riemann_hurwitz();
            println!("degree={} genus={} target_genus={}", phi.degree(), phi.source().genus(), phi.target().genus());
            println!("ramification={}", list(rh.ramification.coeffs()));
            println!("divisor_identity={} residual={}", rh.divisor_identity, rh.residual);
            Ok(rh.divisor_identity && rh.residual == 0)
        }
        Command::Push { source, target, morphism, divisor, function } => {
            let phi = harmonic(source, target, morphism)?;
            if let Some(path) = divisor {
                let d = read_divisor(path, phi.source())?;
                println!("divisor={}", list(phi.push_divisor(&d).coeffs()));
            } else if let Some(path) = function {
                let f = read_function(path, phi.source())?;
                println!("function={}", list(phi.push_function(&f).values()));
            }
            Ok(true)
        }
        Command::Pull { source, target, morphism, divisor, function } => {
            let phi = harmonic(source, target, morphism)?;
            if let Some(path) = divisor {
                let d = read_divisor(path, phi.target())?;
                println!("divisor={}", list(phi.pull_divisor(&d).coeffs()));
            } else if let Some(path) = function {
                let f = read_function(path, phi.target())?;
                println!("function={}", list(phi.pull_function(&f).values()));
            }
            Ok(true)
        }
        Command::Forms { graph } => {
            let g = read_graph(graph)?;
            let basis = FlowBasis::new(&g);
            println!("dimension={} basis_edges={}", basis.dimension(), list(&basis.non_tree_edges));
            for (e, cycle) in basis.non_tree_edges.iter().zip(&basis.cycles) {
                println!("cycle[{e}]={}", list(cycle));
            }
            let gram: Vec<String> = basis.gram_matrix().iter().map(|row| list(row)).collect();
            println!("gram={}", list(&gram));
            match two_torsion_flow(&g) {
                Some(w) => println!("two_torsion_doubled={}", list(&w.doubled)),
                None => println!("two_torsion_doubled=none"),
            }
            Ok(true)
        }
        Command::CanonicalMap { graph } => {
            let g = read_graph(graph)?;
            for (e, h) in canonical_map(&g)?.iter().enumerate() {
                println!("edge {e}: {h}");
            }
            let fibers: Vec<String> = canonical_fibers(&g)?.iter().map(|f| list(f)).collect();
            let injective = fibers.len() == g.edge_count();
            println!("fibers={}", list(&fibers));
            println!("injective={injective} three_edge_connected={}", g.is_k_edge_connected(3));
            Ok(true)
        }
        Command::Aut { graph } => {
            let g = read_graph(graph)?;
            let all = automorphism::automorphisms(&g, cli.budget)?;
            let involutions: Vec<_> = all.iter().filter(|a| a.is_involution()).collect();
            println!("automorphisms={} involutions={}", all.len(), involutions.len());
            for iota in involutions {
                println!("vmap={} emap={} mixing={}", list(iota.vmap()), list(iota.emap()), iota.is_mixing(&g));
            }
            Ok(true)
        }
        Command::Hyperelliptic { graph } => {
            let g = read_graph(graph)?;
            match is_hyperelliptic(&g, exec)? {
                Some(w) => {
                    println!("hyperelliptic=true");
                    println!("{}", serde_json::to_string(&WitnessJson::new(&g, &w)).map_err(Error::from)?);
                    let r = pm_one_report(&g, &w.involution)?;
                    println!(
                        "minus_one: jac_push={} jac_pull={} forms_push={} forms_pull={}",
                        r.jac_push_negates, r.jac_pull_negates, r.forms_push_negates, r.forms_pull_negates
                    );
                    Ok(true)
                }
                None if g.genus() < 2 => {
                    println!("hyperelliptic=false (genus {} < 2)", g.genus());
                    Ok(false)
                }
                None => {
                    println!("hyperelliptic=false");
                    Ok(false)
                }
            }
        }
        Command::Weierstrass { graph } => {
            let g = read_graph(graph)?;
            println!("weierstrass={}", list(&weierstrass_points(&g, exec)));
            Ok(true)
        }
        Command::Classify { graph } => {
            let g = read_graph(graph)?;
            match classify_weierstrass_free(&g, exec) {
                Ok(c) => {
                    println!("family={}", family_name(&c));
                    Ok(true)
                }
                Err(Error::NotHyperelliptic) => {
                    println!("not hyperelliptic");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Scan { max_edges } => {
            let mut all_in_families = true;
            for g in two_edge_connected_multigraphs(*max_edges, exec) {
                let hyperelliptic = g.genus() >= 2 && is_hyperelliptic(&g, exec)?.is_some();
                let weierstrass = weierstrass_points(&g, exec);
                let family = recognize_family(&g);
                if hyperelliptic && weierstrass.is_empty() && family == WeierstrassClass::NotInFamilies {
                    all_in_families = false;
                }
                let line = ScanLine {
                    vertices: g.vertex_count(),
                    edges: GraphJson::from(&g).edges,
                    genus: g.genus(),
                    hyperelliptic,
                    weierstrass,
                    family: family_name(&family),
                };
                println!("{}", serde_json::to_string(&line).map_err(Error::from)?);
            }
            Ok(all_in_families)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotHarmonic | Error::NotHyperelliptic => 1,
        Error::Hypothesis(_) | Error::NotApplicable(_) | Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn execute(cli: &Cli) -> Run {
    let exec = if cli.jobs == Some(1) { Exec::Sequential } else { Exec::Parallel };
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.jobs.filter(|&n| n > 1) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
        return pool.install(|| run(cli, exec));
    }
    run(cli, exec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            if matches!(e, Error::NotHarmonic) {
                println!("not harmonic");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
