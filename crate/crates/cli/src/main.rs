//! Command-line front end: generate gadget graphs, query the exact distance
//! oracle, simulate node programs under the bandwidth-limited round engine,
//! and run verification sweeps.
//!
//! Reports go to stdout as JSON (with the full invocation embedded for
//! reproducibility); human-readable summaries go to stderr. Exit codes:
//! 0 success/verified, 1 verification or runtime failure, 2 usage error.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use congestlab::algorithms::{ecc_diameter_radius, pipelined_apsp, suggested_max_rounds};
use congestlab::boolean::{intersection_size, pair_to_index, Bits};
use congestlab::dist::{apsp_oracle, distance_params, Dist};
use congestlab::gadgets::{
    apsp_params, build_apsp_gadget, build_ecc_gadget, build_line, decision_thresholds,
    decode_apsp, decode_ecc, decode_ecc_approx_verified, ecc_params, subdivision_length,
};
use congestlab::graph::{random_connected, LabeledGraph, Role, Sidecar};
use congestlab::sim::{cut_report, report_json, run, NodeOutput, SimConfig, SimResult};
use congestlab::Error;

#[derive(Parser)]
#[command(
    name = "congestlab",
    version,
    about = "Distance-gadget laboratory and bandwidth-limited synchronous network simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (gadget, line or random) as edge list plus role sidecar
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Exact distances, eccentricities and decoders, by breadth-first search
    Oracle(OracleArgs),
    /// Simulate a node program under the round engine
    Run(RunArgs),
    /// Run a verification sweep and report failures
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output path prefix: writes <out>.edges and <out>.roles.json
    #[arg(long)]
    out: PathBuf,
    /// Also write a DOT rendering to <out>.dot
    #[arg(long)]
    dot: bool,
}

#[derive(Subcommand)]
enum GenKind {
    /// Pairwise distance gadget: d(a_i, b_j) is 3 iff pair bit (i, j) is set
    /// in both vectors, else 2
    Apsp {
        #[arg(long)]
        n: usize,
        /// Bit string of length k = s(s-1)/2, or "random"
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Seed for random bit vectors
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Eccentricity gadget: e(a_p) is 3*ell+1 iff bit p is set in both
    /// vectors, else 5*ell+1
    Ecc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Path of d + 1 nodes with endpoint inputs
    Line {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded random connected graph
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct OracleArgs {
    /// Graph path prefix (reads <graph>.edges and, if present,
    /// <graph>.roles.json)
    #[arg(long)]
    graph: PathBuf,
    /// Include the full distance matrix in the report
    #[arg(long)]
    matrix: bool,
    /// Subdivision length for the eccentricity decoder (default: inferred
    /// from intermediate roles)
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ProgramKind {
    Apsp,
    Ecc,
}

#[derive(Args)]
struct RunArgs {
    /// Node program to execute
    #[arg(value_enum)]
    program: ProgramKind,
    #[arg(long)]
    graph: PathBuf,
    /// Bandwidth multiplier (bits per edge per round = beta * ceil(log2(n+1)))
    #[arg(long, default_value_t = 4)]
    beta: usize,
    /// Round limit (default: 8n + 16)
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Account traffic across the Alice/Bob cut (needs a full side map)
    #[arg(long)]
    cut: bool,
    /// Compare outputs against the BFS oracle; a mismatch exits 1
    #[arg(long)]
    check_oracle: bool,
}

#[derive(ValueEnum, Clone, Copy)]
enum Suite {
    /// Pairwise distance law and decoder equivalence
    ApspProp,
    /// Eccentricity dichotomy, distance caps and decoder equivalence
    EccExact,
    /// In-band approximate estimates decode exactly
    EccApprox,
    /// Separation of the approximate decision thresholds
    Thresholds,
    /// Simulated programs against the oracle, with round budgets
    SimVsOracle,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Gadget size (defaults: 8 for apsp-prop, minimal for the others)
    #[arg(long)]
    n: Option<usize>,
    /// Subdivision length for ecc-exact (default 1)
    #[arg(long)]
    ell: Option<usize>,
    /// Approximation slack; thresholds sweeps 0.01..=0.66 when omitted
    #[arg(long)]
    eps: Option<f64>,
    /// Instances to test when the sweep is sampled rather than exhaustive
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random-graph size range for sim-vs-oracle, e.g. 2..100
    #[arg(long, default_value = "2..100")]
    n_range: String,
}

enum CliError {
    Usage(String),
    Failure(String),
}

type CliResult<T> = Result<T, CliError>;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Disconnected(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

fn usage(msg: impl Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().collect::<Vec<_>>().join(" ");
    let outcome = match cli.command {
        Command::Gen { kind } => cmd_gen(kind, &invocation),
        Command::Oracle(args) => cmd_oracle(args, &invocation),
        Command::Run(args) => cmd_run(args, &invocation),
        Command::Verify(args) => cmd_verify(args, &invocation),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

// --- gen ---------------------------------------------------------------

/// Parses a bit-vector argument: a '0'/'1' string of length `k`, or
/// "random", drawn from `seed` (distinct streams for x and y).
fn resolve_bits(raw: &str, k: usize, seed: u64, stream: u64) -> CliResult<Bits> {
    if raw == "random" {
        return Ok(Bits::random(k, seed.wrapping_mul(2).wrapping_add(stream)));
    }
    let bits: Bits = raw.parse()?;
    if bits.len() != k {
        return Err(usage(format!(
            "bit vector must have length k = {k}, got {} ({raw:?})",
            bits.len()
        )));
    }
    Ok(bits)
}

fn cmd_gen(kind: GenKind, invocation: &str) -> CliResult<()> {
    let (graph, out) = match kind {
        GenKind::Apsp { n, x, y, seed, out } => {
            let k = apsp_params(n)?.k;
            let x = resolve_bits(&x, k, seed, 0)?;
            let y = resolve_bits(&y, k, seed, 1)?;
            (build_apsp_gadget(n, &x, &y)?, out)
        }
        GenKind::Ecc {
            n,
            ell,
            x,
            y,
            seed,
            out,
        } => {
            let k = ecc_params(n, ell)?.k;
            let x = resolve_bits(&x, k, seed, 0)?;
            let y = resolve_bits(&y, k, seed, 1)?;
            (build_ecc_gadget(n, ell, &x, &y)?, out)
        }
        GenKind::Line { d, out } => (build_line(d)?, out),
        GenKind::Random { n, m, seed, out } => (random_connected(n, m, seed)?, out),
    };
    let edges_path = out.out.with_extension("edges");
    let roles_path = out.out.with_extension("roles.json");
    write_file(&edges_path, &graph.to_edge_list())?;
    let sidecar = serde_json::to_string_pretty(&graph.sidecar())
        .expect("sidecar serialization cannot fail");
    write_file(&roles_path, &sidecar)?;
    let mut files = vec![edges_path.clone(), roles_path];
    if out.dot {
        let dot_path = out.out.with_extension("dot");
        write_file(&dot_path, &graph.to_dot())?;
        files.push(dot_path);
    }
    let report = json!({
        "invocation": invocation,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "files": files,
    });
    println!("{report}");
    eprintln!(
        "wrote {} nodes / {} edges to {}",
        graph.node_count(),
        graph.edge_count(),
        out.out.display()
    );
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(prefix: &Path) -> CliResult<LabeledGraph> {
    let prefix = match prefix.extension() {
        Some(ext) if ext == "edges" => prefix.with_extension(""),
        _ => prefix.to_path_buf(),
    };
    let edges_path = prefix.with_extension("edges");
    let text = std::fs::read_to_string(&edges_path)
        .map_err(|e| usage(format!("cannot read {}: {e}", edges_path.display())))?;
    let mut graph = LabeledGraph::from_edge_list(&text)?;
    let roles_path = prefix.with_extension("roles.json");
    if roles_path.exists() {
        let text = std::fs::read_to_string(&roles_path)
            .map_err(|e| usage(format!("cannot read {}: {e}", roles_path.display())))?;
        let sidecar: Sidecar = serde_json::from_str(&text)
            .map_err(|e| usage(format!("malformed {}: {e}", roles_path.display())))?;
        graph.apply_sidecar(&sidecar)?;
    }
    Ok(graph)
}

// --- oracle ------------------------------------------------------------

/// Subdivision length recorded in the roles: one more than the largest
/// intermediate position, 1 if no edge was subdivided.
fn infer_ell(g: &LabeledGraph) -> usize {
    (0..g.node_count())
        .filter_map(|u| match g.role(u) {
            Some(Role::Intermediate { pos, .. }) => Some(pos + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

fn cmd_oracle(args: OracleArgs, invocation: &str) -> CliResult<()> {
    let graph = load_graph(&args.graph)?;
    let dm = apsp_oracle(&graph);
    let params = distance_params(&dm)?;
    let mut report = json!({
        "invocation": invocation,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "eccentricities": params.eccentricities,
        "diameter": params.diameter,
        "radius": params.radius,
    });
    if args.matrix {
        report["matrix"] = json!(dm.rows());
    }
    if graph.find_role(Role::A0).is_some() {
        report["decode_apsp"] = json!(decode_apsp(&dm, &graph)?);
    }
    if graph.find_role(Role::BDoublePrime(1)).is_some() {
        let ell = args.ell.unwrap_or_else(|| infer_ell(&graph));
        report["decode_ecc"] = json!(decode_ecc(params.eccentricities.as_slice(), &graph, ell)?);
        report["ell"] = json!(ell);
    }
    println!("{report}");
    eprintln!(
        "n={} diameter={} radius={}",
        graph.node_count(),
        params.diameter,
        params.radius
    );
    Ok(())
}

// --- run ---------------------------------------------------------------

fn distance_rows(result: &SimResult) -> Option<Vec<Vec<u32>>> {
    result
        .outputs
        .iter()
        .map(|out| match out {
            NodeOutput::Distances(d) => Some(d.clone()),
            _ => None,
        })
        .collect()
}

fn cmd_run(args: RunArgs, invocation: &str) -> CliResult<()> {
    let graph = load_graph(&args.graph)?;
    let n = graph.node_count();
    let config = SimConfig {
        beta: args.beta,
        max_rounds: args.max_rounds.unwrap_or_else(|| suggested_max_rounds(n)),
        seed: args.seed,
    };
    let result = match args.program {
        ProgramKind::Apsp => run(&graph, &pipelined_apsp(), &config),
        ProgramKind::Ecc => run(&graph, &ecc_diameter_radius(), &config),
    }?;
    let cut = if args.cut {
        Some(cut_report(&result, &graph)?)
    } else {
        None
    };
    let mut report = report_json(&result, cut.as_ref());
    report["invocation"] = json!(invocation);

    let mut mismatch = false;
    if args.check_oracle {
        let dm = apsp_oracle(&graph);
        let matches = match args.program {
            ProgramKind::Apsp => distance_rows(&result).is_some_and(|rows| {
                (0..n).all(|u| {
                    let want: Vec<u32> = dm.row(u).iter().filter_map(|d| d.finite()).collect();
                    want.len() == n && rows[u] == want
                })
            }),
            ProgramKind::Ecc => {
                let want = distance_params(&dm)?;
                result.outputs.iter().enumerate().all(|(u, out)| match out {
                    NodeOutput::Ecc {
                        ecc,
                        diameter,
                        radius,
                    } => {
                        *ecc == want.eccentricities[u]
                            && *diameter == want.diameter
                            && *radius == want.radius
                    }
                    _ => false,
                })
            }
        };
        report["oracle_match"] = json!(matches);
        mismatch = !matches;
    }
    println!("{report}");
    eprintln!(
        "rounds={} bandwidth={}b{}",
        result.rounds_used,
        result.bandwidth_bits,
        cut.as_ref()
            .map(|c| format!(" cut_bits={}/{}", c.total_cross_bits, c.bound))
            .unwrap_or_default()
    );
    if mismatch {
        return Err(CliError::Failure(
            "simulation outputs do not match the oracle".into(),
        ));
    }
    Ok(())
}

// --- verify ------------------------------------------------------------

struct SweepOutcome {
    instances: usize,
    failures: Vec<(String, String, String)>,
    details: serde_json::Value,
}

impl SweepOutcome {
    fn new() -> Self {
        SweepOutcome {
            instances: 0,
            failures: Vec::new(),
            details: json!(null),
        }
    }

    fn check<T: PartialEq + Display>(&mut self, instance: impl Display, expected: T, got: T) {
        if expected != got {
            self.failures
                .push((instance.to_string(), expected.to_string(), got.to_string()));
        }
    }
}

fn cmd_verify(args: VerifyArgs, invocation: &str) -> CliResult<()> {
    let start = Instant::now();
    let suite_name = match args.suite {
        Suite::ApspProp => "apsp-prop",
        Suite::EccExact => "ecc-exact",
        Suite::EccApprox => "ecc-approx",
        Suite::Thresholds => "thresholds",
        Suite::SimVsOracle => "sim-vs-oracle",
    };
    let outcome = match args.suite {
        Suite::ApspProp => verify_apsp_prop(&args)?,
        Suite::EccExact => verify_ecc_exact(&args)?,
        Suite::EccApprox => verify_ecc_approx(&args)?,
        Suite::Thresholds => verify_thresholds(&args)?,
        Suite::SimVsOracle => verify_sim_vs_oracle(&args)?,
    };
    let elapsed = start.elapsed();
    let failures: Vec<_> = outcome
        .failures
        .iter()
        .map(|(instance, expected, got)| {
            json!({"instance": instance, "expected": expected, "got": got})
        })
        .collect();
    let mut report = json!({
        "invocation": invocation,
        "suite": suite_name,
        "instances": outcome.instances,
        "failures": failures,
        "elapsed_ms": elapsed.as_millis() as u64,
    });
    if !outcome.details.is_null() {
        report["details"] = outcome.details;
    }
    println!("{report}");
    eprintln!(
        "{suite_name}: {}/{} passed in {:.2?}",
        outcome.instances - outcome.failures.len(),
        outcome.instances,
        elapsed
    );
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "{} of {} instances failed",
            outcome.failures.len(),
            outcome.instances
        )))
    }
}

/// Instance stream for a sweep: exhaustive when the space is small, seeded
/// random otherwise.
fn instance_stream(k: usize, trials: usize, seed: u64) -> Vec<(Bits, Bits)> {
    if k <= 6 {
        let mut all = Vec::new();
        for x in Bits::enumerate(k) {
            for y in Bits::enumerate(k) {
                all.push((x.clone(), y.clone()));
            }
        }
        all
    } else {
        (0..trials as u64)
            .map(|t| {
                (
                    Bits::random(k, seed.wrapping_add(2 * t)),
                    Bits::random(k, seed.wrapping_add(2 * t + 1)),
                )
            })
            .collect()
    }
}

fn verify_apsp_prop(args: &VerifyArgs) -> CliResult<SweepOutcome> {
    let n = args.n.unwrap_or(8);
    let prm = apsp_params(n)?;
    let mut outcome = SweepOutcome::new();
    for (x, y) in instance_stream(prm.k, args.trials.unwrap_or(200), args.seed) {
        outcome.instances += 1;
        let g = build_apsp_gadget(n, &x, &y)?;
        let dm = apsp_oracle(&g);
        for i in 1..=prm.s {
            for j in (i + 1)..=prm.s {
                let p = pair_to_index(i, j, prm.s)?;
                let ai = g.find_role(Role::A(i)).expect("constructor tags rows");
                let bj = g.find_role(Role::B(j)).expect("constructor tags rows");
                let want = if x.get(p) && y.get(p) { 3 } else { 2 };
                outcome.check(
                    format!("n={n} x={x} y={y} d(a_{i},b_{j})"),
                    Dist::Finite(want),
                    dm.at(ai, bj),
                );
            }
        }
        outcome.check(
            format!("n={n} x={x} y={y} decode"),
            intersection_size(&x, &y)?,
            decode_apsp(&dm, &g)?,
        );
    }
    Ok(outcome)
}

fn verify_ecc_exact(args: &VerifyArgs) -> CliResult<SweepOutcome> {
    let ell = args.ell.unwrap_or(1);
    let n = args.n.unwrap_or(31 * ell - 8);
    let prm = ecc_params(n, ell)?;
    let mut outcome = SweepOutcome::new();
    for (x, y) in instance_stream(prm.k, args.trials.unwrap_or(200), args.seed) {
        outcome.instances += 1;
        let g = build_ecc_gadget(n, ell, &x, &y)?;
        let dm = apsp_oracle(&g);
        let params = distance_params(&dm)?;
        for p in 1..=prm.k {
            let ap = g.find_role(Role::A(p)).expect("constructor tags rows");
            let want = if x.get(p) && y.get(p) {
                3 * ell + 1
            } else {
                5 * ell + 1
            };
            outcome.check(
                format!("n={n} ell={ell} x={x} y={y} e(a_{p})"),
                want as u32,
                params.eccentricities[ap],
            );
            if ell == 1 {
                let bpp = g.find_role(Role::BDoublePrime(p)).expect("tagged");
                for v in 0..g.node_count() {
                    let cap = if v == bpp { 6 } else { 5 };
                    let d = dm.at(ap, v).finite().unwrap_or(u32::MAX);
                    if d > cap {
                        outcome.check(
                            format!("n={n} x={x} y={y} d(a_{p},{v}) cap"),
                            format!("<= {cap}"),
                            d.to_string(),
                        );
                    }
                }
            }
        }
        outcome.check(
            format!("n={n} ell={ell} x={x} y={y} decode"),
            intersection_size(&x, &y)?,
            decode_ecc(params.eccentricities.as_slice(), &g, ell)?,
        );
    }
    Ok(outcome)
}

fn verify_ecc_approx(args: &VerifyArgs) -> CliResult<SweepOutcome> {
    let eps = args.eps.unwrap_or(0.1);
    let ell = subdivision_length(eps)?;
    let n = args.n.unwrap_or(31 * ell - 8);
    let prm = ecc_params(n, ell)?;
    let rho = 5.0 / 3.0 - eps;
    let trials = args.trials.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut outcome = SweepOutcome::new();
    for t in 0..trials as u64 {
        outcome.instances += 1;
        let x = Bits::random(prm.k, args.seed.wrapping_add(2 * t));
        let y = Bits::random(prm.k, args.seed.wrapping_add(2 * t + 1));
        let g = build_ecc_gadget(n, ell, &x, &y)?;
        let exact = distance_params(&apsp_oracle(&g))?.eccentricities;
        let est: Vec<f64> = exact
            .iter()
            .map(|&e| {
                let (lo, hi) = (e as f64 / rho, e as f64);
                match rng.gen_range(0..3) {
                    0 => lo,
                    1 => hi,
                    _ => rng.gen_range(lo..=hi),
                }
            })
            .collect();
        outcome.check(
            format!("trial={t} x={x} y={y}"),
            intersection_size(&x, &y)?,
            decode_ecc_approx_verified(&est, &exact, &g, ell, eps)?,
        );
    }
    Ok(outcome)
}

fn verify_thresholds(args: &VerifyArgs) -> CliResult<SweepOutcome> {
    let eps_values: Vec<f64> = match args.eps {
        Some(eps) => vec![eps],
        None => (1..=66).map(|t| 0.01 * t as f64).collect(),
    };
    let mut outcome = SweepOutcome::new();
    let mut rows = Vec::new();
    for eps in eps_values {
        outcome.instances += 1;
        let ell = subdivision_length(eps)?;
        let (low, high) = decision_thresholds(ell, eps)?;
        rows.push(json!({"eps": eps, "ell": ell, "low": low, "high": high}));
        if low >= high {
            outcome.check(
                format!("eps={eps} ell={ell}"),
                format!("{low} < {high}"),
                "thresholds overlap".to_string(),
            );
        }
    }
    outcome.details = json!(rows);
    Ok(outcome)
}

fn parse_range(raw: &str) -> CliResult<(usize, usize)> {
    let (lo, hi) = raw
        .split_once("..")
        .ok_or_else(|| usage(format!("range must look like 2..100, got {raw:?}")))?;
    let lo: usize = lo
        .parse()
        .map_err(|_| usage(format!("bad range start {lo:?}")))?;
    let hi: usize = hi
        .parse()
        .map_err(|_| usage(format!("bad range end {hi:?}")))?;
    if lo < 1 || hi < lo {
        return Err(usage(format!("range {raw:?} is empty or starts at 0")));
    }
    Ok((lo, hi))
}

fn verify_sim_vs_oracle(args: &VerifyArgs) -> CliResult<SweepOutcome> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let trials = args.trials.unwrap_or(50);
    let mut outcome = SweepOutcome::new();
    for t in 0..trials as u64 {
        outcome.instances += 1;
        let seed = args.seed.wrapping_add(t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(lo..=hi);
        let max_m = n * (n - 1) / 2;
        let m = if n == 1 {
            0
        } else {
            rng.gen_range(n - 1..=max_m.min(3 * n))
        };
        let g = random_connected(n, m, seed)?;
        let dm = apsp_oracle(&g);
        let params = distance_params(&dm)?;
        let config = SimConfig {
            max_rounds: suggested_max_rounds(n),
            seed,
            ..SimConfig::default()
        };

        let result = run(&g, &pipelined_apsp(), &config)?;
        let rows = distance_rows(&result);
        let rows_match = rows.is_some_and(|rows| {
            (0..n).all(|u| {
                let want: Vec<u32> = dm.row(u).iter().filter_map(|d| d.finite()).collect();
                rows[u] == want
            })
        });
        outcome.check(
            format!("seed={seed} n={n} m={m} apsp rows"),
            true,
            rows_match,
        );
        let budget = 6 * n + 6 * params.diameter as usize;
        if result.rounds_used > budget {
            outcome.check(
                format!("seed={seed} n={n} m={m} rounds"),
                format!("<= {budget}"),
                result.rounds_used.to_string(),
            );
        }

        let result = run(&g, &ecc_diameter_radius(), &config)?;
        let ecc_match = result.outputs.iter().enumerate().all(|(u, out)| match out {
            NodeOutput::Ecc {
                ecc,
                diameter,
                radius,
            } => {
                *ecc == params.eccentricities[u]
                    && *diameter == params.diameter
                    && *radius == params.radius
            }
            _ => false,
        });
        outcome.check(format!("seed={seed} n={n} m={m} ecc"), true, ecc_match);
    }
    Ok(outcome)
}
