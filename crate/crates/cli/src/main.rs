mod source;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lmc_core::classical::{
    exact_prob_d2, exact_prob_d3, threshold_preset, monte_carlo, neighborhood_oracle_prob, ClassicalParams,
};
use lmc_core::hamiltonian::build_localmaxcut_hamiltonian;
use lmc_core::optimize::{classical_curve, grid_sweep, qaoa_axes, qaoa_objective, separation};
use lmc_core::qaoa::{expectation_full, expectation_zk, expectation_zk_value, tree_patch, PatchKind, QaoaAngles};
use lmc_core::statevector::{qaoa_state, MAX_QUBITS};
use lmc_core::{LmcError, VertexSet};

use source::GraphSource;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "lmc", version, about = "Single-round QAOA vs one-round classical LocalMaxCut")]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "LMC_THREADS")]
    threads: Option<usize>,
    /// Leave the timestamp out of JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimize both algorithms and check the separation at one degree.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        degree: u64,
    },
    /// Closed-form F/n on the angle grid, as CSV `gamma,beta,value`.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        degree: u64,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the analytic engine with dense simulation on random angles.
    Verify {
        #[arg(long)]
        graph: GraphSource,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// The one-round classical algorithm.
    Classical {
        #[command(subcommand)]
        action: ClassicalCommand,
    },
    /// Graph generation.
    Graph {
        #[command(subcommand)]
        action: GraphCommand,
    },
    /// Hamiltonian inspection.
    Ham {
        #[command(subcommand)]
        action: HamCommand,
    },
    /// Analytic engine inspection.
    Qaoa {
        #[command(subcommand)]
        action: QaoaCommand,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated flip probabilities q_0,...,q_d.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    /// Used for whichever of p, q is not given.
    #[arg(long, value_enum, default_value_t = Preset::Optimum)]
    preset: Preset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Best known parameters for the degree.
    Optimum,
    /// Deterministic threshold rule at p = 1/2.
    Threshold,
}

#[derive(Subcommand, Debug)]
enum ClassicalCommand {
    /// Monte Carlo on a concrete graph.
    Run {
        #[arg(long)]
        graph: GraphSource,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact per-vertex success probability on a tree-like graph.
    Exact {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=5))]
        degree: u64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Success probability along p in [0,1], as CSV `p,value`.
    Curve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        degree: u64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Print a graph as an edge list.
    Gen {
        #[arg(long)]
        graph: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum HamCommand {
    /// LocalMaxCut Hamiltonian of a graph as JSON.
    Dump {
        #[arg(long)]
        graph: GraphSource,
    },
}

#[derive(Subcommand, Debug)]
enum QaoaCommand {
    /// Per-L breakdown of one ⟨Z_K⟩.
    Explain {
        #[arg(long, conflicts_with = "patch", required_unless_present = "patch")]
        graph: Option<GraphSource>,
        /// Tree patch `<d>:<edge|pair|ball>`; K defaults to the patch's own.
        #[arg(long)]
        patch: Option<String>,
        /// Comma-separated vertices of K.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        beta: f64,
    },
}

struct Outcome {
    ok: bool,
    text: Vec<String>,
    result: Value,
}

impl Outcome {
    fn ok(text: Vec<String>, result: Value) -> Self {
        Outcome { ok: true, text, result }
    }
}

type CmdResult = Result<Outcome, String>;

fn err(e: LmcError) -> String {
    e.to_string()
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn write_or_print(out: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("seed not given, using {DEFAULT_SEED}");
        DEFAULT_SEED
    })
}

fn resolve_params(d: usize, args: &ParamArgs) -> Result<ClassicalParams, String> {
    let preset = match (args.preset, d) {
        (Preset::Optimum, 2) => ClassicalParams::new(0.5, vec![0.0, 0.0, 0.8]).map_err(err)?,
        (Preset::Optimum, 3) => ClassicalParams::new(0.3912, vec![0.0, 0.0, 0.0, 1.0]).map_err(err)?,
        _ => threshold_preset(d).map_err(err)?,
    };
    let p = args.p.unwrap_or(preset.p);
    let q = args.q.clone().unwrap_or(preset.q);
    let params = ClassicalParams::new(p, q).map_err(err)?;
    params.require_degree(d).map_err(err)?;
    Ok(params)
}

fn cmd_reproduce(d: usize) -> CmdResult {
    let r = separation(d).map_err(err)?;
    let mut text = vec![
        format!("degree {d}"),
        format!(
            "quantum   {:.6}  at gamma={:.6} beta={:.6}",
            r.quantum_value, r.quantum.argmax[0], r.quantum.argmax[1]
        ),
        format!(
            "classical {:.6}  at p={:.6} q={:?}",
            r.classical_value,
            r.classical.argmax[0],
            r.classical.argmax[1..].iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()
        ),
    ];
    for c in &r.checks {
        text.push(format!("[{}] {}", if c.holds { "ok" } else { "FAILED" }, c.claim));
    }
    text.push(format!("{} wins", r.winner));
    Ok(Outcome {
        ok: r.holds,
        text,
        result: to_value(&r),
    })
}

fn cmd_sweep(d: usize, resolution: usize, out: &Option<PathBuf>) -> CmdResult {
    let f = qaoa_objective(d).map_err(err)?;
    let grid = grid_sweep(|x: &[f64]| f(QaoaAngles::new(x[0], x[1])), &qaoa_axes(), resolution, 0.0)
        .map_err(err)?;
    write_or_print(out, &grid.to_csv())?;
    let summary = json!({
        "rows": grid.values.len(),
        "best_gamma": grid.best_point[0],
        "best_beta": grid.best_point[1],
        "best_value": grid.best_value,
    });
    let text = vec![format!(
        "max {:.6} at gamma={:.6} beta={:.6} ({} rows)",
        grid.best_value,
        grid.best_point[0],
        grid.best_point[1],
        grid.values.len()
    )];
    Ok(Outcome::ok(text, summary))
}

fn cmd_verify(src: &GraphSource, samples: usize, seed: u64, tolerance: f64) -> CmdResult {
    use rand::{Rng, SeedableRng};
    let g = src.build().map_err(err)?;
    if g.n() > MAX_QUBITS {
        return Err(err(LmcError::Capacity {
            what: "statevector qubits",
            got: g.n(),
            max: MAX_QUBITS,
        }));
    }
    let h = build_localmaxcut_hamiltonian(&g).map_err(err)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst_f = 0.0f64;
    let mut worst_term = 0.0f64;
    let mut worst_term_k = VertexSet::EMPTY;
    for _ in 0..samples {
        let a = QaoaAngles::new(
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            rng.gen_range(0.0..std::f64::consts::PI),
        );
        let probs = qaoa_state(&h, a).map_err(err)?.probabilities();
        let mut sv_f = h.constant();
        let mut engine_f = h.constant();
        for (k, w) in h.support_terms() {
            let sv: f64 = probs.iter().enumerate().map(|(x, p)| p * k.parity_sign(x as u64)).sum();
            let engine = expectation_zk_value(&h, k, a).map_err(err)?;
            let diff = (sv - engine).abs();
            if diff > worst_term {
                worst_term = diff;
                worst_term_k = k;
            }
            sv_f += w * sv;
            engine_f += w * engine;
        }
        worst_f = worst_f.max((sv_f - engine_f).abs());
        let direct = expectation_full(&h, a).map_err(err)?;
        worst_f = worst_f.max((direct - sv_f).abs());
    }
    let ok = worst_f <= tolerance && worst_term <= tolerance;
    let text = vec![
        format!("graph {src}: n={} terms={} samples={samples}", g.n(), h.num_terms()),
        format!("max |engine - statevector| for F:      {worst_f:.3e}"),
        format!("max |engine - statevector| per term:   {worst_term:.3e} (K={worst_term_k})"),
        format!("{} (tolerance {tolerance:e})", if ok { "agree" } else { "MISMATCH" }),
    ];
    Ok(Outcome {
        ok,
        text,
        result: json!({
            "n": g.n(),
            "terms": h.num_terms(),
            "samples": samples,
            "max_diff_f": worst_f,
            "max_diff_term": worst_term,
            "worst_term": worst_term_k,
            "tolerance": tolerance,
            "agree": ok,
        }),
    })
}

fn cmd_classical(action: &ClassicalCommand) -> CmdResult {
    match action {
        ClassicalCommand::Run {
            graph,
            params,
            trials,
            seed,
        } => {
            let g = graph.build().map_err(err)?;
            let d = g.require_regular().map_err(err)?;
            let params = resolve_params(d, params)?;
            let seed = resolve_seed(*seed);
            let stats = monte_carlo(&g, &params, *trials, seed).map_err(err)?;
            let text = vec![format!(
                "mean satisfied fraction {:.6} ± {:.6} over {} trials (p={}, q={:?}, seed={seed})",
                stats.mean, stats.stderr, stats.trials, params.p, params.q
            )];
            Ok(Outcome::ok(text, json!({ "params": params, "stats": stats })))
        }
        ClassicalCommand::Exact { degree, params } => {
            let d = *degree as usize;
            let params = resolve_params(d, params)?;
            let (value, method) = match d {
                2 => (exact_prob_d2(&params).map_err(err)?, "exact_d2"),
                3 => (exact_prob_d3(&params).map_err(err)?, "exact_d3"),
                _ => (neighborhood_oracle_prob(d, &params).map_err(err)?, "neighborhood_oracle"),
            };
            let text = vec![format!("{value:.12}")];
            Ok(Outcome::ok(
                text,
                json!({ "degree": d, "params": params, "value": value, "method": method }),
            ))
        }
        ClassicalCommand::Curve { degree, points, out } => {
            let curve = classical_curve(*degree as usize, *points).map_err(err)?;
            let mut csv = String::from("p,value\n");
            for (p, v) in &curve {
                csv.push_str(&format!("{p},{v}\n"));
            }
            write_or_print(out, &csv)?;
            let best = curve
                .iter()
                .copied()
                .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            Ok(Outcome::ok(
                vec![format!("max {:.6} at p={:.4}", best.1, best.0)],
                json!({ "points": curve.len(), "best_p": best.0, "best_value": best.1 }),
            ))
        }
    }
}

fn cmd_graph_gen(src: &GraphSource, out: &Option<PathBuf>) -> CmdResult {
    let g = src.build().map_err(err)?;
    write_or_print(out, &g.to_edge_list())?;
    let girth = g.girth();
    Ok(Outcome::ok(
        vec![format!(
            "n={} edges={} degree={:?} girth={}",
            g.n(),
            g.num_edges(),
            g.regular_degree(),
            girth.map_or("inf".to_string(), |x| x.to_string())
        )],
        json!({ "n": g.n(), "edges": g.num_edges(), "degree": g.regular_degree(), "girth": girth }),
    ))
}

fn cmd_qaoa_explain(
    graph: &Option<GraphSource>,
    patch: &Option<String>,
    k: &Option<Vec<usize>>,
    angles: QaoaAngles,
) -> CmdResult {
    let (h, default_k) = match (graph, patch) {
        (Some(src), _) => (build_localmaxcut_hamiltonian(&src.build().map_err(err)?).map_err(err)?, None),
        (None, Some(spec)) => {
            let (d, kind) = spec
                .split_once(':')
                .ok_or_else(|| format!("patch must look like 3:ball, got '{spec}'"))?;
            let d: usize = d.parse().map_err(|_| format!("bad patch degree '{d}'"))?;
            let kind: PatchKind = kind.parse().map_err(err)?;
            let p = tree_patch(d, kind).map_err(err)?;
            (p.hamiltonian, Some(p.k))
        }
        (None, None) => return Err("one of --graph or --patch is required".into()),
    };
    let k = match (k, default_k) {
        (Some(vs), _) => {
            if let Some(&v) = vs.iter().find(|&&v| v >= h.n()) {
                return Err(err(LmcError::VertexOutOfRange { vertex: v, n: h.n() }));
            }
            VertexSet::from_vertices(vs.iter().copied())
        }
        (None, Some(k)) => k,
        (None, None) => return Err("--k is required with --graph".into()),
    };
    let (value, breakdown) = expectation_zk(&h, k, angles).map_err(err)?;
    let mut text = vec![format!("<Z_{k}> = {value:.12}")];
    for r in &breakdown.records {
        text.push(format!(
            "  L={} |O(L)|={} families={} rho={:.6}{:+.6}i",
            r.l,
            r.odd_terms,
            r.families.len(),
            r.rho.re,
            r.rho.im
        ));
    }
    Ok(Outcome::ok(text, to_value(&breakdown)))
}

fn config_value(cli: &Cli) -> Value {
    let command = match &cli.command {
        Command::Reproduce { degree } => json!({ "command": "reproduce", "degree": degree }),
        Command::Sweep { degree, resolution, out } => {
            json!({ "command": "sweep", "degree": degree, "resolution": resolution, "out": out })
        }
        Command::Verify {
            graph,
            samples,
            seed,
            tolerance,
        } => json!({
            "command": "verify",
            "graph": graph.to_string(),
            "samples": samples,
            "seed": seed.unwrap_or(DEFAULT_SEED),
            "tolerance": tolerance,
        }),
        Command::Classical { action } => match action {
            ClassicalCommand::Run {
                graph,
                params,
                trials,
                seed,
            } => json!({
                "command": "classical run",
                "graph": graph.to_string(),
                "p": params.p,
                "q": params.q,
                "preset": format!("{:?}", params.preset).to_lowercase(),
                "trials": trials,
                "seed": seed.unwrap_or(DEFAULT_SEED),
            }),
            ClassicalCommand::Exact { degree, params } => json!({
                "command": "classical exact",
                "degree": degree,
                "p": params.p,
                "q": params.q,
                "preset": format!("{:?}", params.preset).to_lowercase(),
            }),
            ClassicalCommand::Curve { degree, points, out } => {
                json!({ "command": "classical curve", "degree": degree, "points": points, "out": out })
            }
        },
        Command::Graph {
            action: GraphCommand::Gen { graph, out },
        } => json!({ "command": "graph gen", "graph": graph.to_string(), "out": out }),
        Command::Ham {
            action: HamCommand::Dump { graph },
        } => json!({ "command": "ham dump", "graph": graph.to_string() }),
        Command::Qaoa {
            action:
                QaoaCommand::Explain {
                    graph,
                    patch,
                    k,
                    gamma,
                    beta,
                },
        } => json!({
            "command": "qaoa explain",
            "graph": graph.as_ref().map(|g| g.to_string()),
            "patch": patch,
            "k": k,
            "gamma": gamma,
            "beta": beta,
        }),
    };
    json!({ "threads": rayon::current_num_threads(), "run": command })
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Reproduce { degree } => cmd_reproduce(*degree as usize),
        Command::Sweep { degree, resolution, out } => cmd_sweep(*degree as usize, *resolution, out),
        Command::Verify {
            graph,
            samples,
            seed,
            tolerance,
        } => cmd_verify(graph, *samples, resolve_seed(*seed), *tolerance),
        Command::Classical { action } => cmd_classical(action),
        Command::Graph {
            action: GraphCommand::Gen { graph, out },
        } => cmd_graph_gen(graph, out),
        Command::Ham {
            action: HamCommand::Dump { graph },
        } => {
            let h = build_localmaxcut_hamiltonian(&graph.build().map_err(err)?).map_err(err)?;
            let body = to_value(&h.to_json());
            Ok(Outcome::ok(vec![body.to_string()], body))
        }
        Command::Qaoa {
            action:
                QaoaCommand::Explain {
                    graph,
                    patch,
                    k,
                    gamma,
                    beta,
                },
        } => cmd_qaoa_explain(graph, patch, k, QaoaAngles::new(*gamma, *beta)),
    }
}

/// Commands whose main product goes to stdout keep their summary on stderr.
fn data_on_stdout(cli: &Cli) -> bool {
    match &cli.command {
        Command::Sweep { out, .. } => out.is_none(),
        Command::Classical {
            action: ClassicalCommand::Curve { out, .. },
        } => out.is_none(),
        Command::Graph {
            action: GraphCommand::Gen { out, .. },
        } => out.is_none(),
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let config = config_value(&cli);
    match run(&cli) {
        Ok(outcome) => {
            let to_stderr = data_on_stdout(&cli);
            match cli.format {
                Format::Json => {
                    let mut envelope = json!({
                        "config": config,
                        "ok": outcome.ok,
                        "result": outcome.result,
                    });
                    if !cli.no_timestamp {
                        let secs = SystemTime::now()
                            .duration_since(UNIX_EPOCH)
                            .map(|d| d.as_secs())
                            .unwrap_or(0);
                        envelope["timestamp"] = json!(secs);
                    }
                    let body = serde_json::to_string_pretty(&envelope).expect("json");
                    if to_stderr {
                        eprintln!("{body}");
                    } else {
                        println!("{body}");
                    }
                }
                Format::Text => {
                    let lines = std::iter::once(format!("config: {config}")).chain(outcome.text);
                    for line in lines {
                        if to_stderr {
                            eprintln!("{line}");
                        } else {
                            println!("{line}");
                        }
                    }
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
