use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ifvs_core::branching::{solve_disjoint_with, EngineConfig, EngineStats};
use ifvs_core::gen::{self, GADGETS};
use ifvs_core::io::{self, Input, ResultJson};
use ifvs_core::oracle::{oracle_disjoint, oracle_ifvs};
use ifvs_core::{check_solution, solve_ifvs, Error, MultiGraph, SolveOptions, Status, VertexSet};

#[derive(Parser)]
#[command(name = "ifvs", version, about = "Exact independent feedback vertex set solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a graph (`p ifvs`) or a disjoint instance (`p disifvs`).
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Budget. Defaults to a `c k <int>` comment, or the `k` line of a disjoint instance.
        #[arg(long)]
        k: Option<i64>,
        /// Return a minimum solution instead of the first one found.
        #[arg(long)]
        minimize: bool,
        /// Write the search trees as JSON lines, one per guess.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Feedback vertex set to start from, as `external:FILE`.
        #[arg(long)]
        fvs: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force answer for small inputs.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Vertices; pairs for `base-case`; the gadget index for `gadget`.
        #[arg(long)]
        n: usize,
        /// Edges for `random` and `subdivided` (default 2n).
        #[arg(long)]
        m: Option<usize>,
        /// Planted solution size.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a candidate solution. Exit 0 if valid, 1 if not.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Solve every instance in a directory and write a CSV of statistics.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Budget for files without a `c k <int>` comment.
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Planted,
    Subdivided,
    BaseCase,
    Gadget,
}

const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Internal(_))));
            ExitCode::from(if internal { EXIT_INTERNAL } else { EXIT_INPUT })
        }
    }
}

fn run(cmd: Cmd) -> anyhow::Result<u8> {
    match cmd {
        Cmd::Solve { input, k, minimize, trace, fvs, threads, json } => {
            let text = read(&input)?;
            match io::parse_input(&text)? {
                Input::Graph(g) => {
                    let k = k.or_else(|| io::declared_k(&text)).ok_or_else(|| anyhow!("--k is required"))?;
                    let external_z = match fvs {
                        None => None,
                        Some(spec) => {
                            let path = spec
                                .strip_prefix("external:")
                                .ok_or_else(|| anyhow!("--fvs expects external:FILE"))?;
                            Some(io::parse_solution(&read(Path::new(path))?, g.vertex_count())?)
                        }
                    };
                    let opts = SolveOptions { minimize, external_z, threads, record_trace: trace.is_some() };
                    let r = solve_ifvs(&g, k, &opts)?;
                    if let Some(path) = trace {
                        let mut out = String::new();
                        for guess in &r.guesses {
                            let line = serde_json::json!({
                                "guess": file_ids(&g, &guess.z_prime),
                                "found": guess.found,
                                "tree": guess.trace.as_ref().map(|t| io::trace_json(&g, t)),
                            });
                            out.push_str(&line.to_string());
                            out.push('\n');
                        }
                        write(&path, &out)?;
                    }
                    let doc = ResultJson::new(&g, &r);
                    if json {
                        println!("{}", doc.to_json());
                    } else {
                        print_text(r.status, &doc.solution, &serde_json::to_value(r.stats)?);
                    }
                    Ok(exit_for(r.status))
                }
                Input::Disjoint(inst) => {
                    if fvs.is_some() {
                        bail!("--fvs applies to graphs, not disjoint instances");
                    }
                    let inst = match k {
                        Some(k) => {
                            let (g, w, r, _) = inst.into_parts();
                            ifvs_core::DisInstance::new(g, w, r, k)?
                        }
                        None => inst,
                    };
                    let out = solve_disjoint_with(&inst, EngineConfig { record_trace: trace.is_some() })?;
                    if let (Some(path), Some(t)) = (trace, &out.trace) {
                        write(&path, &format!("{}\n", io::trace_json(inst.graph(), t)))?;
                    }
                    let status = if out.solution.is_some() { Status::Yes } else { Status::No };
                    let solution = out.solution.as_ref().map(|s| file_ids(inst.graph(), s)).unwrap_or_default();
                    if json {
                        let doc = DisjointJson { status, size: solution.len(), solution, stats: out.stats };
                        println!("{}", serde_json::to_string(&doc)?);
                    } else {
                        print_text(status, &solution, &serde_json::to_value(out.stats)?);
                    }
                    Ok(exit_for(status))
                }
            }
        }
        Cmd::Oracle { input, k, json } => {
            let text = read(&input)?;
            let (g, answer) = match io::parse_input(&text)? {
                Input::Graph(g) => {
                    let k = k.or_else(|| io::declared_k(&text)).ok_or_else(|| anyhow!("--k is required"))?;
                    let a = oracle_ifvs(&g, k)?;
                    (g, a)
                }
                Input::Disjoint(inst) => {
                    let (g, w, r, file_k) = inst.into_parts();
                    let inst = ifvs_core::DisInstance::new(g.clone(), w, r, k.unwrap_or(file_k))?;
                    (g, oracle_disjoint(&inst)?)
                }
            };
            let status = if answer.is_some() { Status::Yes } else { Status::No };
            let solution = answer.as_ref().map(|s| file_ids(&g, s)).unwrap_or_default();
            if json {
                let doc = OracleJson { status, size: solution.len(), solution };
                println!("{}", serde_json::to_string(&doc)?);
            } else {
                print_text(status, &solution, &serde_json::Value::Null);
            }
            Ok(exit_for(status))
        }
        Cmd::Gen { kind, n, m, k, seed, out } => {
            let mut rng = gen::rng(seed);
            let m = m.unwrap_or(2 * n);
            let mut notes = vec![format!("seed {seed}")];
            let text = match kind {
                Kind::Random => io::emit_graph(&gen::random_multigraph(n, m, &mut rng)?, &notes),
                Kind::Subdivided => io::emit_graph(&gen::subdivided(n, m, &mut rng)?, &notes),
                Kind::Planted => {
                    let k = k.ok_or_else(|| anyhow!("--k is required for planted instances"))?;
                    let p = gen::planted(n, k, &mut rng)?;
                    notes.push(format!("k {k}"));
                    let ids: Vec<String> = file_ids(&p.graph, &p.witness).iter().map(|v| v.to_string()).collect();
                    notes.push(format!("witness {}", ids.join(" ")));
                    io::emit_graph(&p.graph, &notes)
                }
                Kind::BaseCase => io::emit_disjoint(&gen::base_case(n, &mut rng)?, &notes),
                Kind::Gadget => {
                    let name = GADGETS
                        .get(n)
                        .ok_or_else(|| anyhow!("gadget index {n} out of range 0..{}", GADGETS.len()))?;
                    notes = vec![format!("gadget {name}")];
                    io::emit_disjoint(&gen::gadget(name)?, &notes)
                }
            };
            write(&out, &text)?;
            Ok(0)
        }
        Cmd::Verify { input, solution, k } => {
            let g = io::parse_graph(&read(&input)?)?;
            let s = io::parse_solution(&read(&solution)?, g.vertex_count())?;
            if check_solution(&g, &s, k) {
                println!("valid: {} vertices", s.len());
                return Ok(0);
            }
            let reason = if s.len() as i64 > k {
                format!("{} vertices exceed k = {k}", s.len())
            } else if !g.without(&s)?.is_acyclic() {
                "the remaining graph has a cycle".to_string()
            } else {
                "the set is not independent".to_string()
            };
            println!("invalid: {reason}");
            Ok(EXIT_NO)
        }
        Cmd::Bench { suite, out, k, threads } => bench(&suite, &out, k, threads),
    }
}

#[derive(Serialize)]
struct DisjointJson {
    status: Status,
    solution: Vec<usize>,
    size: usize,
    stats: EngineStats,
}

#[derive(Serialize)]
struct OracleJson {
    status: Status,
    solution: Vec<usize>,
    size: usize,
}

#[derive(Serialize)]
struct BenchRow {
    instance: String,
    n: usize,
    m: usize,
    k: i64,
    fvs_size: usize,
    mu0: i64,
    branch_nodes: usize,
    leaves: usize,
    fib_bound: u128,
    time_ms: f64,
    status: Status,
}

fn bench(suite: &Path, out: &Path, default_k: Option<i64>, threads: usize) -> anyhow::Result<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(suite)
        .with_context(|| format!("reading {}", suite.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    for path in files {
        let text = read(&path)?;
        let g = io::parse_graph(&text).with_context(|| path.display().to_string())?;
        let k = io::declared_k(&text)
            .or(default_k)
            .ok_or_else(|| anyhow!("{}: no `c k` comment and no --k", path.display()))?;
        let start = Instant::now();
        let r = solve_ifvs(&g, k, &SolveOptions { threads, ..Default::default() })?;
        let time_ms = start.elapsed().as_secs_f64() * 1e3;
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        eprintln!("{name}: {:?} in {time_ms:.1} ms", r.status);
        w.serialize(BenchRow {
            instance: name,
            n: g.vertex_count(),
            m: g.edge_count(),
            k,
            fvs_size: r.stats.fvs_size,
            mu0: r.stats.max_mu,
            branch_nodes: r.stats.branch_nodes,
            leaves: r.stats.leaves,
            fib_bound: r.stats.fib_bound,
            time_ms: (time_ms * 1e3).round() / 1e3,
            status: r.status,
        })?;
    }
    w.flush()?;
    Ok(0)
}

fn file_ids(g: &MultiGraph, s: &VertexSet) -> Vec<usize> {
    let live: Vec<usize> = g.vertices().collect();
    s.iter().map(|v| live.binary_search(v).expect("solution vertex is live") + 1).collect()
}

fn print_text(status: Status, solution: &[usize], stats: &serde_json::Value) {
    let mut out = std::io::stdout().lock();
    let tag = if status == Status::Yes { "yes" } else { "no" };
    writeln!(out, "s {tag} {}", solution.len()).unwrap();
    if let serde_json::Value::Object(map) = stats {
        for (key, value) in map {
            writeln!(out, "c {key} {value}").unwrap();
        }
    }
    for v in solution {
        writeln!(out, "v {v}").unwrap();
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Yes => 0,
        Status::No => EXIT_NO,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
