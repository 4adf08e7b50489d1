//! Command-line front end: solve, kernelize, verify, generate and
//! benchmark edge clique partition instances.
//!
//! Exit codes are a contract: 0 for a solved instance (or a successful
//! auxiliary command), 1 for a proven NO (or a failed verification), 2
//! for usage, parse or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wecp::fpp::{gen_fpp, gen_gn};
use wecp::generate::{random_instance, RandomInstanceSpec};
use wecp::gf::GaloisField;
use wecp::io::{
    parse_instance, parse_solution, print_instance, print_mapping, print_plane, print_solution,
    SolutionRecord,
};
use wecp::kernel::{kernelize, KernelResult};
use wecp::model::{awecp_to_bsddw, awecp_violation, bsddw_to_awecp, AwecpInstance};
use wecp::oracle::{oracle_solve, OracleOptions, OracleOutcome};
use wecp::solver::{solve_wecp, SolveOptions, SolveStats, WecpOutcome};

/// Environment variable read for the default worker count.
const THREADS_ENV: &str = "WECP_THREADS";

#[derive(Parser)]
#[command(name = "wecp", version, about = "Exact solvers for weighted edge clique partition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; solution on stdout, exit 0 on YES, 1 on NO.
    Solve(SolveArgs),
    /// Shrink an instance; kernel on stdout, vertex mapping to a file.
    Kernelize {
        instance: PathBuf,
        /// Where to write the `m <original> <kernel>` mapping lines.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Check a solution file against an instance; exit 0 when it solves it.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Solve by exhaustive search; same output contract as `solve`.
    Oracle {
        instance: PathBuf,
        /// Raise the `n * k` size guard.
        #[arg(long)]
        guard: Option<u64>,
    },
    /// Emit generated instances or incidence matrices on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run solvers over a directory of instances; CSV report on stdout.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Single-threaded search with reproducible output bytes.
    #[arg(long)]
    deterministic: bool,
    /// Worker count; defaults to WECP_THREADS or 1.
    #[arg(long)]
    threads: Option<usize>,
    /// Skip the kernelization step.
    #[arg(long)]
    no_kernel: bool,
    /// Emit key=value search statistics on stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Incidence matrix of the projective plane of prime-power order N.
    Fpp {
        #[arg(short = 'N', long = "order")]
        order: usize,
    },
    /// Split-graph instance whose budget-(N^2+N) partitions are planes.
    Gn {
        #[arg(short = 'N', long = "order")]
        order: usize,
    },
    /// Seeded random instance.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 1)]
        max_weight: u32,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files.
    corpus: PathBuf,
    /// Per-run cutoff in seconds; expired runs become TIMEOUT rows.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Comma-separated list from: kernel+fpt, oracle.
    #[arg(long, default_value = "kernel+fpt")]
    solvers: String,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Kernelize { instance, map } => cmd_kernelize(&instance, map.as_deref()),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Oracle { instance, guard } => cmd_oracle(&instance, guard),
        Command::Gen(kind) => cmd_gen(kind),
        Command::Bench(args) => cmd_bench(&args),
    }
}

fn load_instance(path: &Path) -> Result<AwecpInstance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn emit_stats(stats: &SolveStats) {
    eprintln!("candidates={}", stats.candidates);
    eprintln!("extend_calls={}", stats.extend_calls);
    eprintln!("effective_budget={}", stats.effective_budget);
    if let Some(kernel_vertices) = stats.kernel_vertices {
        eprintln!("kernel_vertices={kernel_vertices}");
    }
    eprintln!("wall_ms={:.3}", stats.wall_time.as_secs_f64() * 1e3);
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let opts = SolveOptions {
        deterministic: args.deterministic,
        threads: args.threads.unwrap_or_else(default_threads),
        use_kernel: !args.no_kernel,
        deadline: None,
    };
    let (outcome, stats) = solve_wecp(&inst, &opts)?;
    if args.stats {
        emit_stats(&stats);
    }
    match outcome {
        WecpOutcome::Partition(partition) => {
            // Re-verify before emitting anything.
            if let Some(violation) = awecp_violation(&inst, &partition)? {
                bail!("internal error: solver output failed verification: {violation}");
            }
            print!("{}", print_solution(&SolutionRecord::Partition(partition)));
            Ok(ExitCode::SUCCESS)
        }
        WecpOutcome::No => {
            print!("{}", print_solution(&SolutionRecord::No));
            Ok(ExitCode::from(1))
        }
        WecpOutcome::Timeout => bail!("internal error: timeout without a deadline"),
    }
}

fn cmd_kernelize(instance: &Path, map: Option<&Path>) -> Result<ExitCode> {
    let inst = load_instance(instance)?;
    let (a, k) = awecp_to_bsddw(&inst);
    match kernelize(&a, k) {
        KernelResult::No => {
            print!("{}", print_solution(&SolutionRecord::No));
            Ok(ExitCode::from(1))
        }
        KernelResult::Reduced(kernel) => {
            let reduced = bsddw_to_awecp(&kernel.matrix, kernel.budget);
            print!("{}", print_instance(&reduced));
            if let Some(path) = map {
                std::fs::write(path, print_mapping(&kernel.lift))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<ExitCode> {
    let inst = load_instance(instance)?;
    let text = std::fs::read_to_string(solution)
        .with_context(|| format!("cannot read {}", solution.display()))?;
    let record = parse_solution(&text, inst.vertex_count())
        .map_err(|e| anyhow!("{}: {e}", solution.display()))?;
    let partition = match record {
        SolutionRecord::Partition(p) => p,
        SolutionRecord::No => bail!("solution file declares NO; nothing to verify"),
    };
    match awecp_violation(&inst, &partition)? {
        None => {
            println!("valid: {} cliques within budget {}", partition.len(), inst.budget());
            Ok(ExitCode::SUCCESS)
        }
        Some(violation) => {
            eprintln!("invalid: {violation}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_oracle(instance: &Path, guard: Option<u64>) -> Result<ExitCode> {
    let inst = load_instance(instance)?;
    let (a, k) = awecp_to_bsddw(&inst);
    let opts = OracleOptions {
        max_cells: guard.unwrap_or_else(|| OracleOptions::default().max_cells),
        deadline: None,
    };
    match oracle_solve(&a, k, &opts)? {
        OracleOutcome::Solution(b) => {
            let partition = wecp::model::matrix_to_cliques(&b);
            if let Some(violation) = awecp_violation(&inst, &partition)? {
                bail!("internal error: oracle output failed verification: {violation}");
            }
            print!("{}", print_solution(&SolutionRecord::Partition(partition)));
            Ok(ExitCode::SUCCESS)
        }
        OracleOutcome::No => {
            print!("{}", print_solution(&SolutionRecord::No));
            Ok(ExitCode::from(1))
        }
        OracleOutcome::Timeout => bail!("internal error: timeout without a deadline"),
    }
}

fn cmd_gen(kind: GenCommand) -> Result<ExitCode> {
    match kind {
        GenCommand::Fpp { order } => {
            let plane = gen_fpp(order)
                .map_err(|e| anyhow!("cannot build a plane of order {order} (requires a prime power): {e}"))?;
            print!("{}", print_plane(&plane));
        }
        GenCommand::Gn { order } => {
            if GaloisField::for_order(order as u32).is_err() {
                eprintln!(
                    "warning: {order} is not a prime power; no plane of this order is \
                     guaranteed and the instance may be unsolvable at its budget"
                );
            }
            let gn = gen_gn(order)?;
            print!("{}", print_instance(&gn.instance));
        }
        GenCommand::Random {
            vertices,
            edge_prob,
            max_weight,
            budget,
            seed,
        } => {
            if !(0.0..=1.0).contains(&edge_prob) {
                bail!("edge probability must be within [0, 1]");
            }
            if max_weight == 0 {
                bail!("max weight must be at least 1");
            }
            let spec = RandomInstanceSpec {
                vertices,
                edge_probability: edge_prob,
                max_weight,
                budget,
                seed,
            };
            print!("{}", print_instance(&random_instance(&spec)));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BenchSolver {
    KernelFpt,
    Oracle,
}

impl BenchSolver {
    fn name(self) -> &'static str {
        match self {
            BenchSolver::KernelFpt => "kernel+fpt",
            BenchSolver::Oracle => "oracle",
        }
    }
}

/// Oracle size guard used by the bench harness; the per-run timeout is
/// the real limiter there.
const BENCH_ORACLE_CELLS: u64 = 10_000;

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let solvers: Vec<BenchSolver> = args
        .solvers
        .split(',')
        .map(|s| match s.trim() {
            "kernel+fpt" => Ok(BenchSolver::KernelFpt),
            "oracle" => Ok(BenchSolver::Oracle),
            other => Err(anyhow!("unknown solver `{other}`; expected kernel+fpt or oracle")),
        })
        .collect::<Result<_>>()?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.corpus)
        .with_context(|| format!("cannot read directory {}", args.corpus.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let mut writer = csv::Writer::from_writer(std::io::stdout());
    writer.write_record([
        "instance", "solver", "n", "m", "k", "w", "kernel_n", "candidates", "time_ms", "verdict",
    ])?;
    for path in &files {
        let text = std::fs::read_to_string(path)?;
        let inst = match parse_instance(&text) {
            Ok(inst) => inst,
            Err(e) => {
                eprintln!("skipping {}: {e}", path.display());
                continue;
            }
        };
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let (a, _) = awecp_to_bsddw(&inst);
        let w = a.max_weight();
        for &solver in &solvers {
            let deadline = Instant::now() + Duration::from_secs_f64(args.timeout);
            let row = match solver {
                BenchSolver::KernelFpt => {
                    let opts = SolveOptions {
                        deadline: Some(deadline),
                        ..SolveOptions::default()
                    };
                    let (outcome, stats) = solve_wecp(&inst, &opts)?;
                    let verdict = match outcome {
                        WecpOutcome::Partition(_) => "YES",
                        WecpOutcome::No => "NO",
                        WecpOutcome::Timeout => "TIMEOUT",
                    };
                    BenchRow {
                        kernel_n: stats.kernel_vertices.map(|n| n.to_string()),
                        candidates: Some(stats.candidates.to_string()),
                        time_ms: stats.wall_time.as_secs_f64() * 1e3,
                        verdict,
                    }
                }
                BenchSolver::Oracle => {
                    let opts = OracleOptions {
                        max_cells: BENCH_ORACLE_CELLS,
                        deadline: Some(deadline),
                    };
                    let start = Instant::now();
                    match oracle_solve(&a, inst.budget(), &opts) {
                        Ok(outcome) => BenchRow {
                            kernel_n: None,
                            candidates: None,
                            time_ms: start.elapsed().as_secs_f64() * 1e3,
                            verdict: match outcome {
                                OracleOutcome::Solution(_) => "YES",
                                OracleOutcome::No => "NO",
                                OracleOutcome::Timeout => "TIMEOUT",
                            },
                        },
                        Err(e) => {
                            eprintln!("oracle skipped {name}: {e}");
                            BenchRow {
                                kernel_n: None,
                                candidates: None,
                                time_ms: start.elapsed().as_secs_f64() * 1e3,
                                verdict: "SKIPPED",
                            }
                        }
                    }
                }
            };
            writer.write_record([
                name.as_str(),
                solver.name(),
                &inst.vertex_count().to_string(),
                &inst.edge_count().to_string(),
                &inst.budget().to_string(),
                &w.to_string(),
                row.kernel_n.as_deref().unwrap_or(""),
                row.candidates.as_deref().unwrap_or(""),
                &format!("{:.3}", row.time_ms),
                row.verdict,
            ])?;
        }
    }
    writer.flush()?;
    Ok(ExitCode::SUCCESS)
}

struct BenchRow {
    kernel_n: Option<String>,
    candidates: Option<String>,
    time_ms: f64,
    verdict: &'static str,
}
