use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ect_core::error::Error;
use ect_core::format::{parse_instance, parse_report, write_instance, write_report};
use ect_core::generators::{mixed_corpus, CostProfile, InstanceSpec};
use ect_core::instance::Instance;
use ect_core::oracle::{exact_ect_with_limit, EXACT_NODE_LIMIT};
use ect_core::solver::{ratio_bound, run_primal_dual_with, verify_certificate, SolveOptions, SolveReport};
use ect_core::Rational;

const EXIT_PARSE: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_SIZE: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Even cycle transversal on node-weighted planar graphs.
#[derive(Parser)]
#[command(name = "ect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the primal-dual approximation and write a report.
    Solve {
        instance: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the per-iteration log to stderr.
        #[arg(long)]
        trace: bool,
        /// Solve twice and require byte-identical reports.
        #[arg(long)]
        seed_check: bool,
        /// Abort after this many iterations.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Compute the exact optimum (size-guarded).
    Exact { instance: PathBuf },
    /// Re-check a report against its instance.
    Verify { instance: PathBuf, report: PathBuf },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Solve a corpus and print a ratio and runtime table.
    Bench {
        /// Instance files; the built-in mixed corpus is used when none are given.
        files: Vec<PathBuf>,
        /// Size of the built-in corpus.
        #[arg(long, default_value_t = 30)]
        corpus: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    Grid {
        width: usize,
        height: usize,
        #[arg(long, default_value = "1..9")]
        costs: CostProfile,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    GridSubgraph {
        width: usize,
        height: usize,
        #[arg(long, default_value_t = 80)]
        keep: u32,
        #[arg(long, default_value = "1..9")]
        costs: CostProfile,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    PentagonRing {
        k: usize,
        #[arg(long, default_value = "1/4")]
        epsilon: Rational,
    },
    HandleChain {
        k: usize,
    },
    Tessellation {
        reps: usize,
    },
}

impl Family {
    fn spec(&self) -> InstanceSpec {
        match self {
            Family::Grid { width, height, costs, seed } => {
                InstanceSpec::Grid { width: *width, height: *height, costs: *costs, seed: *seed }
            }
            Family::GridSubgraph { width, height, keep, costs, seed } => InstanceSpec::GridSubgraph {
                width: *width,
                height: *height,
                keep_percent: *keep,
                costs: *costs,
                seed: *seed,
            },
            Family::PentagonRing { k, epsilon } => InstanceSpec::PentagonRing { k: *k, epsilon: epsilon.clone() },
            Family::HandleChain { k } => InstanceSpec::HandleChain { k: *k },
            Family::Tessellation { reps } => InstanceSpec::Tessellation { reps: *reps },
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn solver_failure(e: Error) -> Failure {
    match e {
        Error::TooLarge { .. } => Failure::new(EXIT_SIZE, e.to_string()),
        _ => Failure::new(EXIT_SOLVER, e.to_string()),
    }
}

fn oracle_limit() -> Result<usize, Failure> {
    match std::env::var("ECT_MAX_ORACLE_NODES") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::new(EXIT_PARSE, format!("bad ECT_MAX_ORACLE_NODES `{s}`"))),
        Err(_) => Ok(EXACT_NODE_LIMIT),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let inst = parse_instance(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    inst.validate().map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok(inst)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_trace(report: &SolveReport) {
    for line in write_report(report, &[]).lines().filter(|l| l.starts_with("iter ")) {
        eprintln!("{line}");
    }
}

fn solve(path: &Path, output: Option<&Path>, trace: bool, seed_check: bool, max_iters: Option<usize>) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let opts = SolveOptions { max_iterations: max_iters };
    let report = run_primal_dual_with(&inst, &opts).map_err(solver_failure)?;
    if trace {
        print_trace(&report);
    }
    let problems = verify_certificate(&inst, &report, 0);
    let mut verdicts: Vec<String> = problems.iter().map(|p| format!("fail {p}")).collect();
    if seed_check {
        let again = run_primal_dual_with(&inst, &opts).map_err(solver_failure)?;
        if write_report(&again, &[]) != write_report(&report, &[]) {
            verdicts.push("fail repeated solve produced a different report".into());
        } else {
            verdicts.push("ok deterministic".into());
        }
    }
    if verdicts.iter().all(|v| v.starts_with("ok")) {
        verdicts.push("ok certificate".into());
    }
    let text = write_report(&report, &verdicts);
    emit(output, &text)?;
    let failed: Vec<&String> = verdicts.iter().filter(|v| v.starts_with("fail")).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_SOLVER, failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n")))
    }
}

fn exact(path: &Path) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let (set, opt) = exact_ect_with_limit(&inst.effective_graph(), oracle_limit()?).map_err(solver_failure)?;
    let ids: Vec<String> = set.iter().map(ToString::to_string).collect();
    println!("optimum {opt}");
    println!("solution {}", if ids.is_empty() { "-".to_string() } else { ids.join(" ") });
    Ok(())
}

fn verify(instance: &Path, report: &Path) -> Result<(), Failure> {
    let inst = load_instance(instance)?;
    let (rep, _) = parse_report(&read(report)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", report.display())))?;
    let limit = oracle_limit()?;
    let problems = verify_certificate(&inst, &rep, limit);
    if problems.is_empty() {
        println!("ok");
        Ok(())
    } else {
        for p in &problems {
            println!("fail {p}");
        }
        Err(Failure::new(EXIT_VERIFY, format!("{} verification failures", problems.len())))
    }
}

fn bench(files: &[PathBuf], corpus: usize) -> Result<(), Failure> {
    let mut rows: Vec<(String, Instance)> = Vec::new();
    if files.is_empty() {
        for spec in mixed_corpus(corpus) {
            let inst = spec.build().map_err(|e| Failure::new(EXIT_PARSE, format!("{spec}: {e}")))?;
            rows.push((spec.to_string(), inst));
        }
    } else {
        for f in files {
            rows.push((f.display().to_string(), load_instance(f)?));
        }
    }
    let limit = oracle_limit()?;
    println!("{:<44} {:>5} {:>12} {:>12} {:>6} {:>12} {:>9}", "instance", "n", "cost", "bound", "kind", "ratio", "ms");
    let mut worst = Rational::from_integer(0.into());
    for (name, inst) in &rows {
        let start = Instant::now();
        let report = run_primal_dual_with(inst, &SolveOptions::default()).map_err(solver_failure)?;
        let ms = start.elapsed().as_millis();
        let g = inst.effective_graph();
        let (bound, kind) = if g.node_count() <= limit {
            let (_, opt) = exact_ect_with_limit(&g, limit).map_err(solver_failure)?;
            (opt, "opt")
        } else {
            (report.dual_objective.clone(), "dual")
        };
        let ratio = if bound == Rational::from_integer(0.into()) {
            Rational::from_integer(1.into())
        } else {
            &report.cost / &bound
        };
        worst = worst.max(ratio.clone());
        println!("{name:<44} {:>5} {:>12} {:>12} {kind:>6} {:>12} {ms:>9}", g.node_count(), report.cost.to_string(), bound.to_string(), ratio.to_string());
    }
    println!("rows {} max-ratio {worst}", rows.len());
    if worst > ratio_bound() {
        return Err(Failure::new(EXIT_SOLVER, format!("ratio {worst} exceeds 47/7")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { instance, output, trace, seed_check, max_iters } => {
            solve(&instance, output.as_deref(), trace, seed_check, max_iters)
        }
        Command::Exact { instance } => exact(&instance),
        Command::Verify { instance, report } => verify(&instance, &report),
        Command::Gen { family, output } => {
            let spec = family.spec();
            let inst = spec.build().map_err(|e| Failure::new(EXIT_PARSE, format!("{spec}: {e}")))?;
            emit(output.as_deref(), &format!("# {spec}\n{}", write_instance(&inst)))
        }
        Command::Bench { files, corpus } => bench(&files, corpus),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ect: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
