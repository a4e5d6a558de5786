use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use contractnet::bench::{self, ExperimentRow};
use contractnet::catalog::{load_catalog, Code};
use contractnet::constructions::{
    build_cor1, build_cor2, build_cor3, build_multi, build_thm3, build_thm4, build_thm5,
    build_thm6, snake_m4_instance, ConstructedInstance, Parity,
};
use contractnet::deal::{RationalityClass, StructuralClass};
use contractnet::explorer::{shortest_path, verify_claims, Outcome, PathQuery};
use contractnet::hypercube::{fixtures, ham_cycle, HamCycle, SnakePath};
use contractnet::instance_file::InstanceFile;
use contractnet::model::Allocation;
use contractnet::Error;

const EXIT_CLAIMS: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "contractnet",
    version,
    about = "Contract-path experiments for resource allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance file for a named construction.
    Generate(GenerateArgs),
    /// Check every claim recorded in an instance file.
    Verify { file: PathBuf },
    /// Shortest class path for a deal of an instance file.
    Solve(SolveArgs),
    /// Run a family of experiments and emit CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Thm3,
    Cor1,
    Cor2,
    Thm4,
    Thm5,
    Thm6,
    Cor3,
    Multi,
}

#[derive(clap::Args)]
struct GenerateArgs {
    construction: Construction,
    /// Resources for the snake constructions.
    #[arg(long)]
    m: Option<u32>,
    /// Cube dimension for the ext and round constructions.
    #[arg(long)]
    s: Option<u32>,
    /// Agents in a round schedule.
    #[arg(long)]
    k: Option<usize>,
    /// Agents including bystanders (cor2).
    #[arg(long)]
    n: Option<usize>,
    /// Rationality variant: CR, equitable, pigou-dalton or IR.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, default_value = "even")]
    parity: String,
    /// `paper-fixture`, `search`, or a catalog file.
    #[arg(long)]
    snake: Option<String>,
    /// `paper-fixture`, `reflected`, or a catalog file.
    #[arg(long)]
    cycle: Option<String>,
    /// Utility split for the 4-cube fixture: `fixture` or `canonical`.
    #[arg(long, default_value = "fixture")]
    split: String,
    /// Maximum number of deals on a round schedule.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    structural: Option<String>,
    #[arg(long)]
    rationality: Option<String>,
    /// Steps allowed to break the rationality class.
    #[arg(long, default_value_t = 0)]
    budget: u32,
    /// Comma-separated bundle labels, one per agent.
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    node_cap: Option<usize>,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Thm3,
    Thm4,
    Thm6,
    Additive,
    ZeroOne,
}

#[derive(clap::Args)]
struct BenchArgs {
    family: Family,
    /// First value of the swept parameter (m, s or k).
    #[arg(long)]
    from: u32,
    #[arg(long)]
    to: u32,
    /// Random settings per parameter value.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Cube dimension for thm6.
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a log-scale SVG plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Claims,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded(_) | Error::ResourceLimit(_) | Error::SearchFailure(_) => {
                Failure::Infeasible(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Run<T = ()> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need<T>(v: Option<T>, flag: &str) -> Run<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required")))
}

fn variant(args: &GenerateArgs) -> Run<RationalityClass> {
    Ok(need(args.variant.as_deref(), "variant")?.parse()?)
}

fn snake(source: Option<&str>, m: u32, seed: u64) -> Run<SnakePath> {
    let fixture = match m {
        4 => Some(fixtures::snake_m4()),
        3 => Some(fixtures::snake_s3()),
        _ => None,
    };
    match source {
        Some("paper-fixture") => {
            fixture.ok_or_else(|| usage(format!("no fixture snake in dimension {m}")))
        }
        Some("search") => Ok(bench::find_snake(m, seed)?.0),
        Some(path) => match load_catalog(path)? {
            Code::Snake(s) if s.dimension() == m => Ok(s),
            Code::Snake(s) => Err(Error::DimensionMismatch {
                expected: m,
                found: s.dimension(),
            }
            .into()),
            Code::Cycle(_) => Err(usage(format!("{path} holds a cycle, not a snake"))),
        },
        None => match fixture {
            Some(f) => Ok(f),
            None => Ok(bench::find_snake(m, seed)?.0),
        },
    }
}

fn cycle(source: Option<&str>, s: u32) -> Run<HamCycle> {
    match source {
        Some("paper-fixture") if s == 3 => Ok(fixtures::cycle_s3()),
        Some("paper-fixture") => Err(usage(format!("no fixture cycle in dimension {s}"))),
        Some("reflected") => Ok(ham_cycle(s)?),
        Some(path) => match load_catalog(path)? {
            Code::Cycle(c) if c.dimension() == s => Ok(c),
            _ => Err(usage(format!(
                "{path} does not hold a cycle of dimension {s}"
            ))),
        },
        None if s == 3 => Ok(fixtures::cycle_s3()),
        None => Ok(ham_cycle(s)?),
    }
}

fn build(args: &GenerateArgs) -> Run<ConstructedInstance> {
    let seed = args.seed;
    let parity = match args.parity.as_str() {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => return Err(usage(format!("parity must be even or odd, got {other}"))),
    };
    let snake_src = args.snake.as_deref();
    Ok(match args.construction {
        Construction::Thm3 => {
            let m = need(args.m, "m")?;
            let path = snake(snake_src, m, seed)?;
            let fixture = m == 4 && path == fixtures::snake_m4();
            match args.split.as_str() {
                "fixture" if fixture => snake_m4_instance(),
                "fixture" | "canonical" => build_thm3(&path)?,
                other => return Err(usage(format!("unknown split {other}"))),
            }
        }
        Construction::Cor1 => {
            build_cor1(&snake(snake_src, need(args.m, "m")?, seed)?, variant(args)?)?
        }
        Construction::Cor2 => build_cor2(
            &snake(snake_src, need(args.m, "m")?, seed)?,
            variant(args)?,
            need(args.n, "n")?,
        )?,
        Construction::Thm4 => build_thm4(&snake(snake_src, need(args.s, "s")?, seed)?, parity)?,
        Construction::Thm5 => build_thm5(
            &snake(snake_src, need(args.s, "s")?, seed)?,
            variant(args)?,
            parity,
        )?,
        Construction::Thm6 => {
            let s = need(args.s, "s")?;
            build_thm6(
                need(args.k, "k")?,
                s,
                &cycle(args.cycle.as_deref(), s)?,
                args.cap,
            )?
        }
        Construction::Cor3 => {
            let s = need(args.s, "s")?;
            build_cor3(
                need(args.k, "k")?,
                s,
                &cycle(args.cycle.as_deref(), s)?,
                variant(args)?,
                args.cap,
            )?
        }
        Construction::Multi => {
            let s = need(args.s, "s")?;
            build_multi(
                need(args.k, "k")?,
                s,
                &cycle(args.cycle.as_deref(), s)?,
                args.cap,
            )?
        }
    })
}

fn emit(text: &str, output: Option<&Path>) -> Run {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: &GenerateArgs) -> Run {
    let inst = build(args)?;
    let text = InstanceFile::from_instance(&inst)?.to_json()?;
    emit(&text, args.output.as_deref())
}

fn load(path: &Path) -> Run<InstanceFile> {
    InstanceFile::load(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verify(path: &Path) -> Run {
    let inst = load(path)?.to_instance()?;
    let report = verify_claims(&inst)?;
    if report.is_empty() {
        println!("no claims to check");
    }
    let mut failed = false;
    for c in &report {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        failed |= !c.passed;
    }
    if failed {
        Err(Failure::Claims)
    } else {
        Ok(())
    }
}

fn allocation(labels: &str) -> Run<Allocation> {
    let parts: Vec<&str> = labels.split(',').map(str::trim).collect();
    Ok(Allocation::parse_labels(&parts)?)
}

fn solve(args: &SolveArgs) -> Run {
    let file = load(&args.file)?;
    let inst = file.to_instance()?;
    let structural: StructuralClass = match &args.structural {
        Some(s) => s.parse()?,
        None => inst.structural,
    };
    let rationality: RationalityClass = match &args.rationality {
        Some(s) => s.parse()?,
        None => inst.rationality,
    };
    let designated = file.designated()?;
    let from = match (&args.from, &designated) {
        (Some(l), _) => allocation(l)?,
        (None, Some((a, _))) => a.clone(),
        (None, None) => return Err(usage("--from is required: the file has no designated deal")),
    };
    let to = match (&args.to, &designated) {
        (Some(l), _) => allocation(l)?,
        (None, Some((_, b))) => b.clone(),
        (None, None) => return Err(usage("--to is required: the file has no designated deal")),
    };
    if from == to {
        return Err(usage("--from and --to name the same allocation"));
    }
    let mut q =
        PathQuery::new(&inst.setting, from, to, structural, rationality).with_budget(args.budget);
    if let Some(cap) = args.node_cap {
        q = q.with_node_cap(cap);
    }
    let result = shortest_path(&q)?;
    match result.outcome {
        Outcome::Found(path) => {
            let mut out = std::io::stdout().lock();
            let io = |e: std::io::Error| usage(e.to_string());
            if args.csv {
                let header: Vec<String> = (0..inst.setting.agents())
                    .map(|i| format!("agent_{i}"))
                    .collect();
                writeln!(out, "step,{}", header.join(",")).map_err(io)?;
                for (d, p) in path.iter().enumerate() {
                    writeln!(out, "{d},{}", p.labels().join(",")).map_err(io)?;
                }
            } else {
                for (d, p) in path.iter().enumerate() {
                    writeln!(out, "{d:>4}  {}", p.labels().join(" ")).map_err(io)?;
                }
                writeln!(out, "length: {}", path.len() - 1).map_err(io)?;
                writeln!(out, "explored: {}", result.explored).map_err(io)?;
            }
            Ok(())
        }
        Outcome::Unreachable => Err(Failure::Infeasible(format!(
            "unreachable: no {structural}/{rationality} path (explored {})",
            result.explored
        ))),
        Outcome::CapExceeded => Err(Failure::Infeasible(format!(
            "cap exceeded after exploring {} allocations",
            result.explored
        ))),
    }
}

fn run_bench(args: &BenchArgs) -> Run {
    let (a, b) = (args.from, args.to);
    let rows: Vec<ExperimentRow> = match args.family {
        Family::Thm3 => bench::bench_thm3(a..=b, args.seed)?,
        Family::Thm4 => bench::bench_thm4(a..=b, args.seed)?,
        Family::Thm6 => bench::bench_thm6(a as usize..=b as usize, args.s)?,
        Family::Additive => bench::bench_additive(a..=b, args.trials, args.seed)?,
        Family::ZeroOne => bench::bench_zero_one(a..=b, args.trials, args.seed)?,
    };
    let mut buf = Vec::new();
    bench::write_csv(&rows, &mut buf)?;
    emit(&String::from_utf8_lossy(&buf), args.output.as_deref())?;
    if let Some(svg) = &args.svg {
        emit(&bench::plot_svg(&rows), Some(svg))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify { file } => verify(file),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(EXIT_CLAIMS),
        Err(Failure::Infeasible(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
