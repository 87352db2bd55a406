//! `facetpivot` command-line front end.
//!
//! Exit codes: 0 optimal (or a clean `verify`), 1 internal error, 2 usage or
//! parse error, 3 infeasible, 4 unbounded, 5 iteration limit, 6 `verify`
//! found a mismatch.

mod bench;
mod run;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use facetpivot::generators::{InstanceSpec, RandomSpec};
use facetpivot::json::{from_json, to_json};
use facetpivot::model::GeneralLp;
use facetpivot::mps::read_mps;
use facetpivot::Status;

use bench::Suite;
use run::{Rule, Settings, Solver};
use verify::{Bounds, Kind};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 6;

#[derive(Parser)]
#[command(name = "facetpivot", version, about = "Facet pivot simplex solver, baselines and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance from an MPS or JSON file.
    Solve(SolveArgs),
    /// Write a generated instance as JSON.
    Generate(GenerateArgs),
    /// Run a benchmark suite and report iteration counts.
    Bench(BenchArgs),
    /// Compare the facet solver with the enumeration oracle on random instances.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "max-dev")]
    rule: Rule,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Artificial bound substituted for infinite bounds.
    #[arg(long)]
    big_m: Option<f64>,
    /// Relative feasibility tolerance, scaled by 1 + max |b|.
    #[arg(long)]
    tol_feas: Option<f64>,
    /// Scan non-base rows for redundancy before every entering selection.
    #[arg(long)]
    reduce: bool,
}

impl SolverFlags {
    fn settings(&self, trace: bool) -> Settings {
        Settings {
            rule: self.rule.into(),
            max_iter: self.max_iter,
            big_m: self.big_m,
            tol_feas: self.tol_feas,
            reduce: self.reduce,
            trace,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mps,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    path: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value = "facet")]
    solver: Solver,
    #[command(flatten)]
    flags: SolverFlags,
    /// Write one JSON record per facet pivot.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Print the solution vector.
    #[arg(long)]
    print_x: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Km1,
    Km2,
    Cycling,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Dimension, for every family but `cycling`.
    #[arg(short, long, default_value_t = 4)]
    d: usize,
    /// Fixture name, for `cycling`.
    #[arg(long, default_value = "beale")]
    id: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Equality rows, for `random`.
    #[arg(short, long, default_value_t = 1)]
    m: usize,
    /// Inequality rows, for `random`.
    #[arg(short, long, default_value_t = 6)]
    n: usize,
    #[arg(long, value_enum, default_value = "planted")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "mixed")]
    bounds: Bounds,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Inclusive size range for the Klee-Minty suites, e.g. `3..19`.
    #[arg(long, value_parser = bench::parse_sizes)]
    sizes: Option<(usize, usize)>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "facet,dantzig")]
    solvers: Vec<Solver>,
    #[command(flatten)]
    flags: SolverFlags,
    /// Directory of .mps files for the `netlib-dir` suite.
    #[arg(long, env = "FACETPIVOT_NETLIB_DIR")]
    dir: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Write wall_ms as 0 and omit the timestamp so the CSV is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 500)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(short, long, default_value_t = 4)]
    d: usize,
    #[arg(short, long, default_value_t = 1)]
    m: usize,
    #[arg(short, long, default_value_t = 6)]
    n: usize,
    #[arg(long, value_enum, default_value = "planted")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "mixed")]
    bounds: Bounds,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: anyhow::Error) -> Self {
        Failure { code: EXIT_USAGE, error }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: EXIT_INTERNAL, error }
    }
}

impl From<std::io::Error> for Failure {
    fn from(error: std::io::Error) -> Self {
        Failure { code: EXIT_INTERNAL, error: error.into() }
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Optimal => 0,
        Status::Infeasible => 3,
        Status::Unbounded => 4,
        Status::IterationLimit => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read_problem(path: &Path, format: Option<Format>) -> Result<GeneralLp<f64>, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::usage)?;
    let format = format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Mps,
    });
    let parsed = match format {
        Format::Mps => read_mps(&text)
            .map(|(p, warnings)| {
                for w in warnings {
                    eprintln!("warning: {}: {w}", path.display());
                }
                p
            })
            .map_err(|e| anyhow!("{e}")),
        Format::Json => from_json(&text).map_err(|e| anyhow!("{e}")),
    };
    parsed.map_err(|e| Failure::usage(e.context(path.display().to_string())))
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let p = read_problem(&a.path, a.format)?;
    let settings = a.flags.settings(a.trace.is_some());
    let out = run::run(&p, a.solver, &settings);
    let status = match &out.status {
        Ok(s) => *s,
        Err(e) => return Err(anyhow!("{}: {e}", a.path.display()).into()),
    };

    if let Some(path) = &a.trace {
        let mut f = std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        for r in &out.trace {
            serde_json::to_writer(&mut f, r).map_err(anyhow::Error::from)?;
            writeln!(f)?;
        }
        f.flush()?;
    }

    match out.objective {
        Some(obj) => println!("{status}, obj={obj}, iters={}", out.iterations),
        None => println!("{status}, iters={}", out.iterations),
    }
    if let Some(row) = out.certificate_row {
        let sp = run::standard_general(&p, &settings).map_err(|e| anyhow!(e))?;
        println!("certificate row {row} ({})", run::row_label(&p, &sp, row));
    }
    if a.print_x {
        if let Some(x) = &out.x {
            let names = p.names.as_ref().map(|n| n.columns.clone());
            for (j, v) in x.iter().enumerate() {
                let name = names.as_ref().and_then(|n| n.get(j).cloned()).unwrap_or_else(|| format!("x{j}"));
                println!("{name} = {v}");
            }
        }
    }
    Ok(status_code(status))
}

fn generate(a: GenerateArgs) -> Result<u8, Failure> {
    let spec = match a.family {
        Family::Km1 => InstanceSpec::KleeMinty1(a.d),
        Family::Km2 => InstanceSpec::KleeMinty2(a.d),
        Family::Cycling => InstanceSpec::Cycling(a.id),
        Family::Random => {
            InstanceSpec::Random(RandomSpec::new(a.seed, a.d, a.m, a.n).kind(a.kind.into()).bounds(a.bounds.into()))
        }
    };
    let p: GeneralLp<f64> = spec.build().map_err(|e| Failure::usage(e.into()))?;
    let text = to_json(&p, Some(&spec.name()));
    match &a.output {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn bench(a: BenchArgs) -> Result<u8, Failure> {
    let instances = bench::instances(a.suite, a.sizes, a.dir.as_deref()).map_err(Failure::usage)?;
    let settings = a.flags.settings(false);
    let rows = bench::run_suite(&instances, &a.solvers, &settings);
    let timing = !a.no_timing;
    match &a.csv {
        Some(path) => {
            let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            bench::write_csv(std::io::BufWriter::new(f), a.suite, &rows, &settings, timing)?;
            bench::write_table(std::io::stdout().lock(), &rows, &a.solvers)?;
        }
        None => bench::write_csv(std::io::stdout().lock(), a.suite, &rows, &settings, timing)?,
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8, Failure> {
    if a.m >= a.d {
        return Err(Failure::usage(anyhow!("need m < d, got m={} d={}", a.m, a.d)));
    }
    let s = verify::verify(a.first_seed, a.seeds, (a.d, a.m, a.n), a.kind, a.bounds, a.max_iter);
    for m in &s.mismatches {
        println!("mismatch seed {}: facet {} vs oracle {}", m.seed, m.facet, m.oracle);
    }
    let [optimal, infeasible, unbounded, limit] = s.counts;
    println!(
        "{} instances (d={}, m={}, n={}): {optimal} optimal, {infeasible} infeasible, {unbounded} unbounded, {limit} iteration limit, {} mismatches",
        s.instances,
        a.d,
        a.m,
        a.n,
        s.mismatches.len()
    );
    Ok(if s.mismatches.is_empty() { 0 } else { EXIT_MISMATCH })
}
