use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use facetpivot::generators::{InstanceSpec, CYCLING_FIXTURES};
use facetpivot::model::GeneralLp;
use facetpivot::mps::read_mps;
use rayon::prelude::*;

use crate::run::{run, RunResult, Settings, Solver};

pub const CSV_HEADER: [&str; 10] =
    ["name", "n", "m", "d", "solver", "rule", "iterations", "wall_ms", "status", "objective"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Km1,
    Km2,
    Cycling,
    NetlibDir,
}

pub struct Instance {
    pub name: String,
    pub lp: Result<GeneralLp<f64>, String>,
}

pub struct Row {
    pub name: String,
    pub shape: Option<(usize, usize, usize)>,
    pub solver: Solver,
    pub result: RunResult,
}

/// Parses `A..B` (inclusive) or a single size.
pub fn parse_sizes(s: &str) -> Result<(usize, usize), String> {
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

pub fn instances(suite: Suite, sizes: Option<(usize, usize)>, dir: Option<&Path>) -> anyhow::Result<Vec<Instance>> {
    let family = |make: fn(usize) -> InstanceSpec, (lo, hi): (usize, usize)| {
        (lo..=hi)
            .map(|d| {
                let spec = make(d);
                Instance { name: spec.name(), lp: spec.build().map_err(|e| e.to_string()) }
            })
            .collect()
    };
    Ok(match suite {
        Suite::Km1 => family(InstanceSpec::KleeMinty1, sizes.unwrap_or((3, 10))),
        Suite::Km2 => family(InstanceSpec::KleeMinty2, sizes.unwrap_or((3, 19))),
        Suite::Cycling => CYCLING_FIXTURES
            .iter()
            .map(|id| {
                let spec = InstanceSpec::Cycling(id.to_string());
                Instance { name: spec.name(), lp: spec.build().map_err(|e| e.to_string()) }
            })
            .collect(),
        Suite::NetlibDir => {
            let Some(dir) = dir else { bail!("the netlib-dir suite needs --dir or FACETPIVOT_NETLIB_DIR") };
            netlib_dir(dir)?
        }
    })
}

fn netlib_dir(dir: &Path) -> anyhow::Result<Vec<Instance>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("mps")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .mps files in {}", dir.display());
    }
    Ok(paths
        .into_iter()
        .map(|path| {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let lp = std::fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| read_mps(&text).map(|(lp, _)| lp).map_err(|e| format!("{}: {e}", path.display())));
            Instance { name, lp }
        })
        .collect())
}

/// Runs every (instance, solver) pair in parallel; rows come back in input order.
pub fn run_suite(instances: &[Instance], solvers: &[Solver], settings: &Settings) -> Vec<Row> {
    let jobs: Vec<(&Instance, Solver)> = instances.iter().flat_map(|i| solvers.iter().map(move |&s| (i, s))).collect();
    jobs.par_iter()
        .map(|&(inst, solver)| match &inst.lp {
            Ok(lp) => Row {
                name: inst.name.clone(),
                shape: Some((lp.num_ineq(), lp.num_eq(), lp.num_vars())),
                solver,
                result: run(lp, solver, settings),
            },
            Err(e) => Row { name: inst.name.clone(), shape: None, solver, result: RunResult::error(e.clone()) },
        })
        .collect()
}

fn rule_column(row: &Row, settings: &Settings) -> String {
    match row.solver {
        Solver::Facet => settings.rule.to_string(),
        Solver::Dantzig => "most-negative".to_string(),
        Solver::Oracle => "enumeration".to_string(),
    }
}

fn fields(row: &Row, settings: &Settings, timing: bool) -> [String; 10] {
    let (n, m, d) = row.shape.map_or((String::new(), String::new(), String::new()), |(n, m, d)| {
        (n.to_string(), m.to_string(), d.to_string())
    });
    let r = &row.result;
    [
        row.name.clone(),
        n,
        m,
        d,
        row.solver.name().to_string(),
        rule_column(row, settings),
        r.iterations.to_string(),
        if timing { format!("{:.3}", r.wall_ms) } else { "0".to_string() },
        r.status_label(),
        r.objective.map_or(String::new(), |v| v.to_string()),
    ]
}

pub fn write_csv<W: Write>(
    mut w: W,
    suite: Suite,
    rows: &[Row],
    settings: &Settings,
    timing: bool,
) -> anyhow::Result<()> {
    writeln!(w, "# facetpivot bench suite={}", suite.to_possible_value().expect("no skipped variants").get_name())?;
    if timing {
        writeln!(w, "# started {}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))?;
    }
    for line in settings.describe() {
        writeln!(w, "# {line}")?;
    }
    for row in rows {
        if let Err(e) = &row.result.status {
            writeln!(w, "# {} {}: {e}", row.name, row.solver.name())?;
        }
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(CSV_HEADER)?;
    for row in rows {
        csv.write_record(fields(row, settings, timing))?;
    }
    csv.flush()?;
    Ok(())
}

/// Iterations per instance with one column per solver, in the layout of an iteration-count table.
pub fn write_table<W: Write>(mut w: W, rows: &[Row], solvers: &[Solver]) -> std::io::Result<()> {
    let mut names: Vec<&str> = Vec::new();
    for r in rows {
        if !names.contains(&r.name.as_str()) {
            names.push(&r.name);
        }
    }
    let cell = |name: &str, s: Solver| {
        rows.iter().find(|r| r.name == name && r.solver == s).map_or(String::new(), |r| match r.result.status {
            Ok(facetpivot::Status::Optimal) => r.result.iterations.to_string(),
            _ => format!("{} ({})", r.result.iterations, r.result.status_label()),
        })
    };
    let objective = |name: &str| {
        rows.iter()
            .filter(|r| r.name == name)
            .find_map(|r| r.result.objective)
            .map_or(String::new(), |v| format!("{v:.6e}"))
    };
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0).max(8);
    write!(w, "{:<width$}", "instance")?;
    for s in solvers {
        write!(w, "  {:>22}", s.name())?;
    }
    writeln!(w, "  {:>14}", "objective")?;
    for name in names {
        write!(w, "{name:<width$}")?;
        for &s in solvers {
            write!(w, "  {:>22}", cell(name, s))?;
        }
        writeln!(w, "  {:>14}", objective(name))?;
    }
    Ok(())
}
