use std::time::Instant;

use facetpivot::facet::{self, Certificate, FacetOptions, PivotRule, Status, TraceRecord};
use facetpivot::model::{default_big_m, to_standard_general, GeneralLp, StandardGeneralLp};
use facetpivot::reference::{
    brute_force_optimal, dantzig_solve, to_standard_form, DantzigOptions, StandardFormError, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Solver {
    Facet,
    Dantzig,
    Oracle,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Facet => "facet",
            Solver::Dantzig => "dantzig",
            Solver::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Rule {
    MaxDev,
    MaxNormDev,
    LeastIndex,
}

impl From<Rule> for PivotRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::MaxDev => PivotRule::MaxDeviation,
            Rule::MaxNormDev => PivotRule::MaxNormalizedDeviation,
            Rule::LeastIndex => PivotRule::LeastIndex,
        }
    }
}

/// Solver settings shared by every row of a run.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub rule: PivotRule,
    pub max_iter: usize,
    pub big_m: Option<f64>,
    pub tol_feas: Option<f64>,
    pub reduce: bool,
    pub trace: bool,
}

impl Settings {
    /// Lines for a report header.
    pub fn describe(&self) -> Vec<String> {
        let or_default = |v: Option<f64>| v.map_or("default".to_string(), |v| v.to_string());
        vec![
            format!("rule={} max_iter={} reduce={}", self.rule, self.max_iter, self.reduce),
            format!("big_m={} tol_feas={}", or_default(self.big_m), or_default(self.tol_feas)),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// `Err` holds a message for runs that ended without a status.
    pub status: Result<Status, String>,
    pub objective: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub iterations: usize,
    pub wall_ms: f64,
    pub certificate_row: Option<usize>,
    pub trace: Vec<TraceRecord>,
}

impl RunResult {
    pub fn error(msg: String) -> Self {
        RunResult {
            status: Err(msg),
            objective: None,
            x: None,
            iterations: 0,
            wall_ms: 0.0,
            certificate_row: None,
            trace: vec![],
        }
    }

    pub fn status_label(&self) -> String {
        match &self.status {
            Ok(s) => s.to_string(),
            Err(_) => "Error".to_string(),
        }
    }
}

pub fn standard_general(p: &GeneralLp<f64>, s: &Settings) -> Result<StandardGeneralLp<f64>, String> {
    let sp = to_standard_general(p, s.big_m.unwrap_or_else(|| default_big_m(p))).map_err(|e| e.to_string())?;
    Ok(match s.tol_feas {
        Some(t) => sp.with_tol_feas(t),
        None => sp,
    })
}

pub fn run(p: &GeneralLp<f64>, solver: Solver, s: &Settings) -> RunResult {
    let start = Instant::now();
    let mut out = match solver {
        Solver::Facet => run_facet(p, s),
        Solver::Dantzig => run_dantzig(p, s),
        Solver::Oracle => run_oracle(p, s),
    };
    out.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    out
}

fn run_facet(p: &GeneralLp<f64>, s: &Settings) -> RunResult {
    let sp = match standard_general(p, s) {
        Ok(sp) => sp,
        Err(e) => return RunResult::error(e),
    };
    let opts =
        FacetOptions { max_iter: s.max_iter, reduce: s.reduce, trace: s.trace, ..FacetOptions::with_rule(s.rule) };
    match facet::solve(&sp, &opts) {
        Ok(out) => RunResult {
            status: Ok(out.status),
            objective: out.objective,
            x: out.x,
            iterations: out.iterations,
            wall_ms: 0.0,
            certificate_row: match out.certificate {
                Some(Certificate::Infeasible(c)) => Some(c.row),
                _ => None,
            },
            trace: out.trace,
        },
        Err(e) => RunResult::error(e.to_string()),
    }
}

fn run_dantzig(p: &GeneralLp<f64>, s: &Settings) -> RunResult {
    // Without --big-m, free variables fall back to the default artificial bound.
    let sf = match (to_standard_form(p, s.big_m), s.big_m) {
        (Err(StandardFormError::UnboundedBelowVariable { .. }), None) => to_standard_form(p, Some(default_big_m(p))),
        (r, _) => r,
    };
    let sf = match sf {
        Ok(sf) => sf,
        Err(e) => return RunResult::error(e.to_string()),
    };
    let out = dantzig_solve(&sf, &DantzigOptions::with_max_iter(s.max_iter));
    RunResult {
        status: Ok(out.status),
        objective: out.objective,
        x: out.x.as_deref().map(|v| sf.project(v)),
        iterations: out.pivots(),
        wall_ms: 0.0,
        certificate_row: None,
        trace: vec![],
    }
}

fn run_oracle(p: &GeneralLp<f64>, s: &Settings) -> RunResult {
    let sp = match standard_general(p, s) {
        Ok(sp) => sp,
        Err(e) => return RunResult::error(e),
    };
    match brute_force_optimal(&sp, DEFAULT_ENUMERATION_CAP) {
        Ok(out) => RunResult {
            status: Ok(out.status),
            objective: out.objective,
            x: out.x,
            iterations: out.subsets as usize,
            wall_ms: 0.0,
            certificate_row: None,
            trace: vec![],
        },
        Err(e) => RunResult::error(e.to_string()),
    }
}

/// Human-readable name of a row of the stacked form.
pub fn row_label(p: &GeneralLp<f64>, sp: &StandardGeneralLp<f64>, row: usize) -> String {
    let names = p.names.as_ref();
    let column = |j: usize| names.and_then(|n| n.columns.get(j).cloned()).unwrap_or_else(|| format!("x{j}"));
    if row < sp.m {
        names.and_then(|n| n.eq_rows.get(row).cloned()).unwrap_or_else(|| format!("equality {row}"))
    } else if row < sp.m + sp.n {
        let j = row - sp.m;
        names.and_then(|n| n.ineq_rows.get(j).cloned()).unwrap_or_else(|| format!("inequality {j}"))
    } else {
        let j = (row - sp.m - sp.n) % sp.d;
        let side = if sp.a.row(row)[j] > 0.0 { "lower" } else { "upper" };
        format!("{side} bound of {}", column(j))
    }
}
