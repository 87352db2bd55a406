use facetpivot::facet::{self, FacetOptions, Status};
use facetpivot::generators::{BoundStyle, RandomKind, RandomSpec};
use facetpivot::model::{default_big_m, to_standard_general, GeneralLp};
use facetpivot::reference::{brute_force_optimal, DEFAULT_ENUMERATION_CAP};
use rayon::prelude::*;

/// Objectives agree when `|a - b| <= OBJ_REL_TOL * (1 + |b|)`.
pub const OBJ_REL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Planted,
    Infeasible,
    Unbounded,
}

impl From<Kind> for RandomKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Planted => RandomKind::Planted,
            Kind::Infeasible => RandomKind::Infeasible,
            Kind::Unbounded => RandomKind::Unbounded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Bounds {
    NonNegative,
    Boxed,
    Mixed,
}

impl From<Bounds> for BoundStyle {
    fn from(b: Bounds) -> Self {
        match b {
            Bounds::NonNegative => BoundStyle::NonNegative,
            Bounds::Boxed => BoundStyle::Boxed,
            Bounds::Mixed => BoundStyle::Mixed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Mismatch {
    pub seed: u64,
    pub facet: String,
    pub oracle: String,
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub instances: usize,
    pub counts: [usize; 4],
    pub mismatches: Vec<Mismatch>,
}

fn describe(status: Status, objective: Option<f64>) -> String {
    match objective {
        Some(v) => format!("{status} {v}"),
        None => status.to_string(),
    }
}

fn check(p: &GeneralLp<f64>, seed: u64, max_iter: usize) -> Result<Status, Mismatch> {
    let fail = |facet: String, oracle: String| Mismatch { seed, facet, oracle };
    let sp = to_standard_general(p, default_big_m(p)).map_err(|e| fail(e.to_string(), String::new()))?;
    let oracle = brute_force_optimal(&sp, DEFAULT_ENUMERATION_CAP).map_err(|e| fail(String::new(), e.to_string()))?;
    let opts = FacetOptions { max_iter, ..FacetOptions::default() };
    let out = facet::solve(&sp, &opts).map_err(|e| fail(e.to_string(), describe(oracle.status, oracle.objective)))?;
    let agree = out.status == oracle.status
        && match (out.objective, oracle.objective) {
            (Some(a), Some(b)) => (a - b).abs() <= OBJ_REL_TOL * (1.0 + b.abs()),
            (a, b) => a.is_none() && b.is_none(),
        };
    if agree {
        Ok(out.status)
    } else {
        Err(fail(describe(out.status, out.objective), describe(oracle.status, oracle.objective)))
    }
}

pub fn verify(
    first_seed: u64,
    seeds: u64,
    shape: (usize, usize, usize),
    kind: Kind,
    bounds: Bounds,
    max_iter: usize,
) -> Summary {
    let (d, m, n) = shape;
    let results: Vec<Result<Status, Mismatch>> = (first_seed..first_seed + seeds)
        .into_par_iter()
        .map(|seed| {
            let p: GeneralLp<f64> = RandomSpec::new(seed, d, m, n).kind(kind.into()).bounds(bounds.into()).build();
            check(&p, seed, max_iter)
        })
        .collect();
    let mut summary = Summary { instances: results.len(), ..Summary::default() };
    for r in results {
        match r {
            Ok(status) => summary.counts[status as usize] += 1,
            Err(m) => summary.mismatches.push(m),
        }
    }
    summary
}
