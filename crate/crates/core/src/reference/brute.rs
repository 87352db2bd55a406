use itertools::Itertools;
use thiserror::Error;

use crate::facet::Status;
use crate::linalg::LuFactorization;
use crate::model::StandardGeneralLp;
use crate::scalar::Scalar;

pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{count} row subsets exceed the enumeration cap {cap}")]
    TooLarge { count: f64, cap: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome<T> {
    pub status: Status,
    pub x: Option<Vec<T>>,
    /// `c·x + offset`, present for `Optimal`.
    pub objective: Option<T>,
    pub subsets: u64,
    pub feasible_bases: u64,
}

/// Number of `k`-subsets of `n` items, as a float to avoid overflow.
pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Best basic feasible solution over every `d`-subset of rows.
///
/// Unboundedness is read off by solving again with the artificial bounds
/// doubled: a bounded problem keeps its optimum, an unbounded one improves.
pub fn brute_force_optimal<T: Scalar>(sp: &StandardGeneralLp<T>, cap: u64) -> Result<OracleOutcome<T>, OracleError> {
    let count = binomial(sp.num_rows(), sp.d);
    if count > cap as f64 {
        return Err(OracleError::TooLarge { count, cap });
    }
    let wide = sp.with_big_m(sp.big_m + sp.big_m);
    let mut best: Option<(T, Vec<T>)> = None;
    let mut best_wide: Option<T> = None;
    let mut out = OracleOutcome { status: Status::Infeasible, x: None, objective: None, subsets: 0, feasible_bases: 0 };

    for rows in (0..sp.num_rows()).combinations(sp.d) {
        out.subsets += 1;
        let Ok(lu) = LuFactorization::factor(&sp.a.select_rows(&rows)) else { continue };
        let rhs = |p: &StandardGeneralLp<T>| rows.iter().map(|&r| p.b[r]).collect::<Vec<T>>();
        if let Ok(x) = lu.solve(&rhs(sp)) {
            if (0..sp.num_rows()).all(|r| sp.violation(r, &x).is_none()) {
                out.feasible_bases += 1;
                let obj = sp.objective(&x);
                if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                    best = Some((obj, x));
                }
            }
        }
        if !sp.artificial_rows.is_empty() {
            if let Ok(x) = lu.solve(&rhs(&wide)) {
                if (0..wide.num_rows()).all(|r| wide.violation(r, &x).is_none()) {
                    let obj = wide.objective(&x);
                    if best_wide.is_none_or(|b| obj < b) {
                        best_wide = Some(obj);
                    }
                }
            }
        }
    }

    if let Some((obj, x)) = best {
        let improves = best_wide.is_some_and(|w| w < obj - T::lit(1e-6) * (T::one() + obj.abs()));
        if improves {
            out.status = Status::Unbounded;
        } else {
            out.status = Status::Optimal;
            out.objective = Some(obj + sp.offset);
            out.x = Some(x);
        }
    }
    Ok(out)
}
