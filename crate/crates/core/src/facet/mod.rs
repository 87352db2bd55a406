//! The facet pivot simplex method.
//!
//! A base is a set of `d` linearly independent rows of the stacked matrix.
//! Its basic solution solves `A_B x = b_B`, and the objective is kept as a
//! combination `c = Σ y_c[j] a_j` of the base rows with `y_c >= 0` on every
//! inequality member. Each iteration brings in a violated row and removes
//! the member chosen by a ratio test, so the objective never decreases and
//! the first feasible basic solution reached is optimal.

mod audit;
mod rules;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audit::AuditReport;
pub use rules::{
    check_infeasible, detect_leaving_redundant, detect_nonbase_redundant, expand_entering, select_entering,
    select_leaving,
};

use crate::linalg::{rank, LinalgError, LuFactorization, Matrix};
use crate::model::StandardGeneralLp;
use crate::scalar::{norm_inf, Scalar};
use audit::Auditor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PivotRule {
    /// Largest `|σ|`.
    #[serde(rename = "max-dev")]
    MaxDeviation,
    /// Largest `|σ| / ||a||_2`.
    #[serde(rename = "max-norm-dev")]
    MaxNormalizedDeviation,
    /// Lowest violated row index. Guarantees termination.
    #[serde(rename = "least-index")]
    LeastIndex,
}

impl PivotRule {
    pub const ALL: [PivotRule; 3] = [PivotRule::MaxDeviation, PivotRule::MaxNormalizedDeviation, PivotRule::LeastIndex];

    pub fn name(self) -> &'static str {
        match self {
            PivotRule::MaxDeviation => "max-dev",
            PivotRule::MaxNormalizedDeviation => "max-norm-dev",
            PivotRule::LeastIndex => "least-index",
        }
    }
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PivotRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PivotRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown pivot rule {s:?} (expected max-dev, max-norm-dev or least-index)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Dead zone for sign tests on `y_p` and `y_c`.
    pub sign: T,
    /// Relative residual allowed in `A_B x = b_B` and the objective expansion.
    pub lin: T,
    /// Relative pivot threshold for base factorizations.
    pub pivot: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances { sign: T::default_tol_sign(), lin: T::default_tol_lin(), pivot: T::default_tol_pivot() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetOptions<T> {
    pub rule: PivotRule,
    pub max_iter: usize,
    pub tol: Tolerances<T>,
    /// Switch to [`PivotRule::LeastIndex`] after this many pivots without
    /// objective progress.
    pub stall_limit: Option<usize>,
    /// Recompute `y_c` from scratch every this many pivots.
    pub refresh_every: usize,
    /// Drop leaving rows shown redundant by the entering row's expansion.
    pub mark_leaving_redundant: bool,
    /// Scan non-base rows for redundancy before every entering selection.
    pub reduce: bool,
    pub trace: bool,
    pub audit: bool,
}

impl<T: Scalar> Default for FacetOptions<T> {
    fn default() -> Self {
        FacetOptions {
            rule: PivotRule::MaxDeviation,
            max_iter: 100_000,
            tol: Tolerances::default(),
            stall_limit: Some(200),
            refresh_every: 50,
            mark_leaving_redundant: true,
            reduce: false,
            trace: false,
            audit: false,
        }
    }
}

impl<T: Scalar> FacetOptions<T> {
    pub fn with_rule(rule: PivotRule) -> Self {
        FacetOptions { rule, ..Self::default() }
    }
}

/// `d` independent rows of the stacked matrix and the LU factors of `A_B`.
///
/// Position `k` of every per-base vector (`y_c`, `y_p`) refers to row
/// `indices()[k]`.
#[derive(Debug, Clone)]
pub struct Base<T> {
    indices: Vec<usize>,
    member: Vec<bool>,
    factorization: LuFactorization<T>,
}

impl<T: Scalar> Base<T> {
    pub fn new(sp: &StandardGeneralLp<T>, indices: Vec<usize>, tol_pivot: T) -> Result<Self, LinalgError> {
        let a_b = sp.a.select_rows(&indices);
        let factorization = LuFactorization::factor_with_tolerance(&a_b, tol_pivot)?;
        let mut member = vec![false; sp.num_rows()];
        for &r in &indices {
            member[r] = true;
        }
        Ok(Base { indices, member, factorization })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, row: usize) -> bool {
        self.member.get(row).copied().unwrap_or(false)
    }

    pub fn position(&self, row: usize) -> Option<usize> {
        self.indices.iter().position(|&r| r == row)
    }

    pub fn factorization(&self) -> &LuFactorization<T> {
        &self.factorization
    }

    /// Positions holding equality rows.
    pub fn eq_positions<'a>(&'a self, sp: &'a StandardGeneralLp<T>) -> impl Iterator<Item = usize> + 'a {
        (0..self.indices.len()).filter(move |&k| sp.is_equality(self.indices[k]))
    }

    /// Positions holding inequality rows; only these may leave.
    pub fn ineq_positions<'a>(&'a self, sp: &'a StandardGeneralLp<T>) -> impl Iterator<Item = usize> + 'a {
        (0..self.indices.len()).filter(move |&k| !sp.is_equality(self.indices[k]))
    }
}

#[derive(Debug, Clone)]
pub struct SolverState<T> {
    pub x: Vec<T>,
    /// Objective expansion coefficients by base position.
    pub y_c: Vec<T>,
    pub iteration: usize,
    /// Rows proven redundant and excluded from entering selection.
    pub removed_rows: BTreeSet<usize>,
    pub trace: Vec<TraceRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "Optimal",
            Status::Infeasible => "Infeasible",
            Status::Unbounded => "Unbounded",
            Status::IterationLimit => "IterationLimit",
        })
    }
}

/// Which side the entering row is violated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `σ_p < 0`: any row type.
    One,
    /// `σ_p > 0`: equality rows only.
    Two,
}

/// `a_p = Σ y_p[k] a_{base[k]}` with `y_p` of one sign on the inequality
/// members, which makes row `p` unsatisfiable together with the base rows.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate<T> {
    pub row: usize,
    pub sigma: T,
    pub case: Case,
    pub base: Vec<usize>,
    pub y_p: Vec<T>,
}

impl<T: Scalar> InfeasibilityCertificate<T> {
    /// Checks the certificate from the problem data alone.
    ///
    /// Case 1: `y_p <= 0` on base inequalities and `Σ y_p b_B < b_p`.
    /// Case 2: `p` is an equality, `y_p >= 0` on base inequalities and
    /// `Σ y_p b_B > b_p`.
    pub fn verify(&self, sp: &StandardGeneralLp<T>, tol_sign: T, tol_lin: T) -> bool {
        let a_p = sp.a.row(self.row);
        let mut combo = vec![T::zero(); sp.d];
        for (&r, &y) in self.base.iter().zip(&self.y_p) {
            for (c, &a) in combo.iter_mut().zip(sp.a.row(r)) {
                *c += y * a;
            }
        }
        let scale = T::one() + norm_inf(a_p) + self.y_p.iter().fold(T::zero(), |m, y| m.max(y.abs()));
        let represented = combo.iter().zip(a_p).all(|(&c, &a)| (c - a).abs() <= tol_lin * scale);

        let implied: T = self.base.iter().zip(&self.y_p).map(|(&r, &y)| y * sp.b[r]).sum();
        let gap = implied - sp.b[self.row];
        let margin = sp.tol_feas;
        let ineq = self.base.iter().zip(&self.y_p).filter(|(&r, _)| !sp.is_equality(r)).map(|(_, &y)| y);
        let signs_and_gap = match self.case {
            Case::One => ineq.clone().all(|y| y <= tol_sign) && gap < -margin,
            Case::Two => sp.is_equality(self.row) && ineq.clone().all(|y| y >= -tol_sign) && gap > margin,
        };
        represented && signs_and_gap
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<T> {
    Infeasible(InfeasibilityCertificate<T>),
    /// Base rows at an artificial bound that carry objective weight.
    Unbounded {
        rows: Vec<usize>,
    },
}

/// One pivot, recorded before it is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub objective: f64,
    pub max_violation: f64,
    pub rule: PivotRule,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub status: Status,
    /// Present for `Optimal` and `IterationLimit` (the last iterate).
    pub x: Option<Vec<T>>,
    /// `c·x + offset`, present for `Optimal`.
    pub objective: Option<T>,
    pub iterations: usize,
    pub certificate: Option<Certificate<T>>,
    pub redundant_rows: BTreeSet<usize>,
    pub base: Vec<usize>,
    pub trace: Vec<TraceRecord>,
    pub audit: Option<AuditReport>,
    /// The stall guard replaced the requested rule by least-index.
    pub switched_to_least_index: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("equality rows have rank {rank}, which is not below the dimension {d}")]
    RankDeficientEquality { rank: usize, d: usize },
    #[error("iteration {iteration}: no leaving row for entering row {row}")]
    NoLeavingCandidate { iteration: usize, row: usize },
    #[error("iteration {iteration}: base factorization failed: {source}")]
    Singular { iteration: usize, source: LinalgError },
}

/// The base of `E` rows and its basic solution `E x = b_L`, with `y_c = c_bar`.
pub fn initial_state<T: Scalar>(sp: &StandardGeneralLp<T>, tol_pivot: T) -> (Base<T>, SolverState<T>) {
    let indices: Vec<usize> = (0..sp.d).map(|i| sp.e_row(i)).collect();
    let base = Base::new(sp, indices, tol_pivot).expect("E block is a signed identity");
    let x = (0..sp.d).map(|i| sp.b[sp.e_row(i)] * sp.a[(sp.e_row(i), i)]).collect();
    let state =
        SolverState { x, y_c: sp.c_bar.clone(), iteration: 0, removed_rows: BTreeSet::new(), trace: Vec::new() };
    (base, state)
}

/// Replaces `q` by `p` in the base and updates `x` and `y_c`.
///
/// `y_c` follows the expansion update. `x` is solved from the new factors
/// with one step of iterative refinement: stepping along a column of `A_B⁻¹`
/// instead carries the rounding error of big-M sized coordinates into rows
/// that later decide feasibility.
pub fn pivot<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &mut Base<T>,
    state: &mut SolverState<T>,
    p: usize,
    q: usize,
    y_p: &[T],
    tol: &Tolerances<T>,
) -> Result<(), SolveError> {
    let iteration = state.iteration;
    let kq = base.position(q).ok_or(SolveError::NoLeavingCandidate { iteration, row: p })?;
    let singular = |source| SolveError::Singular { iteration, source };

    let t = state.y_c[kq] / y_p[kq];
    for (y, &yp) in state.y_c.iter_mut().zip(y_p) {
        *y -= yp * t;
    }
    state.y_c[kq] = t;

    let mut indices = base.indices.clone();
    indices[kq] = p;
    *base = Base::new(sp, indices, tol.pivot).map_err(singular)?;
    state.iteration += 1;
    state.x = basic_solution(sp, base).map_err(singular)?;
    Ok(())
}

/// `A_B x = b_B`, refined once.
fn basic_solution<T: Scalar>(sp: &StandardGeneralLp<T>, base: &Base<T>) -> Result<Vec<T>, LinalgError> {
    let b_b: Vec<T> = base.indices.iter().map(|&r| sp.b[r]).collect();
    let mut x = base.factorization.solve(&b_b)?;
    let r: Vec<T> = base.indices.iter().map(|&row| -sp.sigma(row, &x)).collect();
    let dx = base.factorization.solve(&r)?;
    x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
    Ok(x)
}

/// Recomputes `y_c` from `A_Bᵀ y_c = c`.
fn refresh_expansion<T: Scalar>(base: &Base<T>, state: &mut SolverState<T>, c_std: &[T]) -> Result<(), SolveError> {
    state.y_c = base
        .factorization
        .solve_transpose(c_std)
        .map_err(|source| SolveError::Singular { iteration: state.iteration, source })?;
    Ok(())
}

fn expansion_residual<T: Scalar>(sp: &StandardGeneralLp<T>, base: &Base<T>, y_c: &[T], c_std: &[T]) -> T {
    let mut r = c_std.to_vec();
    for (&row, &y) in base.indices.iter().zip(y_c) {
        for (ri, &a) in r.iter_mut().zip(sp.a.row(row)) {
            *ri -= y * a;
        }
    }
    norm_inf(&r)
}

fn max_violation<T: Scalar>(sp: &StandardGeneralLp<T>, x: &[T]) -> T {
    (0..sp.num_rows())
        .map(|r| {
            let s = sp.sigma(r, x);
            if sp.is_equality(r) {
                s.abs()
            } else {
                (-s).max(T::zero())
            }
        })
        .fold(T::zero(), T::max)
}

/// Runs the method to termination.
///
/// Fails only on a rank-deficient equality block or an internal numerical
/// breakdown; infeasibility, unboundedness and the iteration cap are
/// reported through [`SolveOutcome::status`].
pub fn solve<T: Scalar>(sp: &StandardGeneralLp<T>, opts: &FacetOptions<T>) -> Result<SolveOutcome<T>, SolveError> {
    if sp.m > 0 {
        let a_eq = Matrix::from_rows(sp.d, &(0..sp.m).map(|r| sp.a.row(r).to_vec()).collect::<Vec<_>>())
            .expect("rows of the stacked matrix have length d");
        let r = rank(&a_eq, T::lit(1e3) * T::epsilon());
        if r >= sp.d {
            return Err(SolveError::RankDeficientEquality { rank: r, d: sp.d });
        }
    }

    let tol = &opts.tol;
    let c_std = sp.objective_row();
    let c_scale = T::one() + norm_inf(&c_std);
    let (mut base, mut state) = initial_state(sp, tol.pivot);
    let mut auditor = opts.audit.then(|| Auditor::new(sp, &base, &state, tol.sign, tol.lin));
    let mut rule = opts.rule;
    let mut switched = false;
    let mut redundant = BTreeSet::new();
    let mut best_objective = sp.objective(&state.x);
    let mut last_progress = 0;

    let finish = |status,
                  base: &Base<T>,
                  state: SolverState<T>,
                  certificate,
                  redundant,
                  auditor: Option<Auditor<T>>,
                  switched| {
        let (x, objective) = match status {
            Status::Optimal => {
                let x = state.x;
                let obj = sp.objective(&x) + sp.offset;
                (Some(x), Some(obj))
            }
            Status::IterationLimit => (Some(state.x), None),
            _ => (None, None),
        };
        SolveOutcome {
            status,
            x,
            objective,
            iterations: state.iteration,
            certificate,
            redundant_rows: redundant,
            base: base.indices.clone(),
            trace: state.trace,
            audit: auditor.map(Auditor::finish),
            switched_to_least_index: switched,
        }
    };

    loop {
        if opts.reduce {
            let found = detect_nonbase_redundant(sp, &base, &state, tol.sign)?;
            redundant.extend(found.iter().copied());
            state.removed_rows.extend(found);
        }

        let Some(p) = select_entering(sp, &base, &state, rule) else {
            // Removed rows are implied by the rest, but confirm before stopping.
            if state.removed_rows.iter().any(|&r| sp.violation(r, &state.x).is_some()) {
                state.removed_rows.clear();
                continue;
            }
            let artificial: Vec<usize> = base
                .indices
                .iter()
                .zip(&state.y_c)
                .filter(|&(&r, &y)| sp.is_artificial(r) && y > tol.sign * c_scale)
                .map(|(&r, _)| r)
                .collect();
            if !artificial.is_empty() {
                let cert = Certificate::Unbounded { rows: artificial };
                return Ok(finish(Status::Unbounded, &base, state, Some(cert), redundant, auditor, switched));
            }
            return Ok(finish(Status::Optimal, &base, state, None, redundant, auditor, switched));
        };

        if state.iteration >= opts.max_iter {
            return Ok(finish(Status::IterationLimit, &base, state, None, redundant, auditor, switched));
        }

        let sigma = sp.sigma(p, &state.x);
        let y_p = expand_entering(&base, sp.a.row(p))
            .map_err(|source| SolveError::Singular { iteration: state.iteration, source })?;
        if let Some(cert) = check_infeasible(sp, &base, p, sigma, &y_p, tol.sign) {
            let cert = Certificate::Infeasible(cert);
            return Ok(finish(Status::Infeasible, &base, state, Some(cert), redundant, auditor, switched));
        }
        let case = if sigma < T::zero() { Case::One } else { Case::Two };
        let q = select_leaving(sp, &base, case, &y_p, &state.y_c, tol.sign)
            .ok_or(SolveError::NoLeavingCandidate { iteration: state.iteration, row: p })?;
        if opts.mark_leaving_redundant && detect_leaving_redundant(sp, &base, case, q, &y_p, tol.sign) {
            redundant.insert(q);
            state.removed_rows.insert(q);
        }

        let before = sp.objective(&state.x);
        if opts.trace {
            state.trace.push(TraceRecord {
                k: state.iteration,
                p,
                q,
                objective: (before + sp.offset).as_f64(),
                max_violation: max_violation(sp, &state.x).as_f64(),
                rule,
            });
        }

        pivot(sp, &mut base, &mut state, p, q, &y_p, tol)?;
        let drift = expansion_residual(sp, &base, &state.y_c, &c_std);
        if state.iteration % opts.refresh_every.max(1) == 0 || drift > T::lit(10.0) * tol.lin * c_scale {
            refresh_expansion(&base, &mut state, &c_std)?;
        }
        if let Some(a) = auditor.as_mut() {
            a.after_pivot(sp, &base, &state);
        }

        let now = sp.objective(&state.x);
        if now > best_objective + T::lit(1e-9) * (T::one() + best_objective.abs()) {
            best_objective = now;
            last_progress = state.iteration;
        } else if let Some(limit) = opts.stall_limit {
            if rule != PivotRule::LeastIndex && state.iteration - last_progress >= limit {
                rule = PivotRule::LeastIndex;
                switched = true;
            }
        }
    }
}

/// Sorted base index sets seen during a solve, for cycle audits.
pub fn base_history<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    opts: &FacetOptions<T>,
) -> Result<(SolveOutcome<T>, Vec<Vec<usize>>), SolveError> {
    let mut opts = opts.clone();
    opts.trace = true;
    let out = solve(sp, &opts)?;
    let mut bases = Vec::with_capacity(out.trace.len() + 1);
    let mut current: Vec<usize> = (0..sp.d).map(|i| sp.e_row(i)).collect();
    let mut sorted = current.clone();
    sorted.sort_unstable();
    bases.push(sorted);
    for rec in &out.trace {
        if let Some(k) = current.iter().position(|&r| r == rec.q) {
            current[k] = rec.p;
        }
        let mut s = current.clone();
        s.sort_unstable();
        bases.push(s);
    }
    Ok((out, bases))
}

/// True when no base index set in `history` occurs twice.
pub fn no_repeated_base(history: &[Vec<usize>]) -> bool {
    let mut seen = HashSet::new();
    history.iter().all(|b| seen.insert(b.clone()))
}
