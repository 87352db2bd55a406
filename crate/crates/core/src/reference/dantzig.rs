use std::collections::HashSet;

use super::StandardFormLp;
use crate::facet::Status;
use crate::scalar::Scalar;

/// The column order used to break ties, in both the entering and the
/// leaving choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieOrder {
    /// Plain column index.
    Columns,
    /// `x_1, s_1, x_2, s_2, ...`: each structural column followed by the
    /// surplus of the inequality row with the same index, then the rest.
    Interleaved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DantzigOptions {
    /// Cap on pivots over both phases.
    pub max_iter: usize,
    /// Least-index entering instead of most negative reduced cost.
    pub bland: bool,
    /// Fall back to Bland's rule for the rest of a phase once a basis repeats.
    pub bland_on_cycle: bool,
    pub ties: TieOrder,
}

impl Default for DantzigOptions {
    fn default() -> Self {
        DantzigOptions { max_iter: 1_000_000, bland: false, bland_on_cycle: true, ties: TieOrder::Interleaved }
    }
}

impl DantzigOptions {
    pub fn with_max_iter(max_iter: usize) -> Self {
        DantzigOptions { max_iter, ..Self::default() }
    }

    pub fn bland(max_iter: usize) -> Self {
        DantzigOptions { max_iter, bland: true, ..Self::default() }
    }
}

fn column_ranks<T>(sf: &StandardFormLp<T>, ties: TieOrder, width: usize) -> Vec<usize> {
    let (d, n) = (sf.num_structural, sf.num_surplus);
    let pairs = d.max(n);
    (0..width)
        .map(|j| match ties {
            TieOrder::Columns => j,
            TieOrder::Interleaved if j < d => 2 * j,
            TieOrder::Interleaved if j < d + n => 2 * (j - d) + 1,
            TieOrder::Interleaved => 2 * pairs + j,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DantzigOutcome<T> {
    pub status: Status,
    /// Standard-form point; see [`StandardFormLp::project`].
    pub x: Option<Vec<T>>,
    pub objective: Option<T>,
    pub phase_one_pivots: usize,
    pub phase_two_pivots: usize,
    /// Pivots that landed on a basis already visited in the same phase.
    pub basis_revisits: usize,
    pub switched_to_bland: bool,
}

impl<T> DantzigOutcome<T> {
    pub fn pivots(&self) -> usize {
        self.phase_one_pivots + self.phase_two_pivots
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    active: Vec<bool>,
    /// Reduced costs, and the objective value in the last slot.
    cost: Vec<T>,
    obj: T,
    allowed: usize,
    /// Tie-breaking rank of each column; lower wins.
    rank: Vec<usize>,
    tol: T,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

impl<T: Scalar> Tableau<T> {
    fn set_cost(&mut self, c: &[T]) {
        self.cost = c.to_vec();
        self.obj = T::zero();
        for r in (0..self.rows.len()).filter(|&r| self.active[r]) {
            let cb = c[self.basis[r]];
            if cb != T::zero() {
                for (cj, &a) in self.cost.iter_mut().zip(&self.rows[r]) {
                    *cj -= cb * a;
                }
                self.obj += cb * self.rhs[r];
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = T::one() / self.rows[r][j];
        self.rows[r].iter_mut().for_each(|v| *v *= inv);
        self.rhs[r] *= inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r || !self.active[i] {
                continue;
            }
            let f = self.rows[i][j];
            if f != T::zero() {
                for (v, &p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                self.rows[i][j] = T::zero();
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.cost[j];
        if f != T::zero() {
            for (v, &p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.cost[j] = T::zero();
            self.obj += f * pivot_rhs;
        }
        self.basis[r] = j;
    }

    fn entering(&self, bland: bool, cost_tol: T) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for j in 0..self.allowed {
            let rc = self.cost[j];
            if rc >= -cost_tol {
                continue;
            }
            let better = match best {
                None => true,
                Some((bj, _)) if bland => self.rank[j] < self.rank[bj],
                Some((bj, b)) => rc < b || (rc == b && self.rank[j] < self.rank[bj]),
            };
            if better {
                best = Some((j, rc));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Minimum ratio; ties go to the basic variable of lowest rank.
    fn leaving(&self, j: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for r in (0..self.rows.len()).filter(|&r| self.active[r]) {
            let a = self.rows[r][j];
            if a > self.tol {
                let ratio = self.rhs[r].max(T::zero()) / a;
                let better = match best {
                    None => true,
                    Some((br, b)) => {
                        let slack = self.tol * (T::one() + b.abs());
                        ratio < b - slack
                            || (ratio <= b + slack && self.rank[self.basis[r]] < self.rank[self.basis[br]])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        best.map(|(r, _)| r)
    }

    /// Pivots until optimal; `floor` ends the run early once the objective
    /// reaches it (phase one stops at zero).
    fn run(
        &mut self,
        opts: &DantzigOptions,
        budget: usize,
        floor: Option<T>,
        pivots: &mut usize,
        out: &mut DantzigOutcome<T>,
    ) -> Step {
        let scale = self.cost.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        let cost_tol = self.tol * (T::one() + scale);
        let mut seen = HashSet::new();
        seen.insert(self.sorted_basis());
        let mut bland = opts.bland;
        loop {
            if floor.is_some_and(|f| self.obj <= f) {
                return Step::Optimal;
            }
            let Some(j) = self.entering(bland, cost_tol) else { return Step::Optimal };
            let Some(r) = self.leaving(j) else { return Step::Unbounded };
            if *pivots >= budget {
                return Step::Limit;
            }
            self.pivot(r, j);
            *pivots += 1;
            if !seen.insert(self.sorted_basis()) {
                out.basis_revisits += 1;
                if opts.bland_on_cycle && !bland {
                    bland = true;
                    out.switched_to_bland = true;
                }
            }
        }
    }

    fn sorted_basis(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.rows.len()).filter(|&r| self.active[r]).map(|r| self.basis[r]).collect();
        v.sort_unstable();
        v
    }
}

/// Two-phase tableau simplex with Dantzig's most-negative-reduced-cost rule.
///
/// Rows are sign-normalized so `b >= 0`; unit columns already present seed
/// the starting basis and artificial columns fill the remaining rows.
pub fn dantzig_solve<T: Scalar>(sf: &StandardFormLp<T>, opts: &DantzigOptions) -> DantzigOutcome<T> {
    let (rows, cols) = (sf.num_rows(), sf.num_cols());
    let mut a: Vec<Vec<T>> = (0..rows).map(|r| sf.a.row(r).to_vec()).collect();
    let mut b = sf.b.clone();
    for r in 0..rows {
        if b[r] < T::zero() {
            a[r].iter_mut().for_each(|v| *v = -*v);
            b[r] = -b[r];
        }
    }

    let unit_in = |a: &Vec<Vec<T>>, j: usize| {
        let mut hit = None;
        for (r, row) in a.iter().enumerate() {
            if row[j] != T::zero() {
                if hit.is_some() {
                    return None;
                }
                hit = Some((r, row[j]));
            }
        }
        hit
    };
    let mut basis: Vec<Option<usize>> = vec![None; rows];
    for j in 0..cols {
        match unit_in(&a, j) {
            Some((r, v)) if basis[r].is_none() && v == T::one() => basis[r] = Some(j),
            Some((r, v)) if basis[r].is_none() && v == -T::one() && b[r] == T::zero() => {
                a[r].iter_mut().for_each(|v| *v = -*v);
                basis[r] = Some(j);
            }
            _ => {}
        }
    }

    let missing: Vec<usize> = (0..rows).filter(|&r| basis[r].is_none()).collect();
    let width = cols + missing.len();
    for row in a.iter_mut() {
        row.resize(width, T::zero());
    }
    for (k, &r) in missing.iter().enumerate() {
        a[r][cols + k] = T::one();
        basis[r] = Some(cols + k);
    }

    let mut t = Tableau {
        rows: a,
        rhs: b,
        basis: basis.into_iter().map(|v| v.expect("every row has a basic column")).collect(),
        active: vec![true; rows],
        cost: vec![],
        obj: T::zero(),
        allowed: width,
        rank: column_ranks(sf, opts.ties, width),
        tol: T::default_tol_sign(),
    };
    let mut out = DantzigOutcome {
        status: Status::Optimal,
        x: None,
        objective: None,
        phase_one_pivots: 0,
        phase_two_pivots: 0,
        basis_revisits: 0,
        switched_to_bland: false,
    };

    if !missing.is_empty() {
        let mut c1 = vec![T::zero(); width];
        c1[cols..].iter_mut().for_each(|v| *v = T::one());
        t.set_cost(&c1);
        let mut pivots = 0;
        let threshold = T::default_tol_feas() * t.rhs.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let step = t.run(opts, opts.max_iter, Some(threshold), &mut pivots, &mut out);
        out.phase_one_pivots = pivots;
        if matches!(step, Step::Limit) {
            out.status = Status::IterationLimit;
            return out;
        }
        if t.obj > threshold {
            out.status = Status::Infeasible;
            return out;
        }
        // Drive zero-level artificials out, dropping rows that are redundant.
        for r in 0..rows {
            if t.basis[r] >= cols {
                match (0..cols).find(|&j| t.rows[r][j].abs() > t.tol) {
                    Some(j) => t.pivot(r, j),
                    None => t.active[r] = false,
                }
            }
        }
    }

    t.allowed = cols;
    let mut c2 = sf.c.clone();
    c2.resize(width, T::zero());
    t.set_cost(&c2);
    let mut pivots = 0;
    let budget = opts.max_iter.saturating_sub(out.phase_one_pivots);
    let step = t.run(opts, budget, None, &mut pivots, &mut out);
    out.phase_two_pivots = pivots;
    match step {
        Step::Limit => out.status = Status::IterationLimit,
        Step::Unbounded => out.status = Status::Unbounded,
        Step::Optimal => {
            let mut x = vec![T::zero(); cols];
            for r in (0..rows).filter(|&r| t.active[r]) {
                if t.basis[r] < cols {
                    x[t.basis[r]] = t.rhs[r];
                }
            }
            out.objective = Some(sf.objective(&x));
            out.x = Some(x);
        }
    }
    out
}
