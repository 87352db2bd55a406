//! Per-pivot checks of the quantities the method is supposed to maintain.

use std::collections::HashSet;

use serde::Serialize;

use super::{Base, SolverState};
use crate::model::StandardGeneralLp;
use crate::scalar::{dot, dot2, norm_inf, Scalar};

/// Counts of invariant violations over one solve. All zero on a clean run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub pivots: usize,
    /// A base inequality row with `y_c < -tol_sign`.
    pub sign: usize,
    /// `||A_Bᵀ y_c - c||_inf > tol_lin (1 + ||c||_inf)`.
    pub expansion: usize,
    /// `||A_B x - b_B||_inf > tol_lin (1 + ||b_B||_inf)`.
    pub basic: usize,
    /// The objective fell by more than `1e-9 (1 + |obj|)`.
    pub monotone: usize,
    /// A base index set seen earlier in the same solve.
    pub repeated_bases: usize,
    /// Largest residuals relative to their thresholds.
    pub worst_expansion: f64,
    pub worst_basic: f64,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.sign + self.expansion + self.basic + self.monotone + self.repeated_bases == 0
    }

    pub fn merge(&mut self, other: &AuditReport) {
        self.pivots += other.pivots;
        self.sign += other.sign;
        self.expansion += other.expansion;
        self.basic += other.basic;
        self.monotone += other.monotone;
        self.repeated_bases += other.repeated_bases;
        self.worst_expansion = self.worst_expansion.max(other.worst_expansion);
        self.worst_basic = self.worst_basic.max(other.worst_basic);
    }
}

pub(super) struct Auditor<T> {
    report: AuditReport,
    seen: HashSet<Vec<usize>>,
    c_std: Vec<T>,
    objective: T,
    tol_sign: T,
    tol_lin: T,
}

/// Relative slack allowed on the objective between consecutive iterates.
const TOL_OBJ: f64 = 1e-9;

impl<T: Scalar> Auditor<T> {
    pub(super) fn new(
        sp: &StandardGeneralLp<T>,
        base: &Base<T>,
        state: &SolverState<T>,
        tol_sign: T,
        tol_lin: T,
    ) -> Self {
        let mut seen = HashSet::new();
        seen.insert(base.sorted_indices());
        let c_std = sp.objective_row();
        let objective = vertex_objective(sp, base, &state.x, &c_std);
        Auditor { report: AuditReport::default(), seen, c_std, objective, tol_sign, tol_lin }
    }

    pub(super) fn after_pivot(&mut self, sp: &StandardGeneralLp<T>, base: &Base<T>, state: &SolverState<T>) {
        let r = &mut self.report;
        r.pivots += 1;

        if base.ineq_positions(sp).any(|k| state.y_c[k] < -self.tol_sign) {
            r.sign += 1;
        }

        let rows = base.indices();
        let mut expansion = self.c_std.clone();
        for (k, &row) in rows.iter().enumerate() {
            for (e, &a) in expansion.iter_mut().zip(sp.a.row(row)) {
                *e -= state.y_c[k] * a;
            }
        }
        let limit = self.tol_lin * (T::one() + norm_inf(&self.c_std));
        let ratio = (norm_inf(&expansion) / limit).as_f64();
        r.worst_expansion = r.worst_expansion.max(ratio);
        if ratio > 1.0 {
            r.expansion += 1;
        }

        let b_b: Vec<T> = rows.iter().map(|&row| sp.b[row]).collect();
        let residual = rows.iter().map(|&row| sp.sigma(row, &state.x).abs()).fold(T::zero(), T::max);
        let ratio = (residual / (self.tol_lin * (T::one() + norm_inf(&b_b)))).as_f64();
        r.worst_basic = r.worst_basic.max(ratio);
        if ratio > 1.0 {
            r.basic += 1;
        }

        let before = self.objective;
        self.objective = vertex_objective(sp, base, &state.x, &self.c_std);
        if self.objective < before - T::lit(TOL_OBJ) * (T::one() + before.abs()) {
            r.monotone += 1;
        }

        if !self.seen.insert(base.sorted_indices()) {
            r.repeated_bases += 1;
        }
    }

    pub(super) fn finish(self) -> AuditReport {
        self.report
    }
}

/// `c·x` at the exact vertex of `base`, not at its rounded coordinates `x`.
///
/// Near artificial bounds the coordinates are large enough that their last bit alone moves `c·x` by
/// more than the monotonicity tolerance. The residual of `x` and `c·x` are accumulated in doubled
/// precision and the correction toward the vertex is applied to the objective only.
fn vertex_objective<T: Scalar>(sp: &StandardGeneralLp<T>, base: &Base<T>, x: &[T], c: &[T]) -> T {
    let residual: Vec<T> = base
        .indices()
        .iter()
        .map(|&row| {
            let mut a = sp.a.row(row).to_vec();
            a.push(-T::one());
            let mut v = x.to_vec();
            v.push(sp.b[row]);
            -dot2(&a, &v)
        })
        .collect();
    let correction = base.factorization().solve(&residual).map(|dx| dot(c, &dx)).unwrap_or_else(|_| T::zero());
    dot2(c, x) + correction
}
