//! Entering, leaving, infeasibility and redundancy tests for one iteration.

use std::collections::BTreeSet;

use super::{Base, Case, InfeasibilityCertificate, PivotRule, SolveError, SolverState};
use crate::linalg::LinalgError;
use crate::model::StandardGeneralLp;
use crate::scalar::Scalar;

/// The violated row to bring into the base, or `None` at optimality.
///
/// Violated equality rows always take priority over violated inequality rows.
/// Within a class the rule's maximizer wins; ties go to the lower row index.
pub fn select_entering<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &Base<T>,
    state: &SolverState<T>,
    rule: PivotRule,
) -> Option<usize> {
    let eligible = |r: &usize| !base.contains(*r) && !state.removed_rows.contains(r);
    let pick = |rows: &mut dyn Iterator<Item = usize>| {
        let mut best: Option<(usize, T)> = None;
        for r in rows.filter(eligible) {
            let Some(sigma) = sp.violation(r, &state.x) else { continue };
            let score = match rule {
                PivotRule::LeastIndex => return Some(r),
                PivotRule::MaxDeviation => sigma.abs(),
                PivotRule::MaxNormalizedDeviation => {
                    let norm = sp.a.row(r).iter().map(|&v| v * v).sum::<T>().sqrt();
                    sigma.abs() / norm.max(T::min_positive_value())
                }
            };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((r, score));
            }
        }
        best.map(|(r, _)| r)
    };
    pick(&mut (0..sp.m)).or_else(|| pick(&mut (sp.m..sp.num_rows())))
}

/// Coefficients of `a_p` in the base rows, by base position: `A_Bᵀ y_p = a_p`.
pub fn expand_entering<T: Scalar>(base: &Base<T>, a_p: &[T]) -> Result<Vec<T>, LinalgError> {
    base.factorization().solve_transpose(a_p)
}

/// A proof that no feasible point exists, when the expansion of the entering
/// row has the right signs on the inequality members of the base.
pub fn check_infeasible<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &Base<T>,
    p: usize,
    sigma_p: T,
    y_p: &[T],
    tol_sign: T,
) -> Option<InfeasibilityCertificate<T>> {
    let mut ineq = base.ineq_positions(sp).map(|k| y_p[k]);
    let case = if sigma_p < T::zero() {
        if !ineq.all(|y| y <= tol_sign) {
            return None;
        }
        Case::One
    } else {
        if !sp.is_equality(p) || !ineq.all(|y| y >= -tol_sign) {
            return None;
        }
        Case::Two
    };
    Some(InfeasibilityCertificate { row: p, sigma: sigma_p, case, base: base.indices().to_vec(), y_p: y_p.to_vec() })
}

/// The base row that leaves, chosen by the ratio test on `y_c / y_p`.
///
/// Only inequality members may leave. Case 1 takes the smallest ratio over
/// positive `y_p`; Case 2 the largest ratio over negative `y_p`. Ties go to
/// the lower row index.
pub fn select_leaving<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &Base<T>,
    case: Case,
    y_p: &[T],
    y_c: &[T],
    tol_sign: T,
) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for k in base.ineq_positions(sp) {
        let yp = y_p[k];
        let ratio = match case {
            Case::One if yp > tol_sign => y_c[k].max(T::zero()) / yp,
            // Negate so both cases minimize.
            Case::Two if yp < -tol_sign => y_c[k].max(T::zero()) / -yp,
            _ => continue,
        };
        let row = base.indices()[k];
        let better = match best {
            None => true,
            Some((r, b)) => {
                let slack = tol_sign * (T::one() + b.abs());
                ratio < b - slack || (ratio <= b + slack && row < r)
            }
        };
        if better {
            best = Some((row, ratio));
        }
    }
    best.map(|(r, _)| r)
}

/// Whether the leaving row `q` is implied by the remaining constraints.
///
/// Case 1 needs `y_p[q] > 0` with every other inequality coefficient `<= 0`;
/// Case 2 is the mirror image, `y_p[q] < 0` and the others `>= 0`.
pub fn detect_leaving_redundant<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &Base<T>,
    case: Case,
    q: usize,
    y_p: &[T],
    tol_sign: T,
) -> bool {
    let Some(kq) = base.position(q) else { return false };
    let sign = match case {
        Case::One => T::one(),
        Case::Two => -T::one(),
    };
    sign * y_p[kq] > tol_sign && base.ineq_positions(sp).filter(|&k| k != kq).all(|k| sign * y_p[k] <= tol_sign)
}

/// Non-base rows implied by the current base.
///
/// An equality row qualifies when it holds at `x` and its expansion uses only
/// base equality rows. An inequality row qualifies when it is strictly slack
/// at `x` and its expansion is nonnegative on base inequality rows.
pub fn detect_nonbase_redundant<T: Scalar>(
    sp: &StandardGeneralLp<T>,
    base: &Base<T>,
    state: &SolverState<T>,
    tol_sign: T,
) -> Result<BTreeSet<usize>, SolveError> {
    let mut found = BTreeSet::new();
    for r in 0..sp.num_rows() {
        if base.contains(r) || state.removed_rows.contains(&r) {
            continue;
        }
        let sigma = sp.sigma(r, &state.x);
        let tol = sp.row_tolerance(r, &state.x);
        let eq = sp.is_equality(r);
        if (eq && sigma.abs() > tol) || (!eq && sigma <= tol) {
            continue;
        }
        let y = expand_entering(base, sp.a.row(r))
            .map_err(|source| SolveError::Singular { iteration: state.iteration, source })?;
        let mut ineq = base.ineq_positions(sp).map(|k| y[k]);
        let redundant = if eq { ineq.all(|v| v.abs() <= tol_sign) } else { ineq.all(|v| v >= -tol_sign) };
        if redundant {
            found.insert(r);
        }
    }
    Ok(found)
}
