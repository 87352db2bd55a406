//! Problem representations and the conversion to the stacked facet form.
//!
//! [`GeneralLp`] is what users write: equality rows, `>=` rows, variable
//! bounds and a linear objective to minimize. [`StandardGeneralLp`] is what
//! the facet solver works on: every constraint, including each bound, is a
//! row of one stacked matrix
//!
//! ```text
//! A = [A_eq; A_ineq; E; F],   b = [b_eq; b_ineq; b_L; b_U]
//! ```
//!
//! where `E` and `F` are `±1` diagonal blocks oriented so that the objective
//! is a nonnegative combination of the rows of `E`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("non-finite value in {what}")]
    NonFiniteData { what: &'static str },
    #[error("variable {var}: lower bound {lower} exceeds upper bound {upper}")]
    InconsistentBounds { var: usize, lower: f64, upper: f64 },
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("artificial bound {big_m} does not exceed the largest finite bound {needed}")]
    BigMTooSmall { big_m: f64, needed: f64 },
}

/// Optional labels carried through from file formats.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Names {
    pub columns: Vec<String>,
    pub eq_rows: Vec<String>,
    pub ineq_rows: Vec<String>,
}

/// `min c·x + offset` subject to `A_eq x = b_eq`, `A_ineq x >= b_ineq`,
/// `lower <= x <= upper`.
///
/// Bounds may be infinite; every other entry must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralLp<T> {
    pub c: Vec<T>,
    pub a_eq: Matrix<T>,
    pub b_eq: Vec<T>,
    pub a_ineq: Matrix<T>,
    pub b_ineq: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    /// Constant added to reported objective values.
    pub offset: T,
    pub names: Option<Names>,
}

impl<T: Scalar> GeneralLp<T> {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_eq(&self) -> usize {
        self.a_eq.rows()
    }

    pub fn num_ineq(&self) -> usize {
        self.a_ineq.rows()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let d = self.num_vars();
        let check = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(ModelError::DimensionMismatch { what, expected, found })
            }
        };
        check("A_eq columns", d, self.a_eq.cols())?;
        check("A_ineq columns", d, self.a_ineq.cols())?;
        check("b_eq", self.a_eq.rows(), self.b_eq.len())?;
        check("b_ineq", self.a_ineq.rows(), self.b_ineq.len())?;
        check("lower", d, self.lower.len())?;
        check("upper", d, self.upper.len())?;

        let finite = |v: &[T]| v.iter().all(|x| x.is_finite());
        if !finite(&self.c) {
            return Err(ModelError::NonFiniteData { what: "c" });
        }
        if !self.a_eq.is_finite() || !finite(&self.b_eq) {
            return Err(ModelError::NonFiniteData { what: "equality rows" });
        }
        if !self.a_ineq.is_finite() || !finite(&self.b_ineq) {
            return Err(ModelError::NonFiniteData { what: "inequality rows" });
        }
        if !self.offset.is_finite() {
            return Err(ModelError::NonFiniteData { what: "objective offset" });
        }
        for (i, (&lo, &hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if lo.is_nan() || hi.is_nan() {
                return Err(ModelError::NonFiniteData { what: "bounds" });
            }
            if lo > hi || lo == T::infinity() || hi == T::neg_infinity() {
                return Err(ModelError::InconsistentBounds { var: i, lower: lo.as_f64(), upper: hi.as_f64() });
            }
        }
        Ok(())
    }

    /// Converts every entry to another scalar type.
    pub fn cast<U: Scalar>(&self) -> GeneralLp<U> {
        let f = |x: T| U::from_f64(x.as_f64()).unwrap_or_else(U::nan);
        let v = |xs: &[T]| xs.iter().map(|&x| f(x)).collect::<Vec<U>>();
        GeneralLp {
            c: v(&self.c),
            a_eq: self.a_eq.map(f),
            b_eq: v(&self.b_eq),
            a_ineq: self.a_ineq.map(f),
            b_ineq: v(&self.b_ineq),
            lower: v(&self.lower),
            upper: v(&self.upper),
            offset: f(self.offset),
            names: self.names.clone(),
        }
    }

    /// Largest magnitude among finite bounds and right-hand sides.
    pub fn data_scale(&self) -> T {
        let finite_max = |v: &[T]| v.iter().filter(|x| x.is_finite()).fold(T::zero(), |acc, x| acc.max(x.abs()));
        finite_max(&self.lower).max(finite_max(&self.upper)).max(finite_max(&self.b_eq)).max(finite_max(&self.b_ineq))
    }
}

/// Incremental construction of a [`GeneralLp`]; `<=` rows are negated into `>=` rows.
#[derive(Debug, Clone)]
pub struct LpBuilder<T> {
    d: usize,
    c: Vec<T>,
    a_eq: Vec<Vec<T>>,
    b_eq: Vec<T>,
    a_ineq: Vec<Vec<T>>,
    b_ineq: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> LpBuilder<T> {
    /// `d` variables, zero objective, bounds `[0, +inf)`.
    pub fn new(d: usize) -> Self {
        LpBuilder {
            d,
            c: vec![T::zero(); d],
            a_eq: vec![],
            b_eq: vec![],
            a_ineq: vec![],
            b_ineq: vec![],
            lower: vec![T::zero(); d],
            upper: vec![T::infinity(); d],
        }
    }

    pub fn objective(mut self, c: Vec<T>) -> Self {
        self.c = c;
        self
    }

    pub fn eq(mut self, row: Vec<T>, rhs: T) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn ge(mut self, row: Vec<T>, rhs: T) -> Self {
        self.a_ineq.push(row);
        self.b_ineq.push(rhs);
        self
    }

    pub fn le(mut self, row: Vec<T>, rhs: T) -> Self {
        self.a_ineq.push(row.into_iter().map(|v| -v).collect());
        self.b_ineq.push(-rhs);
        self
    }

    pub fn bounds(mut self, var: usize, lower: T, upper: T) -> Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(self, var: usize) -> Self {
        self.bounds(var, T::neg_infinity(), T::infinity())
    }

    pub fn build(self) -> Result<GeneralLp<T>, ModelError> {
        let mk = |rows: &[Vec<T>], what| {
            Matrix::from_rows(self.d, rows).map_err(|_| ModelError::DimensionMismatch {
                what,
                expected: self.d,
                found: rows.iter().map(|r| r.len()).find(|&l| l != self.d).unwrap_or(0),
            })
        };
        let lp = GeneralLp {
            a_eq: mk(&self.a_eq, "equality row")?,
            a_ineq: mk(&self.a_ineq, "inequality row")?,
            c: self.c,
            b_eq: self.b_eq,
            b_ineq: self.b_ineq,
            lower: self.lower,
            upper: self.upper,
            offset: T::zero(),
            names: None,
        };
        lp.validate()?;
        Ok(lp)
    }
}

/// The stacked facet form solved by [`crate::facet`].
#[derive(Debug, Clone)]
pub struct StandardGeneralLp<T> {
    /// Nonnegative objective weights on the rows of `E`.
    pub c_bar: Vec<T>,
    /// `(m + n + 2d) x d`, ordered `[A_eq; A_ineq; E; F]`.
    pub a: Matrix<T>,
    pub b: Vec<T>,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    /// `flip[i]` is true when the objective coefficient of `x_i` was negative,
    /// so `E` holds `-e_i` for that column.
    pub flip: Vec<bool>,
    pub big_m: T,
    /// Bound rows whose right-hand side is the artificial `-big_m`.
    pub artificial_rows: BTreeSet<usize>,
    /// Absolute feasibility tolerance, `tol_feas_rel * (1 + ||b||_inf)` over
    /// the non-artificial data.
    pub tol_feas: T,
    pub offset: T,
}

/// Extra allowance, in units of machine epsilon times the magnitude of the
/// terms in `a·x - b`, added to the feasibility tolerance.
const ROUNDING_SLACK: f64 = 1e3;

impl<T: Scalar> StandardGeneralLp<T> {
    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn is_equality(&self, row: usize) -> bool {
        row < self.m
    }

    pub fn is_artificial(&self, row: usize) -> bool {
        self.artificial_rows.contains(&row)
    }

    /// Row index of the `i`-th row of `E`.
    pub fn e_row(&self, i: usize) -> usize {
        self.m + self.n + i
    }

    /// Row index of the `i`-th row of `F`.
    pub fn f_row(&self, i: usize) -> usize {
        self.m + self.n + self.d + i
    }

    /// The objective vector in `x` space, `Σ c_bar_i E_i`. Equals the original `c`.
    pub fn objective_row(&self) -> Vec<T> {
        let mut c = vec![T::zero(); self.d];
        for i in 0..self.d {
            let e = self.a.row(self.e_row(i));
            for (cj, &ej) in c.iter_mut().zip(e) {
                *cj += self.c_bar[i] * ej;
            }
        }
        c
    }

    /// `c·x` without the offset.
    pub fn objective(&self, x: &[T]) -> T {
        dot(&self.objective_row(), x)
    }

    /// `σ_r(x) = a_r·x - b_r`.
    pub fn sigma(&self, row: usize, x: &[T]) -> T {
        dot(self.a.row(row), x) - self.b[row]
    }

    /// Feasibility tolerance for row `row` evaluated at `x`.
    pub fn row_tolerance(&self, row: usize, x: &[T]) -> T {
        let magnitude: T = self.a.row(row).iter().zip(x).map(|(&a, &v)| (a * v).abs()).sum();
        self.tol_feas + T::lit(ROUNDING_SLACK) * T::epsilon() * (magnitude + self.b[row].abs())
    }

    /// `Some(σ)` when row `row` is violated at `x`: an equality with `|σ| > tol`
    /// or an inequality with `σ < -tol`.
    pub fn violation(&self, row: usize, x: &[T]) -> Option<T> {
        let s = self.sigma(row, x);
        let tol = self.row_tolerance(row, x);
        let violated = if self.is_equality(row) { s.abs() > tol } else { s < -tol };
        violated.then_some(s)
    }

    pub fn violations(&self, x: &[T]) -> Result<ViolationReport<T>, ModelError> {
        if x.len() != self.d {
            return Err(ModelError::DimensionMismatch { what: "x", expected: self.d, found: x.len() });
        }
        let sigma_eq: Vec<T> = (0..self.m).map(|r| self.sigma(r, x)).collect();
        let sigma_ineq: Vec<T> = (self.m..self.num_rows()).map(|r| self.sigma(r, x)).collect();
        let max_abs_violation = sigma_eq
            .iter()
            .map(|s| s.abs())
            .chain(sigma_ineq.iter().map(|&s| (-s).max(T::zero())))
            .fold(T::zero(), T::max);
        let is_feasible = (0..self.num_rows()).all(|r| self.violation(r, x).is_none());
        Ok(ViolationReport { sigma_eq, sigma_ineq, max_abs_violation, is_feasible })
    }

    /// Same problem with every artificial bound moved to `-new_big_m`.
    pub fn with_big_m(&self, new_big_m: T) -> Self {
        let mut out = self.clone();
        for &r in &self.artificial_rows {
            out.b[r] = -new_big_m;
        }
        out.big_m = new_big_m;
        out
    }

    /// Replaces the relative feasibility factor (default `1e-8` for `f64`).
    pub fn with_tol_feas(mut self, rel: T) -> Self {
        self.tol_feas = rel * (T::one() + self.data_scale());
        self
    }

    fn data_scale(&self) -> T {
        (0..self.num_rows()).filter(|r| !self.is_artificial(*r)).fold(T::zero(), |acc, r| acc.max(self.b[r].abs()))
    }
}

/// Residuals of every constraint at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport<T> {
    /// `a_i·x - b_i` over equality rows.
    pub sigma_eq: Vec<T>,
    /// `a_j·x - b_j` over all inequality rows, bound rows included.
    pub sigma_ineq: Vec<T>,
    pub max_abs_violation: T,
    pub is_feasible: bool,
}

/// `factor * max(1, largest finite |bound|, largest |b|)`.
pub fn default_big_m<T: Scalar>(p: &GeneralLp<T>) -> T {
    T::big_m_factor() * T::one().max(p.data_scale())
}

/// Builds the stacked facet form, replacing infinite bounds by `±big_m`.
pub fn to_standard_general<T: Scalar>(p: &GeneralLp<T>, big_m: T) -> Result<StandardGeneralLp<T>, ModelError> {
    p.validate()?;
    let (m, n, d) = (p.num_eq(), p.num_ineq(), p.num_vars());
    let bound_max = p.lower.iter().chain(&p.upper).filter(|x| x.is_finite()).fold(T::zero(), |acc, x| acc.max(x.abs()));
    if !(big_m > bound_max) || !big_m.is_finite() {
        return Err(ModelError::BigMTooSmall { big_m: big_m.as_f64(), needed: bound_max.as_f64() });
    }

    let rows = m + n + 2 * d;
    let mut a = Matrix::zeros(rows, d);
    let mut b = vec![T::zero(); rows];
    for i in 0..m {
        a.row_mut(i).copy_from_slice(p.a_eq.row(i));
        b[i] = p.b_eq[i];
    }
    for j in 0..n {
        a.row_mut(m + j).copy_from_slice(p.a_ineq.row(j));
        b[m + j] = p.b_ineq[j];
    }

    let mut c_bar = Vec::with_capacity(d);
    let mut flip = Vec::with_capacity(d);
    let mut artificial_rows = BTreeSet::new();
    // Infinite bounds become ±big_m; either way the row's rhs ends up -big_m.
    let lo = |i: usize| if p.lower[i].is_finite() { p.lower[i] } else { -big_m };
    let hi = |i: usize| if p.upper[i].is_finite() { p.upper[i] } else { big_m };
    for i in 0..d {
        let (e_row, f_row) = (m + n + i, m + n + d + i);
        let negative = p.c[i] < T::zero();
        let (e_sign, e_rhs, e_art, f_rhs, f_art) = if negative {
            (-T::one(), -hi(i), !p.upper[i].is_finite(), lo(i), !p.lower[i].is_finite())
        } else {
            (T::one(), lo(i), !p.lower[i].is_finite(), -hi(i), !p.upper[i].is_finite())
        };
        a[(e_row, i)] = e_sign;
        b[e_row] = e_rhs;
        a[(f_row, i)] = -e_sign;
        b[f_row] = f_rhs;
        if e_art {
            artificial_rows.insert(e_row);
        }
        if f_art {
            artificial_rows.insert(f_row);
        }
        c_bar.push(p.c[i].abs());
        flip.push(negative);
    }

    let sp =
        StandardGeneralLp { c_bar, a, b, m, n, d, flip, big_m, artificial_rows, tol_feas: T::zero(), offset: p.offset };
    Ok(sp.with_tol_feas(T::default_tol_feas()))
}

/// Residuals of `x` against the stacked form.
pub fn violations<T: Scalar>(sp: &StandardGeneralLp<T>, x: &[T]) -> Result<ViolationReport<T>, ModelError> {
    sp.violations(x)
}

/// `c·x + offset` in the original coordinates.
pub fn objective_value<T: Scalar>(p: &GeneralLp<T>, x: &[T]) -> Result<T, ModelError> {
    if x.len() != p.num_vars() {
        return Err(ModelError::DimensionMismatch { what: "x", expected: p.num_vars(), found: x.len() });
    }
    Ok(dot(&p.c, x) + p.offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{klee_minty_v1, klee_minty_v2};
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn sign_rules_on_boxed_variables() {
        let p = LpBuilder::new(2).objective(vec![1.0, -2.0]).bounds(0, 0.0, 10.0).bounds(1, 0.0, 20.0).build().unwrap();
        let sp = to_standard_general(&p, 1e7).unwrap();
        assert_eq!(sp.c_bar, vec![1.0, 2.0]);
        assert_eq!(sp.a.row(sp.e_row(0)), &[1.0, 0.0]);
        assert_eq!(sp.a.row(sp.e_row(1)), &[0.0, -1.0]);
        assert_eq!((sp.b[sp.e_row(0)], sp.b[sp.e_row(1)]), (0.0, -20.0));
        assert_eq!(sp.a.row(sp.f_row(0)), &[-1.0, 0.0]);
        assert_eq!(sp.a.row(sp.f_row(1)), &[0.0, 1.0]);
        assert_eq!((sp.b[sp.f_row(0)], sp.b[sp.f_row(1)]), (-10.0, 0.0));
        assert!(sp.artificial_rows.is_empty());
        assert_eq!(sp.flip, vec![false, true]);
    }

    #[test]
    fn infinite_upper_becomes_artificial() {
        let p = LpBuilder::new(1).objective(vec![0.0]).build().unwrap();
        let sp = to_standard_general(&p, 1e7).unwrap();
        assert_eq!(sp.a.row(sp.e_row(0)), &[1.0]);
        assert_eq!(sp.b[sp.e_row(0)], 0.0);
        assert_eq!(sp.a.row(sp.f_row(0)), &[-1.0]);
        assert_eq!(sp.b[sp.f_row(0)], -1e7);
        assert_eq!(sp.artificial_rows.iter().copied().collect::<Vec<_>>(), vec![sp.f_row(0)]);
    }

    #[test]
    fn klee_minty_initial_point_sits_on_the_artificial_box() {
        let p = klee_minty_v1::<f64>(3).unwrap();
        let big_m = 1e9;
        let sp = to_standard_general(&p, big_m).unwrap();
        for i in 0..3 {
            let mut e = vec![0.0; 3];
            e[i] = -1.0;
            assert_eq!(sp.a.row(sp.e_row(i)), e.as_slice());
            assert_eq!(sp.b[sp.e_row(i)], -big_m);
            e[i] = 1.0;
            assert_eq!(sp.a.row(sp.f_row(i)), e.as_slice());
            assert_eq!(sp.b[sp.f_row(i)], 0.0);
            assert!(sp.is_artificial(sp.e_row(i)));
        }
        // E x0 = b_L at x0 = (M, M, M).
        let x0 = [big_m; 3];
        for i in 0..3 {
            assert_eq!(sp.sigma(sp.e_row(i), &x0), 0.0);
        }
    }

    #[test]
    fn conversion_errors() {
        let mut p = LpBuilder::new(1).objective(vec![1.0]).build().unwrap();
        p.c[0] = f64::NAN;
        assert!(matches!(to_standard_general(&p, 1e7), Err(ModelError::NonFiniteData { .. })));
        let p = LpBuilder::new(1).bounds(0, 2.0, 1.0);
        assert!(matches!(p.build(), Err(ModelError::InconsistentBounds { var: 0, .. })));
        let p = LpBuilder::new(1).bounds(0, 0.0, 50.0).build().unwrap();
        assert!(matches!(to_standard_general(&p, 10.0), Err(ModelError::BigMTooSmall { .. })));
        let p = LpBuilder::new(2).eq(vec![1.0], 1.0);
        assert!(matches!(p.build(), Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn equality_residual() {
        let p = LpBuilder::new(2).eq(vec![1.0, 2.0], 3.0).build().unwrap();
        let sp = to_standard_general(&p, 1e7).unwrap();
        let rep = violations(&sp, &[1.0, 1.0]).unwrap();
        assert_eq!(rep.sigma_eq, vec![0.0]);
        assert!(violations(&sp, &[1.0]).is_err());
    }

    #[test]
    fn klee_minty_v2_feasibility() {
        let p = klee_minty_v2::<f64>(3).unwrap();
        let sp = to_standard_general(&p, default_big_m(&p)).unwrap();
        let rep = violations(&sp, &[0.0, 0.0, 7.0]).unwrap();
        assert!(rep.sigma_eq.is_empty());
        assert!(rep.sigma_ineq.iter().all(|&s| s >= 0.0));
        assert!(rep.is_feasible);

        // Third row 2x1 + 2x2 + x3 <= 7 is stored as -2x1 - 2x2 - x3 >= -7.
        let rep = violations(&sp, &[1.0, 1.0, 7.0]).unwrap();
        assert_eq!(rep.sigma_ineq[2], -4.0);
        assert!(!rep.is_feasible);
        assert_eq!(rep.max_abs_violation, 4.0);
    }

    #[test]
    fn objective_values() {
        let p = klee_minty_v1::<f64>(3).unwrap();
        assert_eq!(objective_value(&p, &[0.0, 0.0, 125.0]).unwrap(), -125.0);
        assert_eq!(objective_value(&p, &[0.0; 3]).unwrap(), 0.0);
        let p = klee_minty_v2::<f64>(4).unwrap();
        assert_eq!(objective_value(&p, &[0.0, 0.0, 0.0, 15.0]).unwrap(), -15.0);
        assert!(objective_value(&p, &[0.0]).is_err());
    }

    #[test]
    fn big_m_default_scales_with_data() {
        let p = klee_minty_v2::<f64>(5).unwrap();
        assert_eq!(default_big_m(&p), 1e7 * 31.0);
        let p = LpBuilder::new(1).bounds(0, -INF, INF).build().unwrap();
        assert_eq!(default_big_m(&p), 1e7);
    }

    fn small_lp() -> impl Strategy<Value = (GeneralLp<f64>, Vec<f64>)> {
        let d = 3;
        (
            proptest::collection::vec(-5i32..=5, d),
            proptest::collection::vec((-3i32..=0, prop::option::of(1i32..=4)), d),
            proptest::collection::vec(-10.0f64..10.0, d),
        )
            .prop_map(move |(c, bounds, x)| {
                let mut b = LpBuilder::new(d).objective(c.iter().map(|&v| v as f64).collect());
                for (i, (lo, hi)) in bounds.into_iter().enumerate() {
                    b = b.bounds(i, lo as f64, hi.map_or(INF, |h| h as f64));
                }
                (b.build().unwrap(), x)
            })
    }

    proptest! {
        #[test]
        fn objective_survives_sign_bookkeeping((p, x) in small_lp()) {
            let sp = to_standard_general(&p, 1e6).unwrap();
            let via_e: f64 = (0..sp.d).map(|i| sp.c_bar[i] * dot(sp.a.row(sp.e_row(i)), &x)).sum();
            let direct = objective_value(&p, &x).unwrap();
            prop_assert!((via_e - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
            prop_assert!(sp.c_bar.iter().all(|&c| c >= 0.0));
            for i in 0..sp.d {
                prop_assert_eq!(sp.a[(sp.e_row(i), i)], -sp.a[(sp.f_row(i), i)]);
                prop_assert_eq!(sp.a[(sp.e_row(i), i)].abs(), 1.0);
            }
        }

        #[test]
        fn initial_point_minimizes_each_coordinate((p, _x) in small_lp()) {
            let sp = to_standard_general(&p, 1e6).unwrap();
            for i in 0..sp.d {
                // E_i x = b_L[i] with E_i = ±e_i.
                let xi = sp.b[sp.e_row(i)] * sp.a[(sp.e_row(i), i)];
                let lo = if p.lower[i].is_finite() { p.lower[i] } else { -1e6 };
                let hi = if p.upper[i].is_finite() { p.upper[i] } else { 1e6 };
                let best = if p.c[i] >= 0.0 { lo } else { hi };
                prop_assert_eq!(xi, best);
            }
        }
    }
}
