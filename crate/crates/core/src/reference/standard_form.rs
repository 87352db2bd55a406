use thiserror::Error;

use crate::linalg::Matrix;
use crate::model::{GeneralLp, ModelError};
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StandardFormError {
    #[error("variable {var} has no finite lower bound; pass a big-M to substitute one")]
    UnboundedBelowVariable { var: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `min c·v + offset` s.t. `A v = b`, `v >= 0`.
///
/// Column layout: the `d` structural variables (shifted so their lower bound
/// is nonnegative), one surplus per inequality row, one `y` per finite upper
/// bound, one `z` per variable. Row layout: equalities, inequalities,
/// `x + y = u`, `x - z = ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormLp<T> {
    pub a: Matrix<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub offset: T,
    /// Original `x_i = v_i + shift[i]`.
    pub shift: Vec<T>,
    pub num_structural: usize,
    /// Surplus columns follow the structural ones, one per inequality row.
    pub num_surplus: usize,
}

impl<T: Scalar> StandardFormLp<T> {
    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn num_cols(&self) -> usize {
        self.a.cols()
    }

    /// Original variables from a standard-form point.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        v[..self.num_structural].iter().zip(&self.shift).map(|(&x, &s)| x + s).collect()
    }

    pub fn objective(&self, v: &[T]) -> T {
        dot(&self.c, v) + self.offset
    }
}

/// Bounded-variable conversion to `A v = b, v >= 0`.
///
/// Variables with a negative or infinite lower bound are shifted by it; an
/// infinite one is first replaced by `-big_m` when given.
pub fn to_standard_form<T: Scalar>(p: &GeneralLp<T>, big_m: Option<T>) -> Result<StandardFormLp<T>, StandardFormError> {
    p.validate()?;
    let (m, n, d) = (p.num_eq(), p.num_ineq(), p.num_vars());

    let mut lower = Vec::with_capacity(d);
    for (i, &l) in p.lower.iter().enumerate() {
        lower.push(match (l.is_finite(), big_m) {
            (true, _) => l,
            (false, Some(mv)) => -mv,
            (false, None) => return Err(StandardFormError::UnboundedBelowVariable { var: i }),
        });
    }
    let shift: Vec<T> = lower.iter().map(|&l| l.min(T::zero())).collect();
    let lo: Vec<T> = lower.iter().zip(&shift).map(|(&l, &s)| l - s).collect();
    let hi: Vec<T> = p.upper.iter().zip(&shift).map(|(&u, &s)| u - s).collect();
    let boxed: Vec<usize> = (0..d).filter(|&i| hi[i].is_finite()).collect();

    let y0 = d + n;
    let z0 = y0 + boxed.len();
    let cols = z0 + d;
    let rows = m + n + boxed.len() + d;
    let mut a = Matrix::zeros(rows, cols);
    let mut b = vec![T::zero(); rows];

    for i in 0..m {
        a.row_mut(i)[..d].copy_from_slice(p.a_eq.row(i));
        b[i] = p.b_eq[i] - dot(p.a_eq.row(i), &shift);
    }
    for j in 0..n {
        let r = m + j;
        a.row_mut(r)[..d].copy_from_slice(p.a_ineq.row(j));
        a[(r, d + j)] = -T::one();
        b[r] = p.b_ineq[j] - dot(p.a_ineq.row(j), &shift);
    }
    for (k, &i) in boxed.iter().enumerate() {
        let r = m + n + k;
        a[(r, i)] = T::one();
        a[(r, y0 + k)] = T::one();
        b[r] = hi[i];
    }
    for i in 0..d {
        let r = m + n + boxed.len() + i;
        a[(r, i)] = T::one();
        a[(r, z0 + i)] = -T::one();
        b[r] = lo[i];
    }

    let mut c = vec![T::zero(); cols];
    c[..d].copy_from_slice(&p.c);
    let offset = p.offset + dot(&p.c, &shift);
    Ok(StandardFormLp { a, b, c, offset, shift, num_structural: d, num_surplus: n })
}
