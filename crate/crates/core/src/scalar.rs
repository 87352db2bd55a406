//! Floating-point scalar abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point: `f32` or `f64`.
///
/// Besides the arithmetic bounds, each implementation carries the default
/// tolerances the solvers use for that precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Dead zone for sign tests on expansion coefficients.
    fn default_tol_sign() -> Self;
    /// Relative tolerance for linear-system residuals.
    fn default_tol_lin() -> Self;
    /// Relative factor for constraint feasibility, scaled by `1 + ||b||_inf`.
    fn default_tol_feas() -> Self;
    /// Pivot threshold relative to the matrix infinity norm.
    fn default_tol_pivot() -> Self;
    /// Multiplier applied to the data scale when choosing the artificial bound.
    fn big_m_factor() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn default_tol_sign() -> Self {
        1e-9
    }
    fn default_tol_lin() -> Self {
        1e-9
    }
    fn default_tol_feas() -> Self {
        1e-8
    }
    fn default_tol_pivot() -> Self {
        1e-14
    }
    fn big_m_factor() -> Self {
        1e7
    }
}

impl Scalar for f32 {
    fn default_tol_sign() -> Self {
        1e-4
    }
    fn default_tol_lin() -> Self {
        1e-4
    }
    fn default_tol_feas() -> Self {
        1e-4
    }
    fn default_tol_pivot() -> Self {
        1e-6
    }
    fn big_m_factor() -> Self {
        1e3
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Dot product in twice the working precision (Ogita, Rump and Oishi's `Dot2`), rounded once.
pub(crate) fn dot2<T: Scalar>(a: &[T], b: &[T]) -> T {
    let (mut s, mut err) = (T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        let p_err = x.mul_add(y, -p);
        let t = s + p;
        let z = t - s;
        err += (s - (t - z)) + (p - z) + p_err;
        s = t;
    }
    s + err
}

pub(crate) fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}
