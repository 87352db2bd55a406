//! Facet pivot simplex method for general-form linear programs.
//!
//! ```
//! use facetpivot::{solve_lp, Lp, LpBuilder, Status};
//!
//! // min -x - y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0
//! let lp: Lp = LpBuilder::new(2)
//!     .objective(vec![-1.0, -1.0])
//!     .le(vec![1.0, 2.0], 4.0)
//!     .le(vec![3.0, 1.0], 6.0)
//!     .build()
//!     .unwrap();
//! let out = solve_lp(&lp, &Default::default()).unwrap();
//! assert_eq!(out.status, Status::Optimal);
//! assert!((out.objective.unwrap() + 2.8).abs() < 1e-12);
//! ```

pub mod facet;
pub mod generators;
pub mod json;
pub mod linalg;
pub mod model;
pub mod mps;
pub mod reference;
pub mod scalar;

pub use facet::{FacetOptions, PivotRule, SolveError, SolveOutcome, Status};
pub use model::{GeneralLp, LpBuilder, ModelError, StandardGeneralLp};
pub use scalar::Scalar;

pub type Lp = GeneralLp<f64>;
pub type Lp32 = GeneralLp<f32>;
pub type StandardLp = StandardGeneralLp<f64>;
pub type Outcome = SolveOutcome<f64>;
pub type Options = FacetOptions<f64>;
pub type Matrix = linalg::Matrix<f64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Converts with the default artificial bound and runs the facet method.
pub fn solve_lp<T: Scalar>(p: &GeneralLp<T>, opts: &FacetOptions<T>) -> Result<SolveOutcome<T>, Error> {
    let sp = model::to_standard_general(p, model::default_big_m(p))?;
    Ok(facet::solve(&sp, opts)?)
}
