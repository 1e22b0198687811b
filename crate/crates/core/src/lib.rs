//! Nonparametric estimation of conditional-on-extreme quantities for
//! heavy-tailed bivariate data.
//!
//! Given an i.i.d. sample of nonnegative pairs `(X, Y)` that are jointly
//! regularly varying, the crate estimates
//!
//! * the conditional tail distribution `lim P(Y > yx | X > x)`, and at
//!   `y = 1` the tail dependence coefficient, either by counting joint
//!   exceedances or through the quasi-spectral weight `(Y/(yX) ∧ 1)^α`;
//! * the conditional tail expectation coefficient `lim E[Y/x | X > x]` and
//!   its extrapolation to small probabilities;
//! * the extremal dependence measure `lim E[XY/||(X,Y)||^2 | ||(X,Y)|| > x]`;
//! * the tail index `α` of the X margin (Hill).
//!
//! Margins are used as given: the estimators assume `X` and `Y` share the
//! tail index, and no marginal standardisation is applied. Standardising
//! margins would not remove the need to estimate `α`.
//!
//! ```
//! use qstail::{BivariateSample, estimators::tdc_quasispectral};
//!
//! let sample = BivariateSample::new((1..=100).map(|i| {
//!     let x = i as f64;
//!     (x, 0.5 * x)
//! }))
//! .unwrap();
//! let view = sample.order_view();
//! let est = tdc_quasispectral(&view, 10, 1.0, 2.0).unwrap();
//! assert_eq!(est.value, 0.25);
//! ```

pub mod error;
pub mod estimate;
pub mod estimators;
pub mod sample;
pub mod simulate;
pub mod tail_index;
pub mod tep;

pub use error::{Error, Result};
pub use estimate::{EstimatorId, Norm, TailEstimate};
pub use sample::{k_from_fraction, BivariateSample, OrderedView};
pub use tail_index::{hill_estimate, HillEstimate};
