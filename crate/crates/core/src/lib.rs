//! Numerical fractional variational calculus with Caputo derivatives.
//!
//! * [`gridfn`]: uniform grids, sampled functions, trapezoid calculus.
//! * [`fracops`]: RL integrals/derivatives and Caputo derivatives of order
//!   in `(0, 1)`, plus the inverse-operation and integration-by-parts
//!   identities.
//! * [`mittag`]: gamma and Mittag-Leffler functions.
//! * [`exprdsl`]: expression language for Lagrangians `L(x, y, ca, cb)`
//!   with exact first partials by forward-mode dual numbers.
//! * [`varcalc`]: Euler-Lagrange residuals (full, free endpoint,
//!   restricted interval), isoperimetric multipliers and the convexity
//!   sufficiency probe.
//! * [`solver`]: Ritz minimisation, multiplier bisection for the
//!   isoperimetric problem, and order sweeps.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod exprdsl;
pub mod fracops;
pub mod gridfn;
pub mod mittag;
pub mod solver;
pub mod varcalc;

pub use error::{Error, Result};
pub use exec::Exec;
pub use fracops::Order;
pub use gridfn::{Grid, GridFunction};
