//! Direct (Ritz) minimisation and the isoperimetric multiplier search.
//!
//! Trial functions are the boundary line plus a combination of basis
//! functions vanishing at `a` and `b`: sines `sin(kπs)` and, to capture the
//! `x^α` behaviour of fractional extremals, enrichment terms `s^(jα) - s`
//! (and `(1-s)^(jβ) - (1-s)` when the Lagrangian uses `cb`), where
//! `s = (x - a)/(b - a)`.

mod iso;
mod ritz;
mod sweep;

pub use iso::{abnormal_probe, iso_solve, IsoSolveResult, Normality};
pub use ritz::{ritz_minimize, Penalty, RitzResult, RitzSpace};
pub use sweep::{
    alpha_sweep, write_solution_csv, write_summary_csv, write_sweep_csv, SweepEntry, SweepSolution,
    SUMMARY_HEADER,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RitzConfig {
    /// Number of sine modes.
    pub n_basis: usize,
    /// Maximum number of fractional-power enrichment terms per side.
    pub singular_terms: usize,
    pub max_iters: usize,
    /// Relative step of the central-difference coefficient gradient.
    pub grad_step: f64,
    /// Relative objective decrease below which the iteration stops.
    pub tol_obj: f64,
    /// Gradient sup norm below which the iteration stops.
    pub tol_grad: f64,
    /// Relative constraint tolerance of [`iso_solve`], scaled by `max(1, |l|)`.
    pub tol_constraint: f64,
}

impl Default for RitzConfig {
    fn default() -> Self {
        RitzConfig {
            n_basis: 12,
            singular_terms: 12,
            max_iters: 500,
            grad_step: 1e-5,
            tol_obj: 1e-12,
            tol_grad: 1e-8,
            tol_constraint: 1e-6,
        }
    }
}

impl RitzConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("grad_step", self.grad_step),
            ("tol_obj", self.tol_obj),
            ("tol_grad", self.tol_grad),
            ("tol_constraint", self.tol_constraint),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}
