use std::io::Write;

use super::{iso_solve, ritz_minimize, RitzConfig};
use crate::error::Result;
use crate::exec::Exec;
use crate::fracops::Order;
use crate::gridfn::{fmt_f64, GridFunction};
use crate::varcalc::{el_residual_restricted, IsoConstraint, Tolerance, VariationalProblem};

pub const SUMMARY_HEADER: &str = "alpha,lambda,objective,constraint_residual,el_sup,converged";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSolution {
    pub y: GridFunction,
    /// Multiplier, for constrained problems.
    pub lambda: Option<f64>,
    pub objective: f64,
    pub constraint_residual: Option<f64>,
    /// Largest interior sup norm of the (augmented) residual.
    pub el_sup: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub alpha: Order,
    pub outcome: Result<SweepSolution>,
}

fn solve_one(
    problem: VariationalProblem,
    constraint: Option<IsoConstraint>,
    cfg: &RitzConfig,
    bracket: (f64, f64),
) -> Result<SweepSolution> {
    match constraint {
        Some(c) => {
            let r = iso_solve(&problem, &c, cfg, bracket)?;
            Ok(SweepSolution {
                lambda: Some(r.multipliers.lambda),
                objective: r.objective,
                constraint_residual: Some(r.constraint_residual),
                el_sup: r.el_report.max_sup(),
                converged: r.converged,
                y: r.y,
            })
        }
        None => {
            let r = ritz_minimize(&problem, cfg, None)?;
            let el = el_residual_restricted(&problem, &r.y, Tolerance::Adaptive)?;
            Ok(SweepSolution {
                lambda: None,
                objective: r.objective,
                constraint_residual: None,
                el_sup: el.max_sup(),
                converged: r.converged,
                y: r.y,
            })
        }
    }
}

/// Independent solves, one per order, built by `template`. Failures are
/// recorded per entry; results follow the order of `alphas`.
pub fn alpha_sweep<F>(
    alphas: &[Order],
    template: F,
    cfg: &RitzConfig,
    bracket: (f64, f64),
    exec: Exec,
) -> Vec<SweepEntry>
where
    F: Fn(Order) -> Result<(VariationalProblem, Option<IsoConstraint>)> + Sync,
{
    exec.map_slice(alphas, |&alpha| SweepEntry {
        alpha,
        outcome: template(alpha).and_then(|(p, c)| solve_one(p, c, cfg, bracket)),
    })
}

/// `x,y` rows.
pub fn write_solution_csv<W: Write>(mut w: W, y: &GridFunction) -> std::io::Result<()> {
    writeln!(w, "x,y")?;
    for (i, v) in y.values().iter().enumerate() {
        writeln!(w, "{},{}", fmt_f64(y.grid().x(i)), fmt_f64(*v))?;
    }
    Ok(())
}

/// Long format `alpha,x,y` over all successful entries.
pub fn write_sweep_csv<W: Write>(mut w: W, entries: &[SweepEntry]) -> std::io::Result<()> {
    writeln!(w, "alpha,x,y")?;
    for e in entries {
        if let Ok(s) = &e.outcome {
            for (i, v) in s.y.values().iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{}",
                    e.alpha.value(),
                    fmt_f64(s.y.grid().x(i)),
                    fmt_f64(*v)
                )?;
            }
        }
    }
    Ok(())
}

/// One [`SUMMARY_HEADER`] record per entry; failed solves leave the numeric
/// fields empty.
pub fn write_summary_csv<W: Write>(mut w: W, entries: &[SweepEntry]) -> std::io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for e in entries {
        let alpha = e.alpha.value();
        match &e.outcome {
            Ok(s) => writeln!(
                w,
                "{alpha},{},{},{},{},{}",
                s.lambda.map(fmt_f64).unwrap_or_default(),
                fmt_f64(s.objective),
                s.constraint_residual.map(fmt_f64).unwrap_or_default(),
                fmt_f64(s.el_sup),
                s.converged
            )?,
            Err(_) => writeln!(w, "{alpha},,,,,false")?,
        }
    }
    Ok(())
}
