use super::ritz::{bfgs, Objective, RitzResult, RitzSpace};
use super::RitzConfig;
use crate::error::{Error, Result};
use crate::gridfn::GridFunction;
use crate::varcalc::{
    augment, constraint_value, el_residual_restricted, iso_extremal_check, objective_value,
    ELReport, ExtremalCheck, IsoConstraint, Multipliers, Tolerance, VariationalProblem,
};

/// Maximum bisection steps on the multiplier.
pub const MAX_BISECTIONS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct IsoSolveResult {
    pub y: GridFunction,
    pub multipliers: Multipliers,
    /// `|I(y) - l|`.
    pub constraint_residual: f64,
    /// `J(y)` of the unaugmented Lagrangian.
    pub objective: f64,
    /// Residual of `F = L + λ g` at `y`, adaptive tolerance.
    pub el_report: ELReport,
    /// Bisection steps taken.
    pub iterations: usize,
    pub converged: bool,
}

struct Probe {
    lambda: f64,
    phi: f64,
    inner: RitzResult,
}

struct Phi<'a> {
    p: &'a VariationalProblem,
    c: &'a IsoConstraint,
    cfg: &'a RitzConfig,
    space: RitzSpace,
    g: crate::exprdsl::BoundLagrangian,
}

impl Phi<'_> {
    fn at(&self, lambda: f64) -> Result<Probe> {
        let f = augment(self.p.lagrangian(), &self.c.g, Multipliers::normal(lambda))?;
        let obj = Objective::new(&self.space, self.p, &f, None)?;
        let inner = bfgs(&obj, self.cfg)?;
        let phi = self.space.functional(&self.g, &inner.coefficients)? - self.c.target;
        Ok(Probe { lambda, phi, inner })
    }
}

fn same_sign(a: f64, b: f64) -> bool {
    a != 0.0 && b != 0.0 && a.signum() == b.signum()
}

/// Bisection on `φ(λ) = I(y_λ) - l`, `y_λ` the Ritz minimiser of `L + λ g`.
/// Without a sign change the bracket is widened once by 4x about its
/// centre.
pub fn iso_solve(
    p: &VariationalProblem,
    c: &IsoConstraint,
    cfg: &RitzConfig,
    bracket: (f64, f64),
) -> Result<IsoSolveResult> {
    cfg.validate()?;
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "multiplier bracket must be finite with lo < hi, got ({lo}, {hi})"
        )));
    }
    let phi = Phi {
        p,
        c,
        cfg,
        space: RitzSpace::new(p, cfg)?,
        g: c.g.bind(&p.grid().nodes())?,
    };
    let tol = cfg.tol_constraint * c.target.abs().max(1.0);

    let mut plo = phi.at(lo)?;
    let mut phi_hi = phi.at(hi)?;
    if same_sign(plo.phi, phi_hi.phi) {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        lo = mid - 4.0 * half;
        hi = mid + 4.0 * half;
        plo = phi.at(lo)?;
        phi_hi = phi.at(hi)?;
        if same_sign(plo.phi, phi_hi.phi) {
            return Err(Error::BracketFailure {
                lo,
                hi,
                phi_lo: plo.phi,
                phi_hi: phi_hi.phi,
            });
        }
    }

    let lo_sign = plo.phi.signum();
    let mut best = if plo.phi.abs() <= phi_hi.phi.abs() {
        plo
    } else {
        phi_hi
    };
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && best.phi.abs() > tol {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let probe = phi.at(mid)?;
        if probe.phi.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        if probe.phi.abs() <= best.phi.abs() {
            best = probe;
        }
    }

    let multipliers = Multipliers::normal(best.lambda);
    let f = augment(p.lagrangian(), &c.g, multipliers)?;
    let y = best.inner.y;
    let el_report = el_residual_restricted(&p.with_lagrangian(f)?, &y, Tolerance::Adaptive)?;
    let constraint_residual = (constraint_value(&c.g, p, &y)? - c.target).abs();
    Ok(IsoSolveResult {
        objective: objective_value(p, &y)?,
        converged: best.inner.converged && constraint_residual <= tol,
        y,
        multipliers,
        constraint_residual,
        el_report,
        iterations,
    })
}

/// Outcome of [`abnormal_probe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normality {
    /// `y` is not an extremal of the constraint: use `(1, λ)` and find `λ`
    /// with [`iso_solve`].
    Normal(ExtremalCheck),
    /// `y` extremises the constraint itself: `(λ₀, λ) = (0, 1)`.
    Abnormal(Multipliers, ExtremalCheck),
}

impl Normality {
    pub fn is_normal(&self) -> bool {
        matches!(self, Normality::Normal(_))
    }

    /// The certificate multipliers; `(1, λ)` with `λ` unknown is `None`.
    pub fn multipliers(&self) -> Option<Multipliers> {
        match self {
            Normality::Normal(_) => None,
            Normality::Abnormal(m, _) => Some(*m),
        }
    }

    pub fn check(&self) -> ExtremalCheck {
        match self {
            Normality::Normal(c) | Normality::Abnormal(_, c) => *c,
        }
    }
}

/// Decides between the normal and abnormal multiplier rules at a feasible
/// candidate. `tol` bounds `|I(y) - l|`; the extremal test uses the
/// adaptive residual tolerance.
pub fn abnormal_probe(
    p: &VariationalProblem,
    c: &IsoConstraint,
    y: &GridFunction,
    tol: f64,
) -> Result<Normality> {
    p.check_boundary(y)?;
    let residual = (constraint_value(&c.g, p, y)? - c.target).abs();
    if residual > tol {
        return Err(Error::ConstraintViolation { residual, tol });
    }
    let check = iso_extremal_check(&c.g, p, y, Tolerance::Adaptive)?;
    Ok(if check.extremal {
        Normality::Abnormal(
            Multipliers {
                lambda0: 0.0,
                lambda: 1.0,
                normal: false,
            },
            check,
        )
    } else {
        Normality::Normal(check)
    })
}
