//! Riemann-Liouville integrals and derivatives and Caputo derivatives of
//! order `0 < α < 1` on uniform grids.
//!
//! * RL integrals use the product-trapezoid rule: `f` is replaced by its
//!   piecewise-linear interpolant and the kernel `(x - t)^(α-1)` is
//!   integrated exactly against it. Exact on piecewise-linear data.
//! * Caputo derivatives use the L1 scheme, `I^(1-α)` applied exactly to the
//!   (piecewise-constant) derivative of the same interpolant. Exact on
//!   linear data, order `2 - α` on smooth data.
//! * RL derivatives are the Caputo derivative plus the closed-form endpoint
//!   correction `f(a) (x - a)^(-α) / Γ(1 - α)`.
//!
//! Right operators are the left ones conjugated by the reflection
//! `t -> a + b - t`. All kernels are `O(n^2)` direct sums, parallel over
//! output nodes.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gridfn::{trapezoid, GridFunction};
use crate::mittag::gamma;

/// Fractional order restricted to the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Order(value))
        } else {
            Err(Error::InvalidOrder(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - α`, which is again a valid order.
    pub fn complement(self) -> Order {
        Order(1.0 - self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    LeftRLIntegral,
    RightRLIntegral,
    LeftRLDerivative,
    RightRLDerivative,
    LeftCaputo,
    RightCaputo,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::LeftRLIntegral,
        OperatorKind::RightRLIntegral,
        OperatorKind::LeftRLDerivative,
        OperatorKind::RightRLDerivative,
        OperatorKind::LeftCaputo,
        OperatorKind::RightCaputo,
    ];
}

/// RL derivative samples. The endpoint where the derivative is unbounded
/// (when `f` does not vanish there) is flagged and holds `0.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RlDerivative {
    pub values: GridFunction,
    pub unbounded: Option<usize>,
}

// ---------------------------------------------------------------------------
// raw kernels on equally spaced samples

fn integral_weights(n: usize, alpha: f64) -> Vec<f64> {
    // w[k] = (k+1)^(α+1) + (k-1)^(α+1) - 2 k^(α+1), k >= 1
    let p = alpha + 1.0;
    let mut w = vec![0.0; n.max(2)];
    for (k, wk) in w.iter_mut().enumerate().skip(1) {
        let k = k as f64;
        *wk = (k + 1.0).powf(p) + (k - 1.0).powf(p) - 2.0 * k.powf(p);
    }
    w
}

fn rl_integral_raw(f: &[f64], h: f64, alpha: f64, exec: Exec) -> Vec<f64> {
    let n = f.len();
    let w = integral_weights(n, alpha);
    let c = h.powf(alpha) / gamma(alpha + 2.0).expect("α + 2 is positive");
    exec.map_indices(n, |i| {
        if i == 0 {
            return 0.0;
        }
        let fi = i as f64;
        let w0 = (fi - 1.0).powf(alpha + 1.0) - (fi - 1.0 - alpha) * fi.powf(alpha);
        let mut s = w0 * f[0];
        for j in 1..i {
            s += w[i - j] * f[j];
        }
        s += f[i];
        c * s
    })
}

fn caputo_l1_raw(f: &[f64], h: f64, alpha: f64, exec: Exec) -> Vec<f64> {
    let n = f.len();
    let beta = 1.0 - alpha;
    // b[m] = (m+1)^(1-α) - m^(1-α)
    let b: Vec<f64> = (0..n)
        .map(|m| (m as f64 + 1.0).powf(beta) - (m as f64).powf(beta))
        .collect();
    let diffs: Vec<f64> = f.windows(2).map(|p| p[1] - p[0]).collect();
    let c = h.powf(-alpha) / gamma(2.0 - alpha).expect("2 - α is positive");
    exec.map_indices(n, |i| {
        let mut s = 0.0;
        for j in 0..i {
            s += b[i - 1 - j] * diffs[j];
        }
        c * s
    })
}

fn reflected<F>(f: &GridFunction, op: F) -> GridFunction
where
    F: FnOnce(&GridFunction) -> GridFunction,
{
    op(&f.reflect()).reflect()
}

// ---------------------------------------------------------------------------
// integrals

pub fn rl_integral_left_with(f: &GridFunction, alpha: Order, exec: Exec) -> GridFunction {
    let values = rl_integral_raw(f.values(), f.grid().h(), alpha.value(), exec);
    GridFunction::from_parts(*f.grid(), values)
}

/// `aI_x^α f` at every node; zero at `a`.
pub fn rl_integral_left(f: &GridFunction, alpha: Order) -> GridFunction {
    rl_integral_left_with(f, alpha, Exec::default())
}

pub fn rl_integral_right_with(f: &GridFunction, alpha: Order, exec: Exec) -> GridFunction {
    reflected(f, |r| rl_integral_left_with(r, alpha, exec))
}

/// `xI_b^α f` at every node; zero at `b`.
pub fn rl_integral_right(f: &GridFunction, alpha: Order) -> GridFunction {
    rl_integral_right_with(f, alpha, Exec::default())
}

// ---------------------------------------------------------------------------
// Caputo derivatives

pub fn caputo_left_with(f: &GridFunction, alpha: Order, exec: Exec) -> GridFunction {
    let values = caputo_l1_raw(f.values(), f.grid().h(), alpha.value(), exec);
    GridFunction::from_parts(*f.grid(), values)
}

/// Left Caputo derivative `aᶜD_x^α f`.
///
/// Assumes `f` samples a function whose derivative is integrable; the
/// value at `a` is the empty integral, 0.
pub fn caputo_left(f: &GridFunction, alpha: Order) -> GridFunction {
    caputo_left_with(f, alpha, Exec::default())
}

pub fn caputo_right_with(f: &GridFunction, alpha: Order, exec: Exec) -> GridFunction {
    reflected(f, |r| caputo_left_with(r, alpha, exec))
}

/// Right Caputo derivative `xᶜD_b^α f = -xI_b^(1-α) f'`.
pub fn caputo_right(f: &GridFunction, alpha: Order) -> GridFunction {
    caputo_right_with(f, alpha, Exec::default())
}

// ---------------------------------------------------------------------------
// Riemann-Liouville derivatives

fn endpoint_correction(
    mut caputo: Vec<f64>,
    f_end: f64,
    distances: impl Iterator<Item = f64>,
    alpha: Order,
    end_index: usize,
) -> (Vec<f64>, Option<usize>) {
    if f_end == 0.0 {
        return (caputo, None);
    }
    let c = f_end / gamma(1.0 - alpha.value()).expect("1 - α is positive");
    for (v, d) in caputo.iter_mut().zip(distances) {
        if d > 0.0 {
            *v += c * d.powf(-alpha.value());
        }
    }
    caputo[end_index] = 0.0;
    (caputo, Some(end_index))
}

pub fn rl_deriv_left_with(f: &GridFunction, alpha: Order, exec: Exec) -> RlDerivative {
    let grid = *f.grid();
    let caputo = caputo_left_with(f, alpha, exec).into_values();
    let a = grid.a();
    let dist = grid.nodes().into_iter().map(move |x| x - a);
    let (values, unbounded) = endpoint_correction(caputo, f.first(), dist, alpha, 0);
    RlDerivative {
        values: GridFunction::from_parts(grid, values),
        unbounded,
    }
}

/// Left RL derivative via `aD_x^α f = aᶜD_x^α f + f(a) (x - a)^(-α) / Γ(1 - α)`.
/// Equal to [`caputo_left`] node for node when `f(a) = 0`.
pub fn rl_deriv_left(f: &GridFunction, alpha: Order) -> RlDerivative {
    rl_deriv_left_with(f, alpha, Exec::default())
}

pub fn rl_deriv_right_with(f: &GridFunction, alpha: Order, exec: Exec) -> RlDerivative {
    let grid = *f.grid();
    let caputo = caputo_right_with(f, alpha, exec).into_values();
    let b = grid.b();
    let dist = grid.nodes().into_iter().map(move |x| b - x);
    let end = grid.len() - 1;
    let (values, unbounded) = endpoint_correction(caputo, f.last(), dist, alpha, end);
    RlDerivative {
        values: GridFunction::from_parts(grid, values),
        unbounded,
    }
}

/// Right RL derivative via `xD_b^α f = xᶜD_b^α f + f(b) (b - x)^(-α) / Γ(1 - α)`.
pub fn rl_deriv_right(f: &GridFunction, alpha: Order) -> RlDerivative {
    rl_deriv_right_with(f, alpha, Exec::default())
}

/// Applies one of the six operators; RL derivatives carry a `0.0`
/// placeholder at an unbounded endpoint.
pub fn apply(kind: OperatorKind, f: &GridFunction, alpha: Order) -> GridFunction {
    match kind {
        OperatorKind::LeftRLIntegral => rl_integral_left(f, alpha),
        OperatorKind::RightRLIntegral => rl_integral_right(f, alpha),
        OperatorKind::LeftRLDerivative => rl_deriv_left(f, alpha).values,
        OperatorKind::RightRLDerivative => rl_deriv_right(f, alpha).values,
        OperatorKind::LeftCaputo => caputo_left(f, alpha),
        OperatorKind::RightCaputo => caputo_right(f, alpha),
    }
}

// ---------------------------------------------------------------------------
// identities

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseResiduals {
    /// `‖ aᶜD^α aI^α f - f ‖` over the interior band.
    pub caputo_of_integral: f64,
    /// `‖ aI^α aᶜD^α f - (f - f(a)) ‖` over the interior band.
    pub integral_of_caputo: f64,
}

/// Both inverse-operation identities for the left operators.
pub fn check_inverse_identities(f: &GridFunction, alpha: Order) -> InverseResiduals {
    let band = f.grid().interior();
    let ci = caputo_left(&rl_integral_left(f, alpha), alpha);
    let res1 = ci.values()[band.clone()]
        .iter()
        .zip(&f.values()[band.clone()])
        .fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()));
    let ic = rl_integral_left(&caputo_left(f, alpha), alpha);
    let fa = f.first();
    let res2 = ic.values()[band.clone()]
        .iter()
        .zip(&f.values()[band])
        .fold(0.0_f64, |m, (p, q)| m.max((p - (q - fa)).abs()));
    InverseResiduals {
        caputo_of_integral: res1,
        integral_of_caputo: res2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IbpVariant {
    /// `∫ g aᶜD^α f = ∫ f xD_b^α g`, for `f(a) = f(b) = 0`.
    IP1,
    /// `∫ g xᶜD_b^α f = ∫ f aD^α g`, for `f(a) = f(b) = 0`.
    IP2,
    /// `∫ g aᶜD^α f = ∫ f xD_b^α g + [xI_b^(1-α) g · f]_a^b`.
    IP3,
    /// `∫ g xᶜD_b^α f = ∫ f aD^α g - [aI^(1-α) g · f]_a^b`.
    IP4,
}

impl std::str::FromStr for IbpVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "IP1" => Ok(IbpVariant::IP1),
            "IP2" => Ok(IbpVariant::IP2),
            "IP3" => Ok(IbpVariant::IP3),
            "IP4" => Ok(IbpVariant::IP4),
            other => Err(Error::InvalidParameter(format!(
                "unknown integration-by-parts variant `{other}` (expected IP1..IP4)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Tolerance for "f vanishes at the endpoints" in IP1/IP2.
pub const IBP_BOUNDARY_TOL: f64 = 1e-12;

/// Both sides of a fractional integration-by-parts formula.
///
/// The RL derivative of `g` has an integrable endpoint singularity
/// `g(end) |x - end|^(-α) / Γ(1-α)`; its integral against `f` is exactly an
/// RL integral of `f` of order `1 - α` evaluated at the far endpoint, so it
/// is added by product integration rather than by the trapezoid rule.
pub fn check_integration_by_parts(
    f: &GridFunction,
    g: &GridFunction,
    alpha: Order,
    variant: IbpVariant,
) -> Result<IbpCheck> {
    f.check_same_grid(g)?;
    let (fa, fb) = (f.first(), f.last());
    if matches!(variant, IbpVariant::IP1 | IbpVariant::IP2)
        && (fa.abs() > IBP_BOUNDARY_TOL || fb.abs() > IBP_BOUNDARY_TOL)
    {
        return Err(Error::BoundaryViolation { fa, fb });
    }
    let h = f.grid().h();
    let comp = alpha.complement();
    let product_integral = |p: &GridFunction, q: &GridFunction| -> f64 {
        let prod: Vec<f64> = p
            .values()
            .iter()
            .zip(q.values())
            .map(|(x, y)| x * y)
            .collect();
        trapezoid(&prod, h)
    };
    let (lhs, rhs) = match variant {
        IbpVariant::IP1 | IbpVariant::IP3 => {
            let lhs = product_integral(g, &caputo_left(f, alpha));
            let regular = product_integral(f, &caputo_right(g, alpha));
            let singular = g.last() * rl_integral_left(f, comp).last();
            let mut rhs = regular + singular;
            if variant == IbpVariant::IP3 {
                // [xI_b^(1-α) g · f]_a^b, the upper term vanishes
                rhs -= rl_integral_right(g, comp).first() * fa;
            }
            (lhs, rhs)
        }
        IbpVariant::IP2 | IbpVariant::IP4 => {
            let lhs = product_integral(g, &caputo_right(f, alpha));
            let regular = product_integral(f, &caputo_left(g, alpha));
            let singular = g.first() * rl_integral_right(f, comp).first();
            let mut rhs = regular + singular;
            if variant == IbpVariant::IP4 {
                rhs -= rl_integral_left(g, comp).last() * fb;
            }
            (lhs, rhs)
        }
    };
    Ok(IbpCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}
