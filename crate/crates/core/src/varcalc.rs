//! Optimality conditions as computable residuals.
//!
//! A [`VariationalProblem`] fixes the Lagrangian, the operator interval
//! `[a, b]`, an integration interval `[A, B] ⊂ [a, b]` (snapped to nodes),
//! the orders and the boundary data. The Caputo values `u = aᶜD_x^α y` and
//! `v = xᶜD_b^β y` are always taken over the full interval `[a, b]`; only
//! the residual's RL derivatives switch to the limits `A`, `B`.

use std::io::Write;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::exprdsl::{BinaryOp, BoundLagrangian, Expr, Lagrangian, Partials, Var};
use crate::fracops::{caputo_left, caputo_right, rl_deriv_left, rl_deriv_right, Order};
use crate::gridfn::{fmt_f64, interior_band, trapezoid, Grid, GridFunction};

/// Relative tolerance for the boundary-value precondition.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct VariationalProblem {
    lagrangian: Lagrangian,
    bound: BoundLagrangian,
    grid: Grid,
    lo: usize,
    hi: usize,
    snap: f64,
    alpha: Order,
    beta: Order,
    ya: f64,
    yb: f64,
}

fn bind(l: &Lagrangian, grid: &Grid) -> Result<BoundLagrangian> {
    l.bind(&grid.nodes())
}

impl VariationalProblem {
    /// Problem on `[a, b]` with `n` nodes and `[A, B] = [a, b]`.
    pub fn new(
        lagrangian: Lagrangian,
        (a, b): (f64, f64),
        (alpha, beta): (Order, Order),
        (ya, yb): (f64, f64),
        n: usize,
    ) -> Result<Self> {
        if !ya.is_finite() || !yb.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "boundary values must be finite (got {ya}, {yb})"
            )));
        }
        let grid = Grid::new(a, b, n)?;
        Ok(VariationalProblem {
            bound: bind(&lagrangian, &grid)?,
            lagrangian,
            grid,
            lo: 0,
            hi: n - 1,
            snap: 0.0,
            alpha,
            beta,
            ya,
            yb,
        })
    }

    /// Restricts integration to `[A, B]`, each snapped to the nearest node.
    /// Nonempty side pieces and the middle piece need at least three nodes.
    pub fn restricted(mut self, big_a: f64, big_b: f64) -> Result<Self> {
        let (a, b) = (self.grid.a(), self.grid.b());
        if !(a <= big_a && big_a < big_b && big_b <= b) {
            return Err(Error::InvalidParameter(format!(
                "need a <= A < B <= b, got a = {a}, A = {big_a}, B = {big_b}, b = {b}"
            )));
        }
        let lo = self.grid.nearest_index(big_a);
        let hi = self.grid.nearest_index(big_b);
        let last = self.grid.len() - 1;
        let short = |m: usize| m > 0 && m < 2;
        if hi < lo + 2 || short(lo) || short(last - hi) {
            return Err(Error::InvalidParameter(format!(
                "[A, B] = [{big_a}, {big_b}] leaves a piece with fewer than 3 nodes on this grid"
            )));
        }
        self.snap = (self.grid.x(lo) - big_a)
            .abs()
            .max((self.grid.x(hi) - big_b).abs());
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    /// Same problem with another Lagrangian.
    pub fn with_lagrangian(&self, lagrangian: Lagrangian) -> Result<Self> {
        Ok(VariationalProblem {
            bound: bind(&lagrangian, &self.grid)?,
            lagrangian,
            ..self.clone()
        })
    }

    pub fn with_boundary(&self, ya: f64, yb: f64) -> Self {
        VariationalProblem {
            ya,
            yb,
            ..self.clone()
        }
    }

    pub fn lagrangian(&self) -> &Lagrangian {
        &self.lagrangian
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn a(&self) -> f64 {
        self.grid.a()
    }

    pub fn b(&self) -> f64 {
        self.grid.b()
    }

    /// Snapped `A`.
    pub fn big_a(&self) -> f64 {
        self.grid.x(self.lo)
    }

    /// Snapped `B`.
    pub fn big_b(&self) -> f64 {
        self.grid.x(self.hi)
    }

    /// Node indices of `A` and `B`.
    pub fn restriction(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn is_restricted(&self) -> bool {
        self.lo != 0 || self.hi != self.grid.len() - 1
    }

    /// Largest distance moved when snapping `A` and `B`.
    pub fn snap_distance(&self) -> f64 {
        self.snap
    }

    pub fn alpha(&self) -> Order {
        self.alpha
    }

    pub fn beta(&self) -> Order {
        self.beta
    }

    pub fn ya(&self) -> f64 {
        self.ya
    }

    pub fn yb(&self) -> f64 {
        self.yb
    }

    /// Straight line through the boundary data.
    pub fn boundary_line(&self) -> GridFunction {
        let (a, b) = (self.a(), self.b());
        let (ya, yb) = (self.ya, self.yb);
        let values = self
            .grid
            .nodes()
            .into_iter()
            .map(|x| ya + (yb - ya) * (x - a) / (b - a))
            .collect();
        GridFunction::from_parts(self.grid, values)
    }

    fn check_grid(&self, y: &GridFunction) -> Result<()> {
        if *y.grid() != self.grid {
            return Err(Error::GridMismatch(format!(
                "function on {:?}, problem on {:?}",
                y.grid(),
                self.grid
            )));
        }
        Ok(())
    }

    fn check_left_boundary(&self, y: &GridFunction) -> Result<()> {
        let tol = BOUNDARY_TOL * self.ya.abs().max(1.0);
        if (y.first() - self.ya).abs() > tol {
            return Err(Error::BoundaryMismatch {
                x: self.a(),
                found: y.first(),
                expected: self.ya,
            });
        }
        Ok(())
    }

    /// Checks `y(a) = y_a` and `y(b) = y_b` to [`BOUNDARY_TOL`].
    pub fn check_boundary(&self, y: &GridFunction) -> Result<()> {
        self.check_grid(y)?;
        self.check_left_boundary(y)?;
        let tol = BOUNDARY_TOL * self.yb.abs().max(1.0);
        if (y.last() - self.yb).abs() > tol {
            return Err(Error::BoundaryMismatch {
                x: self.b(),
                found: y.last(),
                expected: self.yb,
            });
        }
        Ok(())
    }

    /// `10 h^min(α, β) max(1, scale)`.
    pub fn adaptive_tol(&self, scale: f64) -> f64 {
        let order = self.alpha.value().min(self.beta.value());
        10.0 * self.grid.h().powf(order) * scale.max(1.0)
    }
}

/// Full-interval Caputo values `u = aᶜD_x^α y`, `v = xᶜD_b^β y`.
pub fn caputo_fields(
    p: &VariationalProblem,
    y: &GridFunction,
) -> Result<(GridFunction, GridFunction)> {
    p.check_grid(y)?;
    Ok((caputo_left(y, p.alpha), caputo_right(y, p.beta)))
}

/// The `∂₂L`, `∂₃L`, `∂₄L` fields along `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFields {
    pub p2: GridFunction,
    pub p3: GridFunction,
    pub p4: GridFunction,
}

fn evaluate_along(p: &VariationalProblem, y: &GridFunction) -> Result<Vec<Partials>> {
    let (u, v) = caputo_fields(p, y)?;
    let (ys, us, vs) = (y.values(), u.values(), v.values());
    let grid = p.grid;
    let bound = &p.bound;
    Exec::default()
        .map_indices(ys.len(), |i| {
            bound
                .eval_with_partials(i, ys[i], us[i], vs[i])
                .map_err(|e| e.at_node(i, grid.x(i)))
        })
        .into_iter()
        .collect()
}

pub fn partial_fields(p: &VariationalProblem, y: &GridFunction) -> Result<PartialFields> {
    let parts = evaluate_along(p, y)?;
    let field = |k: usize| GridFunction::from_parts(p.grid, parts.iter().map(|q| q.d[k]).collect());
    Ok(PartialFields {
        p2: field(1),
        p3: field(2),
        p4: field(3),
    })
}

/// How an [`ELReport`] decides its verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Fixed(f64),
    /// `10 h^min(α,β) max(1, sup |P2| + |P3| + |P4|)` over the interior band.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ELReport {
    /// On `[a, A]`; `None` when `A = a`.
    pub residual_left: Option<GridFunction>,
    /// On `[A, B]`.
    pub residual_mid: GridFunction,
    /// On `[B, b]`; `None` when `B = b`.
    pub residual_right: Option<GridFunction>,
    /// Interior sup norms (left, mid, right); zero for absent pieces.
    pub sup_norms: [f64; 3],
    /// `sup |P2| + |P3| + |P4|` over the interior band.
    pub scale: f64,
    pub tol: f64,
    pub verdict: bool,
}

pub const EL_SUMMARY_HEADER: &str = "sup_left,sup_mid,sup_right,verdict";

impl ELReport {
    pub fn sup_mid(&self) -> f64 {
        self.sup_norms[1]
    }

    pub fn max_sup(&self) -> f64 {
        self.sup_norms.iter().fold(0.0_f64, |m, &v| m.max(v))
    }

    /// `sup_left,sup_mid,sup_right,verdict`.
    pub fn summary_record(&self) -> String {
        format!(
            "{},{},{},{}",
            fmt_f64(self.sup_norms[0]),
            fmt_f64(self.sup_norms[1]),
            fmt_f64(self.sup_norms[2]),
            self.verdict
        )
    }

    /// Per-node residuals as `segment,x,residual` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "segment,x,residual")?;
        let pieces = [
            ("left", self.residual_left.as_ref()),
            ("mid", Some(&self.residual_mid)),
            ("right", self.residual_right.as_ref()),
        ];
        for (name, piece) in pieces {
            if let Some(f) = piece {
                for (i, v) in f.values().iter().enumerate() {
                    writeln!(w, "{name},{},{}", fmt_f64(f.grid().x(i)), fmt_f64(*v))?;
                }
            }
        }
        Ok(())
    }
}

fn band_sup(f: &GridFunction) -> f64 {
    f.sup_over(interior_band(f.len()))
}

fn band_scale(fields: &PartialFields, band: Range<usize>) -> f64 {
    let (p2, p3, p4) = (fields.p2.values(), fields.p3.values(), fields.p4.values());
    band.map(|i| p2[i].abs() + p3[i].abs() + p4[i].abs())
        .fold(0.0_f64, f64::max)
}

fn sub(f: &GridFunction, lo: usize, hi: usize) -> GridFunction {
    f.slice(lo, hi)
        .expect("restriction pieces have at least 3 nodes")
}

fn difference(l: &[f64], r: &[f64], grid: Grid) -> GridFunction {
    GridFunction::from_parts(grid, l.iter().zip(r).map(|(a, b)| a - b).collect())
}

fn assemble(p: &VariationalProblem, fields: &PartialFields, tol: Tolerance) -> ELReport {
    let used = p.lagrangian.used_variables();
    let (lo, hi, last) = (p.lo, p.hi, p.grid.len() - 1);
    let mid_p2 = sub(&fields.p2, lo, hi);
    let mid_grid = *mid_p2.grid();
    let mut mid = mid_p2.into_values();
    if used.contains(Var::Ca) {
        let d = rl_deriv_right(&sub(&fields.p3, lo, hi), p.alpha);
        for (m, v) in mid.iter_mut().zip(d.values.values()) {
            *m += v;
        }
    }
    if used.contains(Var::Cb) {
        let d = rl_deriv_left(&sub(&fields.p4, lo, hi), p.beta);
        for (m, v) in mid.iter_mut().zip(d.values.values()) {
            *m += v;
        }
    }
    let residual_mid = GridFunction::from_parts(mid_grid, mid);

    let residual_left = (lo > 0).then(|| {
        let grid = p.grid.sub(0, lo).expect("checked at restriction");
        if !used.contains(Var::Ca) {
            return GridFunction::zeros(grid);
        }
        let to_b = rl_deriv_right(&sub(&fields.p3, 0, hi), p.alpha);
        let to_a = rl_deriv_right(&sub(&fields.p3, 0, lo), p.alpha);
        difference(&to_b.values.values()[..=lo], to_a.values.values(), grid)
    });
    let residual_right = (hi < last).then(|| {
        let grid = p.grid.sub(hi, last).expect("checked at restriction");
        if !used.contains(Var::Cb) {
            return GridFunction::zeros(grid);
        }
        let from_a = rl_deriv_left(&sub(&fields.p4, lo, last), p.beta);
        let from_b = rl_deriv_left(&sub(&fields.p4, hi, last), p.beta);
        difference(
            &from_a.values.values()[hi - lo..],
            from_b.values.values(),
            grid,
        )
    });

    let sup_norms = [
        residual_left.as_ref().map_or(0.0, band_sup),
        band_sup(&residual_mid),
        residual_right.as_ref().map_or(0.0, band_sup),
    ];
    let scale = band_scale(fields, p.grid.interior());
    let tol = match tol {
        Tolerance::Fixed(t) => t,
        Tolerance::Adaptive => p.adaptive_tol(scale),
    };
    ELReport {
        residual_left,
        residual_mid,
        residual_right,
        sup_norms,
        scale,
        tol,
        verdict: sup_norms.iter().all(|&s| s <= tol),
    }
}

/// `∂₂L + xD_b^α ∂₃L + aD_x^β ∂₄L` on `[a, b]`. Terms for variables the
/// Lagrangian does not use are skipped.
pub fn el_residual(p: &VariationalProblem, y: &GridFunction, tol: Tolerance) -> Result<ELReport> {
    if p.is_restricted() {
        return Err(Error::Misuse(
            "el_residual needs [A, B] = [a, b]; use el_residual_restricted".into(),
        ));
    }
    el_residual_restricted(p, y, tol)
}

/// The three-piece system on `[a, A]`, `[A, B]`, `[B, b]`. Reduces exactly to
/// [`el_residual`] when `[A, B] = [a, b]`.
pub fn el_residual_restricted(
    p: &VariationalProblem,
    y: &GridFunction,
    tol: Tolerance,
) -> Result<ELReport> {
    p.check_boundary(y)?;
    let fields = partial_fields(p, y)?;
    Ok(assemble(p, &fields, tol))
}

/// Free right endpoint: residual `∂₂L + xD_b^α ∂₃L` and the transversality
/// value `lim_{x→b} xI_b^(1-α) ∂₃L`.
///
/// The limit is extrapolated linearly in `s = (b - x)^(1-α)` from the two
/// nodes before `b`, since the value at `b` itself is an empty integral.
pub fn el_residual_free_endpoint(
    p: &VariationalProblem,
    y: &GridFunction,
    tol: Tolerance,
) -> Result<(ELReport, f64)> {
    if p.lagrangian.uses(Var::Cb) {
        return Err(Error::Misuse(
            "free-endpoint conditions need a Lagrangian without cb".into(),
        ));
    }
    if p.is_restricted() {
        return Err(Error::Misuse(
            "free-endpoint conditions need [A, B] = [a, b]".into(),
        ));
    }
    p.check_grid(y)?;
    p.check_left_boundary(y)?;
    let fields = partial_fields(p, y)?;
    let report = assemble(p, &fields, tol);
    let ip = crate::fracops::rl_integral_right(&fields.p3, p.alpha.complement());
    let n = ip.len();
    let b = p.b();
    let s = |i: usize| (b - p.grid.x(i)).powf(1.0 - p.alpha.value());
    let (s1, s2) = (s(n - 2), s(n - 3));
    let (v1, v2) = (ip.values()[n - 2], ip.values()[n - 3]);
    let transversality = v1 - s1 * (v2 - v1) / (s2 - s1);
    Ok((report, transversality))
}

/// Lagrange multipliers `(λ₀, λ)` of the isoperimetric problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multipliers {
    pub lambda0: f64,
    pub lambda: f64,
    pub normal: bool,
}

impl Multipliers {
    /// `(1, λ)`.
    pub fn normal(lambda: f64) -> Self {
        Multipliers {
            lambda0: 1.0,
            lambda,
            normal: true,
        }
    }

    /// General pair; rejects `(0, 0)`.
    pub fn abnormal(lambda0: f64, lambda: f64) -> Result<Self> {
        if lambda0 == 0.0 && lambda == 0.0 {
            return Err(Error::InvalidParameter(
                "multipliers (λ₀, λ) must not both vanish".into(),
            ));
        }
        Ok(Multipliers {
            lambda0,
            lambda,
            normal: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoConstraint {
    pub g: Lagrangian,
    pub target: f64,
}

fn scaled(c: f64, e: &Expr) -> Option<Expr> {
    if c == 0.0 {
        None
    } else if c == 1.0 {
        Some(e.clone())
    } else {
        Some(Expr::binary(BinaryOp::Mul, Expr::Const(c), e.clone()))
    }
}

/// `λ₀ L + λ g` at the AST level (`λ₀ = 1` for normal multipliers).
pub fn augment(l: &Lagrangian, g: &Lagrangian, m: Multipliers) -> Result<Lagrangian> {
    let lambda0 = if m.normal { 1.0 } else { m.lambda0 };
    let expr = match (scaled(lambda0, l.expr()), scaled(m.lambda, g.expr())) {
        (Some(a), Some(b)) => Expr::binary(BinaryOp::Add, a, b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => Expr::Const(0.0),
    };
    Lagrangian::new(expr)
}

/// `∫_A^B g(x, y, u, v) dx` by the trapezoid rule.
pub fn constraint_value(g: &Lagrangian, p: &VariationalProblem, y: &GridFunction) -> Result<f64> {
    let q = p.with_lagrangian(g.clone())?;
    integral_of(&q, y)
}

/// `∫_A^B L[y] dx` for the problem's own Lagrangian.
pub fn objective_value(p: &VariationalProblem, y: &GridFunction) -> Result<f64> {
    integral_of(p, y)
}

fn integral_of(p: &VariationalProblem, y: &GridFunction) -> Result<f64> {
    let (u, v) = caputo_fields(p, y)?;
    let (ys, us, vs) = (y.values(), u.values(), v.values());
    let grid = p.grid;
    let vals = (p.lo..=p.hi)
        .map(|i| {
            p.bound
                .eval(i, ys[i], us[i], vs[i])
                .map_err(|e| e.at_node(i, grid.x(i)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(&vals, grid.h()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalCheck {
    pub extremal: bool,
    /// Largest interior sup norm of g's residual.
    pub sup: f64,
    pub tol: f64,
}

impl ExtremalCheck {
    /// `tol - sup`; positive when `y` is an extremal of the constraint.
    pub fn margin(&self) -> f64 {
        self.tol - self.sup
    }
}

/// Whether `y` annihilates the Euler-Lagrange expression of `g`.
pub fn iso_extremal_check(
    g: &Lagrangian,
    p: &VariationalProblem,
    y: &GridFunction,
    tol: Tolerance,
) -> Result<ExtremalCheck> {
    let q = p.with_lagrangian(g.clone())?;
    let r = el_residual_restricted(&q, y, tol)?;
    Ok(ExtremalCheck {
        extremal: r.verdict,
        sup: r.max_sup(),
        tol: r.tol,
    })
}

/// Sampling box for the convexity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl ProbeBox {
    /// `x ∈ [a, b]` and `y, u, v ∈ ±2 max(1, sup |y|, sup |u|, sup |v|)`.
    pub fn around(p: &VariationalProblem, y: &GridFunction) -> Result<ProbeBox> {
        let (u, v) = caputo_fields(p, y)?;
        let r = 2.0
            * [y.norms().sup, u.norms().sup, v.norms().sup]
                .into_iter()
                .fold(1.0_f64, f64::max);
        Ok(ProbeBox {
            x: (p.a(), p.b()),
            y: (-r, r),
            u: (-r, r),
            v: (-r, r),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample {
    /// Base point `(x, y, u, v)`.
    pub point: [f64; 4],
    /// Increment `(y₁, u₁, v₁)`.
    pub increment: [f64; 3],
    /// `f(p + h) - f(p) - ∇f·h`, negative here.
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityOutcome {
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
    /// Draws where `f` could not be evaluated.
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub bounds: ProbeBox,
    pub samples: usize,
    pub seed: u64,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

fn increment(rng: &mut ChaCha8Rng) -> f64 {
    let mag = 10f64.powf(rng.gen_range(-3.0..=0.0));
    if rng.gen::<bool>() {
        mag
    } else {
        -mag
    }
}

enum Draw {
    Ok,
    Skipped,
    Violation(Counterexample),
}

fn draw(f: &Lagrangian, bounds: &ProbeBox, seed: u64, i: usize) -> Draw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let point = [
        uniform(&mut rng, bounds.x),
        uniform(&mut rng, bounds.y),
        uniform(&mut rng, bounds.u),
        uniform(&mut rng, bounds.v),
    ];
    let inc = [
        increment(&mut rng),
        increment(&mut rng),
        increment(&mut rng),
    ];
    let [x, y, u, v] = point;
    let (base, moved) = match (
        f.eval_with_partials(x, y, u, v),
        f.eval(x, y + inc[0], u + inc[1], v + inc[2]),
    ) {
        (Ok(b), Ok(m)) => (b, m),
        _ => return Draw::Skipped,
    };
    let linear = base.d[1] * inc[0] + base.d[2] * inc[1] + base.d[3] * inc[2];
    let slack = moved - base.value - linear;
    let scale = 1.0_f64
        .max(moved.abs())
        .max(base.value.abs())
        .max(linear.abs());
    if slack >= -1e-9 * scale {
        Draw::Ok
    } else {
        Draw::Violation(Counterexample {
            point,
            increment: inc,
            slack,
        })
    }
}

/// Samples the first-order convexity inequality in `(y, u, v)`. Every draw
/// has its own seeded stream, so results do not depend on scheduling.
pub fn convexity_probe(f: &Lagrangian, cfg: &ProbeConfig) -> Result<ConvexityOutcome> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter(
            "convexity probe needs samples >= 1".into(),
        ));
    }
    let draws = Exec::default().map_indices(cfg.samples, |i| draw(f, &cfg.bounds, cfg.seed, i));
    let mut skipped = 0;
    for d in draws {
        match d {
            Draw::Ok => {}
            Draw::Skipped => skipped += 1,
            Draw::Violation(c) => {
                return Ok(ConvexityOutcome {
                    pass: false,
                    counterexample: Some(c),
                    skipped,
                })
            }
        }
    }
    Ok(ConvexityOutcome {
        pass: true,
        counterexample: None,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SufficiencyReport {
    pub convex_l: ConvexityOutcome,
    /// Probe of `λ g`, when a constraint is given.
    pub convex_g: Option<ConvexityOutcome>,
    /// Residual of the augmented Lagrangian.
    pub el: ELReport,
    pub verdict: bool,
}

/// Convexity of `L` (and of `λ g`) plus a small Euler-Lagrange residual of
/// `L + λ g` at `y`.
pub fn sufficiency_report(
    p: &VariationalProblem,
    constraint: Option<(&Lagrangian, Multipliers)>,
    y: &GridFunction,
    probe: &ProbeConfig,
    tol: Tolerance,
) -> Result<SufficiencyReport> {
    let convex_l = convexity_probe(&p.lagrangian, probe)?;
    let (convex_g, augmented) = match constraint {
        Some((g, m)) => {
            let lg = augment(
                g,
                g,
                Multipliers {
                    lambda0: 0.0,
                    lambda: m.lambda,
                    normal: false,
                },
            )?;
            let outcome = convexity_probe(&lg, probe)?;
            (
                Some(outcome),
                p.with_lagrangian(augment(&p.lagrangian, g, m)?)?,
            )
        }
        None => (None, p.clone()),
    };
    let el = el_residual_restricted(&augmented, y, tol)?;
    let verdict = convex_l.pass && convex_g.is_none_or(|c| c.pass) && el.verdict;
    Ok(SufficiencyReport {
        convex_l,
        convex_g,
        el,
        verdict,
    })
}
