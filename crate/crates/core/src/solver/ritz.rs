use super::RitzConfig;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::exprdsl::{BoundLagrangian, Lagrangian, Var};
use crate::fracops::{caputo_left, caputo_right};
use crate::gridfn::{trapezoid, Grid, GridFunction};
use crate::varcalc::VariationalProblem;

/// Optional quadratic penalty `weight (∫_A^B g[y] dx - target)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Penalty {
    pub g: Lagrangian,
    pub target: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzResult {
    pub y: GridFunction,
    pub coefficients: Vec<f64>,
    /// Minimised value, penalty included.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted iterate, starting at the boundary line.
    pub history: Vec<f64>,
}

/// Samples of a trial function and of its two Caputo images.
#[derive(Debug, Clone, PartialEq)]
struct Triple {
    y: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Triple {
    fn of(f: GridFunction, p: &VariationalProblem) -> Triple {
        Triple {
            u: caputo_left(&f, p.alpha()).into_values(),
            v: caputo_right(&f, p.beta()).into_values(),
            y: f.into_values(),
        }
    }
}

/// Trial space of a problem: boundary line plus an orthonormalised basis
/// with precomputed Caputo images.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzSpace {
    grid: Grid,
    lo: usize,
    hi: usize,
    line: Triple,
    basis: Vec<Triple>,
}

fn is_integer(t: f64) -> bool {
    (t - t.round()).abs() < 1e-9
}

fn enrichment(order: f64, max_terms: usize) -> Vec<f64> {
    (1..)
        .map(|j| j as f64 * order)
        .take_while(|&e| e < 3.0)
        .filter(|&e| !is_integer(e))
        .take(max_terms)
        .collect()
}

impl RitzSpace {
    pub fn new(p: &VariationalProblem, cfg: &RitzConfig) -> Result<RitzSpace> {
        let grid = *p.grid();
        let (a, b) = (grid.a(), grid.b());
        let s: Vec<f64> = grid.nodes().iter().map(|x| (x - a) / (b - a)).collect();
        let mut raw: Vec<Vec<f64>> = Vec::new();
        for k in 1..=cfg.n_basis {
            let w = k as f64 * std::f64::consts::PI;
            raw.push(s.iter().map(|&t| (w * t).sin()).collect());
        }
        for e in enrichment(p.alpha().value(), cfg.singular_terms) {
            raw.push(s.iter().map(|&t| t.powf(e) - t).collect());
        }
        if p.lagrangian().uses(Var::Cb) {
            for e in enrichment(p.beta().value(), cfg.singular_terms) {
                raw.push(s.iter().map(|&t| (1.0 - t).powf(e) - (1.0 - t)).collect());
            }
        }
        for f in &mut raw {
            // exact zeros at the ends
            f[0] = 0.0;
            let last = f.len() - 1;
            f[last] = 0.0;
        }
        let images: Vec<Triple> = Exec::default().map_slice(&raw, |f| {
            Triple::of(GridFunction::new(grid, f.clone()).expect("finite"), p)
        });
        let (lo, hi) = p.restriction();
        Ok(RitzSpace {
            grid,
            lo,
            hi,
            line: Triple::of(p.boundary_line(), p),
            basis: orthonormalise(images, grid.h(), p.lagrangian().uses(Var::Cb)),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn combine(&self, c: &[f64], range: std::ops::Range<usize>) -> Triple {
        let mut t = Triple {
            y: self.line.y[range.clone()].to_vec(),
            u: self.line.u[range.clone()].to_vec(),
            v: self.line.v[range.clone()].to_vec(),
        };
        for (ck, phi) in c.iter().zip(&self.basis) {
            if *ck == 0.0 {
                continue;
            }
            for (dst, src) in [(&mut t.y, &phi.y), (&mut t.u, &phi.u), (&mut t.v, &phi.v)] {
                for (d, s) in dst.iter_mut().zip(&src[range.clone()]) {
                    *d += ck * s;
                }
            }
        }
        t
    }

    /// Trial function for coefficients `c` on the whole grid.
    pub fn trial(&self, c: &[f64]) -> GridFunction {
        let t = self.combine(c, 0..self.grid.len());
        GridFunction::from_parts(self.grid, t.y)
    }

    fn integral(&self, l: &BoundLagrangian, t: &Triple) -> Result<f64> {
        let vals = (0..t.y.len())
            .map(|k| l.eval(self.lo + k, t.y[k], t.u[k], t.v[k]))
            .collect::<Result<Vec<f64>>>()?;
        Ok(trapezoid(&vals, self.grid.h()))
    }

    /// `∫_A^B l[y_c] dx`.
    pub(crate) fn functional(&self, l: &BoundLagrangian, c: &[f64]) -> Result<f64> {
        let t = self.combine(c, self.lo..self.hi + 1);
        self.integral(l, &t)
    }
}

fn weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

/// Modified Gram-Schmidt (two passes) in `<φ,ψ> + <uφ,uψ> (+ <vφ,vψ>)`;
/// near-dependent vectors are dropped.
fn orthonormalise(raw: Vec<Triple>, h: f64, with_v: bool) -> Vec<Triple> {
    let Some(first) = raw.first() else {
        return Vec::new();
    };
    let w = weights(first.y.len(), h);
    let dot = |a: &Triple, b: &Triple| -> f64 {
        let mut s = 0.0;
        for i in 0..w.len() {
            let mut t = a.y[i] * b.y[i] + a.u[i] * b.u[i];
            if with_v {
                t += a.v[i] * b.v[i];
            }
            s += w[i] * t;
        }
        s
    };
    let axpy = |dst: &mut Triple, c: f64, src: &Triple| {
        for (d, s) in [
            (&mut dst.y, &src.y),
            (&mut dst.u, &src.u),
            (&mut dst.v, &src.v),
        ] {
            for (x, y) in d.iter_mut().zip(s) {
                *x += c * y;
            }
        }
    };
    let mut out: Vec<Triple> = Vec::new();
    for mut f in raw {
        let norm0 = dot(&f, &f).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &f);
                axpy(&mut f, -c, q);
            }
        }
        let norm = dot(&f, &f).sqrt();
        if norm <= 1e-8 * norm0 {
            continue;
        }
        let inv = 1.0 / norm;
        for v in [&mut f.y, &mut f.u, &mut f.v] {
            v.iter_mut().for_each(|x| *x *= inv);
        }
        out.push(f);
    }
    out
}

pub(crate) struct Objective<'a> {
    pub space: &'a RitzSpace,
    pub l: BoundLagrangian,
    pub penalty: Option<(BoundLagrangian, f64, f64)>,
}

impl Objective<'_> {
    pub fn new<'s>(
        space: &'s RitzSpace,
        p: &VariationalProblem,
        l: &Lagrangian,
        penalty: Option<&Penalty>,
    ) -> Result<Objective<'s>> {
        let xs = p.grid().nodes();
        Ok(Objective {
            space,
            l: l.bind(&xs)?,
            penalty: match penalty {
                Some(pen) => Some((pen.g.bind(&xs)?, pen.target, pen.weight)),
                None => None,
            },
        })
    }

    pub fn eval(&self, c: &[f64]) -> Result<f64> {
        let s = self.space;
        let t = s.combine(c, s.lo..s.hi + 1);
        let mut j = s.integral(&self.l, &t)?;
        if let Some((g, target, weight)) = &self.penalty {
            let i = s.integral(g, &t)?;
            j += weight * (i - target) * (i - target);
        }
        Ok(j)
    }

    /// Non-finite values and evaluation failures count as `+∞`.
    fn value(&self, c: &[f64]) -> f64 {
        match self.eval(c) {
            Ok(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    }

    fn gradient(&self, c: &[f64], step: f64) -> Vec<f64> {
        Exec::default().map_indices(c.len(), |k| {
            let h = step * c[k].abs().max(1.0);
            let mut cp = c.to_vec();
            cp[k] = c[k] + h;
            let fp = self.value(&cp);
            cp[k] = c[k] - h;
            let fm = self.value(&cp);
            (fp - fm) / (2.0 * h)
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// BFGS with central-difference gradients and Armijo backtracking. Only
/// steps that decrease the objective are accepted.
pub(crate) fn bfgs(obj: &Objective<'_>, cfg: &RitzConfig) -> Result<RitzResult> {
    let m = obj.space.dim();
    let mut c = vec![0.0; m];
    let j0 = obj.eval(&c)?;
    if !j0.is_finite() {
        return Err(Error::ObjectiveNonFinite(j0));
    }
    let mut j = j0;
    let mut history = vec![j];
    let finish =
        |c: Vec<f64>, j: f64, iterations: usize, converged: bool, history: Vec<f64>| RitzResult {
            y: obj.space.trial(&c),
            coefficients: c,
            objective: j,
            iterations,
            converged,
            history,
        };
    if m == 0 {
        return Ok(finish(c, j, 0, true, history));
    }
    let mut g = obj.gradient(&c, cfg.grad_step);
    let mut hinv = identity(m);
    let mut fresh = true;
    for iter in 0..cfg.max_iters {
        if sup(&g) <= cfg.tol_grad {
            return Ok(finish(c, j, iter, true, history));
        }
        let mut d = mat_vec(&hinv, &g).iter().map(|v| -v).collect::<Vec<_>>();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hinv = identity(m);
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = c.iter().zip(&d).map(|(ci, di)| ci + t * di).collect();
            let jt = obj.value(&trial);
            if jt <= j + 1e-4 * t * slope && jt < j {
                accepted = Some((trial, jt));
                break;
            }
            t *= 0.5;
        }
        let Some((c_new, j_new)) = accepted else {
            if !fresh {
                // retry from steepest descent
                hinv = identity(m);
                fresh = true;
                continue;
            }
            // no decrease along -g: at the noise floor of the FD gradient
            return Ok(finish(c, j, iter, true, history));
        };
        let g_new = obj.gradient(&c_new, cfg.grad_step);
        let s: Vec<f64> = c_new.iter().zip(&c).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&yv, &yv).sqrt() {
            if fresh {
                let scale = sy / dot(&yv, &yv);
                hinv = identity(m)
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v * scale).collect())
                    .collect();
            }
            bfgs_update(&mut hinv, &s, &yv, sy);
            fresh = false;
        }
        let decrease = j - j_new;
        c = c_new;
        g = g_new;
        j = j_new;
        history.push(j);
        if decrease <= cfg.tol_obj * j.abs().max(1.0) {
            return Ok(finish(c, j, iter + 1, true, history));
        }
    }
    let iters = cfg.max_iters;
    Ok(finish(c, j, iters, false, history))
}

fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| (0..m).map(|k| if i == k { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, x)).collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    // H+ = (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    let m = s.len();
    for i in 0..m {
        for k in 0..m {
            h[i][k] += -rho * (s[i] * hy[k] + hy[i] * s[k]) + (rho * rho * yhy + rho) * s[i] * s[k];
        }
    }
}

/// Minimises the discretised functional of `p` (plus an optional penalty)
/// over the trial space, starting from the boundary line.
pub fn ritz_minimize(
    p: &VariationalProblem,
    cfg: &RitzConfig,
    penalty: Option<&Penalty>,
) -> Result<RitzResult> {
    cfg.validate()?;
    let space = RitzSpace::new(p, cfg)?;
    let obj = Objective::new(&space, p, p.lagrangian(), penalty)?;
    bfgs(&obj, cfg)
}
