use std::fmt;

use super::ast::{BinaryOp, Expr, UnaryOp, Var, VarSet};
use super::dual::Dual4;
use super::parser::parse;
use crate::error::{Error, Result};
use crate::mittag::{MlParams, MlSeries};

/// Value and the four first partials `∂L/∂x, ∂L/∂y, ∂L/∂ca, ∂L/∂cb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub value: f64,
    pub d: [f64; 4],
}

impl Partials {
    pub fn partial(&self, v: Var) -> f64 {
        self.d[v.index()]
    }
}

trait Scalar: Copy {
    fn lift(c: f64) -> Self;
    fn input(value: f64, v: Var) -> Self;
    fn value(&self) -> f64;
    fn finite(&self) -> bool;
    fn unary(self, op: UnaryOp) -> Self;
    fn binary(self, op: BinaryOp, o: Self) -> Self;
    fn ml(self, s: &MlSeries) -> (Self, bool);
}

impl Scalar for f64 {
    fn lift(c: f64) -> Self {
        c
    }
    fn input(value: f64, _: Var) -> Self {
        value
    }
    fn value(&self) -> f64 {
        *self
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn unary(self, op: UnaryOp) -> Self {
        match op {
            UnaryOp::Neg => -self,
            UnaryOp::Sin => self.sin(),
            UnaryOp::Cos => self.cos(),
            UnaryOp::Exp => self.exp(),
            UnaryOp::Log => self.ln(),
            UnaryOp::Sqrt => self.sqrt(),
            UnaryOp::Abs => self.abs(),
        }
    }
    fn binary(self, op: BinaryOp, o: Self) -> Self {
        match op {
            BinaryOp::Add => self + o,
            BinaryOp::Sub => self - o,
            BinaryOp::Mul => self * o,
            BinaryOp::Div => self / o,
            BinaryOp::Pow => self.powf(o),
        }
    }
    fn ml(self, s: &MlSeries) -> (Self, bool) {
        let v = s.eval(self);
        (v.value, v.converged)
    }
}

impl Scalar for Dual4 {
    fn lift(c: f64) -> Self {
        Dual4::constant(c)
    }
    fn input(value: f64, v: Var) -> Self {
        Dual4::variable(value, v.index())
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn unary(self, op: UnaryOp) -> Self {
        match op {
            UnaryOp::Neg => -self,
            UnaryOp::Sin => self.sin(),
            UnaryOp::Cos => self.cos(),
            UnaryOp::Exp => self.exp(),
            UnaryOp::Log => self.ln(),
            UnaryOp::Sqrt => self.sqrt(),
            UnaryOp::Abs => self.abs(),
        }
    }
    fn binary(self, op: BinaryOp, o: Self) -> Self {
        match op {
            BinaryOp::Add => self + o,
            BinaryOp::Sub => self - o,
            BinaryOp::Mul => self * o,
            BinaryOp::Div => self / o,
            BinaryOp::Pow => self.powd(o),
        }
    }
    fn ml(self, s: &MlSeries) -> (Self, bool) {
        let (v, d) = s.eval_with_derivative(self.value);
        (self.chain(v.value, d), v.converged)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Node>, Box<Expr>),
    Binary(BinaryOp, Box<Node>, Box<Node>, Box<Expr>),
    Ml(MlSeries, Box<Node>, Box<Expr>),
    /// Values of an `x`-only subtree at each bound abscissa.
    Cached(Vec<f64>),
}

fn domain(src: &Expr, reason: &str) -> Error {
    Error::EvalDomain {
        expr: src.to_string(),
        reason: reason.to_string(),
    }
}

impl Node {
    fn compile(e: &Expr) -> Result<Node> {
        Ok(match e {
            Expr::Const(c) => Node::Const(*c),
            Expr::Var(v) => Node::Var(*v),
            Expr::Unary(op, a) => {
                Node::Unary(*op, Box::new(Node::compile(a)?), Box::new(e.clone()))
            }
            Expr::Binary(op, l, r) => Node::Binary(
                *op,
                Box::new(Node::compile(l)?),
                Box::new(Node::compile(r)?),
                Box::new(e.clone()),
            ),
            Expr::Ml { alpha, arg } => Node::Ml(
                MlSeries::new(*alpha, MlParams::default())?,
                Box::new(Node::compile(arg)?),
                Box::new(e.clone()),
            ),
        })
    }

    /// With `x_fixed`, `x` carries no tangent (it is a parameter of the
    /// bound form), so `d[0]` stays zero.
    fn eval<S: Scalar>(&self, at: usize, inputs: &[f64; 4], x_fixed: bool) -> Result<S> {
        let out = match self {
            Node::Const(c) => return Ok(S::lift(*c)),
            Node::Var(Var::X) if x_fixed => return Ok(S::lift(inputs[0])),
            Node::Var(v) => return Ok(S::input(inputs[v.index()], *v)),
            Node::Cached(vals) => return Ok(S::lift(vals[at])),
            Node::Unary(op, a, src) => {
                let a: S = a.eval(at, inputs, x_fixed)?;
                let av = a.value();
                match op {
                    UnaryOp::Log if av < 0.0 => {
                        return Err(domain(src, "log of a negative number"))
                    }
                    UnaryOp::Log if av == 0.0 => return Err(domain(src, "log of zero")),
                    UnaryOp::Sqrt if av < 0.0 => {
                        return Err(domain(src, "sqrt of a negative number"))
                    }
                    _ => {}
                }
                (a.unary(*op), src)
            }
            Node::Binary(op, l, r, src) => {
                let l: S = l.eval(at, inputs, x_fixed)?;
                let r: S = r.eval(at, inputs, x_fixed)?;
                let (lv, rv) = (l.value(), r.value());
                match op {
                    BinaryOp::Div if rv == 0.0 => return Err(domain(src, "division by zero")),
                    BinaryOp::Pow if lv == 0.0 && rv < 0.0 => {
                        return Err(domain(src, "zero raised to a negative power"))
                    }
                    BinaryOp::Pow if lv < 0.0 && rv != rv.trunc() => {
                        return Err(domain(src, "negative base with non-integer exponent"))
                    }
                    _ => {}
                }
                (l.binary(*op, r), src)
            }
            Node::Ml(series, a, src) => {
                let a: S = a.eval(at, inputs, x_fixed)?;
                let (v, converged) = a.ml(series);
                if !converged {
                    return Err(domain(src, "Mittag-Leffler series did not converge"));
                }
                (v, src)
            }
        };
        let (v, src) = out;
        if !v.finite() {
            return Err(domain(src, "non-finite value or derivative"));
        }
        Ok(v)
    }

    /// Replaces x-only subtrees by their values at `xs`.
    fn bind(&self, xs: &[f64]) -> Result<Node> {
        let vars = match self {
            Node::Const(_) | Node::Cached(_) => return Ok(self.clone()),
            Node::Var(_) => None,
            Node::Unary(_, _, src) | Node::Binary(_, _, _, src) | Node::Ml(_, _, src) => {
                Some(src.used_variables())
            }
        };
        if let Some(vars) = vars {
            if vars.iter().all(|v| v == Var::X) {
                let vals = xs
                    .iter()
                    .map(|&x| self.eval::<f64>(0, &[x, 0.0, 0.0, 0.0], true))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Node::Cached(vals));
            }
        }
        Ok(match self {
            Node::Unary(op, a, src) => Node::Unary(*op, Box::new(a.bind(xs)?), src.clone()),
            Node::Binary(op, l, r, src) => Node::Binary(
                *op,
                Box::new(l.bind(xs)?),
                Box::new(r.bind(xs)?),
                src.clone(),
            ),
            Node::Ml(s, a, src) => Node::Ml(s.clone(), Box::new(a.bind(xs)?), src.clone()),
            other => other.clone(),
        })
    }
}

fn check_inputs(inputs: &[f64; 4]) -> Result<()> {
    for (v, &val) in Var::ALL.iter().zip(inputs) {
        if !val.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "input {} = {val} is not finite",
                v.name()
            )));
        }
    }
    Ok(())
}

/// A parsed and compiled Lagrangian. Immutable and `Sync`.
#[derive(Debug, Clone)]
pub struct Lagrangian {
    expr: Expr,
    vars: VarSet,
    root: Node,
}

impl PartialEq for Lagrangian {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl Lagrangian {
    pub fn new(expr: Expr) -> Result<Self> {
        let root = Node::compile(&expr)?;
        Ok(Lagrangian {
            vars: expr.used_variables(),
            expr,
            root,
        })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Lagrangian::new(parse(src)?)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn used_variables(&self) -> VarSet {
        self.vars
    }

    pub fn uses(&self, v: Var) -> bool {
        self.vars.contains(v)
    }

    pub fn eval(&self, x: f64, y: f64, u: f64, v: f64) -> Result<f64> {
        let inputs = [x, y, u, v];
        check_inputs(&inputs)?;
        self.root.eval::<f64>(0, &inputs, false)
    }

    pub fn eval_with_partials(&self, x: f64, y: f64, u: f64, v: f64) -> Result<Partials> {
        let inputs = [x, y, u, v];
        check_inputs(&inputs)?;
        let r: Dual4 = self.root.eval(0, &inputs, false)?;
        Ok(Partials {
            value: r.value,
            d: r.d,
        })
    }

    /// Specialises to fixed abscissae, precomputing every subtree that depends
    /// on `x` alone.
    pub fn bind(&self, xs: &[f64]) -> Result<BoundLagrangian> {
        Ok(BoundLagrangian {
            xs: xs.to_vec(),
            root: self.root.bind(xs)?,
        })
    }
}

impl fmt::Display for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// A [`Lagrangian`] bound to a list of abscissae.
#[derive(Debug, Clone)]
pub struct BoundLagrangian {
    xs: Vec<f64>,
    root: Node,
}

impl BoundLagrangian {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Value at abscissa `i`.
    pub fn eval(&self, i: usize, y: f64, u: f64, v: f64) -> Result<f64> {
        let inputs = [self.xs[i], y, u, v];
        check_inputs(&inputs)?;
        self.root.eval::<f64>(i, &inputs, true)
    }

    /// Partials in `y`, `ca`, `cb`; `d[0]` is always zero because `x` is
    /// held fixed. This keeps terms such as `x^0.5` usable at `x = 0`.
    pub fn eval_with_partials(&self, i: usize, y: f64, u: f64, v: f64) -> Result<Partials> {
        let inputs = [self.xs[i], y, u, v];
        check_inputs(&inputs)?;
        let r: Dual4 = self.root.eval(i, &inputs, true)?;
        Ok(Partials {
            value: r.value,
            d: r.d,
        })
    }
}
