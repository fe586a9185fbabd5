use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    /// Left Caputo value `u`.
    Ca,
    /// Right Caputo value `v`.
    Cb,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Ca, Var::Cb];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Ca => "ca",
            Var::Cb => "cb",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "ca" => Some(Var::Ca),
            "cb" => Some(Var::Cb),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl UnaryOp {
    pub fn function(name: &str) -> Option<UnaryOp> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "log" => Some(UnaryOp::Log),
            "sqrt" => Some(UnaryOp::Sqrt),
            "abs" => Some(UnaryOp::Abs),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    /// `ml(alpha, arg)`; `alpha` is a positive literal.
    Ml {
        alpha: f64,
        arg: Box<Expr>,
    },
}

const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    /// Syntactic free-variable set.
    pub fn used_variables(&self) -> VarSet {
        let mut set = VarSet::default();
        self.collect_vars(&mut set);
        set
    }

    fn collect_vars(&self, set: &mut VarSet) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => set.insert(*v),
            Expr::Unary(_, e) => e.collect_vars(set),
            Expr::Binary(_, l, r) => {
                l.collect_vars(set);
                r.collect_vars(set);
            }
            Expr::Ml { arg, .. } => arg.collect_vars(set),
        }
    }

    /// Replaces every literal equal to `from` (ml orders included) by `to`.
    pub fn rebind_constant(&self, from: f64, to: f64) -> Expr {
        let swap = |c: f64| if c == from { to } else { c };
        match self {
            Expr::Const(c) => Expr::Const(swap(*c)),
            Expr::Var(v) => Expr::Var(*v),
            Expr::Unary(op, e) => Expr::unary(*op, e.rebind_constant(from, to)),
            Expr::Binary(op, l, r) => Expr::binary(
                *op,
                l.rebind_constant(from, to),
                r.rebind_constant(from, to),
            ),
            Expr::Ml { alpha, arg } => Expr::Ml {
                alpha: swap(*alpha),
                arg: Box::new(arg.rebind_constant(from, to)),
            },
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => PREC_ATOM,
            Expr::Const(_) | Expr::Var(_) | Expr::Ml { .. } => PREC_ATOM,
            Expr::Unary(UnaryOp::Neg, _) => PREC_UNARY,
            Expr::Unary(..) => PREC_ATOM,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn fmt_number(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(f, "(-{})", -c)
    } else {
        write!(f, "{c}")
    }
}

/// Prints with the minimum parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_number(*c, f),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                e.fmt_child(f, PREC_UNARY)
            }
            Expr::Unary(op, e) => write!(f, "{}({e})", op.name()),
            Expr::Binary(BinaryOp::Pow, l, r) => {
                l.fmt_child(f, PREC_ATOM)?;
                f.write_str("^")?;
                r.fmt_child(f, PREC_UNARY)
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                l.fmt_child(f, p)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_child(f, p + 1)
            }
            Expr::Ml { alpha, arg } => {
                f.write_str("ml(")?;
                fmt_number(*alpha, f)?;
                write!(f, ", {arg})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VarSet {
    bits: u8,
}

impl VarSet {
    pub fn insert(&mut self, v: Var) {
        self.bits |= 1 << v.index();
    }

    pub fn contains(&self, v: Var) -> bool {
        self.bits & (1 << v.index()) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        Var::ALL.into_iter().filter(|v| self.contains(*v))
    }

    pub fn all() -> VarSet {
        VarSet { bits: 0b1111 }
    }
}

impl FromIterator<Var> for VarSet {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        let mut s = VarSet::default();
        for v in iter {
            s.insert(v);
        }
        s
    }
}
