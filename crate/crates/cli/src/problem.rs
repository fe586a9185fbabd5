//! Problem files: `[section]` headers, `key = value` lines, `#` comments.
//!
//! ```text
//! [problem]
//! a = 0
//! b = 1
//! alpha = 0.5
//! ya = 1
//! yb = auto_example
//! n = 513
//!
//! [lagrangian]
//! expr = ca^2
//!
//! [constraint]
//! expr = ml(0.5, x^0.5) * ca
//! target = auto_example
//! ```
//!
//! `auto_example` stands for the Mittag-Leffler data of the eigenfunction
//! problem: `yb = E_α((b-a)^α)`, `ya = 1` and `target = ∫ E_α((x-a)^α)² dx`.

use std::fmt;
use std::path::{Path, PathBuf};

use fracvar::exprdsl::{Lagrangian, Var};
use fracvar::mittag::{ml_power, MlParams, MlSeries};
use fracvar::solver::RitzConfig;
use fracvar::varcalc::{IsoConstraint, VariationalProblem};
use fracvar::{GridFunction, Order};

use crate::CliError;

pub const AUTO: &str = "auto_example";

/// A number or the `auto_example` keyword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    AutoExample,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(v) => write!(f, "{v}"),
            Value::AutoExample => f.write_str(AUTO),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSection {
    pub a: f64,
    pub b: f64,
    pub big_a: Option<f64>,
    pub big_b: Option<f64>,
    pub alpha: f64,
    /// Defaults to `alpha`.
    pub beta: Option<f64>,
    pub ya: Value,
    pub yb: Value,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSection {
    pub expr: Lagrangian,
    pub target: Value,
}

/// Overrides of [`RitzConfig`] plus the multiplier bracket.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverSection {
    pub n_basis: Option<usize>,
    pub singular_terms: Option<usize>,
    pub max_iters: Option<usize>,
    pub grad_step: Option<f64>,
    pub tol_obj: Option<f64>,
    pub tol_grad: Option<f64>,
    pub tol_constraint: Option<f64>,
    pub bracket: Option<(f64, f64)>,
}

pub const DEFAULT_BRACKET: (f64, f64) = (-10.0, 10.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Candidate {
    /// Closed form in `x`.
    Expr(Lagrangian),
    /// `x,value` samples; relative paths resolve against the problem file.
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub problem: ProblemSection,
    pub lagrangian: Lagrangian,
    pub constraint: Option<ConstraintSection>,
    pub solver: SolverSection,
    pub candidate: Option<Candidate>,
}

/// Everything a solve needs, with defaults and `auto_example` resolved.
#[derive(Debug, Clone)]
pub struct Setup {
    pub problem: VariationalProblem,
    pub constraint: Option<IsoConstraint>,
    pub cfg: RitzConfig,
    pub bracket: (f64, f64),
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    (
        "problem",
        &["a", "b", "A", "B", "alpha", "beta", "ya", "yb", "n"],
    ),
    ("lagrangian", &["expr"]),
    ("constraint", &["expr", "target"]),
    (
        "solver",
        &[
            "n_basis",
            "singular_terms",
            "max_iters",
            "grad_step",
            "tol_obj",
            "tol_grad",
            "tol_constraint",
            "bracket",
        ],
    ),
    ("candidate", &["expr", "csv"]),
];

struct Reader<'a> {
    file: &'a str,
}

impl Reader<'_> {
    fn err(&self, line: usize, key: &str, msg: impl fmt::Display) -> CliError {
        CliError::input(format!("{}:{line}: key `{key}`: {msg}", self.file))
    }

    fn split(&self, text: &str) -> Result<Vec<Section>, CliError> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) {
                    return Err(CliError::input(format!(
                        "{}:{line}: unknown section [{name}]",
                        self.file
                    )));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(CliError::input(format!(
                        "{}:{line}: duplicate section [{name}]",
                        self.file
                    )));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(CliError::input(format!(
                    "{}:{line}: expected `key = value` or `[section]`, got `{body}`",
                    self.file
                )));
            };
            let key = key.trim();
            let Some(section) = sections.last_mut() else {
                return Err(self.err(line, key, "appears before any [section] header"));
            };
            let allowed = SECTIONS.iter().find(|(s, _)| *s == section.name).unwrap().1;
            if !allowed.contains(&key) {
                return Err(self.err(
                    line,
                    key,
                    format!(
                        "unknown in [{}] (expected one of {})",
                        section.name,
                        allowed.join(", ")
                    ),
                ));
            }
            if section.entries.iter().any(|e| e.key == key) {
                return Err(self.err(line, key, "given twice"));
            }
            section.entries.push(Entry {
                line,
                key: key.to_string(),
                value: value.trim().to_string(),
            });
        }
        Ok(sections)
    }

    fn number(&self, e: &Entry) -> Result<f64, CliError> {
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(
                e.line,
                &e.key,
                format!("expected a finite number, got `{}`", e.value),
            )),
        }
    }

    fn value(&self, e: &Entry) -> Result<Value, CliError> {
        if e.value == AUTO {
            Ok(Value::AutoExample)
        } else {
            self.number(e).map(Value::Number)
        }
    }

    fn count(&self, e: &Entry) -> Result<usize, CliError> {
        e.value.parse::<usize>().map_err(|_| {
            self.err(
                e.line,
                &e.key,
                format!("expected a non-negative integer, got `{}`", e.value),
            )
        })
    }

    fn order(&self, e: &Entry) -> Result<f64, CliError> {
        let v = self.number(e)?;
        Order::new(v)
            .map_err(|_| self.err(e.line, &e.key, format!("must lie in (0,1), got {v}")))?;
        Ok(v)
    }

    fn expr(&self, e: &Entry) -> Result<Lagrangian, CliError> {
        Lagrangian::parse(&e.value).map_err(|err| self.err(e.line, &e.key, err))
    }
}

fn find<'s>(section: &'s Section, key: &str) -> Option<&'s Entry> {
    section.entries.iter().find(|e| e.key == key)
}

impl ProblemFile {
    /// Reads and validates a problem file.
    pub fn load(path: &Path) -> Result<ProblemFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: cannot read: {e}", path.display())))?;
        ProblemFile::parse(&text, &path.display().to_string())
    }

    /// Parses `text`; `file` names the source in error messages.
    pub fn parse(text: &str, file: &str) -> Result<ProblemFile, CliError> {
        let r = Reader { file };
        let sections = r.split(text)?;
        let section = |name: &str| sections.iter().find(|s| s.name == name);
        fn required<'s>(file: &str, s: &'s Section, key: &str) -> Result<&'s Entry, CliError> {
            find(s, key).ok_or_else(|| {
                CliError::input(format!(
                    "{file}:{}: key `{key}`: missing from [{}]",
                    s.line, s.name
                ))
            })
        }
        let missing_section =
            |name: &str| CliError::input(format!("{file}: missing [{name}] section"));

        let ps = section("problem").ok_or_else(|| missing_section("problem"))?;
        let (ea, eb) = (required(file, ps, "a")?, required(file, ps, "b")?);
        let (a, b) = (r.number(ea)?, r.number(eb)?);
        if a >= b {
            return Err(r.err(eb.line, "b", format!("need a < b, got a = {a}, b = {b}")));
        }
        let alpha = r.order(required(file, ps, "alpha")?)?;
        let beta = find(ps, "beta").map(|e| r.order(e)).transpose()?;
        let en = required(file, ps, "n")?;
        let n = r.count(en)?;
        if n < 3 {
            return Err(r.err(en.line, "n", format!("need at least 3 nodes, got {n}")));
        }
        let mut limits = [None, None];
        for (slot, key) in limits.iter_mut().zip(["A", "B"]) {
            if let Some(e) = find(ps, key) {
                let v = r.number(e)?;
                if !(a <= v && v <= b) {
                    return Err(r.err(
                        e.line,
                        key,
                        format!("must lie in [a, b] = [{a}, {b}], got {v}"),
                    ));
                }
                *slot = Some(v);
            }
        }
        if let (Some(lo), Some(hi)) = (limits[0], limits[1]) {
            if lo >= hi {
                let line = find(ps, "B").unwrap().line;
                return Err(r.err(line, "B", format!("need A < B, got A = {lo}, B = {hi}")));
            }
        }
        let problem = ProblemSection {
            a,
            b,
            big_a: limits[0],
            big_b: limits[1],
            alpha,
            beta,
            ya: r.value(required(file, ps, "ya")?)?,
            yb: r.value(required(file, ps, "yb")?)?,
            n,
        };

        let ls = section("lagrangian").ok_or_else(|| missing_section("lagrangian"))?;
        let lagrangian = r.expr(required(file, ls, "expr")?)?;

        let constraint = match section("constraint") {
            None => None,
            Some(cs) => Some(ConstraintSection {
                expr: r.expr(required(file, cs, "expr")?)?,
                target: r.value(required(file, cs, "target")?)?,
            }),
        };

        let mut solver = SolverSection::default();
        if let Some(ss) = section("solver") {
            for e in &ss.entries {
                match e.key.as_str() {
                    "n_basis" => solver.n_basis = Some(r.count(e)?),
                    "singular_terms" => solver.singular_terms = Some(r.count(e)?),
                    "max_iters" => solver.max_iters = Some(r.count(e)?),
                    "bracket" => {
                        let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
                        let nums: Option<Vec<f64>> =
                            parts.iter().map(|p| p.parse::<f64>().ok()).collect();
                        match nums.as_deref() {
                            Some(&[lo, hi]) if lo.is_finite() && hi.is_finite() && lo < hi => {
                                solver.bracket = Some((lo, hi))
                            }
                            _ => {
                                return Err(r.err(
                                    e.line,
                                    "bracket",
                                    format!("expected `lo, hi` with lo < hi, got `{}`", e.value),
                                ))
                            }
                        }
                    }
                    key => {
                        let v = r.number(e)?;
                        if v <= 0.0 {
                            return Err(r.err(e.line, key, format!("must be > 0, got {v}")));
                        }
                        let slot = match key {
                            "grad_step" => &mut solver.grad_step,
                            "tol_obj" => &mut solver.tol_obj,
                            "tol_grad" => &mut solver.tol_grad,
                            _ => &mut solver.tol_constraint,
                        };
                        *slot = Some(v);
                    }
                }
            }
        }

        let candidate = match section("candidate") {
            None => None,
            Some(cs) => match (find(cs, "expr"), find(cs, "csv")) {
                (Some(e), None) => {
                    let l = r.expr(e)?;
                    if let Some(v) = l.used_variables().iter().find(|&v| v != Var::X) {
                        return Err(r.err(
                            e.line,
                            "expr",
                            format!("a candidate is a function of x only, found `{}`", v.name()),
                        ));
                    }
                    Some(Candidate::Expr(l))
                }
                (None, Some(e)) => Some(Candidate::Csv(PathBuf::from(&e.value))),
                (Some(_), Some(e)) => {
                    return Err(r.err(e.line, "csv", "give either expr or csv, not both"))
                }
                (None, None) => {
                    return Err(CliError::input(format!(
                        "{file}:{}: [candidate] needs `expr` or `csv`",
                        cs.line
                    )))
                }
            },
        };

        Ok(ProblemFile {
            problem,
            lagrangian,
            constraint,
            solver,
            candidate,
        })
    }

    pub fn beta(&self) -> f64 {
        self.problem.beta.unwrap_or(self.problem.alpha)
    }

    /// The same file at order `alpha`: literals equal to the old order are
    /// rebound in every expression, and `beta` follows when it was left out
    /// or equal to `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> ProblemFile {
        let old = self.problem.alpha;
        let rebind = |l: &Lagrangian| {
            Lagrangian::new(l.expr().rebind_constant(old, alpha))
                .expect("rebinding keeps a valid tree")
        };
        let mut out = self.clone();
        out.problem.alpha = alpha;
        if self.problem.beta == Some(old) {
            out.problem.beta = Some(alpha);
        }
        out.lagrangian = rebind(&self.lagrangian);
        if let Some(c) = &mut out.constraint {
            c.expr = rebind(&c.expr);
        }
        if let Some(Candidate::Expr(e)) = &mut out.candidate {
            *e = rebind(e);
        }
        out
    }

    pub fn ritz_config(&self) -> RitzConfig {
        let d = RitzConfig::default();
        let s = &self.solver;
        RitzConfig {
            n_basis: s.n_basis.unwrap_or(d.n_basis),
            singular_terms: s.singular_terms.unwrap_or(d.singular_terms),
            max_iters: s.max_iters.unwrap_or(d.max_iters),
            grad_step: s.grad_step.unwrap_or(d.grad_step),
            tol_obj: s.tol_obj.unwrap_or(d.tol_obj),
            tol_grad: s.tol_grad.unwrap_or(d.tol_grad),
            tol_constraint: s.tol_constraint.unwrap_or(d.tol_constraint),
        }
    }

    fn auto_series(&self) -> Result<MlSeries, CliError> {
        MlSeries::new(self.problem.alpha, MlParams::default()).map_err(CliError::from_core)
    }

    fn resolve(
        &self,
        v: Value,
        auto: impl FnOnce() -> Result<f64, CliError>,
    ) -> Result<f64, CliError> {
        match v {
            Value::Number(x) => Ok(x),
            Value::AutoExample => auto(),
        }
    }

    /// Builds the problem on `n` nodes (`n_override` or the file's `n`).
    pub fn setup(&self, n_override: Option<usize>) -> Result<Setup, CliError> {
        let p = &self.problem;
        let n = n_override.unwrap_or(p.n);
        let order = |v: f64| Order::new(v).map_err(CliError::from_core);
        let len = p.b - p.a;
        let ya = self.resolve(p.ya, || Ok(1.0))?;
        let yb = self.resolve(p.yb, || {
            let v = ml_power(p.alpha, len, MlParams::default()).map_err(CliError::from_core)?;
            Ok(v.value)
        })?;
        let mut problem = VariationalProblem::new(
            self.lagrangian.clone(),
            (p.a, p.b),
            (order(p.alpha)?, order(self.beta())?),
            (ya, yb),
            n,
        )
        .map_err(CliError::from_core)?;
        if p.big_a.is_some() || p.big_b.is_some() {
            problem = problem
                .restricted(p.big_a.unwrap_or(p.a), p.big_b.unwrap_or(p.b))
                .map_err(CliError::from_core)?;
        }
        let constraint = match &self.constraint {
            None => None,
            Some(c) => Some(IsoConstraint {
                g: c.expr.clone(),
                target: self.resolve(c.target, || {
                    let v = self
                        .auto_series()?
                        .square_integral(len)
                        .map_err(CliError::from_core)?;
                    Ok(v.value)
                })?,
            }),
        };
        let cfg = self.ritz_config();
        cfg.validate().map_err(CliError::from_core)?;
        Ok(Setup {
            problem,
            constraint,
            cfg,
            bracket: self.solver.bracket.unwrap_or(DEFAULT_BRACKET),
        })
    }

    /// Samples the candidate on the problem grid. `base` is the directory
    /// relative CSV paths are resolved against.
    pub fn candidate_on(&self, setup: &Setup, base: &Path) -> Result<GridFunction, CliError> {
        let grid = *setup.problem.grid();
        match &self.candidate {
            None => Err(CliError::input(
                "the problem file has no [candidate] section".to_string(),
            )),
            Some(Candidate::Expr(l)) => {
                let mut values = Vec::with_capacity(grid.len());
                for x in grid.nodes() {
                    values.push(
                        l.eval(x, 0.0, 0.0, 0.0)
                            .map_err(|e| CliError::input(format!("candidate at x = {x}: {e}")))?,
                    );
                }
                GridFunction::new(grid, values).map_err(CliError::from_core)
            }
            Some(Candidate::Csv(path)) => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base.join(path)
                };
                let file = std::fs::File::open(&full).map_err(|e| {
                    CliError::input(format!("{}: cannot read: {e}", full.display()))
                })?;
                let y = GridFunction::read_csv(std::io::BufReader::new(file))
                    .map_err(|e| CliError::input(format!("{}: {e}", full.display())))?;
                if *y.grid() != grid {
                    return Err(CliError::input(format!(
                        "{}: samples are not on the problem grid ({} nodes on [{}, {}])",
                        full.display(),
                        grid.len(),
                        grid.a(),
                        grid.b()
                    )));
                }
                Ok(y)
            }
        }
    }
}

/// Canonical form; parsing it gives back an equal [`ProblemFile`].
impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.problem;
        writeln!(f, "[problem]")?;
        writeln!(f, "a = {}", p.a)?;
        writeln!(f, "b = {}", p.b)?;
        if let Some(v) = p.big_a {
            writeln!(f, "A = {v}")?;
        }
        if let Some(v) = p.big_b {
            writeln!(f, "B = {v}")?;
        }
        writeln!(f, "alpha = {}", p.alpha)?;
        if let Some(v) = p.beta {
            writeln!(f, "beta = {v}")?;
        }
        writeln!(f, "ya = {}", p.ya)?;
        writeln!(f, "yb = {}", p.yb)?;
        writeln!(f, "n = {}", p.n)?;
        writeln!(f, "\n[lagrangian]\nexpr = {}", self.lagrangian)?;
        if let Some(c) = &self.constraint {
            writeln!(
                f,
                "\n[constraint]\nexpr = {}\ntarget = {}",
                c.expr, c.target
            )?;
        }
        let s = &self.solver;
        if *s != SolverSection::default() {
            writeln!(f, "\n[solver]")?;
            let counts = [
                ("n_basis", s.n_basis),
                ("singular_terms", s.singular_terms),
                ("max_iters", s.max_iters),
            ];
            for (k, v) in counts {
                if let Some(v) = v {
                    writeln!(f, "{k} = {v}")?;
                }
            }
            let reals = [
                ("grad_step", s.grad_step),
                ("tol_obj", s.tol_obj),
                ("tol_grad", s.tol_grad),
                ("tol_constraint", s.tol_constraint),
            ];
            for (k, v) in reals {
                if let Some(v) = v {
                    writeln!(f, "{k} = {v}")?;
                }
            }
            if let Some((lo, hi)) = s.bracket {
                writeln!(f, "bracket = {lo}, {hi}")?;
            }
        }
        match &self.candidate {
            None => {}
            Some(Candidate::Expr(l)) => writeln!(f, "\n[candidate]\nexpr = {l}")?,
            Some(Candidate::Csv(path)) => writeln!(f, "\n[candidate]\ncsv = {}", path.display())?,
        }
        Ok(())
    }
}
