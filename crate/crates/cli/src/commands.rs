use std::path::Path;

use fracvar::exprdsl::{Lagrangian, Var};
use fracvar::fracops::{check_integration_by_parts, IbpVariant};
use fracvar::gridfn::fmt_f64;
use fracvar::mittag::{ml, MlParams};
use fracvar::solver::{
    alpha_sweep, iso_solve, ritz_minimize, write_solution_csv, write_summary_csv, write_sweep_csv,
    SweepEntry, SweepSolution,
};
use fracvar::varcalc::{
    constraint_value, el_residual_restricted, sufficiency_report, ELReport, ProbeBox, ProbeConfig,
    SufficiencyReport, Tolerance, EL_SUMMARY_HEADER,
};
use fracvar::{Error, Exec, Grid, GridFunction, Order};

use crate::output::{fmt_sig15, write_atomic};
use crate::problem::{ProblemFile, Setup};
use crate::{Cli, CliError, Command, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VERDICT};

/// Convexity probe draws used by `residual`.
pub const PROBE_SAMPLES: usize = 2000;
pub const PROBE_SEED: u64 = 20_140_101;

/// Order used in place of 1 in sweeps.
pub const NEAR_ONE: f64 = 0.999;

pub const DEFAULT_IBP_N: usize = 2049;

/// Series tail bound for `ml`; the default 1e-14 can move the 15th printed digit.
pub const ML_PRINT_TOL: f64 = 1e-17;

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let tol = match cli.tol {
        None => Tolerance::Adaptive,
        Some(t) if t > 0.0 && t.is_finite() => Tolerance::Fixed(t),
        Some(t) => return Err(CliError::input(format!("--tol must be > 0, got {t}"))),
    };
    if let Some(n) = cli.n {
        if n < 3 {
            return Err(CliError::input(format!("--n must be at least 3, got {n}")));
        }
    }
    match &cli.command {
        Command::Solve { file } => solve(file, &cli.out, cli.n, tol),
        Command::Residual { file } => residual(file, &cli.out, cli.n, tol),
        Command::Sweep { file, alphas } => sweep(file, alphas, &cli.out, cli.n),
        Command::Ml { alpha, x } => ml_command(*alpha, *x),
        Command::CheckIbp {
            a,
            b,
            alpha,
            f,
            g,
            variant,
        } => check_ibp(
            *a,
            *b,
            *alpha,
            f,
            g,
            variant,
            cli.n.unwrap_or(DEFAULT_IBP_N),
            cli.tol,
        ),
    }
}

fn core(e: Error) -> CliError {
    CliError::from_core(e)
}

fn solution_name(alpha: f64) -> String {
    format!("solution_alpha_{alpha}.csv")
}

fn write_report(out: &Path, name: &str, r: &ELReport) -> Result<(), CliError> {
    write_atomic(out, name, |w| r.write_csv(w))?;
    Ok(())
}

fn write_el_summary(out: &Path, r: &ELReport) -> Result<(), CliError> {
    write_atomic(out, "el_summary.csv", |w| {
        writeln!(w, "{EL_SUMMARY_HEADER}")?;
        writeln!(w, "{}", r.summary_record())
    })?;
    Ok(())
}

fn solve_setup(setup: &Setup, tol: Tolerance) -> Result<(SweepSolution, ELReport), CliError> {
    let p = &setup.problem;
    match &setup.constraint {
        Some(c) => {
            let r = iso_solve(p, c, &setup.cfg, setup.bracket).map_err(core)?;
            let el = match tol {
                Tolerance::Adaptive => r.el_report.clone(),
                fixed => {
                    let f = fracvar::varcalc::augment(p.lagrangian(), &c.g, r.multipliers)
                        .map_err(core)?;
                    el_residual_restricted(&p.with_lagrangian(f).map_err(core)?, &r.y, fixed)
                        .map_err(core)?
                }
            };
            Ok((
                SweepSolution {
                    lambda: Some(r.multipliers.lambda),
                    objective: r.objective,
                    constraint_residual: Some(r.constraint_residual),
                    el_sup: el.max_sup(),
                    converged: r.converged,
                    y: r.y,
                },
                el,
            ))
        }
        None => {
            let r = ritz_minimize(p, &setup.cfg, None).map_err(core)?;
            let el = el_residual_restricted(p, &r.y, tol).map_err(core)?;
            Ok((
                SweepSolution {
                    lambda: None,
                    objective: r.objective,
                    constraint_residual: None,
                    el_sup: el.max_sup(),
                    converged: r.converged,
                    y: r.y,
                },
                el,
            ))
        }
    }
}

/// `solve`: solution, residual and one-line summary.
pub fn solve(file: &Path, out: &Path, n: Option<usize>, tol: Tolerance) -> Result<i32, CliError> {
    let pf = ProblemFile::load(file)?;
    let setup = pf.setup(n)?;
    let alpha = setup.problem.alpha();
    let (solution, el) = match solve_setup(&setup, tol) {
        Ok(s) => s,
        Err(e) => {
            let failed = [SweepEntry {
                alpha,
                outcome: Err(Error::Misuse(e.message.clone())),
            }];
            write_atomic(out, "summary.csv", |w| write_summary_csv(w, &failed))?;
            return Err(e);
        }
    };
    write_atomic(out, &solution_name(alpha.value()), |w| {
        write_solution_csv(w, &solution.y)
    })?;
    write_report(out, "el_residual.csv", &el)?;
    let converged = solution.converged;
    let entries = [SweepEntry {
        alpha,
        outcome: Ok(solution),
    }];
    write_atomic(out, "summary.csv", |w| write_summary_csv(w, &entries))?;
    let mut buf = Vec::new();
    write_summary_csv(&mut buf, &entries).map_err(|e| CliError::io(out, e))?;
    print!("{}", String::from_utf8_lossy(&buf));
    if converged {
        Ok(EXIT_OK)
    } else {
        eprintln!("warning: the solver did not converge; artifacts were written");
        Ok(EXIT_NONCONVERGENCE)
    }
}

fn write_sufficiency(
    out: &Path,
    s: &SufficiencyReport,
    boundary_ok: bool,
    verdict: bool,
) -> Result<(), CliError> {
    write_atomic(out, "sufficiency.csv", |w| {
        writeln!(
            w,
            "convex,skipped,el_sup,tol,el_verdict,boundary_ok,verdict,ce_x,ce_y,ce_u,ce_v,ce_y1,ce_u1,ce_v1,ce_slack"
        )?;
        write!(
            w,
            "{},{},{},{},{},{},{}",
            s.convex_l.pass,
            s.convex_l.skipped,
            fmt_f64(s.el.max_sup()),
            fmt_f64(s.el.tol),
            s.el.verdict,
            boundary_ok,
            verdict
        )?;
        match &s.convex_l.counterexample {
            Some(c) => {
                for v in c.point.iter().chain(&c.increment).chain([&c.slack]) {
                    write!(w, ",{}", fmt_f64(*v))?;
                }
                writeln!(w)
            }
            None => writeln!(w, ",,,,,,,,"),
        }
    })?;
    Ok(())
}

/// `residual`: Euler-Lagrange residual of the file's Lagrangian at the
/// candidate, with convexity of that Lagrangian as the sufficiency test.
pub fn residual(
    file: &Path,
    out: &Path,
    n: Option<usize>,
    tol: Tolerance,
) -> Result<i32, CliError> {
    let pf = ProblemFile::load(file)?;
    if pf.candidate.is_none() {
        return Err(CliError::input(format!(
            "{}: `residual` needs a [candidate] section",
            file.display()
        )));
    }
    let setup = pf.setup(n)?;
    let base = file.parent().unwrap_or(Path::new("."));
    let y = pf.candidate_on(&setup, base)?;
    let mut p = setup.problem.clone();
    let boundary_ok = match p.check_boundary(&y) {
        Ok(()) => true,
        Err(e) => {
            eprintln!("verdict: candidate violates the boundary data ({e})");
            p = p.with_boundary(y.first(), y.last());
            false
        }
    };
    let probe = ProbeConfig {
        bounds: ProbeBox::around(&p, &y).map_err(core)?,
        samples: PROBE_SAMPLES,
        seed: PROBE_SEED,
    };
    let s = sufficiency_report(&p, None, &y, &probe, tol).map_err(core)?;
    let verdict = s.verdict && boundary_ok;
    write_report(out, "el_residual.csv", &s.el)?;
    write_el_summary(out, &s.el)?;
    write_sufficiency(out, &s, boundary_ok, verdict)?;

    println!("{EL_SUMMARY_HEADER}");
    println!("{}", s.el.summary_record());
    if let Some(c) = &setup.constraint {
        let v = constraint_value(&c.g, &p, &y).map_err(core)?;
        println!(
            "constraint defect |I(y) - l| = {}",
            fmt_sig15((v - c.target).abs())
        );
    }
    println!(
        "convexity: {} ({} draws skipped); verdict: {}",
        if s.convex_l.pass { "pass" } else { "fail" },
        s.convex_l.skipped,
        if verdict { "pass" } else { "fail" }
    );
    if let Some(c) = &s.convex_l.counterexample {
        println!(
            "counterexample: point {:?}, increment {:?}, slack {}",
            c.point,
            c.increment,
            fmt_sig15(c.slack)
        );
    }
    Ok(if verdict { EXIT_OK } else { EXIT_VERDICT })
}

/// Parses a comma list of orders in (0, 1]; 1 becomes [`NEAR_ONE`].
pub fn parse_alphas(list: &str) -> Result<Vec<Order>, CliError> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: f64 = item
            .parse()
            .map_err(|_| CliError::input(format!("--alphas: `{item}` is not a number")))?;
        let v = if v == 1.0 {
            eprintln!("note: alpha = 1 is replaced by {NEAR_ONE}; the operators need alpha < 1");
            NEAR_ONE
        } else {
            v
        };
        out.push(
            Order::new(v)
                .map_err(|_| CliError::input(format!("--alphas: {item} is outside (0, 1]")))?,
        );
    }
    Ok(out)
}

/// `sweep`: one solve per order, each built from the file with the order
/// substituted.
pub fn sweep(file: &Path, alphas: &str, out: &Path, n: Option<usize>) -> Result<i32, CliError> {
    let pf = ProblemFile::load(file)?;
    let orders = parse_alphas(alphas)?;
    let setups: Vec<Setup> = orders
        .iter()
        .map(|a| pf.with_alpha(a.value()).setup(n))
        .collect::<Result<_, _>>()?;
    let base = pf.setup(n)?;
    let template = |alpha: Order| {
        let s = setups
            .iter()
            .find(|s| s.problem.alpha() == alpha)
            .expect("every order has a setup");
        Ok((s.problem.clone(), s.constraint.clone()))
    };
    let entries = alpha_sweep(&orders, template, &base.cfg, base.bracket, Exec::default());
    for e in &entries {
        match &e.outcome {
            Ok(s) => {
                write_atomic(out, &solution_name(e.alpha.value()), |w| {
                    write_solution_csv(w, &s.y)
                })?;
            }
            Err(err) => eprintln!("alpha = {}: {err}", e.alpha.value()),
        }
    }
    write_atomic(out, "sweep.csv", |w| write_sweep_csv(w, &entries))?;
    write_atomic(out, "sweep_summary.csv", |w| write_summary_csv(w, &entries))?;
    let mut buf = Vec::new();
    write_summary_csv(&mut buf, &entries).map_err(|e| CliError::io(out, e))?;
    print!("{}", String::from_utf8_lossy(&buf));
    let all = entries
        .iter()
        .all(|e| matches!(&e.outcome, Ok(s) if s.converged));
    Ok(if all { EXIT_OK } else { EXIT_NONCONVERGENCE })
}

/// `ml`: `E_α(x)` to 15 significant digits.
pub fn ml_command(alpha: f64, x: f64) -> Result<i32, CliError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(CliError::input(format!("--alpha must be > 0, got {alpha}")));
    }
    if !x.is_finite() {
        return Err(CliError::input(format!("--x must be finite, got {x}")));
    }
    let params = MlParams {
        truncation_tol: ML_PRINT_TOL,
        ..MlParams::default()
    };
    let v = ml(alpha, x, params).map_err(core)?;
    println!("{}", fmt_sig15(v.value));
    if v.converged {
        Ok(EXIT_OK)
    } else {
        eprintln!("warning: series truncated after {} terms", v.terms);
        Ok(EXIT_NONCONVERGENCE)
    }
}

fn sample_x_expr(src: &str, name: &str, grid: Grid) -> Result<GridFunction, CliError> {
    let l = Lagrangian::parse(src).map_err(|e| CliError::input(format!("--{name}: {e}")))?;
    if let Some(v) = l.used_variables().iter().find(|&v| v != Var::X) {
        return Err(CliError::input(format!(
            "--{name}: expressions are in x only, found `{}`",
            v.name()
        )));
    }
    let mut values = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        values.push(
            l.eval(x, 0.0, 0.0, 0.0)
                .map_err(|e| CliError::input(format!("--{name} at x = {x}: {e}")))?,
        );
    }
    GridFunction::new(grid, values).map_err(|e| CliError::input(format!("--{name}: {e}")))
}

/// `check-ibp`: `|LHS - RHS|` against `10 h^(1-α) max(1, sup|f| sup|g|)`
/// or the global `--tol`.
#[allow(clippy::too_many_arguments)]
pub fn check_ibp(
    a: f64,
    b: f64,
    alpha: f64,
    f: &str,
    g: &str,
    variant: &str,
    n: usize,
    tol: Option<f64>,
) -> Result<i32, CliError> {
    let order = Order::new(alpha)
        .map_err(|_| CliError::input(format!("--alpha must lie in (0,1), got {alpha}")))?;
    let variant: IbpVariant = variant.parse().map_err(core)?;
    let grid = Grid::new(a, b, n).map_err(core)?;
    let fs = sample_x_expr(f, "f", grid)?;
    let gs = sample_x_expr(g, "g", grid)?;
    let c = check_integration_by_parts(&fs, &gs, order, variant).map_err(core)?;
    let scale = (fs.norms().sup * gs.norms().sup).max(1.0);
    let threshold = tol.unwrap_or(10.0 * grid.h().powf(1.0 - alpha) * scale);
    println!("lhs = {}", fmt_sig15(c.lhs));
    println!("rhs = {}", fmt_sig15(c.rhs));
    println!("residual = {}", fmt_sig15(c.residual));
    println!("threshold = {}", fmt_sig15(threshold));
    Ok(if c.residual <= threshold {
        EXIT_OK
    } else {
        EXIT_VERDICT
    })
}
