//! Random expression trees and trusted finite differences.

use fracvar::exprdsl::{BinaryOp, Expr, Lagrangian, UnaryOp, Var};
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(Var::ALL.to_vec()).prop_map(Expr::var),
        (0.1..3.0f64).prop_map(Expr::constant),
        prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]).prop_map(Expr::constant),
    ]
}

/// Random trees of depth at most 5 with nonnegative literals, so the
/// printed form reparses to the same tree.
pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![
                    UnaryOp::Neg,
                    UnaryOp::Sin,
                    UnaryOp::Cos,
                    UnaryOp::Exp,
                    UnaryOp::Log,
                    UnaryOp::Sqrt,
                    UnaryOp::Abs,
                ]),
                inner.clone()
            )
                .prop_map(|(op, e)| Expr::unary(op, e)),
            (
                prop::sample::select(vec![
                    BinaryOp::Add,
                    BinaryOp::Sub,
                    BinaryOp::Mul,
                    BinaryOp::Div,
                    BinaryOp::Pow,
                ]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (prop::sample::select(vec![0.5, 0.8, 1.0]), inner).prop_map(|(alpha, arg)| Expr::Ml {
                alpha,
                arg: Box::new(arg)
            }),
        ]
    })
}

pub fn depth(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 1,
        Expr::Unary(_, a) => 1 + depth(a),
        Expr::Ml { arg, .. } => 1 + depth(arg),
        Expr::Binary(_, l, r) => 1 + depth(l).max(depth(r)),
    }
}

pub fn central(l: &Lagrangian, at: [f64; 4], k: usize, h: f64) -> Option<f64> {
    let mut p = at;
    let mut m = at;
    p[k] += h;
    m[k] -= h;
    let fp = l.eval(p[0], p[1], p[2], p[3]).ok()?;
    let fm = l.eval(m[0], m[1], m[2], m[3]).ok()?;
    Some((fp - fm) / (2.0 * h))
}

pub const STEP: f64 = 1e-6;

/// Finite difference at a point where it can be trusted: every perturbed
/// evaluation succeeds, the value is moderate, and the difference quotient
/// is stable between steps `h` and `2h` (no kink or pole within reach).
pub fn safe_fd(l: &Lagrangian, at: [f64; 4], k: usize) -> Option<f64> {
    let f0 = l.eval(at[0], at[1], at[2], at[3]).ok()?;
    if f0.abs() > 1e6 {
        return None;
    }
    let d1 = central(l, at, k, STEP)?;
    let d2 = central(l, at, k, 2.0 * STEP)?;
    if (d1 - d2).abs() > 1e-6 * (1.0 + d1.abs()) {
        return None;
    }
    Some(d1)
}

/// Largest `|dual - fd| / (1 + |fd|)` over `trees` random trees, each
/// checked at the first of up to 50 random points where every finite
/// difference is trusted. Deterministic.
pub fn worst_dual_error(trees: usize) -> f64 {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let point = prop::array::uniform4(-2.0..2.0f64);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut drawn = 0;
    while checked < trees {
        drawn += 1;
        assert!(drawn < 50 * trees, "only {checked} checkable trees");
        let e = expr().new_tree(&mut runner).unwrap().current();
        if depth(&e) > 5 {
            continue;
        }
        let l = Lagrangian::new(e.clone()).unwrap();
        for _ in 0..50 {
            let at = point.new_tree(&mut runner).unwrap().current();
            let fds: Option<Vec<f64>> = (0..4).map(|k| safe_fd(&l, at, k)).collect();
            let Some(fds) = fds else { continue };
            let p = l
                .eval_with_partials(at[0], at[1], at[2], at[3])
                .unwrap_or_else(|err| panic!("{e} at {at:?}: {err}"));
            for (k, fd) in fds.iter().enumerate() {
                worst = worst.max((p.d[k] - fd).abs() / (1.0 + fd.abs()));
            }
            checked += 1;
            break;
        }
    }
    worst
}
