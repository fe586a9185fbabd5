mod common;

use fracvar::fracops::{
    apply, caputo_left, caputo_left_with, caputo_right, caputo_right_with,
    check_integration_by_parts, check_inverse_identities, rl_deriv_left, rl_deriv_left_with,
    rl_deriv_right, rl_deriv_right_with, rl_integral_left, rl_integral_left_with,
    rl_integral_right, rl_integral_right_with, IbpVariant, OperatorKind,
};
use fracvar::mittag::gamma;
use fracvar::{Error, Exec, Grid, GridFunction, Order};
use proptest::prelude::*;

fn grid(n: usize) -> Grid {
    Grid::new(0.0, 1.0, n).unwrap()
}

fn order(a: f64) -> Order {
    Order::new(a).unwrap()
}

fn sample<F: Fn(f64) -> f64>(f: F, n: usize) -> GridFunction {
    GridFunction::sample(f, grid(n)).unwrap()
}

fn g(x: f64) -> f64 {
    gamma(x).unwrap()
}

/// Sup of `|u - exact|` over the interior band.
fn interior_error<F: Fn(f64) -> f64>(u: &GridFunction, exact: F) -> f64 {
    let e = GridFunction::sample(exact, *u.grid()).unwrap();
    u.sub(&e).unwrap().interior_sup()
}

/// Value of `u` at the node nearest `x`, with that node's abscissa.
fn at(u: &GridFunction, x: f64) -> (f64, f64) {
    let i = u.grid().nearest_index(x);
    (u.grid().x(i), u.values()[i])
}

// smooth test function with f(0) != 0 and f(1) != 0
fn smooth(x: f64) -> f64 {
    x.exp() * (2.0 * x).sin() + 1.0
}

fn smooth_d(x: f64) -> f64 {
    x.exp() * ((2.0 * x).sin() + 2.0 * (2.0 * x).cos())
}

#[test]
fn integral_of_one_and_of_x() {
    let a = order(0.5);
    let one = rl_integral_left(&sample(|_| 1.0, 1025), a);
    let oracle = common::rl_integral_left(|_| 1.0, 0.0, 1.0, 0.5);
    assert!((oracle - 1.0 / g(1.5)).abs() < 1e-12);
    assert!((one.last() - oracle).abs() < 1e-3);
    assert_eq!(one.first(), 0.0);

    let lin = rl_integral_left(&sample(|x| x, 1025), a);
    let oracle = common::rl_integral_left(|t| t, 0.0, 1.0, 0.5);
    assert!((oracle - 1.0 / g(2.5)).abs() < 1e-12);
    assert!((lin.last() - oracle).abs() < 1e-3);

    let right = rl_integral_right(&sample(|_| 1.0, 1025), a);
    assert_eq!(right.last(), 0.0);
    for x in [0.1, 0.37, 0.8] {
        let (xi, v) = at(&right, x);
        let o = common::rl_integral_right(|_| 1.0, xi, 1.0, 0.5);
        assert!((v - o).abs() < 1e-3, "x={xi}: {v} vs {o}");
    }
}

#[test]
fn operators_of_zero_are_zero() {
    let z = GridFunction::zeros(grid(65));
    for kind in OperatorKind::ALL {
        assert!(apply(kind, &z, order(0.35))
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }
}

#[test]
fn caputo_of_constants_vanishes() {
    for c in [1.0, -3.5, 1e3] {
        for a in [0.1, 0.5, 0.9] {
            let f = sample(|_| c, 257);
            assert!(caputo_left(&f, order(a)).norms().sup <= 1e-12);
            assert!(caputo_right(&f, order(a)).norms().sup <= 1e-12);
        }
    }
}

#[test]
fn caputo_of_linear_functions() {
    let a = order(0.5);
    let left = caputo_left(&sample(|x| x, 1025), a);
    let err = interior_error(&left, |x| common::caputo_left(|_| 1.0, 0.0, x, 0.5));
    assert!(err <= 2e-3, "left {err}");
    let right = caputo_right(&sample(|x| 1.0 - x, 1025), a);
    let err = interior_error(&right, |x| (1.0 - x).sqrt() / g(1.5));
    assert!(err <= 2e-3, "right {err}");
}

#[test]
fn operators_match_quadrature_on_a_smooth_function() {
    let n = 1025;
    let f = sample(smooth, n);
    for alpha in [0.3, 0.5, 0.8] {
        let a = order(alpha);
        let il = rl_integral_left(&f, a);
        let ir = rl_integral_right(&f, a);
        let cl = caputo_left(&f, a);
        let cr = caputo_right(&f, a);
        let dl = rl_deriv_left(&f, a).values;
        let dr = rl_deriv_right(&f, a).values;
        for x in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let (xi, v) = at(&il, x);
            let o = common::rl_integral_left(smooth, 0.0, xi, alpha);
            assert!((v - o).abs() < 1e-5, "aI α={alpha} x={xi}: {v} vs {o}");

            let (_, v) = at(&ir, x);
            let o = common::rl_integral_right(smooth, xi, 1.0, alpha);
            assert!((v - o).abs() < 1e-5, "xI_b α={alpha} x={xi}: {v} vs {o}");

            let (_, v) = at(&cl, x);
            let o = common::caputo_left(smooth_d, 0.0, xi, alpha);
            assert!((v - o).abs() < 2e-3, "aᶜD α={alpha} x={xi}: {v} vs {o}");

            let (_, v) = at(&cr, x);
            let o = -common::rl_integral_right(smooth_d, xi, 1.0, 1.0 - alpha);
            assert!((v - o).abs() < 2e-3, "xᶜD_b α={alpha} x={xi}: {v} vs {o}");

            let (_, v) = at(&dl, x);
            let o = common::rl_deriv_left(smooth, 0.0, xi, alpha);
            assert!((v - o).abs() < 2e-3, "aD α={alpha} x={xi}: {v} vs {o}");

            let (_, v) = at(&dr, x);
            let o = common::rl_deriv_right(smooth, xi, 1.0, alpha);
            assert!((v - o).abs() < 2e-3, "xD_b α={alpha} x={xi}: {v} vs {o}");
        }
    }
}

#[test]
fn rl_derivative_of_one_is_the_correction_term() {
    let a = order(0.5);
    let one = sample(|_| 1.0, 257);
    let l = rl_deriv_left(&one, a);
    assert_eq!(l.unbounded, Some(0));
    assert_eq!(l.values.first(), 0.0);
    let err = interior_error(
        &l.values,
        |x| if x > 0.0 { x.powf(-0.5) / g(0.5) } else { 0.0 },
    );
    assert!(err <= 1e-6, "{err}");

    let r = rl_deriv_right(&one, a);
    assert_eq!(r.unbounded, Some(256));
    let err = interior_error(&r.values, |x| {
        if x < 1.0 {
            (1.0 - x).powf(-0.5) / g(0.5)
        } else {
            0.0
        }
    });
    assert!(err <= 1e-6, "{err}");

    let z = rl_deriv_left(&GridFunction::zeros(grid(33)), a);
    assert_eq!(z.unbounded, None);
    assert!(z.values.values().iter().all(|&v| v == 0.0));
}

#[test]
fn rl_and_caputo_coincide_when_the_endpoint_value_vanishes() {
    let f = sample(|x| x * (1.0 - x) * (3.0 * x).cos(), 513);
    for alpha in [0.2, 0.5, 0.9] {
        let a = order(alpha);
        let l = rl_deriv_left(&f, a);
        assert_eq!(l.unbounded, None);
        assert_eq!(l.values, caputo_left(&f, a));
        let r = rl_deriv_right(&f, a);
        assert_eq!(r.unbounded, None);
        assert_eq!(r.values, caputo_right(&f, a));
    }
}

#[test]
fn inverse_identities_on_polynomials() {
    let cases: [(fn(f64) -> f64, f64); 4] = [
        (|x| x * x, 0.5),
        (|x| 1.0 + x, 0.3),
        (|x| x * x * x - x, 0.7),
        (|x| 1.0 + 2.0 * x - x * x, 0.5),
    ];
    for (f, alpha) in cases {
        let r = check_inverse_identities(&sample(f, 2049), order(alpha));
        assert!(r.integral_of_caputo <= 5e-3, "α={alpha}: {r:?}");
        assert!(r.caputo_of_integral <= 5e-3, "α={alpha}: {r:?}");
    }
    let z = check_inverse_identities(&GridFunction::zeros(grid(65)), order(0.5));
    assert_eq!((z.caputo_of_integral, z.integral_of_caputo), (0.0, 0.0));
}

fn bubble(x: f64) -> f64 {
    x * (1.0 - x)
}

fn bubble_d(x: f64) -> f64 {
    1.0 - 2.0 * x
}

/// Both sides of IP1 by nested quadrature, for `f = x(1-x)` and `g = x^2`.
/// The RL derivative of `g` is written as its Caputo part plus the endpoint
/// term `g(1)(1-x)^(-α)/Γ(1-α)`, whose integral against `f` is an RL
/// integral of `f` at `x = 1`.
fn ip1_oracle(alpha: f64) -> (f64, f64) {
    let lhs = common::quad(
        |x| x * x * common::caputo_left(bubble_d, 0.0, x, alpha),
        0.0,
        1.0,
    );
    let caputo_right_g = |x: f64| -common::rl_integral_right(|t| 2.0 * t, x, 1.0, 1.0 - alpha);
    let rhs = common::quad(|x| bubble(x) * caputo_right_g(x), 0.0, 1.0)
        + common::rl_integral_left(bubble, 0.0, 1.0, 1.0 - alpha);
    (lhs, rhs)
}

#[test]
fn integration_by_parts_ip1_against_quadrature() {
    let f = sample(bubble, 2049);
    let gx = sample(|x| x * x, 2049);
    let c = check_integration_by_parts(&f, &gx, order(0.5), IbpVariant::IP1).unwrap();
    assert!(c.residual <= 1e-3, "{c:?}");
    let (lhs, rhs) = ip1_oracle(0.5);
    assert!((lhs - rhs).abs() < 1e-10, "oracle sides {lhs} {rhs}");
    assert!((c.lhs - lhs).abs() < 1e-3, "{} vs {lhs}", c.lhs);
    assert!((c.rhs - rhs).abs() < 1e-3, "{} vs {rhs}", c.rhs);
}

#[test]
fn integration_by_parts_all_variants() {
    let n = 2049;
    let f = sample(bubble, n);
    let gs: [fn(f64) -> f64; 4] = [|x| x * x, |_| 1.0, f64::exp, |x| (2.0 * x).cos()];
    for gf in gs {
        let gx = sample(gf, n);
        for alpha in [0.3, 0.5, 0.8] {
            for v in [
                IbpVariant::IP1,
                IbpVariant::IP2,
                IbpVariant::IP3,
                IbpVariant::IP4,
            ] {
                let c = check_integration_by_parts(&f, &gx, order(alpha), v).unwrap();
                assert!(c.residual <= 1e-3, "α={alpha} {v:?}: {c:?}");
            }
        }
    }
    // nonzero boundary values exercise the bracket terms
    let f = sample(|x| 1.0 + x, n);
    let gx = sample(f64::exp, n);
    for v in [IbpVariant::IP3, IbpVariant::IP4] {
        let c = check_integration_by_parts(&f, &gx, order(0.5), v).unwrap();
        assert!(c.residual <= 1e-3, "{v:?}: {c:?}");
    }
}

#[test]
fn integration_by_parts_rejects_nonvanishing_f() {
    let f = sample(|x| 1.0 + x, 65);
    let gx = sample(|x| x, 65);
    for v in [IbpVariant::IP1, IbpVariant::IP2] {
        assert!(matches!(
            check_integration_by_parts(&f, &gx, order(0.5), v),
            Err(Error::BoundaryViolation { .. })
        ));
    }
    let z = GridFunction::zeros(grid(65));
    for v in [
        IbpVariant::IP1,
        IbpVariant::IP2,
        IbpVariant::IP3,
        IbpVariant::IP4,
    ] {
        let c = check_integration_by_parts(&z, &gx, order(0.5), v).unwrap();
        assert_eq!(c.residual, 0.0);
    }
}

#[test]
fn ip3_approaches_classical_integration_by_parts() {
    // ∫ f' dx for f = x(1-x) is 0; the bracket [f]_0^1 is 0 as well
    let f = sample(bubble, 2049);
    let one = sample(|_| 1.0, 2049);
    let mut prev = f64::INFINITY;
    for alpha in [0.9, 0.99] {
        let c = check_integration_by_parts(&f, &one, order(alpha), IbpVariant::IP3).unwrap();
        assert!(c.residual <= 1e-3, "α={alpha}: {c:?}");
        let gap = c.rhs.abs();
        assert!(gap < prev, "α={alpha}: {gap} not below {prev}");
        prev = gap;
    }
    assert!(prev < 0.1, "{prev}");
}

#[test]
fn caputo_tends_to_the_derivative_as_order_tends_to_one() {
    let n = 1025;
    let f = sample(|x| x * x - x, n);
    let c = caputo_left(&f, order(0.999));
    let d = f.derivative_fd();
    let err = c.sub(&d).unwrap().sup_over(10..n);
    assert!(err <= 5e-2, "{err}");
}

#[test]
fn l1_scheme_converges_faster_than_first_order() {
    let alpha = 0.5;
    let exact = |x: f64| 6.0 * x.powf(3.0 - alpha) / g(4.0 - alpha);
    let err =
        |n: usize| interior_error(&caputo_left(&sample(|x| x.powi(3), n), order(alpha)), exact);
    let (e1, e2, e3) = (err(129), err(257), err(513));
    assert!(e1 / e2 >= 2.0, "{e1} / {e2}");
    assert!(e2 / e3 >= 2.0, "{e2} / {e3}");
}

#[test]
fn eigenfunction_is_reproduced_by_the_caputo_derivative() {
    let alpha = 0.5;
    let err = |n: usize, from: usize| {
        let y = sample(|x| common::eigen(alpha, x), n);
        caputo_left(&y, order(alpha))
            .sub(&y)
            .unwrap()
            .sup_over(from..n)
    };
    assert!(err(1025, 10) <= 5e-2, "{}", err(1025, 10));
    // on a fixed interval away from the cusp at 0 the error drops with h
    let (coarse, fine) = (err(513, 51), err(1025, 102));
    assert!(fine < coarse, "{fine} !< {coarse}");
}

#[test]
fn right_operators_are_reflected_left_operators() {
    let f = sample(smooth, 301);
    let a = order(0.45);
    let pairs: [(
        fn(&GridFunction, Order) -> GridFunction,
        fn(&GridFunction, Order) -> GridFunction,
    ); 2] = [
        (rl_integral_left, rl_integral_right),
        (caputo_left, caputo_right),
    ];
    for (left, right) in pairs {
        let r = right(&f, a);
        let l = left(&f.reflect(), a).reflect();
        assert!(r.sub(&l).unwrap().norms().sup <= 1e-12);
    }
    let r = rl_deriv_right(&f, a);
    let l = rl_deriv_left(&f.reflect(), a);
    assert!(r.values.sub(&l.values.reflect()).unwrap().norms().sup <= 1e-12);
    assert_eq!(r.unbounded, Some(300));
    assert_eq!(l.unbounded, Some(0));
}

#[test]
fn execution_modes_agree_bitwise() {
    let f = sample(smooth, 777);
    let a = order(0.63);
    for (s, p) in [
        (
            rl_integral_left_with(&f, a, Exec::Seq),
            rl_integral_left_with(&f, a, Exec::Par),
        ),
        (
            rl_integral_right_with(&f, a, Exec::Seq),
            rl_integral_right_with(&f, a, Exec::Par),
        ),
        (
            caputo_left_with(&f, a, Exec::Seq),
            caputo_left_with(&f, a, Exec::Par),
        ),
        (
            caputo_right_with(&f, a, Exec::Seq),
            caputo_right_with(&f, a, Exec::Par),
        ),
    ] {
        assert_eq!(s, p);
    }
    assert_eq!(
        rl_deriv_left_with(&f, a, Exec::Seq),
        rl_deriv_left_with(&f, a, Exec::Par)
    );
    assert_eq!(
        rl_deriv_right_with(&f, a, Exec::Seq),
        rl_deriv_right_with(&f, a, Exec::Par)
    );
    for kind in OperatorKind::ALL {
        assert_eq!(apply(kind, &f, a), apply(kind, &f, a));
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operators_are_linear(
        cf in prop::collection::vec(-1.0..1.0f64, 1..5),
        cg in prop::collection::vec(-1.0..1.0f64, 1..5),
        mu in -3.0..3.0f64,
        nu in -3.0..3.0f64,
        alpha in 0.05..0.95f64,
    ) {
        let n = 129;
        let f = sample(|x| poly(&cf, x), n);
        let gx = sample(|x| poly(&cg, x), n);
        let combo = f.scale(mu).add(&gx.scale(nu)).unwrap();
        let a = order(alpha);
        for kind in OperatorKind::ALL {
            let lhs = apply(kind, &combo, a);
            let rhs = apply(kind, &f, a).scale(mu).add(&apply(kind, &gx, a).scale(nu)).unwrap();
            let err = lhs.sub(&rhs).unwrap().interior_sup();
            prop_assert!(err <= 1e-10, "{:?}: {}", kind, err);
        }
    }

    #[test]
    fn reflection_law_for_random_samples(
        values in prop::collection::vec(-5.0..5.0f64, 3..80),
        alpha in 0.05..0.95f64,
    ) {
        let gr = Grid::new(-0.5, 2.0, values.len()).unwrap();
        let f = GridFunction::new(gr, values).unwrap();
        let a = order(alpha);
        let r = rl_integral_right(&f, a);
        let l = rl_integral_left(&f.reflect(), a).reflect();
        prop_assert!(r.sub(&l).unwrap().norms().sup <= 1e-12);
        let r = caputo_right(&f, a);
        let l = caputo_left(&f.reflect(), a).reflect();
        prop_assert!(r.sub(&l).unwrap().norms().sup <= 1e-12);
    }
}
