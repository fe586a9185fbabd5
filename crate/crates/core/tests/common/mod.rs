//! Independent reference values for integration tests.
//!
//! Everything here is computed by adaptive Gauss-Kronrod quadrature of the
//! defining integrals, after substitutions that remove the weakly singular
//! kernels. Nothing calls into the discrete operators under test.

#![allow(dead_code)]

use fracvar::mittag::{gamma, ml_power, MlParams};

pub mod exprs;
pub mod ml_data;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive 15-point Gauss-Kronrod quadrature of `f` on `[a, b]`: the
/// interval with the largest error estimate is bisected until the total
/// estimate drops below `1e-14 max(1, |I|)` or 4000 pieces exist.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= 1e-14 * total.abs().max(1.0) || pieces.len() >= 4000 {
            return total;
        }
        let (k, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = pieces.swap_remove(k);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return total;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// `aI_x^α f` using `x - t = s^(1/α)`, which turns the kernel into a constant.
pub fn rl_integral_left<F: Fn(f64) -> f64>(f: F, a: f64, x: f64, alpha: f64) -> f64 {
    let top = (x - a).powf(alpha);
    quad(|s| f(x - s.powf(1.0 / alpha)), 0.0, top) / (alpha * gamma(alpha).unwrap())
}

/// `xI_b^α f`.
pub fn rl_integral_right<F: Fn(f64) -> f64>(f: F, x: f64, b: f64, alpha: f64) -> f64 {
    let top = (b - x).powf(alpha);
    quad(|s| f(x + s.powf(1.0 / alpha)), 0.0, top) / (alpha * gamma(alpha).unwrap())
}

/// `aᶜD_x^α f = aI_x^(1-α) f'` from the closed-form derivative `df`.
pub fn caputo_left<F: Fn(f64) -> f64>(df: F, a: f64, x: f64, alpha: f64) -> f64 {
    rl_integral_left(df, a, x, 1.0 - alpha)
}

/// `xD_B^α f = -(d/dx) xI_B^(1-α) f`, by a Richardson-extrapolated central
/// difference of quadrature values.
pub fn rl_deriv_right<F: Fn(f64) -> f64 + Copy>(f: F, x: f64, big_b: f64, alpha: f64) -> f64 {
    let i = |t: f64| rl_integral_right(f, t, big_b, 1.0 - alpha);
    let d = |h: f64| (i(x + h) - i(x - h)) / (2.0 * h);
    let h = 1e-3 * (big_b - x).min(1.0);
    -(4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// `aD_x^α f = (d/dx) aI_x^(1-α) f`.
pub fn rl_deriv_left<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, x: f64, alpha: f64) -> f64 {
    let i = |t: f64| rl_integral_left(f, a, t, 1.0 - alpha);
    let d = |h: f64| (i(x + h) - i(x - h)) / (2.0 * h);
    let h = 1e-3 * (x - a).min(1.0);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// `E_α(x^α)`.
pub fn eigen(alpha: f64, x: f64) -> f64 {
    ml_power(alpha, x, MlParams::default()).unwrap().value
}

/// `∫_0^1 E_α(x^α)^2 dx`, with `x = s^(1/α)` to smooth the `x^α` cusp.
pub fn eigen_square_integral(alpha: f64) -> f64 {
    let p = 1.0 / alpha;
    quad(
        |s| {
            let x = s.powf(p);
            let e = eigen(alpha, x);
            e * e * p * s.powf(p - 1.0)
        },
        0.0,
        1.0,
    )
}
