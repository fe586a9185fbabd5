//! Gamma and one-parameter Mittag-Leffler functions.
//!
//! `E_α(z) = Σ z^k / Γ(αk + 1)` is summed directly from its power series;
//! the arguments this crate needs (`z = x^α` with `x` in a unit-scale
//! interval) keep the series well behaved.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Γ(x + 1) form).
    LANCZOS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (x + i as f64))
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Euler's gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 171.0 {
        // exact for small integers
        return Ok(factorial(x as usize - 1));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so t^(z+1/2) does not overflow before Γ does
    let half = t.powf(0.5 * (z + 0.5));
    Ok(SQRT_2PI * half * (-t).exp() * half * lanczos_sum(z))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub truncation_tol: f64,
    pub max_terms: usize,
}

impl Default for MlParams {
    fn default() -> Self {
        MlParams {
            truncation_tol: 1e-14,
            max_terms: 400,
        }
    }
}

impl MlParams {
    pub fn new(truncation_tol: f64, max_terms: usize) -> Result<Self> {
        if !(truncation_tol > 0.0) || max_terms < 1 {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler params need truncation_tol > 0 and max_terms >= 1 (got {truncation_tol}, {max_terms})"
            )));
        }
        Ok(MlParams {
            truncation_tol,
            max_terms,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlValue {
    pub value: f64,
    /// Number of series terms summed.
    pub terms: usize,
    /// False when `max_terms` was reached with the tail still above tolerance.
    pub converged: bool,
}

/// Precomputed coefficients `1/Γ(αk + 1)` for repeated evaluation at a
/// fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct MlSeries {
    alpha: f64,
    params: MlParams,
    inv_gamma: Vec<f64>,
    neg_ln_gamma: Vec<f64>,
}

impl MlSeries {
    pub fn new(alpha: f64, params: MlParams) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler order must be > 0, got {alpha}"
            )));
        }
        let mut inv_gamma = Vec::with_capacity(params.max_terms);
        let mut neg_ln_gamma = Vec::with_capacity(params.max_terms);
        for k in 0..params.max_terms {
            let arg = alpha * k as f64 + 1.0;
            let lg = ln_gamma(arg)?;
            neg_ln_gamma.push(-lg);
            inv_gamma.push(if arg < 171.0 { 1.0 / gamma(arg)? } else { 0.0 });
        }
        Ok(MlSeries {
            alpha,
            params,
            inv_gamma,
            neg_ln_gamma,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `∫_0^len E_α(x^α)^2 dx` from the Cauchy product of the series,
    /// integrated term by term.
    pub fn square_integral(&self, len: f64) -> Result<MlValue> {
        if !(len >= 0.0) || !len.is_finite() {
            return Err(Error::Domain(format!(
                "integration length must be >= 0, got {len}"
            )));
        }
        let ig = &self.inv_gamma;
        let tol = self.params.truncation_tol;
        let mut total: f64 = 0.0;
        let mut prev = f64::INFINITY;
        for m in 0..ig.len() {
            let c: f64 = (0..=m).map(|j| ig[j] * ig[m - j]).sum();
            let p = self.alpha * m as f64 + 1.0;
            let t = c * len.powf(p) / p;
            if m > 0 && t < tol * total.max(1.0) && t <= prev {
                return Ok(MlValue {
                    value: total,
                    terms: m,
                    converged: true,
                });
            }
            total += t;
            prev = t;
        }
        Ok(MlValue {
            value: total,
            terms: ig.len(),
            converged: false,
        })
    }

    fn term(&self, k: usize, power: f64, z: f64) -> f64 {
        let c = self.inv_gamma[k];
        if c != 0.0 && power.is_finite() {
            c * power
        } else {
            let mag = (k as f64 * z.abs().ln() + self.neg_ln_gamma[k]).exp();
            if z < 0.0 && k % 2 == 1 {
                -mag
            } else {
                mag
            }
        }
    }

    /// `E_α(z)`. Negative arguments are summed in consecutive pairs.
    pub fn eval(&self, z: f64) -> MlValue {
        self.sum(z, false).0
    }

    /// `E_α(z)` and `E_α'(z)`.
    pub fn eval_with_derivative(&self, z: f64) -> (MlValue, f64) {
        let (v, d) = self.sum(z, true);
        (v, d)
    }

    fn sum(&self, z: f64, want_derivative: bool) -> (MlValue, f64) {
        if z == 0.0 {
            let d = if self.inv_gamma.len() > 1 {
                self.inv_gamma[1]
            } else {
                0.0
            };
            return (
                MlValue {
                    value: 1.0,
                    terms: 1,
                    converged: true,
                },
                d,
            );
        }
        let tol = self.params.truncation_tol;
        let max_terms = self.params.max_terms;
        let pair = z < 0.0;
        let mut total: f64 = 0.0;
        let mut dtotal = 0.0;
        let mut power = 1.0;
        let mut prev_mag = f64::INFINITY;
        let mut pending = 0.0;
        let mut dpending = 0.0;
        let mut k = 0;
        let mut converged = false;
        while k < max_terms {
            let t = self.term(k, power, z);
            let mag = t.abs();
            if k > 0 && mag < tol * total.abs().max(1.0) && mag <= prev_mag {
                converged = true;
                break;
            }
            pending += t;
            if want_derivative && k > 0 {
                // d/dz z^k / Γ(αk+1) = k z^(k-1) / Γ(αk+1) = k t / z
                dpending += k as f64 * t / z;
            }
            if !pair || k % 2 == 1 {
                total += pending;
                dtotal += dpending;
                pending = 0.0;
                dpending = 0.0;
            }
            prev_mag = mag;
            power *= z;
            k += 1;
        }
        total += pending;
        dtotal += dpending;
        (
            MlValue {
                value: total,
                terms: k,
                converged,
            },
            dtotal,
        )
    }
}

/// `E_α(x)` with explicit truncation control.
pub fn ml(alpha: f64, x: f64, params: MlParams) -> Result<MlValue> {
    Ok(MlSeries::new(alpha, params)?.eval(x))
}

/// `E_α(x^α)` for `x >= 0`; the Caputo eigenfunction on `[0, ∞)`.
pub fn ml_power(alpha: f64, x: f64, params: MlParams) -> Result<MlValue> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("ml_power requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        // validate alpha even on the trivial branch
        MlParams::new(params.truncation_tol, params.max_terms)?;
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler order must be > 0, got {alpha}"
            )));
        }
        return Ok(MlValue {
            value: 1.0,
            terms: 1,
            converged: true,
        });
    }
    ml(alpha, x.powf(alpha), params)
}

/// `E_α(x)` with default parameters.
pub fn mittag_leffler(alpha: f64, x: f64) -> Result<f64> {
    Ok(ml(alpha, x, MlParams::default())?.value)
}
