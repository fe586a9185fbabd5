use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value plus a gradient with respect to `(x, y, ca, cb)`.
///
/// Chain-rule products skip tangent components that are exactly zero, so an
/// infinite local derivative (e.g. `sqrt` at 0) only poisons the directions
/// that actually flow through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual4 {
    pub value: f64,
    pub d: [f64; 4],
}

fn scaled(f: f64, d: [f64; 4]) -> [f64; 4] {
    d.map(|t| if t == 0.0 { 0.0 } else { f * t })
}

fn combine(fa: f64, da: [f64; 4], fb: f64, db: [f64; 4]) -> [f64; 4] {
    let a = scaled(fa, da);
    let b = scaled(fb, db);
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

impl Dual4 {
    pub fn constant(value: f64) -> Self {
        Dual4 { value, d: [0.0; 4] }
    }

    /// Independent variable `k` (0..4).
    pub fn variable(value: f64, k: usize) -> Self {
        let mut d = [0.0; 4];
        d[k] = 1.0;
        Dual4 { value, d }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d.iter().all(|t| t.is_finite())
    }

    /// Applies a scalar function with known derivative `df` at `self.value`.
    pub fn chain(self, value: f64, df: f64) -> Self {
        Dual4 {
            value,
            d: scaled(df, self.d),
        }
    }

    pub fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.value.ln(), 1.0 / self.value)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s)
    }

    pub fn abs(self) -> Self {
        let sign = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.value.abs(), sign)
    }

    pub fn powd(self, e: Dual4) -> Self {
        let (a, b) = (self.value, e.value);
        let p = a.powf(b);
        let fa = if b == 0.0 { 0.0 } else { b * a.powf(b - 1.0) };
        let fb = if a == 0.0 { 0.0 } else { p * a.ln() };
        Dual4 {
            value: p,
            d: combine(fa, self.d, fb, e.d),
        }
    }
}

impl Add for Dual4 {
    type Output = Dual4;
    fn add(self, o: Dual4) -> Dual4 {
        Dual4 {
            value: self.value + o.value,
            d: combine(1.0, self.d, 1.0, o.d),
        }
    }
}

impl Sub for Dual4 {
    type Output = Dual4;
    fn sub(self, o: Dual4) -> Dual4 {
        Dual4 {
            value: self.value - o.value,
            d: combine(1.0, self.d, -1.0, o.d),
        }
    }
}

impl Mul for Dual4 {
    type Output = Dual4;
    fn mul(self, o: Dual4) -> Dual4 {
        Dual4 {
            value: self.value * o.value,
            d: combine(o.value, self.d, self.value, o.d),
        }
    }
}

impl Div for Dual4 {
    type Output = Dual4;
    fn div(self, o: Dual4) -> Dual4 {
        let q = self.value / o.value;
        Dual4 {
            value: q,
            d: combine(1.0 / o.value, self.d, -q / o.value, o.d),
        }
    }
}

impl Neg for Dual4 {
    type Output = Dual4;
    fn neg(self) -> Dual4 {
        Dual4 {
            value: -self.value,
            d: scaled(-1.0, self.d),
        }
    }
}
