//! Truncated Taylor arithmetic in one variable.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `f^(k)(r0) / k!` for
//! `k = 0..=ORDER`. Products, quotients and elementary functions follow the
//! usual recurrences, so derivatives up to order four are exact up to
//! rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const ORDER: usize = 4;
const LEN: usize = ORDER + 1;
const FACT: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; LEN],
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Jet { c: [v, 0.0, 0.0, 0.0, 0.0] }
    }

    pub const fn zero() -> Self {
        Jet::constant(0.0)
    }

    /// The independent variable at `r`.
    pub const fn var(r: f64) -> Self {
        Jet { c: [r, 1.0, 0.0, 0.0, 0.0] }
    }

    /// Build from derivative values `[f, f', f'', f''', f'''']`.
    pub fn from_derivs(d: [f64; LEN]) -> Self {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            c[k] = d[k] / FACT[k];
        }
        Jet { c }
    }

    /// `r^p` expanded around `r > 0`.
    pub fn var_pow(r: f64, p: f64) -> Self {
        let mut c = [0.0; LEN];
        let base = r.powf(p);
        let mut binom = 1.0;
        for (k, ck) in c.iter_mut().enumerate() {
            if k > 0 {
                binom *= (p - (k as f64 - 1.0)) / k as f64;
            }
            *ck = binom * base / r.powi(k as i32);
        }
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative.
    pub fn d(&self, k: usize) -> f64 {
        self.c[k] * FACT[k]
    }

    pub fn derivs(&self) -> [f64; LEN] {
        let mut d = [0.0; LEN];
        for k in 0..LEN {
            d[k] = self.d(k);
        }
        d
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v *= s;
        }
        Jet { c }
    }

    /// Derivative jet (loses the top coefficient).
    pub fn deriv(&self) -> Self {
        let mut c = [0.0; LEN];
        for k in 0..ORDER {
            c[k] = (k as f64 + 1.0) * self.c[k + 1];
        }
        Jet { c }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    pub fn exp(&self) -> Self {
        let mut e = [0.0; LEN];
        e[0] = self.c[0].exp();
        for k in 1..LEN {
            let mut s = 0.0;
            for i in 1..=k {
                s += i as f64 * self.c[i] * e[k - i];
            }
            e[k] = s / k as f64;
        }
        Jet { c: e }
    }

    pub fn ln(&self) -> Self {
        let a = &self.c;
        let mut l = [0.0; LEN];
        l[0] = a[0].ln();
        for k in 1..LEN {
            let mut s = 0.0;
            for i in 1..k {
                s += i as f64 * l[i] * a[k - i];
            }
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet { c: l }
    }

    /// `self^p` for a positive leading coefficient.
    pub fn powf(&self, p: f64) -> Self {
        let a = &self.c;
        let mut w = [0.0; LEN];
        w[0] = a[0].powf(p);
        for k in 1..LEN {
            let mut s = 0.0;
            for i in 1..=k {
                s += (p * i as f64 - (k - i) as f64) * a[i] * w[k - i];
            }
            w[k] = s / (k as f64 * a[0]);
        }
        Jet { c: w }
    }

    pub fn sqr(&self) -> Self {
        *self * *self
    }

    /// Compose an outer Taylor series (expanded at `inner.value()`) with `inner`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Self {
        let mut delta = *inner;
        delta.c[0] = 0.0;
        let mut out = Jet::constant(outer.c[0]);
        let mut pw = Jet::constant(1.0);
        for k in 1..LEN {
            pw = pw * delta;
            out = out + pw.scale(outer.c[k]);
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..LEN {
            c[k] += o.c[k];
        }
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..LEN {
            c[k] -= o.c[k];
        }
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            let mut s = 0.0;
            for i in 0..=k {
                s += self.c[i] * o.c[k - i];
            }
            c[k] = s;
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, b: Jet) -> Jet {
        let mut q = [0.0; LEN];
        for k in 0..LEN {
            let mut s = self.c[k];
            for i in 1..=k {
                s -= b.c[i] * q[k - i];
            }
            q[k] = s / b.c[0];
        }
        Jet { c: q }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        let mut c = self.c;
        c[0] += o;
        Jet { c }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}
