//! Radial profile families with exact derivatives up to order four.
//!
//! Every profile evaluates to a [`Jet`] at a radius, so value, `d1`, `d2`
//! and the higher derivatives used by the Euler-Lagrange checks all come
//! from the same truncated Taylor expansion.

use std::sync::Arc;

use crate::constants::{c_k, extremal_normalizer, SwCase};
use crate::jet::{Jet, ORDER};
use crate::quadrature::{integrate_gl, RadialIntegrand};
use crate::{Error, Result};

/// Declared power behavior `O(r^zero)` as `r -> 0` and `O(r^inf)` as `r -> inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponents {
    pub zero: f64,
    pub inf: f64,
}

impl Exponents {
    pub const fn new(zero: f64, inf: f64) -> Self {
        Exponents { zero, inf }
    }

    /// Exponents of a product.
    pub fn mul(self, o: Exponents) -> Exponents {
        Exponents::new(self.zero + o.zero, self.inf + o.inf)
    }

    /// Exponents of a sum.
    pub fn join(self, o: Exponents) -> Exponents {
        Exponents::new(self.zero.min(o.zero), self.inf.max(o.inf))
    }

    pub fn shift(self, p: f64) -> Exponents {
        Exponents::new(self.zero + p, self.inf + p)
    }

    pub fn times(self, k: f64) -> Exponents {
        Exponents::new(self.zero * k, self.inf * k)
    }
}

/// `amp r^p (c + k r^s)^{-q}`
#[derive(Clone, Copy, Debug, PartialEq)]
struct Bubble {
    amp: f64,
    p: f64,
    c: f64,
    k: f64,
    s: f64,
    q: f64,
}

impl Bubble {
    fn jet(&self, r: f64) -> Jet {
        if r > 1.0 {
            // r^{p-qs} (k + c r^{-s})^{-q} keeps both factors finite for huge r
            let base = Jet::var_pow(r, -self.s).scale(self.c) + self.k;
            return base.powf(-self.q).scale(self.amp) * Jet::var_pow(r, self.p - self.q * self.s);
        }
        let base = Jet::var_pow(r, self.s).scale(self.k) + self.c;
        let mut j = base.powf(-self.q).scale(self.amp);
        if self.p != 0.0 {
            j = j * Jet::var_pow(r, self.p);
        }
        j
    }

    fn exponents(&self, order: usize) -> Exponents {
        let k = order as f64;
        let zero = if order == 0 {
            self.p
        } else if self.p == 0.0 {
            self.s - k
        } else {
            self.p - k
        };
        Exponents::new(zero, self.p - self.q * self.s - k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadialProfile {
    /// `A lambda^{(N-4-g)/2} (1 + (lambda r)^{2+g})^{-(N-4-g)/(2+g)}`
    CknExtremal { amp: f64, lambda: f64, n: u32, gamma: f64 },
    /// `A (lambda + r^{2+b-a})^{-(N-4+2a-b)/(2+b-a)}`
    DivExtremal { amp: f64, lambda: f64, n: u32, alpha: f64, beta: f64 },
    /// `A r^{-(mu-g)/2} (lambda + r^{(2+g) zeta})^{-(N-4-g)/(2+g)}`
    RsExtremal { amp: f64, lambda: f64, n: u32, gamma: f64, mu: f64 },
    /// `A r^{2+b-a} (1 + r^{a-b-2})^{-(N+b)/(a-b-2)}`
    SingularExtremal { amp: f64, n: u32, alpha: f64, beta: f64 },
    /// First member of the Stein-Weiss extremal pair.
    SwF { amp: f64, c: f64, n: u32, b: f64, case: SwCase },
    /// Second member of the Stein-Weiss extremal pair.
    SwG { amp: f64, c: f64, n: u32, b: f64, case: SwCase },
    /// `r^{-(N-4-2a)/2 - eps} g(r)` with `g` the smooth cutoff.
    PowerCut { n: u32, a: f64, eps: f64 },
    /// `int_r^inf t^{-1-eps} g(t) dt`, constant on `(0, 1]`.
    TailIntegral { eps: f64, plateau: f64 },
    /// `exp(-((r - center)/width)^2)`
    GaussBump { center: f64, width: f64 },
    /// 0 on `(0, 1]`, 1 on `[2, inf)`, smooth in between.
    SmoothCutoff,
    /// `coef r^p`
    Power { coef: f64, p: f64 },
    /// `lambda^h inner(lambda r)`
    Scaled { inner: Arc<RadialProfile>, lambda: f64, h: f64 },
    /// `sum w_i f_i`
    Sum(Arc<Vec<(f64, RadialProfile)>>),
    Product(Arc<RadialProfile>, Arc<RadialProfile>),
    /// `r^p inner(r)`
    PowerTimes { p: f64, inner: Arc<RadialProfile> },
    /// `inner(r^zeta)`
    PowerArg { zeta: f64, inner: Arc<RadialProfile> },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Invalid(format!("{name}={v} must be positive")));
    }
    Ok(())
}

fn sw_exponents(n: u32, b: f64, case: SwCase) -> (f64, f64, f64) {
    let nf = n as f64;
    match case {
        SwCase::Diagonal => (
            -b * (nf + 2.0 - 2.0 * b) / (nf - 2.0 + 2.0 * b),
            2.0 * (nf - 2.0) * (1.0 - b) / (nf - 2.0 + 2.0 * b),
            (nf + 2.0 - 2.0 * b) / (2.0 * (1.0 - b)),
        ),
        SwCase::TSquared => (
            -b * (nf + 4.0 - 6.0 * b) / (nf - 2.0 * b),
            2.0 - 2.0 * b,
            (nf + 4.0 - 6.0 * b) / (2.0 - 2.0 * b),
        ),
    }
}

fn smooth_step(t: f64) -> Jet {
    // psi(t) / (psi(t) + psi(1-t)) with psi(t) = exp(-1/t)
    if t <= 0.0 {
        return Jet::zero();
    }
    if t >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = Jet::var(t).recip().scale(-1.0).exp();
    let u = Jet { c: [1.0 - t, -1.0, 0.0, 0.0, 0.0] };
    let b = u.recip().scale(-1.0).exp();
    a / (a + b)
}

fn cutoff_jet(r: f64) -> Jet {
    smooth_step(r - 1.0)
}

fn tail_density(eps: f64, r: f64) -> Jet {
    Jet::var_pow(r, -1.0 - eps) * cutoff_jet(r)
}

fn tail_mass(eps: f64, a: f64, b: f64) -> f64 {
    let panels = ((b - a) * 64.0).ceil().max(1.0) as usize;
    integrate_gl(|t| tail_density(eps, t).value(), a, b, panels)
}

impl RadialProfile {
    pub fn ckn_extremal(amp: f64, lambda: f64, n: u32, gamma: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        if n < 5 || !(gamma > -2.0 && gamma < n as f64 - 4.0) {
            return Err(Error::Invalid(format!("CKN extremal needs N >= 5, -2 < gamma < N-4; got N={n}, gamma={gamma}")));
        }
        Ok(RadialProfile::CknExtremal { amp, lambda, n, gamma })
    }

    /// The extremal normalized so that `U(0) = C_{N,gamma}`.
    pub fn ckn_normalized(n: u32, gamma: f64) -> Result<Self> {
        Self::ckn_extremal(extremal_normalizer(n, gamma)?, 1.0, n, gamma)
    }

    pub fn div_extremal(amp: f64, lambda: f64, n: u32, alpha: f64, beta: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        let nf = n as f64;
        if 2.0 + beta - alpha <= 0.0 || nf - 4.0 + 2.0 * alpha - beta <= 0.0 {
            return Err(Error::Invalid(format!("div extremal needs 2+beta-alpha > 0 and N-4+2alpha-beta > 0; got alpha={alpha}, beta={beta}")));
        }
        Ok(RadialProfile::DivExtremal { amp, lambda, n, alpha, beta })
    }

    pub fn rs_extremal(amp: f64, lambda: f64, n: u32, gamma: f64, mu: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        crate::constants::RsParams::new(n, gamma, mu)?;
        Ok(RadialProfile::RsExtremal { amp, lambda, n, gamma, mu })
    }

    pub fn singular_extremal(amp: f64, n: u32, alpha: f64, beta: f64) -> Result<Self> {
        if alpha - beta - 2.0 <= 0.0 || n as f64 + beta <= 0.0 {
            return Err(Error::Invalid(format!("singular extremal needs alpha-beta-2 > 0 and N+beta > 0; got alpha={alpha}, beta={beta}")));
        }
        Ok(RadialProfile::SingularExtremal { amp, n, alpha, beta })
    }

    pub fn sw_f(amp: f64, c: f64, n: u32, b: f64, case: SwCase) -> Result<Self> {
        positive("c", c)?;
        crate::constants::SwParams::new(n, b, case)?;
        Ok(RadialProfile::SwF { amp, c, n, b, case })
    }

    pub fn sw_g(amp: f64, c: f64, n: u32, b: f64, case: SwCase) -> Result<Self> {
        positive("c", c)?;
        crate::constants::SwParams::new(n, b, case)?;
        Ok(RadialProfile::SwG { amp, c, n, b, case })
    }

    pub fn power_cut(n: u32, a: f64, eps: f64) -> Result<Self> {
        positive("eps", eps)?;
        Ok(RadialProfile::PowerCut { n, a, eps })
    }

    pub fn tail_integral(eps: f64) -> Result<Self> {
        positive("eps", eps)?;
        let plateau = tail_mass(eps, 1.0, 2.0);
        Ok(RadialProfile::TailIntegral { eps, plateau })
    }

    pub fn gauss_bump(center: f64, width: f64) -> Result<Self> {
        positive("width", width)?;
        Ok(RadialProfile::GaussBump { center, width })
    }

    pub fn smooth_cutoff() -> Self {
        RadialProfile::SmoothCutoff
    }

    pub fn power(coef: f64, p: f64) -> Self {
        RadialProfile::Power { coef, p }
    }

    pub fn sum(terms: Vec<(f64, RadialProfile)>) -> Self {
        RadialProfile::Sum(Arc::new(terms))
    }

    pub fn product(a: RadialProfile, b: RadialProfile) -> Self {
        RadialProfile::Product(Arc::new(a), Arc::new(b))
    }

    pub fn times_power(self, p: f64) -> Self {
        if p == 0.0 {
            return self;
        }
        RadialProfile::PowerTimes { p, inner: Arc::new(self) }
    }

    pub fn of_power(self, zeta: f64) -> Result<Self> {
        positive("zeta", zeta)?;
        if zeta == 1.0 {
            return Ok(self);
        }
        Ok(RadialProfile::PowerArg { zeta, inner: Arc::new(self) })
    }

    /// `lambda^h u(lambda r)` with an explicit homogeneity exponent.
    pub fn scaled(self, lambda: f64, h: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(RadialProfile::Scaled { inner: Arc::new(self), lambda, h })
    }

    /// Exponent `h` such that `lambda^h u(lambda x)` is the family's own scaling.
    pub fn natural_homogeneity(&self) -> f64 {
        match self {
            RadialProfile::CknExtremal { n, gamma, .. } => (*n as f64 - 4.0 - gamma) / 2.0,
            RadialProfile::DivExtremal { n, alpha, beta, .. } | RadialProfile::SingularExtremal { n, alpha, beta, .. } => {
                (*n as f64 - 4.0 + 2.0 * alpha - beta) / 2.0
            }
            RadialProfile::RsExtremal { n, mu, .. } => (*n as f64 - 4.0 - mu) / 2.0,
            _ => 0.0,
        }
    }

    fn bubble(&self) -> Option<Bubble> {
        Some(match *self {
            RadialProfile::CknExtremal { amp, lambda, n, gamma } => {
                let nf = n as f64;
                let s = 2.0 + gamma;
                Bubble {
                    amp: amp * lambda.powf((nf - 4.0 - gamma) / 2.0),
                    p: 0.0,
                    c: 1.0,
                    k: lambda.powf(s),
                    s,
                    q: (nf - 4.0 - gamma) / s,
                }
            }
            RadialProfile::DivExtremal { amp, lambda, n, alpha, beta } => {
                let s = 2.0 + beta - alpha;
                Bubble { amp, p: 0.0, c: lambda, k: 1.0, s, q: (n as f64 - 4.0 + 2.0 * alpha - beta) / s }
            }
            RadialProfile::RsExtremal { amp, lambda, n, gamma, mu } => {
                let nf = n as f64;
                let zeta = (nf - 4.0 - mu) / (nf - 4.0 - gamma);
                Bubble { amp, p: -(mu - gamma) / 2.0, c: lambda, k: 1.0, s: (2.0 + gamma) * zeta, q: (nf - 4.0 - gamma) / (2.0 + gamma) }
            }
            RadialProfile::SingularExtremal { amp, n, alpha, beta } => {
                let s = alpha - beta - 2.0;
                Bubble { amp, p: 2.0 + beta - alpha, c: 1.0, k: 1.0, s, q: (n as f64 + beta) / s }
            }
            RadialProfile::SwF { amp, c, n, b, case } => {
                let (p, s, q) = sw_exponents(n, b, case);
                Bubble { amp, p, c, k: 1.0, s, q }
            }
            RadialProfile::SwG { amp, c, n, b, case: SwCase::Diagonal } => {
                let (p, s, q) = sw_exponents(n, b, SwCase::Diagonal);
                Bubble { amp, p, c, k: 1.0, s, q }
            }
            _ => return None,
        })
    }

    /// The two bubbles making up the t = 2 second member.
    fn sw_g_t2(amp: f64, c: f64, n: u32, b: f64) -> [Bubble; 2] {
        let nf = n as f64;
        let s = 2.0 - 2.0 * b;
        let q = (nf - 2.0 * b) / s;
        [
            Bubble { amp: amp * (nf - 2.0 * b) * c, p: -b, c, k: 1.0, s, q },
            Bubble { amp: amp * s, p: s - b, c, k: 1.0, s, q },
        ]
    }

    /// Taylor jet at `r > 0`.
    pub fn jet(&self, r: f64) -> Jet {
        if let Some(bb) = self.bubble() {
            return bb.jet(r);
        }
        match self {
            RadialProfile::SwG { amp, c, n, b, .. } => {
                let [x, y] = Self::sw_g_t2(*amp, *c, *n, *b);
                x.jet(r) + y.jet(r)
            }
            RadialProfile::PowerCut { n, a, eps } => {
                if r <= 1.0 {
                    return Jet::zero();
                }
                let m = (*n as f64 - 4.0 - 2.0 * a) / 2.0;
                Jet::var_pow(r, -m - eps) * cutoff_jet(r)
            }
            RadialProfile::TailIntegral { eps, plateau } => {
                let top = 2f64.powf(-eps) / eps;
                if r <= 1.0 {
                    return Jet::constant(top + plateau);
                }
                if r >= 2.0 {
                    return Jet::var_pow(r, -eps).scale(1.0 / eps);
                }
                let h = tail_density(*eps, r);
                let rest = tail_mass(*eps, r, 2.0);
                let mut out = Jet::constant(top + rest);
                for k in 1..=ORDER {
                    out.c[k] = -h.c[k - 1] / k as f64;
                }
                out
            }
            RadialProfile::GaussBump { center, width } => {
                let x = (Jet::var(r) + (-center)).scale(1.0 / width);
                (-x.sqr()).exp()
            }
            RadialProfile::SmoothCutoff => cutoff_jet(r),
            RadialProfile::Power { coef, p } => Jet::var_pow(r, *p).scale(*coef),
            RadialProfile::Scaled { inner, lambda, h } => {
                let mut j = inner.jet(lambda * r);
                let mut f = lambda.powf(*h);
                for k in 0..=ORDER {
                    j.c[k] *= f;
                    f *= lambda;
                }
                j
            }
            RadialProfile::Sum(terms) => terms.iter().fold(Jet::zero(), |acc, (w, p)| acc + p.jet(r).scale(*w)),
            RadialProfile::Product(a, b) => a.jet(r) * b.jet(r),
            RadialProfile::PowerTimes { p, inner } => Jet::var_pow(r, *p) * inner.jet(r),
            RadialProfile::PowerArg { zeta, inner } => {
                let t = Jet::var_pow(r, *zeta);
                Jet::compose(&inner.jet(t.value()), &t)
            }
            _ => unreachable!("bubble families handled above"),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r).value()
    }

    pub fn d1(&self, r: f64) -> f64 {
        self.jet(r).d(1)
    }

    pub fn d2(&self, r: f64) -> f64 {
        self.jet(r).d(2)
    }

    /// Declared power behavior of the derivative of the given order.
    pub fn exponents(&self, order: usize) -> Exponents {
        const INF: f64 = f64::INFINITY;
        let k = order as f64;
        if let Some(bb) = self.bubble() {
            return bb.exponents(order);
        }
        match self {
            RadialProfile::SwG { amp, c, n, b, .. } => {
                let [x, y] = Self::sw_g_t2(*amp, *c, *n, *b);
                x.exponents(order).join(y.exponents(order))
            }
            RadialProfile::PowerCut { n, a, eps } => {
                let m = (*n as f64 - 4.0 - 2.0 * a) / 2.0;
                Exponents::new(INF, -m - eps - k)
            }
            RadialProfile::TailIntegral { eps, .. } => Exponents::new(if order == 0 { 0.0 } else { INF }, -eps - k),
            RadialProfile::GaussBump { .. } => Exponents::new(0.0, -INF),
            RadialProfile::SmoothCutoff => Exponents::new(INF, if order == 0 { 0.0 } else { -INF }),
            RadialProfile::Power { p, .. } => Exponents::new(p - k, p - k),
            RadialProfile::Scaled { inner, .. } => inner.exponents(order),
            RadialProfile::Sum(terms) => terms
                .iter()
                .filter(|(w, _)| *w != 0.0)
                .map(|(_, p)| p.exponents(order))
                .reduce(Exponents::join)
                .unwrap_or(Exponents::new(INF, -INF)),
            RadialProfile::Product(a, b) => (0..=order)
                .map(|i| a.exponents(i).mul(b.exponents(order - i)))
                .reduce(Exponents::join)
                .unwrap(),
            RadialProfile::PowerTimes { p, inner } => (0..=order)
                .map(|i| inner.exponents(order - i).shift(p - i as f64))
                .reduce(Exponents::join)
                .unwrap(),
            RadialProfile::PowerArg { zeta, inner } => {
                if order == 0 {
                    return inner.exponents(0).times(*zeta);
                }
                (1..=order)
                    .map(|j| inner.exponents(j).times(*zeta).shift(j as f64 * zeta - k))
                    .reduce(Exponents::join)
                    .unwrap()
            }
            _ => unreachable!(),
        }
    }

    /// Radius below which the profile vanishes identically (0 if none).
    pub fn support_start(&self) -> f64 {
        match self {
            RadialProfile::PowerCut { .. } | RadialProfile::SmoothCutoff => 1.0,
            RadialProfile::Scaled { inner, lambda, .. } => inner.support_start() / lambda,
            RadialProfile::Sum(terms) => {
                let m = terms.iter().filter(|(w, _)| *w != 0.0).map(|(_, p)| p.support_start()).fold(f64::INFINITY, f64::min);
                if m.is_finite() {
                    m
                } else {
                    0.0
                }
            }
            RadialProfile::Product(a, b) => a.support_start().max(b.support_start()),
            RadialProfile::PowerTimes { inner, .. } => inner.support_start(),
            RadialProfile::PowerArg { zeta, inner } => inner.support_start().powf(1.0 / zeta),
            _ => 0.0,
        }
    }

    /// Radii where the profile is only piecewise analytic.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = match self {
            RadialProfile::PowerCut { .. } | RadialProfile::TailIntegral { .. } | RadialProfile::SmoothCutoff => vec![1.0, 2.0],
            RadialProfile::Scaled { inner, lambda, .. } => inner.breakpoints().iter().map(|b| b / lambda).collect(),
            RadialProfile::Sum(terms) => terms.iter().flat_map(|(_, p)| p.breakpoints()).collect(),
            RadialProfile::Product(a, b) => {
                let mut v = a.breakpoints();
                v.extend(b.breakpoints());
                v
            }
            RadialProfile::PowerTimes { inner, .. } => inner.breakpoints(),
            RadialProfile::PowerArg { zeta, inner } => inner.breakpoints().iter().map(|b| b.powf(1.0 / zeta)).collect(),
            _ => Vec::new(),
        };
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    }

    /// Radius beyond which the profile is an exact power of `r`.
    pub fn power_tail(&self) -> Option<f64> {
        match self {
            RadialProfile::PowerCut { .. } | RadialProfile::TailIntegral { .. } | RadialProfile::SmoothCutoff => Some(2.0),
            RadialProfile::Power { .. } => Some(1.0),
            RadialProfile::Scaled { inner, lambda, .. } => inner.power_tail().map(|t| t / lambda),
            RadialProfile::Sum(terms) => terms
                .iter()
                .map(|(_, p)| p.power_tail())
                .try_fold(0.0f64, |acc, t| t.map(|t| acc.max(t))),
            RadialProfile::Product(a, b) => Some(a.power_tail()?.max(b.power_tail()?)),
            RadialProfile::PowerTimes { inner, .. } => inner.power_tail(),
            RadialProfile::PowerArg { zeta, inner } => inner.power_tail().map(|t| t.powf(1.0 / zeta)),
            _ => None,
        }
    }

    /// Integrand `r -> F(jet(r), r)` carrying this profile's support data.
    pub fn integrand(&self, exps: Exponents, f: impl Fn(&Jet, f64) -> f64 + Send + Sync + 'static) -> RadialIntegrand {
        let me = self.clone();
        let mut ri = RadialIntegrand::new(move |r| f(&me.jet(r), r), exps.zero, exps.inf)
            .with_support_start(self.support_start())
            .with_breakpoints(&self.breakpoints());
        if let Some(t) = self.power_tail() {
            ri = ri.with_power_tail(t);
        }
        ri
    }

    pub fn as_integrand(&self) -> RadialIntegrand {
        self.integrand(self.exponents(0), |j, _| j.value())
    }
}

/// `scale(u, lambda) = lambda^h u(lambda r)` with the family's own `h`.
pub fn scale(profile: &RadialProfile, lambda: f64) -> Result<RadialProfile> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("scale factor must be positive, got {lambda}")));
    }
    profile.clone().scaled(lambda, profile.natural_homogeneity())
}

pub fn smooth_cutoff() -> RadialProfile {
    RadialProfile::SmoothCutoff
}

/// Jet of `f'' + (N-1) f'/r` (valid to order 2).
pub fn laplacian_jet(j: &Jet, r: f64, n: u32) -> Jet {
    let d = j.deriv();
    d.deriv() + (d / Jet::var(r)).scale(n as f64 - 1.0)
}

pub fn radial_laplacian(profile: &RadialProfile, n: u32) -> impl Fn(f64) -> f64 + Clone + Send + Sync {
    let p = profile.clone();
    move |r| {
        let j = p.jet(r);
        j.d(2) + (n as f64 - 1.0) / r * j.d(1)
    }
}

/// `Delta(r^{-gamma} Delta u)` from the profile's Taylor jet.
pub fn weighted_bilaplacian(profile: &RadialProfile, n: u32, gamma: f64) -> impl Fn(f64) -> Result<f64> + Clone + Send + Sync {
    let p = profile.clone();
    move |r| {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let z = laplacian_jet(&p.jet(r), r, n) * Jet::var_pow(r, -gamma);
        let v = laplacian_jet(&z, r, n).value();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!("non-finite bilaplacian at r={r}")))
        }
    }
}

/// Same operator with the outer derivatives from Richardson-extrapolated
/// central differences of the analytic second derivative.
pub fn weighted_bilaplacian_fd(profile: &RadialProfile, n: u32, gamma: f64, h: f64) -> impl Fn(f64) -> Result<f64> + Clone + Send + Sync {
    let p = profile.clone();
    move |r| {
        if !(h > 0.0) || r - h <= 0.0 {
            return Err(Error::Domain(format!("stencil [{}, {}] leaves (0, inf)", r - h, r + h)));
        }
        let nf = n as f64;
        let z = |x: f64| {
            let j = p.jet(x);
            x.powf(-gamma) * (j.d(2) + (nf - 1.0) / x * j.d(1))
        };
        let z0 = z(r);
        let d1 = |h: f64| (z(r + h) - z(r - h)) / (2.0 * h);
        let d2 = |h: f64| (z(r + h) - 2.0 * z0 + z(r - h)) / (h * h);
        let zp = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
        let zpp = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
        Ok(zpp + (nf - 1.0) / r * zp)
    }
}

/// `f_k(r) Psi_k(sigma)` with `Psi_k` an L2-normalized spherical harmonic.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeFunction {
    pub k: u32,
    pub radial: RadialProfile,
}

impl ModeFunction {
    pub fn new(k: u32, radial: RadialProfile) -> Result<Self> {
        let z = radial.exponents(0).zero;
        if k >= 1 && z < k as f64 - 1e-12 {
            return Err(Error::Invalid(format!("mode k={k} needs f = O(r^{k}) at 0, declared exponent is {z}")));
        }
        Ok(ModeFunction { k, radial })
    }

    pub fn c_k(&self, n: u32) -> f64 {
        c_k(n, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn families() -> Vec<RadialProfile> {
        vec![
            RadialProfile::ckn_normalized(5, -1.0).unwrap(),
            RadialProfile::ckn_extremal(1.3, 2.0, 7, 0.0).unwrap(),
            RadialProfile::div_extremal(1.0, 1.5, 6, -2.0, -3.0).unwrap(),
            RadialProfile::rs_extremal(1.0, 0.7, 5, -1.0, 0.0).unwrap(),
            RadialProfile::singular_extremal(1.0, 5, -0.5, -3.0).unwrap(),
            RadialProfile::sw_f(1.0, 1.0, 5, 0.3, SwCase::Diagonal).unwrap(),
            RadialProfile::sw_f(1.0, 1.7, 5, 0.3, SwCase::TSquared).unwrap(),
            RadialProfile::sw_g(1.0, 1.7, 5, 0.3, SwCase::TSquared).unwrap(),
            RadialProfile::gauss_bump(1.2, 0.5).unwrap(),
            RadialProfile::power(2.0, 1.5),
            RadialProfile::gauss_bump(0.0, 1.0).unwrap().times_power(2.0),
            RadialProfile::gauss_bump(1.0, 0.7).unwrap().of_power(0.6).unwrap(),
            RadialProfile::ckn_normalized(6, 0.0).unwrap().scaled(2.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for p in families() {
            for i in 0..50 {
                let r = 10f64.powf(-2.0 + 4.0 * i as f64 / 49.0);
                if p.value(r).abs() < 1e-30 {
                    continue;
                }
                let h = 1e-4 * r;
                let c1 = |h: f64| (p.value(r + h) - p.value(r - h)) / (2.0 * h);
                let c2 = |h: f64| (p.d1(r + h) - p.d1(r - h)) / (2.0 * h);
                let fd1 = (4.0 * c1(h / 2.0) - c1(h)) / 3.0;
                let fd2 = (4.0 * c2(h / 2.0) - c2(h)) / 3.0;
                let s1 = p.d1(r).abs().max(p.value(r).abs() / r);
                let s2 = p.d2(r).abs().max(p.d1(r).abs() / r);
                assert!((fd1 - p.d1(r)).abs() <= 1e-7 * s1, "{p:?} d1 at {r}");
                assert!((fd2 - p.d2(r)).abs() <= 1e-7 * s2, "{p:?} d2 at {r}: fd {fd2} vs {} (d1 {})", p.d2(r), p.d1(r));
            }
        }
        let pc = RadialProfile::power_cut(5, 0.0, 0.1).unwrap();
        let ti = RadialProfile::tail_integral(0.1).unwrap();
        for p in [pc, ti, RadialProfile::SmoothCutoff] {
            for &r in &[0.5, 1.1, 1.3, 1.5, 1.9, 2.5, 7.0] {
                let h = 1e-5;
                let fd1 = (p.value(r + h) - p.value(r - h)) / (2.0 * h);
                assert!((fd1 - p.d1(r)).abs() <= 1e-7 * p.d1(r).abs().max(1e-3), "{p:?} at {r}");
            }
        }
    }

    #[test]
    fn extremal_value_at_origin() {
        for (n, g) in [(5u32, 0.0), (7, -1.0), (9, -1.5)] {
            let u = RadialProfile::ckn_normalized(n, g).unwrap();
            assert!(rel(u.value(1e-40), extremal_normalizer(n, g).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn scaling() {
        let u = RadialProfile::ckn_normalized(6, -0.5).unwrap();
        let v = scale(&u, 1.0).unwrap();
        let w = scale(&u, 2.0).unwrap();
        let h = u.natural_homogeneity();
        for &r in &[0.1, 1.0, 3.0] {
            assert_eq!(v.value(r), u.value(r));
            assert!(rel(w.value(r), 2f64.powf(h) * u.value(2.0 * r)) < 1e-14);
        }
        assert!(scale(&u, 0.0).is_err());
    }

    #[test]
    fn cutoff_shape() {
        let g = smooth_cutoff();
        assert_eq!(g.value(0.5), 0.0);
        assert_eq!(g.value(3.0), 1.0);
        let mut prev = 0.0;
        for i in 10..190 {
            let v = g.value(1.0 + i as f64 / 200.0);
            assert!(v > prev);
            prev = v;
        }
        for &r in &[1.0, 2.0, 1.0 + 1e-3, 2.0 - 1e-3] {
            assert!(g.d1(r).abs() <= 1e-12, "d1 at {r}: {}", g.d1(r));
        }
        let pc = RadialProfile::power_cut(5, 0.0, 0.3).unwrap();
        assert_eq!(pc.value(0.5), 0.0);
        assert_eq!(pc.value(1.0), 0.0);
        let t = RadialProfile::tail_integral(0.2).unwrap();
        assert_eq!(t.value(0.3), t.value(0.9));
        assert!(rel(t.value(5.0), 5f64.powf(-0.2) / 0.2) < 1e-15);
        // continuity across the splice
        assert!(rel(t.value(2.0 - 1e-9), t.value(2.0 + 1e-9)) < 1e-8);
        assert!(rel(t.value(1.0 + 1e-9), t.value(1.0)) < 1e-8);
    }

    #[test]
    fn laplacians() {
        let r2 = RadialProfile::power(1.0, 2.0);
        let lap = radial_laplacian(&r2, 5);
        for &r in &[0.1, 1.0, 10.0] {
            assert!(rel(lap(r), 10.0) < 1e-14);
        }
        let g = RadialProfile::gauss_bump(0.0, 1.0).unwrap();
        let lap = radial_laplacian(&g, 4);
        for &r in &[0.1f64, 1.0, 2.0] {
            let expect = (4.0 * r * r - 8.0) * (-r * r).exp();
            assert!((lap(r) - expect).abs() < 1e-14);
        }
        let u = RadialProfile::ckn_normalized(6, -1.0).unwrap();
        assert!(radial_laplacian(&u, 6)(1e-3) < 0.0);
    }

    #[test]
    fn classical_bilaplacian_extremal() {
        for n in [5u32, 6, 8] {
            let nf = n as f64;
            let u = RadialProfile::ckn_extremal(1.0, 1.0, n, 0.0).unwrap();
            let op = weighted_bilaplacian(&u, n, 0.0);
            let q = (nf + 4.0) / (nf - 4.0);
            let first = op(0.1).unwrap() / u.value(0.1).powf(q);
            for &r in &[0.3, 1.0, 4.0, 20.0] {
                let v = op(r).unwrap() / u.value(r).powf(q);
                assert!(rel(v, first) < 1e-9, "N={n} r={r}");
            }
            assert!(rel(first, (nf - 4.0) * (nf - 2.0) * nf * (nf + 2.0)) < 1e-9);
        }
    }

    #[test]
    fn fd_bilaplacian_agrees_and_rejects_bad_stencils() {
        let u = RadialProfile::ckn_normalized(7, -0.5).unwrap();
        let a = weighted_bilaplacian(&u, 7, -0.5);
        let b = weighted_bilaplacian_fd(&u, 7, -0.5, 1e-2);
        for &r in &[0.3, 1.0, 3.0] {
            assert!(rel(b(r).unwrap(), a(r).unwrap()) < 1e-6);
        }
        assert!(matches!(b(0.005), Err(Error::Domain(_))));
    }

    #[test]
    fn mode_function_validation() {
        let g = RadialProfile::gauss_bump(1.0, 0.5).unwrap();
        assert!(ModeFunction::new(0, g.clone()).is_ok());
        assert!(ModeFunction::new(1, g.clone()).is_err());
        assert!(ModeFunction::new(2, g.clone().times_power(2.0)).is_ok());
        assert!(ModeFunction::new(3, RadialProfile::power_cut(5, 0.0, 0.1).unwrap()).is_ok());
    }

    #[test]
    fn declared_infinity_slope() {
        let g = RadialProfile::sw_g(1.0, 1.0, 6, 0.4, SwCase::TSquared).unwrap();
        let r = 1e6;
        let slope = (g.value(2.0 * r) / g.value(r)).ln() / 2f64.ln();
        assert!((slope - g.exponents(0).inf).abs() < 0.05);
        let nf = 6.0;
        assert!((g.exponents(0).inf - (2.0 - nf - 0.4)).abs() < 1e-12);
    }
}
