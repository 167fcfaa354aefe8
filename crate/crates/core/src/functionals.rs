//! Rayleigh quotients and mode-wise quadratic forms.
//!
//! All one-dimensional integrals are taken in `dr` with explicit powers of
//! `r`; the sphere area is applied only when a quotient is assembled.

use crate::constants::{
    a3k, ckn_exponent, combined_const, rs_coeffs, singular_exponents, sobolev_exponent, CknParams, RsParams, SwParams,
};
use crate::jet::Jet;
use crate::profiles::{Exponents, ModeFunction, RadialProfile};
use crate::quadrature::{double_radial_sw, integrate_radial, DEFAULT_DOUBLE_TOL};
use crate::specfun::sphere_area;
use crate::{Error, Result};

/// Tolerance used for every single integral in this module.
pub const FORM_TOL: f64 = 1e-11;

/// Named components of a quadratic form and the coefficients combining them.
#[derive(Clone, Debug, PartialEq)]
pub struct FormBreakdown {
    pub components: Vec<(String, f64)>,
    pub coefficients: Vec<f64>,
    pub total: f64,
}

impl FormBreakdown {
    pub fn new(components: Vec<(&str, f64)>, coefficients: Vec<f64>) -> Self {
        assert_eq!(components.len(), coefficients.len());
        let total = components.iter().zip(&coefficients).map(|((_, v), c)| c * v).sum();
        FormBreakdown {
            components: components.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            coefficients,
            total,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Sum of the absolute weighted terms, the natural scale for residuals.
    pub fn scale(&self) -> f64 {
        self.components.iter().zip(&self.coefficients).map(|((_, v), c)| (c * v).abs()).sum()
    }
}

/// Both sides of an identity plus the residual relative to the term scale.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: FormBreakdown,
    pub residual: f64,
}

impl IdentityCheck {
    pub fn new(lhs: f64, rhs: FormBreakdown) -> Self {
        let scale = rhs.scale().max(lhs.abs()).max(f64::MIN_POSITIVE);
        let residual = (lhs - rhs.total).abs() / scale;
        IdentityCheck { lhs, rhs, residual }
    }
}

/// `int_0^inf F(jet(r), r) r^power dr` for the given profile.
pub fn weighted_integral(
    u: &RadialProfile,
    exps: Exponents,
    f: impl Fn(&Jet, f64) -> f64 + Send + Sync + 'static,
    power: f64,
) -> Result<f64> {
    let ri = u.integrand(exps, f);
    match integrate_radial(&ri, power, FORM_TOL) {
        Ok(q) => Ok(q.value),
        // near the rounding floor the estimate is still usable
        Err(Error::Convergence { estimate, err_estimate }) if err_estimate <= 1e-9 => Ok(estimate),
        Err(e) => Err(e),
    }
}

/// Exponents of `u'' + b1 u'/r + b2 u/r^2`.
pub fn second_order_exponents(u: &RadialProfile, b1: f64, b2: f64) -> Exponents {
    let mut e = u.exponents(2);
    if b1 != 0.0 {
        e = e.join(u.exponents(1).shift(-1.0));
    }
    if b2 != 0.0 {
        e = e.join(u.exponents(0).shift(-2.0));
    }
    e
}

fn second_order(j: &Jet, r: f64, b1: f64, b2: f64) -> f64 {
    j.d(2) + b1 * j.d(1) / r + b2 * j.d(0) / (r * r)
}

/// `int (f'' + b1 f'/r + b2 f/r^2)^2 r^power dr`
pub fn squared_operator(f: &RadialProfile, b1: f64, b2: f64, power: f64) -> Result<f64> {
    let e = second_order_exponents(f, b1, b2).times(2.0);
    weighted_integral(f, e, move |j, r| second_order(j, r, b1, b2).powi(2), power)
}

/// `int (f')^2 r^power dr`
pub fn gradient_integral(f: &RadialProfile, power: f64) -> Result<f64> {
    weighted_integral(f, f.exponents(1).times(2.0), |j, _| j.d(1).powi(2), power)
}

/// `int f^2 r^power dr`
pub fn l2_integral(f: &RadialProfile, power: f64) -> Result<f64> {
    weighted_integral(f, f.exponents(0).times(2.0), |j, _| j.value().powi(2), power)
}

/// `int |f|^p r^power dr`
pub fn lp_integral(f: &RadialProfile, p: f64, power: f64) -> Result<f64> {
    weighted_integral(f, f.exponents(0).times(p), move |j, _| j.value().abs().powf(p), power)
}

/// `int (f'^2 + c f^2/r^2) r^power dr`
fn mode_gradient(f: &RadialProfile, ck: f64, power: f64) -> Result<f64> {
    let mut e = f.exponents(1).times(2.0);
    if ck != 0.0 {
        e = e.join(f.exponents(0).shift(-1.0).times(2.0));
    }
    weighted_integral(f, e, move |j, r| j.d(1).powi(2) + ck * (j.value() / r).powi(2), power)
}

fn nonzero(v: f64, what: &str) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Degenerate(format!("{what} vanishes")));
    }
    Ok(v)
}

fn quotient(n: u32, num: f64, den: f64, p: f64) -> Result<f64> {
    let omega = sphere_area(n)?;
    let den = nonzero(den, "denominator")?;
    Ok(omega * num / (omega * den).powf(2.0 / p))
}

/// `omega int (Delta u)^2 r^{N-1-g} / (omega int |u|^p r^{N-1+g})^{2/p}`
pub fn q_ckn(u: &RadialProfile, n: u32, gamma: f64) -> Result<f64> {
    let p = sobolev_exponent(n, gamma)?;
    let nf = n as f64;
    let num = squared_operator(u, nf - 1.0, 0.0, nf - 1.0 - gamma)?;
    let den = lp_integral(u, p, nf - 1.0 + gamma)?;
    quotient(n, num, den, p)
}

/// Numerator shared by the divergence-form quotients:
/// `int (u'' + (N-1+a) u'/r)^2 r^{N-1+2a-b} dr` (sphere factor not applied).
pub fn div_energy(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    squared_operator(u, nf - 1.0 + alpha, 0.0, nf - 1.0 + 2.0 * alpha - beta)
}

pub fn q_div(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<f64> {
    CknParams::regular(n, alpha, beta)?;
    let p = ckn_exponent(n, alpha, beta)?;
    let num = div_energy(u, n, alpha, beta)?;
    let den = lp_integral(u, p, n as f64 - 1.0 + beta)?;
    quotient(n, num, den, p)
}

pub fn q_singular(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<f64> {
    CknParams::singular(n, alpha, beta)?;
    let s = singular_exponents(n, alpha, beta)?;
    let num = div_energy(u, n, alpha, beta)?;
    let den = lp_integral(u, s.bar_exp, n as f64 - 1.0 + s.xi)?;
    quotient(n, num, den, s.bar_exp)
}

/// Left side of the weighted Rellich-Sobolev inequality, sphere factor applied.
pub fn rs_lhs(u: &RadialProfile, p: &RsParams) -> Result<FormBreakdown> {
    let n = p.n;
    let nf = p.nf();
    let g = p.gamma;
    let omega = sphere_area(n)?;
    let (c1, c2) = rs_coeffs(p);
    let bilap = squared_operator(u, nf - 1.0, 0.0, nf - 1.0 - g)?;
    let grad = if c1 != 0.0 { gradient_integral(u, nf - 3.0 - g)? } else { 0.0 };
    let hardy = if c2 != 0.0 { l2_integral(u, nf - 5.0 - g)? } else { 0.0 };
    Ok(FormBreakdown::new(
        vec![("bilaplacian_term", omega * bilap), ("gradient_term", omega * grad), ("hardy_term", omega * hardy)],
        vec![1.0, -c1, c2],
    ))
}

pub fn rs_quotient(u: &RadialProfile, p: &RsParams) -> Result<f64> {
    let lhs = rs_lhs(u, p)?;
    let q = sobolev_exponent(p.n, p.gamma)?;
    let den = lp_integral(u, q, p.nf() - 1.0 + p.gamma)?;
    let omega = sphere_area(p.n)?;
    Ok(lhs.total / (omega * nonzero(den, "denominator")?).powf(2.0 / q))
}

/// Mode-`k` forms of the strict comparison behind the Rellich-Sobolev
/// inequality: `(lhs, rhs)` with `rhs` evaluated on `v = r^vartheta f`.
pub fn mode_ckn_forms(m: &ModeFunction, p: &RsParams) -> Result<(f64, f64)> {
    let nf = p.nf();
    let g = p.gamma;
    let mu = p.mu;
    let ck = m.c_k(p.n);
    let zeta = p.zeta();
    let f = &m.radial;
    let b1 = nf - 1.0 - (nf - 2.0) * (mu - g) / (nf - 4.0 - g);
    let lhs = squared_operator(f, b1, -zeta * zeta * ck, nf - 1.0 - mu)?;
    let v = f.clone().times_power(p.vartheta());
    let (c1, c2) = rs_coeffs(p);
    let t1 = squared_operator(&v, nf - 1.0, -ck, nf - 1.0 - g)?;
    let t2 = if c1 != 0.0 { mode_gradient(&v, ck, nf - 3.0 - g)? } else { 0.0 };
    let t3 = if c2 != 0.0 { l2_integral(&v, nf - 5.0 - g)? } else { 0.0 };
    Ok((lhs, t1 - c1 * t2 + c2 * t3))
}

/// Closed form of `rhs - lhs` in [`mode_ckn_forms`].
pub fn mode_ckn_gap(m: &ModeFunction, p: &RsParams) -> Result<f64> {
    let nf = p.nf();
    let ck = m.c_k(p.n);
    if ck == 0.0 {
        return Ok(0.0);
    }
    let zeta = p.zeta();
    let f = &m.radial;
    let grad = gradient_integral(f, nf - 3.0 - p.mu)?;
    let l2 = l2_integral(f, nf - 5.0 - p.mu)?;
    Ok(2.0 * (1.0 - zeta * zeta) * ck * grad + a3k(p, m.k) * l2)
}

/// Mode-wise ratio of the weak Hardy-Rellich inequality.
pub fn weak_hr_ratio(m: &ModeFunction, n: u32, a: f64) -> Result<f64> {
    let nf = n as f64;
    if !(a < (nf - 2.0) / 2.0) {
        return Err(Error::Domain(format!("weak Hardy-Rellich needs a < (N-2)/2, got a={a}")));
    }
    let ck = m.c_k(n);
    let f = &m.radial;
    let second = squared_operator(f, 0.0, 0.0, nf - 1.0 - 2.0 * a)?;
    let grad = gradient_integral(f, nf - 3.0 - 2.0 * a)?;
    let cf = ck * (ck + 2.0 * (1.0 + a) * (nf - 4.0 - 2.0 * a));
    let l2 = if cf != 0.0 { l2_integral(f, nf - 5.0 - 2.0 * a)? } else { 0.0 };
    let den = nonzero(grad, "gradient term")?;
    Ok((second + ((1.0 + 2.0 * a) * (nf - 1.0) + 2.0 * ck) * grad + cf * l2) / den)
}

/// `int (f'')^2 r^{N-1-2a} / int (f')^2 r^{N-3-2a}`
pub fn rellich_1d_ratio(f: &RadialProfile, n: u32, a: f64) -> Result<f64> {
    let nf = n as f64;
    let num = squared_operator(f, 0.0, 0.0, nf - 1.0 - 2.0 * a)?;
    Ok(num / nonzero(gradient_integral(f, nf - 3.0 - 2.0 * a)?, "gradient term")?)
}

/// `int (f')^2 r^{N-3-2a} / int f^2 r^{N-5-2a}`
pub fn hardy_1d_ratio(f: &RadialProfile, n: u32, a: f64) -> Result<f64> {
    let nf = n as f64;
    let num = gradient_integral(f, nf - 3.0 - 2.0 * a)?;
    Ok(num / nonzero(l2_integral(f, nf - 5.0 - 2.0 * a)?, "L2 term")?)
}

/// Weighted Hardy quotient `int |grad u|^2 |x|^{-g-2} / int u^2 |x|^{-g-4}`.
pub fn hardy_ratio(u: &RadialProfile, n: u32, gamma: f64) -> Result<f64> {
    hardy_1d_ratio(u, n, gamma / 2.0)
}

/// Weighted Hardy-Rellich quotient `int (Delta u)^2 |x|^{-g} / int |grad u|^2 |x|^{-g-2}`.
pub fn hardy_rellich_ratio(u: &RadialProfile, n: u32, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    let num = squared_operator(u, nf - 1.0, 0.0, nf - 1.0 - gamma)?;
    Ok(num / nonzero(gradient_integral(u, nf - 3.0 - gamma)?, "gradient term")?)
}

/// Terms of the combined Hardy/Rellich inequality, sphere factor applied.
pub fn shri_breakdown(u: &RadialProfile, n: u32, gamma: f64) -> Result<FormBreakdown> {
    let nf = n as f64;
    let omega = sphere_area(n)?;
    let k = (nf - 4.0 - gamma) / 2.0;
    let c = combined_const(n, gamma)?;
    let bilap = squared_operator(u, nf - 1.0, 0.0, nf - 1.0 - gamma)?;
    let hardy = l2_integral(u, nf - 5.0 - gamma)?;
    let grad = gradient_integral(u, nf - 3.0 - gamma)?;
    Ok(FormBreakdown::new(
        vec![("bilaplacian_term", omega * bilap), ("hardy_term", omega * hardy), ("gradient_term", omega * grad)],
        vec![1.0, k.powi(4), -c],
    ))
}

pub fn shri_gap(u: &RadialProfile, n: u32, gamma: f64) -> Result<f64> {
    Ok(shri_breakdown(u, n, gamma)?.total)
}

/// Mode-wise check of the expansion of `|x|^{-b} |div(|x|^a grad u)|^2`.
pub fn div_expansion_check(m: &ModeFunction, n: u32, alpha: f64, beta: f64) -> Result<IdentityCheck> {
    let nf = n as f64;
    let ck = m.c_k(n);
    let f = &m.radial;
    let w = nf - 1.0 + 2.0 * alpha - beta;
    let lhs = squared_operator(f, nf - 1.0 + alpha, -ck, w)?;
    let lap = squared_operator(f, nf - 1.0, -ck, w)?;
    let (grad, radial) = if alpha != 0.0 {
        (mode_gradient(f, ck, w - 2.0)?, gradient_integral(f, w - 2.0)?)
    } else {
        (0.0, 0.0)
    };
    let rhs = FormBreakdown::new(
        vec![("laplacian_term", lap), ("gradient_term", grad), ("radial_term", radial)],
        vec![1.0, alpha * (nf - 4.0 + 2.0 * alpha - beta), alpha * (2.0 * beta - 3.0 * alpha + 4.0)],
    );
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `[omega int |f|^p r^{N-1} dr]^{1/p}`
pub fn radial_norm(f: &RadialProfile, n: u32, p: f64) -> Result<f64> {
    let omega = sphere_area(n)?;
    Ok((omega * lp_integral(f, p, n as f64 - 1.0)?).powf(1.0 / p))
}

/// Stein-Weiss double integral at `lambda = N - 2` over `||f||_r ||g||_t`.
pub fn sw_quotient(f: &RadialProfile, g: &RadialProfile, p: &SwParams) -> Result<f64> {
    let d = double_radial_sw(&f.as_integrand(), &g.as_integrand(), p.n, p.a, p.b, DEFAULT_DOUBLE_TOL)?;
    let nf = radial_norm(f, p.n, p.r)?;
    let ng = radial_norm(g, p.n, p.t)?;
    Ok(d.value / (nf * ng))
}

/// Which member of the pair a perturbation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturb {
    F,
    G,
}

/// Quotient at the pair and its directional slope under `h -> h (1 + t phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stationarity {
    pub quotient: f64,
    pub slope: f64,
}

/// Richardson-extrapolated symmetric slope of the quotient along `phi`.
pub fn sw_stationarity(
    f: &RadialProfile,
    g: &RadialProfile,
    p: &SwParams,
    phi: &RadialProfile,
    which: Perturb,
    step: f64,
) -> Result<Stationarity> {
    let q = |t: f64| -> Result<f64> {
        let bump = |h: &RadialProfile| {
            RadialProfile::sum(vec![(1.0, h.clone()), (t, RadialProfile::product(h.clone(), phi.clone()))])
        };
        match which {
            Perturb::F => sw_quotient(&bump(f), g, p),
            Perturb::G => sw_quotient(f, &bump(g), p),
        }
    };
    let q0 = sw_quotient(f, g, p)?;
    let s = |h: f64| -> Result<f64> { Ok((q(h)? - q(-h)?) / (2.0 * h)) };
    let s1 = s(step)?;
    let s2 = s(step / 2.0)?;
    Ok(Stationarity { quotient: q0, slope: (4.0 * s2 - s1) / 3.0 })
}
