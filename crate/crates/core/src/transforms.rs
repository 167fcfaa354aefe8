//! Changes of variable between the inequality families and the algebraic
//! and integration-by-parts identities they rely on.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Zero};

use crate::constants::{ckn_exponent, lemtle_a1a2, rs_coeffs_generic, singular_exponents, CknParams, RsParams};
use crate::functionals::{
    div_energy, gradient_integral, l2_integral, lp_integral, squared_operator, weighted_integral, FormBreakdown,
    IdentityCheck,
};
use crate::profiles::{Exponents, ModeFunction, RadialProfile};
use crate::{Error, Result};

fn k<T: FromPrimitive>(v: i64) -> T {
    T::from_i64(v).expect("small integer constant")
}

/// `eta = -a (N - 4 + 2a - b) / (2 (N - 2 + a))`
pub fn eta_generic<T: Num + Clone + FromPrimitive>(n: T, alpha: T, beta: T) -> T {
    let num = alpha.clone() * (n.clone() - k(4) + k::<T>(2) * alpha.clone() - beta);
    T::zero() - num / (k::<T>(2) * (n - k(2) + alpha))
}

/// `gamma = (b (N - 2) - a N) / (N - 2 + a)`
pub fn gamma_generic<T: Num + Clone + FromPrimitive>(n: T, alpha: T, beta: T) -> T {
    (beta * (n.clone() - k(2)) - alpha.clone() * n.clone()) / (n - k(2) + alpha)
}

/// `mu = (N - 4 - gamma) a / (2 - N) + gamma`
pub fn mu_generic<T: Num + Clone + FromPrimitive>(n: T, alpha: T, gamma: T) -> T {
    (n.clone() - k(4) - gamma.clone()) * alpha / (k::<T>(2) - n) + gamma
}

fn check_weight_denominators(n: u32, alpha: f64) -> Result<()> {
    if n as f64 - 2.0 + alpha == 0.0 {
        return Err(Error::Domain("N - 2 + alpha vanishes".into()));
    }
    Ok(())
}

pub fn eta_of(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    check_weight_denominators(n, alpha)?;
    Ok(eta_generic(n as f64, alpha, beta))
}

pub fn gamma_of(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    check_weight_denominators(n, alpha)?;
    Ok(gamma_generic(n as f64, alpha, beta))
}

pub fn mu_of(n: u32, alpha: f64, gamma: f64) -> Result<f64> {
    if n as f64 - 4.0 - gamma == 0.0 {
        return Err(Error::Domain("N - 4 - gamma vanishes".into()));
    }
    if n == 2 {
        return Err(Error::Domain("N = 2".into()));
    }
    Ok(mu_generic(n as f64, alpha, gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// `t = r^zeta`
    PowerCV,
    /// `u = |x|^eta v`
    WeightCV,
    /// `u = |x|^{2+b-a} v`
    KelvinEquiv,
    /// `u(x) = w(|x|^{a/(N-2)} x)`
    DirectCV,
}

/// A change of variable with its inputs and derived exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformRecord {
    pub kind: TransformKind,
    pub inputs: Vec<(&'static str, f64)>,
    pub derived: Vec<(&'static str, f64)>,
    /// Largest defect among the defining relations of the derived values.
    pub relation_residual: f64,
}

impl TransformRecord {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.derived.iter().chain(&self.inputs).find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn power_cv(p: &RsParams) -> Self {
        let (nf, g, mu) = (p.nf(), p.gamma, p.mu);
        let zeta = p.zeta();
        let vt = p.vartheta();
        let res = (zeta * (nf - 4.0 - g) - (nf - 4.0 - mu)).abs().max((2.0 * vt - (g - mu)).abs());
        TransformRecord {
            kind: TransformKind::PowerCV,
            inputs: vec![("N", nf), ("gamma", g), ("mu", mu)],
            derived: vec![("zeta", zeta), ("vartheta", vt)],
            relation_residual: res,
        }
    }

    pub fn weight_cv(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        CknParams::regular(n, alpha, beta)?;
        let eta = eta_of(n, alpha, beta)?;
        let gamma = gamma_of(n, alpha, beta)?;
        let mu = mu_of(n, alpha, gamma)?;
        let p = ckn_exponent(n, alpha, beta)?;
        let res = (gamma - (beta - 2.0 * (alpha + eta))).abs().max((beta + p * eta - gamma).abs());
        Ok(TransformRecord {
            kind: TransformKind::WeightCV,
            inputs: vec![("N", n as f64), ("alpha", alpha), ("beta", beta)],
            derived: vec![("eta", eta), ("gamma", gamma), ("mu", mu)],
            relation_residual: res,
        })
    }

    pub fn direct_cv(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        let w = Self::weight_cv(n, alpha, beta)?;
        let (eta, gamma, mu) = (w.get("eta").unwrap(), w.get("gamma").unwrap(), w.get("mu").unwrap());
        let nf = n as f64;
        let zeta = (nf - 4.0 - mu) / (nf - 4.0 - gamma);
        let vt = (gamma - mu) / 2.0;
        let res = (eta + vt).abs().max((zeta - (1.0 + alpha / (nf - 2.0))).abs()).max(w.relation_residual);
        Ok(TransformRecord {
            kind: TransformKind::DirectCV,
            inputs: w.inputs,
            derived: vec![("eta", eta), ("gamma", gamma), ("mu", mu), ("vartheta", vt), ("zeta", zeta)],
            relation_residual: res,
        })
    }

    pub fn kelvin(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        CknParams::singular(n, alpha, beta)?;
        let s = singular_exponents(n, alpha, beta)?;
        let nf = n as f64;
        let eta = 2.0 + beta - alpha;
        let m = nf + 2.0 * alpha - beta - 4.0;
        let res = ((nf + beta) * (nf + s.xi) - m * m).abs() / (m * m).max(1.0);
        let res = res.max((s.bar_beta - (2.0 * alpha - beta - 4.0)).abs());
        Ok(TransformRecord {
            kind: TransformKind::KelvinEquiv,
            inputs: vec![("N", nf), ("alpha", alpha), ("beta", beta)],
            derived: vec![("eta", eta), ("xi", s.xi), ("bar_exp", s.bar_exp), ("bar_beta", s.bar_beta)],
            relation_residual: res,
        })
    }
}

/// `v = r^{-eta} u` for the divergence-form change of variable.
pub fn weight_cv(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<RadialProfile> {
    Ok(u.clone().times_power(-eta_of(n, alpha, beta)?))
}

/// `u = r^vartheta w(r^zeta)` for the Rellich-Sobolev change of variable.
pub fn rs_cv(w: &RadialProfile, p: &RsParams) -> Result<RadialProfile> {
    Ok(w.clone().of_power(p.zeta())?.times_power(p.vartheta()))
}

/// `u = w(r^{1 + a/(N-2)})`
pub fn direct_cv(w: &RadialProfile, n: u32, alpha: f64) -> Result<RadialProfile> {
    w.clone().of_power(1.0 + alpha / (n as f64 - 2.0))
}

/// Relative defect of the power change of variable for a radial `u`.
pub fn power_cv_check(u: &RadialProfile, p: &RsParams) -> Result<f64> {
    let (nf, g, mu) = (p.nf(), p.gamma, p.mu);
    let zeta = p.zeta();
    let a1 = (nf - 2.0) * (mu - g) / (nf - 4.0 - g);
    let lhs = squared_operator(u, nf - 1.0 - a1, 0.0, nf - 1.0 - mu)?;
    let v = u.clone().of_power(1.0 / zeta)?;
    let rhs = zeta.powi(3) * squared_operator(&v, nf - 1.0, 0.0, nf - 1.0 - g)?;
    Ok((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE))
}

/// `(v, bar_beta)` with `u = r^{2+b-a} v`.
pub fn kelvin_equiv(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<(RadialProfile, f64)> {
    CknParams::singular(n, alpha, beta)?;
    let eta = 2.0 + beta - alpha;
    Ok((u.clone().times_power(-eta), 2.0 * alpha - beta - 4.0))
}

/// Relative defects of the norm identity and of the energy identity
/// between the singular and regular divergence forms.
pub fn kelvin_check(u: &RadialProfile, n: u32, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    let (v, bb) = kelvin_equiv(u, n, alpha, beta)?;
    let s = singular_exponents(n, alpha, beta)?;
    let nf = n as f64;
    let p = ckn_exponent(n, alpha, bb)?;
    let l1 = lp_integral(u, s.bar_exp, nf - 1.0 + s.xi)?;
    let r1 = lp_integral(&v, p, nf - 1.0 + bb)?;
    let l2 = div_energy(u, n, alpha, beta)?;
    let r2 = div_energy(&v, n, alpha, bb)?;
    Ok(((l1 - r1).abs() / r1.abs(), (l2 - r2).abs() / r2.abs()))
}

/// Both sides of the two parameter identities in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct VecgmValues {
    pub lhs1: BigRational,
    pub rhs1: BigRational,
    pub lhs2: BigRational,
    pub rhs2: BigRational,
}

impl VecgmValues {
    pub fn holds(&self) -> bool {
        self.lhs1 == self.rhs1 && self.lhs2 == self.rhs2
    }
}

pub fn identity_vecgm(n: &BigRational, alpha: &BigRational, beta: &BigRational) -> Result<VecgmValues> {
    let two = BigRational::from_i64(2).unwrap();
    let four = BigRational::from_i64(4).unwrap();
    if (n - &two + alpha).is_zero() {
        return Err(Error::Domain("N - 2 + alpha vanishes".into()));
    }
    let eta = eta_generic(n.clone(), alpha.clone(), beta.clone());
    let gamma = gamma_generic(n.clone(), alpha.clone(), beta.clone());
    if (n - &four - &gamma).is_zero() || (n - &two).is_zero() {
        return Err(Error::Domain("N - 4 - gamma vanishes".into()));
    }
    let mu = mu_generic(n.clone(), alpha.clone(), gamma.clone());
    let (c1, c2) = rs_coeffs_generic(n.clone(), gamma.clone(), mu);
    let e2a = &two * &eta + alpha;
    let s = n + alpha + &eta - &two;
    let lhs1 = &e2a * (n + &two * &eta + alpha + &gamma) - &two * &eta * &s;
    let lhs2 = &eta * &eta * &s * &s - &eta * &s * (n - &four - &gamma) * (&e2a + &gamma + &two);
    Ok(VecgmValues { lhs1, rhs1: -c1, lhs2, rhs2: c2 })
}

/// Relative residual of the difference of two squared second-order forms.
pub fn identity_lemtle(f: &RadialProfile, n: u32, mu: f64, b: [f64; 4]) -> Result<f64> {
    let nf = n as f64;
    let (a1, a2) = lemtle_a1a2(n, mu, b)?;
    let w = nf - 1.0 - mu;
    let s1 = squared_operator(f, b[0], b[1], w)?;
    let s2 = if b[0] == b[2] && b[1] == b[3] { s1 } else { squared_operator(f, b[2], b[3], w)? };
    let grad = if a1 != 0.0 { gradient_integral(f, nf - 3.0 - mu)? } else { 0.0 };
    let l2 = if a2 != 0.0 { l2_integral(f, nf - 5.0 - mu)? } else { 0.0 };
    let rhs = a1 * grad + a2 * l2;
    let scale = s1.abs() + s2.abs() + (a1 * grad).abs() + (a2 * l2).abs();
    Ok(((s1 - s2) - rhs).abs() / scale.max(f64::MIN_POSITIVE))
}

fn products(f: &RadialProfile, i: usize, j: usize) -> Exponents {
    f.exponents(i).mul(f.exponents(j))
}

/// The three integration-by-parts identities, mode-wise.
pub fn identity_psny(m: &ModeFunction, n: u32, gamma: f64) -> Result<[IdentityCheck; 3]> {
    let nf = n as f64;
    let ck = m.c_k(n);
    let f = &m.radial;
    let kk = nf - 4.0 - gamma;
    let w = nf - 3.0 - gamma;
    let l2 = l2_integral(f, nf - 5.0 - gamma)?;
    let grad = gradient_integral(f, w)?;
    let mode_grad = if ck != 0.0 { grad + ck * l2_integral(f, w - 2.0)? } else { grad };
    // exponents of f * (Delta_k f) and r f' * (Delta_k f)
    let lap = |i: usize| {
        let mut e = products(f, i, 2).join(products(f, i, 1).shift(-1.0));
        if ck != 0.0 {
            e = e.join(products(f, i, 0).shift(-2.0));
        }
        e
    };
    let delta = move |j: &crate::jet::Jet, r: f64| j.d(2) + (nf - 1.0) * j.d(1) / r - ck * j.value() / (r * r);
    let p1 = weighted_integral(f, products(f, 0, 1), |j, _| j.value() * j.d(1), nf - 4.0 - gamma)?;
    let p2 = weighted_integral(f, lap(0), move |j, r| j.value() * delta(j, r), w)?;
    let p3 = weighted_integral(f, lap(1).shift(1.0), move |j, r| r * j.d(1) * delta(j, r), w)?;
    Ok([
        IdentityCheck::new(p1, FormBreakdown::new(vec![("l2_term", l2)], vec![-kk / 2.0])),
        IdentityCheck::new(
            p2,
            FormBreakdown::new(vec![("l2_term", l2), ("gradient_term", mode_grad)], vec![-kk * (gamma + 2.0) / 2.0, -1.0]),
        ),
        IdentityCheck::new(
            p3,
            FormBreakdown::new(vec![("gradient_term", mode_grad), ("radial_term", grad)], vec![kk / 2.0, gamma + 2.0]),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn parameter_maps() {
        assert_eq!(eta_of(6, 0.0, -1.0).unwrap(), 0.0);
        assert_eq!(gamma_of(6, 0.0, -1.0).unwrap(), -1.0);
        assert_eq!(mu_of(6, 0.0, -1.0).unwrap(), -1.0);
        assert!(gamma_of(5, -1.0, -5.0 / 3.0).unwrap().abs() < 1e-15);
        let r = TransformRecord::direct_cv(7, -1.5, -3.0).unwrap();
        assert!(r.relation_residual < 1e-14, "{r:?}");
    }

    #[test]
    fn vecgm_exact() {
        let v = identity_vecgm(&q(6, 1), &q(-1, 1), &q(-3, 2)).unwrap();
        assert!(v.holds(), "{v:?}");
        let v = identity_vecgm(&q(7, 1), &q(0, 1), &q(-1, 3)).unwrap();
        assert!(v.holds());
        assert!(v.lhs1.is_zero() && v.lhs2.is_zero());
    }

    #[test]
    fn power_cv() {
        let p = RsParams::new(5, -1.0, 0.0).unwrap();
        let u = RadialProfile::gauss_bump(0.2, 1.1).unwrap();
        assert!(power_cv_check(&u, &p).unwrap() < 1e-8);
        let p0 = RsParams::new(5, -1.0, -1.0).unwrap();
        assert!(power_cv_check(&u, &p0).unwrap() < 1e-12);
    }

    #[test]
    fn kelvin() {
        let (n, a, b) = (6u32, -1.0, -4.0);
        let u = RadialProfile::singular_extremal(1.0, n, a, b).unwrap();
        let (v, bb) = kelvin_equiv(&u, n, a, b).unwrap();
        let d = RadialProfile::div_extremal(1.0, 1.0, n, a, bb).unwrap();
        for r in [0.1, 1.0, 4.0] {
            assert!((v.value(r) - d.value(r)).abs() < 1e-12 * d.value(r));
        }
        let (e1, e2) = kelvin_check(&u, n, a, b).unwrap();
        assert!(e1 < 1e-8 && e2 < 1e-8, "{e1} {e2}");
    }

    #[test]
    fn lemtle_and_psny() {
        let f = RadialProfile::gauss_bump(0.5, 0.7).unwrap();
        assert!(identity_lemtle(&f, 6, 0.0, [1.3, -2.0, 0.4, 2.5]).unwrap() < 1e-8);
        assert_eq!(identity_lemtle(&f, 6, 0.0, [1.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);
        let m = ModeFunction::new(0, f.clone()).unwrap();
        for c in identity_psny(&m, 5, -1.0).unwrap() {
            assert!(c.residual < 1e-9, "{c:?}");
        }
        let m2 = ModeFunction::new(2, f.times_power(2.0)).unwrap();
        for c in identity_psny(&m2, 6, -0.5).unwrap() {
            assert!(c.residual < 1e-8, "{c:?}");
        }
    }

    #[test]
    fn direct_cv_is_weight_then_power() {
        let (n, a, b) = (7u32, -1.5, -3.0);
        let w = RadialProfile::gauss_bump(0.3, 0.9).unwrap();
        let g = gamma_of(n, a, b).unwrap();
        let p = RsParams::new(n, g, mu_of(n, a, g).unwrap()).unwrap();
        let eta = eta_of(n, a, b).unwrap();
        let two_step = rs_cv(&w, &p).unwrap().times_power(eta);
        let direct = direct_cv(&w, n, a).unwrap();
        for i in 0..30 {
            let r = 10f64.powf(-1.5 + 3.0 * i as f64 / 29.0);
            assert!((two_step.value(r) - direct.value(r)).abs() <= 1e-12 * direct.value(r).abs().max(1e-300));
        }
    }
}
