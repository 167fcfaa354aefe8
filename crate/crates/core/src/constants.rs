//! Closed-form exponents, sharp constants, coefficient formulas and the
//! parameter-region classification.

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::specfun::{big_b, lg, sphere_area};
use crate::{Error, Result};

/// Which admissible range a [`CknParams`] was validated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CknRange {
    Regular,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CknParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub range: CknRange,
}

impl CknParams {
    /// Regular range: `alpha > 2-N`, `alpha-2 <= beta <= N alpha/(N-2)`.
    pub fn regular(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        check_dim(n, 5)?;
        let nf = n as f64;
        if alpha <= 2.0 - nf {
            return Err(Error::Invalid(format!("alpha={alpha} must exceed 2-N={}", 2.0 - nf)));
        }
        let upper = nf * alpha / (nf - 2.0);
        if beta < alpha - 2.0 || beta > upper {
            return Err(Error::Invalid(format!(
                "beta={beta} outside [alpha-2, N alpha/(N-2)] = [{}, {upper}]",
                alpha - 2.0
            )));
        }
        Ok(CknParams { n, alpha, beta, range: CknRange::Regular })
    }

    /// Singular range: `(N-4)/(N-2) alpha - 4 <= beta <= alpha - 2`.
    pub fn singular(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        check_dim(n, 5)?;
        let nf = n as f64;
        if alpha <= 2.0 - nf {
            return Err(Error::Invalid(format!("alpha={alpha} must exceed 2-N={}", 2.0 - nf)));
        }
        let lower = (nf - 4.0) / (nf - 2.0) * alpha - 4.0;
        if beta < lower || beta > alpha - 2.0 {
            return Err(Error::Invalid(format!(
                "beta={beta} outside [(N-4)alpha/(N-2)-4, alpha-2] = [{lower}, {}]",
                alpha - 2.0
            )));
        }
        Ok(CknParams { n, alpha, beta, range: CknRange::Singular })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsParams {
    pub n: u32,
    pub gamma: f64,
    pub mu: f64,
}

impl RsParams {
    pub fn new(n: u32, gamma: f64, mu: f64) -> Result<Self> {
        check_dim(n, 5)?;
        let nf = n as f64;
        if !(gamma > -2.0 && gamma <= 0.0) {
            return Err(Error::Invalid(format!("gamma={gamma} must lie in (-2, 0]")));
        }
        if !(mu >= gamma && mu < nf - 4.0) {
            return Err(Error::Invalid(format!("mu={mu} must lie in [gamma, N-4) = [{gamma}, {})", nf - 4.0)));
        }
        Ok(RsParams { n, gamma, mu })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn zeta(&self) -> f64 {
        let nf = self.nf();
        (nf - 4.0 - self.mu) / (nf - 4.0 - self.gamma)
    }

    pub fn vartheta(&self) -> f64 {
        (self.gamma - self.mu) / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwCase {
    Diagonal,
    TSquared,
}

/// Stein-Weiss parameters at `lambda = N - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwParams {
    pub n: u32,
    pub b: f64,
    pub case: SwCase,
    pub a: f64,
    pub r: f64,
    pub t: f64,
}

impl SwParams {
    pub fn new(n: u32, b: f64, case: SwCase) -> Result<Self> {
        match case {
            SwCase::Diagonal => Self::diagonal(n, b),
            SwCase::TSquared => Self::t_squared(n, b),
        }
    }

    pub fn diagonal(n: u32, b: f64) -> Result<Self> {
        check_dim(n, 3)?;
        if !(b >= 0.0 && b < 1.0) {
            return Err(Error::Invalid(format!("b={b} must lie in [0, 1)")));
        }
        let nf = n as f64;
        let r = 2.0 * nf / (nf + 2.0 - 2.0 * b);
        Ok(SwParams { n, b, case: SwCase::Diagonal, a: b, r, t: r })
    }

    pub fn t_squared(n: u32, b: f64) -> Result<Self> {
        check_dim(n, 5)?;
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::Invalid(format!("b={b} must lie in (0, 1)")));
        }
        let nf = n as f64;
        let a = b * (nf - 4.0 + 2.0 * b) / (nf - 2.0 * b);
        let t = 2.0;
        let inv_r = 2.0 - 1.0 / t - (nf - 2.0 + a + b) / nf;
        if inv_r <= 0.0 || inv_r >= 1.0 {
            return Err(Error::Invalid(format!("derived 1/r={inv_r} not in (0,1)")));
        }
        Ok(SwParams { n, b, case: SwCase::TSquared, a, r: 1.0 / inv_r, t })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn lambda(&self) -> f64 {
        self.nf() - 2.0
    }

    /// `1/r + 1/t + (lambda+a+b)/N - 2`, zero for admissible parameters.
    pub fn balance_residual(&self) -> f64 {
        1.0 / self.r + 1.0 / self.t + (self.lambda() + self.a + self.b) / self.nf() - 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakHrParams {
    pub n: u32,
    pub a: f64,
}

impl WeakHrParams {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        check_dim(n, 1)?;
        if a >= (n as f64 - 2.0) / 2.0 {
            return Err(Error::Domain(format!("a={a} must be below (N-2)/2={}", (n as f64 - 2.0) / 2.0)));
        }
        Ok(WeakHrParams { n, a })
    }

    /// Whether `a` lies in the range where the constant is `((N+2a)/2)^2`.
    pub fn middle_range(&self) -> bool {
        middle_range(self.n, self.a)
    }
}

fn check_dim(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::Invalid(format!("dimension N={n} must be at least {min}")));
    }
    Ok(())
}

pub fn sobolev_exponent(n: u32, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    let den = nf - 4.0 - gamma;
    if den <= 0.0 {
        return Err(Error::Singular(format!("N-4-gamma={den} must be positive")));
    }
    Ok(2.0 * (nf + gamma) / den)
}

pub fn ckn_exponent(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    let den = nf - 4.0 + 2.0 * alpha - beta;
    if den <= 0.0 {
        return Err(Error::Singular(format!("N-4+2alpha-beta={den} must be positive")));
    }
    Ok(2.0 * (nf + beta) / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularExponents {
    pub xi: f64,
    pub bar_exp: f64,
    pub bar_beta: f64,
}

pub fn singular_exponents(n: u32, alpha: f64, beta: f64) -> Result<SingularExponents> {
    let nf = n as f64;
    if nf + beta <= 0.0 {
        return Err(Error::Domain(format!("N+beta={} must be positive", nf + beta)));
    }
    let m = nf + 2.0 * alpha - beta - 4.0;
    if m <= 0.0 {
        return Err(Error::Singular(format!("N+2alpha-beta-4={m} must be positive")));
    }
    let xi = m * m / (nf + beta) - nf;
    Ok(SingularExponents { xi, bar_exp: 2.0 * (nf + xi) / m, bar_beta: 2.0 * alpha - beta - 4.0 })
}

fn sharp_form(n: u32, d: f64, denom: f64) -> Result<f64> {
    // (2/d)^{2d/denom - 4} * omega^{2d/denom} * B(2 denom/d)
    let e = 2.0 * d / denom;
    let omega = sphere_area(n)?;
    Ok(((e - 4.0) * (2.0 / d).ln() + e * omega.ln()).exp() * big_b(2.0 * denom / d)?)
}

pub fn sharp_s_gamma(n: u32, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    if gamma <= -2.0 {
        return Err(Error::Domain(format!("gamma={gamma} must exceed -2")));
    }
    if gamma >= nf - 4.0 {
        return Err(Error::Singular(format!("gamma={gamma} must be below N-4")));
    }
    sharp_form(n, 2.0 + gamma, nf + gamma)
}

pub fn sharp_s_div(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    let d = 2.0 + beta - alpha;
    if d <= 0.0 {
        return Err(Error::Singular(format!("2+beta-alpha={d} must be positive")));
    }
    if nf + beta <= 0.0 {
        return Err(Error::Domain(format!("N+beta={} must be positive", nf + beta)));
    }
    sharp_form(n, d, nf + beta)
}

pub fn sharp_s_singular(n: u32, alpha: f64, beta: f64) -> Result<f64> {
    let nf = n as f64;
    let d = alpha - beta - 2.0;
    if d <= 0.0 {
        return Err(Error::Domain(format!("alpha-beta-2={d} must be positive")));
    }
    let m = nf + 2.0 * alpha - beta - 4.0;
    if m <= 0.0 {
        return Err(Error::Domain(format!("N+2alpha-beta-4={m} must be positive")));
    }
    sharp_form(n, d, m)
}

/// `[(N-4-g)(N-2)(N+g)(N+2+2g)]^{(N-4-g)/(4(2+g))}`.
pub fn extremal_normalizer(n: u32, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    if gamma <= -2.0 || gamma >= nf - 4.0 {
        return Err(Error::Domain(format!("gamma={gamma} must lie in (-2, N-4)")));
    }
    let prod = (nf - 4.0 - gamma) * (nf - 2.0) * (nf + gamma) * (nf + 2.0 + 2.0 * gamma);
    Ok(prod.powf((nf - 4.0 - gamma) / (4.0 * (2.0 + gamma))))
}

fn c<T: FromPrimitive>(v: i64) -> T {
    T::from_i64(v).expect("small integer constant")
}

/// The two Rellich-Sobolev coefficients in any field (f64 or exact rationals).
pub fn rs_coeffs_generic<T>(n: T, gamma: T, mu: T) -> (T, T)
where
    T: Num + Clone + FromPrimitive,
{
    let d = mu.clone() - gamma.clone();
    let m = n.clone() - c(4) - gamma.clone();
    let k = n.clone() * n.clone() - c::<T>(4) * n.clone() + c(8) + gamma.clone() * gamma.clone() + c::<T>(4) * gamma.clone();
    let br = c::<T>(2) * m.clone() - d.clone();
    let br2 = c::<T>(2) * (n.clone() - c(2)) - d.clone();
    let m2 = m.clone() * m;
    let c1 = k.clone() * d.clone() * br.clone() / (c::<T>(2) * m2.clone());
    let c2 = k * d.clone() * d.clone() * br.clone() * br / (c::<T>(8) * m2)
        - d.clone() * d.clone() * br2.clone() * br2.clone() / c(16)
        - d * br2 * (n - c(4) - mu) * (c::<T>(2) + gamma) / c(4);
    (c1, c2)
}

/// The `gamma = 0` coefficients in the form of the unweighted Rellich-Sobolev inequality.
pub fn rs_coeffs_unweighted<T>(n: T, mu: T) -> (T, T)
where
    T: Num + Clone + FromPrimitive,
{
    let m = n.clone() - c(4);
    let br = c::<T>(2) * m.clone() - mu.clone();
    let m2 = m.clone() * m;
    let c1 = (n.clone() * n.clone() - c::<T>(4) * n.clone() + c(8)) * mu.clone() * br.clone() / (c::<T>(2) * m2.clone());
    let c2 = n.clone() * n.clone() * mu.clone() * mu.clone() * br.clone() * br.clone() / (c::<T>(16) * m2)
        - (n - c(2)) * mu * br / c(2);
    (c1, c2)
}

pub fn rs_coeffs(p: &RsParams) -> (f64, f64) {
    rs_coeffs_generic(p.nf(), p.gamma, p.mu)
}

pub fn rs_sharp(p: &RsParams) -> Result<f64> {
    let q = sobolev_exponent(p.n, p.gamma)?;
    Ok(p.zeta().powf(3.0 + 2.0 / q) * sharp_s_gamma(p.n, p.gamma)?)
}

pub fn hardy_const(n: u32, gamma: f64) -> Result<f64> {
    let nf = n as f64;
    if gamma >= nf - 4.0 {
        return Err(Error::Invalid(format!("Hardy constant needs gamma < N-4, got {gamma}")));
    }
    let h = (nf - 4.0 - gamma) / 2.0;
    Ok(h * h)
}

/// Admissible `gamma` bracket for the weighted Hardy-Rellich constant.
pub fn hardy_rellich_bracket(n: u32) -> (f64, f64) {
    let nf = n as f64;
    let s = (nf * nf - nf + 1.0).sqrt();
    let lo = (-(nf + 4.0) - 2.0 * s) / 3.0;
    let hi = (nf - 2.0).min((-(nf + 4.0) + 2.0 * s) / 3.0);
    (lo, hi)
}

pub fn hardy_rellich_const(n: u32, gamma: f64) -> Result<f64> {
    let (lo, hi) = hardy_rellich_bracket(n);
    if n < 2 || gamma < lo || gamma > hi {
        return Err(Error::Invalid(format!(
            "Hardy-Rellich constant needs N >= 2 and gamma in [{lo}, {hi}], got N={n}, gamma={gamma}"
        )));
    }
    let h = (n as f64 + gamma) / 2.0;
    Ok(h * h)
}

pub fn combined_const(n: u32, gamma: f64) -> Result<f64> {
    if n < 5 || !(gamma >= -2.0 && gamma <= 0.0) {
        return Err(Error::Invalid(format!("combined constant needs N >= 5, gamma in [-2,0]; got N={n}, gamma={gamma}")));
    }
    let nf = n as f64;
    Ok((nf * nf - 4.0 * nf + 8.0 + gamma * gamma + 4.0 * gamma) / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RellichInf {
    pub value: f64,
    pub argmin_k: u32,
    /// The scan reaches past the last root of the quartic and the values
    /// keep increasing after the argmin.
    pub certified: bool,
}

fn rellich_quartic(nf: f64, a: f64, k: f64) -> f64 {
    let x = (k + nf / 2.0 + a) * (k + (nf - 4.0) / 2.0 - a);
    x * x
}

/// Mode-`k` constant of the weighted Rellich inequality.
pub fn rellich_mode_const(n: u32, a: f64, k: u32) -> f64 {
    rellich_quartic(n as f64, a, k as f64)
}

pub fn weighted_rellich_inf(n: u32, a: f64, k_max: u32) -> RellichInf {
    let nf = n as f64;
    let mut best = f64::INFINITY;
    let mut arg = 0;
    for k in 0..=k_max {
        let v = rellich_quartic(nf, a, k as f64);
        if v < best {
            best = v;
            arg = k;
        }
    }
    let m = arg as f64;
    let q1 = rellich_quartic(nf, a, m + 1.0);
    let q2 = rellich_quartic(nf, a, m + 2.0);
    let last_root = (-nf / 2.0 - a).max(a - (nf - 4.0) / 2.0);
    let certified = best <= q1 && q1 < q2 && (k_max as f64) >= last_root;
    RellichInf { value: best, argmin_k: arg, certified }
}

pub fn middle_range(n: u32, a: f64) -> bool {
    if n == 1 {
        let lo = (-2.0 - 5f64.sqrt()) / 2.0;
        a >= lo && a < -0.5
    } else {
        let nf = n as f64;
        let s = (nf * nf - 2.0 * nf + 2.0).sqrt();
        a >= (-2.0 - s) / 2.0 && a <= (-2.0 + s) / 2.0
    }
}

const DEFAULT_KMAX: u32 = 64;

pub fn weak_hr_constant(n: u32, a: f64) -> Result<f64> {
    let p = WeakHrParams::new(n, a)?;
    let nf = n as f64;
    if (a - (nf - 4.0) / 2.0).abs() <= 1e-14 {
        return Ok((nf - 2.0) * (nf - 2.0));
    }
    if p.middle_range() {
        let h = (nf + 2.0 * a) / 2.0;
        return Ok(h * h);
    }
    let k_max = DEFAULT_KMAX.max((a.abs() + nf) as u32 + 2);
    let inf = weighted_rellich_inf(n, a, k_max);
    let f = 2.0 / (nf - 4.0 - 2.0 * a);
    Ok(f * f * inf.value)
}

pub fn rho_k(n: u32, a: f64, k: u32) -> Result<f64> {
    let nf = n as f64;
    let den = nf - 4.0 - 2.0 * a;
    if den == 0.0 {
        return Err(Error::Singular("rho_k is undefined at a=(N-4)/2".into()));
    }
    let f = 2.0 / den;
    Ok(f * f * rellich_quartic(nf, a, k as f64))
}

pub fn felli_schneider_b(n: u32, a: f64) -> f64 {
    let nf = n as f64;
    let ac = (nf - 2.0) / 2.0;
    let d = ac - a;
    nf * d / (2.0 * (d * d + nf - 1.0).sqrt()) + a - ac
}

pub fn felli_schneider_beta(n: u32, alpha: f64) -> f64 {
    let nf = n as f64;
    -nf + (nf * nf + alpha * alpha + 2.0 * (nf - 2.0) * alpha).sqrt()
}

/// Image of `(a, b_FS(a))` under `alpha=-2a`, `beta=-b tau`.
pub fn felli_schneider_image(n: u32, a: f64) -> (f64, f64) {
    let nf = n as f64;
    let b = felli_schneider_b(n, a);
    let tau = 2.0 * nf / (nf - 2.0 * (1.0 + a - b));
    (-2.0 * a, -b * tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    SymmetryProved,
    SymmetryBreaking,
    ConjectureSymmetry,
    Boundary,
    Invalid,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::SymmetryProved => "SymmetryProved",
            Region::SymmetryBreaking => "SymmetryBreaking",
            Region::ConjectureSymmetry => "ConjectureSymmetry",
            Region::Boundary => "Boundary",
            Region::Invalid => "Invalid",
        }
    }
}

pub const REGION_TOL: f64 = 1e-12;

pub fn region_classify(n: u32, alpha: f64, beta: f64) -> Region {
    if n < 3 || !alpha.is_finite() || !beta.is_finite() {
        return Region::Invalid;
    }
    let nf = n as f64;
    if alpha <= 2.0 - nf {
        return Region::Invalid;
    }
    let lower = alpha - 2.0;
    let upper = nf * alpha / (nf - 2.0);
    if beta < lower - REGION_TOL || beta > upper + REGION_TOL {
        return Region::Invalid;
    }
    if (beta - lower).abs() <= REGION_TOL {
        return Region::Boundary;
    }
    if alpha <= 0.0 {
        return Region::SymmetryProved;
    }
    let fs = felli_schneider_beta(n, alpha);
    if (beta - fs).abs() <= REGION_TOL || (beta - upper).abs() <= REGION_TOL {
        return Region::Boundary;
    }
    if beta < fs {
        Region::ConjectureSymmetry
    } else {
        Region::SymmetryBreaking
    }
}

pub fn hls_c1(n: u32, lambda: f64) -> Result<f64> {
    let nf = n as f64;
    if !(lambda > 0.0 && lambda < nf) {
        return Err(Error::Domain(format!("lambda={lambda} must lie in (0, N)")));
    }
    let l = lambda / 2.0 * std::f64::consts::PI.ln() + lg(nf / 2.0 - lambda / 2.0) - lg(nf - lambda / 2.0)
        + (lambda / nf - 1.0) * (lg(nf / 2.0) - lg(nf));
    Ok(l.exp())
}

pub fn hls_c2(n: u32, lambda: f64) -> Result<f64> {
    let nf = n as f64;
    if !(nf < 2.0 * lambda && lambda < nf) {
        return Err(Error::Domain(format!("C2 needs N < 2 lambda < 2N, got lambda={lambda}")));
    }
    let extra = 0.5 * (lg(lambda - nf / 2.0) - lg(1.5 * nf - lambda));
    Ok(hls_c1(n, lambda)? * extra.exp())
}

pub fn hls_constants(n: u32, lambda: f64) -> Result<(f64, Option<f64>)> {
    let c1 = hls_c1(n, lambda)?;
    let nf = n as f64;
    let c2 = if nf < 2.0 * lambda { Some(hls_c2(n, lambda)?) } else { None };
    Ok((c1, c2))
}

pub fn lemtle_a1a2(n: u32, mu: f64, b: [f64; 4]) -> Result<(f64, f64)> {
    let nf = n as f64;
    if mu >= nf - 4.0 {
        return Err(Error::Invalid(format!("mu={mu} must be below N-4")));
    }
    let [b1, b2, b3, b4] = b;
    let a1 = b1 * b1 - b3 * b3 - (b1 - b3) * (nf - 2.0 - mu) - 2.0 * (b2 - b4);
    let a2 = b2 * b2 - b4 * b4 + (b2 - b4) * (nf - 3.0 - mu) * (nf - 4.0 - mu) - (b1 * b2 - b3 * b4) * (nf - 4.0 - mu);
    Ok((a1, a2))
}

pub fn c_k(n: u32, k: u32) -> f64 {
    let k = k as f64;
    k * (n as f64 - 2.0 + k)
}

pub fn a3k(p: &RsParams, k: u32) -> f64 {
    let nf = p.nf();
    let g = p.gamma;
    let z2 = p.zeta() * p.zeta();
    let ck = c_k(p.n, k);
    (1.0 - z2) * (z2 * (ck + (2.0 + g) * (nf - 4.0 - g)) + (ck - (2.0 + g) * (2.0 + g))) * ck
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn exponents() {
        assert_eq!(sobolev_exponent(6, 0.0).unwrap(), 6.0);
        assert_eq!(sobolev_exponent(5, -1.0).unwrap(), 4.0);
        assert_eq!(sobolev_exponent(5, 0.0).unwrap(), 10.0);
        assert!(matches!(sobolev_exponent(5, 1.0), Err(Error::Singular(_))));
        assert_eq!(ckn_exponent(6, 0.0, 0.0).unwrap(), 6.0);
        assert!(matches!(ckn_exponent(5, -1.0, -1.0), Err(Error::Singular(_))));
        assert!(rel(ckn_exponent(5, -1.0, -5.0 / 3.0).unwrap(), sobolev_exponent(5, 0.0).unwrap()) < 1e-15);
        assert!(rel(ckn_exponent(7, -1.0, -2.0).unwrap(), 2.0 * 5.0 / 3.0) < 1e-15);
        let s = singular_exponents(6, 0.0, -4.0).unwrap();
        assert_eq!((s.xi, s.bar_exp, s.bar_beta), (12.0, 6.0, 0.0));
        // bar_beta = xi + eta * bar_exp with eta = 2 + beta - alpha
        assert_eq!(s.xi + (2.0 - 4.0) * s.bar_exp, s.bar_beta);
        let s = singular_exponents(7, -0.8, -2.8).unwrap();
        assert!((s.xi - (-2.8)).abs() < 1e-13 && (s.bar_beta - (-2.8)).abs() < 1e-13);
        let s = singular_exponents(5, -0.5, -3.1).unwrap();
        let m: f64 = 5.0 - 1.0 + 3.1 - 4.0;
        assert!(((5.0 - 3.1) * (5.0 + s.xi) - m * m).abs() < 1e-13);
    }

    #[test]
    fn sharp_constants_frozen() {
        let cases = [
            (5, 0.0, 102.3832734405829348807),
            (7, -1.0, 191.9439043756788778366),
            (5, -1.0, 52.02971740140651656035),
            (6, -0.5, 178.9585566264261454405),
            (9, -1.5, 290.9902160641397785024),
        ];
        for (n, g, v) in cases {
            assert!(rel(sharp_s_gamma(n, g).unwrap(), v) < 1e-12, "S({n},{g})");
            assert!(rel(sharp_s_div(n, 0.0, g).unwrap(), v) < 1e-14);
        }
        assert!(rel(sharp_s_div(5, -1.0, -5.0 / 3.0).unwrap(), 27.97286709420994911456) < 1e-12);
        assert!(rel(sharp_s_div(6, -2.0, -3.0).unwrap(), 24.53372449277609774448) < 1e-12);
    }

    #[test]
    fn duality_of_singular_constant() {
        for &(n, a, b) in &[(6u32, 0.0, -4.0), (5, -0.5, -3.0), (7, -1.2, -4.0), (8, -2.0, -5.2)] {
            let p = CknParams::singular(n, a, b).unwrap();
            let s = sharp_s_singular(p.n, a, b).unwrap();
            let d = sharp_s_div(n, a, 2.0 * a - b - 4.0).unwrap();
            assert!(rel(s, d) < 1e-14);
        }
    }

    #[test]
    fn normalizer() {
        assert!(rel(extremal_normalizer(6, 0.0).unwrap(), 384f64.powf(0.25)) < 1e-15);
        assert!(rel(extremal_normalizer(5, 0.0).unwrap(), 105f64.powf(0.125)) < 1e-15);
        assert!(rel(extremal_normalizer(5, -1.0).unwrap(), 120f64.sqrt()) < 1e-15);
    }

    #[test]
    fn rs_coefficients() {
        let p = RsParams::new(6, -1.0, -1.0).unwrap();
        assert_eq!(rs_coeffs(&p), (0.0, 0.0));
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        for n in 5..12 {
            for (mn, md) in [(1i64, 2i64), (1, 3), (3, 4), (7, 5)] {
                let mu = BigRational::new(BigInt::from(mn), BigInt::from(md));
                let (a1, a2) = rs_coeffs_generic(q(n), q(0), mu.clone());
                let (b1, b2) = rs_coeffs_unweighted(q(n), mu);
                assert_eq!(a1, b1);
                assert_eq!(a2, b2);
            }
        }
        let p = RsParams::new(5, 0.0, 0.5).unwrap();
        assert!((rs_coeffs(&p).1 - (-0.24609375)).abs() < 1e-15);
    }

    #[test]
    fn rs_sharp_limits() {
        let p = RsParams::new(5, -1.0, -1.0).unwrap();
        assert!(rel(rs_sharp(&p).unwrap(), sharp_s_gamma(5, -1.0).unwrap()) < 1e-15);
        let p = RsParams::new(5, -1.0, 0.0).unwrap();
        assert_eq!(p.zeta(), 0.5);
        let expect = 0.5f64.powf(3.0 + 2.0 / 4.0) * sharp_s_gamma(5, -1.0).unwrap();
        assert!(rel(rs_sharp(&p).unwrap(), expect) < 1e-15);
        let n = 7.0;
        let q = sobolev_exponent(7, 0.0).unwrap();
        assert!((3.0 + 2.0 / q - (4.0 - 4.0 / n)).abs() < 1e-15);
    }

    #[test]
    fn hardy_type_constants() {
        assert_eq!(hardy_const(5, 0.0).unwrap(), 0.25);
        assert_eq!(hardy_rellich_const(5, 0.0).unwrap(), 6.25);
        assert_eq!(combined_const(5, 0.0).unwrap(), 6.5);
        assert_eq!(hardy_const(7, -1.0).unwrap(), 4.0);
        assert_eq!(combined_const(6, -2.0).unwrap(), 8.0);
        for n in 5..10 {
            for g in [-1.9, -1.0, -0.3, 0.0] {
                let s = hardy_const(n, g).unwrap() + hardy_rellich_const(n, g).unwrap();
                assert!((s - combined_const(n, g).unwrap()).abs() <= 1e-14 * s);
            }
        }
        assert!(matches!(hardy_rellich_const(5, 3.5), Err(Error::Invalid(_))));
    }

    #[test]
    fn rellich_inf_and_weak_hr() {
        let r = weighted_rellich_inf(5, 0.0, 64);
        assert_eq!((r.value, r.argmin_k), (25.0 / 16.0, 0));
        assert!(r.certified);
        assert_eq!(weighted_rellich_inf(6, 1.0, 64).value, 0.0);
        let r = weighted_rellich_inf(5, 2.0, 64);
        let brute = (0..=64).map(|k| rellich_quartic(5.0, 2.0, k as f64)).fold(f64::INFINITY, f64::min);
        assert_eq!(r.value, brute);
        assert!(r.argmin_k == 1 || r.argmin_k == 2);

        assert_eq!(weak_hr_constant(3, 0.0).unwrap(), 2.25);
        assert_eq!(weak_hr_constant(4, 0.0).unwrap(), 4.0);
        assert_eq!(weak_hr_constant(5, 0.0).unwrap(), 6.25);
        for n in 1..10 {
            let a = (n as f64 - 4.0) / 2.0;
            let expect = (n as f64 - 2.0).powi(2);
            assert_eq!(weak_hr_constant(n, a).unwrap(), expect);
        }
        assert!(matches!(weak_hr_constant(5, 1.5), Err(Error::Domain(_))));
        assert_eq!(rho_k(5, 0.0, 0).unwrap(), 6.25);
        assert!((rho_k(5, 0.0, 1).unwrap() - 4.0 * 12.25 * 2.25).abs() < 1e-12);
        assert!(rho_k(5, 0.5, 0).is_err());
    }

    #[test]
    fn weak_hr_equals_min_rho() {
        for n in 1..9u32 {
            let top = (n as f64 - 2.0) / 2.0;
            let mut a = -8.0;
            while a < top {
                if (a - (n as f64 - 4.0) / 2.0).abs() > 1e-9 {
                    let c = weak_hr_constant(n, a).unwrap();
                    let m = (0..=64).map(|k| rho_k(n, a, k).unwrap()).fold(f64::INFINITY, f64::min);
                    assert!((c - m).abs() <= 1e-12 * c.max(1.0), "N={n} a={a}: {c} vs {m}");
                }
                a += 0.37;
            }
        }
    }

    #[test]
    fn felli_schneider() {
        assert_eq!(felli_schneider_beta(6, 0.0), 0.0);
        let n = 6;
        let ac = 2.0;
        assert!(felli_schneider_b(n, ac - 1e-9).abs() < 1e-8);
        for a in [-0.3, -1.0, -2.5, -5.0] {
            let (al, be) = felli_schneider_image(n, a);
            assert!((be - felli_schneider_beta(n, al)).abs() < 1e-12, "a={a}");
        }
    }

    #[test]
    fn regions() {
        assert_eq!(region_classify(6, -1.0, -1.1), Region::Invalid);
        assert_eq!(region_classify(6, -1.0, -2.9), Region::SymmetryProved);
        assert_eq!(region_classify(6, -1.0, -1.5), Region::SymmetryProved);
        let fs = felli_schneider_beta(6, 1.0);
        assert!((fs - (-6.0 + 45f64.sqrt())).abs() < 1e-15);
        assert_eq!(region_classify(6, 1.0, fs + 0.01), Region::SymmetryBreaking);
        assert_eq!(region_classify(6, 1.0, -0.9), Region::ConjectureSymmetry);
        assert_eq!(region_classify(6, 1.0, fs), Region::Boundary);
        assert_eq!(region_classify(6, 1.0, -1.0), Region::Boundary);
        assert_eq!(region_classify(6, -5.0, -6.0), Region::Invalid);
    }

    #[test]
    fn hls_values() {
        assert!(rel(hls_c1(3, 1.0).unwrap(), 2.294010703541599000899) < 1e-13);
        assert!(rel(hls_c1(5, 3.0).unwrap(), 5.330630961165574445221) < 1e-13);
        assert!(rel(hls_c1(6, 4.0).unwrap(), 6.439699150160422015152) < 1e-13);
        assert!(rel(hls_c2(5, 3.0).unwrap(), 2.080865257545277455429) < 1e-13);
        assert!(hls_constants(5, 3.0).unwrap().1.is_some());
        assert!(hls_constants(5, 2.0).unwrap().1.is_none());
        assert!(hls_c2(5, 2.0).is_err());
    }

    #[test]
    fn mode_coefficients() {
        assert_eq!(lemtle_a1a2(6, 0.0, [1.0, 2.0, 1.0, 2.0]).unwrap(), (0.0, 0.0));
        let p = RsParams::new(5, -1.0, 0.0).unwrap();
        assert_eq!(a3k(&p, 0), 0.0);
        assert!(a3k(&p, 1) > 0.0);
    }

    #[test]
    fn sw_params() {
        let p = SwParams::diagonal(5, 0.3).unwrap();
        assert!(p.balance_residual().abs() < 1e-15);
        for n in 5..10 {
            for b in [0.1, 0.3, 0.5, 0.9] {
                let p = SwParams::t_squared(n, b).unwrap();
                let nf = n as f64;
                assert!(p.balance_residual().abs() < 1e-14);
                assert!(rel(p.r, 2.0 * (nf - 2.0 * b) / (nf + 4.0 - 6.0 * b)) < 1e-14);
                assert!(p.r > 1.0);
            }
        }
    }
}
