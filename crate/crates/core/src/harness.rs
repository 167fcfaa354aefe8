//! Verification suites, parameter sweeps, convergence studies and reports.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    a3k, ckn_exponent, combined_const, felli_schneider_beta, felli_schneider_image, hardy_const, hardy_rellich_const,
    hls_c1, middle_range, region_classify, rho_k, rs_coeffs_generic, rs_coeffs_unweighted, rs_sharp, sharp_s_div,
    sharp_s_gamma, sharp_s_singular, sobolev_exponent, weak_hr_constant, weighted_rellich_inf, CknParams, RsParams,
    SwCase, SwParams,
};
use crate::functionals::{
    div_expansion_check, hardy_1d_ratio, q_ckn, q_div, q_singular, rellich_1d_ratio, rs_quotient, shri_breakdown,
    sw_quotient, sw_stationarity, weak_hr_ratio, Perturb,
};
use crate::profiles::{weighted_bilaplacian, ModeFunction, RadialProfile};
use crate::spectral::{rellich_mode_scan, scan_minimum, weak_hr_mode_scan, Grid1D};
use crate::specfun::log_gamma;
use crate::transforms::{identity_lemtle, identity_psny, identity_vecgm, kelvin_check, power_cv_check};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Constants,
    Extremals,
    Identities,
    ModePositivity,
    WeakHR,
    Spectral,
    SteinWeiss,
    Convergence,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Constants,
        Suite::Extremals,
        Suite::Identities,
        Suite::ModePositivity,
        Suite::WeakHR,
        Suite::Spectral,
        Suite::SteinWeiss,
        Suite::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Extremals => "extremals",
            Suite::Identities => "identities",
            Suite::ModePositivity => "modepositivity",
            Suite::WeakHR => "weakhr",
            Suite::Spectral => "spectral",
            Suite::SteinWeiss => "steinweiss",
            Suite::Convergence => "convergence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub closed_form: f64,
    pub duality: f64,
    pub quadrature: f64,
    pub extremal: f64,
    pub euler_lagrange: f64,
    pub spectral: f64,
    /// Allowed shortfall of a discrete minimum below its constant.
    pub spectral_lower: f64,
    pub hls: f64,
    pub stationarity: f64,
    pub strictness: f64,
    pub min_order: f64,
    pub limit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closed_form: 1e-12,
            duality: 1e-14,
            quadrature: 1e-8,
            extremal: 1e-7,
            euler_lagrange: 1e-6,
            spectral: 1e-2,
            spectral_lower: 5e-3,
            hls: 1e-6,
            stationarity: 1e-4,
            strictness: 1e-10,
            min_order: 0.9,
            limit: 1e-2,
        }
    }
}

impl Tolerances {
    /// Overrides the tolerance that governs most cases of `suite`.
    pub fn set_primary(&mut self, suite: Suite, v: f64) {
        let slot = match suite {
            Suite::Constants | Suite::WeakHR => &mut self.closed_form,
            Suite::Extremals => &mut self.extremal,
            Suite::Identities => &mut self.quadrature,
            Suite::ModePositivity => &mut self.strictness,
            Suite::Spectral => &mut self.spectral,
            Suite::SteinWeiss => &mut self.stationarity,
            Suite::Convergence => &mut self.limit,
        };
        *slot = v;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub spectral_n: usize,
    pub spectral_half_width: f64,
    pub k_max: u32,
    pub eps: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Grids { spectral_n: 4000, spectral_half_width: 40.0, k_max: 6, eps: vec![0.1, 0.03, 0.01, 0.003] }
    }
}

impl Grids {
    pub fn spectral_grid(&self) -> Result<Grid1D> {
        Grid1D::symmetric(self.spectral_half_width, self.spectral_n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Random profiles per identity; the rational identities use five times as many.
    pub draws: usize,
    pub tolerances: Tolerances,
    pub grids: Grids,
    pub sweep: Option<SweepSpec>,
    /// JSON-lines run log.
    pub log: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 20240611, draws: 20, tolerances: Tolerances::default(), grids: Grids::default(), sweep: None, log: None }
    }
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let c: Config = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let all = [
            t.closed_form,
            t.duality,
            t.quadrature,
            t.extremal,
            t.euler_lagrange,
            t.spectral,
            t.spectral_lower,
            t.hls,
            t.stationarity,
            t.strictness,
            t.min_order,
            t.limit,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Config("tolerances must be finite and non-negative".into()));
        }
        self.grids.spectral_grid().map_err(|e| Error::Config(e.to_string()))?;
        check_eps(&self.grids.eps)?;
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        Ok(())
    }
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.len() < 2 {
        return Err(Error::Config("need at least two eps values".into()));
    }
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config(format!("eps list {eps:?} must be positive and strictly decreasing")));
    }
    Ok(())
}

mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    #[serde(with = "nullable")]
    pub value: f64,
    #[serde(with = "nullable")]
    pub reference: f64,
    #[serde(with = "nullable")]
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn param_map(params: &[(&str, f64)]) -> BTreeMap<String, f64> {
    params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl Case {
    fn build(name: &str, params: &[(&str, f64)], value: f64, reference: f64, rel_err: f64, tolerance: f64) -> Self {
        Case {
            name: name.to_string(),
            params: param_map(params),
            value,
            reference,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
            note: None,
        }
    }

    /// Relative error, or absolute error when the reference is zero.
    pub fn compare(name: &str, params: &[(&str, f64)], value: f64, reference: f64, tolerance: f64) -> Self {
        let scale = if reference == 0.0 { 1.0 } else { reference.abs() };
        Self::build(name, params, value, reference, (value - reference).abs() / scale, tolerance)
    }

    /// Passes when `value >= bound`; `rel_err` is the relative shortfall.
    pub fn at_least(name: &str, params: &[(&str, f64)], value: f64, bound: f64) -> Self {
        let scale = if bound == 0.0 { 1.0 } else { bound.abs() };
        let short = if value >= bound { 0.0 } else { (bound - value) / scale };
        Self::build(name, params, value, bound, if value.is_nan() { f64::NAN } else { short }, 0.0)
    }

    /// Passes when `value > bound`.
    pub fn exceeds(name: &str, params: &[(&str, f64)], value: f64, bound: f64) -> Self {
        let short = if value > bound { 0.0 } else { (bound - value).max(f64::MIN_POSITIVE) };
        Self::build(name, params, value, bound, if value.is_nan() { f64::NAN } else { short }, 0.0)
    }

    pub fn failed(name: &str, params: &[(&str, f64)], reference: f64, tolerance: f64, err: &Error) -> Self {
        let mut c = Self::build(name, params, f64::NAN, reference, f64::NAN, tolerance);
        c.note = Some(err.to_string());
        c
    }

    fn from_result(name: &str, params: &[(&str, f64)], reference: f64, tolerance: f64, r: Result<Case>) -> Self {
        r.unwrap_or_else(|e| Self::failed(name, params, reference, tolerance, &e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub started: f64,
    pub finished: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct ReportBody<'a> {
    suite: &'a str,
    seed: u64,
    cases: &'a [Case],
    summary: Summary,
    warnings: &'a [String],
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, cases: Vec<Case>, warnings: Vec<String>, started: f64) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: suite.to_string(),
            seed,
            summary: Summary { total: cases.len(), passed },
            cases,
            started,
            finished: now(),
            warnings,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    /// Serialized report without timestamps.
    pub fn body_json(&self) -> Result<String> {
        let b = ReportBody {
            suite: &self.suite,
            seed: self.seed,
            cases: &self.cases,
            summary: self.summary,
            warnings: &self.warnings,
        };
        serde_json::to_string(&b).map_err(|e| Error::Numerical(e.to_string()))
    }

    /// FNV-1a hash of [`Self::body_json`].
    pub fn body_hash(&self) -> Result<u64> {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.body_json()?.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        Ok(h)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// Appends one JSON record for a suite execution.
pub fn append_run_log(path: &Path, report: &VerificationReport) -> Result<()> {
    let rec = serde_json::json!({
        "suite": report.suite,
        "seed": report.seed,
        "total": report.summary.total,
        "passed": report.summary.passed,
        "started": report.started,
        "finished": report.finished,
        "body_hash": format!("{:016x}", report.body_hash()?),
    });
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    writeln!(f, "{rec}").map_err(|e| Error::Config(e.to_string()))
}

/// Caps the rayon pool at `SHARPINEQ_THREADS` when set. Returns the pool size.
pub fn configure_threads() -> Result<usize> {
    if let Ok(v) = std::env::var("SHARPINEQ_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("SHARPINEQ_THREADS='{v}' is not a count")))?;
        if n == 0 {
            return Err(Error::Config("SHARPINEQ_THREADS must be positive".into()));
        }
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

pub fn run_suite(suite: Suite, config: &Config) -> Result<VerificationReport> {
    config.validate()?;
    let started = now();
    let (cases, warnings) = match suite {
        Suite::Constants => (suite_constants(config), vec![]),
        Suite::Extremals => (suite_extremals(config), vec![]),
        Suite::Identities => suite_identities(config),
        Suite::ModePositivity => (suite_mode_positivity(config), vec![]),
        Suite::WeakHR => (suite_weak_hr(config), vec![]),
        Suite::Spectral => (suite_spectral(config)?, vec![]),
        Suite::SteinWeiss => (suite_stein_weiss(config), vec![]),
        Suite::Convergence => (suite_convergence(config), vec![]),
    };
    Ok(VerificationReport::new(suite.name(), config.seed, cases, warnings, started))
}

fn rng_for(config: &Config, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `pi^2 (N+2) N (N-2) (N-4) (Gamma(N/2)/Gamma(N))^{4/N}`
fn classical_rellich_sobolev(n: u32) -> Result<f64> {
    let nf = n as f64;
    let l = 4.0 / nf * (log_gamma(nf / 2.0)? - log_gamma(nf)?);
    Ok(std::f64::consts::PI.powi(2) * (nf + 2.0) * nf * (nf - 2.0) * (nf - 4.0) * l.exp())
}

fn suite_constants(config: &Config) -> Vec<Case> {
    let t = config.tolerances.closed_form;
    let mut cases = Vec::new();
    for n in 3u32..=8 {
        let nf = n as f64;
        let p = [("N", nf), ("a", 0.0)];
        cases.push(Case::from_result("weak_hr_constant", &p, nf * nf / 4.0, t,
            weak_hr_constant(n, 0.0).map(|v| Case::compare("weak_hr_constant", &p, v, nf * nf / 4.0, t))));
        let a = (nf - 4.0) / 2.0;
        let p = [("N", nf), ("a", a)];
        let r = (nf - 2.0) * (nf - 2.0);
        cases.push(Case::from_result("weak_hr_constant", &p, r, t,
            weak_hr_constant(n, a).map(|v| Case::compare("weak_hr_constant", &p, v, r, t))));
    }
    for n in 5u32..=9 {
        let p = [("N", n as f64), ("gamma", 0.0)];
        let r = classical_rellich_sobolev(n).and_then(|c| Ok((sharp_s_gamma(n, 0.0)?, c)));
        cases.push(Case::from_result("sharp_s_gamma_unweighted", &p, f64::NAN, t,
            r.map(|(v, c)| Case::compare("sharp_s_gamma_unweighted", &p, v, c, t))));
    }
    for (n, alpha, beta) in [(5u32, -1.0, -4.0), (6, -1.0, -3.5), (7, -0.5, -3.2), (6, -2.0, -5.5), (8, -1.5, -4.5)] {
        let p = [("N", n as f64), ("alpha", alpha), ("beta", beta)];
        let r = (|| Ok((sharp_s_singular(n, alpha, beta)?, sharp_s_div(n, alpha, 2.0 * alpha - beta - 4.0)?)))();
        cases.push(Case::from_result("singular_div_duality", &p, f64::NAN, config.tolerances.duality,
            r.map(|(s, d)| Case::compare("singular_div_duality", &p, s, d, config.tolerances.duality))));
    }
    for n in [5u32, 6, 8] {
        for a in [0.25, 0.5, 1.0] {
            let (alpha, beta) = felli_schneider_image(n, a);
            let p = [("N", n as f64), ("a", a)];
            cases.push(Case::compare("felli_schneider_image", &p, beta, felli_schneider_beta(n, alpha), 1e-10));
        }
    }
    cases
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn rs_reduction_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for n in 5i64..=9 {
        for (a, b) in [(1, 3), (1, 2), (2, 3), (1, 1), (5, 4)] {
            let mu = q(a, b);
            if mu >= q(n - 4, 1) {
                continue;
            }
            let nn = q(n, 1);
            let g = rs_coeffs_generic(nn.clone(), BigRational::zero(), mu.clone());
            let u = rs_coeffs_unweighted(nn, mu);
            let ok = g == u;
            let p = [("N", n as f64), ("mu", a as f64 / b as f64)];
            out.push(Case::compare("rs_coeffs_unweighted_exact", &p, if ok { 0.0 } else { 1.0 }, 0.0, 0.0));
        }
    }
    out
}

fn sample_regular(rng: &mut ChaCha8Rng, n: u32) -> (f64, f64) {
    let nf = n as f64;
    let alpha = rng.random_range((2.0 - nf + 0.5).max(-2.5)..-0.2);
    let lo = alpha - 2.0;
    let hi = nf * alpha / (nf - 2.0);
    (alpha, lo + (hi - lo) * rng.random_range(0.1..1.0))
}

fn sample_singular(rng: &mut ChaCha8Rng, n: u32) -> (f64, f64) {
    let nf = n as f64;
    let alpha = rng.random_range((2.0 - nf + 0.5).max(-2.5)..-0.2);
    let lo = (nf - 4.0) / (nf - 2.0) * alpha - 4.0;
    let hi = alpha - 2.0;
    (alpha, lo + (hi - lo) * rng.random_range(0.0..0.9))
}

fn sample_rs(rng: &mut ChaCha8Rng) -> (u32, f64, f64) {
    let n = rng.random_range(5u32..=9);
    let nf = n as f64;
    // keeps the bubble exponent (2+gamma) zeta above 0.1
    let gamma = rng.random_range(-1.5..=0.0);
    let mu = gamma + (nf - 4.0 - gamma) * rng.random_range(0.0..0.8);
    (n, gamma, mu)
}

fn el_residual(n: u32, gamma: f64) -> Result<f64> {
    let u = RadialProfile::ckn_normalized(n, gamma)?;
    let op = weighted_bilaplacian(&u, n, gamma);
    let nf = n as f64;
    let e = (nf + 4.0 + 3.0 * gamma) / (nf - 4.0 - gamma);
    let mut worst: f64 = 0.0;
    for i in 0..40 {
        let r = 10f64.powf(-2.0 + 4.0 * i as f64 / 39.0);
        let rhs = r.powf(gamma) * u.value(r).powf(e);
        worst = worst.max((op(r)? - rhs).abs() / rhs.abs());
    }
    Ok(worst)
}

fn suite_extremals(config: &Config) -> Vec<Case> {
    let t = &config.tolerances;
    let mut rng = rng_for(config, Suite::Extremals);
    let grid: Vec<(u32, f64)> = [5u32, 6, 7, 9].iter().flat_map(|&n| [-1.5, -1.0, -0.5, 0.0].map(|g| (n, g))).collect();
    let mut cases: Vec<Case> = grid
        .par_iter()
        .flat_map_iter(|&(n, g)| {
            let p = [("N", n as f64), ("gamma", g)];
            let r = (|| {
                let u = RadialProfile::ckn_normalized(n, g)?;
                Ok((q_ckn(&u, n, g)?, sharp_s_gamma(n, g)?))
            })();
            let a = Case::from_result("ckn_extremal_quotient", &p, f64::NAN, t.extremal,
                r.map(|(v, c)| Case::compare("ckn_extremal_quotient", &p, v, c, t.extremal)));
            let b = Case::from_result("euler_lagrange_residual", &p, 0.0, t.euler_lagrange,
                el_residual(n, g).map(|v| Case::compare("euler_lagrange_residual", &p, v, 0.0, t.euler_lagrange)));
            [a, b]
        })
        .collect();
    let rs: Vec<(u32, f64, f64)> = (0..12).map(|_| sample_rs(&mut rng)).collect();
    let reg: Vec<(u32, f64, f64)> = (0..12)
        .map(|_| {
            let n = rng.random_range(5u32..=9);
            let (a, b) = sample_regular(&mut rng, n);
            (n, a, b)
        })
        .collect();
    let sing: Vec<(u32, f64, f64)> = (0..12)
        .map(|_| {
            let n = rng.random_range(5u32..=9);
            let (a, b) = sample_singular(&mut rng, n);
            (n, a, b)
        })
        .collect();
    cases.extend(rs.par_iter().map(|&(n, g, mu)| {
        let p = [("N", n as f64), ("gamma", g), ("mu", mu)];
        let r = (|| {
            let par = RsParams::new(n, g, mu)?;
            let u = RadialProfile::rs_extremal(1.0, 1.0, n, g, mu)?;
            Ok(Case::compare("rs_extremal_quotient", &p, rs_quotient(&u, &par)?, rs_sharp(&par)?, t.extremal))
        })();
        Case::from_result("rs_extremal_quotient", &p, f64::NAN, t.extremal, r)
    }).collect::<Vec<_>>());
    cases.extend(rs_reduction_cases());
    cases.extend(reg.par_iter().map(|&(n, a, b)| {
        let p = [("N", n as f64), ("alpha", a), ("beta", b)];
        let r = (|| {
            let u = RadialProfile::div_extremal(1.0, 1.0, n, a, b)?;
            Ok(Case::compare("div_extremal_quotient", &p, q_div(&u, n, a, b)?, sharp_s_div(n, a, b)?, t.extremal))
        })();
        Case::from_result("div_extremal_quotient", &p, f64::NAN, t.extremal, r)
    }).collect::<Vec<_>>());
    cases.extend(sing.par_iter().flat_map_iter(|&(n, a, b)| {
        let p = [("N", n as f64), ("alpha", a), ("beta", b)];
        let r = (|| {
            let u = RadialProfile::singular_extremal(1.0, n, a, b)?;
            Ok(Case::compare("singular_extremal_quotient", &p, q_singular(&u, n, a, b)?, sharp_s_singular(n, a, b)?, t.extremal))
        })();
        let d = (|| Ok((sharp_s_singular(n, a, b)?, sharp_s_div(n, a, 2.0 * a - b - 4.0)?)))();
        [
            Case::from_result("singular_extremal_quotient", &p, f64::NAN, t.extremal, r),
            Case::from_result("singular_div_duality", &p, f64::NAN, t.duality,
                d.map(|(s, v)| Case::compare("singular_div_duality", &p, s, v, t.duality))),
        ]
    }).collect::<Vec<_>>());
    cases
}

fn random_bump(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.random_range(0.2..=5.0), rng.random_range(0.3..=2.0))
}

fn bump(c: f64, w: f64, k: u32) -> Result<RadialProfile> {
    Ok(RadialProfile::gauss_bump(c, w)?.times_power(k as f64))
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> (i64, i64) {
    let d = rng.random_range(1i64..=12);
    (rng.random_range(lo * d..=hi * d), d)
}

/// Random draws for the integration-by-parts and change-of-variable identities.
fn suite_identities(config: &Config) -> (Vec<Case>, Vec<String>) {
    let t = config.tolerances.quadrature;
    let draws = config.draws;
    let mut warnings = Vec::new();
    if draws == 0 {
        warnings.push("no random draws requested; identity suite is vacuous".to_string());
        return (Vec::new(), warnings);
    }
    let mut rng = rng_for(config, Suite::Identities);
    type Job = Box<dyn Fn() -> Vec<Case> + Send + Sync>;
    let mut jobs: Vec<Job> = Vec::new();
    for _ in 0..draws {
        let n = rng.random_range(5u32..=9);
        let nf = n as f64;
        let mu = rng.random_range(-1.5..nf - 4.5);
        let b = [0; 4].map(|_| rng.random_range(-3.0..3.0));
        let (c, w) = random_bump(&mut rng);
        jobs.push(Box::new(move || {
            let p = [("N", nf), ("mu", mu), ("b1", b[0]), ("b2", b[1]), ("b3", b[2]), ("b4", b[3]), ("center", c), ("width", w)];
            let r = bump(c, w, 0).and_then(|f| identity_lemtle(&f, n, mu, b));
            vec![Case::from_result("lemtle", &p, 0.0, t, r.map(|v| Case::compare("lemtle", &p, v, 0.0, t)))]
        }));
        let (n, g, mu) = sample_rs(&mut rng);
        let (c, w) = random_bump(&mut rng);
        jobs.push(Box::new(move || {
            let p = [("N", n as f64), ("gamma", g), ("mu", mu), ("center", c), ("width", w)];
            let r = (|| power_cv_check(&bump(c, w, 0)?, &RsParams::new(n, g, mu)?))();
            vec![Case::from_result("power_change_of_variable", &p, 0.0, t,
                r.map(|v| Case::compare("power_change_of_variable", &p, v, 0.0, t)))]
        }));
        let n = rng.random_range(5u32..=9);
        let g = rng.random_range(-1.9..=0.0);
        let k = rng.random_range(0u32..=2);
        let (c, w) = random_bump(&mut rng);
        jobs.push(Box::new(move || {
            let p = [("N", n as f64), ("gamma", g), ("k", k as f64), ("center", c), ("width", w)];
            let names = ["psny1", "psny2", "psny3"];
            match bump(c, w, k).and_then(|f| ModeFunction::new(k, f)).and_then(|m| identity_psny(&m, n, g)) {
                Ok(checks) => checks.iter().zip(names).map(|(ch, nm)| Case::compare(nm, &p, ch.residual, 0.0, t)).collect(),
                Err(e) => names.iter().map(|nm| Case::failed(nm, &p, 0.0, t, &e)).collect(),
            }
        }));
        let n = rng.random_range(5u32..=9);
        let (a, be) = sample_regular(&mut rng, n);
        let k = rng.random_range(0u32..=2);
        let (c, w) = random_bump(&mut rng);
        jobs.push(Box::new(move || {
            let p = [("N", n as f64), ("alpha", a), ("beta", be), ("k", k as f64), ("center", c), ("width", w)];
            let r = bump(c, w, k).and_then(|f| ModeFunction::new(k, f)).and_then(|m| div_expansion_check(&m, n, a, be));
            vec![Case::from_result("div_expansion", &p, 0.0, t, r.map(|ch| Case::compare("div_expansion", &p, ch.residual, 0.0, t)))]
        }));
        let n = rng.random_range(5u32..=9);
        let (a, be) = sample_singular(&mut rng, n);
        let (c, w) = random_bump(&mut rng);
        jobs.push(Box::new(move || {
            let p = [("N", n as f64), ("alpha", a), ("beta", be), ("center", c), ("width", w)];
            match bump(c, w, 0).map(|v| v.times_power(2.0 + be - a)).and_then(|u| kelvin_check(&u, n, a, be)) {
                Ok((e1, e2)) => vec![Case::compare("kelvin_norm", &p, e1, 0.0, t), Case::compare("kelvin_energy", &p, e2, 0.0, t)],
                Err(e) => vec![Case::failed("kelvin_norm", &p, 0.0, t, &e), Case::failed("kelvin_energy", &p, 0.0, t, &e)],
            }
        }));
    }
    let mut triples = Vec::new();
    while triples.len() < 5 * draws {
        let n = rng.random_range(5i64..=10);
        let (an, ad) = random_rational(&mut rng, -3, 2);
        let (bn, bd) = random_rational(&mut rng, -4, 2);
        let (nn, al, be) = (q(n, 1), q(an, ad), q(bn, bd));
        if identity_vecgm(&nn, &al, &be).is_ok() {
            triples.push((nn, al, be, n as f64, an as f64 / ad as f64, bn as f64 / bd as f64));
        }
    }
    let mut cases: Vec<Case> = jobs.par_iter().flat_map_iter(|j| j()).collect();
    cases.extend(triples.par_iter().map(|(nn, al, be, n, a, b)| {
        let p = [("N", *n), ("alpha", *a), ("beta", *b)];
        let ok = identity_vecgm(nn, al, be).map(|v| v.holds()).unwrap_or(false);
        Case::compare("vecgm_exact", &p, if ok { 0.0 } else { 1.0 }, 0.0, 0.0)
    }).collect::<Vec<_>>());
    (cases, warnings)
}

fn suite_mode_positivity(config: &Config) -> Vec<Case> {
    let mut pts = Vec::new();
    for n in 5u32..=10 {
        for g in [-1.9, -1.5, -1.0, -0.5, 0.0] {
            let nf = n as f64;
            for j in 1..=10 {
                pts.push((n, g, g + (nf - 4.0 - g) * j as f64 / 11.0));
            }
        }
    }
    pts.par_iter()
        .map(|&(n, g, mu)| {
            let p = [("N", n as f64), ("gamma", g), ("mu", mu)];
            match RsParams::new(n, g, mu) {
                Ok(par) => {
                    let m = (1..=64).map(|k| a3k(&par, k)).fold(f64::INFINITY, f64::min);
                    Case::exceeds("a3k_min_over_modes", &p, m, 0.0)
                }
                Err(e) => Case::failed("a3k_min_over_modes", &p, 0.0, 0.0, &e),
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .chain(strictness_cases(rng_for(config, Suite::ModePositivity).random(), 30, config.tolerances.strictness))
        .collect()
}

fn suite_weak_hr(config: &Config) -> Vec<Case> {
    let t = config.tolerances.closed_form;
    let mut cases = Vec::new();
    for n in 3u32..=8 {
        let nf = n as f64;
        for a in [0.0, (nf - 4.0) / 2.0] {
            let r = if a == 0.0 { nf * nf / 4.0 } else { (nf - 2.0) * (nf - 2.0) };
            let p = [("N", nf), ("a", a)];
            cases.push(Case::from_result("weak_hr_constant", &p, r, t,
                weak_hr_constant(n, a).map(|v| Case::compare("weak_hr_constant", &p, v, r, t))));
        }
    }
    // middle range: the constant is the k=0 value; outer range: the best mode
    for (n, a) in [(5u32, -4.0), (6, -4.5), (7, -5.0), (5, 0.25), (6, -3.0), (8, 1.0), (9, 3.0)] {
        let p = [("N", n as f64), ("a", a)];
        let r = (|| {
            let c = weak_hr_constant(n, a)?;
            let best = (0..=64).map(|k| rho_k(n, a, k)).collect::<Result<Vec<_>>>()?;
            let m = if middle_range(n, a) { best[0] } else { best.iter().cloned().fold(f64::INFINITY, f64::min) };
            Ok(Case::compare("weak_hr_constant_vs_modes", &p, c, m, t))
        })();
        cases.push(Case::from_result("weak_hr_constant_vs_modes", &p, f64::NAN, t, r));
    }
    cases
}

fn suite_spectral(config: &Config) -> Result<Vec<Case>> {
    let t = &config.tolerances;
    let grid = config.grids.spectral_grid()?;
    let k_max = config.grids.k_max;
    let pts = [(3u32, 0.0), (4, 0.0), (5, 0.0), (5, 0.25), (6, -3.0), (5, -4.0)];
    let mut cases: Vec<Case> = pts
        .par_iter()
        .flat_map_iter(|&(n, a)| {
            let p = [("N", n as f64), ("a", a), ("grid_n", grid.n as f64)];
            let r = (|| {
                let c = weak_hr_constant(n, a)?;
                let s = weak_hr_mode_scan(n, a, k_max, &grid)?;
                let (_, m) = scan_minimum(&s).ok_or_else(|| Error::Numerical("empty scan".into()))?;
                Ok((m, c))
            })();
            match r {
                Ok((m, c)) => vec![
                    Case::compare("weak_hr_spectral_minimum", &p, m, c, t.spectral),
                    Case::at_least("weak_hr_spectral_lower_bound", &p, m, c - t.spectral_lower * c.abs()),
                ],
                Err(e) => vec![Case::failed("weak_hr_spectral_minimum", &p, f64::NAN, t.spectral, &e)],
            }
        })
        .collect();
    let p = [("N", 5.0), ("a", 0.0), ("grid_n", grid.n as f64)];
    let r = rellich_mode_scan(5, 0.0, k_max, &grid).and_then(|s| {
        let (_, m) = scan_minimum(&s).ok_or_else(|| Error::Numerical("empty scan".into()))?;
        let inf = weighted_rellich_inf(5, 0.0, 64);
        Ok(Case::compare("rellich_spectral_minimum", &p, m, inf.value, t.spectral))
    });
    cases.push(Case::from_result("rellich_spectral_minimum", &p, 25.0 / 16.0, t.spectral, r));
    Ok(cases)
}

fn stationarity_case(p: SwParams, seed_case: u64, i: usize) -> (Vec<(&'static str, f64)>, Result<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_case.wrapping_add(i as u64));
    let (c, w) = random_bump(&mut rng);
    let which = if i % 2 == 0 { Perturb::F } else { Perturb::G };
    let params = vec![
        ("N", p.n as f64),
        ("b", p.b),
        ("t_squared", if p.case == SwCase::TSquared { 1.0 } else { 0.0 }),
        ("center", c),
        ("width", w),
        ("perturb_g", if which == Perturb::G { 1.0 } else { 0.0 }),
    ];
    let r = (|| {
        let f = RadialProfile::sw_f(1.0, 1.0, p.n, p.b, p.case)?;
        let g = RadialProfile::sw_g(1.0, 1.0, p.n, p.b, p.case)?;
        let phi = RadialProfile::gauss_bump(c, w)?;
        let s = sw_stationarity(&f, &g, &p, &phi, which, 1e-2)?;
        Ok(s.slope.abs() / s.quotient.abs())
    })();
    (params, r)
}

/// Seeded stationarity cases for one Stein-Weiss configuration.
pub fn sw_stationarity_cases(p: SwParams, seed: u64, count: usize, tol: f64) -> Vec<Case> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let (params, r) = stationarity_case(p, seed, i);
            Case::from_result("sw_stationarity", &params, 0.0, tol,
                r.map(|v| Case::compare("sw_stationarity", &params, v, 0.0, tol)))
        })
        .collect()
}

pub fn sw_hls_case(n: u32, tol: f64) -> Case {
    let p = [("N", n as f64), ("a", 0.0), ("b", 0.0)];
    let r = (|| {
        let sp = SwParams::diagonal(n, 0.0)?;
        let f = RadialProfile::sw_f(1.0, 1.0, n, 0.0, SwCase::Diagonal)?;
        Ok(Case::compare("sw_hls_diagonal", &p, sw_quotient(&f, &f, &sp)?, hls_c1(n, n as f64 - 2.0)?, tol))
    })();
    Case::from_result("sw_hls_diagonal", &p, f64::NAN, tol, r)
}

fn suite_stein_weiss(config: &Config) -> Vec<Case> {
    let t = &config.tolerances;
    let mut cases: Vec<Case> = [3u32, 5, 6].par_iter().map(|&n| sw_hls_case(n, t.hls)).collect();
    let configs = [
        (5u32, 0.3, SwCase::TSquared),
        (6, 0.5, SwCase::TSquared),
        (7, 0.25, SwCase::TSquared),
        (5, 0.3, SwCase::Diagonal),
        (6, 0.7, SwCase::Diagonal),
    ];
    for (j, &(n, b, case)) in configs.iter().enumerate() {
        let pp = [("N", n as f64), ("b", b)];
        match SwParams::new(n, b, case) {
            Ok(p) => {
                cases.push(Case::compare("sw_exponent_balance", &pp, p.balance_residual(), 0.0, t.closed_form));
                cases.extend(sw_stationarity_cases(p, config.seed.wrapping_mul(31).wrapping_add(j as u64 * 1000), 10, t.stationarity));
            }
            Err(e) => cases.push(Case::failed("sw_exponent_balance", &pp, 0.0, t.closed_form, &e)),
        }
    }
    cases
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceFamily {
    PowerCut,
    TailIntegral,
}

impl FromStr for SequenceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "powercut" | "power_cut" => Ok(SequenceFamily::PowerCut),
            "tail" | "tailintegral" | "tail_integral" => Ok(SequenceFamily::TailIntegral),
            _ => Err(Error::Config(format!("unknown sequence family '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioKind {
    WeakHR,
    Rellich1D,
    Hardy1D,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub ratio: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub family: SequenceFamily,
    pub ratio: RatioKind,
    pub n: u32,
    pub a: f64,
    pub k: u32,
    pub target: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln|error|` against `ln eps`.
    pub fitted_order: f64,
    /// Linear extrapolation to `eps = 0` from the last two rows.
    pub limit: f64,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["eps", "ratio", "error", "target", "limit"]).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([r.eps.to_string(), r.ratio.to_string(), r.error.to_string(), self.target.to_string(), self.limit.to_string()])
                .map_err(csv_err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?).map_err(|e| Error::Numerical(e.to_string()))
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_order(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> =
        x.iter().zip(y).filter(|(a, b)| **a > 0.0 && b.abs() > 0.0).map(|(a, b)| (a.ln(), b.abs().ln())).collect();
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(p, q), (a, b)| (p + a, q + b));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
    num / den
}

pub fn convergence_study(
    family: SequenceFamily,
    ratio: RatioKind,
    n: u32,
    a: f64,
    k: u32,
    eps_list: &[f64],
) -> Result<ConvergenceTable> {
    check_eps(eps_list)?;
    let nf = n as f64;
    let m = (nf - 4.0 - 2.0 * a) / 2.0;
    let critical = (a - (nf - 4.0) / 2.0).abs() <= 1e-14;
    if family == SequenceFamily::TailIntegral && (!critical || k != 0) {
        return Err(Error::Config("the tail-integral sequence needs a=(N-4)/2 and k=0".into()));
    }
    if ratio != RatioKind::WeakHR && k != 0 {
        return Err(Error::Config("one-dimensional ratios are radial, use k=0".into()));
    }
    let target = match ratio {
        RatioKind::WeakHR if critical => (nf - 2.0) * (nf - 2.0),
        RatioKind::WeakHR => rho_k(n, a, k)?,
        RatioKind::Rellich1D => (m + 1.0) * (m + 1.0),
        RatioKind::Hardy1D => m * m,
    };
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            let f = match family {
                SequenceFamily::PowerCut => RadialProfile::power_cut(n, a, eps)?,
                SequenceFamily::TailIntegral => RadialProfile::tail_integral(eps)?,
            };
            let v = match ratio {
                RatioKind::WeakHR => weak_hr_ratio(&ModeFunction::new(k, f)?, n, a)?,
                RatioKind::Rellich1D => rellich_1d_ratio(&f, n, a)?,
                RatioKind::Hardy1D => hardy_1d_ratio(&f, n, a)?,
            };
            Ok(ConvergenceRow { eps, ratio: v, error: v - target })
        })
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let err: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let l = rows.len();
    let (e1, r1, e2, r2) = (rows[l - 2].eps, rows[l - 2].ratio, rows[l - 1].eps, rows[l - 1].ratio);
    Ok(ConvergenceTable {
        family,
        ratio,
        n,
        a,
        k,
        target,
        fitted_order: fitted_order(&eps, &err),
        limit: (e1 * r2 - e2 * r1) / (e1 - e2),
        rows,
    })
}

fn convergence_cases(tbl: Result<ConvergenceTable>, params: &[(&str, f64)], t: &Tolerances, tag: &str) -> Vec<Case> {
    let on = format!("{tag}_order");
    let ln = format!("{tag}_limit");
    match tbl {
        Ok(tb) => vec![
            Case::at_least(&on, params, tb.fitted_order, t.min_order),
            Case::compare(&ln, params, tb.limit, tb.target, t.limit),
        ],
        Err(e) => vec![Case::failed(&on, params, t.min_order, 0.0, &e), Case::failed(&ln, params, f64::NAN, t.limit, &e)],
    }
}

/// Cases whose cutoff corrections are small at the default eps list.
pub const POWER_CUT_CASES: [(u32, f64, u32); 7] =
    [(7, 0.0, 0), (8, 0.0, 0), (5, -1.0, 0), (6, -3.0, 0), (5, -4.0, 1), (7, -4.0, 0), (8, -2.0, 0)];

fn suite_convergence(config: &Config) -> Vec<Case> {
    let t = &config.tolerances;
    let eps = &config.grids.eps;
    let mut jobs: Vec<(SequenceFamily, RatioKind, u32, f64, u32, &str)> = Vec::new();
    for &(n, a, k) in &POWER_CUT_CASES {
        jobs.push((SequenceFamily::PowerCut, RatioKind::WeakHR, n, a, k, "powercut_weak_hr"));
    }
    for n in 5u32..=8 {
        jobs.push((SequenceFamily::TailIntegral, RatioKind::WeakHR, n, (n as f64 - 4.0) / 2.0, 0, "tail_weak_hr"));
    }
    for (n, a) in [(7u32, 0.0), (8, 0.0)] {
        jobs.push((SequenceFamily::PowerCut, RatioKind::Rellich1D, n, a, 0, "powercut_rellich_1d"));
    }
    for (n, a) in [(5u32, 0.0), (7, 0.0)] {
        jobs.push((SequenceFamily::PowerCut, RatioKind::Hardy1D, n, a, 0, "powercut_hardy_1d"));
    }
    jobs.par_iter()
        .flat_map_iter(|&(fam, ratio, n, a, k, tag)| {
            let p = [("N", n as f64), ("a", a), ("k", k as f64)];
            convergence_cases(convergence_study(fam, ratio, n, a, k, eps), &p, t, tag)
        })
        .collect()
}

/// Strictness margins `gap / leading term` for random profiles.
pub fn strictness_cases(seed: u64, count: usize, tol: f64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(u32, f64, f64, f64)> = (0..count)
        .map(|_| {
            let n = rng.random_range(5u32..=9);
            let g = rng.random_range(-1.9..=0.0);
            let (c, w) = random_bump(&mut rng);
            (n, g, c, w)
        })
        .collect();
    draws
        .par_iter()
        .map(|&(n, g, c, w)| {
            let p = [("N", n as f64), ("gamma", g), ("center", c), ("width", w)];
            let r = (|| {
                let b = shri_breakdown(&bump(c, w, 0)?, n, g)?;
                let lead = b.get("bilaplacian_term").unwrap_or(f64::NAN);
                Ok(Case::at_least("shri_gap_margin", &p, b.total / lead, tol))
            })();
            Case::from_result("shri_gap_margin", &p, tol, 0.0, r)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepFamily {
    /// Axes `alpha`, `beta`.
    Region,
    /// Axis `gamma`.
    Gamma,
    /// Axes `alpha`, `beta` in the singular range.
    Singular,
    /// Axis `a`.
    WeakHr,
}

impl SweepFamily {
    fn axes(&self) -> &'static [&'static str] {
        match self {
            SweepFamily::Region | SweepFamily::Singular => &["alpha", "beta"],
            SweepFamily::Gamma => &["gamma"],
            SweepFamily::WeakHr => &["a"],
        }
    }

    fn outputs(&self) -> &'static [&'static str] {
        match self {
            SweepFamily::Region => &["region", "ckn_exponent", "sharp_s_div", "fs_beta"],
            SweepFamily::Gamma => &["sharp_s_gamma", "sobolev_exponent", "hardy_const", "hardy_rellich_const", "combined_const"],
            SweepFamily::Singular => &["sharp_s_singular", "bar_beta", "sharp_s_div_dual", "duality_residual"],
            SweepFamily::WeakHr => &["weak_hr_constant", "middle_range", "argmin_k"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps).map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: SweepFamily,
    #[serde(rename = "N")]
    pub n: u32,
    pub axes: Vec<Axis>,
    /// Empty means every column of the family.
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let want = self.family.axes();
        let got: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        if got != want {
            return Err(Error::Config(format!("{:?} sweep needs axes {want:?}, got {got:?}", self.family)));
        }
        for a in &self.axes {
            if a.steps < 1 || !a.min.is_finite() || !a.max.is_finite() || a.max < a.min {
                return Err(Error::Config(format!("axis '{}' has an invalid range", a.name)));
            }
        }
        for o in &self.outputs {
            if !self.family.outputs().contains(&o.as_str()) {
                return Err(Error::Config(format!("unknown output column '{o}' for {:?}", self.family)));
            }
        }
        Ok(())
    }

    pub fn output_columns(&self) -> Vec<String> {
        if self.outputs.is_empty() {
            self.family.outputs().iter().map(|s| s.to_string()).collect()
        } else {
            self.outputs.clone()
        }
    }

    /// Reads either a bare spec or a config file with a `[sweep]` table.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec = match toml::from_str::<SweepSpec>(s) {
            Ok(v) => v,
            Err(bare) => Config::from_toml_str(s)
                .ok()
                .and_then(|c| c.sweep)
                .ok_or_else(|| Error::Config(format!("no sweep spec: {bare}")))?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub const INVALID: &str = "Invalid";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Invalid,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Invalid => f.write_str(INVALID),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Numerical(format!("csv: {e}"))
}

impl SweepTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.to_string())).map_err(csv_err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

fn num(r: Result<f64>) -> Cell {
    match r {
        Ok(v) if v.is_finite() => Cell::Num(v),
        _ => Cell::Invalid,
    }
}

fn sweep_cell(family: SweepFamily, n: u32, x: &[f64], col: &str) -> Cell {
    match (family, col) {
        (SweepFamily::Region, "region") => Cell::Text(region_classify(n, x[0], x[1]).as_str().to_string()),
        (SweepFamily::Region, "ckn_exponent") => num(CknParams::regular(n, x[0], x[1]).and_then(|_| ckn_exponent(n, x[0], x[1]))),
        (SweepFamily::Region, "sharp_s_div") => num(CknParams::regular(n, x[0], x[1]).and_then(|_| sharp_s_div(n, x[0], x[1]))),
        (SweepFamily::Region, "fs_beta") => num(Ok(felli_schneider_beta(n, x[0]))),
        (SweepFamily::Gamma, "sharp_s_gamma") => num(sharp_s_gamma(n, x[0])),
        (SweepFamily::Gamma, "sobolev_exponent") => num(sobolev_exponent(n, x[0])),
        (SweepFamily::Gamma, "hardy_const") => num(hardy_const(n, x[0])),
        (SweepFamily::Gamma, "hardy_rellich_const") => num(hardy_rellich_const(n, x[0])),
        (SweepFamily::Gamma, "combined_const") => num(combined_const(n, x[0])),
        (SweepFamily::Singular, c) => {
            let (a, b) = (x[0], x[1]);
            if CknParams::singular(n, a, b).is_err() {
                return Cell::Invalid;
            }
            let bb = 2.0 * a - b - 4.0;
            match c {
                "sharp_s_singular" => num(sharp_s_singular(n, a, b)),
                "bar_beta" => num(Ok(bb)),
                "sharp_s_div_dual" => num(sharp_s_div(n, a, bb)),
                "duality_residual" => num((|| Ok(sharp_s_singular(n, a, b)? - sharp_s_div(n, a, bb)?))()),
                _ => Cell::Invalid,
            }
        }
        (SweepFamily::WeakHr, "weak_hr_constant") => num(weak_hr_constant(n, x[0])),
        (SweepFamily::WeakHr, "middle_range") => {
            if weak_hr_constant(n, x[0]).is_err() {
                Cell::Invalid
            } else {
                Cell::Text(middle_range(n, x[0]).to_string())
            }
        }
        (SweepFamily::WeakHr, "argmin_k") => {
            if weak_hr_constant(n, x[0]).is_err() {
                Cell::Invalid
            } else if middle_range(n, x[0]) {
                Cell::Num(0.0)
            } else {
                Cell::Num(weighted_rellich_inf(n, x[0], 64.max((x[0].abs() + n as f64) as u32 + 2)).argmin_k as f64)
            }
        }
        _ => Cell::Invalid,
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let cols = spec.output_columns();
    let mut points: Vec<Vec<f64>> = vec![vec![]];
    for ax in &spec.axes {
        points = points.into_iter().flat_map(|p| ax.values().into_iter().map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    let rows = points
        .par_iter()
        .map(|x| {
            let mut row: Vec<Cell> = x.iter().map(|v| Cell::Num(*v)).collect();
            row.extend(cols.iter().map(|c| sweep_cell(spec.family, spec.n, x, c)));
            row
        })
        .collect();
    let mut header: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    header.extend(cols);
    Ok(SweepTable { header, rows })
}

fn need(p: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    p.get(key).copied().ok_or_else(|| Error::Config(format!("missing parameter --{key}")))
}

fn n_of(n: u32) -> f64 {
    n as f64
}

/// Named closed-form values for one family at one parameter point.
pub fn constants_table(family: &str, n: u32, p: &BTreeMap<String, f64>) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = vec![("N".into(), n_of(n))];
    match family {
        "ckn" => {
            let g = need(p, "gamma")?;
            out.push(("gamma".into(), g));
            out.push(("sobolev_exponent".into(), sobolev_exponent(n, g)?));
            out.push(("sharp_s_gamma".into(), sharp_s_gamma(n, g)?));
        }
        "div" => {
            let (a, b) = (need(p, "alpha")?, need(p, "beta")?);
            CknParams::regular(n, a, b)?;
            out.extend([("alpha".into(), a), ("beta".into(), b)]);
            out.push(("ckn_exponent".into(), ckn_exponent(n, a, b)?));
            out.push(("sharp_s_div".into(), sharp_s_div(n, a, b)?));
            out.push(("region".into(), Region::code(region_classify(n, a, b))));
        }
        "singular" => {
            let (a, b) = (need(p, "alpha")?, need(p, "beta")?);
            CknParams::singular(n, a, b)?;
            out.extend([("alpha".into(), a), ("beta".into(), b)]);
            out.push(("bar_beta".into(), 2.0 * a - b - 4.0));
            out.push(("sharp_s_singular".into(), sharp_s_singular(n, a, b)?));
        }
        "rs" => {
            let par = RsParams::new(n, need(p, "gamma")?, need(p, "mu")?)?;
            let (c1, c2) = crate::constants::rs_coeffs(&par);
            out.extend([("gamma".into(), par.gamma), ("mu".into(), par.mu), ("C1".into(), c1), ("C2".into(), c2)]);
            out.push(("rs_sharp".into(), rs_sharp(&par)?));
        }
        "weakhr" => {
            let a = need(p, "a")?;
            out.push(("a".into(), a));
            out.push(("weak_hr_constant".into(), weak_hr_constant(n, a)?));
            out.push(("middle_range".into(), if middle_range(n, a) { 1.0 } else { 0.0 }));
        }
        "rellich" => {
            let a = need(p, "a")?;
            let inf = weighted_rellich_inf(n, a, 64.max((a.abs() + n as f64) as u32 + 2));
            out.extend([("a".into(), a), ("weighted_rellich_inf".into(), inf.value), ("argmin_k".into(), inf.argmin_k as f64)]);
        }
        "hls" => {
            let lambda = p.get("lambda").copied().unwrap_or(n as f64 - 2.0);
            let (c1, c2) = crate::constants::hls_constants(n, lambda)?;
            out.extend([("lambda".into(), lambda), ("C1".into(), c1)]);
            if let Some(c2) = c2 {
                out.push(("C2".into(), c2));
            }
        }
        _ => return Err(Error::Config(format!("unknown family '{family}'"))),
    }
    Ok(out)
}

use crate::constants::Region;

impl Region {
    /// Numeric code for tables: 0 proved, 1 breaking, 2 conjectured, 3 boundary, -1 invalid.
    pub fn code(self) -> f64 {
        match self {
            Region::SymmetryProved => 0.0,
            Region::SymmetryBreaking => 1.0,
            Region::ConjectureSymmetry => 2.0,
            Region::Boundary => 3.0,
            Region::Invalid => -1.0,
        }
    }
}

/// Rayleigh quotient of a named profile against the family's sharp constant.
pub fn rayleigh_case(family: &str, profile: &str, n: u32, p: &BTreeMap<String, f64>) -> Result<Case> {
    let mut params: Vec<(&str, f64)> = vec![("N", n as f64)];
    params.extend(p.iter().map(|(k, v)| (k.as_str(), *v)));
    let bump_of = || RadialProfile::gauss_bump(p.get("center").copied().unwrap_or(1.0), p.get("width").copied().unwrap_or(0.5));
    let t = Tolerances::default();
    match family {
        "ckn" => {
            let g = need(p, "gamma")?;
            let u = match profile {
                "extremal" => RadialProfile::ckn_normalized(n, g)?,
                "bump" => bump_of()?,
                _ => return Err(Error::Config(format!("unknown profile '{profile}'"))),
            };
            Ok(Case::compare("ckn_quotient", &params, q_ckn(&u, n, g)?, sharp_s_gamma(n, g)?, t.extremal))
        }
        "div" => {
            let (a, b) = (need(p, "alpha")?, need(p, "beta")?);
            let u = match profile {
                "extremal" => RadialProfile::div_extremal(1.0, 1.0, n, a, b)?,
                "bump" => bump_of()?,
                _ => return Err(Error::Config(format!("unknown profile '{profile}'"))),
            };
            Ok(Case::compare("div_quotient", &params, q_div(&u, n, a, b)?, sharp_s_div(n, a, b)?, t.extremal))
        }
        "singular" => {
            let (a, b) = (need(p, "alpha")?, need(p, "beta")?);
            let u = match profile {
                "extremal" => RadialProfile::singular_extremal(1.0, n, a, b)?,
                "bump" => bump_of()?.times_power(2.0 + b - a),
                _ => return Err(Error::Config(format!("unknown profile '{profile}'"))),
            };
            Ok(Case::compare("singular_quotient", &params, q_singular(&u, n, a, b)?, sharp_s_singular(n, a, b)?, t.extremal))
        }
        "rs" => {
            let par = RsParams::new(n, need(p, "gamma")?, need(p, "mu")?)?;
            let u = match profile {
                "extremal" => RadialProfile::rs_extremal(1.0, 1.0, n, par.gamma, par.mu)?,
                "bump" => bump_of()?,
                _ => return Err(Error::Config(format!("unknown profile '{profile}'"))),
            };
            Ok(Case::compare("rs_quotient", &params, rs_quotient(&u, &par)?, rs_sharp(&par)?, t.extremal))
        }
        "weakhr" => {
            let a = need(p, "a")?;
            let k = p.get("k").copied().unwrap_or(0.0) as u32;
            let eps = p.get("eps").copied().unwrap_or(0.01);
            let f = match profile {
                "powercut" => RadialProfile::power_cut(n, a, eps)?,
                "tail" => RadialProfile::tail_integral(eps)?,
                "bump" => bump_of()?.times_power(k as f64),
                _ => return Err(Error::Config(format!("unknown profile '{profile}'"))),
            };
            let v = weak_hr_ratio(&ModeFunction::new(k, f)?, n, a)?;
            Ok(Case::compare("weak_hr_ratio", &params, v, weak_hr_constant(n, a)?, t.spectral))
        }
        _ => Err(Error::Config(format!("unknown family '{family}'"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralRow {
    pub k: u32,
    pub min_ratio: f64,
    pub mode_constant: f64,
    pub converged: bool,
    pub eigen_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub family: String,
    pub n: u32,
    pub a: f64,
    pub rows: Vec<SpectralRow>,
    pub argmin_k: u32,
    pub minimum: f64,
    pub constant: f64,
    pub rel_err: f64,
}

/// Per-mode discrete minima for `weakhr` or `rellich` against the closed forms.
pub fn spectral_summary(family: &str, n: u32, a: f64, k_max: u32, grid: &Grid1D) -> Result<SpectralSummary> {
    let (scan, consts, constant) = match family {
        "weakhr" => {
            let c = (0..=k_max).map(|k| rho_k(n, a, k)).collect::<Result<Vec<_>>>()?;
            (weak_hr_mode_scan(n, a, k_max, grid)?, c, weak_hr_constant(n, a)?)
        }
        "rellich" => {
            let c = (0..=k_max).map(|k| crate::constants::rellich_mode_const(n, a, k)).collect();
            (rellich_mode_scan(n, a, k_max, grid)?, c, weighted_rellich_inf(n, a, 64.max(k_max)).value)
        }
        _ => return Err(Error::Config(format!("unknown spectral family '{family}'"))),
    };
    let (argmin_k, minimum) = scan_minimum(&scan).ok_or_else(|| Error::Numerical("empty scan".into()))?;
    let rows = scan
        .iter()
        .zip(consts)
        .map(|(m, c)| SpectralRow { k: m.k, min_ratio: m.min_ratio, mode_constant: c, converged: m.converged, eigen_residual: m.eigen_residual })
        .collect();
    let scale = if constant == 0.0 { 1.0 } else { constant.abs() };
    Ok(SpectralSummary {
        family: family.to_string(),
        n,
        a,
        rows,
        argmin_k,
        minimum,
        constant,
        rel_err: (minimum - constant).abs() / scale,
    })
}

/// Stein-Weiss checks for one configuration: the HLS value when `b = 0`,
/// otherwise seeded stationarity of the extremal pair.
pub fn steinweiss_report(case: SwCase, n: u32, b: f64, tol: Option<f64>, seed: u64) -> Result<VerificationReport> {
    let started = now();
    let t = Tolerances::default();
    let p = SwParams::new(n, b, case)?;
    let mut cases = vec![Case::compare("sw_exponent_balance", &[("N", n as f64), ("b", b)], p.balance_residual(), 0.0, t.closed_form)];
    if b == 0.0 && case == SwCase::Diagonal {
        cases.push(sw_hls_case(n, tol.unwrap_or(t.hls)));
    }
    if b > 0.0 {
        cases.extend(sw_stationarity_cases(p, seed, 10, tol.unwrap_or(t.stationarity)));
    }
    Ok(VerificationReport::new("steinweiss", seed, cases, vec![], started))
}

/// Random nonzero shift of a bump for property checks.
pub fn random_bump_profile(rng: &mut ChaCha8Rng, k: u32) -> Result<RadialProfile> {
    let (c, w) = random_bump(rng);
    bump(c, w, k)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("SteinWeiss".parse::<Suite>().unwrap(), Suite::SteinWeiss);
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Config(_))));
    }

    #[test]
    fn case_pass_iff_within_tolerance() {
        let c = Case::compare("x", &[], 1.0 + 1e-9, 1.0, 1e-8);
        assert!(c.pass && c.rel_err <= c.tolerance);
        let c = Case::compare("x", &[], 1e-3, 0.0, 1e-4);
        assert!(!c.pass);
        assert!(Case::at_least("x", &[], 2.0, 1.0).pass);
        assert!(!Case::at_least("x", &[], 0.5, 1.0).pass);
        assert!(!Case::exceeds("x", &[], 0.0, 0.0).pass);
        let f = Case::failed("x", &[], 1.0, 1.0, &Error::Domain("d".into()));
        assert!(!f.pass);
    }

    #[test]
    fn report_round_trip_and_determinism() {
        let cfg = Config { draws: 2, ..Config::default() };
        let a = run_suite(Suite::Identities, &cfg).unwrap();
        let b = run_suite(Suite::Identities, &cfg).unwrap();
        assert_eq!(a.body_json().unwrap(), b.body_json().unwrap());
        let s = a.to_json().unwrap();
        let back = VerificationReport::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        assert!(a.all_pass(), "{:?}", a.failures().collect::<Vec<_>>());
    }

    #[test]
    fn vacuous_identities() {
        let cfg = Config { draws: 0, ..Config::default() };
        let r = run_suite(Suite::Identities, &cfg).unwrap();
        assert_eq!(r.summary.total, 0);
        assert!(r.all_pass());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn config_toml() {
        let c = Config::from_toml_str("seed = 7\n[tolerances]\nspectral = 0.02\n[grids]\nspectral_n = 1000\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.tolerances.spectral, 0.02);
        assert_eq!(c.tolerances.quadrature, 1e-8);
        assert!(Config::from_toml_str("[grids]\neps = [0.1, 0.2]\n").is_err());
        assert!(Config::from_toml_str("bogus = 1\n").is_err());
    }

    #[test]
    fn region_sweep_matches_classifier() {
        let spec = SweepSpec::from_toml_str(
            "family = \"region\"\nN = 6\n[[axes]]\nname = \"alpha\"\nmin = -3.0\nmax = 2.0\nsteps = 11\n[[axes]]\nname = \"beta\"\nmin = -5.0\nmax = 3.0\nsteps = 9\n",
        )
        .unwrap();
        let t = sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 99);
        for r in &t.rows {
            let (Cell::Num(a), Cell::Num(b)) = (&r[0], &r[1]) else { panic!() };
            assert_eq!(r[2].to_string(), region_classify(6, *a, *b).as_str());
        }
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("alpha,beta,region,ckn_exponent,sharp_s_div,fs_beta\n"));
        assert!(!csv.contains("NaN") && !csv.contains("inf"));
    }

    #[test]
    fn gamma_sweep_is_continuous() {
        let spec = SweepSpec {
            family: SweepFamily::Gamma,
            n: 5,
            axes: vec![Axis { name: "gamma".into(), min: -1.9, max: 0.0, steps: 191 }],
            outputs: vec!["sharp_s_gamma".into()],
        };
        let t = sweep(&spec).unwrap();
        let v: Vec<f64> = t.column("sharp_s_gamma").unwrap().iter().map(|c| match c { Cell::Num(x) => *x, _ => panic!() }).collect();
        let jumps: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect();
        assert!(jumps.iter().all(|j| j.abs() < 5e-2));
        let kink = jumps.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        assert!(kink < 1e-3, "{kink}");
    }

    #[test]
    fn singular_sweep_duality_column() {
        let spec = SweepSpec {
            family: SweepFamily::Singular,
            n: 6,
            axes: vec![
                Axis { name: "alpha".into(), min: -2.0, max: -0.5, steps: 4 },
                Axis { name: "beta".into(), min: -6.0, max: -2.5, steps: 8 },
            ],
            outputs: vec![],
        };
        let t = sweep(&spec).unwrap();
        let mut valid = 0;
        for c in t.column("duality_residual").unwrap() {
            match c {
                Cell::Num(v) => {
                    assert_eq!(*v, 0.0);
                    valid += 1;
                }
                Cell::Invalid => {}
                Cell::Text(_) => panic!(),
            }
        }
        assert!(valid > 0);
    }

    #[test]
    fn convergence_tables() {
        let t = convergence_study(SequenceFamily::TailIntegral, RatioKind::WeakHR, 6, 1.0, 0, &[0.1, 0.03, 0.01, 0.003]).unwrap();
        assert_eq!(t.target, 16.0);
        assert!(t.fitted_order > 0.9);
        assert!((t.limit - 16.0).abs() < 0.01);
        assert!(convergence_study(SequenceFamily::TailIntegral, RatioKind::WeakHR, 6, 0.0, 0, &[0.1, 0.01]).is_err());
        assert!(convergence_study(SequenceFamily::PowerCut, RatioKind::WeakHR, 6, 0.0, 0, &[0.01, 0.1]).is_err());
        let r = convergence_study(SequenceFamily::PowerCut, RatioKind::Rellich1D, 7, 0.0, 0, &[0.1, 0.03, 0.01, 0.003]).unwrap();
        assert!((r.limit / r.target - 1.0).abs() < 1e-2, "{r:?}");
        assert!(r.to_csv().unwrap().lines().count() == 5);
    }

    #[test]
    fn fitted_order_of_power_law() {
        let x = [0.1, 0.03, 0.01];
        let y: Vec<f64> = x.iter().map(|e: &f64| 3.0 * e.powf(1.5)).collect();
        assert!((fitted_order(&x, &y) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn constants_and_rayleigh_helpers() {
        let mut p = BTreeMap::new();
        p.insert("gamma".to_string(), -1.0);
        let t = constants_table("ckn", 6, &p).unwrap();
        assert!(t.iter().any(|(k, _)| k == "sharp_s_gamma"));
        let c = rayleigh_case("ckn", "extremal", 6, &p).unwrap();
        assert!(c.pass, "{c:?}");
        let b = rayleigh_case("ckn", "bump", 6, &p).unwrap();
        assert!(b.value > b.reference);
        assert!(constants_table("nope", 6, &p).is_err());
    }
}
