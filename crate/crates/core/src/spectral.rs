//! Discrete minimal Rayleigh ratios of the mode-wise quadratic forms.
//!
//! With `s = ln r` and `phi(s) = f(e^s)`, every form handled here is a
//! homogeneous sum `int (E phi)^2 e^{q s} ds` with `E` an Euler operator in
//! `r^i d^i/dr^i`. The nodal unknowns are stored as `psi = e^{q s / 2} phi`
//! (a diagonal rescaling of the `phi` values), which turns the forms into
//! constant-coefficient ones and keeps the matrices well scaled. Derivatives
//! use 5-point 4th-order central differences, values outside the clamped
//! window are zero, and the quadrature is the uniform trapezoid rule on the
//! padded window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{c_k, combined_const, rs_coeffs, RsParams};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        if !(s_min < s_max) || !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::Config(format!("grid window [{s_min}, {s_max}] is empty")));
        }
        if n < 16 {
            return Err(Error::Config(format!("grid needs at least 16 nodes, got {n}")));
        }
        Ok(Grid1D { s_min, s_max, n, h: (s_max - s_min) / (n - 1) as f64 })
    }

    /// Symmetric window `[-half, half]`.
    pub fn symmetric(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, n)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.s_min + self.h * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Number of free nodes once two nodes at each end are clamped.
    pub fn unknowns(&self) -> usize {
        self.n - 4
    }

    /// Same spacing and center, about `frac` of the width.
    pub fn sub_window(&self, frac: f64) -> Result<Self> {
        let half_steps = (((self.n - 1) as f64 * frac) / 2.0).round() as usize;
        let mid = (self.s_min + self.s_max) / 2.0;
        let w = half_steps as f64 * self.h;
        let g = Grid1D { s_min: mid - w, s_max: mid + w, n: 2 * half_steps + 1, h: self.h };
        if g.n < 16 {
            return Err(Error::Config(format!("sub-window of {} nodes is too small", g.n)));
        }
        Ok(g)
    }

    /// Same spacing, window widened by `factor` around the center.
    pub fn widened(&self, factor: f64) -> Result<Self> {
        let half_steps = (((self.n - 1) as f64 * factor) / 2.0).round() as usize;
        let mid = (self.s_min + self.s_max) / 2.0;
        let w = half_steps as f64 * self.h;
        Ok(Grid1D { s_min: mid - w, s_max: mid + w, n: 2 * half_steps + 1, h: self.h })
    }
}

impl Default for Grid1D {
    fn default() -> Self {
        Grid1D::symmetric(12.0, 2000).expect("default grid")
    }
}

/// Symmetric banded matrix, lower band stored row-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    // data[i * (bw + 1) + d] = M[i][i - d]
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandedSym { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            return 0.0;
        }
        self.data[i * (self.bw + 1) + (i - j)]
    }

    fn add_lower(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.bw + 1) + (i - j)] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let j = i - d;
                y[i] += row[d] * x[j];
                y[j] += row[d] * x[i];
            }
        }
        y
    }

    pub fn norm_inf(&self) -> f64 {
        let ones = vec![1.0; self.n];
        let abs = BandedSym { n: self.n, bw: self.bw, data: self.data.iter().map(|v| v.abs()).collect() };
        abs.matvec(&ones).into_iter().fold(0.0, f64::max)
    }

    pub fn quadratic(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    /// `self + c * other`
    pub fn axpy(&self, c: f64, other: &BandedSym) -> BandedSym {
        assert_eq!((self.n, self.bw), (other.n, other.bw));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + c * b).collect();
        BandedSym { n: self.n, bw: self.bw, data }
    }

    /// Banded Cholesky factor, `None` if the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<BandedCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut s = self.data[i * w + (i - j)];
                for k in lo.max(j.saturating_sub(bw))..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return None;
                    }
                    l[i * w] = s.sqrt();
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Some(BandedCholesky { n, bw, l })
    }
}

pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let w = self.bw + 1;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for d in 1..=self.bw.min(i) {
                s -= self.l[i * w + d] * y[i - d];
            }
            y[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for d in 1..=self.bw.min(self.n - 1 - i) {
                s -= self.l[(i + d) * w + d] * y[i + d];
            }
            y[i] = s / self.l[i * w];
        }
        y
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FormFamily {
    /// `int (Delta_k f)^2 r^{N-1-2a}` rearranged against `int f'^2 r^{N-3-2a}`
    WeakHR { n: u32, a: f64 },
    /// `int (Delta_k f)^2 r^{N-1-2a} / int f^2 r^{N-5-2a}`
    WeightedRellich { n: u32, a: f64 },
    /// `int (Delta_k f)^2 r^{N-1-g} / int |grad_k f|^2 r^{N-3-g}`
    HardyRellichRatio { n: u32, gamma: f64 },
    /// `(int (Delta_k f)^2 + K^4 int f^2 r^{-4}) / int |grad_k f|^2 r^{-2}`, weight `r^{N-1-g}`
    ShriGap { n: u32, gamma: f64 },
    /// Right side over left side of the mode-wise Rellich-Sobolev reduction.
    ModeCkn { params: RsParams },
}

/// `coef * int (v0 u + v1 r u' + v2 r^2 u'')^2 e^{weight s} ds` with `u = r^theta f`.
#[derive(Clone, Copy, Debug)]
struct Term {
    coef: f64,
    v: [f64; 3],
    theta: f64,
    weight: f64,
}

impl Term {
    /// `int (f'' + b1 f'/r + b2 f/r^2)^2 r^p dr`
    fn squared(coef: f64, b1: f64, b2: f64, p: f64, theta: f64) -> Self {
        Term { coef, v: [b2, b1, 1.0], theta, weight: p - 3.0 }
    }

    /// `int f'^2 r^p dr`
    fn gradient(coef: f64, p: f64, theta: f64) -> Self {
        Term { coef, v: [0.0, 1.0, 0.0], theta, weight: p - 1.0 }
    }

    /// `int f^2 r^p dr`
    fn l2(coef: f64, p: f64, theta: f64) -> Self {
        Term { coef, v: [1.0, 0.0, 0.0], theta, weight: p + 1.0 }
    }

    fn degree(&self) -> f64 {
        self.weight + 2.0 * self.theta
    }

    /// Coefficients on `(psi, psi', psi'')` where `phi_u = e^{-c s} psi`.
    fn psi_coeffs(&self, kappa: f64) -> [f64; 3] {
        let c = kappa - self.theta;
        let [v0, v1, v2] = self.v;
        [v0 - c * (v1 - v2) + c * c * v2, (v1 - v2) - 2.0 * c * v2, v2]
    }
}

fn family_terms(family: &FormFamily, k: u32) -> Result<(Vec<Term>, Vec<Term>)> {
    match *family {
        FormFamily::WeakHR { n, a } => {
            let nf = n as f64;
            if !(a < (nf - 2.0) / 2.0) {
                return Err(Error::Config(format!("weak Hardy-Rellich needs a < (N-2)/2, got a={a}")));
            }
            let ck = c_k(n, k);
            let w = nf - 1.0 - 2.0 * a;
            let cf = ck * (ck + 2.0 * (1.0 + a) * (nf - 4.0 - 2.0 * a));
            let num = vec![
                Term::squared(1.0, 0.0, 0.0, w, 0.0),
                Term::gradient((1.0 + 2.0 * a) * (nf - 1.0) + 2.0 * ck, w - 2.0, 0.0),
                Term::l2(cf, w - 4.0, 0.0),
            ];
            Ok((num, vec![Term::gradient(1.0, w - 2.0, 0.0)]))
        }
        FormFamily::WeightedRellich { n, a } => {
            let nf = n as f64;
            let ck = c_k(n, k);
            Ok((
                vec![Term::squared(1.0, nf - 1.0, -ck, nf - 1.0 - 2.0 * a, 0.0)],
                vec![Term::l2(1.0, nf - 5.0 - 2.0 * a, 0.0)],
            ))
        }
        FormFamily::HardyRellichRatio { n, gamma } => {
            let nf = n as f64;
            let ck = c_k(n, k);
            if !(nf - 4.0 - gamma > 0.0) {
                return Err(Error::Config(format!("N-4-gamma must be positive, got gamma={gamma}")));
            }
            Ok((
                vec![Term::squared(1.0, nf - 1.0, -ck, nf - 1.0 - gamma, 0.0)],
                vec![Term::gradient(1.0, nf - 3.0 - gamma, 0.0), Term::l2(ck, nf - 5.0 - gamma, 0.0)],
            ))
        }
        FormFamily::ShriGap { n, gamma } => {
            let nf = n as f64;
            let ck = c_k(n, k);
            combined_const(n, gamma).map_err(|e| Error::Config(e.to_string()))?;
            let kk = (nf - 4.0 - gamma) / 2.0;
            Ok((
                vec![
                    Term::squared(1.0, nf - 1.0, -ck, nf - 1.0 - gamma, 0.0),
                    Term::l2(kk.powi(4), nf - 5.0 - gamma, 0.0),
                ],
                vec![Term::gradient(1.0, nf - 3.0 - gamma, 0.0), Term::l2(ck, nf - 5.0 - gamma, 0.0)],
            ))
        }
        FormFamily::ModeCkn { params: p } => {
            let nf = p.nf();
            let (g, mu) = (p.gamma, p.mu);
            let ck = c_k(p.n, k);
            let zeta = p.zeta();
            let vt = p.vartheta();
            let (c1, c2) = rs_coeffs(&p);
            let b1 = nf - 1.0 - (nf - 2.0) * (mu - g) / (nf - 4.0 - g);
            let lhs = vec![Term::squared(1.0, b1, -zeta * zeta * ck, nf - 1.0 - mu, 0.0)];
            let rhs = vec![
                Term::squared(1.0, nf - 1.0, -ck, nf - 1.0 - g, vt),
                Term::gradient(-c1, nf - 3.0 - g, vt),
                Term::l2(-c1 * ck, nf - 5.0 - g, vt),
                Term::l2(c2, nf - 5.0 - g, vt),
            ];
            Ok((rhs, lhs))
        }
    }
}

const D1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const D2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

fn local_matrix(terms: &[Term], kappa: f64, h: f64) -> [[f64; 5]; 5] {
    let mut g = [[0.0; 3]; 3];
    for t in terms {
        if t.coef == 0.0 {
            continue;
        }
        let l = t.psi_coeffs(kappa);
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += t.coef * l[i] * l[j];
            }
        }
    }
    let mut s = [[0.0; 5]; 3];
    s[0][2] = 1.0;
    for p in 0..5 {
        s[1][p] = D1[p] / (12.0 * h);
        s[2][p] = D2[p] / (12.0 * h * h);
    }
    let mut k = [[0.0; 5]; 5];
    for p in 0..5 {
        for q in 0..5 {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    v += g[i][j] * s[i][p] * s[j][q];
                }
            }
            k[p][q] = h * v;
        }
    }
    // exact symmetry
    for p in 0..5 {
        for q in 0..p {
            let m = 0.5 * (k[p][q] + k[q][p]);
            k[p][q] = m;
            k[q][p] = m;
        }
    }
    k
}

fn assemble(terms: &[Term], kappa: f64, grid: &Grid1D) -> BandedSym {
    let k = local_matrix(terms, kappa, grid.h);
    let m = grid.unknowns();
    let mut a = BandedSym::zeros(m, 4);
    // node i of the grid touches unknowns i-4 .. i (unknown j is grid node j+2)
    for i in 0..grid.n {
        for p in 0..5 {
            let Some(jp) = (i + p).checked_sub(4).filter(|&j| j < m) else { continue };
            for q in 0..=p {
                let Some(jq) = (i + q).checked_sub(4).filter(|&j| j < m) else { continue };
                a.add_lower(jp, jq, k[p][q]);
            }
        }
    }
    a
}

/// Assembled pair with the exponential rescaling used for the unknowns.
#[derive(Clone, Debug)]
pub struct FormPair {
    pub a: BandedSym,
    pub b: BandedSym,
    /// Unknowns are `e^{kappa s} phi(s)` at the free nodes.
    pub kappa: f64,
    pub grid: Grid1D,
}

impl FormPair {
    /// Free-node unknowns from samples `phi(s_i)` on all grid nodes.
    pub fn unknowns_from_phi(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.grid.unknowns())
            .map(|j| {
                let s = self.grid.node(j + 2);
                (self.kappa * s).exp() * phi[j + 2]
            })
            .collect()
    }

    /// `(A(phi), B(phi))` for samples `phi(s_i) = f(e^{s_i})`.
    pub fn evaluate_phi(&self, phi: &[f64]) -> (f64, f64) {
        let x = self.unknowns_from_phi(phi);
        (self.a.quadratic(&x), self.b.quadratic(&x))
    }
}

pub fn assemble_forms(family: &FormFamily, k: u32, grid: &Grid1D) -> Result<FormPair> {
    let (num, den) = family_terms(family, k)?;
    let q = den.iter().chain(&num).find(|t| t.coef != 0.0).map(Term::degree).unwrap_or(0.0);
    for t in num.iter().chain(&den) {
        if t.coef != 0.0 && (t.degree() - q).abs() > 1e-9 * q.abs().max(1.0) {
            return Err(Error::Config("forms are not of a common homogeneity".into()));
        }
    }
    let kappa = q / 2.0;
    Ok(FormPair { a: assemble(&num, kappa, grid), b: assemble(&den, kappa, grid), kappa, grid: *grid })
}

#[derive(Clone, Debug)]
pub struct Eigen {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub shift: f64,
}

const MAX_SHIFT_RETRIES: usize = 64;
const EIGEN_RESIDUAL: f64 = 1e-10;

fn rayleigh(a: &BandedSym, b: &BandedSym, x: &[f64]) -> f64 {
    a.quadratic(x) / b.quadratic(x)
}

/// Normwise backward error `|A x - lam B x| / ((|A| + |lam| |B|) |x|)`, infinity norms.
fn eigen_residual(a: &BandedSym, b: &BandedSym, x: &[f64], lam: f64) -> f64 {
    let ax = a.matvec(x);
    let bx = b.matvec(x);
    let r = ax.iter().zip(&bx).map(|(p, q)| (p - lam * q).abs()).fold(0.0, f64::max);
    let xn = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    (r / ((a.norm_inf() + lam.abs() * b.norm_inf()) * xn)).max(0.0)
}

/// Smallest `lambda` with `A x = lambda B x`.
///
/// The bracket is kept by factoring `A - sigma B`: the factorization exists
/// exactly when `sigma` lies below the smallest eigenvalue. Inverse
/// iteration at the lower end of the bracket supplies Rayleigh quotients as
/// upper bounds.
pub fn min_ratio(a: &BandedSym, b: &BandedSym) -> Result<Eigen> {
    if a.dim() != b.dim() || a.dim() == 0 {
        return Err(Error::Config("form dimensions differ".into()));
    }
    if b.cholesky().is_none() {
        return Err(Error::Numerical("denominator form is not positive definite".into()));
    }
    let m = a.dim();
    let mut x: Vec<f64> = (0..m).map(|i| (std::f64::consts::PI * (i as f64 + 1.0) / (m as f64 + 1.0)).sin()).collect();
    let mut up = rayleigh(a, b, &x);
    let mut step = up.abs().max(1.0);
    let mut lo = up.min(0.0) - 1e-12;
    let mut factor = None;
    for retry in 0..=MAX_SHIFT_RETRIES {
        if let Some(f) = a.axpy(-lo, b).cholesky() {
            factor = Some(f);
            break;
        }
        if retry == MAX_SHIFT_RETRIES {
            return Err(Error::Numerical(format!(
                "factorization of A - sigma B broke down after {MAX_SHIFT_RETRIES} shift retries (last sigma={lo})"
            )));
        }
        lo -= step;
        step *= 2.0;
    }
    let mut factor = factor.expect("factor found");
    let mut hi_fail = f64::INFINITY;
    let inverse_step = |f: &BandedCholesky, x: &mut Vec<f64>| {
        let y = f.solve(&b.matvec(x));
        let s = b.quadratic(&y).sqrt();
        *x = y.into_iter().map(|v| v / s).collect();
    };
    for _ in 0..200 {
        inverse_step(&factor, &mut x);
        up = up.min(rayleigh(a, b, &x));
        let top = up.min(hi_fail);
        let scale = up.abs().max(lo.abs()).max(1e-12);
        if top - lo <= 1e-9 * scale {
            break;
        }
        let trial = lo + 0.5 * (top - lo);
        match a.axpy(-trial, b).cholesky() {
            Some(f) => {
                lo = trial;
                factor = f;
            }
            None => hi_fail = hi_fail.min(trial),
        }
    }
    let mut lam = rayleigh(a, b, &x);
    let mut res = eigen_residual(a, b, &x, lam);
    for _ in 0..100 {
        if res <= EIGEN_RESIDUAL {
            break;
        }
        inverse_step(&factor, &mut x);
        lam = rayleigh(a, b, &x);
        res = eigen_residual(a, b, &x, lam);
    }
    Ok(Eigen { value: lam, vector: x, residual: res, shift: lo })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeMinResult {
    pub k: u32,
    pub min_ratio: f64,
    pub grid: Grid1D,
    /// Minima on nested windows of the same spacing, quarter, half and full width.
    pub refinement_ratios: Vec<f64>,
    pub converged: bool,
    pub eigen_residual: f64,
    /// Fraction of `sum x_i^2` within 2 units of either end of the window.
    pub boundary_mass: f64,
}

impl ModeMinResult {
    /// Window-truncation error estimate from the last two nested windows,
    /// assuming an excess proportional to the inverse squared width.
    pub fn window_excess(&self) -> f64 {
        let r = &self.refinement_ratios;
        match r.len() {
            0 | 1 => f64::NAN,
            l => (r[l - 2] - r[l - 1]) / 3.0,
        }
    }
}

/// Relative (or, near zero, absolute) slack accepted for the window excess.
pub const WINDOW_TOL: f64 = 5e-3;

fn boundary_mass(x: &[f64], grid: &Grid1D) -> f64 {
    let total: f64 = x.iter().map(|v| v * v).sum();
    let edge = (2.0 / grid.h).ceil() as usize;
    let m = x.len();
    let near: f64 = x.iter().enumerate().filter(|(i, _)| *i < edge || *i + edge >= m).map(|(_, v)| v * v).sum();
    near / total
}

pub fn mode_minimum(family: &FormFamily, k: u32, grid: &Grid1D) -> Result<ModeMinResult> {
    let mut ratios = Vec::with_capacity(3);
    for frac in [0.25, 0.5] {
        let g = grid.sub_window(frac)?;
        let f = assemble_forms(family, k, &g)?;
        ratios.push(min_ratio(&f.a, &f.b)?.value);
    }
    let f = assemble_forms(family, k, grid)?;
    let e = min_ratio(&f.a, &f.b)?;
    ratios.push(e.value);
    let mut r = ModeMinResult {
        k,
        min_ratio: e.value,
        grid: *grid,
        refinement_ratios: ratios,
        converged: false,
        eigen_residual: e.residual,
        boundary_mass: boundary_mass(&e.vector, grid),
    };
    let monotone = r.refinement_ratios.windows(2).all(|w| w[1] <= w[0] + 1e-10 * w[0].abs().max(1.0));
    r.converged = monotone && r.window_excess() <= WINDOW_TOL * e.value.abs().max(1.0);
    Ok(r)
}

/// Widens the window at fixed spacing until the minimizer's boundary mass
/// drops below `1e-8` or the half-width reaches `max_half_width`.
pub fn adaptive_window(family: &FormFamily, k: u32, grid: &Grid1D, max_half_width: f64) -> Result<Grid1D> {
    let mut g = *grid;
    loop {
        let f = assemble_forms(family, k, &g)?;
        let e = min_ratio(&f.a, &f.b)?;
        if boundary_mass(&e.vector, &g) < 1e-8 || (g.s_max - g.s_min) / 2.0 >= max_half_width {
            return Ok(g);
        }
        let factor = (1.5f64).min(2.0 * max_half_width / (g.s_max - g.s_min));
        g = g.widened(factor)?;
    }
}

fn scan(family: FormFamily, k_max: u32, grid: &Grid1D) -> Result<Vec<ModeMinResult>> {
    (0..=k_max).into_par_iter().map(|k| mode_minimum(&family, k, grid)).collect()
}

pub fn weak_hr_mode_scan(n: u32, a: f64, k_max: u32, grid: &Grid1D) -> Result<Vec<ModeMinResult>> {
    scan(FormFamily::WeakHR { n, a }, k_max, grid)
}

pub fn rellich_mode_scan(n: u32, a: f64, k_max: u32, grid: &Grid1D) -> Result<Vec<ModeMinResult>> {
    scan(FormFamily::WeightedRellich { n, a }, k_max, grid)
}

/// `(argmin k, minimum)` over a scan.
pub fn scan_minimum(results: &[ModeMinResult]) -> Option<(u32, f64)> {
    results.iter().map(|r| (r.k, r.min_ratio)).min_by(|x, y| x.1.total_cmp(&y.1))
}
