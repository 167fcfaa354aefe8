//! Stein-Weiss double integrals: the HLS value on the diagonal and
//! stationarity of the extremal pair for b > 0.

use sharpineq::constants::{hls_c1, SwCase, SwParams};
use sharpineq::functionals::{sw_quotient, sw_stationarity, Perturb};
use sharpineq::profiles::RadialProfile;

pub fn run_example() -> sharpineq::Result<()> {
    for n in [3u32, 5, 6] {
        let p = SwParams::diagonal(n, 0.0)?;
        let f = RadialProfile::sw_f(1.0, 1.0, n, 0.0, SwCase::Diagonal)?;
        println!("N={n}: quotient {:.12}  C1 {:.12}", sw_quotient(&f, &f, &p)?, hls_c1(n, n as f64 - 2.0)?);
    }

    for (n, b, case) in [(5u32, 0.3, SwCase::TSquared), (6, 0.7, SwCase::Diagonal)] {
        let p = SwParams::new(n, b, case)?;
        let f = RadialProfile::sw_f(1.0, 1.0, n, b, case)?;
        let g = RadialProfile::sw_g(1.0, 1.0, n, b, case)?;
        println!("\n{case:?} N={n} b={b}: a={:.5} r={:.5} t={:.5}", p.a, p.r, p.t);
        for (c, w, which) in [(0.5, 0.4, Perturb::F), (2.0, 1.0, Perturb::G)] {
            let s = sw_stationarity(&f, &g, &p, &RadialProfile::gauss_bump(c, w)?, which, 1e-2)?;
            println!("  perturb {which:?} at {c}: quotient {:.10} slope/quotient {:.1e}", s.quotient, s.slope.abs() / s.quotient);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
