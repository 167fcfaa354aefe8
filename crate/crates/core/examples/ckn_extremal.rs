//! The CKN bubble attains the sharp constant and solves the
//! weighted fourth-order Euler-Lagrange equation.

use sharpineq::constants::sharp_s_gamma;
use sharpineq::functionals::q_ckn;
use sharpineq::profiles::{weighted_bilaplacian, RadialProfile};

pub fn run_example() -> sharpineq::Result<()> {
    let (n, gamma) = (6u32, -1.0);
    let u = RadialProfile::ckn_normalized(n, gamma)?;
    let q = q_ckn(&u, n, gamma)?;
    let s = sharp_s_gamma(n, gamma)?;
    println!("Q(U) = {q:.14}\nS    = {s:.14}\nrel  = {:.2e}", (q / s - 1.0).abs());

    // any dilation is also optimal
    let v = RadialProfile::ckn_extremal(2.5, 3.0, n, gamma)?;
    println!("Q(2.5 U_3) rel = {:.2e}", (q_ckn(&v, n, gamma)? / s - 1.0).abs());

    let bump = RadialProfile::gauss_bump(1.0, 0.5)?;
    println!("Q(bump) / S = {:.6}", q_ckn(&bump, n, gamma)? / s);

    let op = weighted_bilaplacian(&u, n, gamma);
    let e = (n as f64 + 4.0 + 3.0 * gamma) / (n as f64 - 4.0 - gamma);
    println!("\n{:>8} {:>22} {:>10}", "r", "lhs", "residual");
    for r in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let lhs = op(r)?;
        let rhs = r.powf(gamma) * u.value(r).powf(e);
        println!("{r:>8} {lhs:>22.14e} {:>10.2e}", (lhs - rhs).abs() / rhs);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
