//! Closed-form sharp constants across the weighted families.

use sharpineq::constants::{
    combined_const, hardy_const, hardy_rellich_const, hls_c1, rs_sharp, sharp_s_div, sharp_s_gamma, sharp_s_singular,
    sobolev_exponent, weak_hr_constant, RsParams,
};

pub fn run_example() -> sharpineq::Result<()> {
    println!("{:>2} {:>6} {:>10} {:>14} {:>12} {:>12} {:>12}", "N", "gamma", "p*", "S_N,gamma", "hardy", "hardy-rel", "combined");
    for n in [5u32, 6, 7, 9] {
        for gamma in [-1.5, -1.0, -0.5, 0.0] {
            println!(
                "{n:>2} {gamma:>6.2} {:>10.6} {:>14.8} {:>12.6} {:>12.6} {:>12.6}",
                sobolev_exponent(n, gamma)?,
                sharp_s_gamma(n, gamma)?,
                hardy_const(n, gamma)?,
                hardy_rellich_const(n, gamma)?,
                combined_const(n, gamma)?
            );
        }
    }

    // div-form constant and its singular dual at bar_beta = 2 alpha - beta - 4
    let (n, alpha, beta) = (6, -1.0, -4.0);
    let s = sharp_s_singular(n, alpha, beta)?;
    let d = sharp_s_div(n, alpha, 2.0 * alpha - beta - 4.0)?;
    println!("\nsingular({n}, {alpha}, {beta}) = {s:.15}\ndiv dual          = {d:.15}");

    let p = RsParams::new(7, -1.0, 1.0)?;
    println!("rs_sharp(7, -1, 1) = {:.12}", rs_sharp(&p)?);

    for n in 3..=8 {
        print!("weak HR N={n}: {} ", weak_hr_constant(n, 0.0)?);
    }
    println!("\nHLS C1(5, 3) = {:.12}", hls_c1(5, 3.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
