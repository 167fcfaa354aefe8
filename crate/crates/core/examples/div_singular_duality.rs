//! Div-form extremals in the regular range, and the singular range
//! reached through the Kelvin-type equivalence.

use sharpineq::constants::{ckn_exponent, sharp_s_div, sharp_s_singular, CknParams};
use sharpineq::functionals::{q_div, q_singular};
use sharpineq::profiles::RadialProfile;
use sharpineq::transforms::{kelvin_check, TransformRecord};

pub fn run_example() -> sharpineq::Result<()> {
    for (n, alpha, beta) in [(5u32, -1.0, -2.5), (6, -1.5, -2.8), (8, -0.5, -1.0)] {
        CknParams::regular(n, alpha, beta)?;
        let u = RadialProfile::div_extremal(1.0, 1.0, n, alpha, beta)?;
        let q = q_div(&u, n, alpha, beta)?;
        let s = sharp_s_div(n, alpha, beta)?;
        println!("div  N={n} a={alpha:>5} b={beta:>5}  p={:.5}  Q={q:.12}  rel={:.1e}", ckn_exponent(n, alpha, beta)?, (q / s - 1.0).abs());
    }

    let (n, alpha, beta) = (6u32, -1.0, -4.0);
    CknParams::singular(n, alpha, beta)?;
    let u = RadialProfile::singular_extremal(1.0, n, alpha, beta)?;
    let q = q_singular(&u, n, alpha, beta)?;
    let s = sharp_s_singular(n, alpha, beta)?;
    let bar = 2.0 * alpha - beta - 4.0;
    println!("\nsingular N={n} a={alpha} b={beta}: Q={q:.12} S={s:.12}");
    println!("dual div constant at bar_beta={bar}: {:.12}", sharp_s_div(n, alpha, bar)?);

    let k = TransformRecord::kelvin(n, alpha, beta)?;
    println!("kelvin record: {:?}", k.derived);
    let probe = RadialProfile::gauss_bump(1.5, 0.8)?.times_power(2.0 + beta - alpha);
    let (e1, e2) = kelvin_check(&probe, n, alpha, beta)?;
    println!("norm identity {e1:.1e}, energy identity {e2:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
