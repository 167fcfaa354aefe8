use sharpineq::constants::{rs_coeffs, rs_coeffs_generic, rs_coeffs_unweighted, rs_sharp, RsParams};
use sharpineq::functionals::{rs_lhs, rs_quotient};
use sharpineq::profiles::RadialProfile;
use sharpineq::transforms::{power_cv_check, TransformRecord};

use num_bigint::BigInt;
use num_rational::BigRational;

pub fn run_example() -> sharpineq::Result<()> {
    let p = RsParams::new(7, -1.0, 1.5)?;
    let (c1, c2) = rs_coeffs(&p);
    println!("C1 = {c1:.10}  C2 = {c2:.10}");

    let u = RadialProfile::rs_extremal(1.0, 1.0, p.n, p.gamma, p.mu)?;
    let b = rs_lhs(&u, &p)?;
    for (name, v) in &b.components {
        println!("  {name:<16} {v:.10e}");
    }
    let q = rs_quotient(&u, &p)?;
    println!("quotient {q:.12}  sharp {:.12}", rs_sharp(&p)?);

    let rec = TransformRecord::power_cv(&p);
    println!("zeta = {:.6}, vartheta = {:.6}", p.zeta(), p.vartheta());
    println!("relation residual {:.1e}", rec.relation_residual);
    println!("power change of variable defect {:.1e}", power_cv_check(&RadialProfile::gauss_bump(1.2, 0.7)?, &p)?);

    // at gamma = 0 the coefficients are the unweighted ones, exactly
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let g = rs_coeffs_generic(r(7, 1), r(0, 1), r(3, 2));
    let w = rs_coeffs_unweighted(r(7, 1), r(3, 2));
    println!("gamma=0: C1 = {}, C2 = {}, equal = {}", g.0, g.1, g == w);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
