//! Integration-by-parts identities on random smooth profiles, and the
//! rational identities checked exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpineq::functionals::div_expansion_check;
use sharpineq::profiles::{ModeFunction, RadialProfile};
use sharpineq::transforms::{identity_lemtle, identity_psny, identity_vecgm};

pub fn run_example() -> sharpineq::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = RadialProfile::gauss_bump(rng.random_range(0.2..5.0), rng.random_range(0.3..2.0))?;
        let b = [0; 4].map(|_| rng.random_range(-3.0..3.0));
        worst = worst.max(identity_lemtle(&f, 6, 0.5, b)?);
    }
    println!("squared-operator expansion, worst of 10: {worst:.1e}");

    let m = ModeFunction::new(2, RadialProfile::gauss_bump(1.0, 0.6)?.times_power(2.0))?;
    for (i, c) in identity_psny(&m, 7, -0.8)?.iter().enumerate() {
        println!("mode identity {}: lhs {:+.6e}  residual {:.1e}", i + 1, c.lhs, c.residual);
    }
    let c = div_expansion_check(&m, 7, -1.0, -2.0)?;
    println!("div-form mode expansion residual {:.1e}", c.residual);

    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let v = identity_vecgm(&q(7, 1), &q(-3, 4), &q(-5, 3))?;
    println!("rational identity: {} = {}, {} = {}", v.lhs1, v.rhs1, v.lhs2, v.rhs2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
