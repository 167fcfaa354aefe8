use sharpineq::constants::{a3k, RsParams};
use sharpineq::functionals::{mode_ckn_forms, mode_ckn_gap, shri_breakdown};
use sharpineq::profiles::{ModeFunction, RadialProfile};

pub fn run_example() -> sharpineq::Result<()> {
    let p = RsParams::new(7, -1.0, 1.0)?;
    println!("{:>3} {:>16}", "k", "A3k");
    for k in [1u32, 2, 3, 5, 10, 30, 64] {
        println!("{k:>3} {:>16.6}", a3k(&p, k));
    }

    let mut lo = f64::INFINITY;
    for n in 5u32..=10 {
        for g in [-1.9, -1.5, -1.0, -0.5, 0.0] {
            for j in 1..=10 {
                let mu = g + (n as f64 - 4.0 - g) * j as f64 / 11.0;
                let p = RsParams::new(n, g, mu)?;
                lo = lo.min((1..=64).map(|k| a3k(&p, k)).fold(f64::INFINITY, f64::min));
            }
        }
    }
    println!("smallest A3k over the grid: {lo:.4e}");

    let m = ModeFunction::new(1, RadialProfile::gauss_bump(1.0, 0.5)?.times_power(1.0))?;
    let (lhs, rhs) = mode_ckn_forms(&m, &p)?;
    println!("mode 1 forms: lhs {lhs:.8e}  rhs {rhs:.8e}  gap {:.8e}  closed form {:.8e}", rhs - lhs, mode_ckn_gap(&m, &p)?);

    let b = shri_breakdown(&RadialProfile::gauss_bump(2.0, 0.4)?, 6, -1.0)?;
    println!("strict gap {:.6e} of leading term {:.6e}", b.total, b.get("bilaplacian_term").unwrap_or(f64::NAN));
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
