//! Weak Hardy-Rellich constants: closed forms against discrete
//! per-mode minima of the quotient.

use sharpineq::constants::{middle_range, rho_k, weak_hr_constant};
use sharpineq::spectral::{scan_minimum, weak_hr_mode_scan, Grid1D};

pub fn run_example() -> sharpineq::Result<()> {
    let grid = Grid1D::symmetric(40.0, 4000)?;
    for (n, a) in [(5u32, 0.0), (5, 0.25), (5, -4.0)] {
        let c = weak_hr_constant(n, a)?;
        let scan = weak_hr_mode_scan(n, a, 4, &grid)?;
        println!("N={n} a={a} middle={} constant={c:.6}", middle_range(n, a));
        for m in &scan {
            println!("  k={} min={:.6} power-cut limit={:.6} converged={}", m.k, m.min_ratio, rho_k(n, a, m.k)?, m.converged);
        }
        if let Some((k, v)) = scan_minimum(&scan) {
            println!("  overall k={k} {v:.6}  rel {:.2e}", (v / c - 1.0).abs());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
