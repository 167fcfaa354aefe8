use sharpineq::constants::{felli_schneider_beta, region_classify};
use sharpineq::harness::{sweep, Axis, SweepFamily, SweepSpec};

/// Character map of the (alpha, beta) plane at N = 6, beta increasing upward.
pub fn run_example() -> sharpineq::Result<()> {
    let n = 6;
    for i in (0..=16).rev() {
        let beta = -5.0 + 0.5 * i as f64;
        let row: String = (0..=40)
            .map(|j| {
                let alpha = -3.0 + 0.125 * j as f64;
                match region_classify(n, alpha, beta).as_str() {
                    "SymmetryProved" => '.',
                    "SymmetryBreaking" => '#',
                    "ConjectureSymmetry" => '?',
                    "Boundary" => '|',
                    _ => ' ',
                }
            })
            .collect();
        println!("{beta:>5.1} {row}");
    }
    println!("Felli-Schneider beta at alpha=1: {:.6}", felli_schneider_beta(n, 1.0));

    let spec = SweepSpec {
        family: SweepFamily::Region,
        n,
        axes: vec![
            Axis { name: "alpha".into(), min: -1.0, max: 1.0, steps: 3 },
            Axis { name: "beta".into(), min: -2.0, max: 0.0, steps: 3 },
        ],
        outputs: vec!["region".into(), "sharp_s_div".into()],
    };
    print!("{}", sweep(&spec)?.to_csv()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
