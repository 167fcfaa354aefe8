use sharpineq::harness::{convergence_study, RatioKind, SequenceFamily};

pub fn run_example() -> sharpineq::Result<()> {
    let eps = [0.1, 0.03, 0.01, 0.003];
    let runs = [
        (SequenceFamily::PowerCut, RatioKind::WeakHR, 7u32, 0.0, 0u32),
        (SequenceFamily::PowerCut, RatioKind::WeakHR, 5, -4.0, 1),
        (SequenceFamily::TailIntegral, RatioKind::WeakHR, 6, 1.0, 0),
        (SequenceFamily::PowerCut, RatioKind::Rellich1D, 7, 0.0, 0),
    ];
    for (fam, ratio, n, a, k) in runs {
        let t = convergence_study(fam, ratio, n, a, k, &eps)?;
        println!("{fam:?} {ratio:?} N={n} a={a} k={k}: target {:.6}", t.target);
        for r in &t.rows {
            println!("  eps={:<6} ratio={:.8} err={:+.3e}", r.eps, r.ratio, r.error);
        }
        println!("  order {:.3}  extrapolated {:.6}", t.fitted_order, t.limit);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
