//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::Instant;

use sharpineq::harness::{
    convergence_study, run_suite, Case, Config, RatioKind, SequenceFamily, Suite, VerificationReport, POWER_CUT_CASES,
};

struct Criterion {
    id: u32,
    what: &'static str,
    pass: bool,
    detail: String,
}

fn pick<'a>(r: &'a VerificationReport, names: &[&str]) -> Vec<&'a Case> {
    r.cases.iter().filter(|c| names.contains(&c.name.as_str())).collect()
}

fn worst(cases: &[&Case]) -> f64 {
    cases.iter().map(|c| c.rel_err).fold(0.0, |m, e| if e.is_nan() { f64::NAN } else { m.max(e) })
}

fn judge(id: u32, what: &'static str, cases: &[&Case], min_count: usize, extra: bool, detail: String) -> Criterion {
    let failed = cases.iter().filter(|c| !c.pass).count();
    let pass = extra && cases.len() >= min_count && failed == 0;
    Criterion { id, what, pass, detail: format!("{} cases, {} failed; {}", cases.len(), failed, detail) }
}

fn count(r: &VerificationReport, name: &str) -> usize {
    r.cases.iter().filter(|c| c.name == name).count()
}

#[test]
fn acceptance_criteria() {
    let config = Config::default();
    let mut out = Vec::new();

    let t0 = Instant::now();
    let ext = run_suite(Suite::Extremals, &config).unwrap();
    let ext_secs = t0.elapsed().as_secs_f64();

    let ckn = pick(&ext, &["ckn_extremal_quotient"]);
    out.push(judge(
        1,
        "CKN extremal quotient equals the sharp constant",
        &ckn,
        16,
        ext_secs <= 10.0,
        format!("max rel err {:.2e}, suite time {:.2} s", worst(&ckn), ext_secs),
    ));

    let el = pick(&ext, &["euler_lagrange_residual"]);
    out.push(judge(2, "Euler-Lagrange residual at 40 radii", &el, 16, true, format!("max residual {:.2e}", worst(&el))));

    let rs = pick(&ext, &["rs_extremal_quotient"]);
    let rs_exact = pick(&ext, &["rs_coeffs_unweighted_exact"]);
    let mut both = rs.clone();
    both.extend(rs_exact.iter().copied());
    out.push(judge(
        3,
        "Rellich-Sobolev extremals and exact unweighted coefficients",
        &both,
        12 + 1,
        rs.len() >= 12 && !rs_exact.is_empty(),
        format!("max rel err {:.2e}", worst(&rs)),
    ));

    let ds = pick(&ext, &["div_extremal_quotient", "singular_extremal_quotient"]);
    let dual = pick(&ext, &["singular_div_duality"]);
    let mut both = ds.clone();
    both.extend(dual.iter().copied());
    out.push(judge(
        4,
        "div-form and singular extremals, duality",
        &both,
        36,
        count(&ext, "div_extremal_quotient") >= 12 && count(&ext, "singular_extremal_quotient") >= 12,
        format!("max quotient err {:.2e}, max duality err {:.2e}", worst(&ds), worst(&dual)),
    ));

    let id = run_suite(Suite::Identities, &config).unwrap();
    let fams = ["lemtle", "power_change_of_variable", "psny1", "psny2", "psny3", "div_expansion", "kelvin_norm", "kelvin_energy"];
    let enough = fams.iter().all(|f| count(&id, f) >= 20) && count(&id, "vecgm_exact") >= 100;
    let all: Vec<&Case> = id.cases.iter().collect();
    let quad = pick(&id, &fams);
    out.push(judge(5, "identity residuals and exact vector identities", &all, 260, enough, format!("max residual {:.2e}", worst(&quad))));

    let mp = run_suite(Suite::ModePositivity, &config).unwrap();
    let a3k = pick(&mp, &["a3k_min_over_modes"]);
    let min_a3k = a3k.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    out.push(judge(6, "A3k positive over the mode grid", &a3k, 300, true, format!("smallest min over k {:.3e}", min_a3k)));

    let t0 = Instant::now();
    let whr = run_suite(Suite::WeakHR, &config).unwrap();
    let spec = run_suite(Suite::Spectral, &config).unwrap();
    let hr_secs = t0.elapsed().as_secs_f64();
    let closed = pick(&whr, &["weak_hr_constant"]);
    let scans = pick(&spec, &["weak_hr_spectral_minimum", "weak_hr_spectral_lower_bound"]);
    let mut both = closed.clone();
    both.extend(scans.iter().copied());
    out.push(judge(
        7,
        "weak Hardy-Rellich closed forms and spectral scans",
        &both,
        12 + 12,
        hr_secs <= 60.0 && closed.len() >= 12 && scans.len() >= 12,
        format!("max scan rel err {:.2e}, time {:.2} s", worst(&pick(&spec, &["weak_hr_spectral_minimum"])), hr_secs),
    ));

    let conv = run_suite(Suite::Convergence, &config).unwrap();
    let seq = pick(&conv, &["powercut_weak_hr_order", "powercut_weak_hr_limit", "tail_weak_hr_order", "tail_weak_hr_limit"]);
    let min_order = pick(&conv, &["powercut_weak_hr_order", "tail_weak_hr_order"])
        .iter()
        .map(|c| c.value)
        .fold(f64::INFINITY, f64::min);
    out.push(judge(
        8,
        "minimizing sequences converge with order >= 0.9",
        &seq,
        2 * POWER_CUT_CASES.len() + 8,
        true,
        format!("smallest fitted order {:.3}", min_order),
    ));

    let sw = run_suite(Suite::SteinWeiss, &config).unwrap();
    let hls = pick(&sw, &["sw_hls_diagonal"]);
    let stat = pick(&sw, &["sw_stationarity"]);
    let mut both = hls.clone();
    both.extend(stat.iter().copied());
    let max_slope = stat.iter().map(|c| c.value.abs()).fold(0.0, f64::max);
    out.push(judge(
        9,
        "Stein-Weiss HLS constant and stationarity",
        &both,
        3 + 50,
        hls.len() >= 3 && stat.len() >= 10,
        format!("max HLS err {:.2e}, max slope {:.2e}", worst(&hls), max_slope),
    ));

    let st = pick(&mp, &["shri_gap_margin"]);
    let min_margin = st.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    out.push(judge(10, "strict inequality margin", &st, 30, true, format!("smallest margin {:.3e}", min_margin)));

    for c in &out {
        println!("{}  {:>2}  {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.id, c.what, c.detail);
    }

    // The smallest-m power cut is reported, not gated: its corrections decay slowly.
    match convergence_study(SequenceFamily::PowerCut, RatioKind::WeakHR, 5, 0.0, 0, &config.grids.eps) {
        Ok(t) => println!("INFO   8  power cut N=5 a=0 fitted order {:.3}", t.fitted_order),
        Err(e) => println!("INFO   8  power cut N=5 a=0 unavailable: {e}"),
    }

    let failed: Vec<u32> = out.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
