//! Every example runs to completion.

#[path = "../examples/sharp_constants.rs"]
#[allow(dead_code)]
mod sharp_constants;

#[path = "../examples/ckn_extremal.rs"]
#[allow(dead_code)]
mod ckn_extremal;

#[path = "../examples/rellich_sobolev.rs"]
#[allow(dead_code)]
mod rellich_sobolev;

#[path = "../examples/div_singular_duality.rs"]
#[allow(dead_code)]
mod div_singular_duality;

#[path = "../examples/identities.rs"]
#[allow(dead_code)]
mod identities;

#[path = "../examples/mode_positivity.rs"]
#[allow(dead_code)]
mod mode_positivity;

#[path = "../examples/weak_hardy_rellich.rs"]
#[allow(dead_code)]
mod weak_hardy_rellich;

#[path = "../examples/minimizing_sequences.rs"]
#[allow(dead_code)]
mod minimizing_sequences;

#[path = "../examples/stein_weiss.rs"]
#[allow(dead_code)]
mod stein_weiss;

#[path = "../examples/region_map.rs"]
#[allow(dead_code)]
mod region_map;

#[path = "../examples/verification_report.rs"]
#[allow(dead_code)]
mod verification_report;


#[test]
fn sharp_constants_runs() {
    sharp_constants::run_example().unwrap();
}

#[test]
fn ckn_extremal_runs() {
    ckn_extremal::run_example().unwrap();
}

#[test]
fn rellich_sobolev_runs() {
    rellich_sobolev::run_example().unwrap();
}

#[test]
fn div_singular_duality_runs() {
    div_singular_duality::run_example().unwrap();
}

#[test]
fn identities_runs() {
    identities::run_example().unwrap();
}

#[test]
fn mode_positivity_runs() {
    mode_positivity::run_example().unwrap();
}

#[test]
fn weak_hardy_rellich_runs() {
    weak_hardy_rellich::run_example().unwrap();
}

#[test]
fn minimizing_sequences_runs() {
    minimizing_sequences::run_example().unwrap();
}

#[test]
fn stein_weiss_runs() {
    stein_weiss::run_example().unwrap();
}

#[test]
fn region_map_runs() {
    region_map::run_example().unwrap();
}

#[test]
fn verification_report_runs() {
    verification_report::run_example().unwrap();
}
