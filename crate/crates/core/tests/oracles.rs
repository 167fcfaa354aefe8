//! Reference values computed independently at 30 digits (direct
//! quadrature of the defining integrals and an arbitrary-precision Gamma).

use sharpineq::constants::{hls_c1, sharp_s_div, sharp_s_gamma, sharp_s_singular};
use sharpineq::functionals::{q_ckn, q_div, weak_hr_ratio};
use sharpineq::profiles::{ModeFunction, RadialProfile};
use sharpineq::specfun::{big_b, log_gamma, sphere_area};

fn close(v: f64, r: f64, tol: f64) {
    assert!((v - r).abs() <= tol * r.abs(), "{v} vs {r} (rel {:.2e})", (v - r).abs() / r.abs());
}

#[test]
fn special_functions() {
    close(big_b(6.0).unwrap(), 25.0551529034807270107195907866, 1e-13);
    // prefactor 4·6·8·10 = 1920
    close(big_b(8.0).unwrap(), 114.741946496101789437006449251, 1e-13);
    close(log_gamma(0.3).unwrap(), 1.09579799481807552167716814237, 1e-14);
    close(log_gamma(17.5).unwrap(), 32.0811148959473494865048433989, 1e-14);
    close(sphere_area(7).unwrap(), 33.0733617923198081871747360716, 1e-14);
    close(hls_c1(3, 1.0).unwrap(), 2.29401070354159900089861469082, 1e-13);
}

#[test]
fn unweighted_constants() {
    close(sharp_s_gamma(5, 0.0).unwrap(), 102.383273440582934880726253817, 1e-13);
    close(sharp_s_gamma(6, 0.0).unwrap(), 247.284447366160205381819672158, 1e-13);
    close(sharp_s_gamma(8, 0.0).unwrap(), 653.824711826446959259166350487, 1e-13);
    // the singular point (6, 0, -4) is dual to the unweighted one
    close(sharp_s_singular(6, 0.0, -4.0).unwrap(), 247.284447366160205381819672158, 1e-13);
}

#[test]
fn bubble_quotients() {
    for (n, g, r) in [
        (5, -1.0, 52.0297174014065165603504764676),
        (7, -1.0, 191.943904375678877836635028681),
        (6, -0.5, 178.958556626426145440465615195),
    ] {
        close(sharp_s_gamma(n, g).unwrap(), r, 1e-13);
        close(q_ckn(&RadialProfile::ckn_normalized(n, g).unwrap(), n, g).unwrap(), r, 1e-10);
    }
    let u = RadialProfile::div_extremal(1.0, 1.0, 6, -2.0, -3.0).unwrap();
    close(q_div(&u, 6, -2.0, -3.0).unwrap(), 24.5337244927760977444786571073, 1e-10);
    close(sharp_s_div(6, -2.0, -3.0).unwrap(), 24.5337244927760977444786571073, 1e-13);
}

#[test]
fn bump_quotients() {
    let b = RadialProfile::gauss_bump(1.0, 0.5).unwrap();
    close(q_ckn(&b, 6, -1.0).unwrap(), 704.268926063088615168940890589, 1e-10);
    let b2 = RadialProfile::gauss_bump(2.0, 1.0).unwrap();
    close(q_ckn(&b2, 5, 0.0).unwrap(), 1226.90079896906127289061465999, 1e-10);

    let m = ModeFunction::new(1, b.clone().times_power(1.0)).unwrap();
    close(weak_hr_ratio(&m, 5, 0.0).unwrap(), 39.5088652841286267066754862145, 1e-10);
    let m = ModeFunction::new(1, RadialProfile::gauss_bump(1.5, 0.7).unwrap().times_power(1.0)).unwrap();
    close(weak_hr_ratio(&m, 5, -4.0).unwrap(), 26.0605424414403369472418005035, 1e-10);
    let m = ModeFunction::new(0, b).unwrap();
    close(weak_hr_ratio(&m, 7, 0.0).unwrap(), 29.8966916288925379693022873628, 1e-10);
}
