//! End-to-end numeric suite on a reduced configuration, plus structural
//! checks of the solved intertwiners.

use num_complex::Complex64;
use qloop_numeric::checks::run_numeric_check;
use qloop_numeric::params::NumericParams;
use qloop_numeric::transfer::{oscillator_aux, verma_aux};

fn small() -> NumericParams {
    NumericParams { sites: 2, zeta_samples: 2, fock_cutoff: 20, verma_cutoff: 30, ..NumericParams::default() }
}

#[test]
fn reduced_suite_passes() {
    let r = run_numeric_check(&small(), &[11]).unwrap();
    println!("{}", r.to_json());
    assert!(r.passed(), "{:?}", r.diff_sample);
}

#[test]
fn report_is_deterministic() {
    let p = NumericParams { sites: 1, zeta_samples: 1, ..small() };
    assert_eq!(run_numeric_check(&p, &[3]).unwrap().to_json(), run_numeric_check(&p, &[3]).unwrap().to_json());
}

/// Off-diagonal entries of the intertwiner in the product basis carry one
/// power of the spectral parameter, so on the lowest levels they shrink by
/// the same factor as it does while the diagonal stays put.
fn scaling_ratios(x: &nalgebra::DMatrix<Complex64>, y: &nalgebra::DMatrix<Complex64>) -> (f64, f64, f64) {
    let (mut lo, mut hi, mut diag) = (f64::INFINITY, 0.0f64, 0.0f64);
    for r in 0..12 {
        for c in 0..12 {
            if r == c {
                diag = diag.max((x[(r, c)] - y[(r, c)]).norm() / y[(r, c)].norm());
            } else if y[(r, c)].norm() > 0.0 {
                let k = x[(r, c)].norm() / y[(r, c)].norm();
                lo = lo.min(k);
                hi = hi.max(k);
            }
        }
    }
    (lo, hi, diag)
}

#[test]
fn small_spectral_parameter_limit_is_diagonal() {
    let p = small();
    let mu = p.mu();
    for build in [
        &(|z: Complex64| verma_aux(&p, mu, z, 20).unwrap()) as &dyn Fn(Complex64) -> _,
        &|z: Complex64| oscillator_aux(&p, 1, z, 16).unwrap(),
        &|z: Complex64| oscillator_aux(&p, 2, z, 16).unwrap(),
    ] {
        let x = build(Complex64::new(1e-2, 0.0)).intertwiner.matrix;
        let y = build(Complex64::new(1e-3, 0.0)).intertwiner.matrix;
        let (lo, hi, diag) = scaling_ratios(&x, &y);
        assert!(lo > 9.5 && hi < 10.5, "off-diagonal scaling in [{lo}, {hi}]");
        assert!(diag < 1e-2, "diagonal drift {diag}");
    }
}
