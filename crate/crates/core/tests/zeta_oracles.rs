//! Lattice sums against Dirichlet-series closed forms, plus the scaling and
//! ordering facts the zeta module is expected to respect.

mod common;

use common::{grid, hexagonal_closed_form, square_closed_form};
use iwr::enumerate::enumerate_iwr;
use iwr::optimize::optimize;
use iwr::zeta::{
    epstein_bounds, epstein_lattice, epstein_zeta, monotonicity_check, packing_density, snr,
    CheckMode, Verdict,
};
use iwr::{DeterminantSpec, IwrLattice, SimilarityClass};

/// Error of the Euler-Maclaurin oracle, well above its actual size.
const ORACLE_SLACK: f64 = 1e-12;

fn eps_for(s: f64) -> f64 {
    if s < 2.5 {
        1e-6
    } else {
        1e-10
    }
}

#[test]
fn hexagonal_form_matches_closed_form() {
    for s in [2.0, 3.0, 4.0, 2.5] {
        let z = epstein_zeta(1.0, 3f64.sqrt() / 2.0, s, eps_for(s)).unwrap();
        let exact = hexagonal_closed_form(s);
        assert!(
            (z.value - exact).abs() <= z.abs_error_bound + ORACLE_SLACK,
            "s = {s}: {} vs {exact} (bound {})",
            z.value,
            z.abs_error_bound
        );
        assert!(z.abs_error_bound <= eps_for(s));
    }
}

#[test]
fn square_form_matches_closed_form() {
    for s in [2.0, 3.0, 4.0] {
        let z = epstein_zeta(1.0, 1.0, s, eps_for(s)).unwrap();
        let exact = square_closed_form(s);
        assert!((z.value - exact).abs() <= z.abs_error_bound + ORACLE_SLACK, "s = {s}");
    }
}

#[test]
fn known_constants() {
    // 6ζ(2)L₋₃(2) and 4ζ(2)G to 11 places
    assert!((hexagonal_closed_form(2.0) - 7.711_145_732_905).abs() < 1e-11);
    assert!((square_closed_form(2.0) - 6.026_812_039_692).abs() < 1e-11);
}

#[test]
fn iwr_lattice_homogeneity() {
    let class = SimilarityClass::new(29, 24, 61, 5).unwrap();
    let s = 3.0;
    let base = epstein_lattice(&IwrLattice::new(class.clone(), 1).unwrap(), s, 1e-12).unwrap();
    for k in [2i64, 3, 7] {
        let scaled = epstein_lattice(&IwrLattice::new(class.clone(), k).unwrap(), s, 1e-14).unwrap();
        let predicted = base.value * (k as f64).powf(-s);
        let slack = base.abs_error_bound * (k as f64).powf(-s) + scaled.abs_error_bound;
        assert!((scaled.value - predicted).abs() <= slack + 1e-15, "k = {k}");
    }
}

#[test]
fn snr_shifts_by_40_log10_c_under_scaling() {
    // k → 4k scales Λ by c = 2 (Gram entries by 4)
    let class = SimilarityClass::new(1, 1, 2, 3).unwrap();
    let a = snr(&IwrLattice::new(class.clone(), 1).unwrap(), 1e-7).unwrap();
    let b = snr(&IwrLattice::new(class, 4).unwrap(), 1e-9).unwrap();
    assert!((b - a - 40.0 * 2f64.log10()).abs() < 1e-4);
}

#[test]
fn packing_density_anchors() {
    let hex = IwrLattice::new(SimilarityClass::new(1, 1, 2, 3).unwrap(), 5).unwrap();
    assert!((packing_density(&hex) - std::f64::consts::PI / 12f64.sqrt()).abs() < 1e-12);
    let square = IwrLattice::new(SimilarityClass::new(0, 1, 1, 1).unwrap(), 3).unwrap();
    assert!((packing_density(&square) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn bounds_bracket_the_sum() {
    for s in [1.5, 2.0, 3.0] {
        let (lower, upper) = epstein_bounds(1.0, s).unwrap();
        let eps = if s < 2.0 { 1e-2 } else { 1e-6 };
        for delta in [3f64.sqrt() / 2.0, 0.9, 0.95, 1.0] {
            let z = epstein_zeta(1.0, delta, s, eps).unwrap();
            assert!(lower <= z.upper() && z.lower() <= upper, "s = {s}, Δ = {delta}");
        }
    }
}

#[test]
fn hexagonal_minimizes_at_fixed_determinant() {
    let s = 3.0;
    let h = 3f64.sqrt() / 2.0;
    let hex = epstein_zeta(1.0, h, s, 1e-10).unwrap();
    for delta in [0.88, 0.92, 0.97, 1.0] {
        // rescale the unit-minimum form of determinant Δ to determinant h
        let other = epstein_zeta(h / delta, h, s, 1e-10).unwrap();
        assert!(hex.upper() < other.lower(), "Δ = {delta}");
    }
}

#[test]
fn decreasing_in_minimum_for_24_sqrt5() {
    let spec = DeterminantSpec::new(24, 5).unwrap();
    let report = monotonicity_check(&spec, 3.0, 1e-10).unwrap();
    assert_eq!(report.mode, CheckMode::Asserted);
    assert_eq!(report.verdict, Verdict::Decreasing);
    let minima: Vec<i64> = report
        .entries
        .iter()
        .map(|(lat, _)| i64::try_from(lat.minimum()).unwrap())
        .collect();
    assert_eq!(minima, [54, 56, 58, 61]);
    let s2 = monotonicity_check(&spec, 2.0, 1e-6).unwrap();
    assert_eq!(s2.mode, CheckMode::Observational);
    assert!(!s2.certified_decreasing());
}

#[test]
fn maximizer_minimizes_zeta_at_s3() {
    let s = 3.0;
    let mut checked = 0;
    for (m, d) in grid(24, 15) {
        let spec = DeterminantSpec::new(m, d).unwrap();
        let all = enumerate_iwr(&spec, true).unwrap();
        if all.len() < 2 {
            continue;
        }
        let best = optimize(&spec).unwrap().lattice;
        let best_z = epstein_lattice(&best, s, 1e-10).unwrap();
        for lat in all.iter().filter(|l| l.minimum() < best.minimum()) {
            let z = epstein_lattice(lat, s, 1e-10).unwrap();
            assert!(best_z.upper() < z.lower(), "{spec}: {best} vs {lat}");
        }
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn invalid_arguments_are_rejected() {
    let h = 3f64.sqrt() / 2.0;
    assert!(epstein_zeta(1.0, h, 1.0, 1e-6).is_err());
    assert!(epstein_zeta(1.0, h, 2.0, 0.0).is_err());
    assert!(epstein_zeta(1.0, 0.5, 2.0, 1e-6).is_err());
    assert!(epstein_zeta(1.0, 1.5, 2.0, 1e-6).is_err());
    assert!(epstein_zeta(-1.0, h, 2.0, 1e-6).is_err());
    assert!(epstein_zeta(1.0, h, 2.0, 1e-15).is_err());
}
