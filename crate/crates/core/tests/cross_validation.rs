mod common;

use std::f64::consts::TAU;

use common::*;
use npwigner::marginals::{
    phase_marginal, phase_state_phase_dist_closed, photon_marginal_analytic,
};
use npwigner::oracle::{min_theta_samples, wigner_via_characteristic};
use npwigner::wigner::{
    cat_wigner_closed, coherent_wigner_closed, phase_state_wigner_closed, series_terms, wigner_np,
    NormalizationPower,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn sample_points() -> Vec<(usize, f64)> {
    (0..20)
        .flat_map(|n| (0..64).map(move |j| (n, TAU * j as f64 / 64.0 + 0.013)))
        .collect()
}

#[test]
fn coherent_closed_form_matches_direct_path() {
    let rho = coherent(4.0, 0.0, 64);
    let terms = series_terms(4.0, 1e-14);
    assert!(
        (coherent_wigner_closed(4.0, 16, 0.5, terms).unwrap() - wigner_np(&rho, 16, 0.5).unwrap())
            .abs()
            < 1e-10
    );
    assert!(
        (coherent_wigner_closed(4.0, 16, 0.0, terms).unwrap() - wigner_np(&rho, 16, 0.0).unwrap())
            .abs()
            < 1e-10
    );
    for (n, phi) in sample_points() {
        let a = coherent_wigner_closed(4.0, n, phi, terms).unwrap();
        let b = wigner_np(&rho, n, phi).unwrap();
        assert!((a - b).abs() < 1e-9, "n={n} φ={phi}");
    }
}

#[test]
fn complex_alpha_shifts_phase_axis() {
    let chi: f64 = 0.9;
    let rotated = coherent(3.0 * chi.cos(), 3.0 * chi.sin(), 48);
    let terms = series_terms(3.0, 1e-14);
    for n in [0, 4, 9, 15] {
        for phi in [0.0, 0.9, 2.0, 4.5] {
            let a = wigner_np(&rotated, n, phi).unwrap();
            let b = coherent_wigner_closed(3.0, n, phi - chi, terms).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn cat_closed_form_needs_squared_normalization() {
    let rho = cat(4.0, 0.0, 64);
    let terms = series_terms(4.0, 1e-14);
    let mut worst_rel_printed = 0.0f64;
    for (n, phi) in sample_points() {
        let direct = wigner_np(&rho, n, phi).unwrap();
        let derived = cat_wigner_closed(4.0, n, phi, terms, NormalizationPower::Derived).unwrap();
        assert!((direct - derived).abs() < 1e-9, "n={n} φ={phi}");
        let printed = cat_wigner_closed(4.0, n, phi, terms, NormalizationPower::AsPrinted).unwrap();
        if direct.abs() > 1e-6 {
            worst_rel_printed = worst_rel_printed.max(((printed - direct) / direct).abs());
        }
    }
    assert!(worst_rel_printed > 0.1);
}

#[test]
fn phase_state_closed_forms_match_direct_path() {
    let rho = phase(20, 0.7, 32);
    assert!(
        (phase_state_wigner_closed(20, 0.7, 5, 1.9) - wigner_np(&rho, 5, 1.9).unwrap()).abs()
            < 1e-10
    );
    for (n, phi) in sample_points() {
        let a = phase_state_wigner_closed(20, 0.7, n, phi);
        let b = wigner_np(&rho, n, phi).unwrap();
        assert!((a - b).abs() < 1e-9, "n={n} φ={phi}");
    }
    for j in 0..512 {
        let phi = TAU * j as f64 / 512.0;
        assert!(
            (phase_state_phase_dist_closed(20, 0.7, phi) - phase_marginal(&rho, phi)).abs() < 1e-10
        );
    }
    assert!(
        (phase_state_phase_dist_closed(20, 0.7, 0.7) - phase_marginal(&rho, 0.7)).abs() < 1e-10
    );
}

#[test]
fn number_state_delta() {
    let mut rng = StdRng::seed_from_u64(7);
    for m in [0, 3, 7] {
        let rho = number(m, 16);
        for _ in 0..64 {
            let phi = rng.gen_range(0.0..TAU);
            for n in 0..=16 {
                let expected = if n == m { INV_2PI } else { 0.0 };
                assert!((wigner_np(&rho, n, phi).unwrap() - expected).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn characteristic_path_matches_direct_path() {
    let mut rng = StdRng::seed_from_u64(2024);
    for i in 0..60 {
        let cutoff = rng.gen_range(4..=40);
        let rho = match i % 5 {
            0 => number(rng.gen_range(0..=cutoff), cutoff),
            1 => coherent(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                cutoff.max(30),
            ),
            2 => cat(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                cutoff.max(30),
            ),
            3 => phase(rng.gen_range(0..=cutoff), rng.gen_range(0.0..TAU), cutoff),
            _ => {
                let a = coherent(1.0, 0.5, 30);
                let b = phase(7, 2.0, 30);
                npwigner::fock::mix(&[(0.4, &a), (0.6, &b)]).unwrap()
            }
        };
        let n = rng.gen_range(0..=rho.cutoff());
        let phi = rng.gen_range(0.0..TAU);
        let a = wigner_via_characteristic(&rho, n, phi, min_theta_samples(rho.cutoff())).unwrap();
        let b = wigner_np(&rho, n, phi).unwrap();
        assert!((a - b).abs() < 1e-10, "case {i}: {a} vs {b}");
    }
}

#[test]
fn reference_state_photon_marginals_are_normalized() {
    for (name, rho) in reference_states() {
        let p = photon_marginal_analytic(&rho);
        assert!(p.p.iter().all(|&v| v >= -1e-12), "{name}");
        assert!((p.total() - 1.0).abs() < 1e-10, "{name}");
    }
}
