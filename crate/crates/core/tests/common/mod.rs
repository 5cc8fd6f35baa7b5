#![allow(dead_code)]

use npwigner::fock::{
    density_from_pure, make_cat_state, make_coherent_state, make_number_state, make_phase_state,
    DEFAULT_TAIL_TOL,
};
use npwigner::DensityMatrix;
use num_complex::Complex64;

pub const INV_2PI: f64 = 1.0 / (2.0 * std::f64::consts::PI);

pub fn number(m: usize, cutoff: usize) -> DensityMatrix {
    density_from_pure(&make_number_state(m, cutoff).unwrap())
}

pub fn coherent(re: f64, im: f64, cutoff: usize) -> DensityMatrix {
    density_from_pure(
        &make_coherent_state(Complex64::new(re, im), cutoff, DEFAULT_TAIL_TOL).unwrap(),
    )
}

pub fn cat(re: f64, im: f64, cutoff: usize) -> DensityMatrix {
    density_from_pure(&make_cat_state(Complex64::new(re, im), cutoff, DEFAULT_TAIL_TOL).unwrap())
}

pub fn phase(m: usize, phi0: f64, cutoff: usize) -> DensityMatrix {
    density_from_pure(&make_phase_state(m, phi0, cutoff).unwrap())
}

/// The four reference states at cutoff 64.
pub fn reference_states() -> Vec<(&'static str, DensityMatrix)> {
    vec![
        ("number(7)", number(7, 64)),
        ("coherent(4)", coherent(4.0, 0.0, 64)),
        ("cat(4)", cat(4.0, 0.0, 64)),
        ("phase(20, 0.7)", phase(20, 0.7, 64)),
    ]
}
