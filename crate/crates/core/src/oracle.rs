//! Independent evaluation paths used to validate the direct evaluator.
//!
//! The characteristic-function route builds, for each shift `k` and angle
//! `θ`, the trace of `D(k, θ) ρ` with
//!
//! ```text
//! D(k, θ) = e^{iθk} e^{−iθn̂} (V†)^k,     V† = Σ_j |j+1⟩⟨j|
//! ```
//!
//! multiplies it by the kernel `e^{i(kφ + nθ)}` for the target point
//! `(n, φ)`, symmetrizes with the complex conjugate and integrates over `θ`
//! with the uniform trapezoid rule. For `k < 0` the shift is the adjoint
//! `V^{|k|}`. The trace reduces to `Σ_m Q_{m,m+k} e^{−iθm}`, so the
//! θ-integral keeps only `m = n` and the `k`-sum rebuilds the direct
//! formula. Performance is not a goal here.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::marginals::{phase_distribution, photon_marginal_analytic, photon_marginal_from_grid};
use crate::phase::{polar, reduce_phase};
use crate::report::{Check, ValidationReport};
use crate::wigner::{real_part, wigner_grid, wigner_np};

/// Threshold for the marginal and path-equivalence checks.
pub const CHECK_TOL: f64 = 1e-10;

/// `⟨l|(V†)^k|m⟩ = δ_{l, m+k}`.
pub fn sg_matrix_element(k: usize, l: usize, m: usize) -> u8 {
    u8::from(l == m + k)
}

/// `⟨l| S_k |m⟩` for the signed shift `S_k = (V†)^k` (`k ≥ 0`) or `V^{|k|}` (`k < 0`).
fn shift_element(k: i64, l: usize, m: usize) -> u8 {
    let j = k.unsigned_abs() as usize;
    if k >= 0 {
        sg_matrix_element(j, l, m)
    } else {
        sg_matrix_element(j, m, l)
    }
}

/// `Tr[D(k, θ) ρ]` by the full double sum over matrix elements.
pub fn displacement_trace_brute(rho: &DensityMatrix, k: i64, theta: f64) -> Complex64 {
    let dim = rho.dim();
    let mut z = Complex64::new(0.0, 0.0);
    for m in 0..dim {
        for l in 0..dim {
            if shift_element(k, l, m) == 1 {
                // ⟨l| e^{−iθn̂} S_k |m⟩ = e^{−iθl} ⟨l|S_k|m⟩
                z += rho.get(m, l) * polar(1.0, -theta * l as f64);
            }
        }
    }
    z * polar(1.0, theta * k as f64)
}

/// `Tr[D(k, θ) ρ] = Σ_m Q_{m,m+k} e^{−iθm}`, given `e^{−iθm}` for `m = 0..=N`.
fn displacement_trace_with(rho: &DensityMatrix, k: i64, phases: &[Complex64]) -> Complex64 {
    let n_top = rho.cutoff() as i64;
    let lo = (-k).max(0);
    let hi = (n_top - k).min(n_top);
    (lo..=hi)
        .map(|m| rho.get(m as usize, (m + k) as usize) * phases[m as usize])
        .sum()
}

fn theta_phases(theta: f64, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|m| polar(1.0, -theta * m as f64)).collect()
}

/// `Tr[D(k, θ) ρ]` with the trace reduced by the selection rule `l = m + k`.
pub fn displacement_trace(rho: &DensityMatrix, k: i64, theta: f64) -> Complex64 {
    displacement_trace_with(rho, k, &theta_phases(theta, rho.dim()))
}

/// One sample of the characteristic function times the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSample {
    pub k: i64,
    pub theta: f64,
    pub value: Complex64,
}

fn symmetrized(trace: Complex64, k: i64, theta: f64, n: usize, phi: f64) -> Complex64 {
    let x = trace * polar(1.0, k as f64 * phi + n as f64 * theta);
    (x + x.conj()) * 0.5
}

fn check_target(rho: &DensityMatrix, k: i64, n: usize) -> Result<()> {
    if n > rho.cutoff() {
        return Err(Error::CutoffExceeded {
            index: n,
            cutoff: rho.cutoff(),
        });
    }
    if k < -(rho.cutoff() as i64) {
        return Err(Error::InvalidParameter(format!(
            "shift {k} is below −cutoff = −{}",
            rho.cutoff()
        )));
    }
    Ok(())
}

pub fn characteristic_sample(
    rho: &DensityMatrix,
    k: i64,
    theta: f64,
    n: usize,
    phi: f64,
) -> Result<CharacteristicSample> {
    check_target(rho, k, n)?;
    let theta = reduce_phase(theta);
    let phi = reduce_phase(phi);
    let trace = displacement_trace(rho, k, theta);
    Ok(CharacteristicSample {
        k,
        theta,
        value: symmetrized(trace, k, theta, n, phi),
    })
}

/// `½ Tr[(D(k, θ) e^{i(kφ + nθ)} + c.c.) ρ]` as a real number.
pub fn characteristic_times_kernel(
    rho: &DensityMatrix,
    k: i64,
    theta: f64,
    n: usize,
    phi: f64,
) -> Result<f64> {
    real_part(
        characteristic_sample(rho, k, theta, n, phi)?.value,
        "characteristic sample",
    )
}

/// Smallest θ sample count accepted by [`wigner_via_characteristic`].
pub fn min_theta_samples(cutoff: usize) -> usize {
    2 * cutoff + 3
}

/// `(2π/T) Σ_j e^{i·freq·θ_j}` on `θ_j = 2πj/T`; equals `2π δ_{freq,0}` for `|freq| < T`.
pub fn trapezoid_exponential_sum(freq: i64, samples: usize) -> Complex64 {
    let step = TAU / samples as f64;
    let sum: Complex64 = (0..samples)
        .map(|j| polar(1.0, freq as f64 * step * j as f64))
        .sum();
    sum * step
}

/// `W(n, φ) = (1/(2π)²) Σ_{k=−n}^{N−n} ∫₀^{2π} C̃(k, θ) dθ`, integrating `θ`
/// with `theta_samples` uniform trapezoid nodes.
pub fn wigner_via_characteristic(
    rho: &DensityMatrix,
    n: usize,
    phi: f64,
    theta_samples: usize,
) -> Result<f64> {
    check_target(rho, 0, n)?;
    let required = min_theta_samples(rho.cutoff());
    if theta_samples < required {
        return Err(Error::Undersampled {
            samples: theta_samples,
            required,
        });
    }
    let phi = reduce_phase(phi);
    let step = TAU / theta_samples as f64;
    let thetas: Vec<f64> = (0..theta_samples).map(|j| step * j as f64).collect();
    let tables: Vec<Vec<Complex64>> = thetas.iter().map(|&t| theta_phases(t, rho.dim())).collect();

    let k_lo = -(n as i64);
    let k_hi = (rho.cutoff() - n) as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in k_lo..=k_hi {
        let integral: Complex64 = thetas
            .iter()
            .zip(&tables)
            .map(|(&theta, table)| {
                symmetrized(displacement_trace_with(rho, k, table), k, theta, n, phi)
            })
            .sum::<Complex64>()
            * step;
        total += integral;
    }
    real_part(total / (4.0 * PI * PI), "characteristic-path Wigner value")
}

/// Largest `|W_char − W_direct|` over the given `(n, φ)` points.
pub fn path_equivalence_deviation(
    rho: &DensityMatrix,
    points: &[(usize, f64)],
    theta_samples: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(n, phi) in points {
        let a = wigner_via_characteristic(rho, n, phi, theta_samples)?;
        let b = wigner_np(rho, n, phi)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Joint check of both marginal identities and the normalization.
///
/// Reports `max_n |∫W dφ − Q_{n,n}|`, `max_j |Σ_n W(n, φ_j) − P(φ_j)|` and
/// `|∫P dφ − Tr ρ|`, each against [`CHECK_TOL`]. An undersampled grid is
/// reported as a failing `phi_samples_exactness` check.
pub fn brute_force_marginal_check(rho: &DensityMatrix, phi_samples: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    let required = min_theta_samples(rho.cutoff());
    report.push(
        Check::max_deviation(
            "phi_samples_exactness",
            (required as f64 - phi_samples as f64).max(0.0),
            0.5,
        )
        .with_note(format!("{phi_samples} samples, need at least {required}")),
    );
    if phi_samples == 0 {
        return report;
    }

    let grid = match wigner_grid(rho, rho.cutoff(), phi_samples) {
        Ok(grid) => grid,
        Err(e) => {
            report.push(
                Check::max_deviation("wigner_grid", f64::NAN, CHECK_TOL).with_note(e.to_string()),
            );
            return report;
        }
    };

    let photon = match photon_marginal_from_grid(&grid) {
        Ok(m) => m.distribution.max_deviation(&photon_marginal_analytic(rho)),
        Err(_) => f64::NAN,
    };
    report.push(Check::max_deviation("photon_marginal", photon, CHECK_TOL));

    let (phase, normalization) = match phase_distribution(rho, phi_samples, 0.0) {
        Ok(dist) => {
            let phase = (0..phi_samples)
                .map(|j| {
                    let column: f64 = (0..=grid.n_max()).map(|n| grid.value(n, j)).sum();
                    (column - dist.values[j]).abs()
                })
                .fold(0.0, f64::max);
            (phase, (dist.integral() - rho.trace()).abs())
        }
        Err(_) => (f64::NAN, f64::NAN),
    };
    report.push(Check::max_deviation("phase_marginal", phase, CHECK_TOL));
    report.push(Check::max_deviation(
        "normalization",
        normalization,
        CHECK_TOL,
    ));
    report
}
