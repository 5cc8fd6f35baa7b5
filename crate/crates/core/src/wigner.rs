//! Number-phase Wigner function.
//!
//! The direct evaluator computes
//!
//! ```text
//! W(n, φ) = (1/4π) Σ_{k=−n}^{N−n} (Q_{n,n+k} e^{ikφ} + Q_{n+k,n} e^{−ikφ})
//! ```
//!
//! where the upper limit is exact because `Q` vanishes above the cutoff `N`.
//! The `k = 0` term contributes `Q_{n,n}/2π`, which is what makes the
//! φ-integral of a row equal the photon-number probability.
//!
//! The closed forms for coherent, cat and truncated phase states take a real
//! amplitude; a complex `α = |α| e^{iχ}` only shifts the phase axis,
//! `W_α(n, φ) = W_{|α|}(n, φ − χ)`, and is handled by the direct path.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{cat_norm_sqr_closed, ln_factorial, DensityMatrix};
use crate::phase::{reduce_phase, twiddles, uniform_phases};

/// Largest imaginary part tolerated before a value is reported as real.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Below this `|sin(Δ/2)|` the phase-state closed forms switch to their direct sums.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerPoint {
    pub n: usize,
    pub phi: f64,
    pub value: f64,
}

pub(crate) fn real_part(z: Complex64, what: &'static str) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(what));
    }
    if z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue {
            residue: z.im.abs(),
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    Ok(z.re)
}

/// Complex row sum for photon number `n`, given `e^{ijφ}` for `j = 0..=N`.
pub(crate) fn row_sum(rho: &DensityMatrix, n: usize, tw: &[Complex64]) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for m in 0..rho.dim() {
        let t = if m >= n { tw[m - n] } else { tw[n - m].conj() };
        z += rho.get(n, m) * t + rho.get(m, n) * t.conj();
    }
    z / (4.0 * PI)
}

fn check_point(rho: &DensityMatrix, n: usize, phi: f64) -> Result<f64> {
    if n > rho.cutoff() {
        return Err(Error::CutoffExceeded {
            index: n,
            cutoff: rho.cutoff(),
        });
    }
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    Ok(reduce_phase(phi))
}

/// Complex value of the double sum before the imaginary residue is dropped.
pub fn wigner_np_complex(rho: &DensityMatrix, n: usize, phi: f64) -> Result<Complex64> {
    let phi = check_point(rho, n, phi)?;
    Ok(row_sum(rho, n, &twiddles(phi, rho.dim())))
}

/// `W(n, φ)` by the direct double sum.
pub fn wigner_np(rho: &DensityMatrix, n: usize, phi: f64) -> Result<f64> {
    real_part(wigner_np_complex(rho, n, phi)?, "Wigner value")
}

pub fn wigner_point(rho: &DensityMatrix, n: usize, phi: f64) -> Result<WignerPoint> {
    let value = wigner_np(rho, n, phi)?;
    Ok(WignerPoint {
        n,
        phi: reduce_phase(phi),
        value,
    })
}

/// `W(n, φ_j)` sampled for `n = 0..=n_max` over a set of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    n_max: usize,
    cutoff: usize,
    phis: Vec<f64>,
    /// `Some(offset)` when `phis[j] = offset + 2πj/len`.
    uniform_offset: Option<f64>,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Cutoff of the density matrix the grid was sampled from.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn phi_samples(&self) -> usize {
        self.phis.len()
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn uniform_offset(&self) -> Option<f64> {
        self.uniform_offset
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform_offset.is_some()
    }

    pub fn value(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.phis.len() + j]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let s = self.phis.len();
        &self.values[n * s..(n + 1) * s]
    }

    /// Row-major values, `n` outer and `j` inner.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest value and its `(n, j)` position.
    pub fn argmax(&self) -> (f64, usize, usize) {
        let s = self.phis.len();
        let (idx, v) =
            self.values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
                );
        (v, idx / s, idx % s)
    }

    /// Assembles a grid from raw parts, checking shapes and finiteness.
    pub fn from_parts(
        n_max: usize,
        cutoff: usize,
        phis: Vec<f64>,
        uniform_offset: Option<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if phis.is_empty() {
            return Err(Error::InvalidParameter(
                "grid needs at least one phase".into(),
            ));
        }
        if values.len() != (n_max + 1) * phis.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} values, expected {}",
                values.len(),
                (n_max + 1) * phis.len()
            )));
        }
        if values.iter().chain(&phis).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid"));
        }
        Ok(Self {
            n_max,
            cutoff,
            phis,
            uniform_offset,
            values,
        })
    }
}

fn evaluate_columns(rho: &DensityMatrix, n_max: usize, phis: &[f64]) -> Result<Vec<f64>> {
    if n_max > rho.cutoff() {
        return Err(Error::CutoffExceeded {
            index: n_max,
            cutoff: rho.cutoff(),
        });
    }
    let columns: Vec<Vec<f64>> = phis
        .par_iter()
        .map(|&phi| {
            let tw = twiddles(phi, rho.dim());
            (0..=n_max)
                .map(|n| real_part(row_sum(rho, n, &tw), "Wigner value"))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let s = phis.len();
    let mut values = vec![0.0; (n_max + 1) * s];
    for (j, col) in columns.iter().enumerate() {
        for (n, v) in col.iter().enumerate() {
            values[n * s + j] = *v;
        }
    }
    Ok(values)
}

/// Samples `W` on `n = 0..=n_max` and `φ_j = 2πj/phi_samples`.
pub fn wigner_grid(rho: &DensityMatrix, n_max: usize, phi_samples: usize) -> Result<WignerGrid> {
    wigner_grid_with_offset(rho, n_max, phi_samples, 0.0)
}

/// As [`wigner_grid`] with the uniform grid shifted to `φ_j = offset + 2πj/phi_samples`.
pub fn wigner_grid_with_offset(
    rho: &DensityMatrix,
    n_max: usize,
    phi_samples: usize,
    offset: f64,
) -> Result<WignerGrid> {
    if phi_samples == 0 {
        return Err(Error::InvalidParameter(
            "phi_samples must be at least 1".into(),
        ));
    }
    if !offset.is_finite() {
        return Err(Error::NonFinite("grid offset"));
    }
    let offset = reduce_phase(offset);
    let phis = uniform_phases(phi_samples, offset);
    let values = evaluate_columns(rho, n_max, &phis)?;
    Ok(WignerGrid {
        n_max,
        cutoff: rho.cutoff(),
        phis,
        uniform_offset: Some(offset),
        values,
    })
}

/// Samples `W` at arbitrary phases (for example a single-φ slice).
pub fn wigner_at_phases(rho: &DensityMatrix, n_max: usize, phis: &[f64]) -> Result<WignerGrid> {
    if phis.is_empty() {
        return Err(Error::InvalidParameter("no phases given".into()));
    }
    if phis.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phase"));
    }
    let phis: Vec<f64> = phis.iter().map(|&p| reduce_phase(p)).collect();
    let values = evaluate_columns(rho, n_max, &phis)?;
    Ok(WignerGrid {
        n_max,
        cutoff: rho.cutoff(),
        phis,
        uniform_offset: None,
        values,
    })
}

/// Offset that places `phi0` exactly on a uniform grid of `phi_samples` points.
pub fn anchored_offset(phi0: f64, phi_samples: usize) -> f64 {
    let step = 2.0 * PI / phi_samples as f64;
    let phi0 = reduce_phase(phi0);
    phi0 - (phi0 / step).floor() * step
}

/// Normalization used by the cat closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationPower {
    /// `N_α` to the first power, as the formula is printed.
    AsPrinted = 1,
    /// `N_α²`, as follows from `Q_{m,l} = c_m c_l*`.
    Derived = 2,
}

fn check_alpha_mag(alpha_mag: f64) -> Result<()> {
    if !alpha_mag.is_finite() {
        return Err(Error::NonFinite("amplitude"));
    }
    if alpha_mag < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "closed forms need a nonnegative real amplitude, got {alpha_mag}"
        )));
    }
    Ok(())
}

/// `√P(k)` for a Poisson distribution of mean `α²`, i.e. `e^{−α²/2} α^k/√(k!)`.
fn sqrt_poisson(alpha_mag: f64, k: usize) -> f64 {
    if alpha_mag == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * alpha_mag.ln() - 0.5 * ln_factorial(k) - 0.5 * alpha_mag * alpha_mag).exp()
}

/// Number of series terms after which the neglected tail of the coherent
/// and cat closed forms is below `tol`.
///
/// Both series are bounded termwise by `(4/2π) √P(n) √P(k)` with
/// `√P(n) ≤ 1`, and `√P(k)` decays geometrically with ratio `α/√(k+1)`
/// once `k > α²`.
pub fn series_terms(alpha_mag: f64, tol: f64) -> usize {
    let lambda = alpha_mag * alpha_mag;
    let mut k = 0;
    loop {
        let next = k + 1;
        if next as f64 > lambda + 1.0 {
            let ratio = (lambda / (next + 1) as f64).sqrt();
            let bound = 4.0 / (2.0 * PI) * sqrt_poisson(alpha_mag, next) / (1.0 - ratio);
            if bound < tol {
                return k;
            }
        }
        k = next;
    }
}

/// Closed-form `W(n, φ)` of a coherent state with real amplitude `alpha_mag`,
/// summing the k-series up to `terms` inclusive.
pub fn coherent_wigner_closed(alpha_mag: f64, n: usize, phi: f64, terms: usize) -> Result<f64> {
    check_alpha_mag(alpha_mag)?;
    let sn = sqrt_poisson(alpha_mag, n);
    let sum: f64 = (0..=terms)
        .map(|k| sqrt_poisson(alpha_mag, k) * ((n as f64 - k as f64) * phi).cos())
        .sum();
    Ok(sn * sum / (2.0 * PI))
}

/// Closed-form `W(n, φ)` of the cat state `(|α⟩ + |−α⟩)/N_α` for real `alpha_mag`.
///
/// Only [`NormalizationPower::Derived`] reproduces the direct evaluation;
/// the printed first power is kept to document the discrepancy.
pub fn cat_wigner_closed(
    alpha_mag: f64,
    n: usize,
    phi: f64,
    terms: usize,
    power: NormalizationPower,
) -> Result<f64> {
    check_alpha_mag(alpha_mag)?;
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let norm_sqr = cat_norm_sqr_closed(alpha_mag);
    let norm = match power {
        NormalizationPower::AsPrinted => norm_sqr.sqrt(),
        NormalizationPower::Derived => norm_sqr,
    };
    let sn = 2.0 * sqrt_poisson(alpha_mag, n);
    let sum: f64 = (0..=terms)
        .step_by(2)
        .map(|k| 2.0 * sqrt_poisson(alpha_mag, k) * ((n as f64 - k as f64) * phi).cos())
        .sum();
    Ok(sn * sum / (2.0 * PI * norm))
}

fn phase_offset(phi0: f64, phi: f64) -> f64 {
    reduce_phase(phi) - reduce_phase(phi0)
}

/// `(1/(2(M+1)π)) Σ_{k=0}^{M} cos[(n−k)(φ−φ₀)]`, zero for `n > M`.
pub fn phase_state_wigner_sum(m_top: usize, phi0: f64, n: usize, phi: f64) -> f64 {
    if n > m_top {
        return 0.0;
    }
    let delta = phase_offset(phi0, phi);
    let sum: f64 = (0..=m_top)
        .map(|k| ((n as f64 - k as f64) * delta).cos())
        .sum();
    sum / (2.0 * (m_top + 1) as f64 * PI)
}

/// Closed-form `W(n, φ)` of the truncated phase state,
/// `cos[(M/2−n)Δ] sin[(M+1)Δ/2] csc(Δ/2) / (2(M+1)π)` with `Δ = φ − φ₀`.
///
/// Falls back to [`phase_state_wigner_sum`] at the removable singularity
/// `Δ → 0`. Rows above `M` carry no weight and return zero.
pub fn phase_state_wigner_closed(m_top: usize, phi0: f64, n: usize, phi: f64) -> f64 {
    if n > m_top {
        return 0.0;
    }
    let delta = phase_offset(phi0, phi);
    let half = (0.5 * delta).sin();
    if half.abs() < SINGULARITY_THRESHOLD {
        return phase_state_wigner_sum(m_top, phi0, n, phi);
    }
    let m = m_top as f64;
    let value = ((0.5 * m - n as f64) * delta).cos() * (0.5 * (m + 1.0) * delta).sin() / half;
    value / (2.0 * (m + 1.0) * PI)
}
