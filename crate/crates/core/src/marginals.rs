//! Photon-number and phase marginals.
//!
//! Integrating a row of `W` over `φ` gives `Q_{n,n}`; summing a column over
//! `n` gives `P(φ) = (1/2π) Σ_n Σ_m Q_{n,m} e^{i(m−n)φ}`. Grid marginals use
//! the uniform trapezoid rule on the periodic domain, which integrates
//! `e^{ijφ}` exactly for `0 < |j| < phi_samples`; the row of `W` contains
//! frequencies up to `N`, so grids with `phi_samples ≥ 2N + 2` reproduce
//! the analytic marginal up to rounding.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::phase::{polar, reduce_phase, twiddles, uniform_phases};
use crate::wigner::{real_part, WignerGrid, SINGULARITY_THRESHOLD};

pub const DEFAULT_PHASE_SAMPLES: usize = 512;

/// Minimum number of uniform samples for which the grid marginals are exact.
pub fn exact_phi_samples(cutoff: usize) -> usize {
    2 * cutoff + 2
}

/// `P(n)` for `n = 0..len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution {
    pub p: Vec<f64>,
}

impl PhotonDistribution {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.p.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// Largest absolute entrywise difference; missing entries count as zero.
    pub fn max_deviation(&self, other: &PhotonDistribution) -> f64 {
        let len = self.p.len().max(other.p.len());
        (0..len)
            .map(|n| {
                let a = self.p.get(n).copied().unwrap_or(0.0);
                let b = other.p.get(n).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Photon marginal recovered from a grid, with the quadrature status.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPhotonMarginal {
    pub distribution: PhotonDistribution,
    /// Set when `phi_samples` is below [`exact_phi_samples`] of the grid's cutoff.
    pub warning: Option<String>,
}

/// `P(φ_j)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDistribution {
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
}

impl PhaseDistribution {
    pub fn phi_samples(&self) -> usize {
        self.values.len()
    }

    /// Uniform trapezoid integral over `[0, 2π)`.
    pub fn integral(&self) -> f64 {
        TAU / self.values.len() as f64 * self.values.iter().sum::<f64>()
    }
}

/// `P(n) = Re Q_{n,n}`.
pub fn photon_marginal_analytic(rho: &DensityMatrix) -> PhotonDistribution {
    PhotonDistribution { p: rho.diagonal() }
}

/// `P(n) = (2π/S) Σ_j W(n, φ_j)` from a uniform grid.
pub fn photon_marginal_from_grid(grid: &WignerGrid) -> Result<GridPhotonMarginal> {
    if !grid.is_uniform() {
        return Err(Error::InvalidParameter(
            "photon marginal needs a uniform phase grid".into(),
        ));
    }
    let samples = grid.phi_samples();
    let weight = TAU / samples as f64;
    let p = (0..=grid.n_max())
        .map(|n| weight * grid.row(n).iter().sum::<f64>())
        .collect();
    let required = exact_phi_samples(grid.cutoff());
    let warning = (samples < required).then(|| {
        format!(
            "{samples} phase samples is below the exactness bound {required} for cutoff {}",
            grid.cutoff()
        )
    });
    Ok(GridPhotonMarginal {
        distribution: PhotonDistribution { p },
        warning,
    })
}

fn phase_double_sum(rho: &DensityMatrix, tw: &[Complex64]) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for n in 0..rho.dim() {
        for (m, q) in rho.row(n).iter().enumerate() {
            let t = if m >= n { tw[m - n] } else { tw[n - m].conj() };
            z += q * t;
        }
    }
    z / TAU
}

/// Complex value of `(1/2π) Σ_n Σ_m Q_{n,m} e^{i(m−n)φ}`.
pub fn phase_marginal_complex(rho: &DensityMatrix, phi: f64) -> Complex64 {
    phase_double_sum(rho, &twiddles(reduce_phase(phi), rho.dim()))
}

/// Phase distribution `P(φ)` of `ρ`.
///
/// The double sum is real for Hermitian `ρ`; only the real part is returned.
pub fn phase_marginal(rho: &DensityMatrix, phi: f64) -> f64 {
    phase_marginal_complex(rho, phi).re
}

/// [`phase_marginal`] with the imaginary residue checked.
pub fn phase_marginal_checked(rho: &DensityMatrix, phi: f64) -> Result<f64> {
    real_part(phase_marginal_complex(rho, phi), "phase marginal")
}

/// `P(φ)` on `φ_j = offset + 2πj/phi_samples`.
pub fn phase_distribution(
    rho: &DensityMatrix,
    phi_samples: usize,
    offset: f64,
) -> Result<PhaseDistribution> {
    if phi_samples == 0 {
        return Err(Error::InvalidParameter(
            "phi_samples must be at least 1".into(),
        ));
    }
    let phis = uniform_phases(phi_samples, offset);
    let values = phis
        .par_iter()
        .map(|&phi| phase_marginal_checked(rho, phi))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PhaseDistribution { phis, values })
}

/// Printed Fejér form of the truncated phase state's phase distribution,
/// `sin²[(M+1)Δ/2] csc²(Δ/2) / (2(M+1)π)` with `Δ = φ − φ₀`.
///
/// Near `Δ = 0` it evaluates `|Σ_{k≤M} e^{ikΔ}|² / (2(M+1)π)` instead,
/// which tends to `(M+1)/2π`.
pub fn phase_state_phase_dist_closed(m_top: usize, phi0: f64, phi: f64) -> f64 {
    let delta = reduce_phase(phi) - reduce_phase(phi0);
    let scale = 2.0 * (m_top + 1) as f64 * PI;
    let half = (0.5 * delta).sin();
    if half.abs() < SINGULARITY_THRESHOLD {
        let z: Complex64 = (0..=m_top).map(|k| polar(1.0, k as f64 * delta)).sum();
        return z.norm_sqr() / scale;
    }
    let s = (0.5 * (m_top + 1) as f64 * delta).sin();
    s * s / (half * half) / scale
}
