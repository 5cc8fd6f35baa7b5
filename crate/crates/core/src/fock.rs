//! States and density matrices in a truncated Fock basis.
//!
//! Every constructor works on the finite basis `|0⟩..|N⟩`. Coherent and cat
//! states are rejected when the probability mass they lose above `N` exceeds
//! the configured tail tolerance; the `*_auto` variants pick the smallest
//! adequate cutoff instead.

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial as statrs_ln_factorial;

use crate::error::{Error, Result};
use crate::phase::polar;

/// Complex scalar used for Fock amplitudes and matrix entries.
pub type ComplexAmplitude = Complex64;

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Largest cutoff the auto-cutoff search will try.
pub const MAX_AUTO_CUTOFF: usize = 1 << 16;

/// Tolerance for accepting user-supplied matrices as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const DIAGONAL_FLOOR: f64 = -1e-14;

pub(crate) fn ln_factorial(m: usize) -> f64 {
    statrs_ln_factorial(m as u64)
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if tail_tol.is_finite() && tail_tol > 0.0 && tail_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tail tolerance must lie in (0, 1), got {tail_tol}"
        )))
    }
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if alpha.re.is_finite() && alpha.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("coherent amplitude"))
    }
}

/// A pure state `Σ_m c_m |m⟩` truncated at `m = cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl PureState {
    /// Builds a state from raw amplitudes, rescaling them to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("empty amplitude vector".into()));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let scale = norm_sqr.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|c| c * scale).collect();
        Ok(Self {
            amplitudes,
            tail_mass: 0.0,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude `c_m`; zero above the cutoff.
    pub fn amplitude(&self, m: usize) -> Complex64 {
        self.amplitudes.get(m).copied().unwrap_or_default()
    }

    /// Probability mass of the untruncated state lying above the cutoff.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(m, c)| m as f64 * c.norm_sqr())
            .sum()
    }
}

/// `ln P(m)` for a Poisson distribution with the given mean (> 0).
fn poisson_ln_pmf(m: usize, mean: f64) -> f64 {
    m as f64 * mean.ln() - mean - ln_factorial(m)
}

/// `Σ_{m > cutoff} P(m)` for a Poisson distribution, optionally restricted to even `m`.
fn poisson_upper_tail(mean: f64, cutoff: usize, even_only: bool) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut m = cutoff + 1;
    loop {
        let term = poisson_ln_pmf(m, mean).exp();
        if !even_only || m.is_multiple_of(2) {
            sum += term;
        }
        if m as f64 > mean {
            // terms now decay at least geometrically with ratio mean/(m+1)
            let ratio = mean / (m + 1) as f64;
            let remainder = term * ratio / (1.0 - ratio);
            if term == 0.0 || remainder <= sum * 1e-17 {
                break;
            }
        }
        m += 1;
    }
    sum
}

/// Probability mass of `|α⟩` above `cutoff`: `1 − e^{−|α|²} Σ_{m≤N} |α|^{2m}/m!`.
///
/// Summed directly over the tail so that tiny values keep full relative precision.
pub fn coherent_tail_mass(alpha_mag: f64, cutoff: usize) -> f64 {
    poisson_upper_tail(alpha_mag * alpha_mag, cutoff, false)
}

/// `N_α² = 2(1 + e^{−2|α|²})`, the squared norm of `|α⟩ + |−α⟩`.
pub fn cat_norm_sqr_closed(alpha_mag: f64) -> f64 {
    2.0 * (1.0 + (-2.0 * alpha_mag * alpha_mag).exp())
}

/// Probability mass of the normalized cat state above `cutoff`.
pub fn cat_tail_mass(alpha_mag: f64, cutoff: usize) -> f64 {
    let mean = alpha_mag * alpha_mag;
    4.0 * poisson_upper_tail(mean, cutoff, true) / cat_norm_sqr_closed(alpha_mag)
}

fn min_cutoff(tail: impl Fn(usize) -> f64, tail_tol: f64) -> Result<usize> {
    (0..=MAX_AUTO_CUTOFF)
        .find(|&n| tail(n) < tail_tol)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "no cutoff up to {MAX_AUTO_CUTOFF} reaches tail tolerance {tail_tol:e}"
            ))
        })
}

/// Smallest cutoff for which the coherent-state tail mass is below `tail_tol`.
pub fn coherent_min_cutoff(alpha_mag: f64, tail_tol: f64) -> Result<usize> {
    min_cutoff(|n| coherent_tail_mass(alpha_mag, n), tail_tol)
}

/// Smallest cutoff for which the cat-state tail mass is below `tail_tol`.
pub fn cat_min_cutoff(alpha_mag: f64, tail_tol: f64) -> Result<usize> {
    min_cutoff(|n| cat_tail_mass(alpha_mag, n), tail_tol)
}

/// `e^{−|α|²/2} α^m / √(m!)`, evaluated as a modulus in log space times a separate phase.
pub fn coherent_amplitude(alpha: Complex64, m: usize) -> Complex64 {
    let r = alpha.norm();
    if r == 0.0 {
        return if m == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let ln_modulus = m as f64 * r.ln() - 0.5 * ln_factorial(m) - 0.5 * r * r;
    polar(ln_modulus.exp(), m as f64 * alpha.arg())
}

/// `|M⟩`.
pub fn make_number_state(m: usize, cutoff: usize) -> Result<PureState> {
    if m > cutoff {
        return Err(Error::CutoffExceeded { index: m, cutoff });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    amplitudes[m] = Complex64::new(1.0, 0.0);
    Ok(PureState {
        amplitudes,
        tail_mass: 0.0,
    })
}

/// Coherent state `|α⟩` truncated at `cutoff`, without renormalization.
pub fn make_coherent_state(alpha: Complex64, cutoff: usize, tail_tol: f64) -> Result<PureState> {
    check_alpha(alpha)?;
    check_tail_tol(tail_tol)?;
    let tail_mass = coherent_tail_mass(alpha.norm(), cutoff);
    if tail_mass > tail_tol {
        return Err(Error::TailMassTooLarge {
            tail_mass,
            tail_tol,
            suggested_cutoff: coherent_min_cutoff(alpha.norm(), tail_tol)?,
        });
    }
    let amplitudes = (0..=cutoff).map(|m| coherent_amplitude(alpha, m)).collect();
    Ok(PureState {
        amplitudes,
        tail_mass,
    })
}

/// Coherent state with the smallest cutoff satisfying `tail_tol`.
pub fn make_coherent_state_auto(alpha: Complex64, tail_tol: f64) -> Result<PureState> {
    check_alpha(alpha)?;
    check_tail_tol(tail_tol)?;
    make_coherent_state(
        alpha,
        coherent_min_cutoff(alpha.norm(), tail_tol)?,
        tail_tol,
    )
}

fn cat_unnormalized(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    (0..=cutoff)
        .map(|m| {
            if m % 2 == 0 {
                coherent_amplitude(alpha, m) * 2.0
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Squared norm of the truncated vector `|α⟩ + |−α⟩`.
///
/// Tends to [`cat_norm_sqr_closed`] as the cutoff grows.
pub fn cat_norm_sqr_truncated(alpha: Complex64, cutoff: usize) -> f64 {
    cat_unnormalized(alpha, cutoff)
        .iter()
        .map(|c| c.norm_sqr())
        .sum()
}

/// Schrödinger cat `(|α⟩ + |−α⟩)/N_α`, renormalized within the truncated basis.
pub fn make_cat_state(alpha: Complex64, cutoff: usize, tail_tol: f64) -> Result<PureState> {
    check_alpha(alpha)?;
    check_tail_tol(tail_tol)?;
    let tail_mass = cat_tail_mass(alpha.norm(), cutoff);
    if tail_mass > tail_tol {
        return Err(Error::TailMassTooLarge {
            tail_mass,
            tail_tol,
            suggested_cutoff: cat_min_cutoff(alpha.norm(), tail_tol)?,
        });
    }
    let mut amplitudes = cat_unnormalized(alpha, cutoff);
    let scale = cat_norm_sqr_truncated(alpha, cutoff).sqrt().recip();
    for c in &mut amplitudes {
        *c *= scale;
    }
    Ok(PureState {
        amplitudes,
        tail_mass,
    })
}

/// Cat state with the smallest cutoff satisfying `tail_tol`.
pub fn make_cat_state_auto(alpha: Complex64, tail_tol: f64) -> Result<PureState> {
    check_alpha(alpha)?;
    check_tail_tol(tail_tol)?;
    make_cat_state(alpha, cat_min_cutoff(alpha.norm(), tail_tol)?, tail_tol)
}

/// Truncated phase state `Σ_{m≤M} e^{imφ₀}|m⟩ / √(M+1)`.
pub fn make_phase_state(m: usize, phi0: f64, cutoff: usize) -> Result<PureState> {
    if m > cutoff {
        return Err(Error::CutoffExceeded { index: m, cutoff });
    }
    if !phi0.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    let phi0 = crate::reduce_phase(phi0);
    let modulus = ((m + 1) as f64).sqrt().recip();
    let amplitudes = (0..=cutoff)
        .map(|k| {
            if k <= m {
                polar(modulus, k as f64 * phi0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(PureState {
        amplitudes,
        tail_mass: 0.0,
    })
}

/// Hermitian matrix `ρ = Σ Q_{m,l} |m⟩⟨l|` on the truncated basis.
///
/// Only the upper triangle is ever computed; the lower triangle is its exact
/// conjugate mirror and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for m in 0..dim {
            entries[m * dim + m] = Complex64::new(upper(m, m).re, 0.0);
            for l in m + 1..dim {
                let q = upper(m, l);
                entries[m * dim + l] = q;
                entries[l * dim + m] = q.conj();
            }
        }
        Self { dim, entries }
    }

    /// `Q_{m,l} = c_m conj(c_l)`.
    pub fn from_pure(state: &PureState) -> Self {
        let c = state.amplitudes();
        Self::from_upper(c.len(), |m, l| c[m] * c[l].conj())
    }

    /// Validates a user-supplied matrix and stores its Hermitian part.
    ///
    /// Rejects non-square, non-finite, or non-Hermitian input (beyond
    /// [`HERMITIAN_TOL`]), negative diagonal entries and traces outside
    /// `[1 − tail_tol, 1 + 1e−12]`.
    pub fn from_entries(rows: &[Vec<Complex64>], tail_tol: f64) -> Result<Self> {
        check_tail_tol(tail_tol)?;
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidDensity("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidDensity(format!(
                "row {bad} has {} entries, expected {dim}",
                rows[bad].len()
            )));
        }
        if rows
            .iter()
            .flatten()
            .any(|q| !q.re.is_finite() || !q.im.is_finite())
        {
            return Err(Error::NonFinite("density matrix"));
        }
        #[allow(clippy::needless_range_loop)]
        for m in 0..dim {
            for l in m..dim {
                let deviation = (rows[m][l] - rows[l][m].conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(Error::NotHermitian {
                        row: m,
                        col: l,
                        deviation,
                    });
                }
            }
        }
        let rho = Self::from_upper(dim, |m, l| (rows[m][l] + rows[l][m].conj()) * 0.5);
        if let Some(n) = (0..dim).find(|&n| rho.get(n, n).re < DIAGONAL_FLOOR) {
            return Err(Error::InvalidDensity(format!(
                "negative population {} at n = {n}",
                rho.get(n, n).re
            )));
        }
        let trace = rho.trace();
        if !(1.0 - tail_tol..=1.0 + 1e-12).contains(&trace) {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        Ok(rho)
    }

    /// Convex combination `Σ w_i ρ_i`.
    pub fn mix(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let dim = first.dim;
        let mut total = 0.0;
        for (w, rho) in components {
            if !w.is_finite() {
                return Err(Error::NonFinite("mixture weight"));
            }
            if *w < 0.0 {
                return Err(Error::NegativeWeight(*w));
            }
            if rho.dim != dim {
                return Err(Error::CutoffMismatch {
                    expected: dim - 1,
                    found: rho.dim - 1,
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::WeightsNotNormalized(total));
        }
        Ok(Self::from_upper(dim, |m, l| {
            components
                .iter()
                .map(|(w, rho)| rho.entries[m * dim + l] * *w)
                .sum()
        }))
    }

    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Q_{m,l}`; zero outside the truncated basis.
    pub fn get(&self, m: usize, l: usize) -> Complex64 {
        if m < self.dim && l < self.dim {
            self.entries[m * self.dim + l]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn row(&self, m: usize) -> &[Complex64] {
        &self.entries[m * self.dim..(m + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|n| self.entries[n * self.dim + n].re)
            .sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|n| self.entries[n * self.dim + n].re)
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim)
            .all(|m| (0..self.dim).all(|l| m == l || self.get(m, l) == Complex64::new(0.0, 0.0)))
    }
}

/// `ρ = |ψ⟩⟨ψ|`.
pub fn density_from_pure(state: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(state)
}

pub fn mix(components: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
    DensityMatrix::mix(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// ln(m!) by plain summation, independent of statrs.
    fn ln_fact_sum(m: usize) -> f64 {
        (2..=m).map(|k| (k as f64).ln()).sum()
    }

    fn fact(m: usize) -> f64 {
        (1..=m).map(|k| k as f64).product()
    }

    #[test]
    fn number_states() {
        let vac = make_number_state(0, 8).unwrap();
        assert_eq!(vac.amplitudes()[0], c(1.0, 0.0));
        assert!(vac.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
        assert_eq!(vac.tail_mass(), 0.0);

        let three = make_number_state(3, 8).unwrap();
        for (m, a) in three.amplitudes().iter().enumerate() {
            assert_eq!(*a, if m == 3 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        }

        assert!(matches!(
            make_number_state(9, 8),
            Err(Error::CutoffExceeded {
                index: 9,
                cutoff: 8
            })
        ));
    }

    #[test]
    fn coherent_vacuum() {
        let s = make_coherent_state(c(0.0, 0.0), 8, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.tail_mass(), 0.0);
    }

    #[test]
    fn coherent_alpha_four_poisson_weight() {
        let s = make_coherent_state(c(4.0, 0.0), 64, DEFAULT_TAIL_TOL).unwrap();
        let expected = (16.0 * 16f64.ln() - 16.0 - ln_fact_sum(16)).exp();
        let p16 = s.amplitudes()[16].norm_sqr();
        assert!((p16 - expected).abs() < 1e-13 * expected);
        // 40-digit reference value
        assert!((expected - 0.099_217_531_622_155_82).abs() < 1e-15);
        assert!(s.tail_mass() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn coherent_cutoff_too_small() {
        let err = make_coherent_state(c(4.0, 0.0), 10, DEFAULT_TAIL_TOL).unwrap_err();
        let Error::TailMassTooLarge {
            tail_mass,
            suggested_cutoff,
            ..
        } = err
        else {
            panic!("unexpected error {err:?}");
        };
        // brute-force Poisson(16) tail above 10
        let head: f64 = (0..=10)
            .map(|m| (m as f64 * 16f64.ln() - 16.0 - ln_fact_sum(m)).exp())
            .sum();
        assert!((tail_mass - (1.0 - head)).abs() < 1e-12);
        assert!(tail_mass > 0.9);
        assert!(coherent_tail_mass(4.0, suggested_cutoff) < DEFAULT_TAIL_TOL);
        assert!(coherent_tail_mass(4.0, suggested_cutoff - 1) >= DEFAULT_TAIL_TOL);
    }

    #[test]
    fn coherent_tail_matches_complement_when_representable() {
        // for moderate tails 1 - head is accurate enough to cross-check
        for (alpha, cutoff) in [(1.0, 3), (2.0, 6), (3.0, 12), (4.0, 25)] {
            let lambda: f64 = alpha * alpha;
            let head: f64 = (0..=cutoff)
                .map(|m| (-lambda).exp() * lambda.powi(m as i32) / fact(m))
                .sum();
            let tail = coherent_tail_mass(alpha, cutoff);
            assert!((tail - (1.0 - head)).abs() < 1e-14, "{alpha} {cutoff}");
        }
    }

    #[test]
    fn log_space_matches_naive() {
        for &(re, im) in &[
            (0.3, 0.0),
            (1.0, -0.5),
            (-2.5, 1.5),
            (5.0, 0.0),
            (0.0, -4.0),
        ] {
            let alpha = c(re, im);
            for m in 0..=20 {
                let naive = (-alpha.norm_sqr() / 2.0).exp() * alpha.powi(m as i32) / fact(m).sqrt();
                let got = coherent_amplitude(alpha, m);
                let scale = naive.norm();
                assert!((got - naive).norm() <= 1e-12 * scale, "α={alpha} m={m}");
            }
        }
    }

    #[test]
    fn auto_cutoff_respects_tolerance() {
        let s = make_coherent_state_auto(c(4.0, 0.0), 1e-10).unwrap();
        assert!(s.tail_mass() < 1e-10);
        assert!(make_coherent_state(c(4.0, 0.0), s.cutoff() - 1, 1e-10).is_err());
        let cat = make_cat_state_auto(c(0.0, 2.0), 1e-12).unwrap();
        assert!(cat.tail_mass() < 1e-12);
    }

    #[test]
    fn cat_vacuum_limit() {
        let s = make_cat_state(c(0.0, 0.0), 4, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
    }

    #[test]
    fn cat_parity() {
        let s = make_cat_state(c(4.0, 0.0), 64, DEFAULT_TAIL_TOL).unwrap();
        for (m, a) in s.amplitudes().iter().enumerate() {
            if m % 2 == 1 {
                assert_eq!(*a, c(0.0, 0.0));
            }
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cat_mean_photon_number() {
        let alpha: f64 = 2.0;
        let s = make_cat_state(c(alpha, 0.0), 40, DEFAULT_TAIL_TOL).unwrap();
        // brute-force sums over the even Poisson series
        let lambda = alpha * alpha;
        let (mut num, mut den) = (0.0, 0.0);
        for m in (0..=200).step_by(2) {
            let p = (m as f64 * lambda.ln() - lambda - ln_fact_sum(m)).exp();
            num += m as f64 * p;
            den += p;
        }
        let expected = num / den;
        assert!((s.mean_photon_number() - expected).abs() < 1e-12);
        // the even series gives |α|² tanh|α|²
        assert!((expected - lambda * lambda.tanh()).abs() < 1e-12);
    }

    #[test]
    fn cat_normalization_matches_closed_form() {
        for alpha in [0.5, 1.0, 2.0, 3.5, 4.0] {
            let cutoff = cat_min_cutoff(alpha, 1e-13).unwrap();
            let numeric = cat_norm_sqr_truncated(c(alpha, 0.0), cutoff);
            let closed = cat_norm_sqr_closed(alpha);
            assert!(((numeric - closed) / closed).abs() < 1e-10, "α={alpha}");
        }
    }

    #[test]
    fn phase_states() {
        let vac = make_phase_state(0, 2.3, 4).unwrap();
        assert_eq!(vac.amplitudes()[0], c(1.0, 0.0));
        assert!(vac.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));

        let s = make_phase_state(1, PI, 4).unwrap();
        let h = 0.5f64.sqrt();
        assert!((s.amplitudes()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(-h, 0.0)).norm() < 1e-15);
        assert!(s.amplitudes()[2..].iter().all(|a| *a == c(0.0, 0.0)));

        let fig3 = make_phase_state(20, 0.7, 32).unwrap();
        assert!((fig3.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(
            (fig3.amplitudes()[5] - Complex64::from_polar(21f64.sqrt().recip(), 3.5)).norm()
                < 1e-15
        );

        assert!(make_phase_state(5, 0.0, 4).is_err());
    }

    #[test]
    fn density_from_pure_entries() {
        let rho = density_from_pure(&make_number_state(3, 6).unwrap());
        for m in 0..=6 {
            for l in 0..=6 {
                let expected = if m == 3 && l == 3 { 1.0 } else { 0.0 };
                assert_eq!(rho.get(m, l), c(expected, 0.0));
            }
        }

        let rho = density_from_pure(&make_phase_state(1, 0.0, 1).unwrap());
        for m in 0..2 {
            for l in 0..2 {
                assert!((rho.get(m, l) - c(0.5, 0.0)).norm() < 1e-15);
            }
        }

        let rho =
            density_from_pure(&make_coherent_state(c(1.0, 0.0), 16, DEFAULT_TAIL_TOL).unwrap());
        assert!((rho.get(0, 1) - c((-1f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn density_is_hermitian_and_rank_one() {
        let s = make_coherent_state(c(1.2, -0.7), 24, DEFAULT_TAIL_TOL).unwrap();
        let rho = density_from_pure(&s);
        for m in 0..rho.dim() {
            assert_eq!(rho.get(m, m).im, 0.0);
            for l in 0..rho.dim() {
                assert_eq!(rho.get(m, l), rho.get(l, m).conj());
            }
        }
        for m in 0..8 {
            for l in 0..8 {
                for mp in 0..8 {
                    for lp in 0..8 {
                        let minor =
                            rho.get(m, l) * rho.get(mp, lp) - rho.get(m, lp) * rho.get(mp, l);
                        assert!(minor.norm() < 1e-12);
                    }
                }
            }
        }
        assert!((rho.trace() - s.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn mixtures() {
        let r0 = density_from_pure(&make_number_state(0, 4).unwrap());
        let r1 = density_from_pure(&make_number_state(1, 4).unwrap());
        let r2 = density_from_pure(&make_number_state(2, 4).unwrap());

        assert_eq!(mix(&[(1.0, &r1)]).unwrap(), r1);

        let m = mix(&[(0.5, &r0), (0.5, &r1)]).unwrap();
        assert_eq!(m.diagonal(), vec![0.5, 0.5, 0.0, 0.0, 0.0]);
        assert!(m.is_diagonal());

        let m = mix(&[(0.3, &r0), (0.7, &r2)]).unwrap();
        assert_eq!(m.diagonal(), vec![0.3, 0.0, 0.7, 0.0, 0.0]);

        let big = density_from_pure(&make_number_state(0, 5).unwrap());
        assert!(matches!(
            mix(&[(0.5, &r0), (0.5, &big)]),
            Err(Error::CutoffMismatch { .. })
        ));
        assert!(matches!(
            mix(&[(1.5, &r0), (-0.5, &r1)]),
            Err(Error::NegativeWeight(_))
        ));
        assert!(matches!(
            mix(&[(0.5, &r0), (0.4, &r1)]),
            Err(Error::WeightsNotNormalized(_))
        ));
    }

    #[test]
    fn from_entries_validation() {
        let ok = vec![
            vec![c(0.5, 0.0), c(0.1, 0.2)],
            vec![c(0.1, -0.2), c(0.5, 0.0)],
        ];
        let rho = DensityMatrix::from_entries(&ok, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(rho.get(1, 0), c(0.1, -0.2));

        let skew = vec![
            vec![c(0.5, 0.0), c(0.1, 0.2)],
            vec![c(0.1, 0.2), c(0.5, 0.0)],
        ];
        assert!(matches!(
            DensityMatrix::from_entries(&skew, DEFAULT_TAIL_TOL),
            Err(Error::NotHermitian { row: 0, col: 1, .. })
        ));

        let bad_trace = vec![
            vec![c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.4, 0.0)],
        ];
        assert!(DensityMatrix::from_entries(&bad_trace, DEFAULT_TAIL_TOL).is_err());

        let negative = vec![
            vec![c(1.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-0.5, 0.0)],
        ];
        assert!(DensityMatrix::from_entries(&negative, DEFAULT_TAIL_TOL).is_err());

        let ragged = vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(DensityMatrix::from_entries(&ragged, DEFAULT_TAIL_TOL).is_err());
    }

    #[test]
    fn from_amplitudes_normalizes() {
        let s = PureState::from_amplitudes(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.amplitudes()[1] - c(0.0, 0.8)).norm() < 1e-15);
        assert!(PureState::from_amplitudes(vec![]).is_err());
        assert!(PureState::from_amplitudes(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(PureState::from_amplitudes(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn non_finite_alpha_rejected() {
        assert!(make_coherent_state(c(f64::INFINITY, 0.0), 8, DEFAULT_TAIL_TOL).is_err());
        assert!(make_cat_state(c(f64::NAN, 0.0), 8, DEFAULT_TAIL_TOL).is_err());
    }
}
