use std::f64::consts::TAU;

/// Reduces an angle in radians to `[0, 2π)`.
pub fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid rounds up to TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `samples` equally spaced phases `offset + 2πj/samples`, each reduced to `[0, 2π)`.
pub fn uniform_phases(samples: usize, offset: f64) -> Vec<f64> {
    let step = TAU / samples as f64;
    (0..samples)
        .map(|j| reduce_phase(offset + step * j as f64))
        .collect()
}

/// `r·e^{iθ}`.
///
/// sin and cos come from `libm` rather than the platform math library: an
/// optimized build may fuse adjacent calls into `sincos`, which can round
/// differently in the last place, and output files must not depend on the
/// build profile.
pub(crate) fn polar(r: f64, theta: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(r * libm::cos(theta), r * libm::sin(theta))
}

/// Table of `e^{ikφ}` for `k = 0..=len-1`.
///
/// Every entry is computed directly from `k·φ` so that tables built for the
/// same phase are bitwise identical regardless of who builds them.
pub(crate) fn twiddles(phi: f64, len: usize) -> Vec<num_complex::Complex64> {
    (0..len).map(|k| polar(1.0, k as f64 * phi)).collect()
}
