//! Number-phase Wigner function for single-mode bosonic states.
//!
//! States live in a truncated Fock basis `|0⟩..|N⟩`. The quasiprobability
//! `W(n, φ)` is defined over the discrete photon number `n` and a continuous
//! phase `φ ∈ [0, 2π)`; summing it over `n` gives the phase distribution and
//! integrating it over `φ` gives the photon-number distribution.
//!
//! Module map:
//!
//! * [`fock`]: state preparation and density matrices.
//! * [`wigner`]: the direct evaluator, grid sampling and closed forms.
//! * [`marginals`]: photon-number and phase marginals.
//! * [`oracle`]: an independent route through the characteristic function
//!   and a brute-force marginal harness.
//! * [`report`] and [`emit`]: validation reports and on-disk formats.
//!
//! Phase orientation: `W(n, φ) = (1/2π) Re Σ_m Q_{n,m} e^{i(m−n)φ}`, so a
//! coherent state with `arg α = χ` and the truncated phase state built from
//! `e^{imφ₀}` peak at `φ = χ` and `φ = φ₀` respectively.

pub mod emit;
pub mod error;
pub mod fock;
pub mod marginals;
pub mod oracle;
pub mod report;
pub mod wigner;

mod phase;

pub use error::{Error, Result};
pub use fock::{ComplexAmplitude, DensityMatrix, PureState, DEFAULT_TAIL_TOL};
pub use phase::{reduce_phase, uniform_phases};
pub use report::{Check, ValidationReport};
pub use wigner::{WignerGrid, WignerPoint};
