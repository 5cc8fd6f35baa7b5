use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock index {index} exceeds cutoff {cutoff}")]
    CutoffExceeded { index: usize, cutoff: usize },

    #[error(
        "tail mass {tail_mass:.3e} above the cutoff exceeds tolerance {tail_tol:.3e}; \
         use a cutoff of at least {suggested_cutoff}"
    )]
    TailMassTooLarge {
        tail_mass: f64,
        tail_tol: f64,
        suggested_cutoff: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian: |Q[{row},{col}] - conj(Q[{col},{row}])| = {deviation:.3e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("cutoff mismatch: expected {expected}, found {found}")]
    CutoffMismatch { expected: usize, found: usize },

    #[error("negative mixture weight {0}")]
    NegativeWeight(f64),

    #[error("mixture weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),

    #[error("imaginary residue {residue:.3e} exceeds {tolerance:.0e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("{samples} samples is below the exactness bound of {required}")]
    Undersampled { samples: usize, required: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
