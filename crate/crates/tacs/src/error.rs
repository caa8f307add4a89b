use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{0}` as a half-integer (expected e.g. `21/2`, `10.5`, `3`)")]
    ParseHalfInt(String),

    #[error("negative angular momentum: 2J = {0}")]
    NegativeJ(i64),

    #[error("matrix is not Hermitian: max asymmetry {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid sector (k={k}, nu_a={nu_a}, nu_b={nu_b}) for J={j}")]
    InvalidSector { k: usize, nu_a: u8, nu_b: u8, j: String },

    #[error("Van Vleck eigenproblem failed to converge for k={0}")]
    EigenFailure(usize),

    #[error("eigenvalue {0} has unexpected imaginary part {1:.3e}")]
    ComplexVanVleck(usize, f64),

    #[error("trailing coefficient b_k is numerically zero (|b_k| = {0:.3e})")]
    DegenerateLeadingCoeff(f64),

    #[error("leading coefficient b_0 below threshold (|b_0| = {0:.3e}); use the zeros route")]
    TinyConstantCoeff(f64),

    #[error("polynomial root finding did not converge after {0} iterations")]
    RootsNotConverged(usize),

    #[error("degenerate Bethe roots: |w_{i} - w_{j}| = {gap:.3e}")]
    DegenerateRoots { i: usize, j: usize, gap: f64 },

    #[error("zero with |Re(w)| = {0:.6} outside (0,1) U (1, {1:.4})")]
    ZeroOutsideIntervals(f64, f64),

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("degeneracy pairing failed at level {index}: |dE| = {gap:.3e}")]
    UnpairedLevel { index: usize, gap: f64 },

    #[error("band {zeta} has {got} points, need at least {need} for a quadratic fit")]
    InsufficientPoints { zeta: usize, got: usize, need: usize },

    #[error("no level with zeta={zeta} in sector {sector} at J={j}")]
    NoSuchLevel { zeta: usize, sector: String, j: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
