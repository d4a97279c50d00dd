//! Numerical tolerances shared across the crate.

/// Maximum Gram-matrix deviation for a set to count as orthonormal.
pub const ORTH: f64 = 1e-9;
/// Residual allowed in `P² = P` and `P† = P`.
pub const PROJ: f64 = 1e-9;
/// Singular values at or below `RANK · σ_max` are treated as zero.
pub const RANK: f64 = 1e-9;
/// Most negative eigenvalue tolerated in a density operator.
pub const PSD: f64 = 1e-10;
/// Trace tolerance for density operators.
pub const TRACE: f64 = 1e-10;
/// Hermiticity tolerance (max-entry of `ρ − ρ†`).
pub const HERM: f64 = 1e-9;
/// Tolerance on the norm of inputs declared to be unit vectors.
pub const UNIT: f64 = 1e-9;
