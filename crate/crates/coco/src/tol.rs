//! Default tolerances for the numerical pipeline.
//!
//! All comparisons in the crate are relative to a problem scale noted on
//! each constant; the CLI exposes the first four as flags.

/// Jacobi convergence and Hermiticity gate, relative to the matrix norm.
pub const EIG: f64 = 1e-10;

/// Positive-semidefiniteness slack, relative to max(1, spectral norm).
pub const PSD: f64 = 1e-8;

/// Numeric-rank cutoff, relative to max(1, largest singular value).
pub const RANK: f64 = 1e-8;

/// Allowed distance from the nearest integer for multiplicity traces.
pub const INTEGRALITY: f64 = 1e-6;

/// Residual gate for matrix-unit relations during construction.
pub const UNIT_RESIDUAL: f64 = 1e-8;

/// Absolute gap that separates eigenvalue groups of the unit-spectral-radius
/// probe matrix during joint diagonalization.
pub const EIG_GROUPING: f64 = 1e-7;

/// Relative Frobenius-mass threshold for linking fiber idempotents through
/// off-diagonal blocks.
pub const LINK: f64 = 1e-10;

/// Hard error gate for the Hadamard-closure residual of a constructed basis.
pub const CLOSURE_GATE: f64 = 1e-6;

/// Tolerances threaded through the pipeline; `Default` supplies the
/// constants above.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub eig: f64,
    pub psd: f64,
    pub rank: f64,
    pub integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig: EIG,
            psd: PSD,
            rank: RANK,
            integrality: INTEGRALITY,
        }
    }
}
