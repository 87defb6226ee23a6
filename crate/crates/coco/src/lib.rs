//! Algebraic-combinatorics toolkit for coherent configurations.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`config`] parses and validates a coherent configuration given as a
//!    color matrix over partitioned fibers, computes its intersection
//!    numbers, and tests fiber-commutativity.
//! 2. [`decomp`] decomposes the adjacency algebra of a fiber-commutative
//!    configuration into simple ideals and builds a gauge-fixed basis of
//!    matrix units for each ideal.
//! 3. [`krein`] computes the matrices of Krein parameters with respect to
//!    that basis and applies the positive-semidefiniteness condition and the
//!    absolute bound as feasibility tests.
//! 4. [`gq`] generates small generalized quadrangles, converts them to
//!    two-fiber configurations, and screens parameter pairs (s, t) against
//!    closed-form Krein matrices without building any incidence structure.
//!
//! [`linalg`] supplies the dense complex matrix type and the Jacobi
//! eigensolver everything else relies on; [`report`] shapes results for the
//! `coco` command-line tool.

pub mod config;
pub mod decomp;
pub mod gq;
pub mod krein;
pub mod linalg;
pub mod report;
pub mod tol;

pub use config::{
    fiber_flags, intersection_numbers, parse_json, validate_axioms, CoherentConfiguration,
    IntersectionTensor, ValidationMode, ValidationReport,
};
pub use decomp::{decompose, multiplicities, regauge, verify_units, MatrixUnitBasis};
pub use krein::{
    absolute_bound, feasibility_report, general_krein_check, krein_all, krein_condition,
    structural_checks, FeasibilityReport, KreinTable, TripleCheck, Verdict,
};
pub use linalg::CMatrix;
pub use tol::Tolerances;

/// Errors produced by parsing, validation, decomposition, and the Krein
/// feasibility pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed configuration: {0}")]
    Malformed(String),

    #[error("color {color} straddles blocks ({a0},{a1}) and ({b0},{b1}); every color must lie in a single fiber block")]
    BlockStraddle {
        color: u32,
        a0: usize,
        a1: usize,
        b0: usize,
        b1: usize,
    },

    #[error(
        "fiber {fiber} is not commutative: p({i},{j};{k}) = {p_ij} but p({j},{i};{k}) = {p_ji}"
    )]
    NotFiberCommutative {
        fiber: usize,
        i: u32,
        j: u32,
        k: u32,
        p_ij: u32,
        p_ji: u32,
    },

    #[error("matrix is not Hermitian: max |H - H*| = {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("matrix has dimension zero")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("gauge vector entry {index} has modulus {modulus} (must be unimodular)")]
    NonUnimodular { index: usize, modulus: f64 },

    #[error("matrix-unit construction failed: {0}")]
    UnitConstruction(String),

    #[error("ideal {ideal} has non-integral multiplicity trace {trace}")]
    NonIntegralTrace { ideal: usize, trace: f64 },

    #[error("Hadamard expansion of unit products left residual {residual:.3e} for ideals ({s},{t}); the constructed basis does not close")]
    HadamardClosure { s: usize, t: usize, residual: f64 },

    #[error("input matrix for the general Krein check is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    InputNotPsd { min_eig: f64 },

    #[error("ideals {s} and {t} have disjoint support; no Krein matrix is defined")]
    EmptySupport { s: usize, t: usize },

    #[error("no ideal with index {0}")]
    NoSuchIdeal(usize),

    #[error("generalized quadrangle axiom {axiom} fails: {detail}")]
    GqViolation { axiom: u8, detail: String },

    #[error("unknown generator family '{0}' (expected gq-w2, gq-grid, gq-dualgrid, cyclic, or hamming-2-2)")]
    UnknownFamily(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
