use thiserror::Error;

use crate::varset::VarSet;

/// Errors raised by the library. Every variant is a contract violation on
/// the caller's side; arithmetic itself is exact and cannot fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable set mismatch: {left} vs {right}")]
    VarSetMismatch { left: VarSet, right: VarSet },

    #[error("variable index {index} out of range for {vars}")]
    VarOutOfRange { index: usize, vars: VarSet },

    #[error("operation requires {expected}, got {got}")]
    WrongVarSet { expected: &'static str, got: VarSet },

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("composition is ill-defined: component {component} has a nonzero constant term and the outer series is truncated")]
    IllDefinedComposition { component: usize },

    #[error(
        "insufficient truncation: need order {required}, input is only known to order {available}"
    )]
    InsufficientTruncation { required: u32, available: u32 },

    #[error("map must have order >= 2, found component {component} of order {order}")]
    OrderTooLow { component: usize, order: u32 },

    #[error("expected a tuple of {expected} components, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("input must be an exact polynomial, got a truncated series")]
    NotExact,

    #[error("series input to the exponential operator lacks the order profile: xi-degree {xi_degree} slice has z-order {z_order} < {required}")]
    MissingOrderProfile {
        xi_degree: u32,
        z_order: u32,
        required: u32,
    },

    #[error("map is not nilpotent: det(I - tJH) = {certificate}; the deformation series for N_t needs JH nilpotent")]
    NotNilpotent { certificate: String },

    #[error("term ceiling exceeded: {terms} terms > {ceiling} at m = {m}")]
    TermCeiling {
        terms: usize,
        ceiling: usize,
        m: u32,
    },

    #[error("window mismatch at {monomial}: {left} != {right}")]
    WindowMismatch {
        monomial: String,
        left: String,
        right: String,
    },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("invalid corpus descriptor: {0}")]
    Corpus(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
