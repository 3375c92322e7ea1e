use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong in the exact and numeric engines.
///
/// The `Display` text always starts with the variant name so command-line
/// callers can match on the violated clause.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("NonConvergence: root iteration did not settle after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("NullInput: {0} must be non-null")]
    NullInput(&'static str),

    #[error("NotNonnegative: {0}")]
    NotNonnegative(NegativityWitness),

    #[error(
        "OddCircleMultiplicity: root {root} on the unit circle has multiplicity {multiplicity}"
    )]
    OddCircleMultiplicity {
        root: Complex64,
        multiplicity: usize,
    },

    #[error("RootPairing: root {root} has no reflected partner within tolerance")]
    RootPairing { root: Complex64 },

    #[error("PoleHit: evaluation point {point} is a pole of the Blaschke product")]
    PoleHit { point: Complex64 },

    #[error("NotDivisible: remainder {remainder:e} exceeds tolerance")]
    NotDivisible { remainder: f64 },

    #[error("DegreeExceeded: degree {degree} exceeds model order {n}")]
    DegreeExceeded { degree: usize, n: usize },

    #[error("BandExceeded: band limit {band} exceeds model order {n}")]
    BandExceeded { band: usize, n: usize },

    #[error("NotInV: {0}")]
    NotInV(String),

    #[error("AlreadyExtreme: g is an extreme point; no nontrivial split exists")]
    AlreadyExtreme,

    #[error("NotOnBoundary: zeroth coefficient {value} differs from 1")]
    NotOnBoundary { value: f64 },

    #[error("NotNormalized: zeroth coefficient {value} differs from 1")]
    NotNormalized { value: f64 },

    #[error("NotUnitNorm: H2 norm {norm} differs from 1")]
    NotUnitNorm { norm: f64 },

    #[error("InnerFactorPresent: the lifted symbol product has a nontrivial inner factor")]
    InnerFactorPresent,

    #[error("TooSmall: modulus sample {value:e} at index {index} is below the floor")]
    TooSmall { index: usize, value: f64 },

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),

    #[error("Schema: {0}")]
    Schema(String),

    #[error("InvariantBreach: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// True when the error signals a bug in this crate rather than bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::InvariantBreach(_) | Error::RootPairing { .. })
    }
}

/// Why a trigonometric polynomial failed the nonnegativity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NegativityWitness {
    /// A grid angle with a value below `-tol_nonneg`.
    GridPoint { theta: f64, value: f64 },
    /// A root on the unit circle with odd multiplicity (a sign change).
    OddCircleRoot {
        root: Complex64,
        multiplicity: usize,
    },
}

impl std::fmt::Display for NegativityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NegativityWitness::GridPoint { theta, value } => {
                write!(f, "value {value:e} at theta = {theta}")
            }
            NegativityWitness::OddCircleRoot { root, multiplicity } => {
                write!(f, "circle root {root} of odd multiplicity {multiplicity}")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
