//! Extreme points of the modulus set V for the symbol `z̄^{n+1}` and the
//! procedures built on them.
//!
//! `g ∈ V` is extreme exactly when `ĝ(0) = 1` and the lift `z^n g` has no
//! inner factor. Every certificate here carries the inputs, the residuals it
//! measured and the [`Tolerances`](crate::tol::Tolerances) it applied.

mod baseline;
mod decompose;
mod extreme;
mod feasibility;
mod rigidity;
mod solutions;
mod split;

pub use baseline::{baseline_split, BaselineSplit};
pub use decompose::{decompose_modulus, decompose_modulus_with, Decomposition};
pub use extreme::{is_extreme, is_extreme_with, ExtremeCertificate};
pub use feasibility::{PerturbationOracle, PerturbationSearch, FOUND_THRESHOLD};
pub use rigidity::{rigidity_check, rigidity_check_with, RigidityOutcome, RigidityReport};
pub use solutions::{enumerate_solutions, SolutionSet};
pub use split::{
    split_nonextreme, split_nonextreme_with, SplitCertificate, SplitChecks, LAMBDA_CONVENTION,
    REPRESENTATIVE_CONVENTION,
};
