//! Tolerances shared by the exact and numeric engines.
//!
//! Algorithmic thresholds (root finding, circle band, pairing) are fixed
//! constants. The certificate thresholds live in [`Tolerances`] so callers
//! can tighten or relax them; every certificate echoes the set it used.

use serde::{Deserialize, Serialize};

/// Per-root backward error target for the simultaneous root iteration.
pub const TOL_ROOT: f64 = 1e-12;
/// Iteration cap for the simultaneous root iteration.
pub const MAX_ITER: usize = 200;
/// Half-width of the band around |z| = 1 classified as on the circle.
pub const EPS_CIRCLE: f64 = 1e-9;
/// Relative distance allowed between a root and the reflection of its partner.
pub const TOL_PAIRING: f64 = 1e-6;
/// Recomposition error allowed for a root set, relative to the largest coefficient.
pub const TOL_RECOMPOSE: f64 = 1e-8;
/// Minimum grid size for the nonnegativity scan.
pub const N_CHECK_MIN: usize = 4096;
/// Relative slack of the grid nonnegativity scan (scaled by the coefficient l1 norm).
pub const TOL_NONNEG_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Factorization and recomposition residuals, relative to the input scale.
    pub factor: f64,
    /// Remainder allowed when dividing out a Blaschke denominator.
    pub divide: f64,
    /// `|g0 - 1|` allowed for a boundary element of V.
    pub boundary_norm: f64,
    /// Midpoint and norm residuals of a split certificate.
    pub certificate: f64,
    /// Minimum coefficient gap certifying that two halves differ.
    pub distinctness: f64,
    /// `|c|` below which the rotation constant is treated as zero.
    pub rotation: f64,
    /// Quadrature points for the rotation constant.
    pub rotation_grid: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        factor: 1e-9,
        divide: 1e-9,
        boundary_norm: 1e-12,
        certificate: 1e-10,
        distinctness: 1e-9,
        rotation: 1e-10,
        rotation_grid: 8192,
    };

    /// Replace the certificate-level thresholds by `tol`, leaving the
    /// structural ones (distinctness gap, rotation cut-off) untouched.
    pub fn with_override(tol: f64) -> Self {
        Tolerances {
            factor: tol,
            divide: tol,
            certificate: tol,
            ..Self::DEFAULT
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Grid size used by `nonneg_check` for a band limit `n`.
pub fn n_check(n: usize) -> usize {
    N_CHECK_MIN.max(64 * n)
}
