use crate::error::{Error, Result};
use crate::factor::{inner_outer_lift, BlaschkeProduct};
use crate::kernel::{membership_v_with, Membership};
use crate::poly::Poly;
use crate::tol::Tolerances;
use crate::trig::TrigPoly;

/// Residual sampling size for the factorization check.
const RESIDUAL_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeCertificate {
    pub g: TrigPoly,
    pub n: usize,
    pub verdict: bool,
    /// `ĝ(0) = 1` within `boundary_norm`.
    pub norm_ok: bool,
    /// Inner factor of `z^n g`.
    pub inner_factor: BlaschkeProduct,
    /// Outer factor of `z^n g`.
    pub outer_part: Poly,
    /// `|inner·outer - z^n g|` on the circle, relative to `max |z^n g|`.
    pub factor_residual: f64,
    pub tolerances: Tolerances,
}

pub fn is_extreme(g: &TrigPoly, n: usize) -> Result<ExtremeCertificate> {
    is_extreme_with(g, n, &Tolerances::DEFAULT)
}

/// Decide whether `g` is an extreme point of V.
///
/// Fails with `NotInV` unless `g ∈ V`.
pub fn is_extreme_with(g: &TrigPoly, n: usize, tol: &Tolerances) -> Result<ExtremeCertificate> {
    let report = membership_v_with(g, n, tol)?;
    if let Some(v) = report.violation {
        return Err(Error::NotInV(v.to_string()));
    }
    let lifted = g.lift_to(n);
    let fac = inner_outer_lift(g, n)?;
    let factor_residual = fac.residual(&lifted, RESIDUAL_GRID)?;
    if factor_residual > tol.factor {
        return Err(Error::InvariantBreach(format!(
            "inner-outer residual {factor_residual:e} exceeds {:e}",
            tol.factor
        )));
    }
    let norm_ok = report.membership == Membership::InVBoundary;
    Ok(ExtremeCertificate {
        g: g.clone(),
        n,
        verdict: norm_ok && fac.inner.is_trivial(),
        norm_ok,
        inner_factor: fac.inner,
        outer_part: fac.outer,
        factor_residual,
        tolerances: *tol,
    })
}
