use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::{divide_denominator, fejer_riesz, inner_outer_lift, BlaschkeProduct};
use crate::kernel::{membership_v_with, KernelElement, Membership};
use crate::poly::poly_mul;
use crate::tol::Tolerances;
use crate::trig::TrigPoly;

use super::extreme::is_extreme_with;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The rotation rule applied to the inner factor.
pub const LAMBDA_CONVENTION: &str = "lambda = +i*conj(c)/|c|, lambda = 1 when |c| <= rotation";
/// The representative returned for each half.
pub const REPRESENTATIVE_CONVENTION: &str = "outer (Fejer-Riesz) factor of each half";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitChecks {
    /// `max_k |ĝ1(k) + ĝ2(k) - 2ĝ(k)|`.
    pub midpoint_residual: f64,
    pub norm1: f64,
    pub norm2: f64,
    /// `max_k |ĝ1(k) - ĝ2(k)|`.
    pub distinctness_gap: f64,
    pub extreme1: bool,
    pub extreme2: bool,
    /// Largest Hermitian asymmetry seen when un-lifting the two halves.
    pub unlift_asymmetry: f64,
}

impl SplitChecks {
    pub fn hold(&self, tol: &Tolerances) -> bool {
        self.midpoint_residual <= tol.certificate
            && (self.norm1 - 1.0).abs() <= tol.certificate
            && (self.norm2 - 1.0).abs() <= tol.certificate
            && self.distinctness_gap > tol.distinctness
            && self.extreme1
            && self.extreme2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCertificate {
    pub g: TrigPoly,
    pub n: usize,
    pub g1: TrigPoly,
    pub g2: TrigPoly,
    /// `c = ∫ g I dm` for the unrotated inner factor `I` of `z^n g`.
    pub c: Complex64,
    pub lambda: Complex64,
    /// Rotated inner factor `u = lambda · I`.
    pub u: BlaschkeProduct,
    pub f1: KernelElement,
    pub f2: KernelElement,
    pub checks: SplitChecks,
    /// All checks within tolerance.
    pub valid: bool,
    pub tolerances: Tolerances,
}

pub fn split_nonextreme(g: &TrigPoly, n: usize) -> Result<SplitCertificate> {
    split_nonextreme_with(g, n, &Tolerances::DEFAULT)
}

/// Write a non-extreme boundary point of V as the midpoint of two extreme points.
///
/// With `z^n g = G I` (`G` outer, `I` inner) and `u = lambda I` chosen so that
/// `∫ g u dm` is purely imaginary, the halves are `g (1 ± Re u)`, whose lifts
/// are `±(conj(lambda)/2) G (1 ± u)²`.
pub fn split_nonextreme_with(g: &TrigPoly, n: usize, tol: &Tolerances) -> Result<SplitCertificate> {
    let report = membership_v_with(g, n, tol)?;
    match report.membership {
        Membership::NotInV => {
            let v = report.violation.map(|v| v.to_string()).unwrap_or_default();
            return Err(Error::NotInV(v));
        }
        Membership::InV => return Err(Error::NotOnBoundary { value: g.mean() }),
        Membership::InVBoundary => {}
    }
    let fac = inner_outer_lift(g, n)?;
    let inner = fac.inner;
    if inner.is_trivial() {
        return Err(Error::AlreadyExtreme);
    }

    let c = rotation_constant(g, &inner, tol.rotation_grid)?;
    let lambda = if c.norm() > tol.rotation {
        I * c.conj() / c.norm()
    } else {
        ONE
    };
    let mu = lambda * inner.lambda();
    let u = inner.with_lambda(mu);

    let p = inner.numerator();
    let q = inner.denominator();
    let h = divide_denominator(&fac.outer, inner.zeros(), 2, tol.divide).map_err(|e| {
        Error::InvariantBreach(format!(
            "outer part not divisible by squared denominator: {e}"
        ))
    })?;
    let plus = &q + &p.scale(mu);
    let minus = &q - &p.scale(mu);
    let half = lambda.conj() * 0.5;
    let lift1 = poly_mul(&h, &poly_mul(&plus, &plus)).scale(half);
    let lift2 = poly_mul(&h, &poly_mul(&minus, &minus)).scale(-half);
    let (g1, asym1) = TrigPoly::unlift(&lift1, n);
    let (g2, asym2) = TrigPoly::unlift(&lift2, n);

    let part_tol = Tolerances {
        boundary_norm: tol.certificate.max(tol.boundary_norm),
        ..*tol
    };
    let extreme = |gj: &TrigPoly| is_extreme_with(gj, n, &part_tol).is_ok_and(|c| c.verdict);
    let checks = SplitChecks {
        midpoint_residual: g1.add(&g2).max_diff(&g.scale(2.0).with_band(n)),
        norm1: g1.mean(),
        norm2: g2.mean(),
        distinctness_gap: g1.max_diff(&g2),
        extreme1: extreme(&g1),
        extreme2: extreme(&g2),
        unlift_asymmetry: asym1.max(asym2),
    };
    let outer_half = |gj: &TrigPoly| {
        fejer_riesz(gj)
            .and_then(|f| KernelElement::new(n, f))
            .map_err(|e| Error::InvariantBreach(format!("split half has no spectral factor: {e}")))
    };
    let f1 = outer_half(&g1)?;
    let f2 = outer_half(&g2)?;
    Ok(SplitCertificate {
        g: g.clone(),
        n,
        valid: checks.hold(tol),
        g1,
        g2,
        c,
        lambda,
        u,
        f1,
        f2,
        checks,
        tolerances: *tol,
    })
}

/// `∫ g I dm` by the `m`-point rule on the circle.
fn rotation_constant(g: &TrigPoly, inner: &BlaschkeProduct, m: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let theta = TAU * j as f64 / m as f64;
        let zeta = Complex64::from_polar(1.0, theta);
        acc += inner.eval(zeta)? * g.eval_angle(theta);
    }
    Ok(acc / m as f64)
}
