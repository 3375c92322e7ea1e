use crate::error::{Error, Result};
use crate::factor::inner_outer;
use crate::kernel::{companion, h2_norm, KernelElement};
use crate::tol::Tolerances;
use crate::trig::{trig_from_modulus_squared, TrigPoly};

use super::split::{split_nonextreme_with, SplitCertificate};

/// `|1 - ‖x‖|` allowed for a unit-norm input.
const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub x: KernelElement,
    /// `|x|²` as a trigonometric polynomial of band `n`.
    pub g: TrigPoly,
    /// Whether `x` itself has a nontrivial inner factor.
    pub x_inner: bool,
    /// Whether the companion of `x` has a nontrivial inner factor.
    pub companion_inner: bool,
    /// `None` exactly when `|x|²` is not a midpoint of other moduli.
    pub split: Option<SplitCertificate>,
    /// `max_k |(|f1|² + |f2|²)^(k) - 2ĝ(k)|`, zero when rigid.
    pub modulus_residual: f64,
}

impl Decomposition {
    pub fn is_rigid(&self) -> bool {
        self.split.is_none()
    }

    pub fn parts(&self) -> Option<(&KernelElement, &KernelElement)> {
        self.split.as_ref().map(|s| (&s.f1, &s.f2))
    }
}

pub fn decompose_modulus(x: &KernelElement) -> Result<Decomposition> {
    decompose_modulus_with(x, &Tolerances::DEFAULT)
}

/// Write `|x|² = ½(|f1|² + |f2|²)` with distinct unit-norm `f1, f2` in the
/// same kernel, or report that `x` is rigid.
///
/// `x` is rigid exactly when both `x` and its companion are outer.
pub fn decompose_modulus_with(x: &KernelElement, tol: &Tolerances) -> Result<Decomposition> {
    let norm = h2_norm(x);
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { norm });
    }
    let n = x.n();
    let x_inner = !inner_outer(x.poly())?.inner.is_trivial();
    let companion_inner = !inner_outer(companion(x).poly())?.inner.is_trivial();
    let raw = trig_from_modulus_squared(x.poly()).with_band(n);
    let g = raw.scale(1.0 / raw.mean());
    if !x_inner && !companion_inner {
        return Ok(Decomposition {
            x: x.clone(),
            g,
            x_inner,
            companion_inner,
            split: None,
            modulus_residual: 0.0,
        });
    }
    let split = match split_nonextreme_with(&g, n, tol) {
        Err(Error::AlreadyExtreme) => {
            return Err(Error::InvariantBreach(
                "x or its companion has an inner factor but |x|² is extreme".into(),
            ))
        }
        other => other?,
    };
    let m1 = trig_from_modulus_squared(split.f1.poly()).with_band(n);
    let m2 = trig_from_modulus_squared(split.f2.poly()).with_band(n);
    let modulus_residual = m1.add(&m2).max_diff(&g.scale(2.0));
    Ok(Decomposition {
        x: x.clone(),
        g,
        x_inner,
        companion_inner,
        split: Some(split),
        modulus_residual,
    })
}
