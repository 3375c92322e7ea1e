use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::spectral;
use crate::kernel::KernelElement;
use crate::poly::Poly;
use crate::tol::Tolerances;
use crate::trig::TrigPoly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RigidityOutcome {
    /// `x = c·F` with `F` the outer factor of `g`.
    ConstantMultiple(Complex64),
    /// `∫ |x| / √g dm = ∞`: some circle zero of `g` is not matched by `x`.
    NotDominated {
        root: Complex64,
        required: usize,
        found: usize,
    },
    /// Dominated but not a multiple of `F`; this should be impossible.
    Counterexample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub outcome: RigidityOutcome,
    /// `F` with `|F|² = g`, `F(0) > 0`.
    pub outer: Poly,
    /// Circle zeros of `F` with multiplicities.
    pub circle_roots: Vec<(Complex64, usize)>,
    /// Largest remainder of `x / F`, relative to `max |x_k|` (dominated case only).
    pub remainder: Option<f64>,
    pub tolerances: Tolerances,
}

pub fn rigidity_check(g: &TrigPoly, n: usize, x: &KernelElement) -> Result<RigidityReport> {
    rigidity_check_with(g, n, x, &Tolerances::DEFAULT)
}

/// For `z^n g` outer, decide whether `x` is dominated by `√g` and, if so,
/// recover the constant in `x = c·F`.
///
/// Domination is decided by multiplicities: near a circle zero where `g`
/// vanishes to order `2m` and `x` to order `k`, `|x| / √g ~ |z - ζ|^{k-m}`,
/// which is integrable iff `k ≥ m`.
pub fn rigidity_check_with(
    g: &TrigPoly,
    n: usize,
    x: &KernelElement,
    tol: &Tolerances,
) -> Result<RigidityReport> {
    if g.is_zero() {
        return Err(Error::NullInput("trigonometric polynomial"));
    }
    let band = g.band();
    if band > n {
        return Err(Error::BandExceeded { band, n });
    }
    if let Some(d) = x.poly().degree().filter(|&d| d > n) {
        return Err(Error::DegreeExceeded { degree: d, n });
    }
    let sp = spectral(g)?;
    if band < n || !sp.inside.is_empty() {
        return Err(Error::InnerFactorPresent);
    }
    let report = |outcome, remainder| RigidityReport {
        outcome,
        outer: sp.outer.clone(),
        circle_roots: sp.circle.clone(),
        remainder,
        tolerances: *tol,
    };
    for &(root, required) in &sp.circle {
        let found = root_multiplicity(x.poly(), root, required, tol.divide);
        if found < required {
            return Ok(report(
                RigidityOutcome::NotDominated {
                    root,
                    required,
                    found,
                },
                None,
            ));
        }
    }
    let (q, r) = x.poly().div_rem(&sp.outer)?;
    let scale = x.poly().max_abs_coeff();
    let rel = if scale > 0.0 {
        r.max_abs_coeff() / scale
    } else {
        0.0
    };
    let outcome = if rel <= tol.divide && q.degree().unwrap_or(0) == 0 {
        RigidityOutcome::ConstantMultiple(q.coeff(0))
    } else {
        RigidityOutcome::Counterexample
    };
    Ok(report(outcome, Some(rel)))
}

/// Multiplicity of `root` in `p`, counted up to `cap`, by repeated synthetic
/// division with a relative remainder test.
fn root_multiplicity(p: &Poly, root: Complex64, cap: usize, tol: f64) -> usize {
    if p.is_zero() {
        return cap;
    }
    let mut q = p.clone();
    for k in 0..cap {
        let (_, scale) = q.eval_with_scale(root);
        let (next, rem) = q.div_linear(root);
        if rem.norm() > tol * scale {
            return k;
        }
        q = next;
    }
    cap
}
