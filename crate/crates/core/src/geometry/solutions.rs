use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::{blaschke_mul_poly, spectral, BlaschkeProduct};
use crate::kernel::KernelElement;
use crate::poly::Poly;
use crate::trig::TrigPoly;

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    /// The outer solution `F` (Fejér–Riesz factor).
    pub outer: Poly,
    /// Inner factor of `z^n g`; its divisors index the solutions.
    pub inner: BlaschkeProduct,
    /// One solution per inner divisor, in the order of
    /// [`divisors`](crate::factor::divisors); the first is `F` itself.
    pub solutions: Vec<KernelElement>,
}

/// Every `f` in `K_n` with `|f|² = g`, up to unimodular constants.
///
/// Each solution `F·J` (J an inner divisor of the lift's inner factor) is
/// normalized so its lowest nonzero coefficient is real and positive.
pub fn enumerate_solutions(g: &TrigPoly, n: usize) -> Result<SolutionSet> {
    if g.is_zero() {
        return Err(Error::NullInput("trigonometric polynomial"));
    }
    let band = g.band();
    if band > n {
        return Err(Error::BandExceeded { band, n });
    }
    let sp = spectral(g)?;
    let inner = sp.inner_of_lift(band, n);
    let mut solutions = Vec::new();
    for j in inner.divisors() {
        let f = blaschke_mul_poly(&sp.outer, &j)
            .map_err(|e| Error::InvariantBreach(format!("inner divisor does not cancel: {e}")))?;
        let low = f.lowest_nonzero().unwrap_or(Complex64::new(1.0, 0.0));
        let f = f.scale(low.conj() / low.norm());
        solutions.push(KernelElement::new(n, f)?);
    }
    Ok(SolutionSet {
        outer: sp.outer,
        inner,
        solutions,
    })
}
