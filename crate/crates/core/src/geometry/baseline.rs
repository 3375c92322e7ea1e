use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::Tolerances;
use crate::trig::{nonneg_check, TrigPoly};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineSplit {
    pub g: TrigPoly,
    /// `τ = ½ Re(λ z)`.
    pub lambda: Complex64,
    pub tau: TrigPoly,
    /// `g (1 + τ)`, band one more than `g`.
    pub g1: TrigPoly,
    /// `g (1 - τ)`.
    pub g2: TrigPoly,
}

/// Write a normalized `g ≥ 0` as the midpoint of `g (1 ± τ)` with no band
/// restriction.
///
/// `λ = i ĝ(1) / |ĝ(1)|` (or 1 when `ĝ(1) = 0`) makes `∫ g τ dm` vanish, so
/// both halves keep `ĝ(0) = 1`; `|τ| ≤ ½` keeps them nonnegative.
pub fn baseline_split(g: &TrigPoly) -> Result<BaselineSplit> {
    if g.is_zero() {
        return Err(Error::NullInput("trigonometric polynomial"));
    }
    if (g.mean() - 1.0).abs() > Tolerances::DEFAULT.boundary_norm {
        return Err(Error::NotNormalized { value: g.mean() });
    }
    if let Some(w) = nonneg_check(g)?.witness {
        return Err(Error::NotNonnegative(w));
    }
    let g1c = g.coeff(1);
    let lambda = if g1c.norm() > 0.0 {
        Complex64::new(0.0, 1.0) * g1c / g1c.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let n = g.n() + 1;
    let tau = TrigPoly::new(1, &[Complex64::new(0.0, 0.0), lambda * 0.25]);
    let product: Vec<Complex64> = (0..=n as i64)
        .map(|k| g.coeff(k - 1) * lambda * 0.25 + g.coeff(k + 1) * lambda.conj() * 0.25)
        .collect();
    let g_tau = TrigPoly::new(n, &product);
    Ok(BaselineSplit {
        g: g.clone(),
        lambda,
        tau,
        g1: g.add(&g_tau),
        g2: g.sub(&g_tau),
    })
}
