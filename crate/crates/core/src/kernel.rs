//! The model space `K_n = ker T_{z̄^{n+1}}`: polynomials of degree at most `n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::tol::Tolerances;
use crate::trig::{nonneg_check, TrigPoly};

/// A polynomial of degree `≤ n`, tagged with the model order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelElement {
    n: usize,
    f: Poly,
}

impl KernelElement {
    pub fn new(n: usize, f: Poly) -> Result<Self> {
        match f.degree() {
            Some(d) if d > n => Err(Error::DegreeExceeded { degree: d, n }),
            _ => Ok(KernelElement { n, f }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn into_poly(self) -> Poly {
        self.f
    }
}

/// `f̃ = conj(z φ f)` for `φ = z̄^{n+1}`: the conjugate-reversed coefficients.
pub fn companion(x: &KernelElement) -> KernelElement {
    KernelElement {
        n: x.n,
        f: x.f.reverse_conjugate(x.n),
    }
}

/// Summed in ascending order of `|c_k|²`, so the companion's norm is
/// bit-identical.
pub fn h2_norm(x: &KernelElement) -> f64 {
    let mut sq: Vec<f64> = x.f.coeffs().iter().map(|c| c.norm_sqr()).collect();
    sq.sort_by(f64::total_cmp);
    sq.iter().sum::<f64>().sqrt()
}

pub fn is_in_kernel(f: &Poly, n: usize) -> bool {
    f.degree().is_none_or(|d| d <= n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    /// In V with `ĝ(0) < 1`.
    InV,
    /// In V with `ĝ(0) = 1`.
    InVBoundary,
    NotInV,
}

/// The clause that keeps `g` out of V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Null,
    Negative,
    /// The band exceeds `n`, i.e. `z̄ φ̄ g` is not analytic.
    BandLimit,
    NormAboveOne,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Violation::Null => "g is null",
            Violation::Negative => "g takes negative values",
            Violation::BandLimit => "band limit exceeds n (z̄φ̄g is not in H¹)",
            Violation::NormAboveOne => "‖g‖₁ > 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipReport {
    pub membership: Membership,
    pub violation: Option<Violation>,
}

/// Classify `g` against V for the symbol `z̄^{n+1}`.
pub fn membership_v(g: &TrigPoly, n: usize) -> Result<MembershipReport> {
    membership_v_with(g, n, &Tolerances::DEFAULT)
}

pub fn membership_v_with(g: &TrigPoly, n: usize, tol: &Tolerances) -> Result<MembershipReport> {
    let reject = |v| {
        Ok(MembershipReport {
            membership: Membership::NotInV,
            violation: Some(v),
        })
    };
    if g.is_zero() {
        return reject(Violation::Null);
    }
    if !nonneg_check(g)?.nonnegative {
        return reject(Violation::Negative);
    }
    if g.band() > n {
        return reject(Violation::BandLimit);
    }
    let mean = g.mean();
    let membership = if (mean - 1.0).abs() <= tol.boundary_norm {
        Membership::InVBoundary
    } else if mean < 1.0 {
        Membership::InV
    } else {
        return reject(Violation::NormAboveOne);
    };
    Ok(MembershipReport {
        membership,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::trig_from_modulus_squared;
    use num_complex::Complex64;

    fn kel(n: usize, c: &[f64]) -> KernelElement {
        KernelElement::new(n, Poly::from_real(c)).unwrap()
    }

    #[test]
    fn companion_examples() {
        assert_eq!(
            companion(&kel(1, &[-0.5, 1.0])).poly(),
            &Poly::from_real(&[1.0, -0.5])
        );
        let palin = kel(2, &[1.0, 1.0, 1.0]);
        assert_eq!(companion(&palin), palin);
        assert_eq!(companion(&kel(1, &[1.0])).poly(), &Poly::monomial(1));
    }

    #[test]
    fn companion_involution_and_norm() {
        let x = KernelElement::new(
            3,
            Poly::new(vec![
                Complex64::new(0.1, 0.2),
                Complex64::new(-1.0, 0.5),
                Complex64::new(0.0, 0.3),
            ]),
        )
        .unwrap();
        let y = companion(&x);
        assert_eq!(companion(&y), x);
        assert_eq!(h2_norm(&y), h2_norm(&x));
        // |f̃|² and |f|² coincide coefficientwise
        let gx = trig_from_modulus_squared(x.poly());
        let gy = trig_from_modulus_squared(y.poly());
        assert!(gx.with_band(3).max_diff(&gy.with_band(3)) < 1e-15);
    }

    #[test]
    fn norm_examples() {
        let s = 0.5f64.sqrt();
        assert!((h2_norm(&kel(1, &[s, s])) - 1.0).abs() < 1e-15);
        assert_eq!(h2_norm(&KernelElement::new(3, Poly::zero()).unwrap()), 0.0);
        let t = 2.0 / 5f64.sqrt();
        assert!((h2_norm(&kel(1, &[-0.5 * t, t])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_membership() {
        assert!(!is_in_kernel(&Poly::monomial(2), 1));
        assert!(is_in_kernel(&Poly::monomial(2), 2));
        assert!(is_in_kernel(&Poly::zero(), 0));
        assert!(matches!(
            KernelElement::new(1, Poly::monomial(2)),
            Err(Error::DegreeExceeded { degree: 2, n: 1 })
        ));
    }

    #[test]
    fn membership_examples() {
        let r = membership_v(&TrigPoly::from_real(1, &[1.0, 0.5]), 1).unwrap();
        assert_eq!(r.membership, Membership::InVBoundary);
        let r = membership_v(&TrigPoly::from_real(1, &[0.5, 0.25]), 1).unwrap();
        assert_eq!(r.membership, Membership::InV);
        let r = membership_v(&TrigPoly::from_real(2, &[1.0, 0.0, 0.5]), 1).unwrap();
        assert_eq!(r.membership, Membership::NotInV);
        assert_eq!(r.violation, Some(Violation::BandLimit));
        let r = membership_v(&TrigPoly::from_real(1, &[0.0, 0.5]), 1).unwrap();
        assert_eq!(r.violation, Some(Violation::Negative));
        let r = membership_v(&TrigPoly::zero(1), 1).unwrap();
        assert_eq!(r.violation, Some(Violation::Null));
        let r = membership_v(&TrigPoly::from_real(1, &[2.0, 0.5]), 1).unwrap();
        assert_eq!(r.violation, Some(Violation::NormAboveOne));
    }
}
