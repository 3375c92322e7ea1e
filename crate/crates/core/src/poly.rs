//! Dense complex polynomials in one variable.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A polynomial `c_0 + c_1 z + ... + c_d z^d`.
///
/// The coefficient list is trimmed so the last entry is nonzero; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Like [`Poly::new`] but rejects NaN and infinite coefficients.
    pub fn try_new(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Schema(format!("coefficient {k} is not finite")));
        }
        Ok(Self::new(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        Poly { coeffs }
    }

    /// `lead * prod (z - r)` over the given roots.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Number of vanishing low-order coefficients, i.e. the order of the zero at 0.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// The lowest-order nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<Complex64> {
        self.coeffs.iter().copied().find(|c| *c != ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of squared coefficient moduli (the squared H² norm).
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficientwise difference to `other`.
    pub fn max_diff(&self, other: &Poly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value together with the rounding scale `sum |c_k| |z|^k`.
    pub fn eval_with_scale(&self, z: Complex64) -> (Complex64, f64) {
        let r = z.norm();
        let mut value = ZERO;
        let mut scale = 0.0;
        for &c in self.coeffs.iter().rev() {
            value = value * z + c;
            scale = scale * r + c.norm();
        }
        (value, scale)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Poly {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Divide by `z^k`, discarding the low coefficients.
    pub fn unshift(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// Conjugate-reverse within a band of width `n`: `c'_k = conj(c_{n-k})`.
    ///
    /// On the unit circle this is `z^n * conj(p(z))`. Requires `deg p <= n`.
    pub fn reverse_conjugate(&self, n: usize) -> Poly {
        debug_assert!(self.degree().is_none_or(|d| d <= n));
        Poly::new((0..=n).map(|k| self.coeff(n - k).conj()).collect())
    }

    /// Synthetic division by `(z - root)`: returns quotient and remainder `p(root)`.
    pub fn div_linear(&self, root: Complex64) -> (Poly, Complex64) {
        if self.is_zero() {
            return (Poly::zero(), ZERO);
        }
        let d = self.coeffs.len() - 1;
        let mut quotient = vec![ZERO; d];
        let mut acc = ZERO;
        for k in (0..=d).rev() {
            acc = acc * root + self.coeffs[k];
            if k > 0 {
                quotient[k - 1] = acc;
            }
        }
        (Poly::new(quotient), acc)
    }

    /// Division by `(1 - w z)` run from the constant term upward.
    ///
    /// Stable for `|w| < 1`. Returns the quotient and the remainder, the
    /// amount by which the top coefficient fails to cancel.
    pub fn div_one_minus(&self, w: Complex64) -> (Poly, Complex64) {
        if self.is_zero() {
            return (Poly::zero(), ZERO);
        }
        let d = self.coeffs.len() - 1;
        if w == ZERO {
            return (self.clone(), ZERO);
        }
        let mut q = Vec::with_capacity(d + 1);
        let mut prev = ZERO;
        for k in 0..=d {
            let qk = self.coeffs[k] + w * prev;
            q.push(qk);
            prev = qk;
        }
        // The last entry, Σ c_k w^{d-k}, is what fails to cancel.
        let remainder = q.pop().unwrap_or(ZERO);
        (Poly::new(q), remainder)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::NullInput("divisor"));
        };
        let Some(dn) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if dn < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
            rem[k + dd] = ZERO;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| poly_mul(&acc, self))
    }
}

/// Product of two polynomials by direct convolution.
pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![ZERO; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly::new(out)
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        poly_mul(self, rhs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale_real(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn difference_of_squares() {
        let p = poly_mul(
            &Poly::from_real(&[1.0, 1.0]),
            &Poly::from_real(&[1.0, -1.0]),
        );
        assert_eq!(p, Poly::from_real(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn multiplicative_identity() {
        let p = Poly::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0)]);
        assert_eq!(poly_mul(&p, &Poly::one()), p);
        assert!(poly_mul(&p, &Poly::zero()).is_zero());
    }

    #[test]
    fn reflected_pair_product() {
        let p = poly_mul(
            &Poly::from_real(&[-0.5, 1.0]),
            &Poly::from_real(&[1.0, -0.5]),
        );
        assert_eq!(p, Poly::from_real(&[-0.5, 1.25, -0.5]));
    }

    #[test]
    fn trimming_and_degree() {
        let p = Poly::from_real(&[1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Poly::from_real(&[0.0]).degree(), None);
        assert_eq!(Poly::from_real(&[0.0, 0.0, 3.0]).trailing_zeros(), 2);
    }

    #[test]
    fn from_roots_matches_expansion() {
        let p = Poly::from_roots(c(-0.5, 0.0), &[c(0.5, 0.0), c(2.0, 0.0)]);
        assert!(p.max_diff(&Poly::from_real(&[-0.5, 1.25, -0.5])) < 1e-15);
    }

    #[test]
    fn linear_division_remainder_is_value() {
        let p = Poly::from_real(&[1.0, 2.0, 3.0]);
        let (q, r) = p.div_linear(c(2.0, 0.0));
        assert_eq!(r, p.eval(c(2.0, 0.0)));
        let back = &poly_mul(&q, &Poly::from_real(&[-2.0, 1.0])) + &Poly::constant(r);
        assert!(back.max_diff(&p) < 1e-14);
    }

    #[test]
    fn one_minus_division() {
        // (1 - z/2)(3 + z) = 3 - z/2 - z^2/2
        let p = Poly::from_real(&[3.0, -0.5, -0.5]);
        let (q, r) = p.div_one_minus(c(0.5, 0.0));
        assert!(r.norm() < 1e-15);
        assert!(q.max_diff(&Poly::from_real(&[3.0, 1.0])) < 1e-15);
        // (1 + z) is not divisible by (1 - z/2)
        let (_, r) = Poly::from_real(&[1.0, 1.0]).div_one_minus(c(0.5, 0.0));
        assert!((r - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn euclidean_division() {
        let a = Poly::from_real(&[1.0, 2.0, 1.0]);
        let b = Poly::from_real(&[1.0, 1.0]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(q.max_diff(&b) < 1e-15);
        assert!(r.is_zero() || r.max_abs_coeff() < 1e-15);
        assert!(a.div_rem(&Poly::zero()).is_err());
    }

    #[test]
    fn reverse_conjugate_is_involution() {
        let p = Poly::new(vec![c(1.0, 2.0), c(0.0, -1.0)]);
        let r = p.reverse_conjugate(3);
        assert_eq!(r.reverse_conjugate(3), p);
        assert_eq!(r.coeff(3), c(1.0, -2.0));
    }
}
