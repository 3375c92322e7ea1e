//! Inner–outer factorization, Fejér–Riesz spectral factorization and
//! finite Blaschke products.
//!
//! Conventions: an outer part is normalized so its value at the origin is
//! real and positive; any leftover phase lives in [`BlaschkeProduct::lambda`].
//! A Blaschke factor is `(z - a) / (1 - conj(a) z)` without the usual
//! `|a| / a` normalization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{poly_mul, Poly};
use crate::refine::{polish, polish_coefficients, reflect, Factor};
use crate::roots::{roots, RootClass, RootSet};
use crate::tol::{self, Tolerances, EPS_CIRCLE};
use crate::trig::{lift_roots, nonneg_check, trig_from_modulus_squared, TrigPoly};
use crate::NegativityWitness;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `lambda · z^m0 · Π ((z - a) / (1 - conj(a) z))^mult`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    m0: usize,
    zeros: Vec<(Complex64, usize)>,
    lambda: Complex64,
}

impl BlaschkeProduct {
    /// Validates `0 < |a| ≤ 1 - ε_circle`, positive multiplicities and `|lambda| = 1`.
    pub fn new(m0: usize, zeros: Vec<(Complex64, usize)>, lambda: Complex64) -> Result<Self> {
        for &(a, mult) in &zeros {
            if !(a.norm() > 0.0 && a.norm() <= 1.0 - EPS_CIRCLE) {
                return Err(Error::Schema(format!(
                    "Blaschke zero {a} must satisfy 0 < |a| <= 1 - {EPS_CIRCLE}"
                )));
            }
            if mult == 0 {
                return Err(Error::Schema(
                    "Blaschke multiplicity must be positive".into(),
                ));
            }
        }
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Schema(format!("lambda {lambda} is not unimodular")));
        }
        Ok(BlaschkeProduct { m0, zeros, lambda })
    }

    pub fn identity() -> Self {
        BlaschkeProduct {
            m0: 0,
            zeros: Vec::new(),
            lambda: ONE,
        }
    }

    /// `z^k`.
    pub fn power_of_z(k: usize) -> Self {
        BlaschkeProduct {
            m0: k,
            ..Self::identity()
        }
    }

    /// A single factor `(z - a) / (1 - conj(a) z)`.
    pub fn single(a: Complex64) -> Result<Self> {
        Self::new(0, vec![(a, 1)], ONE)
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// Same product with a different unimodular constant.
    pub fn with_lambda(&self, lambda: Complex64) -> Self {
        BlaschkeProduct {
            lambda,
            ..self.clone()
        }
    }

    /// No zeros at all (a unimodular constant).
    pub fn is_trivial(&self) -> bool {
        self.m0 == 0 && self.zeros.is_empty()
    }

    /// Total number of zeros with multiplicity.
    pub fn degree(&self) -> usize {
        self.m0 + self.zeros.iter().map(|z| z.1).sum::<usize>()
    }

    /// `z^m0 Π (z - a)^mult` (without lambda).
    pub fn numerator(&self) -> Poly {
        let mut roots = Vec::new();
        for &(a, mult) in &self.zeros {
            roots.extend(std::iter::repeat_n(a, mult));
        }
        Poly::from_roots(ONE, &roots).shift(self.m0)
    }

    /// `Π (1 - conj(a) z)^mult`.
    pub fn denominator(&self) -> Poly {
        self.zeros.iter().fold(Poly::one(), |acc, &(a, mult)| {
            let factor = Poly::new(vec![ONE, -a.conj()]);
            poly_mul(&acc, &factor.pow(mult))
        })
    }

    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        blaschke_eval(self, zeta)
    }

    /// All inner divisors; see [`divisors`].
    pub fn divisors(&self) -> Vec<BlaschkeProduct> {
        divisors(self)
    }
}

/// `lambda · ζ^m0 · Π ((ζ - a) / (1 - conj(a) ζ))^mult`.
pub fn blaschke_eval(b: &BlaschkeProduct, zeta: Complex64) -> Result<Complex64> {
    let mut value = b.lambda * zeta.powu(b.m0 as u32);
    for &(a, mult) in &b.zeros {
        let den = ONE - a.conj() * zeta;
        if den.norm() < 1e-14 {
            return Err(Error::PoleHit { point: zeta });
        }
        value *= ((zeta - a) / den).powu(mult as u32);
    }
    Ok(value)
}

/// Every sub-product of `b`, each with `lambda = 1`.
///
/// There are `(m0 + 1) · Π (mult + 1)` of them, starting with the trivial
/// divisor and ending with `b` itself (up to its constant).
pub fn divisors(b: &BlaschkeProduct) -> Vec<BlaschkeProduct> {
    let mut out = vec![BlaschkeProduct::identity()];
    for k in 1..=b.m0 {
        out.push(BlaschkeProduct::power_of_z(k));
    }
    for &(a, mult) in &b.zeros {
        let mut next = Vec::with_capacity(out.len() * (mult + 1));
        for base in &out {
            next.push(base.clone());
            for e in 1..=mult {
                let mut d = base.clone();
                d.zeros.push((a, e));
                next.push(d);
            }
        }
        out = next;
    }
    out
}

/// Inner–outer split of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub inner: BlaschkeProduct,
    pub outer: Poly,
}

impl Factorization {
    /// `inner(ζ) · outer(ζ)`.
    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        Ok(self.inner.eval(zeta)? * self.outer.eval(zeta))
    }

    /// Largest `|inner·outer - p|` over an `m`-point circle grid, relative to
    /// the largest `|p|` there.
    pub fn residual(&self, p: &Poly, m: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for j in 0..m {
            let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
            let pv = p.eval(zeta);
            scale = scale.max(pv.norm());
            worst = worst.max((self.eval(zeta)? - pv).norm());
        }
        Ok(if scale > 0.0 { worst / scale } else { worst })
    }
}

/// Split `p = inner · outer`.
///
/// The inner part collects the roots strictly inside the disk; every such
/// factor `(z - a)` in `p` is traded for `(1 - conj(a) z)` in the outer part.
/// Roots on the circle stay in the outer part.
pub fn inner_outer(p: &Poly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::NullInput("polynomial"));
    }
    factor_with_roots(p, &roots(p)?)
}

/// Inner–outer split of the lift `z^order g` of a real trigonometric polynomial.
///
/// Same as [`inner_outer`] on `g.lift_to(order)`, but uses [`lift_roots`],
/// which keeps multiple circle roots on the circle.
pub fn inner_outer_lift(g: &TrigPoly, order: usize) -> Result<Factorization> {
    let p = g.lift_to(order);
    if p.is_zero() {
        return Err(Error::NullInput("trigonometric polynomial"));
    }
    let rs = if g.band() == 0 {
        RootSet::default()
    } else {
        lift_roots(g)?
    };
    factor_with_roots(&p, &rs)
}

fn factor_with_roots(p: &Poly, rs: &RootSet) -> Result<Factorization> {
    let m0 = p.trailing_zeros();
    let mut deflated = p.unshift(m0);
    let mut zeros = Vec::new();
    // Root sets come sorted by modulus, which is the stable order for
    // top-down deflation.
    for r in rs.iter().filter(|r| r.class == RootClass::Inside) {
        if r.location == Complex64::new(0.0, 0.0) {
            continue;
        }
        for _ in 0..r.multiplicity {
            deflated = deflated.div_linear(r.location).0;
        }
        zeros.push((r.location, r.multiplicity));
    }
    let mut inner = BlaschkeProduct::new(m0, zeros, ONE)?;
    let (outer, phase) = positive_at_origin(&poly_mul(&deflated, &inner.denominator()));
    inner.lambda = phase;
    Ok(Factorization { inner, outer })
}

/// `p / phase` with `phase = p(0)/|p(0)|`, the constant term set exactly real.
fn positive_at_origin(p: &Poly) -> (Poly, Complex64) {
    let c0 = p.coeff(0);
    let phase = c0 / c0.norm();
    let mut coeffs = p.scale(phase.conj()).into_coeffs();
    coeffs[0] = Complex64::new(c0.norm(), 0.0);
    (Poly::new(coeffs), phase)
}

/// Outer spectral factor together with the disk and circle roots of the
/// reduced lift.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectral {
    pub outer: Poly,
    /// Roots of `z^band g` strictly inside the disk (never 0).
    pub inside: Vec<(Complex64, usize)>,
    /// Circle roots of `z^band g`, projected to `|z| = 1`, with half their
    /// multiplicity (their multiplicity as roots of `outer`).
    pub circle: Vec<(Complex64, usize)>,
}

impl Spectral {
    /// Inner factor of `z^order g` (lambda = 1).
    pub fn inner_of_lift(&self, band: usize, order: usize) -> BlaschkeProduct {
        BlaschkeProduct {
            m0: order - band,
            zeros: self.inside.clone(),
            lambda: ONE,
        }
    }
}

/// Fejér–Riesz factor plus the root data behind it.
///
/// Each inside root `a` of the lift must pair with an outside root at
/// `1/conj(a)` (relative distance `≤ TOL_PAIRING`, same multiplicity).
pub fn spectral(g: &TrigPoly) -> Result<Spectral> {
    if g.is_zero() {
        return Err(Error::NullInput("trigonometric polynomial"));
    }
    let report = nonneg_check(g)?;
    match report.witness {
        Some(NegativityWitness::OddCircleRoot { root, multiplicity }) => {
            return Err(Error::OddCircleMultiplicity { root, multiplicity })
        }
        Some(w) => return Err(Error::NotNonnegative(w)),
        None => {}
    }
    let band = g.band();
    let Some(rs) = report.roots else {
        let c = g.mean().sqrt();
        return Ok(Spectral {
            outer: Poly::constant(Complex64::new(c, 0.0)),
            inside: Vec::new(),
            circle: Vec::new(),
        });
    };

    let mut kept = Vec::with_capacity(band);
    let mut inside = Vec::new();
    let mut circle = Vec::new();
    let outside: Vec<_> = rs
        .iter()
        .filter(|r| r.class == RootClass::Outside)
        .collect();
    let mut used = vec![false; outside.len()];
    for r in rs.iter() {
        match r.class {
            RootClass::Outside => {}
            RootClass::OnCircle => {
                // Even multiplicity was checked by nonneg_check; the root of a
                // real function sits exactly on the circle, so project.
                let z = r.location / r.location.norm();
                kept.extend(std::iter::repeat_n(z, r.multiplicity / 2));
                circle.push((z, r.multiplicity / 2));
            }
            RootClass::Inside => {
                let mirror = ONE / r.location.conj();
                let partner = outside.iter().enumerate().position(|(i, o)| {
                    !used[i]
                        && o.multiplicity == r.multiplicity
                        && (o.location - mirror).norm()
                            <= (tol::TOL_PAIRING * mirror.norm())
                                .max(2.0 * (r.error_bound + o.error_bound))
                });
                let Some(i) = partner else {
                    return Err(Error::RootPairing { root: r.location });
                };
                used[i] = true;
                // Symmetrize the pair so the outer factor is exactly divisible
                // by the Blaschke denominators built from the inside root.
                let a = (r.location + ONE / outside[i].location.conj()) * 0.5;
                kept.extend(std::iter::repeat_n(ONE / a.conj(), r.multiplicity));
                inside.push((a, r.multiplicity));
            }
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::RootPairing {
            root: outside[i].location,
        });
    }
    if kept.len() != band {
        return Err(Error::InvariantBreach(format!(
            "spectral factor has {} roots for band {band}",
            kept.len()
        )));
    }
    let raw = Poly::from_roots(ONE, &kept);
    let rough = Factor {
        angles: circle.iter().map(|&(z, m)| (z.arg(), m)).collect(),
        roots: inside.iter().map(|&(a, m)| (reflect(a), m)).collect(),
        scale: (g.mean() / raw.norm_sqr()).sqrt(),
    };
    let fine = polish(g, rough);
    let f = polish_coefficients(g, fine.poly());
    let residual = trig_from_modulus_squared(&f).max_diff(g);
    if residual > tol::TOL_RECOMPOSE * g.l1_coeffs() {
        return Err(Error::InvariantBreach(format!(
            "spectral factor reproduces g only to {residual:e}"
        )));
    }
    Ok(Spectral {
        outer: positive_at_origin(&f).0,
        inside: fine.roots.iter().map(|&(b, m)| (reflect(b), m)).collect(),
        circle: fine
            .angles
            .iter()
            .map(|&(t, m)| (Complex64::from_polar(1.0, t), m))
            .collect(),
    })
}

/// The outer polynomial `F` with `|F|² = g` on the circle and `F(0) > 0`.
///
/// Built from the roots of the lift: roots outside the disk are kept, each
/// circle root of multiplicity `2m` contributes multiplicity `m`, and the
/// scale is fixed by matching `ĝ(0)`.
pub fn fejer_riesz(g: &TrigPoly) -> Result<Poly> {
    spectral(g).map(|s| s.outer)
}

/// Multiply a polynomial by an inner divisor, cancelling its denominator.
///
/// Fails with `NotDivisible` when `Π (1 - conj(a) z)^mult` does not divide `f`.
pub fn blaschke_mul_poly(f: &Poly, j: &BlaschkeProduct) -> Result<Poly> {
    blaschke_mul_poly_with(f, j, &Tolerances::DEFAULT)
}

pub fn blaschke_mul_poly_with(f: &Poly, j: &BlaschkeProduct, tol: &Tolerances) -> Result<Poly> {
    let q = divide_denominator(f, &j.zeros, 1, tol.divide)?;
    let out = poly_mul(&q, &j.numerator());
    Ok(out.scale(j.lambda))
}

/// `f / Π (1 - conj(a) z)^{power·mult}`, failing with `NotDivisible` when a
/// remainder exceeds `tol` relative to its scale.
pub(crate) fn divide_denominator(
    f: &Poly,
    zeros: &[(Complex64, usize)],
    power: usize,
    tol: f64,
) -> Result<Poly> {
    let mut q = f.clone();
    for &(a, mult) in zeros {
        let w = a.conj();
        for _ in 0..mult * power {
            // The bottom-up remainder equals Σ q_k w^{d-k}; compare against
            // the same sum taken in absolute values.
            let scale: f64 = q
                .coeffs()
                .iter()
                .fold(0.0, |acc, c| acc * w.norm() + c.norm());
            let (quot, rem) = q.div_one_minus(w);
            if rem.norm() > tol * scale {
                return Err(Error::NotDivisible {
                    remainder: rem.norm() / scale,
                });
            }
            q = quot;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::trig_from_modulus_squared;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_outer_of_z() {
        let f = inner_outer(&Poly::monomial(1)).unwrap();
        assert_eq!(f.inner.m0(), 1);
        assert!(f.inner.zeros().is_empty());
        assert_eq!(f.inner.lambda(), ONE);
        assert_eq!(f.outer, Poly::one());
    }

    #[test]
    fn inner_outer_of_reflected_pair() {
        let p = Poly::from_real(&[-0.5, 1.25, -0.5]);
        let f = inner_outer(&p).unwrap();
        assert_eq!(f.inner.m0(), 0);
        assert_eq!(f.inner.zeros().len(), 1);
        assert!((f.inner.zeros()[0].0 - c(0.5, 0.0)).norm() < 1e-14);
        assert!((f.inner.lambda() - ONE).norm() < 1e-14);
        let expect = Poly::from_real(&[1.0, -1.0, 0.25]);
        assert!(f.outer.max_diff(&expect) < 1e-14, "{:?}", f.outer);
        assert!(f.residual(&p, 4096).unwrap() < 1e-12);
    }

    #[test]
    fn inner_outer_of_outer_poly() {
        let p = Poly::from_real(&[1.0, 1.0]);
        let f = inner_outer(&p).unwrap();
        assert!(f.inner.is_trivial());
        assert!((f.inner.lambda() - ONE).norm() < 1e-15);
        assert!(f.outer.max_diff(&p) < 1e-15);
    }

    #[test]
    fn inner_outer_pushes_phase_into_lambda() {
        let p = Poly::new(vec![c(0.0, -2.0), c(0.0, 1.0)]); // i (z - 2)
        let f = inner_outer(&p).unwrap();
        assert!(f.inner.is_trivial());
        assert!(f.outer.coeff(0).im.abs() < 1e-15 && f.outer.coeff(0).re > 0.0);
        assert!((f.inner.lambda() - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn null_input_rejected() {
        assert!(matches!(
            inner_outer(&Poly::zero()),
            Err(Error::NullInput(_))
        ));
        assert!(matches!(
            fejer_riesz(&TrigPoly::zero(2)),
            Err(Error::NullInput(_))
        ));
    }

    #[test]
    fn fejer_riesz_examples() {
        let f = fejer_riesz(&TrigPoly::constant(0, 1.0)).unwrap();
        assert!(f.max_diff(&Poly::one()) < 1e-15);

        let f = fejer_riesz(&TrigPoly::from_real(1, &[2.0, 1.0])).unwrap();
        assert!(f.max_diff(&Poly::from_real(&[1.0, 1.0])) < 1e-12, "{f:?}");

        let f = fejer_riesz(&TrigPoly::from_real(1, &[1.25, -0.5])).unwrap();
        assert!(f.max_diff(&Poly::from_real(&[1.0, -0.5])) < 1e-14, "{f:?}");
    }

    #[test]
    fn fejer_riesz_rejects_sign_change() {
        let err = fejer_riesz(&TrigPoly::from_real(1, &[0.0, 0.5])).unwrap_err();
        assert!(matches!(err, Error::NotNonnegative(_)));
        let delta = PI / 4096.0;
        let g = TrigPoly::new(1, &[c(1.0 - 1e-7, 0.0), Complex64::from_polar(0.5, -delta)]);
        assert!(matches!(
            fejer_riesz(&g).unwrap_err(),
            Error::OddCircleMultiplicity {
                multiplicity: 1,
                ..
            }
        ));
    }

    #[test]
    fn fejer_riesz_recovers_circle_and_outside_roots() {
        let f = Poly::from_roots(
            c(0.3, 0.0),
            &[Complex64::from_polar(1.0, 2.0), c(1.2, -0.7), c(-0.4, 1.9)],
        );
        let g = trig_from_modulus_squared(&f);
        let out = fejer_riesz(&g).unwrap();
        let phase = f.coeff(0) / f.coeff(0).norm();
        assert!(out.max_diff(&f.scale(phase.conj())) < 1e-10);
    }

    #[test]
    fn blaschke_eval_examples() {
        let b = BlaschkeProduct::power_of_z(1);
        assert_eq!(blaschke_eval(&b, c(0.0, 1.0)).unwrap(), c(0.0, 1.0));
        let b = BlaschkeProduct::single(c(0.5, 0.0)).unwrap();
        assert!((blaschke_eval(&b, ONE).unwrap() - ONE).norm() < 1e-15);
        assert!((blaschke_eval(&b, c(-1.0, 0.0)).unwrap() + ONE).norm() < 1e-15);
        assert!(matches!(
            blaschke_eval(&b, c(2.0, 0.0)),
            Err(Error::PoleHit { .. })
        ));
    }

    #[test]
    fn blaschke_unimodular_on_circle() {
        let b = BlaschkeProduct::new(2, vec![(c(0.3, 0.4), 2), (c(-0.9, 0.1), 1)], c(0.6, 0.8))
            .unwrap();
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, 0.1 * j as f64);
            assert!((b.eval(z).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn blaschke_validation() {
        assert!(BlaschkeProduct::single(c(1.0, 0.0)).is_err());
        assert!(BlaschkeProduct::single(c(0.0, 0.0)).is_err());
        assert!(BlaschkeProduct::new(0, vec![], c(2.0, 0.0)).is_err());
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisors(&BlaschkeProduct::identity()).len(), 1);
        let one = BlaschkeProduct::single(c(0.5, 0.0)).unwrap();
        let ds = divisors(&one);
        assert_eq!(ds.len(), 2);
        assert!(ds[0].is_trivial());
        let b = BlaschkeProduct::new(1, vec![(c(0.5, 0.0), 2)], ONE).unwrap();
        assert_eq!(divisors(&b).len(), 6);
    }

    #[test]
    fn blaschke_mul_examples() {
        let f = Poly::from_real(&[1.0, -0.5]);
        let b = BlaschkeProduct::single(c(0.5, 0.0)).unwrap();
        let out = blaschke_mul_poly(&f, &b).unwrap();
        assert!(out.max_diff(&Poly::from_real(&[-0.5, 1.0])) < 1e-15);

        let any = Poly::new(vec![c(0.3, 1.0), c(2.0, -1.0), c(0.5, 0.5)]);
        assert_eq!(
            blaschke_mul_poly(&any, &BlaschkeProduct::identity()).unwrap(),
            any
        );

        let err = blaschke_mul_poly(&Poly::from_real(&[1.0, 1.0]), &b).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { .. }));
    }
}
