//! Hermitian trigonometric polynomials: real-valued functions on the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{NegativityWitness, Result};
use crate::poly::Poly;
use crate::roots::{roots, Root, RootClass, RootSet};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `g(ζ) = Σ_{|k|≤n} ĝ(k) ζ^k` with `ĝ(-k) = conj(ĝ(k))`.
///
/// Only the coefficients `ĝ(0..=n)` are stored; the negative half is
/// implied, so the Hermitian symmetry holds by construction. `ĝ(0)` is
/// stored with zero imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    /// Build from `ĝ(0), ĝ(1), ...`; the declared band `n` must cover them.
    ///
    /// The imaginary part of `ĝ(0)` is dropped.
    pub fn new(n: usize, nonneg: &[Complex64]) -> Self {
        assert!(
            nonneg.len() <= n + 1,
            "{} coefficients do not fit band {n}",
            nonneg.len()
        );
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[..nonneg.len()].copy_from_slice(nonneg);
        coeffs[0].im = 0.0;
        TrigPoly { n, coeffs }
    }

    pub fn from_real(n: usize, nonneg: &[f64]) -> Self {
        let c: Vec<_> = nonneg.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(n, &c)
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, &[])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::from_real(n, &[value])
    }

    /// Declared band limit.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest `k` with `ĝ(k) != 0` (0 for the zero function).
    pub fn band(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// `ĝ(k)` for any integer `k`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        let c = self.coeffs.get(idx).copied().unwrap_or(ZERO);
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    /// `ĝ(0)`, which is also `∫ g dm`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// The stored coefficients `ĝ(0..=n)`.
    pub fn nonneg_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Same function with a wider (or equal) declared band.
    pub fn with_band(&self, n: usize) -> Self {
        let band = self.band();
        assert!(n >= band, "band {band} does not fit in {n}");
        Self::new(n, &self.coeffs[..=band.min(self.n)])
    }

    /// Value at `e^{iθ}`; always real.
    pub fn eval_angle(&self, theta: f64) -> f64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = ZERO;
        for &c in self.coeffs[1..].iter().rev() {
            acc = (acc + c) * z;
        }
        self.coeffs[0].re + 2.0 * acc.re
    }

    /// Values on the `m`-point uniform grid `θ_j = 2πj/m`.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m)
            .map(|j| self.eval_angle(2.0 * PI * j as f64 / m as f64))
            .collect()
    }

    /// `Σ |ĝ(k)|` over all integers `k`: an upper bound for `|g|` on the circle.
    pub fn l1_coeffs(&self) -> f64 {
        self.coeffs[0].norm() + 2.0 * self.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>()
    }

    pub fn scale(&self, s: f64) -> Self {
        let c: Vec<_> = self.coeffs.iter().map(|&c| c * s).collect();
        Self::new(self.n, &c)
    }

    /// Coefficientwise sum; the band is the larger of the two.
    pub fn add(&self, other: &TrigPoly) -> Self {
        let n = self.n.max(other.n);
        let c: Vec<_> = (0..=n as i64)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        Self::new(n, &c)
    }

    pub fn sub(&self, other: &TrigPoly) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Largest coefficientwise difference.
    pub fn max_diff(&self, other: &TrigPoly) -> f64 {
        let n = self.n.max(other.n) as i64;
        (0..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// `z^n g` as a polynomial of degree ≤ 2n, using the declared band.
    pub fn lift(&self) -> Poly {
        self.lift_to(self.n)
    }

    /// `z^order g`; this is `z̄ φ̄ g` for the symbol `φ = z̄^{order+1}`.
    ///
    /// Panics if the effective band exceeds `order`.
    pub fn lift_to(&self, order: usize) -> Poly {
        let band = self.band();
        assert!(band <= order, "band {band} exceeds lift order {order}");
        let mut coeffs = vec![ZERO; 2 * order + 1];
        for k in -(band as i64)..=(band as i64) {
            coeffs[(k + order as i64) as usize] = self.coeff(k);
        }
        Poly::new(coeffs)
    }

    /// Inverse of [`TrigPoly::lift_to`] for a polynomial that is Hermitian
    /// about degree `order` up to rounding.
    ///
    /// The two mirrored coefficients are averaged; the largest asymmetry seen
    /// is returned next to the result.
    pub fn unlift(p: &Poly, order: usize) -> (TrigPoly, f64) {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut asym: f64 = 0.0;
        for k in 0..=order {
            let hi = p.coeff(order + k);
            let lo = p.coeff(order - k).conj();
            asym = asym.max((hi - lo).norm());
            coeffs.push((hi + lo) * 0.5);
        }
        if let Some(d) = p.degree() {
            for k in (2 * order + 1)..=d {
                asym = asym.max(p.coeff(k).norm());
            }
        }
        asym = asym.max(coeffs[0].im.abs());
        (TrigPoly::new(order, &coeffs), asym)
    }

    /// The reduced lift `z^band g`, whose constant term `conj(ĝ(band))` is nonzero.
    pub(crate) fn reduced_lift(&self) -> Poly {
        self.lift_to(self.band())
    }
}

/// `|f|²` on the circle as a trigonometric polynomial of band `deg f`.
///
/// `ĝ(k) = Σ_j c_{j+k} conj(c_j)` for `k ≥ 0`; `ĝ(0)` is accumulated as a sum
/// of squared moduli.
pub fn trig_from_modulus_squared(f: &Poly) -> TrigPoly {
    let c = f.coeffs();
    let Some(d) = f.degree() else {
        return TrigPoly::zero(0);
    };
    let mut out = Vec::with_capacity(d + 1);
    out.push(Complex64::new(f.norm_sqr(), 0.0));
    for k in 1..=d {
        let s: Complex64 = (0..=d - k).map(|j| c[j + k] * c[j].conj()).sum();
        out.push(s);
    }
    TrigPoly::new(d, &out)
}

/// `z^n g` for the declared band `n`.
pub fn lift(g: &TrigPoly) -> Poly {
    g.lift()
}

/// Roots of the reduced lift `z^band g` (band ≥ 1).
///
/// The lift of a real function is self-reciprocal: its roots come in pairs
/// `(a, 1/conj(a))`, and circle roots have even multiplicity. Multiple roots
/// and crowded circle roots are located only to their error bound, so a root
/// whose reflection lies within twice its error bound may really sit on the
/// circle. Such roots whose error discs overlap are pooled; a pool of even
/// total multiplicity is replaced by double circle roots, seeded by angle
/// (an `m`-fold root at radius `1 - ε` is spread over `±√(2ε)`). Callers that
/// build factors from these roots refine and verify them.
pub fn lift_roots(g: &TrigPoly) -> Result<RootSet> {
    let rs = roots(&g.reduced_lift())?;
    Ok(RootSet::from_roots(pool_uncertain(rs.roots().to_vec())))
}

/// Angles (relative to `base`) standing for the `m` copies of `r`, in pairs
/// spread evenly over `±√(2ε)` with `ε = |1 - |r||`.
fn spread_angles(r: &Root, base: Complex64) -> Vec<f64> {
    let theta = (r.location * base.conj()).arg();
    let pairs = r.multiplicity / 2;
    let alpha = (2.0 * (1.0 - r.location.norm()).abs()).sqrt();
    let mut out = Vec::with_capacity(r.multiplicity);
    for j in 0..pairs {
        let t = if pairs > 1 {
            theta + alpha * (2.0 * j as f64 - (pairs - 1) as f64) / (pairs - 1) as f64
        } else {
            theta
        };
        out.extend([t, t]);
    }
    if r.multiplicity % 2 == 1 {
        out.push(theta);
    }
    out
}

fn distance_to_mirror(z: Complex64) -> f64 {
    (z - Complex64::new(1.0, 0.0) / z.conj()).norm()
}

fn pool_uncertain(rs: Vec<Root>) -> Vec<Root> {
    let uncertain = |r: &Root| {
        let mirror = distance_to_mirror(r.location);
        if r.class == RootClass::OnCircle && r.multiplicity == 2 {
            return false;
        }
        (r.multiplicity >= 2 && mirror <= tol::TOL_PAIRING)
            || (r.error_bound > tol::TOL_PAIRING && mirror <= 2.0 * r.error_bound)
    };
    let idx: Vec<usize> = (0..rs.len()).filter(|&i| uncertain(&rs[i])).collect();
    if idx.is_empty() {
        return rs;
    }
    // Connected components of overlapping error discs.
    let mut comp: Vec<usize> = (0..idx.len()).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let (ra, rb) = (&rs[idx[a]], &rs[idx[b]]);
            if (ra.location - rb.location).norm() <= 2.0 * (ra.error_bound + rb.error_bound) {
                let (x, y) = (find(&mut comp, a), find(&mut comp, b));
                comp[x] = y;
            }
        }
    }
    let mut replaced = vec![false; rs.len()];
    let mut out = Vec::new();
    for root in 0..idx.len() {
        let members: Vec<&Root> = (0..idx.len())
            .filter(|&a| find(&mut comp, a) == root)
            .map(|a| &rs[idx[a]])
            .collect();
        let total: usize = members.iter().map(|r| r.multiplicity).sum();
        if members.is_empty() || total % 2 == 1 {
            continue;
        }
        let base = members[0].location / members[0].location.norm();
        let mut angles: Vec<f64> = members
            .iter()
            .flat_map(|r| spread_angles(r, base))
            .collect();
        angles.sort_by(f64::total_cmp);
        let bound = members.iter().map(|r| r.error_bound).fold(0.0, f64::max);
        for pair in angles.chunks(2) {
            out.push(Root {
                location: base * Complex64::from_polar(1.0, 0.5 * (pair[0] + pair[1])),
                multiplicity: 2,
                class: RootClass::OnCircle,
                error_bound: bound,
            });
        }
        for (a, &i) in idx.iter().enumerate() {
            if find(&mut comp, a) == root {
                replaced[i] = true;
            }
        }
    }
    rs.into_iter()
        .zip(replaced)
        .filter(|(_, r)| !r)
        .map(|(r, _)| r)
        .chain(out)
        .collect()
}

/// Outcome of [`nonneg_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegReport {
    pub nonnegative: bool,
    pub min_value: f64,
    pub witness: Option<NegativityWitness>,
    /// Roots of the reduced lift `z^band g` (absent for constants).
    pub roots: Option<RootSet>,
}

/// Decide `g ≥ 0` on the circle.
///
/// Scans `max(4096, 64 n)` grid points with slack `1e-12 · Σ|ĝ(k)|`, then
/// requires every root of the lift on the circle to have even multiplicity.
pub fn nonneg_check(g: &TrigPoly) -> Result<NonnegReport> {
    let m = tol::n_check(g.n());
    let slack = tol::TOL_NONNEG_REL * g.l1_coeffs();
    let mut min_value = f64::INFINITY;
    let mut min_theta = 0.0;
    for j in 0..m {
        let theta = 2.0 * PI * j as f64 / m as f64;
        let v = g.eval_angle(theta);
        if v < min_value {
            min_value = v;
            min_theta = theta;
        }
    }
    if min_value < -slack {
        return Ok(NonnegReport {
            nonnegative: false,
            min_value,
            witness: Some(NegativityWitness::GridPoint {
                theta: min_theta,
                value: min_value,
            }),
            roots: None,
        });
    }
    if g.is_zero() || g.band() == 0 {
        return Ok(NonnegReport {
            nonnegative: true,
            min_value,
            witness: None,
            roots: None,
        });
    }
    let rs = lift_roots(g)?;
    let odd = rs
        .iter()
        .find(|r| r.class == RootClass::OnCircle && r.multiplicity % 2 == 1);
    let witness = odd.map(|r| NegativityWitness::OddCircleRoot {
        root: r.location,
        multiplicity: r.multiplicity,
    });
    Ok(NonnegReport {
        nonnegative: witness.is_none(),
        min_value,
        witness,
        roots: Some(rs),
    })
}
