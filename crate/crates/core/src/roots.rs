//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity clustering.
//!
//! Roots at the origin are split off exactly from the vanishing low-order
//! coefficients. The remaining roots are iterated simultaneously, then groups
//! of `m` approximations within the merge radius (`10 · TOL_ROOT^{1/m}` for a
//! unit local scale) are merged into a single root of multiplicity `m` at
//! their centroid and polished with Newton steps on the `(m-1)`-th
//! derivative, where the root is simple.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::tol::{EPS_CIRCLE, MAX_ITER, TOL_ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RootClass {
    Inside,
    OnCircle,
    Outside,
}

impl RootClass {
    pub fn of(z: Complex64) -> Self {
        let r = z.norm();
        if r < 1.0 - EPS_CIRCLE {
            RootClass::Inside
        } else if r <= 1.0 + EPS_CIRCLE {
            RootClass::OnCircle
        } else {
            RootClass::Outside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
    pub class: RootClass,
    /// Estimated forward error of `location`: the rounding-level residual of
    /// `p^{(m-1)}` divided by `|p^{(m)}|`, with a safety factor of 100. For a
    /// multiple root it is at least the radius within which `p` cannot tell
    /// the `m`-fold root from `m` nearby ones.
    pub error_bound: f64,
}

/// Distinct roots with multiplicities; the multiplicities sum to the degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub(crate) fn from_roots(roots: Vec<Root>) -> Self {
        RootSet { roots }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.roots.iter()
    }

    /// Number of distinct roots.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Sum of multiplicities.
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn count(&self, class: RootClass) -> usize {
        self.roots
            .iter()
            .filter(|r| r.class == class)
            .map(|r| r.multiplicity)
            .sum()
    }

    /// Every root, repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location, r.multiplicity))
            .collect()
    }

    /// `lead · Π (z - a)^m`.
    pub fn recompose(&self, lead: Complex64) -> Poly {
        Poly::from_roots(lead, &self.expanded())
    }
}

/// All roots of `p` with multiplicities and circle classification.
///
/// A nonzero constant has an empty root set. The zero polynomial is rejected.
pub fn roots(p: &Poly) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::NullInput("polynomial"));
    }
    let m0 = p.trailing_zeros();
    let q = p.unshift(m0);
    let mut out = Vec::new();
    if m0 > 0 {
        out.push(Root {
            location: Complex64::new(0.0, 0.0),
            multiplicity: m0,
            class: RootClass::Inside,
            error_bound: 0.0,
        });
    }
    let approx = aberth(&q)?;
    for (location, multiplicity, error_bound) in cluster(&q, &approx) {
        out.push(Root {
            location,
            multiplicity,
            class: RootClass::of(location),
            error_bound,
        });
    }
    Ok(RootSet { roots: out })
}

/// Raw simultaneous iteration on a polynomial with nonzero constant term.
fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let d = p.degree().unwrap_or(0);
    match d {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeff(0) / p.coeff(1)]),
        _ => {}
    }
    let dp = p.derivative();
    // Start on the circle whose radius is the geometric mean of the root moduli.
    let radius = (p.coeff(0).norm() / p.leading().norm()).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;

    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (pv, scale) = p.eval_with_scale(z[i]);
            if pv.norm() <= 4.0 * d as f64 * eps * scale {
                done[i] = true;
                continue;
            }
            all_done = false;
            let ratio = pv / dp.eval(z[i]);
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // Coincident approximations: nudge apart.
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= eps * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    // Accept the iterate if every root meets the backward error target.
    let worst = z
        .iter()
        .map(|&zi| {
            let (v, s) = p.eval_with_scale(zi);
            if s == 0.0 {
                0.0
            } else {
                v.norm() / s
            }
        })
        .fold(0.0, f64::max);
    if worst <= TOL_ROOT {
        Ok(z)
    } else {
        Err(Error::NonConvergence {
            iterations: MAX_ITER,
        })
    }
}

/// Merge radius for an `m`-fold root near `c`.
///
/// A perturbation of relative size `TOL_ROOT` moves an `m`-fold root by about
/// `(TOL_ROOT · scale · m! / |p^{(m)}(c)|)^{1/m}`; with a unit local scale this
/// is `TOL_ROOT^{1/m}`. The radius is ten times the larger of the two, capped
/// at the resolution limit `RESOLUTION · max(1, |c|)`.
fn cluster_radius(p: &Poly, dm: &Poly, m: usize, c: Complex64) -> f64 {
    let unit = TOL_ROOT.powf(1.0 / m as f64) * c.norm().max(1.0);
    let (_, scale) = p.eval_with_scale(c);
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let local = (TOL_ROOT * scale * factorial / dm.eval(c).norm()).powf(1.0 / m as f64);
    (10.0 * unit.max(local)).min(RESOLUTION * c.norm().max(1.0))
}

/// Approximations farther apart than this (relative) are never merged.
const RESOLUTION: f64 = 1e-2;
/// Non-members must stay this many cluster spreads away from the centroid.
const ISOLATION: f64 = 3.0;

/// Merge approximations of multiple roots.
///
/// Around each seed the largest group of nearest neighbours that fits in
/// [`cluster_radius`] and is isolated from the other approximations is tried
/// first. A group is accepted only if the polished centroid has backward
/// error `≤ TOL_ROOT` on `p`, so a pair of distinct roots is merged only when
/// `p` cannot tell it from a double root.
fn cluster(p: &Poly, approx: &[Complex64]) -> Vec<(Complex64, usize, f64)> {
    // derivs[k] = p^{(k)}
    let mut derivs = vec![p.clone()];
    for k in 1..=approx.len() {
        let next = derivs[k - 1].derivative();
        derivs.push(next);
    }
    let mut unassigned: Vec<Complex64> = approx.to_vec();
    let mut out = Vec::new();
    while let Some(seed) = unassigned.pop() {
        let mut order: Vec<usize> = (0..unassigned.len()).collect();
        order.sort_by(|&i, &j| {
            (unassigned[i] - seed)
                .norm()
                .total_cmp(&(unassigned[j] - seed).norm())
        });
        let mut chosen = (seed, 1, Vec::new());
        for m in (2..=order.len() + 1).rev() {
            let picked = &order[..m - 1];
            let mut members: Vec<Complex64> = picked.iter().map(|&j| unassigned[j]).collect();
            members.push(seed);
            let centroid = mean(&members);
            let radius = cluster_radius(p, &derivs[m], m, centroid);
            let spread = members
                .iter()
                .map(|z| (z - centroid).norm())
                .fold(0.0, f64::max);
            let nearest_other = order[m - 1..]
                .iter()
                .map(|&j| (unassigned[j] - centroid).norm())
                .fold(f64::INFINITY, f64::min);
            if spread > radius || nearest_other < ISOLATION * spread {
                continue;
            }
            let z = polish(&derivs[m - 1], &derivs[m], centroid, radius);
            let (v, scale) = p.eval_with_scale(z);
            if v.norm() <= TOL_ROOT * scale {
                chosen = (z, m, picked.to_vec());
                break;
            }
        }
        let (location, m, mut picked) = chosen;
        picked.sort_unstable_by(|a, b| b.cmp(a));
        for j in picked {
            unassigned.swap_remove(j);
        }
        let location = if m == 1 {
            let radius = cluster_radius(p, &derivs[1], 1, location);
            polish(p, &derivs[1], location, radius)
        } else {
            location
        };
        let (_, s) = derivs[m - 1].eval_with_scale(location);
        let mut bound = 100.0 * f64::EPSILON * s / derivs[m].eval(location).norm();
        if m > 1 {
            // A merged group is only known to stand for an m-fold root up to
            // the perturbation radius of the acceptance test.
            bound = bound.max(0.1 * cluster_radius(p, &derivs[m], m, location));
        }
        out.push((location, m, bound));
    }
    out.sort_by(|a, b| {
        a.0.norm()
            .total_cmp(&b.0.norm())
            .then(a.0.arg().total_cmp(&b.0.arg()))
    });
    out
}

fn mean(zs: &[Complex64]) -> Complex64 {
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

/// Newton on `target = p^{(m-1)}` (derivative `dt`), keeping a step only when
/// it reduces the residual and stays within `radius` of the start.
fn polish(target: &Poly, dt: &Poly, start: Complex64, radius: f64) -> Complex64 {
    let mut z = start;
    let mut best = target.eval(z).norm();
    for _ in 0..8 {
        let denom = dt.eval(z);
        if denom.norm() == 0.0 {
            break;
        }
        let next = z - target.eval(z) / denom;
        let r = target.eval(next).norm();
        if r.is_nan() || r >= best || (next - start).norm() > radius {
            break;
        }
        z = next;
        best = r;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn find(rs: &RootSet, z: Complex64) -> Root {
        *rs.iter()
            .find(|r| (r.location - z).norm() < 1e-9)
            .unwrap_or_else(|| panic!("root {z} not found in {rs:?}"))
    }

    #[test]
    fn unit_roots_on_circle() {
        let rs = roots(&Poly::from_real(&[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(find(&rs, c(1.0, 0.0)).class, RootClass::OnCircle);
        assert_eq!(find(&rs, c(-1.0, 0.0)).class, RootClass::OnCircle);
    }

    #[test]
    fn cube_at_origin() {
        let rs = roots(&Poly::monomial(3)).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.roots()[0].multiplicity, 3);
        assert_eq!(rs.roots()[0].class, RootClass::Inside);
    }

    #[test]
    fn reflected_pair() {
        let rs = roots(&Poly::from_real(&[-0.5, 1.25, -0.5])).unwrap();
        assert_eq!(find(&rs, c(0.5, 0.0)).class, RootClass::Inside);
        assert_eq!(find(&rs, c(2.0, 0.0)).class, RootClass::Outside);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&Poly::constant(c(3.0, 1.0))).unwrap().is_empty());
        assert!(matches!(roots(&Poly::zero()), Err(Error::NullInput(_))));
    }

    #[test]
    fn double_circle_root_detected() {
        let z0 = Complex64::from_polar(1.0, 0.7);
        let p = Poly::from_roots(c(1.0, 0.0), &[z0, z0, c(1.5, 0.2), c(0.3, -0.1)]);
        let rs = roots(&p).unwrap();
        let r = find(&rs, z0);
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.class, RootClass::OnCircle);
        assert!((r.location - z0).norm() < 1e-12);
        assert_eq!(rs.degree(), 4);
    }

    #[test]
    fn quadruple_root() {
        let z0 = Complex64::from_polar(1.0, -2.0);
        let p = Poly::from_roots(c(0.7, 0.1), &[z0; 4]);
        let rs = roots(&p).unwrap();
        assert_eq!(rs.len(), 1, "{rs:?}");
        assert_eq!(rs.roots()[0].multiplicity, 4);
        assert!((rs.roots()[0].location - z0).norm() < 1e-10);
    }
}
