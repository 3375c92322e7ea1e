//! Randomized search for a perturbation `h` that keeps `g ± h` nonnegative.
//!
//! Admissible perturbations of `g` inside V are real trigonometric
//! polynomials `h` with band `≤ n`, `ĥ(0) = 0` and `g ± h ≥ 0`. For a
//! direction `h` the largest admissible step is `min g/|h|` over the
//! constraint points. Those are a uniform grid plus every circle zero of `g`
//! and points just beside it, so that a zero falling between grid points
//! cannot be stepped over.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::roots::RootClass;
use crate::trig::{nonneg_check, TrigPoly};

/// A perturbation with `‖h‖∞` above this counts as found.
pub const FOUND_THRESHOLD: f64 = 1e-6;
const GRID: usize = 4096;
/// Constraint points with the smallest `g` that are always evaluated.
const ACTIVE: usize = 256;
const LOCAL_OFFSETS: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];
const STEP_SCALES: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

struct Point {
    g: f64,
    /// `ζ^k` for `k = 1..=n`.
    powers: Vec<Complex64>,
}

pub struct PerturbationOracle {
    n: usize,
    /// Sorted by increasing `g`.
    points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSearch {
    pub trials: usize,
    /// Largest `‖t h‖∞` over admissible steps seen.
    pub best_size: f64,
    /// `ĥ(1..=n)` of the best direction (scaled so `Σ 2|ĥ(k)| = 1`).
    pub best_direction: Vec<Complex64>,
    pub found: bool,
}

impl PerturbationOracle {
    /// Requires `g ≥ 0`.
    pub fn new(g: &TrigPoly, n: usize) -> Result<Self> {
        let report = nonneg_check(g)?;
        if let Some(w) = report.witness {
            return Err(Error::NotNonnegative(w));
        }
        let mut thetas: Vec<f64> = (0..GRID).map(|j| TAU * j as f64 / GRID as f64).collect();
        if let Some(rs) = &report.roots {
            for r in rs.iter().filter(|r| r.class == RootClass::OnCircle) {
                let t0 = r.location.arg();
                thetas.push(t0);
                for d in LOCAL_OFFSETS {
                    thetas.push(t0 - d);
                    thetas.push(t0 + d);
                }
            }
        }
        let mut points: Vec<Point> = thetas
            .into_iter()
            .map(|theta| {
                let z = Complex64::from_polar(1.0, theta);
                let mut powers = Vec::with_capacity(n);
                let mut p = Complex64::new(1.0, 0.0);
                for _ in 0..n {
                    p *= z;
                    powers.push(p);
                }
                Point {
                    g: g.eval_angle(theta).max(0.0),
                    powers,
                }
            })
            .collect();
        points.sort_by(|a, b| a.g.total_cmp(&b.g));
        Ok(PerturbationOracle { n, points })
    }

    fn h_at(p: &Point, a: &[Complex64]) -> f64 {
        2.0 * p.powers.iter().zip(a).map(|(z, c)| (z * c).re).sum::<f64>()
    }

    fn step_over(points: &[Point], a: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|p| {
                let h = Self::h_at(p, a).abs();
                if h == 0.0 {
                    f64::INFINITY
                } else {
                    p.g / h
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `t` with `g ± t h ≥ 0` on every constraint point, for
    /// `h = Σ_{k=1..n} 2 Re(a_k ζ^k)`.
    pub fn max_step(&self, a: &[Complex64]) -> f64 {
        let bound: f64 = a.iter().map(|c| 2.0 * c.norm()).sum();
        let split = ACTIVE.min(self.points.len());
        let t = Self::step_over(&self.points[..split], a);
        match self.points.get(split) {
            // Beyond the active set g ≥ rest, and |h| ≤ bound.
            Some(rest) if t > rest.g / bound => t.min(Self::step_over(&self.points[split..], a)),
            _ => t,
        }
    }

    /// `‖t h‖∞` on the constraint points for the largest admissible `t`.
    pub fn admissible_size(&self, a: &[Complex64]) -> f64 {
        let t = self.max_step(a);
        if !t.is_finite() {
            return 0.0;
        }
        let sup = self
            .points
            .iter()
            .map(|p| Self::h_at(p, a).abs())
            .fold(0.0, f64::max);
        t * sup
    }

    /// Random directions for the first half of the budget, then random
    /// coordinate moves around the best direction so far.
    pub fn search<R: Rng>(&self, trials: usize, rng: &mut R) -> PerturbationSearch {
        let mut best = PerturbationSearch {
            trials,
            best_size: 0.0,
            best_direction: vec![Complex64::new(0.0, 0.0); self.n],
            found: false,
        };
        if self.n == 0 {
            return best;
        }
        let mut best_step = 0.0;
        for trial in 0..trials {
            let a = if trial < trials / 2 || best_step == 0.0 {
                let mut a: Vec<Complex64> = (0..self.n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                normalize(&mut a);
                a
            } else {
                let mut a = best.best_direction.clone();
                let k = rng.gen_range(0..self.n);
                let s = STEP_SCALES[trial % STEP_SCALES.len()];
                a[k] += Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
                normalize(&mut a);
                a
            };
            let step = self.max_step(&a);
            // Σ 2|a_k| = 1 bounds ‖h‖∞, so only promising steps need the full size.
            if step > best_step {
                let size = self.admissible_size(&a);
                if size > best.best_size {
                    best.best_size = size;
                }
                best_step = step;
                best.best_direction = a;
            }
        }
        best.found = best.best_size > FOUND_THRESHOLD;
        best
    }
}

fn normalize(a: &mut [Complex64]) {
    let s: f64 = a.iter().map(|c| 2.0 * c.norm()).sum();
    if s > 0.0 {
        for c in a {
            *c /= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::poly::Poly;
    use crate::trig::trig_from_modulus_squared;

    #[test]
    fn extreme_point_admits_no_perturbation() {
        let g = TrigPoly::from_real(1, &[1.0, 0.5]);
        let oracle = PerturbationOracle::new(&g, 1).unwrap();
        let res = oracle.search(2000, &mut gen::rng(3));
        assert!(!res.found, "{res:?}");
    }

    #[test]
    fn strictly_positive_point_has_room() {
        let g = TrigPoly::from_real(1, &[1.0, 0.2]);
        let oracle = PerturbationOracle::new(&g, 1).unwrap();
        let res = oracle.search(200, &mut gen::rng(3));
        assert!(res.found);
        assert!(res.best_size > 0.1);
    }

    #[test]
    fn split_direction_is_admissible() {
        // g = |z - 1/2|²·(4/5): the split direction h = g1 - g keeps both halves ≥ 0.
        let g = TrigPoly::from_real(1, &[1.0, -0.4]);
        let oracle = PerturbationOracle::new(&g, 1).unwrap();
        let h = [Complex64::new(0.0, 0.3)];
        assert!(oracle.max_step(&h) >= 1.0 - 1e-9);
    }

    #[test]
    fn zero_between_grid_points_blocks_steps() {
        // Double circle zero half a grid step off the grid.
        let zeta = Complex64::from_polar(1.0, TAU / GRID as f64 * 0.5);
        let f = Poly::from_roots(Complex64::new(1.0, 0.0), &[-zeta]);
        let g = trig_from_modulus_squared(&f);
        let g = g.scale(1.0 / g.mean());
        let oracle = PerturbationOracle::new(&g, 1).unwrap();
        assert!(oracle.max_step(&[Complex64::new(0.5, 0.0)]) < 1e-12);
    }
}
