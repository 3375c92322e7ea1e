//! Gauss–Newton polishing of a spectral factor.
//!
//! Roots of the lift that lie on (or cluster near) the circle are located only
//! to about the square root of machine precision, yet the factorization
//! `ĝ(k) = Σ_j F_{j+k} conj(F_j)` is well conditioned once circle roots are
//! constrained to the circle. The polish fits the angles of the circle roots,
//! the off-circle roots and a real scale to the coefficients of `g`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::poly::Poly;
use crate::trig::TrigPoly;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_STEPS: usize = 40;
const HALVINGS: usize = 12;
const COEFF_STEPS: usize = 3;

/// Parameters of `F = s·Π(z - e^{iθ_j})^{m_j}·Π(z - b_k)^{m_k}`.
#[derive(Debug, Clone)]
pub(crate) struct Factor {
    pub angles: Vec<(f64, usize)>,
    pub roots: Vec<(Complex64, usize)>,
    pub scale: f64,
}

impl Factor {
    pub fn poly(&self) -> Poly {
        let all: Vec<Complex64> = self
            .angles
            .iter()
            .flat_map(|&(t, m)| std::iter::repeat_n(Complex64::from_polar(1.0, t), m))
            .chain(self.roots.iter().flat_map(|&(b, m)| std::iter::repeat_n(b, m)))
            .collect();
        Poly::from_roots(Complex64::new(self.scale, 0.0), &all)
    }

    fn step(&self, delta: &DVector<f64>) -> Factor {
        let k = self.angles.len();
        let mut next = self.clone();
        for (j, a) in next.angles.iter_mut().enumerate() {
            a.0 += delta[j];
        }
        for (j, r) in next.roots.iter_mut().enumerate() {
            r.0 += Complex64::new(delta[k + 2 * j], delta[k + 2 * j + 1]);
        }
        next.scale *= delta[delta.len() - 1].exp();
        next
    }
}

/// `c_k = Σ_j a_{j+k} conj(b_j)` for `k = 0..=band`.
fn correlate(a: &Poly, b: &Poly, band: usize) -> Vec<Complex64> {
    (0..=band)
        .map(|k| {
            b.coeffs()
                .iter()
                .enumerate()
                .map(|(j, bj)| a.coeff(j + k) * bj.conj())
                .sum()
        })
        .collect()
}

/// Real residual vector `[Re r_0, Re r_1, Im r_1, …]` with `r = ĝ - F⋆F`.
fn residual(g: &TrigPoly, f: &Poly, band: usize) -> DVector<f64> {
    let c = correlate(f, f, band);
    let mut out = Vec::with_capacity(2 * band + 1);
    for (k, ck) in c.iter().enumerate() {
        let r = g.coeff(k as i64) - ck;
        out.push(r.re);
        if k > 0 {
            out.push(r.im);
        }
    }
    DVector::from_vec(out)
}

fn column(f: &Poly, d: &Poly, band: usize) -> Vec<f64> {
    let a = correlate(d, f, band);
    let b = correlate(f, d, band);
    let mut out = Vec::with_capacity(2 * band + 1);
    for k in 0..=band {
        let v = a[k] + b[k];
        out.push(v.re);
        if k > 0 {
            out.push(v.im);
        }
    }
    out
}

fn jacobian(x: &Factor, f: &Poly, band: usize) -> DMatrix<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for &(t, m) in &x.angles {
        let z = Complex64::from_polar(1.0, t);
        let (q, _) = f.div_linear(z);
        cols.push(column(f, &q.scale(-I * z * m as f64), band));
    }
    for &(b, m) in &x.roots {
        let (q, _) = f.div_linear(b);
        let d = q.scale(Complex64::new(-(m as f64), 0.0));
        cols.push(column(f, &d, band));
        cols.push(column(f, &d.scale(I), band));
    }
    // The scale enters through its logarithm.
    cols.push(column(f, f, band));
    let rows = 2 * band + 1;
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// Polish `x` against `g`. Steps are taken only while the residual shrinks.
pub(crate) fn polish(g: &TrigPoly, x: Factor) -> Factor {
    let band = g.band();
    if band == 0 || x.scale <= 0.0 {
        return x;
    }
    let mut best = x;
    let mut f = best.poly();
    let mut res = residual(g, &f, band);
    let mut norm = res.amax();
    for _ in 0..MAX_STEPS {
        if norm <= f64::EPSILON * g.mean() {
            break;
        }
        // Equilibrate the columns before the least-squares solve.
        let mut j = jacobian(&best, &f, band);
        let weights: Vec<f64> = j
            .column_iter()
            .map(|c| {
                let n = c.norm();
                if n > 0.0 { 1.0 / n } else { 1.0 }
            })
            .collect();
        for (mut c, w) in j.column_iter_mut().zip(&weights) {
            c *= *w;
        }
        let svd = j.svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-14;
        let Ok(mut delta) = svd.solve(&res, cutoff) else {
            break;
        };
        for (d, w) in delta.iter_mut().zip(&weights) {
            *d *= w;
        }
        // Backtrack by halving until the residual drops.
        let mut accepted = None;
        for _ in 0..HALVINGS {
            let next = best.step(&delta);
            if next.scale > 0.0 {
                let nf = next.poly();
                let nres = residual(g, &nf, band);
                let nnorm = nres.amax();
                if nnorm < norm {
                    accepted = Some((next, nf, nres, nnorm));
                    break;
                }
            }
            delta *= 0.5;
        }
        let Some((next, nf, nres, nnorm)) = accepted else {
            break;
        };
        best = next;
        f = nf;
        res = nres;
        norm = nnorm;
    }
    best
}

/// Final Gauss–Newton steps on the coefficients of `f` itself, which removes
/// the rounding floor of rebuilding `f` from its roots. The phase direction
/// `i·f` is in the kernel; the minimum-norm step leaves it alone.
pub(crate) fn polish_coefficients(g: &TrigPoly, f: Poly) -> Poly {
    let band = g.band();
    if band == 0 {
        return f;
    }
    let mut best = Poly::new((0..=band).map(|k| f.coeff(k)).collect());
    let mut res = residual(g, &best, band);
    let mut norm = res.amax();
    for _ in 0..COEFF_STEPS {
        let mut cols = Vec::with_capacity(2 * band + 2);
        for k in 0..=band {
            let unit = Poly::monomial(k);
            cols.push(column(&best, &unit, band));
            cols.push(column(&best, &unit.scale(I), band));
        }
        let j = DMatrix::from_fn(2 * band + 1, cols.len(), |r, c| cols[c][r]);
        let svd = j.svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-14;
        let Ok(delta) = svd.solve(&res, cutoff) else {
            break;
        };
        let next = Poly::new(
            (0..=band)
                .map(|k| best.coeff(k) + Complex64::new(delta[2 * k], delta[2 * k + 1]))
                .collect(),
        );
        let nres = residual(g, &next, band);
        let nnorm = nres.amax();
        if nnorm.is_nan() || nnorm >= norm {
            break;
        }
        best = next;
        res = nres;
        norm = nnorm;
    }
    best
}

/// `1/conj(b)`: the reflection of an outside root into the disk.
pub(crate) fn reflect(b: Complex64) -> Complex64 {
    ONE / b.conj()
}
