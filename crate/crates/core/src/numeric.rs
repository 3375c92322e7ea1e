//! Grid/FFT engine on the circle.
//!
//! Independent of the root-based exact path: outer functions are built by
//! harmonic conjugation of `log w`, and analyticity is measured by the size
//! of the negative-frequency Fourier coefficients. Fourier coefficients use
//! the `1/N` convention, so the constant grid `1` has `ĥ(0) = 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelElement;
use crate::poly::Poly;
use crate::trig::TrigPoly;

/// Default sample count.
pub const DEFAULT_N: usize = 4096;
/// Smallest modulus sample accepted by [`outer_from_modulus`].
pub const W_FLOOR: f64 = 1e-8;

/// Samples at `ζ_j = exp(2πij/N)`, `N` a power of two, `N ≥ 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    values: Vec<Complex64>,
}

impl Grid {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N = {n} must be a power of two, at least 4"
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("sample {j} is not finite")));
        }
        Ok(Grid { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Sample `f(ζ_j)`.
    pub fn from_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new((0..n).map(|j| f(zeta(j, n))).collect())
    }

    pub fn from_poly(p: &Poly, n: usize) -> Result<Self> {
        Self::from_fn(n, |z| p.eval(z))
    }

    pub fn from_trig(g: &TrigPoly, n: usize) -> Result<Self> {
        Self::from_real(&g.sample(n))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Grid) -> Result<Grid> {
        if self.len() != other.len() {
            return Err(Error::InvalidGrid(format!(
                "size mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Grid::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Grid> {
        Grid::new(self.values.iter().map(|&v| f(v)).collect())
    }

    fn is_real(&self) -> bool {
        let scale = self.sup_norm().max(1.0);
        self.values.iter().all(|v| v.im.abs() <= 1e-12 * scale)
    }
}

pub fn zeta(j: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * j as f64 / n as f64)
}

/// Fourier coefficients `ĥ(k) = (1/N) Σ_j h_j ζ_j^{-k}`, stored in FFT order:
/// index `k` for `k < N/2`, index `N + k` for negative `k`.
pub fn fft(gr: &Grid) -> Vec<Complex64> {
    let n = gr.len();
    let mut buf = gr.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

/// Inverse of [`fft`].
pub fn ifft(coeffs: &[Complex64]) -> Result<Grid> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    Grid::new(buf)
}

/// Signed frequency of FFT bin `j`; the Nyquist bin maps to `-N/2`.
pub fn frequency(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Fourier multiplier `-i·sign(k)`, with the mean and the Nyquist bin zeroed.
pub fn harmonic_conjugate(gr: &Grid) -> Result<Grid> {
    if !gr.is_real() {
        return Err(Error::InvalidGrid(
            "harmonic conjugation needs real samples".into(),
        ));
    }
    let n = gr.len();
    let mut c = fft(gr);
    for (j, cj) in c.iter_mut().enumerate() {
        let k = frequency(j, n);
        *cj *= if k == 0 || j == n / 2 {
            Complex64::new(0.0, 0.0)
        } else if k > 0 {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
    }
    let out = ifft(&c)?;
    out.map(|v| Complex64::new(v.re, 0.0))
}

/// `exp(log w + i ℋ(log w))` on the grid.
///
/// The value at the origin is `exp(mean log w) > 0`, matching the exact
/// engine's normalization of outer parts.
pub fn outer_from_modulus(w: &Grid) -> Result<Grid> {
    if !w.is_real() {
        return Err(Error::InvalidGrid("modulus samples must be real".into()));
    }
    for (index, v) in w.values.iter().enumerate() {
        if v.re.is_nan() || v.re < W_FLOOR {
            return Err(Error::TooSmall { index, value: v.re });
        }
    }
    let log_w = w.map(|v| Complex64::new(v.re.ln(), 0.0))?;
    let conj = harmonic_conjugate(&log_w)?;
    Grid::new(
        log_w
            .values
            .iter()
            .zip(&conj.values)
            .map(|(l, h)| Complex64::new(l.re, h.re).exp())
            .collect(),
    )
}

/// `max_{-N/2 ≤ k ≤ -1} |ĥ(k)|`.
///
/// Frequencies beyond `N/2` alias into this range, so a small defect only
/// certifies analyticity for content resolved by the grid.
pub fn analyticity_defect(gr: &Grid) -> f64 {
    let n = gr.len();
    fft(gr)[n / 2..]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolTest {
    pub defect: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

/// Numeric test that `z̄ φ̄ g` is analytic, i.e. that `g` is the squared
/// modulus of some element of `ker T_φ`.
pub fn symbol_condition_test(phi: &Grid, g: &Grid) -> Result<SymbolTest> {
    if phi.len() != g.len() {
        return Err(Error::InvalidGrid(format!(
            "symbol and weight grids differ in size: {} vs {}",
            phi.len(),
            g.len()
        )));
    }
    if !g.is_real() {
        return Err(Error::InvalidGrid("weight samples must be real".into()));
    }
    let n = g.len();
    let product = Grid::new(
        (0..n)
            .map(|j| zeta(j, n).conj() * phi.values[j].conj() * g.values[j].re)
            .collect(),
    )?;
    let defect = analyticity_defect(&product);
    let tolerance = 1e-7 * g.sup_norm() * phi.sup_norm();
    Ok(SymbolTest {
        defect,
        tolerance,
        verdict: defect <= tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convergence {
    Convergent,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationEstimate {
    /// `(N, estimate)` for four successive doublings.
    pub estimates: Vec<(usize, f64)>,
    pub flag: Convergence,
    /// Richardson-extrapolated value (meaningful when convergent).
    pub value: f64,
}

/// Midpoint-rule estimates of `∫ |f| / √g dm` at `N, 2N, 4N, 8N`.
///
/// Midpoints `θ_j = 2π(j + ½)/N` keep the nodes off the dyadic angles where
/// zeros of `g` are most often placed. The flag is `DIVERGENT` when the
/// estimates grow by a factor ≥ 1.5 at every doubling, or when the increments
/// fail to shrink by a factor 1.5 across all three doublings (logarithmic
/// growth). This is a numeric witness; the multiplicity rule in
/// [`crate::geometry::rigidity_check`] is authoritative.
pub fn domination_integral(f: &KernelElement, g: &TrigPoly, base_n: usize) -> DominationEstimate {
    let p = f.poly();
    let mut estimates = Vec::with_capacity(4);
    for step in 0..4 {
        let n = base_n << step;
        let mut sum = 0.0;
        for j in 0..n {
            let theta = TAU * (j as f64 + 0.5) / n as f64;
            let fv = p.eval(Complex64::from_polar(1.0, theta)).norm();
            if fv == 0.0 {
                continue;
            }
            let gv = g.eval_angle(theta);
            sum += if gv > 0.0 {
                fv / gv.sqrt()
            } else {
                f64::INFINITY
            };
        }
        estimates.push((n, sum / n as f64));
    }
    let vals: Vec<f64> = estimates.iter().map(|e| e.1).collect();
    let deltas: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    let negligible = |d: f64, v: f64| d.abs() <= 1e-12 * v.abs().max(1.0);

    let infinite = vals.iter().any(|v| !v.is_finite());
    let geometric = vals.windows(2).all(|w| w[0] > 0.0 && w[1] >= 1.5 * w[0]);
    let stalled =
        !negligible(deltas[2], vals[3]) && deltas.windows(2).all(|d| d[1].abs() * 1.5 > d[0].abs());
    let flag = if infinite || geometric || stalled {
        Convergence::Divergent
    } else {
        Convergence::Convergent
    };
    DominationEstimate {
        value: vals[3] + deltas[2] / 3.0,
        estimates,
        flag,
    }
}

/// CSV boundary dump: header `theta,re,im,abs`, one row per grid point.
pub fn boundary_csv(gr: &Grid) -> String {
    let n = gr.len();
    let mut out = String::from("theta,re,im,abs\n");
    for (j, v) in gr.values.iter().enumerate() {
        let theta = TAU * j as f64 / n as f64;
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            theta,
            v.re,
            v.im,
            v.norm()
        ));
    }
    out
}
