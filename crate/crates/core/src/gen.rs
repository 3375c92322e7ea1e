//! Random instances with a prescribed root census.
//!
//! Roots are drawn uniformly in radius and angle from the annuli
//! `[0.2, 0.8]` (inside), the unit circle, and `[1.25, 2]` (outside). Every
//! new root keeps a minimum distance from the earlier roots and from their
//! reflections `1/conj(a)`, so that the lifted products `|f|²` never carry
//! accidental near-multiple roots.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::KernelElement;
use crate::poly::Poly;

/// Seeded generator used everywhere randomness is needed.
pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for instance `index` of a batch run with base `seed`.
pub fn rng_for(seed: u64, index: usize) -> InstanceRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64 + 1);
    r
}

/// How many roots of each kind to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub inside: usize,
    pub circle: usize,
    pub outside: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.inside + self.circle + self.outside
    }
}

impl FromStr for Census {
    type Err = Error;

    /// `inside:k,circle:j,outside:l`; omitted kinds default to zero.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Census::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (kind, count) = part
                .split_once(':')
                .ok_or_else(|| Error::Schema(format!("census entry `{part}` needs kind:count")))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("bad count in `{part}`")))?;
            match kind.trim() {
                "inside" => c.inside = count,
                "circle" => c.circle = count,
                "outside" => c.outside = count,
                other => return Err(Error::Schema(format!("unknown root kind `{other}`"))),
            }
        }
        Ok(c)
    }
}

/// Radii for off-circle roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annuli {
    pub inside: (f64, f64),
    pub outside: (f64, f64),
    pub min_separation: f64,
}

impl Default for Annuli {
    fn default() -> Self {
        Annuli {
            inside: (0.2, 0.8),
            outside: (1.25, 2.0),
            min_separation: 0.05,
        }
    }
}

fn far_enough(z: Complex64, taken: &[Complex64], sep: f64) -> bool {
    let mirror = Complex64::new(1.0, 0.0) / z.conj();
    taken.iter().all(|&t| {
        let t_mirror = Complex64::new(1.0, 0.0) / t.conj();
        (z - t).norm() >= sep && (mirror - t).norm() >= sep && (z - t_mirror).norm() >= sep
    })
}

/// Draw roots according to `census` (inside first, then circle, then outside).
pub fn random_roots<R: Rng>(rng: &mut R, census: Census, annuli: &Annuli) -> Vec<Complex64> {
    let mut taken = Vec::with_capacity(census.total());
    let kinds = std::iter::repeat_n(Some(annuli.inside), census.inside)
        .chain(std::iter::repeat_n(None, census.circle))
        .chain(std::iter::repeat_n(Some(annuli.outside), census.outside));
    for kind in kinds {
        let mut sep = annuli.min_separation;
        let mut attempts = 0;
        loop {
            let r = match kind {
                Some((lo, hi)) => rng.gen_range(lo..=hi),
                None => 1.0,
            };
            let z = Complex64::from_polar(r, rng.gen_range(0.0..TAU));
            if far_enough(z, &taken, sep) {
                taken.push(z);
                break;
            }
            attempts += 1;
            if attempts % 1000 == 0 {
                sep *= 0.5;
            }
        }
    }
    taken
}

/// A unit-norm element of `K_n` whose roots follow `census`; `census.total() ≤ n`.
///
/// The leading coefficient gets a random phase before normalization.
pub fn random_kernel_element<R: Rng>(
    rng: &mut R,
    n: usize,
    census: Census,
    annuli: &Annuli,
) -> Result<KernelElement> {
    if census.total() > n {
        return Err(Error::DegreeExceeded {
            degree: census.total(),
            n,
        });
    }
    let roots = random_roots(rng, census, annuli);
    let lead = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    let f = Poly::from_roots(lead, &roots);
    let norm = f.norm_sqr().sqrt();
    KernelElement::new(n, f.scale_real(1.0 / norm))
}

/// An outer polynomial of degree `degree` with `circle` roots on the circle
/// and the rest in the annulus `outside`, normalized to unit H² norm.
pub fn random_outer<R: Rng>(
    rng: &mut R,
    degree: usize,
    circle: usize,
    outside: (f64, f64),
) -> Poly {
    let annuli = Annuli {
        outside,
        ..Annuli::default()
    };
    let census = Census {
        inside: 0,
        circle: circle.min(degree),
        outside: degree - circle.min(degree),
    };
    let roots = random_roots(rng, census, &annuli);
    let f = Poly::from_roots(Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)), &roots);
    f.scale_real(1.0 / f.norm_sqr().sqrt())
}

/// A random census for model order `n`. With probability `p_extreme` it is
/// all-circle of full degree `n`; otherwise a random mix of total `≤ n`.
pub fn random_census<R: Rng>(rng: &mut R, n: usize, p_extreme: f64) -> Census {
    if rng.gen_bool(p_extreme) {
        return Census {
            circle: n,
            ..Census::default()
        };
    }
    let total = rng.gen_range(0..=n);
    let mut c = Census::default();
    for _ in 0..total {
        match rng.gen_range(0..3) {
            0 => c.inside += 1,
            1 => c.circle += 1,
            _ => c.outside += 1,
        }
    }
    c
}
