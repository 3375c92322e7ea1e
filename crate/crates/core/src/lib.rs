//! Moduli of functions in the Toeplitz kernel `K_n = ker T_{z̄^{n+1}}`.
//!
//! The exact engine works on polynomials and Hermitian trigonometric
//! polynomials: Fejér–Riesz spectral factors, inner–outer splits, finite
//! Blaschke products. On top of it, [`geometry`] decides extreme points of
//! the modulus set V, splits non-extreme points into extreme halves,
//! enumerates all kernel functions with a given modulus, and checks the
//! rigidity of dominated functions. [`numeric`] is an independent FFT engine
//! (harmonic conjugation, outer functions from moduli, analyticity defects)
//! used for cross-validation and for sampled symbols.
//!
//! ```
//! use hkl_core::geometry::{is_extreme, split_nonextreme};
//! use hkl_core::{trig_from_modulus_squared, Poly};
//!
//! // A zero inside the disk: |f|² is a boundary point of V but not extreme.
//! let s = 2.0 / 5f64.sqrt();
//! let f = Poly::from_real(&[-0.5 * s, s]);
//! let g = trig_from_modulus_squared(&f);
//! assert!(!is_extreme(&g, 1)?.verdict);
//! let cert = split_nonextreme(&g, 1)?;
//! assert!(cert.valid && cert.checks.extreme1 && cert.checks.extreme2);
//! # Ok::<(), hkl_core::Error>(())
//! ```

pub mod error;
pub mod factor;
pub mod gen;
pub mod geometry;
pub mod json;
pub mod kernel;
pub mod numeric;
pub mod par;
pub mod poly;
mod refine;
pub mod roots;
pub mod suite;
pub mod tol;
pub mod trig;

pub use error::{Error, NegativityWitness, Result};
pub use factor::{
    blaschke_eval, blaschke_mul_poly, divisors, fejer_riesz, inner_outer, inner_outer_lift,
    BlaschkeProduct, Factorization,
};
pub use kernel::{companion, h2_norm, is_in_kernel, membership_v, KernelElement, Membership};
pub use num_complex::Complex64;
pub use poly::{poly_mul, Poly};
pub use roots::{roots, Root, RootClass, RootSet};
pub use tol::Tolerances;
pub use trig::{lift, lift_roots, nonneg_check, trig_from_modulus_squared, TrigPoly};
