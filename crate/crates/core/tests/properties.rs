//! Structural properties over randomly generated inputs.

use std::f64::consts::TAU;

use hkl_core::factor::divisors;
use hkl_core::geometry::{decompose_modulus, enumerate_solutions, is_extreme, split_nonextreme};
use hkl_core::numeric::{fft, harmonic_conjugate, ifft, symbol_condition_test, zeta, Grid};
use hkl_core::{
    companion, fejer_riesz, h2_norm, inner_outer, lift, membership_v, roots, trig_from_modulus_squared,
    Complex64, KernelElement, Membership, Poly,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn polar(r: impl Strategy<Value = f64>) -> impl Strategy<Value = Complex64> {
    (r, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// A polynomial with `1..=max` roots drawn from the given radius range.
fn poly_with_roots(r: std::ops::Range<f64>, max: usize) -> impl Strategy<Value = Poly> {
    (prop::collection::vec(polar(r), 1..=max), complex())
        .prop_filter("nonzero leading coefficient", |(_, c)| c.norm() > 1e-3)
        .prop_map(|(rs, c)| Poly::from_roots(c, &rs))
}

/// Unit-norm outer polynomial, `F(0) > 0`, roots in `[1.05, 2]` at least
/// 0.05 apart (coincident roots make the factor ill-conditioned).
fn separated_outer(max: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(polar(1.05..2.0), 1..=max)
        .prop_filter("separated roots", |rs| {
            rs.iter()
                .enumerate()
                .all(|(i, a)| rs[..i].iter().all(|b| (a - b).norm() >= 0.05))
        })
        .prop_map(|rs| {
            let f = Poly::from_roots(Complex64::new(1.0, 0.0), &rs);
            let c = f.coeff(0);
            f.scale(c.conj() / (c.norm() * f.norm_sqr().sqrt()))
        })
}

fn coeff_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(complex(), 1..=max_degree + 1).prop_map(Poly::new)
}

/// A kernel element with roots away from the circle, plus its model order.
fn kernel_element() -> impl Strategy<Value = KernelElement> {
    (
        prop::collection::vec(polar(0.2..0.8), 0..=2),
        prop::collection::vec(polar(1.25..2.0), 0..=2),
        0usize..=2,
    )
        .prop_map(|(inside, outside, slack)| {
            let rs: Vec<Complex64> = inside.into_iter().chain(outside).collect();
            let f = Poly::from_roots(Complex64::new(1.0, 0.0), &rs);
            let f = f.scale_real(1.0 / f.norm_sqr().sqrt());
            KernelElement::new(rs.len() + slack, f).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: RngSeed::Fixed(0),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn roots_recompose(p in poly_with_roots(0.0..2.0, 16)) {
        let rs = roots(&p).unwrap();
        let back = rs.recompose(p.leading());
        prop_assert!(back.max_diff(&p) <= 1e-8 * p.max_abs_coeff());
    }

    #[test]
    fn parseval_and_hermitian_closure(f in coeff_poly(12)) {
        let g = trig_from_modulus_squared(&f);
        let direct: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert_eq!(g.coeff(0).re, direct);
        prop_assert_eq!(g.coeff(0).im, 0.0);
        for k in 1..=g.n() as i64 {
            prop_assert_eq!(g.coeff(-k), g.coeff(k).conj());
        }
    }

    #[test]
    fn lift_is_f_times_companion(f in coeff_poly(10), slack in 0usize..3) {
        let n = f.degree().unwrap_or(0) + slack;
        let x = KernelElement::new(n, f.clone()).unwrap();
        let g = trig_from_modulus_squared(&f).with_band(n);
        let product = hkl_core::poly_mul(&f, companion(&x).poly());
        prop_assert!(lift(&g).max_diff(&product) <= 1e-12);
    }

    #[test]
    fn companion_is_an_isometric_involution(f in coeff_poly(10), slack in 0usize..3) {
        let n = f.degree().unwrap_or(0) + slack;
        let x = KernelElement::new(n, f).unwrap();
        let y = companion(&x);
        prop_assert_eq!(h2_norm(&y), h2_norm(&x));
        prop_assert_eq!(companion(&y), x.clone());
        for j in 0..64 {
            let z = zeta(j, 64);
            prop_assert!((y.poly().eval(z).norm() - x.poly().eval(z).norm()).abs() <= 1e-10);
        }
        let gx = trig_from_modulus_squared(x.poly()).with_band(n);
        let gy = trig_from_modulus_squared(y.poly()).with_band(n);
        prop_assert!(gx.max_diff(&gy) <= 1e-12);
    }

    #[test]
    fn fejer_riesz_recovers_outer_factor(f in separated_outer(16)) {
        let g = trig_from_modulus_squared(&f);
        let back = fejer_riesz(&g).unwrap();
        let backward = trig_from_modulus_squared(&back).max_diff(&g);
        prop_assert!(backward <= 1e-12 * g.l1_coeffs(), "backward error {backward:e}");
        prop_assert!(back.coeff(0).im == 0.0 && back.coeff(0).re > 0.0);
        prop_assert!(back.max_diff(&f) <= 1e-7, "error {:e}", back.max_diff(&f));
        prop_assert!(roots(&back).unwrap().iter().all(|r| r.location.norm() >= 1.0 - 1e-9));
    }

    #[test]
    fn inner_outer_reproduces_input(p in poly_with_roots(0.0..2.0, 8)) {
        prop_assume!(roots(&p).unwrap().iter().all(|r| (r.location.norm() - 1.0).abs() > 1e-3));
        let fac = inner_outer(&p).unwrap();
        prop_assert!(fac.residual(&p, 4096).unwrap() <= 1e-9 * p.max_abs_coeff());
        for j in 0..256 {
            let z = zeta(j, 256);
            let (a, b) = (fac.outer.eval(z).norm(), p.eval(z).norm());
            prop_assert!((a - b).abs() <= 1e-9 * p.max_abs_coeff());
        }
        let inner = &fac.inner;
        let expected: usize = (inner.m0() + 1) * inner.zeros().iter().map(|(_, m)| m + 1).product::<usize>();
        prop_assert_eq!(divisors(inner).len(), expected);
    }

    #[test]
    fn enumeration_count_and_rigidity_agree(x in kernel_element()) {
        let n = x.n();
        let g = trig_from_modulus_squared(x.poly()).with_band(n);
        let set = enumerate_solutions(&g, n).unwrap();
        let fac = inner_outer(x.poly()).unwrap();
        let lifted = inner_outer(&lift(&g)).unwrap().inner;
        let expected: usize =
            (lifted.m0() + 1) * lifted.zeros().iter().map(|(_, m)| m + 1).product::<usize>();
        prop_assert_eq!(set.solutions.len(), expected);
        let d = decompose_modulus(&x).unwrap();
        let companion_trivial = inner_outer(companion(&x).poly()).unwrap().inner.is_trivial();
        prop_assert_eq!(d.is_rigid(), set.solutions.len() == 1 && companion_trivial);
        prop_assert_eq!(d.is_rigid(), fac.inner.is_trivial() && companion_trivial);
    }

    #[test]
    fn split_halves_average_to_input(x in kernel_element()) {
        prop_assume!(x.n() > 0);
        let n = x.n();
        let g = trig_from_modulus_squared(x.poly()).with_band(n);
        let cert = split_nonextreme(&g, n).unwrap();
        prop_assert!(cert.valid);
        prop_assert!(cert.g1.add(&cert.g2).max_diff(&g.scale(2.0)) <= 1e-10);
    }

    #[test]
    fn shrunken_modulus_is_never_extreme(
        angles in prop::collection::vec(0.0..TAU, 1..=6),
        s in 0.05..0.95f64,
    ) {
        let rs: Vec<Complex64> = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let f = Poly::from_roots(Complex64::new(1.0, 0.0), &rs);
        let f = f.scale_real(1.0 / f.norm_sqr().sqrt());
        let n = rs.len();
        let g = trig_from_modulus_squared(&f).with_band(n);
        let cert = is_extreme(&g.scale(s), n).unwrap();
        prop_assert!(!cert.verdict);
        prop_assert!(!cert.norm_ok);
    }

    #[test]
    fn fft_round_trip(values in prop::collection::vec(complex(), 64)) {
        let gr = Grid::new(values).unwrap();
        let back = ifft(&fft(&gr)).unwrap();
        for (a, b) in back.values().iter().zip(gr.values()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn harmonic_conjugate_squares_to_minus_identity(values in prop::collection::vec(-1.0..1.0f64, 128)) {
        let u = Grid::from_real(&values).unwrap();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let hh = harmonic_conjugate(&harmonic_conjugate(&u).unwrap()).unwrap();
        // The Nyquist bin is zeroed, so compare on band-limited input.
        let mut c = fft(&u);
        c[64] = Complex64::new(0.0, 0.0);
        let limited = ifft(&c).unwrap();
        for (a, b) in hh.values().iter().zip(limited.values()) {
            prop_assert!((a + b - mean).norm() <= 1e-10);
        }
    }

    #[test]
    fn symbol_test_agrees_with_membership(f in coeff_poly(6), n in 0usize..6) {
        prop_assume!(!f.is_zero());
        const N: usize = 256;
        let g = trig_from_modulus_squared(&f);
        let g = g.scale(1.0 / g.mean());
        let phi = Grid::from_fn(N, |z| z.conj().powu(n as u32 + 1)).unwrap();
        let samples = Grid::from_trig(&g, N).unwrap();
        let t = symbol_condition_test(&phi, &samples).unwrap();
        prop_assume!(t.defect < t.tolerance / 10.0 || t.defect > 10.0 * t.tolerance);
        let member = if g.n() <= n {
            membership_v(&g.with_band(n), n).unwrap().membership
        } else {
            Membership::NotInV
        };
        prop_assert_eq!(t.verdict, member != Membership::NotInV);
    }
}
