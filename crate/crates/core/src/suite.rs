//! Batch property drivers over seeded random instances.
//!
//! Instance `i` of a run is generated from its own stream
//! ([`gen::rng_for`]), so a report does not depend on the execution mode.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::factor::{fejer_riesz, inner_outer};
use crate::gen::{self, Annuli, Census};
use crate::geometry::{
    enumerate_solutions, is_extreme, rigidity_check, split_nonextreme, PerturbationOracle,
    RigidityOutcome,
};
use crate::kernel::KernelElement;
use crate::numeric::{outer_from_modulus, zeta, Grid};
use crate::par::{map_indexed, Execution};
use crate::poly::Poly;
use crate::trig::{trig_from_modulus_squared, TrigPoly};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub cases: usize,
    pub passed: usize,
    /// Largest value of the suite's main residual over all cases.
    pub worst: f64,
    /// One line per failing case.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }

    fn collect(results: Vec<Case>) -> Self {
        let mut report = SuiteReport {
            cases: results.len(),
            passed: 0,
            worst: 0.0,
            failures: Vec::new(),
        };
        for (i, case) in results.into_iter().enumerate() {
            report.worst = report.worst.max(case.metric);
            match case.failure {
                None => report.passed += 1,
                Some(msg) => report.failures.push(format!("case {i}: {msg}")),
            }
        }
        report
    }
}

struct Case {
    metric: f64,
    failure: Option<String>,
}

impl Case {
    fn check(metric: f64, pass: bool, what: impl FnOnce() -> String) -> Self {
        Case {
            metric,
            failure: (!pass).then(what),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Case {
            metric: f64::INFINITY,
            failure: Some(e.to_string()),
        }
    }
}

fn run(
    exec: Execution,
    cases: usize,
    f: impl Fn(usize) -> Result<Case> + Sync + Send,
) -> SuiteReport {
    SuiteReport::collect(map_indexed(exec, cases, |i| {
        f(i).unwrap_or_else(Case::error)
    }))
}

/// `|f|²` normalized to `ĝ(0) = 1`, with declared band `n`.
pub fn normalized_modulus(f: &Poly, n: usize) -> TrigPoly {
    let g = trig_from_modulus_squared(f).with_band(n);
    g.scale(1.0 / g.mean())
}

/// `f` rotated so that its constant term is real and positive.
fn positive_at_origin(f: &Poly) -> Poly {
    let c = f.coeff(0);
    f.scale(c.conj() / c.norm())
}

/// A random element of `K_n` (`1 ≤ n ≤ max_n`) with a random census, and
/// whether `|f|²` is extreme by construction.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_n: usize,
    p_extreme: f64,
) -> (KernelElement, Census, bool) {
    let n = rng.gen_range(1..=max_n);
    let census = gen::random_census(rng, n, p_extreme);
    let x = gen::random_kernel_element(rng, n, census, &Annuli::default())
        .expect("census fits the model order");
    let extreme = census.inside == 0 && census.outside == 0 && census.circle == n;
    (x, census, extreme)
}

/// Outer polynomials of degree `≤ 16` with roots on the circle or in
/// `[1.05, 2]`: the Fejér–Riesz factor of `|F|²` must give back `F`.
pub fn fejer_riesz_round_trip(exec: Execution, cases: usize, seed: u64) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let degree = rng.gen_range(0..=16);
        let circle = rng.gen_range(0..=degree / 2);
        let f = positive_at_origin(&gen::random_outer(&mut rng, degree, circle, (1.05, 2.0)));
        let back = fejer_riesz(&trig_from_modulus_squared(&f))?;
        let err = back.max_diff(&f);
        Ok(Case::check(err, err <= 1e-7, || {
            format!("degree {degree}, circle {circle}: coefficient error {err:e}")
        }))
    })
}

/// The extreme-point test against the root census of `f`.
pub fn extreme_oracle(exec: Execution, cases: usize, seed: u64) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let (x, census, expected) = random_instance(&mut rng, 12, 0.3);
        let cert = is_extreme(&normalized_modulus(x.poly(), x.n()), x.n())?;
        Ok(Case::check(0.0, cert.verdict == expected, || {
            format!(
                "n {} census {census:?}: verdict {} expected {expected}",
                x.n(),
                cert.verdict
            )
        }))
    })
}

/// Split certificates for every non-extreme instance of [`extreme_oracle`];
/// the metric is the largest midpoint or norm residual.
pub fn split_certificates(exec: Execution, cases: usize, seed: u64) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let (x, census, extreme) = random_instance(&mut rng, 12, 0.3);
        if extreme {
            return Ok(Case::check(0.0, true, String::new));
        }
        let cert = split_nonextreme(&normalized_modulus(x.poly(), x.n()), x.n())?;
        let c = &cert.checks;
        let metric = c
            .midpoint_residual
            .max((c.norm1 - 1.0).abs())
            .max((c.norm2 - 1.0).abs());
        Ok(Case::check(metric, cert.valid, || {
            format!("n {} census {census:?}: {c:?}", x.n())
        }))
    })
}

/// Random extreme `g` of order `≤ max_n`: the perturbation search must not
/// find room. The metric is the largest admissible `‖h‖∞` found.
pub fn converse(
    exec: Execution,
    cases: usize,
    trials: usize,
    max_n: usize,
    seed: u64,
) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let n = rng.gen_range(1..=max_n);
        let census = Census {
            circle: n,
            ..Census::default()
        };
        let x = gen::random_kernel_element(&mut rng, n, census, &Annuli::default())?;
        let g = normalized_modulus(x.poly(), n);
        let res = PerturbationOracle::new(&g, n)?.search(trials, &mut rng);
        Ok(Case::check(res.best_size, !res.found, || {
            format!("n {n}: admissible perturbation of size {:e}", res.best_size)
        }))
    })
}

/// Solution counts, reproduction of `g` on a 4096-grid and uniqueness of
/// the outer solution. The metric is the worst reproduction error.
pub fn enumeration(exec: Execution, cases: usize, seed: u64) -> SuiteReport {
    const GRID: usize = 4096;
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let (x, census, _) = random_instance(&mut rng, 10, 0.2);
        let n = x.n();
        let g = normalized_modulus(x.poly(), n);
        let set = enumerate_solutions(&g, n)?;
        let deg = x.poly().degree().unwrap_or(0);
        let expected = (n - deg + 1) << (census.inside + census.outside);
        let samples = g.sample(GRID);
        let mut worst: f64 = 0.0;
        let mut outer = 0;
        for f in &set.solutions {
            for (j, s) in samples.iter().enumerate() {
                worst = worst.max((f.poly().eval(zeta(j, GRID)).norm_sqr() - s).abs());
            }
            if inner_outer(f.poly())?.inner.is_trivial() {
                outer += 1;
            }
        }
        let pass = set.solutions.len() == expected && worst <= 1e-9 && outer == 1;
        Ok(Case::check(worst, pass, || {
            format!(
                "n {n} census {census:?}: {} solutions (expected {expected}), {outer} outer, error {worst:e}",
                set.solutions.len()
            )
        }))
    })
}

/// `x = c·F` for random extreme `g` and random `c`: the recovered constant
/// must match. The metric is `|ĉ - c|`.
pub fn rigidity(exec: Execution, cases: usize, seed: u64) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let n = rng.gen_range(1..=8);
        let census = Census {
            circle: n,
            ..Census::default()
        };
        let f = gen::random_kernel_element(&mut rng, n, census, &Annuli::default())?;
        let g = normalized_modulus(f.poly(), n);
        let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let x = KernelElement::new(n, positive_at_origin(f.poly()).scale(c))?;
        let report = rigidity_check(&g, n, &x)?;
        Ok(match report.outcome {
            RigidityOutcome::ConstantMultiple(got) => {
                let err = (got - c).norm();
                Case::check(err, err <= 1e-9, || format!("n {n}: |c_hat - c| = {err:e}"))
            }
            other => Case::check(f64::INFINITY, false, || format!("n {n}: {other:?}")),
        })
    })
}

/// Strictly positive `g` of band `≤ 16` with `min g ≥ 1e-3`: the FFT outer
/// function of `√g` against the Fejér–Riesz factor, relative sample error.
pub fn cross_validation(exec: Execution, cases: usize, grid: usize, seed: u64) -> SuiteReport {
    run(exec, cases, |i| {
        let mut rng = gen::rng_for(seed, i);
        let (f, g) = loop {
            let degree = rng.gen_range(0..=16);
            let f = gen::random_outer(&mut rng, degree, 0, (1.1, 2.0));
            let g = trig_from_modulus_squared(&f);
            if g.sample(grid).iter().all(|&v| v >= 1e-3) {
                break (f, g);
            }
        };
        let exact = fejer_riesz(&g)?;
        let w = Grid::from_real(&g.sample(grid).iter().map(|v| v.sqrt()).collect::<Vec<_>>())?;
        let numeric = outer_from_modulus(&w)?;
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (j, v) in numeric.values().iter().enumerate() {
            let e = exact.eval(zeta(j, grid));
            err = err.max((v - e).norm());
            scale = scale.max(e.norm());
        }
        let rel = err / scale;
        let degree = f.degree().unwrap_or(0);
        Ok(Case::check(rel, rel <= 1e-7, || {
            format!("degree {degree}: relative sample error {rel:e}")
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let exec = Execution::Sequential;
        assert!(fejer_riesz_round_trip(exec, 5, 1).ok());
        assert!(extreme_oracle(exec, 5, 1).ok());
        assert!(split_certificates(exec, 5, 1).ok());
        assert!(converse(exec, 2, 100, 3, 1).ok());
        assert!(enumeration(exec, 5, 1).ok());
        assert!(rigidity(exec, 5, 1).ok());
        assert!(cross_validation(exec, 3, 4096, 1).ok());
    }

    #[test]
    fn modes_give_identical_reports() {
        let a = extreme_oracle(Execution::Parallel, 8, 9);
        let b = extreme_oracle(Execution::Sequential, 8, 9);
        assert_eq!(a, b);
    }
}
