use std::path::{Path, PathBuf};

use hkl_core::gen::{self, Annuli};
use hkl_core::geometry::{
    baseline_split, decompose_modulus_with, enumerate_solutions, is_extreme_with,
    rigidity_check_with, split_nonextreme_with, RigidityOutcome,
};
use hkl_core::json::{envelope, parse_instance, Instance, ToJson};
use hkl_core::numeric::{domination_integral, outer_from_modulus, symbol_condition_test, Grid};
use hkl_core::suite::normalized_modulus;
use hkl_core::{companion, fejer_riesz, h2_norm, inner_outer, Error, KernelElement, Poly, TrigPoly};
use serde_json::json;

use crate::{read, CliError, CliResult, Command, GenKind, Options};

/// A command's JSON result, its boundary function (for `--csv`) and exit code.
pub struct Output {
    pub value: serde_json::Value,
    pub boundary: Option<Grid>,
    pub exit_code: u8,
}

impl Output {
    fn new(kind: &str, payload: serde_json::Value) -> Self {
        Output {
            value: envelope(kind, payload),
            boundary: None,
            exit_code: 0,
        }
    }

    fn with_boundary(mut self, grid: Grid) -> Self {
        self.boundary = Some(grid);
        self
    }

    /// Exit 3 when a produced certificate fails its own checks.
    fn breach_unless(mut self, ok: bool) -> Self {
        if !ok {
            self.exit_code = 3;
        }
        self
    }
}

fn load(path: &Path) -> CliResult<Instance> {
    Ok(parse_instance(&read(path)?)?)
}

fn wrong_kind(expected: &str, got: &Instance) -> CliError {
    CliError::Core(Error::Schema(format!(
        "expected a {expected} instance, got {}",
        got.kind()
    )))
}

fn load_trig(path: &Path) -> CliResult<TrigPoly> {
    match load(path)? {
        Instance::TrigPoly(g) => Ok(g),
        other => Err(wrong_kind("trig_poly", &other)),
    }
}

fn load_kernel(path: &Path) -> CliResult<KernelElement> {
    match load(path)? {
        Instance::KernelElement(x) => Ok(x),
        other => Err(wrong_kind("kernel_element", &other)),
    }
}

fn load_poly(path: &Path) -> CliResult<Poly> {
    match load(path)? {
        Instance::Poly(p) => Ok(p),
        Instance::KernelElement(x) => Ok(x.into_poly()),
        other => Err(wrong_kind("poly or kernel_element", &other)),
    }
}

/// Any instance as samples on an `n`-point grid.
fn load_grid(path: &Path, n: usize) -> CliResult<Grid> {
    Ok(match load(path)? {
        Instance::Grid(gr) => gr,
        Instance::Poly(p) => Grid::from_poly(&p, n)?,
        Instance::KernelElement(x) => Grid::from_poly(x.poly(), n)?,
        Instance::TrigPoly(g) => Grid::from_trig(&g, n)?,
    })
}

fn input(slot: &Option<PathBuf>) -> &Path {
    slot.as_deref().expect("input presence checked by the caller")
}

pub fn run(command: &Command, opts: &Options) -> CliResult<Output> {
    let tol = &opts.tol;
    Ok(match command {
        Command::Factor { input: path } => {
            let p = load_poly(input(path))?;
            let fac = inner_outer(&p)?;
            let residual = fac.residual(&p, opts.grid)?;
            let boundary = Grid::from_poly(&fac.outer, opts.grid)?;
            Output::new(
                "factorization",
                json!({
                    "input": p.to_json(),
                    "inner": fac.inner.to_json(),
                    "outer": fac.outer.to_json(),
                    "residual": residual,
                    "residual_grid": opts.grid,
                }),
            )
            .with_boundary(boundary)
        }
        Command::Spectral { input: path } => {
            let g = load_trig(input(path))?;
            let f = fejer_riesz(&g)?;
            let boundary = Grid::from_poly(&f, opts.grid)?;
            Output::new("poly", f.to_json()).with_boundary(boundary)
        }
        Command::Companion { input: path } => {
            let y = companion(&load_kernel(input(path))?);
            let boundary = Grid::from_poly(y.poly(), opts.grid)?;
            Output::new("kernel_element", y.to_json()).with_boundary(boundary)
        }
        Command::Norm { input: path } => {
            let x = load_kernel(input(path))?;
            Output::new("norm", json!({ "n": x.n(), "h2_norm": h2_norm(&x) }))
        }
        Command::Extreme { input: path, n } => {
            let g = load_trig(input(path))?;
            let cert = is_extreme_with(&g, n.unwrap_or(g.n()), tol)?;
            Output::new("extreme_certificate", cert.to_json())
        }
        Command::Split { input: path, n } => {
            let g = load_trig(input(path))?;
            let cert = split_nonextreme_with(&g, n.unwrap_or(g.n()), tol)?;
            Output::new("split_certificate", cert.to_json()).breach_unless(cert.valid)
        }
        Command::Decompose { input: path } => {
            let x = load_kernel(input(path))?;
            let d = decompose_modulus_with(&x, tol)?;
            let ok = d.split.as_ref().is_none_or(|c| c.valid);
            let boundary = Grid::from_poly(x.poly(), opts.grid)?;
            Output::new("decomposition", d.to_json())
                .with_boundary(boundary)
                .breach_unless(ok)
        }
        Command::Solutions { input: path, n } => {
            let g = load_trig(input(path))?;
            let set = enumerate_solutions(&g, n.unwrap_or(g.n()))?;
            Output::new("solution_set", set.to_json())
        }
        Command::Rigidity { trig, kernel, n } => {
            let g = load_trig(trig)?;
            let x = load_kernel(kernel)?;
            let report = rigidity_check_with(&g, n.unwrap_or(g.n()), &x, tol)?;
            let witness = domination_integral(&x, &g, opts.grid);
            let mut payload = report.to_json();
            payload["witness"] = witness.to_json();
            Output::new("rigidity_report", payload)
                .breach_unless(report.outcome != RigidityOutcome::Counterexample)
        }
        Command::OuterGrid { input: path } => {
            let w = match load(input(path))? {
                Instance::Grid(gr) => gr,
                other => return Err(wrong_kind("grid", &other)),
            };
            let out = outer_from_modulus(&w)?;
            Output::new("grid", out.to_json()).with_boundary(out)
        }
        Command::SymbolTest { phi, g } => {
            let phi = load_grid(phi, opts.grid)?;
            let g = load_grid(g, phi.len())?;
            Output::new("symbol_test", symbol_condition_test(&phi, &g)?.to_json())
        }
        Command::Domination { kernel, trig } => {
            let x = load_kernel(kernel)?;
            let g = load_trig(trig)?;
            if g.is_zero() {
                return Err(Error::NullInput("trigonometric polynomial").into());
            }
            Output::new("domination_estimate", domination_integral(&x, &g, opts.grid).to_json())
        }
        Command::Gen { n, zeros, kind } => {
            let mut rng = gen::rng(opts.seed);
            let instance = match kind {
                GenKind::Symbol => Instance::Grid(Grid::from_fn(opts.grid, |z| {
                    z.conj().powu(*n as u32 + 1)
                })?),
                GenKind::Kernel | GenKind::Trig => {
                    let x = gen::random_kernel_element(&mut rng, *n, *zeros, &Annuli::default())?;
                    if *kind == GenKind::Kernel {
                        Instance::KernelElement(x)
                    } else {
                        Instance::TrigPoly(normalized_modulus(x.poly(), *n))
                    }
                }
            };
            let boundary = match &instance {
                Instance::KernelElement(x) => Some(Grid::from_poly(x.poly(), opts.grid)?),
                Instance::TrigPoly(g) => Some(Grid::from_trig(g, opts.grid)?),
                Instance::Grid(gr) => Some(gr.clone()),
                Instance::Poly(_) => None,
            };
            Output {
                value: instance.to_json(),
                boundary,
                exit_code: 0,
            }
        }
        Command::BaselineSplit { input: path } => {
            let g = load_trig(input(path))?;
            Output::new("baseline_split", baseline_split(&g)?.to_json())
        }
    })
}
