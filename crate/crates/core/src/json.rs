//! JSON schemas and the `hkl-1` instance envelope.
//!
//! Every file read or written by the command-line tool is an envelope
//! `{"version": "hkl-1", "kind": ..., "payload": ...}`. Complex numbers are
//! `[re, im]` pairs. Unknown fields are rejected at every level. Output is
//! rendered by [`render`], which prints every float with 17 significant
//! digits and sorts object keys, so equal values give byte-identical text.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::factor::{BlaschkeProduct, Factorization};
use crate::geometry::{
    BaselineSplit, Decomposition, ExtremeCertificate, RigidityOutcome, RigidityReport,
    SolutionSet, SplitCertificate, LAMBDA_CONVENTION, REPRESENTATIVE_CONVENTION,
};
use crate::kernel::KernelElement;
use crate::numeric::{DominationEstimate, Grid, SymbolTest};
use crate::poly::Poly;
use crate::tol::{self, Tolerances};
use crate::trig::TrigPoly;

pub const VERSION: &str = "hkl-1";

/// Inconsistency allowed between a listed negative-index coefficient and the
/// conjugate of its positive partner (and for `Im ĝ(0)`).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Objects that have a JSON form.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn pairs(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| pair(z)).collect())
}

fn zeros(list: &[(Complex64, usize)]) -> Value {
    Value::Array(list.iter().map(|&(a, m)| json!([pair(a), m])).collect())
}

fn schema(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Algorithmic constants that are not user-tunable, echoed in certificates.
pub fn algorithm_constants() -> Value {
    json!({
        "tol_root": tol::TOL_ROOT,
        "eps_circle": tol::EPS_CIRCLE,
        "tol_pairing": tol::TOL_PAIRING,
        "tol_recompose": tol::TOL_RECOMPOSE,
        "tol_nonneg_rel": tol::TOL_NONNEG_REL,
        "n_check_min": tol::N_CHECK_MIN,
    })
}

impl ToJson for Tolerances {
    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("tolerances serialize")
    }
}

impl ToJson for Poly {
    fn to_json(&self) -> Value {
        json!({ "coeffs": pairs(self.coeffs()) })
    }
}

impl ToJson for TrigPoly {
    fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .nonneg_coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| (k.to_string(), pair(c)))
            .collect();
        json!({ "n": self.n(), "coeffs": coeffs })
    }
}

impl ToJson for KernelElement {
    fn to_json(&self) -> Value {
        json!({ "n": self.n(), "poly": self.poly().to_json() })
    }
}

impl ToJson for Grid {
    fn to_json(&self) -> Value {
        json!({ "N": self.len(), "values": pairs(self.values()) })
    }
}

impl ToJson for BlaschkeProduct {
    fn to_json(&self) -> Value {
        json!({ "m0": self.m0(), "zeros": zeros(self.zeros()), "lambda": pair(self.lambda()) })
    }
}

impl ToJson for Factorization {
    fn to_json(&self) -> Value {
        json!({ "inner": self.inner.to_json(), "outer": self.outer.to_json() })
    }
}

impl ToJson for ExtremeCertificate {
    fn to_json(&self) -> Value {
        json!({
            "g": self.g.to_json(),
            "n": self.n,
            "verdict": self.verdict,
            "norm_ok": self.norm_ok,
            "inner_factor": self.inner_factor.to_json(),
            "outer_part": self.outer_part.to_json(),
            "factor_residual": self.factor_residual,
            "tolerances": self.tolerances.to_json(),
            "algorithm": algorithm_constants(),
        })
    }
}

impl ToJson for SplitCertificate {
    fn to_json(&self) -> Value {
        let c = &self.checks;
        json!({
            "g": self.g.to_json(),
            "n": self.n,
            "g1": self.g1.to_json(),
            "g2": self.g2.to_json(),
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
            "c": pair(self.c),
            "lambda": pair(self.lambda),
            "u": self.u.to_json(),
            "checks": {
                "midpoint_residual": c.midpoint_residual,
                "norm1": c.norm1,
                "norm2": c.norm2,
                "distinctness_gap": c.distinctness_gap,
                "extreme1": c.extreme1,
                "extreme2": c.extreme2,
                "unlift_asymmetry": c.unlift_asymmetry,
            },
            "valid": self.valid,
            "tolerances": self.tolerances.to_json(),
            "algorithm": algorithm_constants(),
            "conventions": {
                "lambda": LAMBDA_CONVENTION,
                "representative": REPRESENTATIVE_CONVENTION,
            },
        })
    }
}

impl ToJson for Decomposition {
    fn to_json(&self) -> Value {
        let mut out = json!({
            "x": self.x.to_json(),
            "g": self.g.to_json(),
            "rigid": self.is_rigid(),
            "x_inner": self.x_inner,
            "companion_inner": self.companion_inner,
            "modulus_residual": self.modulus_residual,
        });
        if let Some(cert) = &self.split {
            out["f1"] = cert.f1.to_json();
            out["f2"] = cert.f2.to_json();
            out["certificate"] = cert.to_json();
        }
        out
    }
}

impl ToJson for SolutionSet {
    fn to_json(&self) -> Value {
        json!({
            "count": self.solutions.len(),
            "outer": self.outer.to_json(),
            "inner": self.inner.to_json(),
            "solutions": self.solutions.iter().map(ToJson::to_json).collect::<Vec<_>>(),
            "convention": "each solution scaled so its lowest nonzero coefficient is real and positive",
        })
    }
}

impl ToJson for RigidityOutcome {
    fn to_json(&self) -> Value {
        match *self {
            RigidityOutcome::ConstantMultiple(c) => {
                json!({ "kind": "CONSTANT_MULTIPLE", "constant": pair(c) })
            }
            RigidityOutcome::NotDominated {
                root,
                required,
                found,
            } => json!({
                "kind": "NOT_DOMINATED",
                "root": pair(root),
                "required_multiplicity": required,
                "found_multiplicity": found,
            }),
            RigidityOutcome::Counterexample => json!({ "kind": "COUNTEREXAMPLE" }),
        }
    }
}

impl ToJson for RigidityReport {
    fn to_json(&self) -> Value {
        json!({
            "outcome": self.outcome.to_json(),
            "outer": self.outer.to_json(),
            "circle_roots": zeros(&self.circle_roots),
            "remainder": self.remainder,
            "tolerances": self.tolerances.to_json(),
            "algorithm": algorithm_constants(),
        })
    }
}

impl ToJson for BaselineSplit {
    fn to_json(&self) -> Value {
        json!({
            "g": self.g.to_json(),
            "lambda": pair(self.lambda),
            "tau": self.tau.to_json(),
            "g1": self.g1.to_json(),
            "g2": self.g2.to_json(),
            "convention": "tau = Re(lambda z)/2, lambda = i*g(1)/|g(1)|, lambda = 1 when g(1) = 0",
        })
    }
}

impl ToJson for SymbolTest {
    fn to_json(&self) -> Value {
        json!({ "defect": self.defect, "tolerance": self.tolerance, "verdict": self.verdict })
    }
}

impl ToJson for DominationEstimate {
    fn to_json(&self) -> Value {
        json!({
            "estimates": self.estimates.iter().map(|&(n, v)| json!([n, v])).collect::<Vec<_>>(),
            "flag": self.flag,
            "value": self.value,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    coeffs: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrig {
    n: usize,
    coeffs: BTreeMap<String, [f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    n: usize,
    poly: RawPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "N")]
    n: usize,
    values: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlaschke {
    m0: usize,
    zeros: Vec<([f64; 2], usize)>,
    lambda: [f64; 2],
}

fn finite(values: &[[f64; 2]]) -> Result<()> {
    if values.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Schema("non-finite number".into()))
    }
}

impl RawPoly {
    fn build(self) -> Result<Poly> {
        finite(&self.coeffs)?;
        Ok(Poly::new(self.coeffs.into_iter().map(complex).collect()))
    }
}

impl RawTrig {
    fn build(self) -> Result<TrigPoly> {
        let n = self.n;
        let mut pos = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut neg = BTreeMap::new();
        for (key, value) in &self.coeffs {
            finite(&[*value])?;
            let k: i64 = key
                .parse()
                .map_err(|_| Error::Schema(format!("coefficient index `{key}` is not an integer")))?;
            if k.unsigned_abs() as usize > n {
                return Err(Error::Schema(format!("coefficient index {k} exceeds n = {n}")));
            }
            if k >= 0 {
                pos[k as usize] = complex(*value);
            } else {
                neg.insert((-k) as usize, complex(*value));
            }
        }
        if pos[0].im.abs() > HERMITIAN_TOL {
            return Err(Error::Schema(format!("coefficient 0 has imaginary part {}", pos[0].im)));
        }
        pos[0].im = 0.0;
        for (k, v) in neg {
            if (v - pos[k].conj()).norm() > HERMITIAN_TOL {
                return Err(Error::Schema(format!(
                    "coefficient -{k} is not the conjugate of coefficient {k}"
                )));
            }
        }
        Ok(TrigPoly::new(n, &pos))
    }
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    RawPoly::deserialize(v).map_err(schema)?.build()
}

pub fn trig_from_json(v: &Value) -> Result<TrigPoly> {
    RawTrig::deserialize(v).map_err(schema)?.build()
}

pub fn kernel_from_json(v: &Value) -> Result<KernelElement> {
    let raw = RawKernel::deserialize(v).map_err(schema)?;
    KernelElement::new(raw.n, raw.poly.build()?)
}

pub fn grid_from_json(v: &Value) -> Result<Grid> {
    let raw = RawGrid::deserialize(v).map_err(schema)?;
    if raw.n != raw.values.len() {
        return Err(Error::Schema(format!(
            "N = {} but {} values given",
            raw.n,
            raw.values.len()
        )));
    }
    finite(&raw.values)?;
    Grid::new(raw.values.into_iter().map(complex).collect())
}

pub fn blaschke_from_json(v: &Value) -> Result<BlaschkeProduct> {
    let raw = RawBlaschke::deserialize(v).map_err(schema)?;
    BlaschkeProduct::new(
        raw.m0,
        raw.zeros.into_iter().map(|(a, m)| (complex(a), m)).collect(),
        complex(raw.lambda),
    )
}

/// Contents of an input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Poly(Poly),
    TrigPoly(TrigPoly),
    KernelElement(KernelElement),
    Grid(Grid),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Poly(_) => "poly",
            Instance::TrigPoly(_) => "trig_poly",
            Instance::KernelElement(_) => "kernel_element",
            Instance::Grid(_) => "grid",
        }
    }

    pub fn payload(&self) -> Value {
        match self {
            Instance::Poly(p) => p.to_json(),
            Instance::TrigPoly(g) => g.to_json(),
            Instance::KernelElement(x) => x.to_json(),
            Instance::Grid(gr) => gr.to_json(),
        }
    }

    pub fn to_json(&self) -> Value {
        envelope(self.kind(), self.payload())
    }
}

/// `{"version": "hkl-1", "kind": kind, "payload": payload}`.
pub fn envelope(kind: &str, payload: Value) -> Value {
    json!({ "version": VERSION, "kind": kind, "payload": payload })
}

/// Parse an `hkl-1` envelope holding one of the input kinds.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let v: Value = serde_json::from_str(text).map_err(schema)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("instance must be a JSON object".into()))?;
    if let Some(key) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "version" | "kind" | "payload"))
    {
        return Err(Error::Schema(format!("unknown field `{key}`")));
    }
    match obj.get("version").and_then(Value::as_str) {
        Some(VERSION) => {}
        Some(other) => return Err(Error::Schema(format!("unsupported version `{other}`"))),
        None => return Err(Error::Schema("missing version tag".into())),
    }
    let payload = obj
        .get("payload")
        .ok_or_else(|| Error::Schema("missing payload".into()))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("poly") => poly_from_json(payload).map(Instance::Poly),
        Some("trig_poly") => trig_from_json(payload).map(Instance::TrigPoly),
        Some("kernel_element") => kernel_from_json(payload).map(Instance::KernelElement),
        Some("grid") => grid_from_json(payload).map(Instance::Grid),
        Some(other) => Err(Error::Schema(format!("unknown kind `{other}`"))),
        None => Err(Error::Schema("missing kind".into())),
    }
}

/// A float with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty-print `v`: two-space indentation, keys in sorted order, arrays of
/// scalars on one line, floats via [`format_f64`].
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_scalar(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN))),
        other => out.push_str(&other.to_string()),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn indent(out: &mut String, depth: usize) {
    out.extend(std::iter::repeat_n("  ", depth));
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(out, item);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
        scalar => write_scalar(out, scalar),
    }
}
