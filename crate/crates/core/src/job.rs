//! Serializable job descriptions and the deterministic pipeline that runs them.
//!
//! A job is a flat JSON object mirroring the command-line flags, e.g.
//! `{"command": "eval", "n": 2, "fn": "z^2", "at": "e1+e2", "method": "both"}`.
//! `matrix` and `domain` are either inline JSON or a path relative to the job file.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cauchy::{
    cauchy_transform, cauchy_transform_report, contour_for, slice_regularity_residual, ContourPolicy,
    QuadratureOptions, DEFAULT_FD_STEP, DEFAULT_REGULARITY_TOL,
};
use crate::clifford::{
    cmultivector_to_json, complex_to_json, multivector_to_json, parse_multivector, parse_paravector, Paravector,
};
use crate::dsl;
use crate::error::{Error, Result};
use crate::operator::{
    cl_spectrum_membership, complex_spectrum, riesz_dunford_eval, slice_calculus_eval, spectral_intersection_membership,
    CliffordOperator, DEFAULT_FLAT_TOL, DEFAULT_INTERSECTION_TOL,
};
use crate::scalar::cx;
use crate::spectral::{eigenvalues, resolvent};
use crate::stem::{gfc_eval, verify_stem, PlanarDomain, StemFunction, DEFAULT_STEM_SAMPLES, DEFAULT_STEM_TOL};
use crate::suites::{run_suite, SuiteOptions};

/// Default agreement tolerance between the direct and Cauchy evaluations.
pub const DEFAULT_AGREEMENT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Mul,
    Spectrum,
    Resolvent,
    Eval,
    Regularity,
    OpSpectrum,
    OpEval,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Cauchy,
    Both,
    RieszDunford,
    Slice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub n: usize,
    /// Positional operands, e.g. the two factors of `mul`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    #[serde(rename = "fn", default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paravector: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_frac: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            n: 0,
            args: Vec::new(),
            function: None,
            at: None,
            paravector: None,
            lambda: None,
            method: None,
            matrix: None,
            domain: None,
            nodes: None,
            radius_frac: None,
            fd_step: None,
            seed: None,
            tol: None,
            suite: None,
            out: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("job file: {e}")))
    }

    fn require<'a>(&self, field: &'a Option<String>, name: &str) -> Result<&'a str> {
        field
            .as_deref()
            .ok_or_else(|| Error::Invalid(format!("{} needs --{name}", command_name(self.command))))
    }

    fn policy(&self) -> Result<ContourPolicy<f64>> {
        let mut p = ContourPolicy::default();
        if let Some(f) = self.radius_frac {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Invalid("radius-frac must lie in (0, 1)".into()));
            }
            p.radius_frac = f;
        }
        if let Some(k) = self.nodes {
            if k < 4 {
                return Err(Error::Invalid("nodes must be at least 4".into()));
            }
            p.nodes_per_circle = k;
        }
        Ok(p)
    }

    fn quadrature(&self) -> Result<QuadratureOptions<f64>> {
        let q = QuadratureOptions::default();
        let start = self.nodes.unwrap_or(0);
        if start > q.max_nodes {
            return Err(Error::Invalid(format!("nodes may not exceed {}", q.max_nodes)));
        }
        Ok(q)
    }

    fn fd_step(&self) -> Result<f64> {
        let h = self.fd_step.unwrap_or(DEFAULT_FD_STEP);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Invalid("fd-step must be positive".into()));
        }
        Ok(h)
    }

    fn tol_or(&self, default: f64) -> Result<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Invalid("tol must be positive".into()));
        }
        Ok(t)
    }
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Mul => "mul",
        Command::Spectrum => "spectrum",
        Command::Resolvent => "resolvent",
        Command::Eval => "eval",
        Command::Regularity => "regularity",
        Command::OpSpectrum => "op-spectrum",
        Command::OpEval => "op-eval",
        Command::Check => "check",
    }
}

/// Outcome of a job: the JSON report and whether every embedded check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct JobOutput {
    pub report: Value,
    pub passed: bool,
}

/// Renders a report exactly as written to stdout or `--out`.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Machine-readable form of an error.
pub fn error_report(e: &Error) -> Value {
    let class = match e.class() {
        crate::ErrorClass::Validation => "validation",
        crate::ErrorClass::Numeric => "numeric",
    };
    json!({"error": {"kind": e.kind(), "class": class, "message": e.to_string()}})
}

/// Runs `spec`; relative `matrix`/`domain` paths resolve against `base`.
pub fn run_job(spec: &JobSpec, base: &Path) -> Result<JobOutput> {
    let mut echo = serde_json::to_value(spec).expect("job specs serialize");
    if let Some(obj) = echo.as_object_mut() {
        obj.remove("out");
    }
    let (body, passed) = match spec.command {
        Command::Mul => (mul(spec)?, true),
        Command::Spectrum => (spectrum(spec)?, true),
        Command::Resolvent => (resolvent_cmd(spec)?, true),
        Command::Eval => eval(spec, base)?,
        Command::Regularity => regularity(spec, base)?,
        Command::OpSpectrum => (op_spectrum(spec, base)?, true),
        Command::OpEval => op_eval(spec, base)?,
        Command::Check => check(spec)?,
    };
    Ok(JobOutput { report: json!({"job": echo, "result": body, "passed": passed}), passed })
}

fn load(value: &Value, base: &Path, what: &str) -> Result<Value> {
    match value {
        Value::String(path) => {
            let full = base.join(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| Error::Invalid(format!("cannot read {what} file {}: {e}", full.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{what} file {}: {e}", full.display())))
        }
        other => Ok(other.clone()),
    }
}

fn domain(spec: &JobSpec, base: &Path) -> Result<Option<PlanarDomain<f64>>> {
    spec.domain.as_ref().map(|v| PlanarDomain::from_json(&load(v, base, "domain")?)).transpose()
}

fn operator(spec: &JobSpec, base: &Path) -> Result<CliffordOperator<f64>> {
    let v = spec.matrix.as_ref().ok_or_else(|| Error::Invalid(format!("{} needs --matrix", command_name(spec.command))))?;
    let op = CliffordOperator::from_json(&load(v, base, "matrix")?)?;
    if spec.n != 0 && spec.n != op.rank() {
        return Err(Error::RankMismatch { left: spec.n, right: op.rank() });
    }
    Ok(op)
}

fn function(spec: &JobSpec, base: &Path, n: usize) -> Result<StemFunction<f64>> {
    dsl::stem_function(spec.require(&spec.function, "fn")?, n, domain(spec, base)?)
}

fn paravector_arg(spec: &JobSpec) -> Result<Paravector<f64>> {
    let src = spec.paravector.as_deref().or(spec.at.as_deref());
    let src = src.ok_or_else(|| Error::Invalid(format!("{} needs --paravector or --at", command_name(spec.command))))?;
    parse_paravector(src, spec.n)
}

fn complex_pair(z: num_complex::Complex<f64>) -> Value {
    complex_to_json(z)
}

fn mul(spec: &JobSpec) -> Result<Value> {
    let [a, b] = spec.args.as_slice() else {
        return Err(Error::Invalid("mul needs exactly two operands".into()));
    };
    let (a, b) = (parse_multivector::<f64>(a, spec.n)?, parse_multivector::<f64>(b, spec.n)?);
    let p = a.try_mul(&b)?;
    Ok(json!({"product": p.to_string(), "value": multivector_to_json(&p)}))
}

fn spectrum(spec: &JobSpec) -> Result<Value> {
    let k = paravector_arg(spec)?;
    let data = eigenvalues(&k);
    let opt = |c: &Option<crate::CMultivector<f64>>| c.as_ref().map(cmultivector_to_json).unwrap_or(Value::Null);
    Ok(json!({
        "paravector": k.to_string(),
        "spectrum": [complex_pair(data.s_plus), complex_pair(data.s_minus)],
        "real": data.is_real(),
        "unit": data.s_unit.as_ref().map(|s| Value::String(s.to_string())).unwrap_or(Value::Null),
        "iota_plus": opt(&data.iota_plus),
        "iota_minus": opt(&data.iota_minus),
    }))
}

fn resolvent_cmd(spec: &JobSpec) -> Result<Value> {
    let k = paravector_arg(spec)?;
    let [re, im] = spec.lambda.ok_or_else(|| Error::Invalid("resolvent needs --lambda".into()))?;
    let r = resolvent(cx(re, im), &k)?;
    Ok(json!({"paravector": k.to_string(), "lambda": [re, im], "resolvent": cmultivector_to_json(&r), "text": r.to_string()}))
}

fn eval(spec: &JobSpec, base: &Path) -> Result<(Value, bool)> {
    let f = function(spec, base, spec.n)?;
    let k = parse_paravector(spec.require(&spec.at, "at")?, spec.n)?;
    let method = spec.method.unwrap_or(Method::Direct);
    let stem = verify_stem(&f, f.domain(), DEFAULT_STEM_SAMPLES, DEFAULT_STEM_TOL)?;
    if !stem.passed {
        return Err(Error::StemViolation { residual: stem.worst, tol: DEFAULT_STEM_TOL });
    }
    let mut out = serde_json::Map::new();
    out.insert("fn".into(), json!(spec.function));
    out.insert("at".into(), json!(k.to_string()));
    out.insert("stem_residual".into(), json!(stem.worst));
    let direct = match method {
        Method::Direct | Method::Both => Some(gfc_eval(&f, &k)?),
        Method::Cauchy => None,
        _ => return Err(Error::Invalid("eval method must be direct, cauchy or both".into())),
    };
    let cauchy = match method {
        Method::Cauchy | Method::Both => {
            let contour = contour_for(&f, &k, &spec.policy()?)?;
            let r = cauchy_transform_report(&f, &k, &contour, &spec.quadrature()?)?;
            out.insert("contour".into(), contour.to_json());
            out.insert("nodes_per_circle".into(), json!(r.nodes_per_circle));
            Some(r.value)
        }
        _ => None,
    };
    for (name, v) in [("direct", &direct), ("cauchy", &cauchy)] {
        if let Some(v) = v {
            out.insert(name.into(), json!({"value": cmultivector_to_json(v), "text": v.to_string()}));
        }
    }
    let mut passed = true;
    if let (Some(d), Some(c)) = (&direct, &cauchy) {
        let tol = spec.tol_or(DEFAULT_AGREEMENT_TOL)?;
        let residual = c.dist(d) / d.norm().max(1.0);
        passed = residual <= tol;
        out.insert("residual".into(), json!(residual));
        out.insert("tol".into(), json!(tol));
    }
    Ok((Value::Object(out), passed))
}

fn regularity(spec: &JobSpec, base: &Path) -> Result<(Value, bool)> {
    let f = function(spec, base, spec.n)?;
    let k = parse_paravector(spec.require(&spec.at, "at")?, spec.n)?;
    let h = spec.fd_step()?;
    let tol = spec.tol_or(DEFAULT_REGULARITY_TOL)?;
    let contour = contour_for(&f, &k, &spec.policy()?)?;
    let opts = spec.quadrature()?;
    let phi = |p: &Paravector<f64>| cauchy_transform(&f, p, &contour, &opts);
    let residual = slice_regularity_residual(&phi, &k, h)?;
    Ok((json!({"fn": spec.function, "at": k.to_string(), "fd_step": h, "residual": residual, "tol": tol}), residual <= tol))
}

fn op_spectrum(spec: &JobSpec, base: &Path) -> Result<Value> {
    let t = operator(spec, base)?;
    let s = complex_spectrum(&t)?;
    let mut out = json!({
        "d": t.dim(),
        "n": t.rank(),
        "eigenvalues": s.eigenvalues.iter().map(|&z| complex_pair(z)).collect::<Vec<_>>(),
        "pairing_defect": s.pairing_defect,
    });
    let src = spec.paravector.as_deref().or(spec.at.as_deref());
    if let Some(src) = src {
        let k = parse_paravector::<f64>(src, t.rank())?;
        let m = cl_spectrum_membership(&t, &k);
        out["membership"] = json!({
            "paravector": k.to_string(),
            "member": m.member,
            "relative_pivot": m.relative_pivot,
            "margin": m.margin,
            "eigenvalue_route": spectral_intersection_membership(&s, &k, DEFAULT_INTERSECTION_TOL),
        });
    }
    Ok(out)
}

fn op_eval(spec: &JobSpec, base: &Path) -> Result<(Value, bool)> {
    let t = operator(spec, base)?;
    let f = function(spec, base, t.rank())?;
    let (policy, opts) = (spec.policy()?, spec.quadrature()?);
    let flat_tol = spec.tol_or(DEFAULT_FLAT_TOL)?;
    let method = spec.method.unwrap_or(Method::RieszDunford);
    let value_json = |v: &crate::operator::OperatorValue<f64>| {
        json!({"operator": v.operator.to_json(), "flat_residual": v.flat_residual, "linearity_residual": v.linearity_residual})
    };
    let rd = match method {
        Method::RieszDunford | Method::Both => Some(riesz_dunford_eval(&f, &t, None, &policy, &opts, flat_tol)?),
        Method::Slice => None,
        _ => return Err(Error::Invalid("op-eval method must be riesz-dunford, slice or both".into())),
    };
    let slice = match method {
        Method::Slice | Method::Both => {
            if t.rank() == 0 {
                return Err(Error::Invalid("the slice calculus needs n >= 1".into()));
            }
            let unit = match spec.at.as_deref() {
                Some(src) => parse_paravector(src, t.rank())?,
                None => parse_paravector("e1", t.rank())?,
            };
            Some(slice_calculus_eval(&f, &t, &unit, None, &policy, &opts, flat_tol)?)
        }
        _ => None,
    };
    let mut out = json!({"fn": spec.function});
    if let Some(v) = &rd {
        out["riesz_dunford"] = value_json(v);
    }
    if let Some(v) = &slice {
        out["slice"] = value_json(v);
    }
    let mut passed = true;
    if let (Some(a), Some(b)) = (&rd, &slice) {
        let diff = crate::linalg::frobenius(&(&a.matrix - &b.matrix));
        passed = diff <= 1e-6;
        out["difference"] = json!(diff);
    }
    Ok((out, passed))
}

fn check(spec: &JobSpec) -> Result<(Value, bool)> {
    let name = spec.suite.as_deref().unwrap_or("all");
    let opts = SuiteOptions {
        seed: spec.seed.unwrap_or(crate::sampling::DEFAULT_SEED),
        policy: spec.policy()?,
        quadrature: spec.quadrature()?,
        fd_step: spec.fd_step()?,
    };
    let reports = run_suite(name, &opts)?;
    let passed = reports.iter().all(|r| r.passed);
    Ok((json!({"suites": reports}), passed))
}
