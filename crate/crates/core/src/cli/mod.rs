//! Command-line front end: argument handling, dispatch and report
//! rendering. `run` is the whole program minus process exit, so it can be
//! driven from tests.

pub mod json;
pub mod parse;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::autodetect::isotropy_report;
use crate::cmoperator::operator_report;
use crate::error::Error;
use crate::jetring::{Grading, Var, WeightedPoly};
use crate::odebridge::{check_ode_normal, ode_to_surface, surface_to_ode, tresse_first_invariant, OdeJet};
use crate::regnorm::{
    check_normal_conditions, finite_type, geometric_normalize, normalize, reduce, NormalConditions, NormalFormReport,
    PointMap, SurfaceJet, TypeData, TypeVerdict,
};
use crate::singnorm::{check_singular_normal, normalize_singular, reduced_type};

pub use parse::parse_poly;

/// Default bound on truncation orders, overridable with `PARACR_MAX_ORDER`.
pub const DEFAULT_MAX_ORDER: i32 = 24;
pub const DEFAULT_REGULAR_ORDER: i32 = 8;

const SURFACE_VARS: [Var; 3] = [Var::A, Var::B, Var::X];
const ODE_VARS: [Var; 3] = [Var::X, Var::Y, Var::P];

#[derive(Parser, Debug)]
#[command(name = "paracr", version, about = "Exact normal forms of para-CR surfaces y = F(a, b, x) and ODEs y'' = B(x, y, y')")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Polynomial given inline.
    #[arg(long, conflicts_with = "input")]
    pub expr: Option<String>,
    /// File holding one polynomial; may be repeated.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Truncation order.
    #[arg(long)]
    pub order: Option<i32>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kernel, image and normal-form complement of the model operator.
    Tables {
        /// Single weight to report.
        #[arg(long)]
        ell: Option<u32>,
        /// Report weights 0..=MAX when --ell is absent.
        #[arg(long, default_value_t = 4)]
        max_ell: u32,
        #[arg(long)]
        json: bool,
    },
    /// Normal form of a regular surface.
    Normalize {
        #[command(flatten)]
        io: InputArgs,
        /// Use the step-by-step geometric construction.
        #[arg(long)]
        geometric: bool,
    },
    /// Normal form of a surface of finite type k > 2.
    NormalizeSingular {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Finite type (k, m, n) and the weight-k coefficients.
    Type {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Solution surface of y'' = B(x, y, p).
    Ode2surf {
        #[command(flatten)]
        io: InputArgs,
    },
    /// ODE whose solutions are the surface y = F(a, b, x).
    Surf2ode {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Checks the normal-form conditions on a surface jet.
    CheckNormal {
        #[command(flatten)]
        io: InputArgs,
        /// `regular` or `singular:K`.
        #[arg(long, default_value = "regular")]
        grading: String,
    },
    /// Checks the ODE normal-form conditions.
    CheckOdeNormal {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Isotropic infinitesimal automorphisms of a surface of finite type.
    Autos {
        #[command(flatten)]
        io: InputArgs,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Bad arguments, unreadable input or a syntax error.
    Config(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Config(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type JobResult = Result<(String, Value), Failure>;

fn max_order() -> Result<i32, Failure> {
    match std::env::var("PARACR_MAX_ORDER") {
        Ok(s) => s
            .trim()
            .parse::<i32>()
            .ok()
            .filter(|&n| n >= 2)
            .ok_or_else(|| Failure::Config(format!("PARACR_MAX_ORDER must be an integer ≥ 2, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn check_order(order: i32, guard: i32) -> Result<i32, Failure> {
    if order < 2 {
        return Err(Failure::Config(format!("order must be at least 2, got {order}")));
    }
    if order > guard {
        return Err(Failure::Config(format!("order {order} exceeds the limit {guard} (set PARACR_MAX_ORDER to raise it)")));
    }
    Ok(order)
}

/// Parses a surface polynomial `F(a, b, x)` exactly up to total degree `guard`.
fn surface_poly(text: &str, guard: i32) -> Result<WeightedPoly, Failure> {
    Ok(parse_poly(text, &SURFACE_VARS, Grading::uniform(), guard)?)
}

fn type_of(f: &WeightedPoly, guard: i32) -> Result<TypeData, Failure> {
    match finite_type(f, guard as u32)? {
        TypeVerdict::Finite(t) => Ok(t),
        TypeVerdict::Undetermined { up_to } => Err(Error::InfiniteType { up_to }.into()),
    }
}

fn type_json(t: &TypeData) -> Value {
    let gammas: Vec<Value> = t.gammas.iter().map(|(j, c)| json!({ "j": j, "gamma": c.to_string() })).collect();
    json!({ "k": t.k, "m": t.m, "n": t.n, "gammas": gammas })
}

fn type_text(t: &TypeData) -> String {
    let mut s = format!("k = {}, m = {}, n = {}", t.k, t.m, t.n);
    for (j, c) in &t.gammas {
        write!(s, ", gamma_{j} = {c}").unwrap();
    }
    s
}

fn map_text(out: &mut String, label: &str, m: &PointMap) {
    writeln!(out, "{label}:").unwrap();
    for (name, p) in [("X", &m.x), ("Y", &m.y), ("A", &m.a), ("B", &m.b)] {
        writeln!(out, "  {name} = {p}").unwrap();
    }
}

fn eliminated_json(e: &std::collections::BTreeMap<u32, Vec<crate::jetring::Monomial>>) -> Value {
    let mut out = serde_json::Map::new();
    for (w, ms) in e {
        out.insert(w.to_string(), json!(ms.iter().map(|m| m.to_string()).collect::<Vec<_>>()));
    }
    Value::Object(out)
}

fn conditions_json(c: &NormalConditions) -> Value {
    json!({ "leading": c.leading, "i": c.i, "ii": c.ii, "iii": c.iii, "iv": c.iv, "v": c.v })
}

fn tables(ell: Option<u32>, max_ell: u32) -> JobResult {
    let weights: Vec<u32> = match ell {
        Some(l) => vec![l],
        None => (0..=max_ell).collect(),
    };
    if weights.iter().any(|&l| l > 40) {
        return Err(Failure::Config("weights above 40 are not supported".into()));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for l in weights {
        let r = operator_report(l);
        writeln!(text, "weight {l}: domain {}, image {}, kernel {}", r.domain_dim, r.image_dim, r.kernel_dim).unwrap();
        for v in &r.kernel_basis {
            writeln!(text, "  kernel: {v}").unwrap();
        }
        if !r.complement_monomials.is_empty() {
            let c: Vec<String> = r.complement_monomials.iter().map(|m| m.to_string()).collect();
            writeln!(text, "  complement: {}", c.join(", ")).unwrap();
        }
        rows.push(json!({
            "ell": l,
            "domain_dim": r.domain_dim,
            "image_dim": r.image_dim,
            "kernel_dim": r.kernel_dim,
            "kernel_basis": r.kernel_basis.iter().map(json::field).collect::<Vec<_>>(),
            "complement": r.complement_monomials.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        }));
    }
    Ok((text, json!({ "command": "tables", "rows": rows })))
}

fn report_common(out: &mut String, r: &NormalFormReport) -> Value {
    writeln!(out, "normalized: {}", r.normalized.f()).unwrap();
    if let Some(p) = &r.preliminary {
        map_text(out, "preliminary", p);
    }
    map_text(out, "transform", &r.transform);
    for (w, ms) in &r.eliminated_by_weight {
        let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        writeln!(out, "eliminated at weight {w}: {}", ms.join(", ")).unwrap();
    }
    let failures = r.conditions.failures();
    if failures.is_empty() {
        writeln!(out, "normal form conditions: all hold").unwrap();
    } else {
        writeln!(out, "normal form conditions failing: {}", failures.join(", ")).unwrap();
    }
    json!({
        "normalized": json::poly(r.normalized.f()),
        "transform": json::point_map(&r.transform),
        "preliminary": r.preliminary.as_ref().map(json::point_map),
        "eliminated": eliminated_json(&r.eliminated_by_weight),
        "conditions": conditions_json(&r.conditions),
    })
}

fn normalize_job(text: &str, order: Option<i32>, geometric: bool, guard: i32) -> JobResult {
    let order = check_order(order.unwrap_or(DEFAULT_REGULAR_ORDER), guard)?;
    let f = surface_poly(text, guard)?;
    let report = if geometric {
        let reduced = reduce(&f, order)?;
        if !reduced.type_data.is_regular() {
            return Err(Error::NotRegular { k: reduced.type_data.k }.into());
        }
        let mut r = geometric_normalize(&reduced.jet)?;
        if !reduced.map.is_identity() {
            r.preliminary = Some(reduced.map);
        }
        r
    } else {
        normalize(&f, order)?
    };
    let mut out = String::new();
    let mut v = report_common(&mut out, &report);
    v["command"] = json!("normalize");
    v["method"] = json!(if geometric { "geometric" } else { "jet" });
    v["order"] = json!(order);
    Ok((out, v))
}

fn singular_order(order: Option<i32>, t: &TypeData, guard: i32) -> Result<i32, Failure> {
    check_order(order.unwrap_or(t.k as i32 + 6), guard)
}

fn normalize_singular_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let f = surface_poly(text, guard)?;
    let t = type_of(&f, guard)?;
    if t.is_regular() {
        return Err(Failure::Domain("surface is regular (k = 2); use normalize".into()));
    }
    let order = singular_order(order, &t, guard)?;
    let r = normalize_singular(&f, order)?;
    let check = check_singular_normal(&r.normalized, &r.type_data, order);
    let mut out = String::new();
    writeln!(out, "type: {}", type_text(&r.type_data)).unwrap();
    writeln!(out, "normalized: {}", r.normalized.f()).unwrap();
    if let Some(p) = &r.preliminary {
        map_text(&mut out, "preliminary", p);
    }
    map_text(&mut out, "transform", &r.transform);
    for (w, ms) in &r.eliminated_by_weight {
        let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        writeln!(out, "eliminated at weight {w}: {}", ms.join(", ")).unwrap();
    }
    writeln!(out, "normal: {}", check.is_normal()).unwrap();
    let v = json!({
        "command": "normalize-singular",
        "order": order,
        "type": type_json(&r.type_data),
        "normalized": json::poly(r.normalized.f()),
        "transform": json::point_map(&r.transform),
        "preliminary": r.preliminary.as_ref().map(json::point_map),
        "eliminated": eliminated_json(&r.eliminated_by_weight),
        "normal": check.is_normal(),
    });
    Ok((out, v))
}

fn type_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let bound = check_order(order.unwrap_or(guard), guard)?;
    let f = surface_poly(text, guard)?;
    let t = type_of(&f, bound)?;
    let verdict = if t.is_regular() { "regular" } else { "singular" };
    let out = format!("{verdict}: {}\n", type_text(&t));
    let mut v = type_json(&t);
    v["command"] = json!("type");
    v["verdict"] = json!(verdict);
    Ok((out, v))
}

fn ode2surf_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let order = check_order(order.unwrap_or(DEFAULT_REGULAR_ORDER), guard)?;
    let b = OdeJet::new(parse_poly(text, &ODE_VARS, Grading::uniform(), order - 2)?)?;
    let f = ode_to_surface(&b, order)?;
    let out = format!("ode: y'' = {}\nsurface: {}\n", b.rhs(), f);
    let v = json!({ "command": "ode2surf", "order": order, "ode": json::poly(b.rhs()), "surface": json::poly(f.f()) });
    Ok((out, v))
}

fn surf2ode_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let order = check_order(order.unwrap_or(DEFAULT_REGULAR_ORDER), guard)?;
    let f = SurfaceJet::new(parse_poly(text, &SURFACE_VARS, Grading::uniform(), order)?)?;
    let (b, data) = surface_to_ode(&f)?;
    let tresse = tresse_first_invariant(&b);
    let mut out = format!("surface: {f}\node: y'' = {}\n", b.rhs());
    writeln!(out, "a = {}\nb = {}\nphi = {}", data.a_series, data.b_series, data.phi).unwrap();
    writeln!(out, "phi divisible by p^2: {}", data.phi_divisible_by_p2()).unwrap();
    writeln!(out, "first invariant: {tresse}").unwrap();
    let v = json!({
        "command": "surf2ode",
        "order": order,
        "surface": json::poly(f.f()),
        "ode": json::poly(b.rhs()),
        "a_series": json::poly(&data.a_series),
        "b_series": json::poly(&data.b_series),
        "phi": json::poly(&data.phi),
        "phi_divisible_by_p2": data.phi_divisible_by_p2(),
        "tresse_first_invariant": json::poly(&tresse),
    });
    Ok((out, v))
}

fn check_normal_job(text: &str, order: Option<i32>, grading: &str, guard: i32) -> JobResult {
    let k = match grading {
        "regular" => 2,
        other => other
            .strip_prefix("singular:")
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| k >= 2)
            .ok_or_else(|| Failure::Config(format!("grading must be `regular` or `singular:K` with K ≥ 2, got {other:?}")))?,
    };
    let order = check_order(order.unwrap_or(if k == 2 { DEFAULT_REGULAR_ORDER } else { k as i32 + 6 }), guard)?;
    let f = SurfaceJet::new(parse_poly(text, &SURFACE_VARS, Grading::singular(k), order)?)?;
    let mut v = json!({ "command": "check-normal", "order": order, "grading": grading });
    let out = if k == 2 {
        let c = check_normal_conditions(&f);
        v["normal"] = json!(c.all());
        v["conditions"] = conditions_json(&c);
        let failures = c.failures();
        if failures.is_empty() {
            "normal: true\n".to_string()
        } else {
            format!("normal: false\nfailing conditions: {}\n", failures.join(", "))
        }
    } else {
        let t = reduced_type(&f)?;
        let c = check_singular_normal(&f, &t, order);
        v["normal"] = json!(c.is_normal());
        v["type"] = type_json(&t);
        v["offending"] =
            json!(c.offending.iter().map(|(w, m)| json!({ "weight": w, "monomial": m.to_string() })).collect::<Vec<_>>());
        let mut s = format!("normal: {}\n", c.is_normal());
        for (w, m) in &c.offending {
            writeln!(s, "forbidden at weight {w}: {m}").unwrap();
        }
        s
    };
    Ok((out, v))
}

fn check_ode_normal_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let order = check_order(order.unwrap_or(DEFAULT_REGULAR_ORDER), guard)?;
    let b = OdeJet::new(parse_poly(text, &ODE_VARS, Grading::uniform(), order)?)?;
    let r = check_ode_normal(&b);
    let tresse = tresse_first_invariant(&b);
    let mut out = format!("normal: {}\n", r.normal);
    for (i, j) in &r.offending {
        writeln!(out, "offending family: ({i}, {j})").unwrap();
    }
    writeln!(out, "first invariant: {tresse}").unwrap();
    let v = json!({
        "command": "check-ode-normal",
        "order": order,
        "normal": r.normal,
        "offending": r.offending.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
        "tresse_first_invariant": json::poly(&tresse),
    });
    Ok((out, v))
}

fn autos_job(text: &str, order: Option<i32>, guard: i32) -> JobResult {
    let f = surface_poly(text, guard)?;
    let t = type_of(&f, guard)?;
    let order = singular_order(order, &t, guard)?;
    let reduced = reduce(&f, order)?;
    let r = isotropy_report(&reduced.jet, order)?;
    let mut out = format!("surface: {}\n", reduced.jet);
    writeln!(out, "verdict: {} (up to weight {})", r.verdict.label(), r.up_to).unwrap();
    for (name, chi) in &r.fields {
        writeln!(out, "  {name} = {chi}").unwrap();
    }
    writeln!(
        out,
        "pattern (b^{} x^{})^r: {} with a-dependent coefficients, {} with constant coefficients",
        r.m, r.n, r.pattern.with_a_coefficients, r.pattern.constant_coefficients
    )
    .unwrap();
    let v = json!({
        "command": "autos",
        "order": order,
        "verdict": r.verdict.label(),
        "k": r.k,
        "m": r.m,
        "n": r.n,
        "surface": json::poly(reduced.jet.f()),
        "fields": r.fields.iter().map(|(n, chi)| json!({ "name": n, "field": json::field(chi) })).collect::<Vec<_>>(),
        "pattern": {
            "with_a_coefficients": r.pattern.with_a_coefficients,
            "constant_coefficients": r.pattern.constant_coefficients,
        },
        "up_to": r.up_to,
    });
    Ok((out, v))
}

enum Source {
    Inline(String),
    File(PathBuf),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Inline(_) => "<expr>".into(),
            Source::File(p) => p.display().to_string(),
        }
    }

    fn read(&self) -> Result<String, Failure> {
        match self {
            Source::Inline(s) => Ok(s.clone()),
            Source::File(p) => std::fs::read_to_string(p)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display()))),
        }
    }
}

fn sources(io: &InputArgs) -> Result<Vec<Source>, Failure> {
    match (&io.expr, io.input.is_empty()) {
        (Some(e), true) => Ok(vec![Source::Inline(e.clone())]),
        (None, false) => Ok(io.input.iter().cloned().map(Source::File).collect()),
        _ => Err(Failure::Config("give exactly one of --expr or --input".into())),
    }
}

/// Runs one job per input, concurrently, and assembles the output in input
/// order.
fn run_inputs<F>(io: &InputArgs, job: F) -> Outcome
where
    F: Fn(&str) -> JobResult + Sync,
{
    let srcs = match sources(io) {
        Ok(s) => s,
        Err(e) => return failure_outcome(&e),
    };
    let results: Vec<JobResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = srcs.iter().map(|s| scope.spawn(|| job(&s.read()?))).collect();
        handles.into_iter().map(|h| h.join().expect("job panicked")).collect()
    });
    let many = srcs.len() > 1;
    let mut code = 0;
    let mut stdout = String::new();
    let mut stderr = String::new();
    let mut docs = Vec::new();
    for (src, res) in srcs.iter().zip(results) {
        match res {
            Ok((text, mut v)) => {
                if io.json {
                    v["input"] = json!(src.label());
                    docs.push(v);
                } else {
                    if many {
                        writeln!(stdout, "== {} ==", src.label()).unwrap();
                    }
                    stdout.push_str(&text);
                }
            }
            Err(e) => {
                code = code.max(e.code());
                writeln!(stderr, "error: {}: {}", src.label(), e.message()).unwrap();
            }
        }
    }
    if io.json && !docs.is_empty() {
        let v = if many { Value::Array(docs) } else { docs.pop().expect("one") };
        stdout = json::to_string(v);
        stdout.push('\n');
    }
    Outcome { code, stdout, stderr }
}

fn failure_outcome(e: &Failure) -> Outcome {
    Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {}\n", e.message()) }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let guard = match max_order() {
        Ok(g) => g,
        Err(e) => return failure_outcome(&e),
    };
    match cli.command {
        Command::Tables { ell, max_ell, json: as_json } => match tables(ell, max_ell) {
            Ok((text, v)) => Outcome {
                code: 0,
                stdout: if as_json { json::to_string(v) + "\n" } else { text },
                stderr: String::new(),
            },
            Err(e) => failure_outcome(&e),
        },
        Command::Normalize { io, geometric } => run_inputs(&io, |t| normalize_job(t, io.order, geometric, guard)),
        Command::NormalizeSingular { io } => run_inputs(&io, |t| normalize_singular_job(t, io.order, guard)),
        Command::Type { io } => run_inputs(&io, |t| type_job(t, io.order, guard)),
        Command::Ode2surf { io } => run_inputs(&io, |t| ode2surf_job(t, io.order, guard)),
        Command::Surf2ode { io } => run_inputs(&io, |t| surf2ode_job(t, io.order, guard)),
        Command::CheckNormal { io, grading } => {
            run_inputs(&io, |t| check_normal_job(t, io.order, &grading, guard))
        }
        Command::CheckOdeNormal { io } => run_inputs(&io, |t| check_ode_normal_job(t, io.order, guard)),
        Command::Autos { io } => run_inputs(&io, |t| autos_job(t, io.order, guard)),
    }
}
