mod parse;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use parse::{parse_inputs, parse_module};
use report::{connection, form, rational, Report};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};
use thiserror::Error;
use wittcoh::cochain::{cohomology, Cochain};
use wittcoh::envelope::{bsa_operator, Operator, PBWMonomial};
use wittcoh::exactnum::{fmt_rational, parse_rational, Poly, Rational, Scalar};
use wittcoh::liealg::AlgebraKind;
use wittcoh::massey::{
    ffr_product, mc_residual, module_inputs, product_set, related_cocycle, rigidity_check, spectral_check, MasseyInput,
    Status, ValueSet, ALPHA,
};
use wittcoh::resolution::{cross_validate, delta, thread_cohomology, verify_exactness, Operators};
use wittcoh::suites;
use wittcoh::threadmod::ThreadSpec;
use wittcoh::verma::{singular_vector, VermaModule, VermaParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Engine(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

fn engine(e: impl std::fmt::Display) -> CliError {
    CliError::Engine(e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(name = "wittcoh", version, about = "Exact cohomology and Massey products of the positive Witt algebra")]
struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Wall-clock budget; exceeding it exits with status 2.
    #[arg(long, default_value_t = 600, global = true)]
    budget_seconds: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// dim H^q_mu for q <= qmax, mu <= wmax.
    Betti {
        #[arg(long, default_value_t = 4)]
        qmax: usize,
        #[arg(long, default_value_t = 26)]
        wmax: u32,
    },
    /// Representatives of the nonzero cohomology blocks.
    Cocycles {
        #[arg(long, default_value_t = 3)]
        qmax: usize,
        #[arg(long, default_value_t = 15)]
        wmax: u32,
    },
    /// Massey product of a comma-separated input list, e.g. "e1^2,e2,e1,g2+".
    Massey {
        spec: String,
        /// Use the alpha-connection (inputs e1,...,e1,Omega) at this alpha.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Singular vector of V(h_pq(t), c(t)).
    Singular {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "-3/2", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 16)]
        max_level: u32,
    },
    /// Resolution stages and their exactness at t = -3/2.
    Resolution {
        #[arg(long, default_value_t = 1)]
        kmax: usize,
    },
    /// Cohomology of a thread module, e.g. "mtilde[-2,3]" or "a(1/6)[0,6]".
    Thread {
        module: String,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        smin: i32,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        smax: i32,
        #[arg(long, default_value_t = 3)]
        qmax: usize,
    },
    /// Run a named check suite.
    Verify { suite: String },
}

fn rat_arg(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::Parse(format!("bad rational '{s}'")))
}

fn betti(qmax: usize, wmax: u32) -> Result<Report, CliError> {
    if qmax > 5 || wmax > 40 {
        return Err(CliError::Budget(format!("betti is limited to qmax <= 5, wmax <= 40 (asked {qmax}, {wmax})")));
    }
    let mut r = Report::new("betti");
    r.param("qmax", qmax);
    r.param("wmax", wmax);
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    r.lines.push(format!("q\\mu {}", (1..=wmax).map(|w| format!("{w:>3}")).collect::<String>()));
    for q in 1..=qmax {
        let mut line = format!("{q:>4} ");
        let mut row = Vec::new();
        for mu in 1..=wmax {
            let dim = cohomology(q, mu, &AlgebraKind::L1Truncated(mu)).map_err(engine)?.dim;
            row.push(dim);
            line.push_str(&if suites::is_pentagonal(q, mu) { format!("{:>2}*", dim) } else { format!("{dim:>3}") });
            if dim > 0 {
                cells.push(json!({ "q": q, "mu": mu, "dim": dim, "pentagonal": suites::is_pentagonal(q, mu) }));
            }
        }
        rows.push(row);
        r.lines.push(line);
    }
    r.lines.push("* marks pentagonal weights (3q^2 +- q)/2".into());
    r.payload = json!({ "dims": rows, "nonzero": cells });
    Ok(r)
}

fn cocycles(qmax: usize, wmax: u32) -> Result<Report, CliError> {
    if qmax > 5 || wmax > 40 {
        return Err(CliError::Budget(format!("cocycles is limited to qmax <= 5, wmax <= 40 (asked {qmax}, {wmax})")));
    }
    let mut r = Report::new("cocycles");
    r.param("qmax", qmax);
    r.param("wmax", wmax);
    let mut items = Vec::new();
    for q in 1..=qmax {
        for w in 1..=wmax {
            let rep = cohomology(q, w, &AlgebraKind::L1Truncated(w)).map_err(engine)?;
            for (k, c) in rep.representatives.iter().enumerate() {
                let label = r.labels.class(q, w, k);
                let closed = c.d().is_zero();
                r.lines.push(format!("{label:<8} q={q} w={w:<3} d=0: {closed}  {c}"));
                items.push(json!({ "label": label, "degree": q, "weight": w, "representative": form(c), "closed": closed }));
            }
        }
    }
    r.payload = Value::Array(items);
    Ok(r)
}

/// e1^a, e2, e1^b, Omega up to scalars: the product a glued module computes.
fn glued_module(inputs: &[MasseyInput]) -> Option<(ThreadSpec, Rational)> {
    let (omega, ones) = inputs.split_last()?;
    let pos = ones.iter().position(|x| x.weight == 2)?;
    let (a, b) = (pos as i32, (ones.len() - pos - 1) as i32);
    let spec = ThreadSpec::mtilde_nonzero().bounded(-b - 1, a + 1);
    let theirs = module_inputs(&spec, omega).ok()?;
    if theirs.len() != inputs.len() {
        return None;
    }
    // ratio of module inputs to ours, input by input
    let mut scale = Rational::from_integer(1.into());
    for (x, y) in theirs.iter().zip(inputs) {
        let (m, c) = y.form.terms().next()?;
        let ratio = x.form.coeff(m) / c;
        if x.form != y.form.scale(&ratio) {
            return None;
        }
        scale *= ratio;
    }
    Some((spec, scale))
}

fn massey(spec: &str, alpha: Option<&str>) -> Result<Report, CliError> {
    let inputs = parse_inputs(spec)?;
    let mut r = Report::new("massey");
    r.param("spec", spec);
    let input_json: Vec<Value> = inputs.iter().map(|x| form(&x.form)).collect();
    if let Some(a) = alpha {
        let a = rat_arg(a)?;
        r.param("alpha", fmt_rational(&a));
        let (omega, ones) = inputs.split_last().expect("at least two inputs");
        if ones.iter().any(|x| x.form != Cochain::e(1)) {
            return Err(CliError::Parse("the alpha-connection takes e1,...,e1 followed by one class".into()));
        }
        let res = ffr_product(ones.len(), omega).map_err(engine)?;
        let name = |_: u32| "alpha".to_string();
        let at = std::collections::BTreeMap::from([(ALPHA, a.clone())]);
        let mut coords = Vec::new();
        r.lines.push(format!("alpha-connection, {} x e1 then {}", ones.len(), omega.form));
        for ((w, k), p) in &res.coords {
            let label = r.labels.class(res.degree, *w, *k);
            let v = p.eval(&at);
            r.lines.push(format!("  [{label}] coefficient {} = {} at alpha = {}", p.fmt_with(&name), fmt_rational(&v), fmt_rational(&a)));
            coords.push(json!({ "class": label, "polynomial": p.fmt_with(&name), "value": rational(&v) }));
        }
        let conds: Vec<String> = res.conditions.iter().map(|p: &Poly| p.fmt_with(&name)).collect();
        let trivial_alphas = res.trivial_alphas.as_ref().map(|v| v.iter().map(rational).collect::<Vec<_>>());
        let zero_here = res.coords.iter().all(|(_, p)| p.eval(&at).is_zero_value()) && res.conditions.iter().all(|p| p.eval(&at).is_zero_value());
        r.lines.push(format!("  trivial at this alpha: {zero_here}; trivial alphas: {}", match &res.trivial_alphas {
            None => "all".into(),
            Some(v) => v.iter().map(fmt_rational).collect::<Vec<_>>().join(", "),
        }));
        r.payload = json!({ "inputs": input_json, "mode": "alpha-connection", "degree": res.degree, "coords": coords,
            "conditions": conds, "trivial_alphas": trivial_alphas, "trivial_at_alpha": zero_here });
        return Ok(r);
    }

    let v = product_set(&inputs);
    let q = v.degree;
    r.lines.push(format!("<{}>", inputs.iter().map(|x| x.form.to_string()).collect::<Vec<_>>().join(", ")));
    let mut payload = json!({ "inputs": input_json, "mode": "product-set", "status": format!("{:?}", v.status) });
    if v.status == Status::Undefined {
        let (i, j, w) = v.undefined_at.expect("undefined position");
        r.lines.push(format!("  undefined: slot ({i}, {j}) meets a nonzero class in weight {w}"));
        payload["undefined_at"] = json!({ "slot": [i, j], "weight": w });
        r.payload = payload;
        return Ok(r);
    }
    let base_text = r.labels.class_text(q, &v.base);
    let dirs_text: Vec<String> = v.directions.iter().map(|d| r.labels.class_text(q, d)).collect();
    let value_set = match &v.value_set {
        ValueSet::Point => "point".to_string(),
        ValueSet::Affine { dim } => format!("affine, dimension {dim}"),
        ValueSet::SearchBounded { points } => format!("grid search, {points} classes found"),
        ValueSet::Empty => "empty".into(),
    };
    r.lines.push(format!("  H^{q} value set: {value_set}"));
    r.lines.push(format!("  base: {base_text}"));
    for d in &dirs_text {
        r.lines.push(format!("  direction: {d}"));
    }
    r.lines.push(format!("  verdict: {:?} ({} parameters)", v.trivial, v.parameters));
    payload["degree"] = json!(q);
    payload["value_set"] = json!(value_set);
    payload["base"] = r.labels.class_vector(q, &v.base);
    payload["directions"] = Value::Array(v.directions.iter().map(|d| r.labels.class_vector(q, d)).collect());
    payload["found"] = Value::Array(v.found.iter().map(|d| r.labels.class_vector(q, d)).collect());
    payload["trivial"] = json!(format!("{:?}", v.trivial));
    payload["parameters"] = json!(v.parameters);
    if let Some(cert) = &v.certificate {
        let tau = mc_residual(cert).map_err(engine)?;
        let c = related_cocycle(cert);
        r.lines.push(format!("  certificate: {} entries, corner residual {tau}, c(A) = {c}", cert.entries().count()));
        payload["certificate"] = json!({ "connection": connection(cert), "mc_residual": form(&tau), "related_cocycle": form(&c) });
    }
    if let Ok(rv) = rigidity_check(&inputs) {
        r.lines.push(format!("  rigidity: {} (free top-weight parameters {:?}, lower classes {:?})", if rv.pass { "pass" } else { "fail" }, rv.top_weight_freedom, rv.lower_classes));
        payload["rigidity"] = json!({ "pass": rv.pass, "target": rv.target, "top_weight_freedom": rv.top_weight_freedom, "lower_classes": rv.lower_classes });
    }
    if let Some((module, scale)) = glued_module(&inputs) {
        let omega = inputs.last().expect("nonempty");
        match spectral_check(&module, omega) {
            Ok(sv) => {
                let cls: Vec<String> = sv.image_class.iter().map(fmt_rational).collect();
                r.lines.push(format!(
                    "  spectral: on [{}, {}] d_{} lands in f_{} with class [{}] (module inputs are {} times these), nonzero in page: {}",
                    sv.bottom, sv.top, sv.r, sv.top, cls.join(", "), fmt_rational(&scale), sv.nonzero_in_page
                ));
                payload["spectral"] = json!({ "bottom": sv.bottom, "top": sv.top, "r": sv.r, "weight": sv.weight,
                    "image_class": sv.image_class.iter().map(rational).collect::<Vec<_>>(), "input_scale": rational(&scale), "nonzero_in_page": sv.nonzero_in_page });
            }
            Err(e) => {
                r.failed = true;
                r.lines.push(format!("  spectral: {e}"));
                payload["spectral"] = json!({ "error": e.to_string() });
            }
        }
    }
    r.payload = payload;
    Ok(r)
}

fn op_json(op: &Operator) -> Value {
    let terms: Vec<Value> = op.terms().map(|(m, c)| json!([m.indices(), fmt_rational(c)])).collect();
    json!({ "text": op.to_string(), "terms": terms })
}

fn singular(p: u32, q: u32, t: &str, max_level: u32) -> Result<Report, CliError> {
    let tv = rat_arg(t)?;
    if p == 0 || q == 0 {
        return Err(CliError::Parse("p and q start at 1".into()));
    }
    if p * q > max_level {
        return Err(CliError::Budget(format!("level {} above --max-level {max_level}", p * q)));
    }
    let mut r = Report::new("singular");
    r.param("p", p);
    r.param("q", q);
    r.param("t", fmt_rational(&tv));
    let w = singular_vector(p, q, &tv).map_err(engine)?;
    let module = VermaModule::new(VermaParams::from_pqt(p, q, &tv).map_err(engine)?);
    let singular = module.act(-1, &w).is_zero() && module.act(-2, &w).is_zero();
    r.lines.push(format!("S_{p},{q}({}) = {}", fmt_rational(&tv), w.0));
    r.lines.push(format!("  level {}, annihilated by e_-1 and e_-2: {singular}", p * q));
    let mut payload = json!({ "level": p * q, "operator": op_json(&w.0), "singular": singular });
    if p == 1 || q == 1 {
        let closed = bsa_operator(p, q).map_err(engine)?.specialize(&tv);
        let lead = closed.coeff(&PBWMonomial::power(1, (p * q) as usize));
        let agrees = !lead.is_zero_value() && closed.scale(&lead.recip()) == w.0;
        r.lines.push(format!("  closed formula agrees: {agrees}"));
        payload["closed_formula_agrees"] = json!(agrees);
        r.failed |= !agrees;
    }
    r.failed |= !singular;
    r.payload = payload;
    Ok(r)
}

fn resolution(kmax: usize) -> Result<Report, CliError> {
    if kmax == 0 {
        return Err(CliError::Parse("kmax starts at 1".into()));
    }
    if kmax > 3 {
        return Err(CliError::Budget(format!("resolution is limited to kmax <= 3 (asked {kmax})")));
    }
    let ops = Operators::new();
    let mut r = Report::new("resolution");
    r.param("kmax", kmax);
    let mut stages = Vec::new();
    for k in 1..=kmax + 1 {
        let d = delta(k, &ops).map_err(engine)?;
        r.lines.push(format!("delta_{k}:"));
        for row in &d.entries {
            r.lines.push(format!("  [{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
        }
        stages.push(json!({ "k": k, "entries": d.entries.iter().map(|row| row.iter().map(op_json).collect::<Vec<_>>()).collect::<Vec<_>>() }));
    }
    let mut checks = Vec::new();
    for k in 1..=kmax {
        let res = verify_exactness(k, &ops);
        r.lines.push(format!("delta_{k} o delta_{}: {}", k + 1, match &res {
            Ok(()) => "0".to_string(),
            Err(e) => e.to_string(),
        }));
        r.failed |= res.is_err();
        checks.push(json!({ "k": k, "zero": res.is_ok() }));
    }
    r.payload = json!({ "t": "-3/2", "stages": stages, "composites": checks });
    Ok(r)
}

fn thread(module: &str, smin: i32, smax: i32, qmax: usize) -> Result<Report, CliError> {
    let spec = parse_module(module)?;
    if smin > smax {
        return Err(CliError::Parse("smin exceeds smax".into()));
    }
    if qmax > 4 || smax - smin > 60 {
        return Err(CliError::Budget("thread is limited to qmax <= 4 and 61 weights".into()));
    }
    let ops = Operators::new();
    let mut r = Report::new("thread");
    r.param("module", module);
    r.param("smin", smin);
    r.param("smax", smax);
    r.param("qmax", qmax);
    let mut rows = Vec::new();
    for s in smin..=smax {
        let res = thread_cohomology(&spec, s, qmax, &ops).map_err(engine)?;
        let check = cross_validate(&spec, s, qmax, &ops);
        let agree = check.is_ok();
        r.failed |= !agree;
        if res.dims.iter().any(|d| *d > 0) || !agree {
            r.lines.push(format!("s={s:>4}  dims {:?}  cochain check: {}", res.dims, if agree { "agrees" } else { "DIFFERS" }));
        }
        rows.push(json!({ "s": s, "dims": res.dims, "cochains_agree": agree }));
    }
    if r.lines.is_empty() {
        r.lines.push("all cohomology vanishes in range".into());
    }
    r.payload = Value::Array(rows);
    Ok(r)
}

fn verify(suite: &str) -> Result<Report, CliError> {
    let results = suites::run_suite(suite).ok_or_else(|| CliError::Parse(format!("unknown suite '{suite}'; known: {}", suites::SUITES.join(", "))))?;
    let mut r = Report::new("verify");
    r.param("suite", suite);
    let mut items = Vec::new();
    for c in &results {
        r.lines.push(c.to_string());
        r.failed |= !c.pass;
        items.push(json!({ "id": c.id, "title": c.title, "pass": c.pass, "detail": c.detail }));
    }
    let passed = results.iter().filter(|c| c.pass).count();
    r.lines.push(format!("{passed}/{} passed", results.len()));
    r.payload = json!({ "checks": items, "passed": passed, "total": results.len() });
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Betti { qmax, wmax } => betti(*qmax, *wmax),
        Command::Cocycles { qmax, wmax } => cocycles(*qmax, *wmax),
        Command::Massey { spec, alpha } => massey(spec, alpha.as_deref()),
        Command::Singular { p, q, t, max_level } => singular(*p, *q, t, *max_level),
        Command::Resolution { kmax } => resolution(*kmax),
        Command::Thread { module, smin, smax, qmax } => thread(module, *smin, *smax, *qmax),
        Command::Verify { suite } => verify(suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    let text = match cli.format {
        Format::Table => report.table(),
        Format::Json => serde_json::to_string_pretty(&report.envelope()).expect("serializable"),
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    if start.elapsed() > Duration::from_secs(cli.budget_seconds) {
        eprintln!("error: budget exceeded: took {:.1}s of {}s", start.elapsed().as_secs_f64(), cli.budget_seconds);
        return ExitCode::from(2);
    }
    ExitCode::from(u8::from(report.failed))
}
