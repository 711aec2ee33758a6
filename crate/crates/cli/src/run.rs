//! Validation, dispatch and report emission for each subcommand.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use liesplit_core::decomp::{block_field, degree_set_hypothesis};
use liesplit_core::field::is_prime;
use liesplit_core::functors::ambient_dim;
use liesplit_core::hilton::{Mode, MAX_EXPLICIT_TARGET};
use liesplit_core::liealg::lyndon_images;
use liesplit_core::natural::MAX_GROUP_DEGREE;
use liesplit_core::sgmod::{
    decomposition_signature, gamma, indecomposable_decomposition, is_projective, DecompositionOptions,
};
use liesplit_core::tensoralg::tensor_dim;
use liesplit_core::*;
use serde_json::{json, Map, Value};

use crate::{Cli, Command, Format, ModeArg};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest tensor power `lie-basis` materializes.
const MAX_LIE_BASIS_AMBIENT: usize = 1 << 20;

/// Largest degree accepted by `gamma`: functor values on `n` generators are dense.
const MAX_GAMMA_DEGREE: usize = 5;

#[derive(Debug)]
pub enum Failure {
    /// Invalid parameters or input files (exit code 2).
    Config(String),
    /// A computation failed (exit code 1).
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn config<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Config(msg.into()))
}

/// A computed report: JSON fields merged into the envelope and an optional CSV table.
struct Report {
    fields: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    fn json(fields: Value) -> Report {
        Report { fields, table: None }
    }
}

pub fn run(cli: &Cli) -> Outcome<()> {
    let start = Instant::now();
    let plan = validate(cli)?;
    let (report, field) = if cli.common.dry_run {
        (Report::json(json!({ "dry_run": true, "valid": true })), plan.field.clone())
    } else {
        log::info!("running {}", command_name(&cli.command));
        (execute(cli, &plan)?, plan.field.clone())
    };
    let elapsed = start.elapsed();
    let text = match cli.common.format {
        Format::Json => {
            let mut env = envelope(cli);
            if let Some(f) = &field {
                env.insert("field".into(), serde_json::to_value(f.params()).expect("serializable"));
            }
            match report.fields {
                Value::Object(map) => env.extend(map),
                other => {
                    env.insert("result".into(), other);
                }
            }
            env.insert("timing".into(), json!({ "elapsed_ms": elapsed.as_secs_f64() * 1e3 }));
            serde_json::to_string_pretty(&Value::Object(env)).expect("serializable") + "\n"
        }
        Format::Csv => match report.table {
            Some((header, rows)) => csv(&header, &rows),
            None if cli.common.dry_run => "dry_run,valid\ntrue,true\n".to_string(),
            None => unreachable!("validated: format supported"),
        },
    };
    write_output(cli, &text)
}

fn write_output(cli: &Cli, text: &str) -> Outcome<()> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, text).or_else(|e| config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Witt { .. } => "witt",
        Command::LieBasis { .. } => "lie-basis",
        Command::Gamma { .. } => "gamma",
        Command::Projective { .. } => "projective",
        Command::Block { .. } => "block",
        Command::Split { .. } => "split",
        Command::Hilton { .. } => "hilton",
        Command::Report11 { .. } => "report-1-1",
    }
}

fn envelope(cli: &Cli) -> Map<String, Value> {
    let mut env = Map::new();
    env.insert("schema_version".into(), json!(SCHEMA_VERSION));
    env.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    env.insert("command".into(), json!(command_name(&cli.command)));
    let mut cfg = serde_json::to_value(&cli.common).expect("serializable");
    if let (Value::Object(c), Ok(Value::Object(args))) = (&mut cfg, serde_json::to_value(&cli.command)) {
        for (_, v) in args {
            if let Value::Object(inner) = v {
                c.extend(inner);
            }
        }
        // the thread count and output path do not affect results
        c.remove("jobs");
        c.remove("out");
    }
    env.insert("config".into(), cfg);
    env
}

pub fn emit_error(cli: &Cli, failure: Failure) -> ExitCode {
    let (kind, message, code) = match &failure {
        Failure::Config(m) => ("config", m.clone(), 2u8),
        Failure::Module(e) => ("module", e.to_string(), 1u8),
    };
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "error": { "kind": kind, "message": message, "detail": format!("{failure:?}") },
    });
    let text = serde_json::to_string_pretty(&body).expect("serializable");
    log::error!("{message}");
    println!("{text}");
    ExitCode::from(code)
}

/// Validated parameters shared by the dispatch step.
struct Plan {
    field: Option<FieldRef>,
    mset: Option<MSet>,
}

fn field_of(cli: &Cli) -> Outcome<FieldRef> {
    let Some(p) = cli.common.p else { return config("--p is required") };
    if !is_prime(p) {
        return config(format!("--p {p} is not prime"));
    }
    let e = cli.common.e.unwrap_or(1);
    make_field(p, e).or_else(|err| config(err.to_string()))
}

fn parse_mset(p: u32, ms: &[usize], bounds: &[String]) -> Outcome<MSet> {
    if ms.is_empty() {
        if !bounds.is_empty() {
            return config("--f needs --M");
        }
        return Ok(MSet::AllCoprime);
    }
    if !bounds.is_empty() && bounds.len() != ms.len() {
        return config("--f must list one bound per entry of --M");
    }
    let mut items = Vec::with_capacity(ms.len());
    for (i, &m) in ms.iter().enumerate() {
        let f = match bounds.get(i).map(String::as_str) {
            None | Some("-") => None,
            Some(s) => match s.parse::<u32>() {
                Ok(v) if v >= 1 => Some(v),
                _ => return config(format!("bad p-power bound {s:?}")),
            },
        };
        items.push((m, f));
    }
    let ms = MSet::Finite(items);
    ms.validate(p).or_else(|e| config(e.to_string()))?;
    Ok(ms)
}

fn functor_text(functor: &str, n: usize) -> String {
    match functor {
        "T" | "L" | "Lres" => format!("{functor}({n})"),
        other => other.to_string(),
    }
}

fn validate(cli: &Cli) -> Outcome<Plan> {
    let tabular = matches!(
        cli.command,
        Command::Witt { .. }
            | Command::Block { .. }
            | Command::Split { .. }
            | Command::Hilton { .. }
            | Command::Report11 { .. }
    );
    if cli.common.format == Format::Csv && !tabular && !cli.common.dry_run {
        return config(format!("{} has no CSV form", command_name(&cli.command)));
    }
    let plan = match &cli.command {
        Command::Witt { n, m } => {
            if *n == 0 {
                return config("--n must be positive");
            }
            if *m >= 2 && (*n as f64) * (*m as f64).log2() > 120.0 {
                return config("m^n exceeds the exact integer range");
            }
            Plan { field: None, mset: None }
        }
        Command::LieBasis { n, m } => {
            let field = field_of(cli)?;
            if *n == 0 || *m == 0 || *m > u8::MAX as usize {
                return config("--n must be positive and --m in 1..=255");
            }
            if tensor_dim(*n, *m).is_none_or(|d| d > MAX_LIE_BASIS_AMBIENT) {
                return config(format!("T_{n} on {m} generators exceeds {MAX_LIE_BASIS_AMBIENT} coordinates"));
            }
            Plan { field: Some(field), mset: None }
        }
        Command::Gamma { functor, n, .. } => {
            let field = field_of(cli)?;
            if !(2..=MAX_GAMMA_DEGREE).contains(n) {
                return config(format!("--n must lie in 2..={MAX_GAMMA_DEGREE}"));
            }
            let spec = FunctorSpec::parse(&field, &functor_text(functor, *n)).or_else(|e| config(e.to_string()))?;
            if !spec.degrees().contains(n) {
                return config(format!("{spec} has no component in degree {n}"));
            }
            Plan { field: Some(field), mset: None }
        }
        Command::Projective { module, functor, n } => match (module, functor) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .or_else(|e| config(format!("cannot read {}: {e}", path.display())))?;
                let value: Value = serde_json::from_str(&text).or_else(|e| config(format!("bad module JSON: {e}")))?;
                let m =
                    SigmaModule::from_json(value.get("module").unwrap_or(&value)).or_else(|e| config(e.to_string()))?;
                Plan { field: Some(m.field().clone()), mset: None }
            }
            (None, Some(functor)) => {
                let field = field_of(cli)?;
                let n = n.expect("clap requires --n");
                if !(2..=MAX_GAMMA_DEGREE).contains(&n) {
                    return config(format!("--n must lie in 2..={MAX_GAMMA_DEGREE}"));
                }
                FunctorSpec::parse(&field, &functor_text(functor, n)).or_else(|e| config(e.to_string()))?;
                Plan { field: Some(field), mset: None }
            }
            _ => return config("give exactly one of --module or --functor"),
        },
        Command::Block { cap } => {
            let Some(p) = cli.common.p else { return config("--p is required") };
            if !is_prime(p) {
                return config(format!("--p {p} is not prime"));
            }
            if cli.common.e.is_some() {
                return config("block chooses its own field; drop --e");
            }
            if *cap == 0 || *cap > MAX_GROUP_DEGREE {
                return config(format!("--cap must lie in 1..={MAX_GROUP_DEGREE}"));
            }
            let (field, _) = block_field(p, *cap).or_else(|e| config(e.to_string()))?;
            Plan { field: Some(field), mset: None }
        }
        Command::Split { gens, cap, .. } => {
            let field = field_of(cli)?;
            if gens.is_empty() || gens.contains(&0) {
                return config("--gens must list positive degrees");
            }
            if *cap == 0 || *cap > MAX_GROUP_DEGREE {
                return config(format!("--cap must lie in 1..={MAX_GROUP_DEGREE}; use report-1-1 for larger caps"));
            }
            if let Err(note) = degree_set_hypothesis(gens, field.p()) {
                log::warn!("degree set outside the splitting hypothesis: {note}");
            }
            Plan { field: Some(field), mset: None }
        }
        Command::Hilton { mset, bounds, target, vdim, mode } => {
            let field = field_of(cli)?;
            if field.e() != 1 {
                return config("hilton runs over the prime field; drop --e");
            }
            let ms = parse_mset(field.p(), mset, bounds)?;
            if *target == 0 || *vdim == 0 {
                return config("--target and --vdim must be positive");
            }
            if !liesplit_core::decomp::generated_degrees(&ms, field.p(), *target).contains(target) {
                return config(format!("{target} is not a generated degree"));
            }
            if *mode == ModeArg::Explicit && (*vdim != 2 || *target > MAX_EXPLICIT_TARGET) {
                return config(format!("explicit mode needs --vdim 2 and --target <= {MAX_EXPLICIT_TARGET}"));
            }
            Plan { field: Some(field), mset: Some(ms) }
        }
        Command::Report11 { mset, bounds, cap, m } => {
            let field = field_of(cli)?;
            let ms = parse_mset(field.p(), mset, bounds)?;
            if *cap == 0 {
                return config("--cap must be positive");
            }
            if *m >= 1 {
                ambient_dim(*cap, *m).or_else(|e| config(e.to_string()))?;
            }
            Plan { field: Some(field), mset: Some(ms) }
        }
    };
    Ok(plan)
}

fn tensor_text(t: &Tensor) -> String {
    let field = t.field();
    let mut out = String::new();
    for (i, (w, c)) in t.terms().enumerate() {
        if i > 0 {
            out.push('+');
        }
        if *c != Scalar::ONE {
            out.push_str(&field.format(*c));
        }
        for &l in w.letters() {
            let _ = write!(out, "x{l}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn gamma_of(field: &FieldRef, functor: &str, n: usize) -> Outcome<(FunctorSpec, SigmaModule)> {
    let spec = FunctorSpec::parse(field, &functor_text(functor, n))?;
    let top = evaluate(&spec, n, field)?;
    let below = evaluate(&spec, n - 1, field)?;
    let (Some(b_n), Some(b_n1)) = (top.component(n), below.component(n)) else {
        return Err(Failure::Module(Error::DegreeOutOfRange(n)));
    };
    let module = gamma(field, b_n, b_n1, n)?;
    Ok((spec, module))
}

fn execute(cli: &Cli, plan: &Plan) -> Outcome<Report> {
    let field = plan.field.as_ref();
    let seed = cli.common.seed;
    Ok(match &cli.command {
        Command::Witt { n, m } => {
            let dim = witt_dim(*n, *m);
            Report {
                fields: json!({ "n": n, "m": m, "dim": dim }),
                table: Some((vec!["n", "m", "dim"], vec![vec![n.to_string(), m.to_string(), dim.to_string()]])),
            }
        }
        Command::LieBasis { n, m } => {
            let field = field.expect("validated");
            let gens = (1..=*m).map(|i| Tensor::generator(field, *m, i)).collect::<Result<Vec<_>>>()?;
            let basis = lyndon_images(&gens, *n)?;
            let records: Vec<Value> = basis
                .iter()
                .map(|t| {
                    let mut v = t.to_json();
                    v["text"] = json!(tensor_text(t));
                    v
                })
                .collect();
            Report::json(json!({ "n": n, "m": m, "dim": records.len(), "basis": records }))
        }
        Command::Gamma { functor, n, decompose } => {
            let field = field.expect("validated");
            let (spec, module) = gamma_of(field, functor, *n)?;
            let mut fields =
                json!({ "functor": spec.to_string(), "n": n, "dim": module.dim(), "module": module.to_json() });
            if *decompose {
                let opts = DecompositionOptions { seed, ..DecompositionOptions::default() };
                let summands = indecomposable_decomposition(&module, opts)?;
                let signature = decomposition_signature(&summands)?;
                fields["decomposition"] = json!({
                    "seed": seed,
                    "budget": opts.budget,
                    "signature": signature,
                    "certified": summands.iter().map(|s| s.certified).collect::<Vec<_>>(),
                });
            }
            Report::json(fields)
        }
        Command::Projective { module, functor, n } => {
            let (source, m) = match (module, functor) {
                (Some(path), _) => {
                    let value: Value =
                        serde_json::from_str(&std::fs::read_to_string(path).expect("validated")).expect("validated");
                    (json!(path.display().to_string()), SigmaModule::from_json(value.get("module").unwrap_or(&value))?)
                }
                (None, Some(functor)) => {
                    let (spec, m) = gamma_of(field.expect("validated"), functor, n.expect("validated"))?;
                    (json!(spec.to_string()), m)
                }
                (None, None) => unreachable!("validated"),
            };
            let (verdict, certificate) = is_projective(&m)?;
            Report::json(
                json!({ "source": source, "n": m.n(), "dim": m.dim(), "verdict": verdict, "certificate": certificate }),
            )
        }
        Command::Block { cap } => {
            let report = block_decomposition(cli.common.p.expect("validated"), *cap)?;
            let rows = report
                .degrees
                .iter()
                .map(|d| {
                    vec![
                        d.n.to_string(),
                        d.lie_dim.to_string(),
                        d.primitive_dim.to_string(),
                        d.expected_block.to_string(),
                        d.remainder_lie_dim.to_string(),
                        d.consistent.to_string(),
                    ]
                })
                .collect();
            Report {
                fields: json!({ "report": report, "verdict": report.consistent }),
                table: Some((
                    vec!["n", "lie_dim", "primitive_dim", "expected_block", "remainder_lie_dim", "consistent"],
                    rows,
                )),
            }
        }
        Command::Split { gens, cap, m } => {
            let report = splitness_check(gens, *cap, *m, field.expect("validated"))?;
            let rows = report
                .degrees
                .iter()
                .map(|d| {
                    vec![
                        d.q.to_string(),
                        d.gamma_dim.to_string(),
                        d.q_dim.map(|x| x.to_string()).unwrap_or_default(),
                        d.projective.to_string(),
                    ]
                })
                .collect();
            Report {
                fields: json!({ "verdict": report.verdict, "report": report }),
                table: Some((vec!["q", "gamma_dim", "q_dim", "projective"], rows)),
            }
        }
        Command::Hilton { target, vdim, mode, .. } => {
            let mode = match mode {
                ModeArg::Dims => Mode::Dims,
                ModeArg::Explicit => Mode::Explicit,
            };
            let ms = plan.mset.as_ref().expect("validated");
            let report = verify_theorem61(ms, field.expect("validated").p(), *target, *vdim, mode)?;
            let rows = report
                .summands
                .iter()
                .map(|s| {
                    vec![
                        s.product.clone(),
                        s.term.clone(),
                        s.weight.to_string(),
                        s.d.to_string(),
                        s.lie_degree.to_string(),
                        s.generator_dim.to_string(),
                        s.dim.to_string(),
                    ]
                })
                .collect();
            Report {
                fields: json!({ "verdict": report.holds, "report": report }),
                table: Some((vec!["product", "term", "weight", "d", "lie_degree", "generator_dim", "dim"], rows)),
            }
        }
        Command::Report11 { cap, m, .. } => {
            let ms = plan.mset.as_ref().expect("validated");
            let report = theorem_1_1_report(ms, *cap, *m, field.expect("validated"))?;
            let rows = report
                .d_dims
                .iter()
                .map(|d| {
                    vec![
                        d.q.to_string(),
                        d.witt.to_string(),
                        d.hilbert.map(|x| x.to_string()).unwrap_or_default(),
                        d.agree.to_string(),
                    ]
                })
                .collect();
            Report {
                fields: json!({ "verdict": report.verdict, "report": report }),
                table: Some((vec!["q", "witt", "hilbert", "agree"], rows)),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mset_parsing() {
        let ms = parse_mset(2, &[3, 5], &["3".into(), "-".into()]).unwrap();
        assert_eq!(ms, MSet::Finite(vec![(3, Some(3)), (5, None)]));
        assert_eq!(parse_mset(2, &[], &[]).unwrap(), MSet::AllCoprime);
        assert!(matches!(parse_mset(2, &[4], &[]), Err(Failure::Config(_))));
        assert!(matches!(parse_mset(3, &[2], &["0".into()]), Err(Failure::Config(_))));
        assert!(matches!(parse_mset(3, &[2, 4], &["1".into()]), Err(Failure::Config(_))));
    }

    #[test]
    fn functor_shortcuts() {
        assert_eq!(functor_text("L", 4), "L(4)");
        assert_eq!(functor_text("[L(1),L(2)]", 3), "[L(1),L(2)]");
    }

    #[test]
    fn csv_layout() {
        assert_eq!(csv(&["a", "b"], &[vec!["1".into(), "2".into()]]), "a,b\n1,2\n");
    }
}
