use std::collections::BTreeMap;
use std::fmt::Write as _;

use picentral::grassmann::{find_witness, WitnessMode};
use picentral::spans::{self, SpanStatus};
use picentral::verifier::registry::{audit, STATEMENTS};
use picentral::verifier::{claim_info, ClaimKind, CLAIMS};
use picentral::{
    parse_poly, reduce_poly, Budget, Certificate, Error, Field, GrassmannAlgebra, GrassmannElement, Mode,
    Multidegree, Params, Polynomial, Result, SpanEngine, SpanSpec, Verdict, Verifier,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, Global};

pub const BUDGET_ENV: &str = "PI_CENTRAL_BUDGET";

/// What a command prints, in both formats, and its exit status.
pub struct Output {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json output")),
        }
    }
}

struct Ctx {
    field: Field,
    mode: Mode,
    n: u32,
    seed: u64,
    budget: Budget,
    timings: bool,
}

impl Ctx {
    fn new(g: &Global) -> Result<Ctx> {
        let field = Field::new(g.p)?;
        let mode: Mode = g.mode.parse().map_err(Error::InvalidParameter)?;
        if g.n == 0 || g.n > 63 {
            return Err(Error::InvalidParameter(format!("--N must be in 1..=63, got {}", g.n)));
        }
        Ok(Ctx {
            field,
            mode,
            n: g.n,
            seed: g.seed,
            budget: resolve_budget(g, std::env::var(BUDGET_ENV).ok().as_deref())?,
            timings: g.timings,
        })
    }

    fn poly(&self, s: &str) -> Result<Polynomial> {
        parse_poly(s, self.field, self.mode)
    }

    fn params(&self) -> Params {
        Params {
            p: self.field.p(),
            m: None,
            n: self.n,
            seed: self.seed,
            budget: self.budget,
        }
    }
}

/// Defaults, then `PI_CENTRAL_BUDGET` ("vectors=N,entries=M" or "N,M"),
/// then explicit flags.
pub fn resolve_budget(g: &Global, env: Option<&str>) -> Result<Budget> {
    let mut b = Budget::default();
    if let Some(raw) = env.map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::InvalidParameter(format!("cannot parse {BUDGET_ENV}='{raw}'"));
        for (i, part) in raw.split(',').enumerate() {
            let (key, val) = match part.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (if i == 0 { "vectors" } else { "entries" }, part.trim()),
            };
            let n: usize = val.parse().map_err(|_| bad())?;
            match key {
                "vectors" => b.max_vectors = n,
                "entries" => b.max_entries = n,
                _ => return Err(bad()),
            }
        }
    }
    if let Some(v) = g.budget_vectors {
        b.max_vectors = v;
    }
    if let Some(e) = g.budget_entries {
        b.max_entries = e;
    }
    Ok(b)
}

/// `"3,3"` means `x1^3 x2^3`; `"x1:3,x4:1"` names variables explicitly.
pub fn parse_multidegree(s: &str) -> Result<Multidegree> {
    let bad = |m: &str| Error::InvalidParameter(format!("bad multidegree '{s}': {m}"));
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let mut pairs = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let part = part.trim();
        let (v, d) = match part.split_once(':') {
            Some((v, d)) => {
                let v = v.trim().strip_prefix('x').ok_or_else(|| bad("expected x<i>:<deg>"))?;
                (v.parse::<u32>().map_err(|_| bad("variable index"))?, d.trim())
            }
            None => (i as u32 + 1, part),
        };
        let d: u32 = d.parse().map_err(|_| bad("degree"))?;
        if v == 0 {
            return Err(bad("variables start at x1"));
        }
        pairs.push((v, d));
    }
    Ok(Multidegree::from_pairs(pairs))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let ctx = Ctx::new(&cli.global)?;
    match &cli.command {
        Command::Nf { expr } => nf(&ctx, expr),
        Command::Member { target, span } => member(&ctx, target, span),
        Command::Eval { expr, assign } => eval(&ctx, expr, assign),
        Command::Witness { expr, noncentral, samples } => witness(&ctx, expr, *noncentral, *samples),
        Command::Verify { claim, m, all, controls, manifest } => {
            verify(&ctx, claim.as_deref(), *m, *all, *controls, manifest.as_deref())
        }
        Command::Chain { m } => {
            let mut v = Verifier::new(ctx.params())?;
            let cert = v.verify("chain-strict", Some(*m))?;
            Ok(certificates_output(&ctx, &[cert], false))
        }
        Command::Span { span, multidegree } => span_cmd(&ctx, span, multidegree),
        Command::Audit => Ok(audit_cmd()),
    }
}

fn nf(ctx: &Ctx, expr: &str) -> Result<Output> {
    let f = ctx.poly(expr)?;
    let constant = f.constant_term();
    let rest = if constant != 0 {
        let c = Polynomial::constant(ctx.field, constant);
        f.try_sub(&c)?.with_mode(Mode::Nonunital)?
    } else {
        f.with_mode(Mode::Nonunital)?
    };
    let nf = reduce_poly(&rest)?;
    let text = if constant == 0 {
        nf.to_string()
    } else if nf.is_zero() {
        format!("{}", ctx.field.signed(constant))
    } else {
        format!("{} + {nf}", ctx.field.signed(constant))
    };
    Ok(Output {
        code: 0,
        json: json!({
            "input": f.to_string(),
            "p": ctx.field.p(),
            "constant": constant,
            "normal_form": nf.to_string(),
            "coordinates": nf.to_json(),
        }),
        text,
    })
}

fn member(ctx: &Ctx, target: &str, span: &str) -> Result<Output> {
    let f = ctx.poly(target)?;
    let spec = SpanSpec::parse(span, ctx.field)?;
    let mut engine = SpanEngine::new(ctx.field, ctx.budget);
    let res = engine.member_poly(&f, &spec)?;
    let verdict = res.verdict();
    let label = match verdict {
        spans::Verdict::Member => "member",
        spans::Verdict::NotMember => "not_member",
        spans::Verdict::Unknown => "unknown",
    };
    let mut text = format!("{label}: {f} in {spec}\n");
    for part in &res.parts {
        let s = &part.span;
        let _ = write!(
            text,
            "  {} words={} dim={} {}",
            s.multidegree(),
            s.words().len(),
            s.dimension(),
            part.result.verdict()
        );
        if let SpanStatus::Inconclusive { exhausted } = s.status() {
            let _ = write!(text, " (inconclusive: {exhausted})");
        }
        text.push('\n');
    }
    if let Some(c) = res.constant {
        let _ = writeln!(text, "  constant term {c} is never a member");
    }
    if verdict != spans::Verdict::Member {
        if let Some(r) = res.first_residual() {
            let _ = writeln!(text, "  residual: {r}");
        }
    }
    Ok(Output {
        code: if verdict == spans::Verdict::Unknown { 2 } else { 0 },
        json: json!({
            "verdict": verdict,
            "target": f.to_string(),
            "span": spec.to_string(),
            "constant": res.constant,
            "components": res.certificates(Some(ctx.seed)),
        }),
        text,
    })
}

fn parse_assignment(alg: GrassmannAlgebra, s: &str) -> Result<(u32, GrassmannElement)> {
    let (var, val) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidParameter(format!("--assign expects x<i>=<element>, got '{s}'")))?;
    let v: u32 = var
        .trim()
        .strip_prefix('x')
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("bad variable '{}'", var.trim())))?;
    Ok((v, GrassmannElement::parse(alg, val)?))
}

fn eval(ctx: &Ctx, expr: &str, assign: &[String]) -> Result<Output> {
    let f = ctx.poly(expr)?;
    let alg = GrassmannAlgebra::new(ctx.field, ctx.n, ctx.mode)?;
    let mut asg = BTreeMap::new();
    for a in assign {
        let (v, e) = parse_assignment(alg, a)?;
        asg.insert(v, e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut random = Vec::new();
    for v in f.variables() {
        if let std::collections::btree_map::Entry::Vacant(e) = asg.entry(v) {
            e.insert(alg.random_element(&mut rng, 3, 3));
            random.push(v);
        }
    }
    let value = alg.evaluate(&f, &asg)?;
    let mut text = String::new();
    for (v, e) in &asg {
        let tag = if random.contains(v) { " (random)" } else { "" };
        let _ = writeln!(text, "x{v} = {e}{tag}");
    }
    let _ = writeln!(text, "value = {value}");
    let _ = writeln!(text, "central = {}", value.is_central());
    let assignment: serde_json::Map<String, Value> =
        asg.iter().map(|(v, e)| (format!("x{v}"), Value::String(e.to_string()))).collect();
    Ok(Output {
        code: 0,
        json: json!({
            "expr": f.to_string(),
            "n": ctx.n,
            "mode": ctx.mode,
            "seed": ctx.seed,
            "assignment": assignment,
            "random_variables": random,
            "value": value.to_string(),
            "zero": value.is_zero(),
            "central": value.is_central(),
        }),
        text,
    })
}

fn witness(ctx: &Ctx, expr: &str, noncentral: bool, samples: usize) -> Result<Output> {
    let f = ctx.poly(expr)?;
    let alg = GrassmannAlgebra::new(ctx.field, ctx.n, ctx.mode)?;
    let mode = if noncentral { WitnessMode::Noncentral } else { WitnessMode::Nonzero };
    let found = find_witness(&f, &alg, mode, samples, ctx.seed)?;
    let what = if noncentral { "non-central" } else { "nonzero" };
    Ok(match found {
        Some(w) => {
            let mut text = format!("{what} witness in G(N={})\n", ctx.n);
            for (v, e) in &w.assignment {
                let _ = writeln!(text, "x{v} = {e}");
            }
            let _ = writeln!(text, "value = {}", w.value);
            let top = w.value.terms().all(|(b, _)| b == alg.top_blade());
            let mut json = w.to_json();
            json["found"] = json!(true);
            json["mode"] = json!(mode);
            json["top_blade_multiple"] = json!(top);
            Output { code: 0, text, json }
        }
        None => Output {
            code: 2,
            text: format!(
                "no {what} witness in G(N={}) after the structured family and {samples} samples\n",
                ctx.n
            ),
            json: json!({ "found": false, "mode": mode, "n": ctx.n, "seed": ctx.seed, "samples": samples }),
        },
    })
}

#[derive(serde::Deserialize)]
struct ManifestEntry {
    claim: String,
    #[serde(default)]
    params: ManifestParams,
}

#[derive(serde::Deserialize, Default)]
struct ManifestParams {
    p: Option<u32>,
    m: Option<u32>,
    n: Option<u32>,
    seed: Option<u64>,
}

fn verify(
    ctx: &Ctx,
    claim: Option<&str>,
    m: Option<u32>,
    all: bool,
    controls: bool,
    manifest: Option<&std::path::Path>,
) -> Result<Output> {
    let mut jobs: Vec<(Params, String, Option<u32>)> = Vec::new();
    if let Some(path) = manifest {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let entries: Vec<ManifestEntry> = serde_json::from_str(&raw)
            .map_err(|e| Error::InvalidParameter(format!("bad manifest {}: {e}", path.display())))?;
        for e in entries {
            let mut p = ctx.params();
            p.p = e.params.p.unwrap_or(p.p);
            p.n = e.params.n.unwrap_or(p.n);
            p.seed = e.params.seed.unwrap_or(p.seed);
            jobs.push((p, e.claim, e.params.m));
        }
    }
    let wanted = |kind: ClaimKind| CLAIMS.iter().filter(move |c| c.kind == kind).map(|c| c.key.to_string());
    if all {
        jobs.extend(wanted(ClaimKind::Claim).map(|k| (ctx.params(), k, None)));
    }
    if controls {
        jobs.extend(wanted(ClaimKind::Control).map(|k| (ctx.params(), k, None)));
    }
    if let Some(c) = claim {
        jobs.push((ctx.params(), c.to_string(), m));
    }
    if jobs.is_empty() {
        return Err(Error::InvalidParameter(
            "nothing to verify: give a claim, --all, --controls or --manifest".into(),
        ));
    }
    for (_, key, _) in &jobs {
        if claim_info(key).is_none() {
            return Err(Error::InvalidParameter(format!("unknown claim '{key}'")));
        }
    }
    let mut verifiers: BTreeMap<(u32, u32, u64), Verifier> = BTreeMap::new();
    let mut certs = Vec::new();
    for (params, key, m) in jobs {
        let v = match verifiers.entry((params.p, params.n, params.seed)) {
            std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::btree_map::Entry::Vacant(slot) => slot.insert(Verifier::new(params)?),
        };
        certs.push(v.verify(&key, m)?);
    }
    Ok(certificates_output(ctx, &certs, controls && claim.is_none() && !all && manifest.is_none()))
}

/// Summary table plus certificates. With `controls_only`, a failing control
/// is the expected outcome and counts as success.
fn certificates_output(ctx: &Ctx, certs: &[Certificate], controls_only: bool) -> Output {
    let width = certs.iter().map(|c| c.claim.len()).max().unwrap_or(5).max(5);
    let mut text = format!("{:<width$}  {:>2}  {:>2}  {:<12}  {}\n", "claim", "p", "m", "verdict", "statement");
    for c in certs {
        let m = c.params.m.map(|m| m.to_string()).unwrap_or_else(|| "-".into());
        let mut line = format!(
            "{:<width$}  {:>2}  {:>2}  {:<12}  {}",
            c.claim,
            c.params.p,
            m,
            c.verdict.as_str(),
            c.statement
        );
        if ctx.timings {
            if let Some(ms) = c.runtime_ms {
                let _ = write!(line, "  [{ms} ms]");
            }
        }
        text.push_str(&line);
        text.push('\n');
        if let Some(why) = &c.exhausted {
            let _ = writeln!(text, "{:width$}    exhausted: {why}", "");
        }
        for n in &c.notes {
            let _ = writeln!(text, "{:width$}    note: {n}", "");
        }
    }
    let code = if controls_only {
        if certs.iter().all(|c| c.verdict == Verdict::Fail) { 0 } else { 1 }
    } else {
        certs.iter().map(|c| c.verdict).max().map(|v| v.exit_code() as u8).unwrap_or(0)
    };
    let json = Value::Array(certs.iter().map(|c| c.to_json(ctx.timings)).collect());
    Output { code, text, json }
}

fn span_cmd(ctx: &Ctx, span: &str, multidegree: &str) -> Result<Output> {
    let spec = SpanSpec::parse(span, ctx.field)?;
    let d = parse_multidegree(multidegree)?;
    let mut engine = SpanEngine::new(ctx.field, ctx.budget);
    let s = engine.span(&spec, &d)?;
    let status = match s.status() {
        SpanStatus::Exact => "exact".to_string(),
        SpanStatus::Inconclusive { exhausted } => format!("inconclusive ({exhausted})"),
    };
    let words = d.word_count();
    let text = format!(
        "{spec} at {d}: words={words} dimension={} codimension={} vectors={} {status}\n",
        s.dimension(),
        words - s.dimension() as u128,
        s.vectors_used(),
    );
    Ok(Output {
        code: if s.is_exact() { 0 } else { 2 },
        json: json!({
            "span": spec.to_string(),
            "multidegree": d.to_string(),
            "p": ctx.field.p(),
            "words": words,
            "dimension": s.dimension(),
            "vectors": s.vectors_used(),
            "status": s.status(),
            "budget": ctx.budget,
        }),
        text,
    })
}

fn audit_cmd() -> Output {
    let report = audit();
    let mut text = String::new();
    for st in STATEMENTS {
        let cov = match st.coverage {
            picentral::verifier::registry::Coverage::Claims(keys) => keys.join(", "),
            picentral::verifier::registry::Coverage::OutOfScope(why) => format!("out of scope: {why}"),
        };
        let _ = writeln!(text, "{:<36} {cov}", st.name);
    }
    let _ = writeln!(
        text,
        "{} statements: {} covered, {} out of scope; dangling {:?}, orphaned {:?}",
        report.statements, report.covered, report.out_of_scope, report.dangling, report.orphaned
    );
    Output {
        code: if report.is_total() { 0 } else { 1 },
        json: json!({ "report": report, "statements": STATEMENTS }),
        text,
    }
}
