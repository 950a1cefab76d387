//! The command implementations behind the `maclane` binary.

use num_traits::Signed;
use serde_json::json;

use crate::approx::{
    branch_invariants, extension_invariants, resolve, uniqueness_certificate, ApproximantChain, ChainStatus,
    DEFAULT_STAGE_BOUND,
};
use crate::config::{Scenario, ScenarioConfig};
use crate::descent::{generating_sequence, integral_key_sequence, DescentTrace, GeneratingSequence};
use crate::error::{Error, Hypothesis, Result};
use crate::graded::{
    generator_name, presentation, semigroup_module, PresentationJson, Relation,
    DEFAULT_MODULE_SAMPLES,
};
use crate::inductive::InductiveValuation;
use crate::newton::{base_polygon, polygon, NewtonPolygon};
use crate::oracle::{resultant_oracle, stage_monotonicity, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::ring::LocalRing;
use crate::value::{fmt_rational, parse_rational, Rational, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Value { g: String },
    Approximate,
    Descend,
    Graded,
    Polygon { stage: usize },
    Oracle,
}

/// Flags; each overrides the corresponding scenario option.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub json: bool,
    pub verbose: bool,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub stage_bound: Option<usize>,
    pub bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::HypothesisViolated(_)
        | Error::NonUniqueExtension
        | Error::ResidueCharDividesDegree(_)
        | Error::NotEquivalentPower
        | Error::ReducibleInput(_) => EXIT_HYPOTHESIS,
        Error::LimitRequired(_) | Error::StageBoundExceeded(_) => EXIT_LIMIT,
        _ => EXIT_FAILURE,
    }
}

struct Settings {
    seed: u64,
    samples: usize,
    stage_bound: usize,
    bound: Rational,
}

fn settings(s: &Scenario, flags: &Flags) -> Result<Settings> {
    let o = &s.options;
    let bound_text = flags.bound.clone().or_else(|| o.bound.clone()).unwrap_or_else(|| "20".into());
    let bound = parse_rational(&bound_text)
        .filter(|b| !b.is_negative())
        .ok_or_else(|| Error::InvalidInput(format!("bad bound '{bound_text}'")))?;
    Ok(Settings {
        seed: flags.seed.or(o.seed).unwrap_or(DEFAULT_SEED),
        samples: flags.samples.or(o.samples).unwrap_or(DEFAULT_SAMPLES),
        stage_bound: flags.stage_bound.or(o.stage_bound).unwrap_or(DEFAULT_STAGE_BOUND),
        bound,
    })
}

/// Runs `command` on the scenario file contents `src`.
pub fn run(command: &Command, src: &str, flags: &Flags) -> Outcome {
    let result = ScenarioConfig::from_json(src)
        .and_then(|c| c.build())
        .and_then(|s| {
            let set = settings(&s, flags)?;
            dispatch(command, &s, &set, flags)
        });
    match result {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    }
}

fn dispatch(command: &Command, s: &Scenario, set: &Settings, flags: &Flags) -> Result<(String, i32)> {
    let ok = |out: String| Ok((out, EXIT_OK));
    match command {
        Command::Value { g } => ok(cmd_value(s, set, g, flags)?),
        Command::Approximate => ok(cmd_approximate(s, set, flags)?),
        Command::Descend => ok(cmd_descend(s, set, flags)?),
        Command::Graded => ok(cmd_graded(s, set, flags)?),
        Command::Polygon { stage } => ok(cmd_polygon(s, set, *stage, flags)?),
        Command::Oracle => cmd_oracle(s, set, flags),
    }
}

fn unique_tower(s: &Scenario, set: &Settings) -> Result<InductiveValuation> {
    let chains = resolve(&s.field, &s.var, &s.f, set.stage_bound)?;
    if !uniqueness_certificate(&chains, &s.f).verdict {
        return Err(Error::HypothesisViolated(Hypothesis::NonUnique));
    }
    Ok(chains.into_iter().next().unwrap().tower)
}

fn cmd_value(s: &Scenario, set: &Settings, g: &str, flags: &Flags) -> Result<String> {
    let g = s.parse_poly(g)?;
    let w = unique_tower(s, set)?;
    let value = w.value(&g.rem(&s.f, &s.field.field()));
    Ok(if flags.json {
        format!("{}\n", json!({ "value": value.to_string() }))
    } else {
        format!("{value}\n")
    })
}

fn status_name(c: &ApproximantChain) -> &'static str {
    match c.status {
        ChainStatus::Open => "open",
        ChainStatus::Terminal => "terminal",
        ChainStatus::Converged => "converged",
    }
}

fn cmd_approximate(s: &Scenario, set: &Settings, flags: &Flags) -> Result<String> {
    let chains = resolve(&s.field, &s.var, &s.f, set.stage_bound)?;
    let cert = uniqueness_certificate(&chains, &s.f);
    let invariants = extension_invariants(&chains, &s.f).ok();
    if flags.json {
        let branches: Vec<_> = chains
            .iter()
            .map(|c| {
                let (e, f) = branch_invariants(c);
                let stages: Vec<_> = c
                    .records
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        json!({
                            "key": s.fmt_poly(c.tower.key(i + 1)),
                            "value": c.tower.mu(i + 1).to_string(),
                            "projection": r.projection,
                            "multiplicity": r.multiplicity,
                        })
                    })
                    .collect();
                json!({ "status": status_name(c), "stages": stages, "e": e, "f": f })
            })
            .collect();
        let inv = invariants.map(|i| json!({ "e": i.e, "f": i.f, "defect": i.defect }));
        let doc = json!({ "branches": branches, "unique": cert.verdict, "invariants": inv });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }
    let mut out = String::new();
    for (b, c) in chains.iter().enumerate() {
        if chains.len() > 1 {
            let (e, f) = branch_invariants(c);
            out.push_str(&format!("branch {} ({}): e={e} f={f}\n", b + 1, status_name(c)));
        }
        for (i, r) in c.records.iter().enumerate() {
            out.push_str(&format!(
                "({}, {}) proj={} n={}\n",
                s.fmt_poly(c.tower.key(i + 1)),
                c.tower.mu(i + 1),
                r.projection,
                r.multiplicity
            ));
        }
    }
    match invariants {
        Some(i) => out.push_str(&format!(
            "unique: yes; e={} f={} defect={}\n",
            i.e,
            i.f,
            i.defect.unwrap()
        )),
        None => out.push_str(&format!("unique: no; branches={}\n", chains.len())),
    }
    Ok(out)
}

fn ring_of(s: &Scenario) -> Result<&LocalRing> {
    s.ring
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this command needs a \"ring\" in the scenario".into()))
}

/// The descended sequence; when the residue characteristic divides `deg f`
/// the keys are accepted only if they are already over `A`.
fn sequence(s: &Scenario, set: &Settings) -> Result<(GeneratingSequence, bool)> {
    let ring = ring_of(s)?;
    match generating_sequence(ring, &s.field, &s.var, &s.f, set.stage_bound) {
        Err(Error::HypothesisViolated(Hypothesis::PDividesDeg)) => {
            let seq = integral_key_sequence(ring, &s.field, &s.var, &s.f, set.stage_bound)
                .map_err(|_| Error::HypothesisViolated(Hypothesis::PDividesDeg))?;
            Ok((seq, false))
        }
        other => other.map(|seq| (seq, true)),
    }
}

fn trace_dump(s: &Scenario, t: &DescentTrace) -> String {
    let mut out = format!("stage {}: r={} e={}\n", t.stage, t.r, t.e);
    let nonzero: Vec<String> = t
        .power
        .digits
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i.to_string())
        .collect();
    out.push_str(&format!("  nonzero c_i: {}\n", nonzero.join(", ")));
    for (i, m) in t.power_margins.iter().enumerate() {
        out.push_str(&format!("  margin c_{i} - b_{i}: {m}\n"));
    }
    for (j, u) in t.u.iter().enumerate() {
        out.push_str(&format!("  u_{j} = {} (margin {})\n", s.fmt_poly(u), t.digit_margins[j]));
    }
    out
}

fn cmd_descend(s: &Scenario, set: &Settings, flags: &Flags) -> Result<String> {
    let (seq, descended) = sequence(s, set)?;
    let ring = ring_of(s)?;
    let k = s.field.field();
    let integral = seq
        .keys
        .iter()
        .map(|p| ring.contains_poly(&k, p))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    if flags.json {
        let keys: Vec<_> = seq
            .keys
            .iter()
            .zip(&seq.values)
            .map(|(p, v)| json!({ "key": s.fmt_poly(p), "value": v.to_string() }))
            .collect();
        let doc = json!({ "keys": keys, "all_in_ring": integral, "descended": descended });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }
    let mut out = String::new();
    if flags.verbose {
        for t in &seq.traces {
            out.push_str(&trace_dump(s, t));
        }
    }
    for (i, (p, v)) in seq.keys.iter().zip(&seq.values).enumerate() {
        out.push_str(&format!("phi_{} = {} (v={v})\n", i + 1, s.fmt_poly(p)));
    }
    if !descended {
        out.push_str("note: residue characteristic divides deg f; keys were already over A\n");
    }
    out.push_str(&format!("all coefficients in A: {}\n", if integral { "yes" } else { "no" }));
    Ok(out)
}

fn fmt_relation(s: &Scenario, r: &Relation) -> String {
    let mut out = match r.power {
        1 => generator_name(r.index),
        n => format!("{}^{n}", generator_name(r.index)),
    };
    for t in &r.terms {
        let c = s.field.fmt_elem(&t.coeff);
        let mono: Vec<String> = t
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| match e {
                1 => generator_name(i + 1),
                _ => format!("{}^{e}", generator_name(i + 1)),
            })
            .collect();
        let (sign, c) = match c.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-', ' ']) => ("-", rest.to_string()),
            _ => ("+", c),
        };
        let c = if c.contains(['+', '-', ' ']) { format!("({c})") } else { c };
        let body = match (c.as_str(), mono.is_empty()) {
            (_, true) => c.clone(),
            ("1", false) => mono.join("*"),
            (_, false) => format!("{c}*{}", mono.join("*")),
        };
        out.push_str(&format!(" {sign} {body}"));
    }
    out
}

fn cmd_graded(s: &Scenario, set: &Settings, flags: &Flags) -> Result<String> {
    let (seq, _) = sequence(s, set)?;
    let p = presentation(&seq);
    let lifted = p.relation_check()?;
    let samples = flags.samples.or(s.options.samples).unwrap_or(DEFAULT_MODULE_SAMPLES);
    let module = semigroup_module(&seq, &s.field, &set.bound, samples, set.seed)?;
    if flags.json {
        return Ok(PresentationJson::new(&p, &module).render());
    }
    let mut out = String::new();
    let gens: Vec<String> = p
        .degrees
        .iter()
        .enumerate()
        .map(|(i, d)| format!("{} (degree {d})", generator_name(i + 1)))
        .collect();
    out.push_str(&format!("generators: {}\n", gens.join(", ")));
    for (r, v) in p.relations.iter().zip(&lifted) {
        out.push_str(&format!(
            "relation {}: {} (degree {}, lift value {v})\n",
            r.index,
            fmt_relation(s, r),
            r.degree
        ));
    }
    let base: Vec<String> = module.base.generators.iter().map(fmt_rational).collect();
    let shifts: Vec<String> = module.shifts.iter().map(|z| z.to_string()).collect();
    out.push_str(&format!(
        "semigroup: base <{}>; module shifts {{{}}}; checked {} values up to {}; generators alone cover: {}\n",
        base.join(", "),
        shifts.join(", "),
        module.checked,
        fmt_rational(&set.bound),
        if module.generators_alone_cover { "yes" } else { "no" }
    ));
    Ok(out)
}

fn polygon_json(p: &NewtonPolygon, principal: impl Fn(&Rational) -> bool) -> serde_json::Value {
    json!({
        "vertices": p.vertices.iter().map(|(a, v)| json!([a, fmt_rational(v)])).collect::<Vec<_>>(),
        "segments": p.segments.iter().map(|seg| json!({
            "slope": fmt_rational(&seg.slope),
            "length": seg.length,
            "principal": principal(&seg.slope),
        })).collect::<Vec<_>>(),
    })
}

fn cmd_polygon(s: &Scenario, set: &Settings, stage: usize, flags: &Flags) -> Result<String> {
    let chains = resolve(&s.field, &s.var, &s.f, set.stage_bound)?;
    let mut out = String::new();
    let mut docs = Vec::new();
    for (b, c) in chains.iter().enumerate() {
        let t = &c.tower;
        if stage == 0 || stage > t.height() {
            return Err(Error::InvalidInput(format!("stage must be between 1 and {}", t.height())));
        }
        // Stage 1 reads coefficient values directly; nonnegative slopes are principal.
        let (poly, threshold) = if stage == 1 {
            let v0 = InductiveValuation::gauss_x(s.field.clone(), &s.var, Value::zero())?;
            (base_polygon(&v0, &s.f), None)
        } else {
            let v = t.truncate(stage - 1);
            let key = t.key(stage);
            (polygon(&v, key, &s.f), Some(v.value(key)))
        };
        let principal = |slope: &Rational| match &threshold {
            None => !slope.is_negative(),
            Some(th) => Value::Finite(slope.clone()) > *th,
        };
        if chains.len() > 1 && !flags.json {
            out.push_str(&format!("branch {}:\n", b + 1));
        }
        out.push_str(&poly.dump_flagged(principal));
        docs.push(polygon_json(&poly, principal));
    }
    if flags.json {
        let doc = json!({ "stage": stage, "branches": docs });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }
    Ok(out)
}

fn cmd_oracle(s: &Scenario, set: &Settings, flags: &Flags) -> Result<(String, i32)> {
    let w = unique_tower(s, set)?;
    let res = resultant_oracle(&w, &s.f, set.samples, set.seed)?;
    let deg = s.f.degree().unwrap();
    let mono = stage_monotonicity(&w, 2 * deg, set.samples, set.seed.wrapping_add(1));
    let code = if res.passed() && mono.passed() { EXIT_OK } else { EXIT_ORACLE };
    if flags.json {
        let doc = json!({
            "resultant": { "samples": res.samples, "agree": res.agreements, "failures": res.failures },
            "stages": { "samples": mono.samples, "agree": mono.agreements, "failures": mono.failures },
        });
        return Ok((format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()), code));
    }
    let mut out = format!("{}/{} agree\n", res.agreements, res.samples);
    out.push_str(&format!("stage monotonicity: {}/{} agree\n", mono.agreements, mono.samples));
    if flags.verbose || code != EXIT_OK {
        for f in res.failures.iter().chain(&mono.failures) {
            out.push_str(&format!("disagreement: {f}\n"));
        }
    }
    Ok((out, code))
}
