//! Report assembly for the command-line front end: every command returns a
//! [`Report`] with its inputs, results and a list of pass/fail checks, which
//! renders to JSON, CSV or Markdown.

mod corpus;
mod tables;

pub use corpus::{corpus_text, regression_corpus, CONJECTURE_CASES, CORPUS_GRID};
pub use tables::{
    fixture, qm1, qm1q2m1, qm1sq, reproduce_tables, CellResult, Entry, Erratum, ErratumResult,
    FixtureCell, Poly, TableFixture, TableReport,
};

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::codes::{self, code_params, CodeId, Variant};
use crate::error::{invalid, Error, Result};
use crate::gf::{FieldSpec, SquareClass};
use crate::json::big;
use crate::spectrum::{fiber_census_all, Session};
use crate::symmat::{class_count, rank_count, space_size, type_count, DEFAULT_BUDGET};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest space for which `params` also checks the dimension through the
/// rank of an explicit generator matrix.
const GENERATOR_CHECK_LIMIT: u128 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            other => Err(invalid(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Params,
    Weight,
    Spectrum,
    Mindist,
    Verify,
    Fibers,
    Conjecture,
    Tables,
    Corpus,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Params => "params",
            Command::Weight => "weight",
            Command::Spectrum => "spectrum",
            Command::Mindist => "mindist",
            Command::Verify => "verify",
            Command::Fibers => "fibers",
            Command::Conjecture => "conjecture",
            Command::Tables => "tables",
            Command::Corpus => "corpus",
        }
    }
}

/// Parameters of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u64,
    pub m: usize,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub delta_class: Option<SquareClass>,
    pub variant: Variant,
    pub budget: u64,
    pub workers: Option<usize>,
    /// Record wall-clock time; off for byte-stable output.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(q: u64, m: usize) -> RunConfig {
        RunConfig {
            q,
            m,
            t: None,
            k: None,
            delta_class: None,
            variant: Variant::Affine,
            budget: DEFAULT_BUDGET,
            workers: None,
            timing: true,
        }
    }

    fn session(&self) -> Result<Session> {
        if self.budget == 0 {
            return Err(invalid("budget must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers must be positive"));
        }
        if self.m == 0 || self.m > crate::symmat::MAX_M {
            return Err(invalid(format!(
                "m must be between 1 and {}",
                crate::symmat::MAX_M
            )));
        }
        Ok(Session::new(FieldSpec::new(self.q)?)
            .with_budget(self.budget)
            .with_workers(self.workers))
    }

    fn need_t(&self) -> Result<usize> {
        let t = self.t.ok_or_else(|| invalid("--t is required"))?;
        if t == 0 || t > self.m {
            return Err(invalid(format!("--t must satisfy 1 <= t <= m, got {t}")));
        }
        Ok(t)
    }

    fn classes(&self) -> Vec<SquareClass> {
        match self.delta_class {
            Some(c) => vec![c],
            None => SquareClass::BOTH.to_vec(),
        }
    }

    fn ks(&self, from: usize) -> Result<Vec<usize>> {
        match self.k {
            Some(k) if k < from || k > self.m => Err(invalid(format!(
                "--k must satisfy {from} <= k <= m, got {k}"
            ))),
            Some(k) => Ok(vec![k]),
            None => Ok((from..=self.m).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl Check {
    pub fn eq<E: Serialize, A: Serialize>(
        name: impl Into<String>,
        expected: E,
        actual: A,
    ) -> Check {
        let expected = serde_json::to_value(expected).expect("serializable");
        let actual = serde_json::to_value(actual).expect("serializable");
        let pass = expected == actual;
        Check {
            name: name.into(),
            expected,
            actual,
            pass,
        }
    }

    pub fn flag(name: impl Into<String>, expected: Value, actual: Value, pass: bool) -> Check {
        Check {
            name: name.into(),
            expected,
            actual,
            pass,
        }
    }
}

/// One CSV line: a weight of one `(k, delta class, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub q: u64,
    pub m: usize,
    pub t: usize,
    pub k: usize,
    pub delta_class: String,
    pub weight: String,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub runtime_ms: Option<u64>,
    #[serde(skip)]
    pub rows: Vec<WeightRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("serializable"),
    }
}

/// Renders a report. JSON is pretty-printed; CSV lists weight rows when the
/// command produces them and the checks otherwise.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if report.rows.is_empty() {
                w.write_record(["name", "expected", "actual", "pass"])
                    .expect("in-memory write");
                for c in &report.checks {
                    w.write_record([
                        c.name.clone(),
                        compact(&c.expected),
                        compact(&c.actual),
                        c.pass.to_string(),
                    ])
                    .expect("in-memory write");
                }
            } else {
                for r in &report.rows {
                    w.serialize(r).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Md => {
            let mut s = String::new();
            let _ = writeln!(s, "# {}\n", report.command);
            let _ = writeln!(s, "| input | value |\n|---|---|");
            for (k, v) in &report.inputs {
                let _ = writeln!(s, "| {k} | {} |", compact(v));
            }
            if !report.rows.is_empty() {
                let _ = writeln!(
                    s,
                    "\n| t | k | delta class | weight | method |\n|---|---|---|---|---|"
                );
                for r in &report.rows {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} |",
                        r.t, r.k, r.delta_class, r.weight, r.method
                    );
                }
            }
            let _ = writeln!(
                s,
                "\n| check | expected | actual | pass |\n|---|---|---|---|"
            );
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    c.name,
                    compact(&c.expected).replace('|', "\\|"),
                    compact(&c.actual).replace('|', "\\|"),
                    if c.pass { "yes" } else { "NO" }
                );
            }
            let _ = writeln!(
                s,
                "\n{} of {} checks passed.",
                report.checks.iter().filter(|c| c.pass).count(),
                report.checks.len()
            );
            s
        }
    }
}

/// One line of a weight spectrum computed from the formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumLine {
    pub k: usize,
    pub delta_class: Option<SquareClass>,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub weight: BigInt,
    #[serde(serialize_with = "crate::json::serialize_big")]
    pub multiplicity: BigInt,
}

/// Affine weight spectrum of the code with rank bound `t`: one line per
/// class of functional, the zero functional first.
pub fn formula_spectrum(session: &Session, t: usize, m: usize) -> Result<Vec<SpectrumLine>> {
    let q = session.q() as u64;
    let mut out = vec![SpectrumLine {
        k: 0,
        delta_class: None,
        weight: BigInt::from(0),
        multiplicity: BigInt::from(1),
    }];
    for k in 1..=m {
        for class in SquareClass::BOTH {
            out.push(SpectrumLine {
                k,
                delta_class: Some(class),
                weight: session.weight_theorem(k, class, t, m)?,
                multiplicity: class_count(q, k, m, class).expect("k >= 1"),
            });
        }
    }
    Ok(out)
}

fn scale(variant: Variant, q: u64, w: &BigInt) -> BigInt {
    match variant {
        Variant::Affine => w.clone(),
        Variant::Projective => w / BigInt::from(q - 1),
    }
}

/// Runs one command.
pub fn run(command: Command, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut inputs = Map::new();
    inputs.insert("q".into(), json!(cfg.q));
    if command != Command::Corpus {
        inputs.insert("m".into(), json!(cfg.m));
    }
    let session = if command == Command::Corpus {
        None
    } else {
        Some(cfg.session()?)
    };
    let (results, checks, rows) = match (command, session.as_ref()) {
        (Command::Corpus, _) => (regression_corpus(cfg.workers)?, Vec::new(), Vec::new()),
        (Command::Params, Some(s)) => cmd_params(s, cfg, &mut inputs)?,
        (Command::Weight, Some(s)) => cmd_weight(s, cfg, &mut inputs)?,
        (Command::Spectrum, Some(s)) => cmd_spectrum(s, cfg, &mut inputs)?,
        (Command::Mindist, Some(s)) => cmd_mindist(s, cfg, &mut inputs)?,
        (Command::Verify, Some(s)) => cmd_verify(s, cfg, &mut inputs)?,
        (Command::Fibers, Some(s)) => cmd_fibers(s, cfg, &mut inputs)?,
        (Command::Conjecture, Some(s)) => cmd_conjecture(s, cfg, &mut inputs)?,
        (Command::Tables, Some(s)) => cmd_tables(s, cfg, &mut inputs)?,
        _ => unreachable!("session exists for every command but corpus"),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: command.as_str().to_string(),
        inputs,
        results,
        checks,
        runtime_ms: cfg.timing.then(|| start.elapsed().as_millis() as u64),
        rows,
    })
}

type Outcome = (Value, Vec<Check>, Vec<WeightRow>);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn cmd_params(s: &Session, cfg: &RunConfig, inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let t = cfg.need_t()?;
    inputs.insert("t".into(), json!(t));
    inputs.insert("variant".into(), json!(cfg.variant.as_str()));
    let id = CodeId::new(cfg.q, cfg.m, t, cfg.variant)?;
    let p = code_params(&id);
    let mut checks = Vec::new();
    if s.can_enumerate(cfg.m) {
        let tally = s.tally(cfg.m)?;
        let points: u128 = (0..=t).map(|r| tally.rank_count(r)).sum();
        let counted = match cfg.variant {
            Variant::Affine => points,
            Variant::Projective => (points - 1) / (cfg.q as u128 - 1),
        };
        checks.push(Check::eq(
            "length-by-enumeration",
            big(&p.n),
            counted.to_string().parse::<Value>().unwrap(),
        ));
    }
    if space_size(s.q(), cfg.m) <= GENERATOR_CHECK_LIMIT {
        let g = codes::generator_matrix(s.field(), &id, cfg.budget)?;
        checks.push(Check::eq(
            "dimension-by-generator-rank",
            p.k,
            codes::row_rank(s.field(), &g),
        ));
    }
    Ok((json!({"n": big(&p.n), "k": p.k}), checks, Vec::new()))
}

fn cmd_weight(s: &Session, cfg: &RunConfig, inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let ts: Vec<usize> = match cfg.t {
        Some(_) => vec![cfg.need_t()?],
        None => (1..=cfg.m).collect(),
    };
    if let Some(t) = cfg.t {
        inputs.insert("t".into(), json!(t));
    }
    if let Some(k) = cfg.k {
        inputs.insert("k".into(), json!(k));
    }
    if let Some(c) = cfg.delta_class {
        inputs.insert("delta_class".into(), json!(c.as_str()));
    }
    inputs.insert("variant".into(), json!(cfg.variant.as_str()));
    let brute = s.can_enumerate(cfg.m);
    let q = cfg.q;
    let mut results = Vec::new();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &t in &ts {
        for k in cfg.ks(1)? {
            for c in cfg.classes() {
                let r = s.weight_report(k, c, t, cfg.m, brute)?;
                let w = scale(cfg.variant, q, &r.value);
                let name = format!("agreement t={t} k={k} {c}");
                checks.push(Check::flag(
                    name,
                    big(&r.value),
                    to_value(&r).get("values").cloned().unwrap(),
                    r.agree,
                ));
                rows.push(WeightRow {
                    q,
                    m: cfg.m,
                    t,
                    k,
                    delta_class: c.as_str().into(),
                    weight: w.to_string(),
                    method: if brute {
                        "brute-force"
                    } else {
                        "weight-formula"
                    }
                    .into(),
                });
                let mut v = to_value(&r);
                v["weight"] = big(&w);
                results.push(v);
            }
        }
    }
    Ok((Value::Array(results), checks, rows))
}

fn cmd_spectrum(s: &Session, cfg: &RunConfig, inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let t = cfg.need_t()?;
    inputs.insert("t".into(), json!(t));
    inputs.insert("variant".into(), json!(cfg.variant.as_str()));
    let q = cfg.q;
    let m = cfg.m;
    let lines = formula_spectrum(s, t, m)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let scaled: Vec<Value> = lines
        .iter()
        .map(|l| {
            json!({
                "k": l.k,
                "delta_class": l.delta_class,
                "weight": big(&scale(cfg.variant, q, &l.weight)),
                "multiplicity": big(&l.multiplicity),
            })
        })
        .collect();
    for l in &lines {
        rows.push(WeightRow {
            q,
            m,
            t,
            k: l.k,
            delta_class: l.delta_class.map_or("none", |c| c.as_str()).into(),
            weight: scale(cfg.variant, q, &l.weight).to_string(),
            method: "weight-formula".into(),
        });
    }
    let mut distinct: Vec<BigInt> = lines.iter().map(|l| l.weight.clone()).collect();
    distinct.sort();
    distinct.dedup();
    checks.push(Check::flag(
        "distinct-weights-at-most-2m+1",
        json!(2 * m + 1),
        json!(distinct.len()),
        distinct.len() <= 2 * m + 1,
    ));
    let total: BigInt = lines.iter().map(|l| &l.multiplicity).sum();
    checks.push(Check::eq(
        "codewords-total",
        big(&num_traits::pow(BigInt::from(q), m * (m + 1) / 2)),
        big(&total),
    ));
    if s.can_enumerate(m) {
        let id = CodeId::new(q, m, t, cfg.variant)?;
        let bf = codes::spectrum(s.field(), &id, cfg.budget)?;
        for (l, e) in lines.iter().zip(&bf.entries) {
            let name = format!(
                "enumeration k={} {}",
                l.k,
                l.delta_class.map_or("zero", |c| c.as_str())
            );
            checks.push(Check::eq(
                name,
                json!({"weight": big(&scale(cfg.variant, q, &l.weight)), "multiplicity": big(&l.multiplicity)}),
                json!({"weight": e.weight, "multiplicity": e.multiplicity}),
            ));
        }
    }
    let weights: Vec<Value> = distinct
        .iter()
        .map(|w| big(&scale(cfg.variant, q, w)))
        .collect();
    Ok((
        json!({"entries": scaled, "distinct_weights": weights}),
        checks,
        rows,
    ))
}

fn cmd_mindist(s: &Session, cfg: &RunConfig, inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let t = cfg.need_t()?;
    inputs.insert("t".into(), json!(t));
    inputs.insert("variant".into(), json!(cfg.variant.as_str()));
    let md = s.min_distance(t, cfg.m)?;
    let d = match cfg.variant {
        Variant::Affine => &md.affine,
        Variant::Projective => &md.projective,
    };
    let mut checks = Vec::new();
    let method = if let Some(even) = &md.even {
        checks.push(Check::eq(
            "scan-minimum-equals-w1",
            big(&even.w1),
            big(&md.affine),
        ));
        checks.push(Check::eq(
            "projective-formula-equals-projective-distance",
            big(&md.projective),
            big(&even.projective_formula),
        ));
        "closed-form"
    } else {
        if let Some(p) = &md.predicted {
            checks.push(Check::eq(
                "predicted-minimizer-attains-minimum",
                big(&md.affine),
                big(&p.weight),
            ));
        }
        "candidate-scan"
    };
    let results = json!({
        "d": big(d),
        "variant": cfg.variant.as_str(),
        "method": method,
        "affine": big(&md.affine),
        "projective": big(&md.projective),
        "projective_formula_variant": md.even.as_ref().map(|_| "projective"),
        "scan": to_value(&md),
    });
    Ok((results, checks, Vec::new()))
}

fn cmd_fibers(s: &Session, cfg: &RunConfig, inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let t = cfg.need_t()?;
    if t % 2 == 1 {
        return Err(invalid(format!("fibers needs an even rank --t, got {t}")));
    }
    inputs.insert("t".into(), json!(t));
    if let Some(k) = cfg.k {
        inputs.insert("k".into(), json!(k));
    }
    if let Some(c) = cfg.delta_class {
        inputs.insert("delta_class".into(), json!(c.as_str()));
    }
    let ks = cfg.ks(1)?;
    let classes = cfg.classes();
    let reports: Vec<_> = fiber_census_all(s, t / 2, cfg.m)?
        .into_iter()
        .filter(|r| ks.contains(&r.k) && classes.contains(&r.delta_class))
        .collect();
    let mut checks = Vec::new();
    for r in &reports {
        for c in &r.checks {
            checks.push(Check::flag(
                format!(
                    "k={} {} {} {:?}",
                    r.k, r.delta_class, c.description, c.quantity
                )
                .to_lowercase(),
                json!(c.expected),
                json!({"min": c.observed_min, "max": c.observed_max, "matrices": c.matrices}),
                c.pass,
            ));
        }
    }
    Ok((to_value(&reports), checks, Vec::new()))
}

fn cmd_conjecture(
    s: &Session,
    cfg: &RunConfig,
    inputs: &mut Map<String, Value>,
) -> Result<Outcome> {
    let t = cfg.t.ok_or_else(|| invalid("--t is required"))?;
    inputs.insert("t".into(), json!(t));
    let r = s.conjecture_check(t, cfg.m)?;
    let checks = vec![
        Check::flag("ordered", json!(true), json!(r.ordered), r.ordered),
        Check::eq("equal-gaps", big(&r.gap_below), big(&r.gap_above)),
        Check::eq(
            "global-minimum",
            big(&r.global_minimum),
            big(&r.w2_minus_delta_square),
        ),
    ];
    Ok((to_value(&r), checks, Vec::new()))
}

fn cmd_tables(s: &Session, cfg: &RunConfig, _inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let r = reproduce_tables(s, cfg.m)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for c in &r.cells {
        let class = c.delta_class.map_or("both", |d| d.as_str());
        checks.push(Check::flag(
            format!("W{}(t={}) {}", c.k, c.t, class),
            c.printed
                .as_ref()
                .map_or_else(|| json!(c.printed_expression), big),
            big(&c.computed),
            c.matches,
        ));
        rows.push(WeightRow {
            q: r.q,
            m: r.m,
            t: c.t,
            k: c.k,
            delta_class: class.into(),
            weight: c.computed.to_string(),
            method: if c.brute_force.is_some() {
                "brute-force"
            } else {
                "weight-formula"
            }
            .into(),
        });
    }
    Ok((to_value(&r), checks, rows))
}

fn cmd_verify(s: &Session, cfg: &RunConfig, _inputs: &mut Map<String, Value>) -> Result<Outcome> {
    let q = cfg.q;
    let m = cfg.m;
    let mut checks = Vec::new();
    let brute = s.can_enumerate(m);
    if brute {
        let tally = s.tally(m)?;
        for r in 0..=m {
            checks.push(Check::eq(
                format!("census s({r},{m})"),
                big(&rank_count(q, r as i64, m)),
                json!(tally.rank_count(r) as u64),
            ));
        }
        for h in 1..=m / 2 {
            for hyp in [true, false] {
                checks.push(Check::eq(
                    format!("census v{}({},{m})", if hyp { "+" } else { "-" }, 2 * h),
                    big(&type_count(q, h, m, hyp)),
                    json!(tally.type_count(2 * h, hyp) as u64),
                ));
            }
        }
    }
    for t in 1..=m {
        for k in 0..=m {
            for c in SquareClass::BOTH {
                let r = s.weight_report(k, c, t, m, brute)?;
                checks.push(Check::flag(
                    format!("weights t={t} k={k} {c}"),
                    big(&r.value),
                    to_value(&r).get("values").cloned().unwrap(),
                    r.agree,
                ));
            }
        }
        let md = s.min_distance(t, m)?;
        if let Some(even) = &md.even {
            checks.push(Check::eq(
                format!("min-distance t={t}"),
                big(&even.w1),
                big(&md.affine),
            ));
            checks.push(Check::eq(
                format!("projective-formula t={t}"),
                big(&md.projective),
                big(&even.projective_formula),
            ));
        } else if t < m {
            let r = s.conjecture_check(t, m)?;
            checks.push(Check::flag(
                format!("conjecture t={t}"),
                json!(true),
                json!({"ordered": r.ordered, "equal_gaps": r.equal_gaps, "global_minimum": r.is_global_minimum}),
                r.holds,
            ));
        }
    }
    for th in 1..=m / 2 {
        for k in 0..=m {
            for c in SquareClass::BOTH {
                let b = s.bound_check(k, c, th, m)?;
                checks.push(Check::flag(
                    format!("bound 2t={} k={k} {c}", 2 * th),
                    big(&b.bound),
                    json!({"h_minus_e": big(&b.h_minus_e), "slack": big(&b.slack)}),
                    b.passes(),
                ));
            }
        }
        if space_size(s.q(), m) <= cfg.budget as u128 {
            for r in fiber_census_all(s, th, m)? {
                let failed = r.checks.iter().filter(|c| !c.pass).count();
                checks.push(Check::flag(
                    format!("fibers 2t={} k={} {}", 2 * th, r.k, r.delta_class),
                    json!(0),
                    json!(failed),
                    r.passes(),
                ));
            }
        }
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok((
        json!({"checks_run": checks.len(), "checks_passed": passed, "brute_force": brute}),
        checks,
        Vec::new(),
    ))
}
