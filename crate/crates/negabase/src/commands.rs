//! Subcommand implementations. Each returns the rendered output and the
//! process exit code, so they can be driven from tests without a process.

use std::cmp::Ordering;
use std::fmt;
use std::path::PathBuf;

use negabase_core::expand::{expand, Source};
use negabase_core::optimality::{
    candidate_variants, certify_optimality, counterexample_interval, sample_point, verify_sample,
    CounterexampleInterval, OptimalityVerdict, SampleReport, ScanReport, Status, NODE_BUDGET,
};
use negabase_core::transforms::{branch_map, classify_regime, discontinuity_set, one_sided_limits, step_optimal, RegimeTag};
use negabase_core::confluent::detect_confluent;
use negabase_core::{Error, NumerationSystem, Real};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::{CertifyArgs, Command, CommonArgs, ExpandArgs, Format, ScanArgs};
use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

/// A failed run: one-line message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. }
            | Error::PrecisionExhausted { .. }
            | Error::RewriteBudget { .. }
            | Error::Undecidable(_)
            | Error::Inconclusive(_) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Rendered output of a successful run.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    pub out: Option<PathBuf>,
}

/// Settings shared by every subcommand after validation.
#[derive(Debug)]
pub struct RunConfig {
    pub base: String,
    pub system: NumerationSystem,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs, default_format: Format) -> Result<Self, Failure> {
        let system = NumerationSystem::parse_canonical(&args.base)?.with_precision_bits(args.precision_bits);
        Ok(RunConfig {
            base: args.base.clone(),
            system,
            format: args.format.unwrap_or(default_format),
            out: args.out.clone(),
        })
    }
}

pub fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Expand(a) => cmd_expand(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn parse_x(text: &str) -> Result<Real, Failure> {
    Ok(Real::parse(text)?)
}

pub fn cmd_expand(args: &ExpandArgs) -> Result<Outcome, Failure> {
    let cfg = RunConfig::from_args(&args.common, Format::Text)?;
    let sys = &cfg.system;
    let x = parse_x(&args.x)?;
    let source = if args.greedy { Source::Greedy } else { Source::Optimal };
    let e = expand(sys, &x, args.depth as usize, source)?;
    let digits = render::digits_text(&e.digits);
    let text = match cfg.format {
        Format::Text => {
            let mut s = format!("{digits}\n");
            s.push_str(&format!("expansion: {}\n", e.string));
            match e.hit_e {
                Some(k) => s.push_str(&format!("hit_E: {k}\n")),
                None => s.push_str("hit_E: none\n"),
            }
            for (k, y) in e.orbit.iter().enumerate() {
                let (lo, hi) = render::bounds(y, render::PLACES)?;
                s.push_str(&format!("T^{k}(x) in [{lo}, {hi}]\n"));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("k,lo,hi,digit\n");
            for (k, y) in e.orbit.iter().enumerate() {
                let (lo, hi) = render::bounds(y, render::PLACES)?;
                let d = e.digits.get(k).map(|d| d.to_string()).unwrap_or_default();
                s.push_str(&format!("{k},{lo},{hi},{d}\n"));
            }
            s
        }
        Format::Json => {
            let orbit = e
                .orbit
                .iter()
                .enumerate()
                .map(|(k, y)| {
                    let (lo, hi) = render::bounds(y, render::PLACES)?;
                    Ok(json!({ "k": k, "lo": lo, "hi": hi }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            json_text(&json!({
                "base": cfg.base,
                "x": args.x,
                "source": if args.greedy { "greedy" } else { "optimal" },
                "depth": args.depth,
                "digits": e.digits,
                "expansion": e.string.to_string(),
                "hit_e": e.hit_e,
                "orbit": orbit,
            }))
        }
    };
    Ok(Outcome { text, code: EXIT_OK, out: cfg.out })
}

fn default_depth(sys: &NumerationSystem) -> usize {
    if sys.is_negative() {
        20
    } else {
        25
    }
}

/// Label of the counterexample interval containing `x`, if there is one.
fn case_of(sys: &NumerationSystem, x: &Real) -> Option<&'static str> {
    let ci = counterexample_interval(sys).ok()?;
    ci.contains(sys, x).ok()?.then(|| ci.case_label.as_str())
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<Outcome, Failure> {
    let cfg = RunConfig::from_args(&args.common, Format::Json)?;
    let sys = &cfg.system;
    let x = parse_x(&args.x)?;
    let depth = args.depth.map_or_else(|| default_depth(sys), |d| d as usize);
    let candidates = if args.greedy {
        vec![expand(sys, &x, depth, Source::Greedy)?.digits]
    } else {
        candidate_variants(sys, &x, depth)?
    };
    let verdicts = candidates
        .iter()
        .map(|c| certify_optimality(sys, &x, c, depth, NODE_BUDGET))
        .collect::<Result<Vec<OptimalityVerdict>, Error>>()?;
    let any_optimal = verdicts.iter().any(|v| matches!(v.status, Status::OptimalToDepth(_)));
    let code = if any_optimal { EXIT_OK } else { EXIT_REFUTED };
    let case = case_of(sys, &x);
    let main = &verdicts[0];
    let text = match cfg.format {
        Format::Json => {
            let mut v = render::verdict_json(main, &args.x, &cfg.base, case, depth);
            if verdicts.len() > 1 {
                v["note"] = json!("candidate non-unique along orbit");
                v["variants"] = Value::Array(
                    verdicts.iter().map(|w| render::verdict_json(w, &args.x, &cfg.base, case, depth)).collect(),
                );
            }
            json_text(&v)
        }
        Format::Csv => render::verdict_csv(main),
        Format::Text => {
            let mut s = render::verdict_text(main);
            for w in &verdicts[1..] {
                s.push_str("variant:\n");
                s.push_str(&render::verdict_text(w));
            }
            s
        }
    };
    Ok(Outcome { text, code, out: cfg.out })
}

pub fn cmd_classify(args: &CommonArgs) -> Result<Outcome, Failure> {
    let cfg = RunConfig::from_args(args, Format::Json)?;
    let sys = &cfg.system;
    let mut report = render::system_json(sys, &cfg.base)?;
    let mut notes: Vec<String> = Vec::new();
    let integer = sys.beta().is_integer()?;

    let mut regime = Value::Null;
    let mut cuts = Value::Null;
    if sys.is_negative() && !integer {
        let reg = classify_regime(sys.beta())?;
        regime = json!(match reg.tag {
            RegimeTag::Midpoint => "Midpoint",
            RegimeTag::Standard => "Standard",
        });
        let points = discontinuity_set(sys)?
            .iter()
            .map(render::real_json)
            .collect::<Result<Vec<_>, Error>>()?;
        cuts = Value::Array(points);
    } else if !integer {
        notes.push("regime and E describe the optimal map of a negative base; classify the negated base to see them".into());
    }
    report["regime"] = regime;
    report["E"] = cuts;

    let mut confluent = Value::Null;
    if !sys.is_negative() && !integer {
        match detect_confluent(sys.beta()) {
            Ok(Some(p)) => confluent = json!({ "m": p.m, "p": p.p, "d": p.d }),
            Ok(None) => {}
            Err(e) => notes.push(format!("confluence: {e}")),
        }
    }
    report["confluent_params"] = confluent;

    report["counterexample_interval"] = match counterexample_interval(sys) {
        Ok(ci) => render::counterexample_json(&ci)?,
        Err(e) => {
            notes.push(format!("counterexample interval: {e}"));
            Value::Null
        }
    };
    report["notes"] = json!(notes);

    let text = match cfg.format {
        Format::Json => json_text(&report),
        Format::Text | Format::Csv => {
            let sep = if cfg.format == Format::Csv { "," } else { ": " };
            let mut s = if cfg.format == Format::Csv { String::from("key,value\n") } else { String::new() };
            if let Value::Object(map) = &report {
                for (k, v) in map {
                    let v = match v {
                        Value::String(t) => t.clone(),
                        other => other.to_string(),
                    };
                    let v = if cfg.format == Format::Csv { csv_field(&v) } else { v };
                    s.push_str(&format!("{k}{sep}{v}\n"));
                }
            }
            s
        }
    };
    Ok(Outcome { text, code: EXIT_OK, out: cfg.out })
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

pub fn cmd_scan(args: &ScanArgs) -> Result<Outcome, Failure> {
    let cfg = RunConfig::from_args(&args.common, Format::Json)?;
    if let Some(n) = args.grid {
        let text = plot_csv(&cfg.system, n as usize)?;
        return Ok(Outcome { text, code: EXIT_OK, out: cfg.out });
    }
    let sys = &cfg.system;
    let ci = counterexample_interval(sys).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("no counterexample interval for this base: {e}"),
    })?;
    let reports = scan_samples(sys, &ci, args.samples as usize, args.depth as usize, args.seed)?;
    let summary = ScanReport::from_reports(&ci, &reports);
    let code = if summary.failures.is_empty() { EXIT_OK } else { EXIT_REFUTED };
    let text = match cfg.format {
        Format::Json => json_text(&scan_json(&cfg, args, &ci, &summary, &reports)?),
        Format::Csv => {
            let mut s = String::from("index,x,refuted_at,witness,failed_checks\n");
            for (i, r) in reports.iter().enumerate() {
                let refuted = r.verdict.refuted_at().map(|n| n.to_string()).unwrap_or_default();
                let witness = r.verdict.witness.as_deref().map(render::digits_text).unwrap_or_default();
                s.push_str(&format!(
                    "{i},{},{refuted},{},{}\n",
                    csv_field(&r.x.to_string()),
                    csv_field(&witness),
                    csv_field(&r.failed_checks.join(";"))
                ));
            }
            s
        }
        Format::Text => {
            let hist: Vec<String> = summary.depth_histogram.iter().map(|(d, c)| format!("{d}:{c}")).collect();
            format!(
                "case: {}\nsamples: {}\nrefuted: {}\ndepths: {}\nfailures: {}\n",
                ci.case_label.as_str(),
                summary.samples,
                summary.refuted,
                hist.join(" "),
                summary.failures.len()
            )
        }
    };
    Ok(Outcome { text, code, out: cfg.out })
}

/// Verifies `samples` seeded points in parallel; results are in index order.
pub fn scan_samples(
    sys: &NumerationSystem,
    ci: &CounterexampleInterval,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<SampleReport>, Failure> {
    let results: Vec<Result<SampleReport, Error>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = sample_point(&ci.lo, &ci.hi, seed, i as u64)?;
            verify_sample(sys, ci, &x, depth, NODE_BUDGET)
        })
        .collect();
    Ok(results.into_iter().collect::<Result<Vec<_>, Error>>()?)
}

fn scan_json(
    cfg: &RunConfig,
    args: &ScanArgs,
    ci: &CounterexampleInterval,
    summary: &ScanReport,
    reports: &[SampleReport],
) -> Result<Value, Failure> {
    let mut hist = serde_json::Map::new();
    for (d, c) in &summary.depth_histogram {
        hist.insert(d.to_string(), json!(c));
    }
    let results: Vec<Value> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "index": i,
                "x": r.x.to_string(),
                "refuted_at": r.verdict.refuted_at(),
                "witness_prefix": r.verdict.witness,
                "failed_checks": r.failed_checks,
            })
        })
        .collect();
    Ok(json!({
        "base": cfg.base,
        "case": ci.case_label.as_str(),
        "interval": render::counterexample_json(ci)?,
        "seed": args.seed,
        "samples": summary.samples,
        "depth": args.depth,
        "refuted": summary.refuted,
        "depth_histogram": hist,
        "failures": summary.failures,
        "results": results,
    }))
}

/// `x,To_x,branch_digit` on `n` evenly spaced points of `J`. Each cut point
/// of `T_o` adds two rows at the same `x`: the left limit, then the value.
pub fn plot_csv(sys: &NumerationSystem, n: usize) -> Result<String, Failure> {
    let mut cuts: Vec<(Real, Real, i64)> = Vec::new();
    if sys.is_negative() && !sys.beta().is_integer()? {
        let map = branch_map(sys)?;
        for (idx, delta) in map.cuts().into_iter().enumerate() {
            let (left, _) = one_sided_limits(sys, &delta)?;
            cuts.push((delta, left, map.branches[idx].digit));
        }
    }
    let mut out = String::from("x,To_x,branch_digit\n");
    let row = |out: &mut String, x: &Real, y: &Real, d: i64| {
        out.push_str(&format!("{},{},{d}\n", render::approx(x), render::approx(y)));
    };
    let mut next_cut = 0;
    let span = sys.r() - sys.l();
    for j in 0..n {
        let x = sys.l() + &(&span * &Real::ratio(j as i64, (n - 1) as i64));
        let mut on_cut = false;
        while next_cut < cuts.len() {
            let ord = sys.compare(&cuts[next_cut].0, &x)?;
            if ord == Ordering::Greater {
                break;
            }
            let (delta, left, left_digit) = &cuts[next_cut];
            row(&mut out, delta, left, *left_digit);
            let (d, y) = step_optimal(sys, delta)?;
            row(&mut out, delta, &y, d);
            on_cut |= ord == Ordering::Equal;
            next_cut += 1;
        }
        if on_cut {
            continue;
        }
        let (d, y) = step_optimal(sys, &x)?;
        row(&mut out, &x, &y, d);
    }
    Ok(out)
}

pub fn io_failure(e: std::io::Error, what: &str) -> Failure {
    Failure { code: EXIT_IO, message: format!("{what}: {e}") }
}
