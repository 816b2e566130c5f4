//! JSON and CSV rendering of library values.

use negabase_core::interval::Interval;
use negabase_core::numsys::Digit;
use negabase_core::optimality::{CaseParams, CounterexampleInterval, OptimalityVerdict, Status};
use negabase_core::{NumerationSystem, Real, Result};
use serde_json::{json, Value};

/// Fraction digits for enclosures of interval endpoints and base data.
pub const PLACES: usize = 16;
/// Fraction digits for prefix errors, which shrink like `β^-n`.
pub const ERROR_PLACES: usize = 24;

/// An outward-rounded decimal enclosure of `x` with `places` fraction digits.
pub fn bounds(x: &Real, places: usize) -> Result<(String, String)> {
    let width = negabase_core::realnum::pow2_recip(places as u64 * 4 + 8);
    Ok(x.enclose(&width)?.decimal_bounds(places))
}

pub fn interval_bounds(i: &Interval, places: usize) -> (String, String) {
    i.decimal_bounds(places)
}

/// `{"exact": …, "lo": …, "hi": …}`; `exact` only for exactly stored values.
pub fn real_json(x: &Real) -> Result<Value> {
    let (lo, hi) = bounds(x, PLACES)?;
    let mut v = json!({ "lo": lo, "hi": hi });
    if x.is_exact() {
        v["exact"] = Value::String(x.to_string());
    }
    Ok(v)
}

/// Shortest round-trip decimal of the nearest `f64`, for plots and tables.
pub fn approx(x: &Real) -> String {
    format!("{}", x.to_f64())
}

pub fn digits_text(d: &[Digit]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::OptimalToDepth(_) => "OptimalToDepth",
        Status::RefutedAt(_) => "RefutedAt",
    }
}

pub fn verdict_json(
    v: &OptimalityVerdict,
    x_text: &str,
    base_text: &str,
    case: Option<&str>,
    depth: usize,
) -> Value {
    let errors: Vec<Value> = v
        .errors
        .iter()
        .map(|e| {
            let (cl, ch) = interval_bounds(&e.candidate, ERROR_PLACES);
            let (ml, mh) = interval_bounds(&e.minimum, ERROR_PLACES);
            json!({ "n": e.n, "cand_lo": cl, "cand_hi": ch, "min_lo": ml, "min_hi": mh })
        })
        .collect();
    json!({
        "x": x_text,
        "base": base_text,
        "case": case,
        "depth": depth,
        "status": status_name(v.status),
        "refuted_at": v.refuted_at(),
        "witness_prefix": v.witness,
        "candidate_prefix": v.candidate_prefix,
        "errors": errors,
    })
}

pub fn verdict_csv(v: &OptimalityVerdict) -> String {
    let mut out = String::from("n,cand_lo,cand_hi,min_lo,min_hi\n");
    for e in &v.errors {
        let (cl, ch) = interval_bounds(&e.candidate, ERROR_PLACES);
        let (ml, mh) = interval_bounds(&e.minimum, ERROR_PLACES);
        out.push_str(&format!("{},{cl},{ch},{ml},{mh}\n", e.n));
    }
    out
}

pub fn verdict_text(v: &OptimalityVerdict) -> String {
    let mut out = match v.status {
        Status::OptimalToDepth(n) => format!("OptimalToDepth {n}\n"),
        Status::RefutedAt(n) => format!("RefutedAt {n}\n"),
    };
    out.push_str(&format!("candidate: {}\n", digits_text(&v.candidate_prefix)));
    if let Some(w) = &v.witness {
        out.push_str(&format!("witness: {}\n", digits_text(w)));
    }
    out
}

pub fn counterexample_json(ci: &CounterexampleInterval) -> Result<Value> {
    let params = match &ci.params {
        CaseParams::Negative { r, frac } => json!({ "r": real_json(r)?, "frac_beta": real_json(frac)? }),
        CaseParams::Positive { t, i, k, l, r, witness } => json!({
            "t": t,
            "i": i,
            "k": k,
            "L": real_json(l)?,
            "R": real_json(r)?,
            "witness_prefix": witness,
        }),
    };
    Ok(json!({
        "case": ci.case_label.as_str(),
        "lo": real_json(&ci.lo)?,
        "hi": real_json(&ci.hi)?,
        "refutation_depth": ci.refutation_depth(),
        "params": params,
    }))
}

pub fn system_json(sys: &NumerationSystem, base_text: &str) -> Result<Value> {
    Ok(json!({
        "base": base_text,
        "sign": sys.sign().as_i8(),
        "beta": real_json(sys.beta())?,
        "alphabet": sys.alphabet(),
        "l": real_json(sys.l())?,
        "r": real_json(sys.r())?,
    }))
}
