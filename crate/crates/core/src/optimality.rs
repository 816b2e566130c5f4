//! The optimality oracle and the intervals of points without an optimal
//! representation.
//!
//! A representation `x = Σ b_i/γ^i` is optimal when each of its prefixes is
//! at least as close to `x` as the same-length prefix of any other
//! representation. After `n` digits the error is `|y_n|/β^n`, where the
//! remainder `y_k = γ·y_{k−1} − b_k` starts at `y_0 = x`. A prefix extends to
//! a representation exactly when every remainder stays in `J`, so all
//! competitors at depth `n` are found by walking the tree of feasible digits.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::confluent::{detect_confluent, DSTAR_HORIZON};
use crate::error::{Error, Result};
use crate::expand::{dstar_one, expand, locally_optimal_digits, Expansion, Source};
use crate::interval::Interval;
use crate::numsys::{Digit, NumerationSystem};
use crate::realnum::{pow2_recip, Real};
use crate::transforms::{classify_regime, feasible_digits, step_optimal, RegimeTag};

pub use crate::transforms::feasible_digits as feasible;

/// Default cap on oracle nodes.
pub const NODE_BUDGET: u64 = 10_000_000;

/// Enclosure width used when reporting errors.
const REPORT_BITS: u64 = 96;

fn remainder_step(sys: &NumerationSystem, y: &Real, b: Digit) -> Real {
    sys.gamma() * y - Real::from_integer(b)
}

/// Minimal prefix error at one depth, with every prefix attaining it.
#[derive(Clone, Debug)]
pub struct PrefixMinimum {
    pub error: Real,
    pub argmin: Vec<Vec<Digit>>,
    pub nodes: u64,
}

/// Exhaustive depth-first search over all feasible prefixes of length `n`.
/// Digits are tried in descending order.
pub fn min_prefix_error(sys: &NumerationSystem, x: &Real, n: usize, budget: u64) -> Result<PrefixMinimum> {
    if !sys.in_j(x)? {
        return Err(Error::Domain("x lies outside the representable interval".into()));
    }
    let mut best: Option<Real> = None;
    let mut argmin: Vec<Vec<Digit>> = Vec::new();
    let mut nodes = 0u64;
    let mut prefix: Vec<Digit> = Vec::with_capacity(n);
    // Each frame: the remainder at this depth and the digits still to try.
    let mut stack: Vec<(Real, Vec<Digit>)> = vec![(x.clone(), descending(feasible_digits(sys, x)?))];
    if n == 0 {
        return Ok(PrefixMinimum { error: sys.abs(x)?, argmin: vec![Vec::new()], nodes: 0 });
    }
    while let Some((y, todo)) = stack.last_mut() {
        let Some(b) = todo.pop() else {
            stack.pop();
            prefix.pop();
            continue;
        };
        nodes += 1;
        if nodes > budget {
            return Err(Error::Budget { nodes, depth: prefix.len() + 1 });
        }
        let next = remainder_step(sys, y, b);
        prefix.push(b);
        if prefix.len() == n {
            let err = sys.abs(&next)?;
            let ord = match &best {
                None => Ordering::Less,
                Some(e) => sys.compare(&err, e)?,
            };
            match ord {
                Ordering::Less => {
                    best = Some(err);
                    argmin.clear();
                    argmin.push(prefix.clone());
                }
                Ordering::Equal => argmin.push(prefix.clone()),
                Ordering::Greater => {}
            }
            prefix.pop();
        } else {
            let digits = descending(feasible_digits(sys, &next)?);
            stack.push((next, digits));
        }
    }
    let best = best.ok_or_else(|| Error::Domain("no feasible prefix".into()))?;
    Ok(PrefixMinimum { error: &best * &sys.beta().powi(-(n as i32))?, argmin, nodes })
}

/// Stored in pop order, so the largest digit is tried first.
fn descending(mut digits: Vec<Digit>) -> Vec<Digit> {
    digits.sort_unstable();
    digits
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    OptimalToDepth(usize),
    RefutedAt(usize),
}

/// Errors of the candidate prefix and the best prefix at one depth.
#[derive(Clone, Debug)]
pub struct DepthErrors {
    pub n: usize,
    pub candidate: Interval,
    pub minimum: Interval,
}

#[derive(Clone, Debug)]
pub struct OptimalityVerdict {
    pub status: Status,
    /// A prefix beating the candidate at the refutation depth.
    pub witness: Option<Vec<Digit>>,
    pub candidate_prefix: Vec<Digit>,
    pub errors: Vec<DepthErrors>,
    pub nodes: u64,
}

impl OptimalityVerdict {
    pub fn refuted_at(&self) -> Option<usize> {
        match self.status {
            Status::RefutedAt(n) => Some(n),
            Status::OptimalToDepth(_) => None,
        }
    }
}

/// A frontier node: one remainder and one prefix reaching it.
struct Node {
    y: Real,
    prefix: Vec<Digit>,
}

/// Compares the candidate with the best feasible prefix at each depth
/// `1..=n` and stops at the first depth where the candidate is provably
/// worse.
///
/// Prefixes reaching the same remainder have the same future, so the search
/// keeps one node per distinct remainder at each level.
pub fn certify_optimality(
    sys: &NumerationSystem,
    x: &Real,
    candidate: &[Digit],
    n: usize,
    budget: u64,
) -> Result<OptimalityVerdict> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    if candidate.len() < n {
        return Err(Error::Domain("candidate is shorter than the certification depth".into()));
    }
    if !sys.in_j(x)? {
        return Err(Error::Domain("x lies outside the representable interval".into()));
    }
    let width = pow2_recip(REPORT_BITS);
    let mut frontier = vec![Node { y: x.clone(), prefix: Vec::new() }];
    let mut cand_y = x.clone();
    let mut errors = Vec::with_capacity(n);
    let mut nodes = 0u64;
    for depth in 1..=n {
        let b = candidate[depth - 1];
        if !sys.contains_digit(b) {
            return Err(Error::DigitNotInAlphabet(b));
        }
        cand_y = remainder_step(sys, &cand_y, b);
        if !sys.in_j(&cand_y)? {
            return Err(Error::Domain("candidate is not a representation of x".into()));
        }
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for node in &frontier {
            for &d in feasible_digits(sys, &node.y)?.iter().rev() {
                nodes += 1;
                if nodes > budget {
                    return Err(Error::Budget { nodes, depth });
                }
                let mut prefix = node.prefix.clone();
                prefix.push(d);
                next.push(Node { y: remainder_step(sys, &node.y, d), prefix });
            }
        }
        frontier = dedupe(sys, next)?;
        let (best_idx, best_abs) = min_abs(sys, &frontier)?;
        let cand_abs = sys.abs(&cand_y)?;
        let scale = sys.beta().powi(-(depth as i32))?;
        errors.push(DepthErrors {
            n: depth,
            candidate: (&cand_abs * &scale).enclose_with(&width, sys.precision_bits())?,
            minimum: (&best_abs * &scale).enclose_with(&width, sys.precision_bits())?,
        });
        if sys.compare(&cand_abs, &best_abs)? == Ordering::Greater {
            return Ok(OptimalityVerdict {
                status: Status::RefutedAt(depth),
                witness: Some(frontier[best_idx].prefix.clone()),
                candidate_prefix: candidate[..depth].to_vec(),
                errors,
                nodes,
            });
        }
    }
    Ok(OptimalityVerdict {
        status: Status::OptimalToDepth(n),
        witness: None,
        candidate_prefix: candidate[..n].to_vec(),
        errors,
        nodes,
    })
}

fn dedupe(sys: &NumerationSystem, mut nodes: Vec<Node>) -> Result<Vec<Node>> {
    let mut failure = None;
    nodes.sort_by(|a, b| match sys.compare(&a.y, &b.y) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out: Vec<Node> = Vec::with_capacity(nodes.len());
    for node in nodes {
        match out.last() {
            Some(last) if sys.compare(&last.y, &node.y)? == Ordering::Equal => {}
            _ => out.push(node),
        }
    }
    Ok(out)
}

fn min_abs(sys: &NumerationSystem, nodes: &[Node]) -> Result<(usize, Real)> {
    let mut best = (0, sys.abs(&nodes[0].y)?);
    for (i, node) in nodes.iter().enumerate().skip(1) {
        let a = sys.abs(&node.y)?;
        if sys.compare(&a, &best.1)? == Ordering::Less {
            best = (i, a);
        }
    }
    Ok(best)
}

/// The representation built by iterating `T_o`, which is the only possible
/// optimal one unless the orbit meets the exceptional set.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub expansion: Expansion,
    /// At the first exceptional orbit point: its index and the digits that
    /// are both admissible continuations there.
    pub ambiguity: Option<(usize, Vec<Digit>)>,
}

pub fn optimal_candidate(sys: &NumerationSystem, x: &Real, n: usize) -> Result<Candidate> {
    let expansion = expand(sys, x, n, Source::Optimal)?;
    let ambiguity = match expansion.hit_e {
        Some(k) => {
            let y = &expansion.orbit[k];
            let local = locally_optimal_digits(sys, y)?;
            let digits = if local.len() > 1 { local } else { feasible_digits(sys, y)? };
            Some((k, digits))
        }
        None => None,
    };
    Ok(Candidate { expansion, ambiguity })
}

/// Every candidate: the `T_o` digits, plus one variant per alternative
/// digit at the first exceptional point (continued by `T_o`).
pub fn candidate_variants(sys: &NumerationSystem, x: &Real, n: usize) -> Result<Vec<Vec<Digit>>> {
    let cand = optimal_candidate(sys, x, n)?;
    let base = cand.expansion.digits.clone();
    let mut out = vec![base.clone()];
    if let Some((k, digits)) = cand.ambiguity {
        for d in digits {
            if d == base[k] {
                continue;
            }
            let mut v = base[..k].to_vec();
            v.push(d);
            let mut y = remainder_step(sys, &cand.expansion.orbit[k], d);
            while v.len() < n {
                let (b, next) = step_optimal(sys, &y)?;
                v.push(b);
                y = next;
            }
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    NegCase1,
    NegCase2,
    NegCase3,
    PosNonConfluent,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::NegCase1 => "NegCase1",
            CaseLabel::NegCase2 => "NegCase2",
            CaseLabel::NegCase3 => "NegCase3",
            CaseLabel::PosNonConfluent => "PosNonConfluent",
        }
    }
}

#[derive(Clone, Debug)]
pub enum CaseParams {
    Negative {
        r: Real,
        /// `{β} = β − ⌊β⌋`.
        frac: Real,
    },
    Positive {
        /// `t_1 … t_i` from `d*(1)`.
        t: Vec<Digit>,
        i: usize,
        k: usize,
        l: Real,
        r: Real,
        /// Digits of the prefix that beats the greedy one at depth `k + i`.
        witness: Vec<Digit>,
    },
}

/// An open interval of points without an optimal representation.
#[derive(Clone, Debug)]
pub struct CounterexampleInterval {
    pub case_label: CaseLabel,
    pub lo: Real,
    pub hi: Real,
    pub params: CaseParams,
}

impl CounterexampleInterval {
    /// Depth at which every sample is refuted.
    pub fn refutation_depth(&self) -> usize {
        match &self.params {
            CaseParams::Negative { .. } => 2,
            CaseParams::Positive { k, i, .. } => k + i,
        }
    }

    pub fn contains(&self, sys: &NumerationSystem, x: &Real) -> Result<bool> {
        Ok(sys.compare(&self.lo, x)? == Ordering::Less && sys.compare(x, &self.hi)? == Ordering::Less)
    }
}

pub fn counterexample_interval(sys: &NumerationSystem) -> Result<CounterexampleInterval> {
    if !sys.is_canonical()? {
        return Err(Error::Unsupported("counterexample intervals need the canonical alphabet"));
    }
    if sys.beta().is_integer()? {
        return Err(Error::Domain("counterexample intervals are defined for non-integer beta".into()));
    }
    if sys.is_negative() {
        negative_interval(sys)
    } else {
        positive_interval(sys)
    }
}

fn negative_interval(sys: &NumerationSystem) -> Result<CounterexampleInterval> {
    let beta = sys.beta();
    let beta2 = beta * beta;
    let frac = beta - &Real::from_bigint(beta.floor()?);
    let r = sys.r().clone();
    let half_frac = &frac * &Real::ratio(1, 2);
    let (case_label, lo, hi) = if classify_regime(beta)?.tag == RegimeTag::Midpoint {
        // r ≥ 1/2: (−1/(2β), −{β}/(2β²))
        let lo = Real::from_integer(-1).checked_div(&(beta * &Real::from_integer(2)))?;
        let hi = (-&frac).checked_div(&(&beta2 * &Real::from_integer(2)))?;
        (CaseLabel::NegCase1, lo, hi)
    } else if sys.compare(&r, &half_frac)? == Ordering::Greater {
        // {β}/2 < r < 1/2: (−r/β, −{β}/(2β²))
        let lo = (-&r).checked_div(beta)?;
        let hi = (-&frac).checked_div(&(&beta2 * &Real::from_integer(2)))?;
        (CaseLabel::NegCase2, lo, hi)
    } else {
        // r ≤ {β}/2: (−r/β, (r − {β})/β²)
        let lo = (-&r).checked_div(beta)?;
        let hi = (&r - &frac).checked_div(&beta2)?;
        (CaseLabel::NegCase3, lo, hi)
    };
    Ok(CounterexampleInterval { case_label, lo, hi, params: CaseParams::Negative { r, frac } })
}

fn positive_interval(sys: &NumerationSystem) -> Result<CounterexampleInterval> {
    let beta = sys.beta();
    if detect_confluent(beta)?.is_some() {
        return Err(Error::Confluent);
    }
    let dstar = dstar_one(beta, DSTAR_HORIZON)?;
    let known = dstar.take(DSTAR_HORIZON);
    let t1 = known[0];
    // i = min{ j ≥ 2 : t_j < t_1 }, 1-based
    let i = known
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &t)| t < t1)
        .map(|(j, _)| j + 1)
        .ok_or_else(|| Error::Inconclusive("no digit of d*(1) falls below t_1".into()))?;
    let t = known[..i].to_vec();
    // L = Σ_{j<i} t_j/β^j + (t_i + 1)/β^i
    let mut witness_tail = t.clone();
    witness_tail[i - 1] += 1;
    let l = sys.prefix_value(&witness_tail)?;
    let r = Real::one() + beta.powi(-(i as i32))?;
    let mut k = 1usize;
    let mut pow = beta.clone();
    while sys.compare(&r, &pow)? == Ordering::Greater {
        k += 1;
        pow = &pow * beta;
    }
    let lo = l.checked_div(&pow)?;
    let hi = r.checked_div(&pow)?;
    let mut witness = vec![0; k];
    witness.extend_from_slice(&witness_tail);
    Ok(CounterexampleInterval {
        case_label: CaseLabel::PosNonConfluent,
        lo,
        hi,
        params: CaseParams::Positive { t, i, k, l, r, witness },
    })
}

/// What was checked for one sample point.
#[derive(Clone, Debug)]
pub struct SampleReport {
    pub x: Real,
    pub candidate: Vec<Digit>,
    pub verdict: OptimalityVerdict,
    /// Names of the structural checks that failed (empty when all hold).
    pub failed_checks: Vec<&'static str>,
}

impl SampleReport {
    /// Refuted at exactly the depth the construction predicts, with all checks passing.
    pub fn confirms(&self, ci: &CounterexampleInterval) -> bool {
        self.failed_checks.is_empty() && self.verdict.refuted_at() == Some(ci.refutation_depth())
    }
}

/// Runs the checks that explain why `x ∈ I` has no optimal representation.
///
/// Negative bases: the `T_o` digits start `0, 0`; `|x| > |x + {β}/β²|`; and
/// `β²x + {β} ∈ J`, so `x + {β}/β²` is reachable after two digits. Positive
/// bases: the greedy digits are `1` at position `k` and `0` at the next `i`
/// positions. In both cases the candidate must be refuted by the oracle.
pub fn verify_sample(
    sys: &NumerationSystem,
    ci: &CounterexampleInterval,
    x: &Real,
    depth: usize,
    budget: u64,
) -> Result<SampleReport> {
    let need = ci.refutation_depth();
    let depth = depth.max(need);
    let mut failed = Vec::new();
    let candidate = match &ci.params {
        CaseParams::Negative { frac, .. } => {
            let digits = expand(sys, x, depth, Source::Optimal)?.digits;
            if digits[..2] != [0, 0] {
                failed.push("leading digits 0,0");
            }
            let beta2 = sys.beta() * sys.beta();
            let shifted = x + &frac.checked_div(&beta2)?;
            if sys.compare(&sys.abs(x)?, &sys.abs(&shifted)?)? != Ordering::Greater {
                failed.push("|x| > |x + {beta}/beta^2|");
            }
            if !sys.in_j(&(&beta2 * &shifted))? {
                failed.push("x + {beta}/beta^2 in J/beta^2");
            }
            digits
        }
        CaseParams::Positive { i, k, .. } => {
            let digits = expand(sys, x, depth, Source::Greedy)?.digits;
            if digits[k - 1] != 1 || digits[*k..k + i].iter().any(|&d| d != 0) {
                failed.push("greedy digits 1 then i zeros");
            }
            digits
        }
    };
    let verdict = certify_optimality(sys, x, &candidate, depth, budget)?;
    Ok(SampleReport { x: x.clone(), candidate, verdict, failed_checks: failed })
}

/// A rational point of the open interval `(lo, hi)`, uniform over its
/// middle 98% at resolution `2^-32`, drawn from stream `index` of `seed`.
pub fn sample_point(lo: &Real, hi: &Real, seed: u64, index: u64) -> Result<Real> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let u = BigRational::new(BigInt::from(rng.next_u32()), BigInt::from(1u64 << 32));
    // Rational bounds just inside the true endpoints.
    let width = pow2_recip(64);
    let a = lo.enclose(&width)?.hi;
    let b = hi.enclose(&width)?.lo;
    if a >= b {
        return Err(Error::Domain("interval too narrow to sample".into()));
    }
    let t = BigRational::new(1.into(), 100.into()) + BigRational::new(98.into(), 100.into()) * u;
    Ok(Real::from_rational(&a + (&b - &a) * t))
}

/// Aggregate of [`verify_sample`] over seeded samples.
#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub samples: usize,
    pub refuted: usize,
    /// `(depth, count)`, ascending by depth.
    pub depth_histogram: Vec<(usize, usize)>,
    /// Indices of samples that were not confirmed.
    pub failures: Vec<usize>,
}

impl ScanReport {
    pub fn from_reports(ci: &CounterexampleInterval, reports: &[SampleReport]) -> ScanReport {
        let mut out = ScanReport { samples: reports.len(), ..ScanReport::default() };
        for (idx, rep) in reports.iter().enumerate() {
            if let Some(n) = rep.verdict.refuted_at() {
                out.refuted += 1;
                match out.depth_histogram.binary_search_by_key(&n, |e| e.0) {
                    Ok(pos) => out.depth_histogram[pos].1 += 1,
                    Err(pos) => out.depth_histogram.insert(pos, (n, 1)),
                }
            }
            if !rep.confirms(ci) {
                out.failures.push(idx);
            }
        }
        out
    }
}

/// Samples `samples` points of the interval and verifies each.
pub fn verify_no_optimal_in_interval(
    sys: &NumerationSystem,
    ci: &CounterexampleInterval,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<(ScanReport, Vec<SampleReport>)> {
    let mut reports = Vec::with_capacity(samples);
    for idx in 0..samples {
        let x = sample_point(&ci.lo, &ci.hi, seed, idx as u64)?;
        reports.push(verify_sample(sys, ci, &x, depth, NODE_BUDGET)?);
    }
    Ok((ScanReport::from_reports(ci, &reports), reports))
}
