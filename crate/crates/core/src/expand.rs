//! Digit expansions from iterating a transformation, the quasi-greedy
//! expansion of 1, Parry admissibility and orbits.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numsys::{lex_compare, Digit, DigitString, NumerationSystem, Tail};
use crate::realnum::Real;
use crate::transforms::{discontinuity_set, feasible_digits, step_greedy, step_optimal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Greedy,
    Optimal,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub source: Source,
    /// The `n` computed digits.
    pub digits: Vec<Digit>,
    /// The whole expansion when the orbit was seen to repeat, otherwise the
    /// computed digits marked as truncated.
    pub string: DigitString,
    /// `x, T(x), …, T^n(x)`.
    pub orbit: Vec<Real>,
    /// First `k < n` with `T^k(x)` in the exceptional set.
    pub hit_e: Option<usize>,
}

/// Membership test for the exceptional set of `T_o`.
///
/// For negative canonical systems these are the discontinuities of `T_o`.
/// Elsewhere no closed form is available and a point counts as exceptional
/// when two feasible digits are equally close to `γx`.
pub(crate) struct ExceptionalSet {
    points: Option<Vec<Real>>,
}

impl ExceptionalSet {
    pub(crate) fn new(sys: &NumerationSystem) -> Result<Self> {
        let closed_form = sys.is_negative() && sys.is_canonical()? && !sys.beta().is_integer()?;
        Ok(ExceptionalSet { points: if closed_form { Some(discontinuity_set(sys)?) } else { None } })
    }

    pub(crate) fn contains(&self, sys: &NumerationSystem, x: &Real) -> Result<bool> {
        match &self.points {
            Some(points) => {
                for p in points {
                    if sys.compare(p, x)? == Ordering::Equal {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            None => Ok(locally_optimal_digits(sys, x)?.len() > 1),
        }
    }
}

/// The feasible digits that minimize `|γx − b|`; two of them only at a tie.
pub fn locally_optimal_digits(sys: &NumerationSystem, x: &Real) -> Result<Vec<Digit>> {
    let gx = sys.gamma() * x;
    let mut best: Vec<Digit> = Vec::new();
    let mut best_err: Option<Real> = None;
    for b in feasible_digits(sys, x)? {
        let err = sys.abs(&(&gx - &Real::from_integer(b)))?;
        let ord = match &best_err {
            None => Ordering::Less,
            Some(e) => sys.compare(&err, e)?,
        };
        match ord {
            Ordering::Less => {
                best.clear();
                best.push(b);
                best_err = Some(err);
            }
            Ordering::Equal => best.push(b),
            Ordering::Greater => {}
        }
    }
    Ok(best)
}

/// Index of an earlier orbit point structurally equal to `y`.
fn find_repeat(orbit: &[Real], y: &Real) -> Option<usize> {
    orbit.iter().position(|o| o.same_exact(y))
}

/// `n` digits of the greedy (`T(x) = βx − ⌊βx⌋`, positive bases, `x ∈ [0, 1)`)
/// or optimal (`T_o`, any base, `x ∈ J`) expansion of `x`.
pub fn expand(sys: &NumerationSystem, x: &Real, n: usize, source: Source) -> Result<Expansion> {
    if n == 0 {
        return Err(Error::Domain("at least one digit is required".into()));
    }
    let exceptional = match source {
        Source::Greedy => {
            if sys.is_negative() {
                return Err(Error::Unsupported("the greedy map is defined for positive bases"));
            }
            None
        }
        Source::Optimal => {
            if !sys.in_j(x)? {
                return Err(Error::Domain("x lies outside the representable interval".into()));
            }
            Some(ExceptionalSet::new(sys)?)
        }
    };
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(x.clone());
    let mut digits = Vec::with_capacity(n);
    let mut hit_e = None;
    let mut period: Option<(usize, usize)> = None;
    for k in 0..n {
        let y = &orbit[k];
        if hit_e.is_none() {
            if let Some(e) = &exceptional {
                if e.contains(sys, y)? {
                    hit_e = Some(k);
                }
            }
        }
        let (d, next) = match source {
            Source::Greedy => step_greedy(sys.beta(), y)?,
            Source::Optimal => step_optimal(sys, y)?,
        };
        digits.push(d);
        if period.is_none() {
            if let Some(i) = find_repeat(&orbit, &next) {
                // T^{k+1}(x) = T^i(x): digits i..=k repeat forever.
                period = Some((i, k + 1));
            }
        }
        orbit.push(next);
    }
    let string = match period {
        Some((i, j)) => DigitString::periodic(digits[..i].to_vec(), digits[i..j].to_vec()),
        None => DigitString::truncated(digits.clone()),
    };
    Ok(Expansion { source, digits, string, orbit, hit_e })
}

/// The quasi-greedy expansion `d*(1)`, the limit of greedy expansions of
/// `x → 1⁻`.
///
/// A finite greedy expansion `t_1…t_k` of 1 yields `(t_1…t_{k−1}(t_k − 1))^ω`.
/// An infinite one is returned periodic when its remainders repeat exactly,
/// and as an `n`-digit truncated prefix otherwise.
pub fn dstar_one(beta: &Real, n: usize) -> Result<DigitString> {
    if beta.compare(&Real::one())? != Ordering::Greater {
        return Err(Error::InvalidBase("beta must exceed 1".into()));
    }
    let n = n.max(1);
    let mut digits: Vec<Digit> = Vec::new();
    let mut rems: Vec<Real> = Vec::new();
    let mut y = Real::one();
    for _ in 0..n {
        let by = beta * &y;
        let d = by.floor_i64()?;
        let next = &by - &Real::from_integer(d);
        digits.push(d);
        if next.is_zero()? {
            let last = digits.len() - 1;
            digits[last] -= 1;
            return Ok(DigitString::periodic(Vec::new(), digits));
        }
        if let Some(i) = find_repeat(&rems, &next) {
            // rems[i] was the remainder after digit i+1
            return Ok(DigitString::periodic(digits[..=i].to_vec(), digits[i + 1..].to_vec()));
        }
        rems.push(next.clone());
        y = next;
    }
    Ok(DigitString::truncated(digits))
}

/// Order of a known suffix `u` against `d*(1)`, which may be truncated.
fn compare_to_dstar(u: &DigitString, dstar: &DigitString) -> Result<Ordering> {
    if let Some(o) = lex_compare(u, dstar) {
        return Ok(o);
    }
    for i in 0..dstar.prefix().len() {
        if i >= u.prefix().len() && *u.tail() == Tail::Zero {
            // d*(1) is never eventually zero
            return Ok(Ordering::Less);
        }
        let a = u.digit(i).expect("known string");
        let b = dstar.digit(i).expect("within prefix");
        if a != b {
            return Ok(a.cmp(&b));
        }
    }
    if dstar.prefix().len() >= u.prefix().len() && *u.tail() == Tail::Zero {
        return Ok(Ordering::Less);
    }
    Err(Error::Undecidable(format!(
        "suffix agrees with all {} known digits of d*(1)",
        dstar.prefix().len()
    )))
}

/// Parry's condition: every suffix of `s` is lexicographically below `d*(1)`.
///
/// A truncated `s` is judged by its known digits followed by zeros.
pub fn is_admissible(s: &DigitString, dstar: &DigitString) -> Result<bool> {
    let s = if s.is_truncated() { DigitString::finite(s.prefix().to_vec()) } else { s.clone() };
    for i in 0..=s.known_len() {
        if compare_to_dstar(&s.suffix(i), dstar)? != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Orbit {
    /// `T_o(x), …, T_o^n(x)`.
    pub iterates: Vec<Real>,
    /// Smallest index into `iterates` lying in the target interval.
    pub first_entry: Option<usize>,
}

/// `n` iterates of `T_o`, with the first visit to the open interval `target`.
pub fn orbit(sys: &NumerationSystem, x: &Real, n: usize, target: Option<(&Real, &Real)>) -> Result<Orbit> {
    if !sys.in_j(x)? {
        return Err(Error::Domain("x lies outside the representable interval".into()));
    }
    let mut iterates = Vec::with_capacity(n);
    let mut first_entry = None;
    let mut y = x.clone();
    for k in 0..n {
        y = step_optimal(sys, &y)?.1;
        if first_entry.is_none() {
            if let Some((lo, hi)) = target {
                if sys.compare(lo, &y)? == Ordering::Less && sys.compare(&y, hi)? == Ordering::Less {
                    first_entry = Some(k);
                }
            }
        }
        iterates.push(y.clone());
    }
    Ok(Orbit { iterates, first_entry })
}

/// Iterate `T_o` until the orbit enters the open interval `(lo, hi)`;
/// returns the number of steps `k ≥ 1` with `T_o^k(x)` inside, if any within `max_steps`.
pub fn entry_time(sys: &NumerationSystem, x: &Real, lo: &Real, hi: &Real, max_steps: usize) -> Result<Option<usize>> {
    let mut y = x.clone();
    for k in 1..=max_steps {
        y = step_optimal(sys, &y)?.1;
        if sys.compare(lo, &y)? == Ordering::Less && sys.compare(&y, hi)? == Ordering::Less {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
