//! The greedy map, the optimal map `T_o(x) = γx − D(x)` and the shape of
//! `T_o` for negative bases.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numsys::{Digit, NumerationSystem};
use crate::realnum::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// `r ≥ 1/2`: cut points of `T_o` sit where two digits are equally close.
    Midpoint,
    /// `r < 1/2`: cut points sit at the edges of the two-digit windows.
    Standard,
}

#[derive(Clone, Debug)]
pub struct Regime {
    pub tag: RegimeTag,
    /// `r = ⌊β⌋/(β² − 1)`.
    pub r: Real,
    /// How `r` compares with `1/2`.
    pub r_vs_half: Ordering,
}

/// Splits non-integer `β` by whether `r = ⌊β⌋/(β² − 1)` reaches `1/2`,
/// which happens exactly for `β ∈ (1, √3] ∪ (2, √5]`.
pub fn classify_regime(beta: &Real) -> Result<Regime> {
    if beta.compare(&Real::one())? != Ordering::Greater {
        return Err(Error::InvalidBase("beta must exceed 1".into()));
    }
    if beta.is_integer()? {
        return Err(Error::Domain("regimes are defined for non-integer beta".into()));
    }
    let m = Real::from_bigint(beta.floor()?);
    let r = m.checked_div(&(&(beta * beta) - &Real::one()))?;
    let r_vs_half = r.compare(&Real::ratio(1, 2))?;
    let tag = if r_vs_half == Ordering::Less { RegimeTag::Standard } else { RegimeTag::Midpoint };
    Ok(Regime { tag, r, r_vs_half })
}

fn clamp_i64(v: num_bigint::BigInt) -> i64 {
    v.to_i64().unwrap_or(if v.sign() == num_bigint::Sign::Minus { i64::MIN } else { i64::MAX })
}

/// All digits `b` with `γy − b ∈ J`, ascending.
pub fn feasible_digits(sys: &NumerationSystem, y: &Real) -> Result<Vec<Digit>> {
    let bits = sys.precision_bits();
    let gy = sys.gamma() * y;
    // γy − r ≤ b ≤ γy − l
    let hi = clamp_i64((&gy - sys.l()).floor_with(bits)?);
    let lo_floor = (sys.r() - &gy).floor_with(bits)?;
    let lo = clamp_i64(-lo_floor);
    let a = sys.alphabet();
    let start = a.partition_point(|&d| d < lo);
    Ok(a[start..].iter().copied().take_while(|&d| d <= hi).collect())
}

/// The digit `D(x)`: feasible, and closest to `γx` among feasible digits.
///
/// Ties are broken so that `T_o` is right-continuous: the smaller digit
/// for a negative base, the larger one for a positive base.
pub fn assign_digit(sys: &NumerationSystem, x: &Real) -> Result<Digit> {
    if !sys.in_j(x)? {
        return Err(Error::Domain("x lies outside the representable interval".into()));
    }
    let feasible = feasible_digits(sys, x)?;
    choose_digit(sys, x, &feasible)
}

pub(crate) fn choose_digit(sys: &NumerationSystem, x: &Real, feasible: &[Digit]) -> Result<Digit> {
    let (&first, rest) = feasible
        .split_first()
        .ok_or_else(|| Error::Domain("no feasible digit".into()))?;
    if rest.is_empty() {
        return Ok(first);
    }
    let gx = sys.gamma() * x;
    let mut best = first;
    let mut best_err = sys.abs(&(&gx - &Real::from_integer(first)))?;
    for &b in rest {
        let err = sys.abs(&(&gx - &Real::from_integer(b)))?;
        match sys.compare(&err, &best_err)? {
            Ordering::Less => {
                best = b;
                best_err = err;
            }
            Ordering::Equal if !sys.is_negative() => {
                best = b;
                best_err = err;
            }
            _ => {}
        }
    }
    Ok(best)
}

/// One step of `T(x) = βx − ⌊βx⌋` on `[0, 1)`.
pub fn step_greedy(beta: &Real, x: &Real) -> Result<(Digit, Real)> {
    if x.sign()? == Ordering::Less || x.compare(&Real::one())? != Ordering::Less {
        return Err(Error::Domain("greedy map is defined on [0, 1)".into()));
    }
    let bx = beta * x;
    let d = bx.floor_i64()?;
    let next = &bx - &Real::from_integer(d);
    Ok((d, next))
}

/// One step of `T_o`: returns `D(x)` and `γx − D(x)`.
pub fn step_optimal(sys: &NumerationSystem, x: &Real) -> Result<(Digit, Real)> {
    let d = assign_digit(sys, x)?;
    Ok((d, sys.gamma() * x - Real::from_integer(d)))
}

/// A piece of `T_o`: on `lo..hi` the map is `x ↦ γx − digit`.
#[derive(Clone, Debug)]
pub struct Branch {
    pub lo: Real,
    pub hi: Real,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub digit: Digit,
}

impl Branch {
    pub fn contains(&self, sys: &NumerationSystem, x: &Real) -> Result<bool> {
        let lo = sys.compare(&self.lo, x)?;
        let hi = sys.compare(x, &self.hi)?;
        let above = lo == Ordering::Less || (self.lo_closed && lo == Ordering::Equal);
        let below = hi == Ordering::Less || (self.hi_closed && hi == Ordering::Equal);
        Ok(above && below)
    }
}

/// The closed-form description of `T_o` on `J` for a negative base, with
/// branches listed by increasing `x`.
#[derive(Clone, Debug)]
pub struct BranchMap {
    pub regime: Regime,
    pub branches: Vec<Branch>,
}

impl BranchMap {
    pub fn branch_at(&self, sys: &NumerationSystem, x: &Real) -> Result<&Branch> {
        for b in &self.branches {
            if b.contains(sys, x)? {
                return Ok(b);
            }
        }
        Err(Error::Domain("x lies outside the representable interval".into()))
    }

    pub fn digit_at(&self, sys: &NumerationSystem, x: &Real) -> Result<Digit> {
        Ok(self.branch_at(sys, x)?.digit)
    }

    pub fn apply(&self, sys: &NumerationSystem, x: &Real) -> Result<Real> {
        let d = self.digit_at(sys, x)?;
        Ok(sys.gamma() * x - Real::from_integer(d))
    }

    /// Interior cut points, ascending.
    pub fn cuts(&self) -> Vec<Real> {
        self.branches[1..].iter().map(|b| b.lo.clone()).collect()
    }
}

fn require_negative_canonical(sys: &NumerationSystem) -> Result<Regime> {
    if !sys.is_negative() {
        return Err(Error::Unsupported("branch maps are built for negative bases"));
    }
    if !sys.is_canonical()? {
        return Err(Error::Unsupported("branch maps need the canonical alphabet"));
    }
    classify_regime(sys.beta())
}

/// `T_o` as explicit branches. In the standard regime digit `a ≥ 1` owns
/// `[−(a + r)/β, −(a − 1 + r)/β)` and digit 0 owns `[−r/β, r]`; in the
/// midpoint regime the cuts are at `−(a + 1/2)/β`.
pub fn branch_map(sys: &NumerationSystem) -> Result<BranchMap> {
    let regime = require_negative_canonical(sys)?;
    let beta = sys.beta();
    let m = sys.max_digit();
    let offset = match regime.tag {
        RegimeTag::Standard => regime.r.clone(),
        RegimeTag::Midpoint => Real::ratio(1, 2),
    };
    // cut for the step from digit a+1 to digit a
    let cut = |a: Digit| -> Result<Real> { (-(Real::from_integer(a) + &offset)).checked_div(beta) };
    let mut branches = Vec::with_capacity(m as usize + 1);
    let mut lo = sys.l().clone();
    for a in (1..=m).rev() {
        let hi = cut(a - 1)?;
        branches.push(Branch { lo, hi: hi.clone(), lo_closed: true, hi_closed: false, digit: a });
        lo = hi;
    }
    branches.push(Branch { lo, hi: sys.r().clone(), lo_closed: true, hi_closed: true, digit: 0 });
    Ok(BranchMap { regime, branches })
}

/// The discontinuities of `T_o`, ascending; there are `⌊β⌋` of them.
pub fn discontinuity_set(sys: &NumerationSystem) -> Result<Vec<Real>> {
    Ok(branch_map(sys)?.cuts())
}

/// `(lim_{x→δ−} T_o(x), lim_{x→δ+} T_o(x))` at a cut point `δ`.
pub fn one_sided_limits(sys: &NumerationSystem, delta: &Real) -> Result<(Real, Real)> {
    let map = branch_map(sys)?;
    for c in map.cuts() {
        if sys.compare(&c, delta)? == Ordering::Equal {
            let r = &map.regime.r;
            return Ok(match map.regime.tag {
                RegimeTag::Standard => (r - &Real::one(), r.clone()),
                RegimeTag::Midpoint => (Real::ratio(-1, 2), Real::ratio(1, 2)),
            });
        }
    }
    Err(Error::NotADiscontinuity)
}

/// The closed set of values `γx` for which both `a` and `a + 1` are
/// feasible digits: `[l + a + 1, r + a]`.
pub fn ambiguity_window(sys: &NumerationSystem, a: Digit) -> Result<(Real, Real)> {
    if !sys.contains_digit(a) || !sys.contains_digit(a + 1) {
        return Err(Error::DigitNotInAlphabet(if sys.contains_digit(a) { a + 1 } else { a }));
    }
    Ok((sys.l() + &Real::from_integer(a + 1), sys.r() + &Real::from_integer(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sys(base: &str) -> NumerationSystem {
        NumerationSystem::parse_canonical(base).unwrap()
    }

    fn r(s: &str) -> Real {
        Real::parse(s).unwrap()
    }

    fn eq(a: &Real, b: &Real) -> bool {
        a.compare(b).unwrap() == Ordering::Equal
    }

    const TAU: &str = "(1+sqrt(5))/2";
    const NEG_TAU: &str = "-(1+sqrt(5))/2";
    const NEG_TAU2: &str = "-(3+sqrt(5))/2";

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(&r(TAU)).unwrap().tag, RegimeTag::Midpoint);
        assert_eq!(classify_regime(&r("(3+sqrt(5))/2")).unwrap().tag, RegimeTag::Standard);
        let s3 = classify_regime(&r("sqrt(3)")).unwrap();
        assert_eq!(s3.tag, RegimeTag::Midpoint);
        assert_eq!(s3.r_vs_half, Ordering::Equal);
        assert!(classify_regime(&r("2")).is_err());
    }

    #[test]
    fn digit_examples() {
        let s = sys(NEG_TAU);
        assert_eq!(assign_digit(&s, &r("-1/2")).unwrap(), 1);
        assert_eq!(assign_digit(&s, &r("-1/(1+sqrt(5))")).unwrap(), 0);
        assert_eq!(assign_digit(&s, &r("-0.35")).unwrap(), 1);
        assert!(matches!(assign_digit(&s, &r("0.7")), Err(Error::Domain(_))));
    }

    #[test]
    fn step_examples() {
        let tau = r(TAU);
        let (d, y) = step_greedy(&tau, &r("1/2")).unwrap();
        assert_eq!(d, 0);
        assert!(eq(&y, &r("(1+sqrt(5))/4")));
        let (d, y) = step_greedy(&tau, &y).unwrap();
        assert_eq!(d, 1);
        assert!((y.to_f64() - 0.309_017).abs() < 1e-6);
        let (d, y) = step_greedy(&tau, &Real::zero()).unwrap();
        assert_eq!((d, y.sign().unwrap()), (0, Ordering::Equal));

        let s = sys(NEG_TAU);
        let (d, y) = step_optimal(&s, &r("-1/2")).unwrap();
        assert_eq!(d, 1);
        assert!(eq(&y, &r("(1+sqrt(5))/4 - 1")));
        let (d, y) = step_optimal(&s, s.r()).unwrap();
        assert_eq!(d, 0);
        assert!(eq(&y, &r("-1")));
        let s2 = sys(NEG_TAU2);
        let rr = s2.r().clone();
        let left = (-&rr).checked_div(s2.beta()).unwrap();
        assert_eq!(step_optimal(&s2, &left).unwrap().0, 0);
        assert_eq!(step_optimal(&s2, &rr).unwrap().0, 0);
    }

    #[test]
    fn feasible_examples() {
        let s = sys(NEG_TAU);
        assert_eq!(feasible_digits(&s, &r("0.3")).unwrap(), vec![0]);
        assert_eq!(feasible_digits(&s, &r("-1/4")).unwrap(), vec![0, 1]);
        assert_eq!(feasible_digits(&s, s.r()).unwrap(), vec![0]);
    }

    #[test]
    fn branch_maps() {
        let s = sys(NEG_TAU);
        let map = branch_map(&s).unwrap();
        assert_eq!(map.branches.len(), 2);
        let cuts = map.cuts();
        assert!(eq(&cuts[0], &r("-1/(1+sqrt(5))")));

        let s2 = sys(NEG_TAU2);
        let cuts = discontinuity_set(&s2).unwrap();
        let b = s2.beta();
        let rr = s2.r();
        assert_eq!(cuts.len(), 2);
        assert!(eq(&cuts[0], &(-(rr + &Real::one())).checked_div(b).unwrap()));
        assert!(eq(&cuts[1], &(-rr).checked_div(b).unwrap()));
        assert!(eq(&map.branches[0].lo, s.l()));

        let s22 = sys("-2.2");
        let map = branch_map(&s22).unwrap();
        assert_eq!(map.regime.tag, RegimeTag::Midpoint);
        assert_eq!(map.branches.iter().map(|b| b.digit).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert!(eq(&map.cuts()[0], &r("-3/4.4")));

        assert_eq!(discontinuity_set(&sys("-2.5")).unwrap().len(), 2);
        assert!(branch_map(&sys(TAU)).is_err());
    }

    #[test]
    fn limits() {
        let s = sys(NEG_TAU);
        let d = &discontinuity_set(&s).unwrap()[0];
        let (lo, hi) = one_sided_limits(&s, d).unwrap();
        assert!(eq(&lo, &r("-1/2")) && eq(&hi, &r("1/2")));
        let s2 = sys(NEG_TAU2);
        let d = &discontinuity_set(&s2).unwrap()[1];
        let (lo, hi) = one_sided_limits(&s2, d).unwrap();
        assert!(eq(&lo, &(s2.r() - &Real::one())) && eq(&hi, s2.r()));
        let s39 = sys("-3.9");
        for d in discontinuity_set(&s39).unwrap() {
            let (_, hi) = one_sided_limits(&s39, &d).unwrap();
            assert!(eq(&hi, &r("3/14.21")));
        }
        assert_eq!(one_sided_limits(&s, &Real::zero()).unwrap_err(), Error::NotADiscontinuity);
    }

    #[test]
    fn windows() {
        let s = sys(NEG_TAU);
        let (lo, hi) = ambiguity_window(&s, 0).unwrap();
        assert!(eq(&lo, &Real::zero()) && eq(&hi, s.r()));
        assert!(ambiguity_window(&s, 1).is_err());
        let s25 = sys("-2.5");
        let (lo, _) = ambiguity_window(&s25, 0).unwrap();
        assert!(eq(&lo, &r("1 - 5/5.25")));
    }

    #[test]
    fn right_continuity_at_cuts() {
        for base in [NEG_TAU, NEG_TAU2, "-2.2", "-2.5", "-3.9", "-sqrt(3)", "-sqrt(5)"] {
            let s = sys(base);
            for d in discontinuity_set(&s).unwrap() {
                let eps = r("1e-9");
                let at = assign_digit(&s, &d).unwrap();
                assert_eq!(at, assign_digit(&s, &(&d + &eps)).unwrap(), "{base}");
                assert_eq!(at + 1, assign_digit(&s, &(&d - &eps)).unwrap(), "{base}");
            }
        }
    }

    #[test]
    fn positive_optimal_is_greedy() {
        let s = sys("9/5");
        for k in 0..50 {
            let x = Real::ratio(k, 50);
            let (d1, y1) = step_greedy(s.beta(), &x).unwrap();
            let (d2, y2) = step_optimal(&s, &x).unwrap();
            assert_eq!(d1, d2);
            assert!(eq(&y1, &y2));
        }
    }
}
