//! Confluent bases and normalization of finite strings by carrying.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expand::dstar_one;
use crate::numsys::{Digit, DigitString, Tail};
use crate::poly::Poly;
use crate::realnum::Real;

/// How many digits of `d*(1)` are inspected before giving up on a period.
pub const DSTAR_HORIZON: usize = 64;

/// A confluent base: `d*(1) = (m^d p)^ω` with `0 ≤ p < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConfluentParams {
    pub m: Digit,
    pub p: Digit,
    pub d: usize,
}

impl ConfluentParams {
    pub fn new(m: Digit, p: Digit, d: usize) -> Result<Self> {
        if m < 1 || p < 0 || p >= m || d < 1 {
            return Err(Error::Domain("need m ≥ 1, 0 ≤ p < m and d ≥ 1".into()));
        }
        Ok(ConfluentParams { m, p, d })
    }

    /// `x^{d+1} − m·x^d − … − m·x − (p + 1)`.
    pub fn polynomial(&self) -> Poly {
        let mut c = vec![-(self.p + 1)];
        c.extend(core::iter::repeat_n(-self.m, self.d));
        c.push(1);
        Poly::from_ints(&c)
    }

    pub fn dstar(&self) -> DigitString {
        let mut period = vec![self.m; self.d];
        period.push(self.p);
        DigitString::periodic(Vec::new(), period)
    }
}

/// Recognizes `d*(1) = (m^d p)^ω`.
///
/// Returns `None` when `d*(1)` has another shape. A prefix of `d*(1)` that
/// never drops below its first digit cannot be classified and is reported as
/// inconclusive.
pub fn detect_confluent(beta: &Real) -> Result<Option<ConfluentParams>> {
    let dstar = dstar_one(beta, DSTAR_HORIZON)?;
    match dstar.tail() {
        Tail::Periodic(period) if dstar.prefix().is_empty() => {
            let m = period[0];
            let (last, head) = period.split_last().expect("nonempty period");
            if !head.iter().all(|&t| t == m) || *last >= m || period.len() < 2 {
                return Ok(None);
            }
            let params = ConfluentParams::new(m, *last, head.len())?;
            let value = params.polynomial().eval_real(beta);
            if value.compare(&Real::zero())? != Ordering::Equal {
                return Err(Error::Inconclusive("d*(1) has confluent shape but beta is not a root".into()));
            }
            Ok(Some(params))
        }
        Tail::Truncated => {
            let t = dstar.prefix();
            if t.iter().any(|&x| x < t[0]) {
                // A confluent base has a finite greedy expansion of 1 of
                // length d + 1, which would have been found already.
                Ok(None)
            } else {
                Err(Error::Inconclusive("no period found in d*(1)".into()))
            }
        }
        _ => Ok(None),
    }
}

/// Upper bound on rewrite steps in [`frougny_normalize`].
pub const REWRITE_BUDGET: usize = 1_000_000;

/// Rewrites `b m^d a → (b+1) 0^d (a−p−1)` (for `b < m`, `a > p`) at the
/// leftmost occurrence until none is left. The result is the greedy string
/// of the same value and length.
pub fn frougny_normalize(digits: &[Digit], params: &ConfluentParams) -> Result<Vec<Digit>> {
    let ConfluentParams { m, p, d } = *params;
    if let Some(&bad) = digits.iter().find(|&&x| x < 0 || x > m) {
        return Err(Error::DigitNotInAlphabet(bad));
    }
    let mut s = digits.to_vec();
    let mut steps = 0usize;
    let mut from = 0usize;
    while let Some(i) = find_factor(&s, m, p, d, from) {
        if i == 0 {
            // the string starts with m^d a, a > p: its value is at least 1
            return Err(Error::ValueOutOfRange);
        }
        steps += 1;
        if steps > REWRITE_BUDGET {
            return Err(Error::RewriteBudget { steps });
        }
        s[i - 1] += 1;
        for x in &mut s[i..i + d] {
            *x = 0;
        }
        s[i + d] -= p + 1;
        // Only the incremented digit can start a new factor to the left.
        from = (i - 1).saturating_sub(d);
    }
    Ok(s)
}

/// Start of the leftmost `m^d a` with `a > p` at index `≥ from`.
fn find_factor(s: &[Digit], m: Digit, p: Digit, d: usize, from: usize) -> Option<usize> {
    if s.len() < d + 1 {
        return None;
    }
    (from..s.len() - d).find(|&i| s[i..i + d].iter().all(|&x| x == m) && s[i + d] > p)
}

impl Poly {
    /// `Σ c_i β^i` in the arithmetic of [`Real`].
    pub fn eval_real(&self, x: &Real) -> Real {
        self.coeffs()
            .iter()
            .rev()
            .fold(Real::zero(), |acc, c: &BigRational| &(&acc * x) + &Real::from_rational(c.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::{evaluate, NumerationSystem};

    fn r(s: &str) -> Real {
        Real::parse(s).unwrap()
    }

    #[test]
    fn detection() {
        assert_eq!(detect_confluent(&r("(1+sqrt(5))/2")).unwrap(), Some(ConfluentParams { m: 1, p: 0, d: 1 }));
        assert_eq!(detect_confluent(&r("1+sqrt(2)")).unwrap(), Some(ConfluentParams { m: 2, p: 0, d: 1 }));
        assert_eq!(detect_confluent(&r("9/5")).unwrap(), None);
        // tribonacci: d*(1) = (1,1,0)^ω, so m = 1, d = 2, p = 0
        let trib = r("root(x^3-x^2-x-1, [1.8, 1.9])");
        assert_eq!(detect_confluent(&trib).unwrap(), Some(ConfluentParams { m: 1, p: 0, d: 2 }));
        // β² = 3β + 1: d(1) = 3,1 so d*(1) = (3,0)^ω
        let b = r("(3+sqrt(13))/2");
        assert_eq!(detect_confluent(&b).unwrap(), Some(ConfluentParams { m: 3, p: 0, d: 1 }));
        // β² = 2β + 2 has d*(1) = (2,1)^ω
        let b = r("1+sqrt(3)");
        assert_eq!(detect_confluent(&b).unwrap(), Some(ConfluentParams { m: 2, p: 1, d: 1 }));
    }

    #[test]
    fn polynomial_shape() {
        let p = ConfluentParams::new(2, 1, 3).unwrap();
        assert_eq!(p.polynomial(), Poly::from_ints(&[-2, -2, -2, -2, 1]));
        assert!(ConfluentParams::new(1, 1, 1).is_err());
    }

    #[test]
    fn rewriting_examples() {
        let tau = ConfluentParams { m: 1, p: 0, d: 1 };
        assert_eq!(frougny_normalize(&[0, 1, 1], &tau).unwrap(), vec![1, 0, 0]);
        assert_eq!(frougny_normalize(&[0, 1, 0, 1], &tau).unwrap(), vec![0, 1, 0, 1]);
        let silver = ConfluentParams { m: 2, p: 0, d: 1 };
        assert_eq!(frougny_normalize(&[0, 2, 1], &silver).unwrap(), vec![1, 0, 0]);
        assert_eq!(frougny_normalize(&[1, 1], &tau).unwrap_err(), Error::ValueOutOfRange);
        assert_eq!(frougny_normalize(&[0, 2], &tau).unwrap_err(), Error::DigitNotInAlphabet(2));
        // carries ripple leftwards
        assert_eq!(frougny_normalize(&[0, 1, 0, 1, 1], &tau).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn rewriting_preserves_value() {
        let sys = NumerationSystem::parse_canonical("(1+sqrt(5))/2").unwrap();
        let tau = ConfluentParams { m: 1, p: 0, d: 1 };
        let input = vec![0, 1, 1, 0, 1, 1, 1, 0, 1];
        let out = frougny_normalize(&input, &tau).unwrap();
        let a = evaluate(&sys, &DigitString::finite(input), 0).unwrap().value;
        let b = evaluate(&sys, &DigitString::finite(out), 0).unwrap().value;
        assert_eq!(a.compare(&b).unwrap(), Ordering::Equal);
    }
}
