//! Bases, alphabets, the representable interval and digit strings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::realnum::{Real, DEFAULT_PRECISION_BITS};

pub type Digit = i64;

/// Sign of the base `γ = ±β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSign {
    Positive,
    Negative,
}

impl BaseSign {
    pub fn as_i8(self) -> i8 {
        match self {
            BaseSign::Positive => 1,
            BaseSign::Negative => -1,
        }
    }
}

/// The closed interval `[l, r]` of numbers with a representation.
#[derive(Clone, Debug)]
pub struct RepInterval {
    pub l: Real,
    pub r: Real,
}

impl RepInterval {
    pub fn contains_with(&self, x: &Real, bits: u32) -> Result<bool> {
        Ok(self.l.compare_with(x, bits)? != Ordering::Greater
            && x.compare_with(&self.r, bits)? != Ordering::Greater)
    }

    pub fn contains(&self, x: &Real) -> Result<bool> {
        self.contains_with(x, DEFAULT_PRECISION_BITS)
    }

    pub fn width(&self) -> Real {
        &self.r - &self.l
    }
}

/// A base `γ = sign·β` with `β > 1` and an integer digit alphabet.
#[derive(Clone, Debug)]
pub struct NumerationSystem {
    sign: BaseSign,
    beta: Real,
    gamma: Real,
    alphabet: Vec<Digit>,
    interval: RepInterval,
    precision_bits: u32,
}

/// `{0, 1, …, ⌈β⌉ − 1}`, which is `{0, …, ⌊β⌋}` for non-integer `β`.
pub fn canonical_alphabet(beta: &Real) -> Result<Vec<Digit>> {
    check_beta(beta)?;
    let f = beta.floor_i64()?;
    let top = if beta.compare(&Real::from_integer(f))? == Ordering::Equal { f - 1 } else { f };
    Ok((0..=top).collect())
}

fn check_beta(beta: &Real) -> Result<()> {
    if beta.compare(&Real::one())? != Ordering::Greater {
        return Err(Error::InvalidBase(format!("beta = {} is not > 1", beta.to_f64())));
    }
    Ok(())
}

fn check_alphabet(alphabet: &[Digit]) -> Result<()> {
    if alphabet.len() < 2 {
        return Err(Error::InvalidAlphabet("need at least two digits".into()));
    }
    if alphabet.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidAlphabet("digits must be strictly ascending".into()));
    }
    Ok(())
}

/// Whether `J` is the whole interval between its extreme points: no gap
/// between consecutive digits exceeds `(a_m − a_0)/(β − 1)`. The criterion
/// does not depend on the sign of the base.
pub fn covers_full_interval(beta: &Real, alphabet: &[Digit]) -> Result<bool> {
    check_beta(beta)?;
    check_alphabet(alphabet)?;
    let span = alphabet[alphabet.len() - 1] - alphabet[0];
    let gap = alphabet.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    // gap·(β − 1) ≤ a_m − a_0
    let lhs = Real::from_integer(gap) * (beta - &Real::one());
    Ok(lhs.compare(&Real::from_integer(span))? != Ordering::Greater)
}

impl NumerationSystem {
    pub fn new(sign: BaseSign, beta: Real, alphabet: Vec<Digit>) -> Result<Self> {
        check_beta(&beta)?;
        check_alphabet(&alphabet)?;
        if !covers_full_interval(&beta, &alphabet)? {
            return Err(Error::AlphabetGap);
        }
        let a0 = Real::from_integer(alphabet[0]);
        let am = Real::from_integer(alphabet[alphabet.len() - 1]);
        let interval = match sign {
            BaseSign::Positive => {
                let d = &beta - &Real::one();
                RepInterval { l: a0.checked_div(&d)?, r: am.checked_div(&d)? }
            }
            BaseSign::Negative => {
                // l = (a_0 − β·a_m)/(β² − 1), r = (a_m − β·a_0)/(β² − 1)
                let d = &(&beta * &beta) - &Real::one();
                RepInterval {
                    l: (&a0 - &(&beta * &am)).checked_div(&d)?,
                    r: (&am - &(&beta * &a0)).checked_div(&d)?,
                }
            }
        };
        let gamma = match sign {
            BaseSign::Positive => beta.clone(),
            BaseSign::Negative => -&beta,
        };
        Ok(NumerationSystem {
            sign,
            beta,
            gamma,
            alphabet,
            interval,
            precision_bits: DEFAULT_PRECISION_BITS,
        })
    }

    /// The system with the canonical alphabet for `β`.
    pub fn canonical(sign: BaseSign, beta: Real) -> Result<Self> {
        let alphabet = canonical_alphabet(&beta)?;
        NumerationSystem::new(sign, beta, alphabet)
    }

    /// Parse a base expression; a leading `-` selects a negative base.
    pub fn parse_canonical(base: &str) -> Result<Self> {
        let trimmed = base.trim_start();
        let (sign, rest) = match trimmed.strip_prefix('-') {
            Some(rest) => (BaseSign::Negative, rest),
            None => (BaseSign::Positive, trimmed),
        };
        NumerationSystem::canonical(sign, Real::parse(rest)?)
    }

    pub fn with_precision_bits(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn sign(&self) -> BaseSign {
        self.sign
    }

    pub fn beta(&self) -> &Real {
        &self.beta
    }

    /// The signed base `γ`.
    pub fn gamma(&self) -> &Real {
        &self.gamma
    }

    pub fn alphabet(&self) -> &[Digit] {
        &self.alphabet
    }

    pub fn max_digit(&self) -> Digit {
        self.alphabet[self.alphabet.len() - 1]
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn representable_interval(&self) -> &RepInterval {
        &self.interval
    }

    pub fn l(&self) -> &Real {
        &self.interval.l
    }

    pub fn r(&self) -> &Real {
        &self.interval.r
    }

    pub fn is_negative(&self) -> bool {
        self.sign == BaseSign::Negative
    }

    /// True when the alphabet is `{0, …, ⌈β⌉ − 1}`.
    pub fn is_canonical(&self) -> Result<bool> {
        Ok(canonical_alphabet(&self.beta)? == self.alphabet)
    }

    pub fn compare(&self, a: &Real, b: &Real) -> Result<Ordering> {
        a.compare_with(b, self.precision_bits)
    }

    pub fn in_j(&self, x: &Real) -> Result<bool> {
        self.interval.contains_with(x, self.precision_bits)
    }

    pub fn contains_digit(&self, d: Digit) -> bool {
        self.alphabet.binary_search(&d).is_ok()
    }

    /// `|x|` decided at this system's precision.
    pub fn abs(&self, x: &Real) -> Result<Real> {
        Ok(if x.sign_with(self.precision_bits)? == Ordering::Less { -x } else { x.clone() })
    }

    /// `max(|l|, |r|)`, the bound on any remainder in `J`.
    pub fn j_radius(&self) -> Result<Real> {
        let a = self.abs(self.l())?;
        let b = self.abs(self.r())?;
        Ok(if self.compare(&a, &b)? == Ordering::Less { b } else { a })
    }

    /// `Σ_{i ≤ n} d_i / γ^i` for a finite digit list.
    pub fn prefix_value(&self, digits: &[Digit]) -> Result<Real> {
        let inv = self.gamma.recip()?;
        let mut acc = Real::zero();
        // Horner from the last digit: ((d_n/γ + d_{n-1})/γ + …)
        for &d in digits.iter().rev() {
            acc = (&acc + &Real::from_integer(d)) * &inv;
        }
        Ok(acc)
    }
}

/// What follows the explicit prefix of a [`DigitString`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// All zeros.
    Zero,
    /// The given nonempty, not-all-zero block repeated forever.
    Periodic(Vec<Digit>),
    /// The continuation is unknown: the prefix was cut from an infinite
    /// expansion. Rendered with a trailing `...`.
    Truncated,
}

/// A digit sequence `b_1 b_2 b_3 …`: a finite prefix followed by a tail.
///
/// Strings with known tails are kept in a canonical form (minimal period,
/// shortest prefix, no trailing zeros before a zero tail), so derived
/// equality is equality of the infinite sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    prefix: Vec<Digit>,
    tail: Tail,
}

impl DigitString {
    pub fn finite(digits: Vec<Digit>) -> Self {
        DigitString::new(digits, Tail::Zero)
    }

    pub fn periodic(prefix: Vec<Digit>, period: Vec<Digit>) -> Self {
        if period.is_empty() {
            return DigitString::finite(prefix);
        }
        DigitString::new(prefix, Tail::Periodic(period))
    }

    pub fn truncated(digits: Vec<Digit>) -> Self {
        DigitString { prefix: digits, tail: Tail::Truncated }
    }

    pub fn new(prefix: Vec<Digit>, tail: Tail) -> Self {
        let mut s = DigitString { prefix, tail };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        if let Tail::Periodic(p) = &self.tail {
            if p.is_empty() || p.iter().all(|&d| d == 0) {
                self.tail = Tail::Zero;
            }
        }
        match &mut self.tail {
            Tail::Zero => {
                while self.prefix.last() == Some(&0) {
                    self.prefix.pop();
                }
            }
            Tail::Periodic(period) => {
                let n = period.len();
                if let Some(k) = (1..n).find(|&k| n % k == 0 && (k..n).all(|i| period[i] == period[i - k])) {
                    period.truncate(k);
                }
                // Rotate the period backwards over matching prefix digits.
                while let Some(&last) = self.prefix.last() {
                    if last != period[period.len() - 1] {
                        break;
                    }
                    self.prefix.pop();
                    period.rotate_right(1);
                }
            }
            Tail::Truncated => {}
        }
    }

    pub fn prefix(&self) -> &[Digit] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn period(&self) -> Option<&[Digit]> {
        match &self.tail {
            Tail::Periodic(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.tail == Tail::Truncated
    }

    /// Digit at 0-based position `i`, `None` past the prefix of a truncated string.
    pub fn digit(&self, i: usize) -> Option<Digit> {
        if let Some(&d) = self.prefix.get(i) {
            return Some(d);
        }
        let j = i - self.prefix.len();
        match &self.tail {
            Tail::Zero => Some(0),
            Tail::Periodic(p) => Some(p[j % p.len()]),
            Tail::Truncated => None,
        }
    }

    /// The first `n` digits (fewer only for short truncated strings).
    pub fn take(&self, n: usize) -> Vec<Digit> {
        (0..n).map_while(|i| self.digit(i)).collect()
    }

    /// Number of leading digits needed to know the whole sequence; for a
    /// truncated string, the number of known digits.
    pub fn known_len(&self) -> usize {
        self.prefix.len()
            + match &self.tail {
                Tail::Periodic(p) => p.len(),
                _ => 0,
            }
    }

    /// The suffix starting at 0-based position `i`.
    pub fn suffix(&self, i: usize) -> DigitString {
        if i <= self.prefix.len() {
            return DigitString::new(self.prefix[i..].to_vec(), self.tail.clone());
        }
        let j = i - self.prefix.len();
        match &self.tail {
            Tail::Zero => DigitString::finite(Vec::new()),
            Tail::Periodic(p) => {
                let mut q = p.clone();
                q.rotate_left(j % p.len());
                DigitString::periodic(Vec::new(), q)
            }
            Tail::Truncated => DigitString::truncated(Vec::new()),
        }
    }

    pub fn validate(&self, sys: &NumerationSystem) -> Result<()> {
        let tail: &[Digit] = match &self.tail {
            Tail::Periodic(p) => p,
            _ => &[],
        };
        for &d in self.prefix.iter().chain(tail) {
            if !sys.contains_digit(d) {
                return Err(Error::DigitNotInAlphabet(d));
            }
        }
        if matches!(self.tail, Tail::Zero) && !sys.contains_digit(0) {
            return Err(Error::DigitNotInAlphabet(0));
        }
        Ok(())
    }
}

/// Lexicographic order of two digit sequences.
///
/// `None` when the strings agree on every digit that is known for both and
/// one of them is truncated there.
pub fn lex_compare(s: &DigitString, t: &DigitString) -> Option<Ordering> {
    let ps = s.period().map_or(1, <[Digit]>::len);
    let pt = t.period().map_or(1, <[Digit]>::len);
    let horizon = s.prefix.len().max(t.prefix.len()) + lcm(ps, pt);
    for i in 0..horizon {
        match (s.digit(i), t.digit(i)) {
            (Some(a), Some(b)) if a != b => return Some(a.cmp(&b)),
            (Some(_), Some(_)) => {}
            _ => return None,
        }
    }
    Some(Ordering::Equal)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Value of a digit string.
#[derive(Clone, Debug)]
pub struct Evaluation {
    /// Exact value, or the truncated partial sum.
    pub value: Real,
    /// `None` when `value` is exact; otherwise `|x − value| ≤ tail_bound`.
    pub tail_bound: Option<Real>,
}

/// `Σ b_i / γ^i`. Strings with a known tail are summed exactly (geometric
/// series); truncated strings are summed to `depth` digits with the tail
/// bounded by `max(|l|, |r|)/β^depth`.
pub fn evaluate(sys: &NumerationSystem, s: &DigitString, depth: usize) -> Result<Evaluation> {
    s.validate(sys)?;
    match s.tail() {
        Tail::Zero => Ok(Evaluation { value: sys.prefix_value(s.prefix())?, tail_bound: None }),
        Tail::Periodic(p) => {
            let head = sys.prefix_value(s.prefix())?;
            let block = sys.prefix_value(p)?;
            let inv = sys.gamma().recip()?;
            let shift = inv.powi(s.prefix().len() as i32)?;
            let ratio = inv.powi(p.len() as i32)?;
            let tail = (&shift * &block).checked_div(&(&Real::one() - &ratio))?;
            Ok(Evaluation { value: &head + &tail, tail_bound: None })
        }
        Tail::Truncated => {
            let n = depth.min(s.prefix().len());
            let value = sys.prefix_value(&s.prefix()[..n])?;
            let bound = sys.j_radius()?.checked_div(&sys.beta().powi(n as i32)?)?;
            Ok(Evaluation { value, tail_bound: Some(bound) })
        }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[Digit]| ds.iter().map(|d| format!("{d}")).collect::<Vec<String>>().join(",");
        let head = join(&self.prefix);
        match &self.tail {
            Tail::Zero if self.prefix.is_empty() => f.write_str("0"),
            Tail::Zero => f.write_str(&head),
            Tail::Periodic(p) => {
                if head.is_empty() {
                    write!(f, "({})", join(p))
                } else {
                    write!(f, "{head}({})", join(p))
                }
            }
            Tail::Truncated => write!(f, "{head}..."),
        }
    }
}

impl FromStr for DigitString {
    type Err = Error;

    /// `"0,1(0,0,1)"`: comma-separated digits with an optional periodic tail
    /// in parentheses, or a trailing `...` for a truncated string.
    fn from_str(text: &str) -> Result<Self> {
        let perr = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let text = text.trim();
        let (body, truncated) = match text.strip_suffix("...").or_else(|| text.strip_suffix('…')) {
            Some(b) => (b.trim_end(), true),
            None => (text, false),
        };
        let (head, period) = match body.find('(') {
            Some(open) => {
                if truncated {
                    return Err(perr(open, "a truncated string cannot have a period"));
                }
                let Some(inner) = body[open + 1..].strip_suffix(')') else {
                    return Err(perr(body.len(), "expected ')' at the end"));
                };
                (&body[..open], Some((open + 1, inner)))
            }
            None => (body, None),
        };
        let list = |s: &str, offset: usize| -> Result<Vec<Digit>> {
            let s = s.trim().trim_end_matches(',');
            if s.is_empty() {
                return Ok(vec![]);
            }
            let mut pos = offset;
            s.split(',')
                .map(|tok| {
                    let v = tok.trim().parse::<Digit>().map_err(|_| perr(pos, "expected an integer digit"));
                    pos += tok.len() + 1;
                    v
                })
                .collect()
        };
        let prefix = list(head, 0)?;
        if truncated {
            return Ok(DigitString::truncated(prefix));
        }
        match period {
            Some((offset, inner)) => {
                let p = list(inner, offset)?;
                if p.is_empty() {
                    return Err(perr(offset, "empty period"));
                }
                Ok(DigitString::periodic(prefix, p))
            }
            None => Ok(DigitString::finite(prefix)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn sys(base: &str) -> NumerationSystem {
        NumerationSystem::parse_canonical(base).unwrap()
    }

    fn r(s: &str) -> Real {
        Real::parse(s).unwrap()
    }

    fn eq(a: &Real, b: &Real) -> bool {
        a.compare(b).unwrap() == Ordering::Equal
    }

    #[test]
    fn canonical_alphabets() {
        assert_eq!(canonical_alphabet(&r("(1+sqrt(5))/2")).unwrap(), vec![0, 1]);
        assert_eq!(canonical_alphabet(&r("(3+sqrt(5))/2")).unwrap(), vec![0, 1, 2]);
        assert_eq!(canonical_alphabet(&r("9/5")).unwrap(), vec![0, 1]);
        assert_eq!(canonical_alphabet(&r("3")).unwrap(), vec![0, 1, 2]);
        assert!(matches!(canonical_alphabet(&r("1")), Err(Error::InvalidBase(_))));
    }

    #[test]
    fn representable_intervals() {
        let s = sys("-(1+sqrt(5))/2");
        assert!(eq(s.l(), &r("-1")));
        assert!(eq(s.r(), &r("2/(1+sqrt(5))")));
        let s = sys("-(3+sqrt(5))/2");
        let t2 = r("(3+sqrt(5))/2");
        let t4m1 = &(&t2 * &t2) - &Real::one();
        assert!(eq(s.r(), &Real::from_integer(2).checked_div(&t4m1).unwrap()));
        assert!(eq(s.l(), &(&Real::from_integer(-2) * &t2).checked_div(&t4m1).unwrap()));
        let s = sys("(1+sqrt(5))/2");
        assert!(eq(s.l(), &Real::zero()));
        assert!(eq(s.r(), &r("(1+sqrt(5))/2")));
    }

    #[test]
    fn coverage_criterion() {
        let tau = r("(1+sqrt(5))/2");
        assert!(covers_full_interval(&tau, &[0, 1]).unwrap());
        assert!(!covers_full_interval(&r("2.5"), &[0, 3]).unwrap());
        assert!(covers_full_interval(&tau, &[0, 2]).unwrap());
        assert!(matches!(
            NumerationSystem::new(BaseSign::Positive, r("2.5"), vec![0, 3]),
            Err(Error::AlphabetGap)
        ));
    }

    #[test]
    fn evaluation_examples() {
        let neg = sys("-(1+sqrt(5))/2");
        let v = evaluate(&neg, &DigitString::finite(vec![1, 1]), 0).unwrap();
        assert!(v.tail_bound.is_none());
        assert!(eq(&v.value, &r("-2/(1+sqrt(5)) + 4/(1+sqrt(5))^2")));
        assert!((v.value.to_f64() + 0.236_067_977_5).abs() < 1e-9);
        assert!(eq(&evaluate(&neg, &DigitString::finite(vec![]), 0).unwrap().value, &Real::zero()));
        let pos = sys("(1+sqrt(5))/2");
        let v = evaluate(&pos, &DigitString::periodic(vec![], vec![0, 1, 0]), 0).unwrap();
        assert!(eq(&v.value, &r("1/2")));
    }

    #[test]
    fn truncated_evaluation_bounds_tail() {
        let pos = sys("(1+sqrt(5))/2");
        let s: DigitString = "0,1,0,0,1,0...".parse().unwrap();
        let v = evaluate(&pos, &s, 6).unwrap();
        let bound = v.tail_bound.unwrap();
        let err = pos.abs(&(&v.value - &r("1/2"))).unwrap();
        assert_eq!(err.compare(&bound).unwrap(), Ordering::Less);
    }

    #[test]
    fn interval_endpoints_are_extreme_strings() {
        let pos = sys("(1+sqrt(5))/2");
        let top = evaluate(&pos, &DigitString::periodic(vec![], vec![1]), 0).unwrap().value;
        assert!(eq(&top, pos.r()));
        for base in ["-(1+sqrt(5))/2", "-(3+sqrt(5))/2", "-2.5", "-3.9"] {
            let neg = sys(base);
            let m = neg.max_digit();
            let lo = evaluate(&neg, &DigitString::periodic(vec![], vec![m, 0]), 0).unwrap().value;
            let hi = evaluate(&neg, &DigitString::periodic(vec![], vec![0, m]), 0).unwrap().value;
            assert!(eq(&lo, neg.l()), "{base}");
            assert!(eq(&hi, neg.r()), "{base}");
        }
    }

    #[test]
    fn lex_examples() {
        let a = DigitString::finite(vec![1, 1]);
        let b = DigitString::periodic(vec![], vec![1, 0]);
        assert_eq!(lex_compare(&a, &b), Some(Ordering::Greater));
        assert_eq!(lex_compare(&a, &a), Some(Ordering::Equal));
        let c = DigitString::finite(vec![0, 1, 1]);
        let d = DigitString::finite(vec![1]);
        assert_eq!(lex_compare(&c, &d), Some(Ordering::Less));
        let t = DigitString::truncated(vec![1, 0]);
        assert_eq!(lex_compare(&b, &t), None);
        assert_eq!(lex_compare(&a, &t), Some(Ordering::Greater));
    }

    #[test]
    fn text_format() {
        let s: DigitString = "0,1(0,0,1)".parse().unwrap();
        // 0,1(0,0,1) = 0,1,0,0,1,0,0,1,… = (0,1,0)
        assert!(s.prefix().is_empty());
        assert_eq!(s.period(), Some(&[0, 1, 0][..]));
        let u: DigitString = "2,1(0,0,1)".parse().unwrap();
        assert_eq!(u.to_string(), "2(1,0,0)");
        assert_eq!(s.take(7), vec![0, 1, 0, 0, 1, 0, 0]);
        let p: DigitString = "(1,0,1,0)".parse().unwrap();
        assert_eq!(p.to_string(), "(1,0)");
        let z: DigitString = "1,0(0)".parse().unwrap();
        assert_eq!(z, DigitString::finite(vec![1]));
        assert_eq!(z.to_string(), "1");
        let big: DigitString = "12,0(10)".parse().unwrap();
        assert_eq!(big.to_string(), "12,0(10)");
        assert!("1,(".parse::<DigitString>().is_err());
        assert!("1,a".parse::<DigitString>().is_err());
        assert!("()".parse::<DigitString>().is_err());
    }

    #[test]
    fn digits_outside_alphabet_rejected() {
        let s = sys("(1+sqrt(5))/2");
        assert_eq!(
            evaluate(&s, &DigitString::finite(vec![2]), 0).unwrap_err(),
            Error::DigitNotInAlphabet(2)
        );
    }
}
