//! Real numbers with decidable comparison.
//!
//! A [`Real`] is a rational, an element of a real quadratic field, an
//! element of `Q(θ)` for a polynomial root `θ`, or a composite of values from
//! incompatible fields. The first three are exact: signs, comparisons and
//! floors are decided without tolerances. Composites only carry enclosures
//! and are compared by refinement up to a precision cap.

mod field;
pub mod parse;
mod quadratic;

use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use field::{FieldElem, Generator};
pub use quadratic::QuadSurd;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::Poly;

/// Default cap on refinement: enclosures are narrowed down to `2^-256`.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

#[derive(Clone, Debug)]
pub struct Real(Repr);

#[derive(Clone, Debug)]
enum Repr {
    Rational(BigRational),
    Quadratic(QuadSurd),
    Algebraic(FieldElem),
    Composite(Arc<Composite>),
}

#[derive(Debug)]
enum Composite {
    Add(Real, Real),
    Sub(Real, Real),
    Mul(Real, Real),
    Div(Real, Real),
}

/// `2^-bits` as a rational, handy as an enclosure width.
pub fn pow2_recip(bits: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

fn sign_of(v: &BigRational) -> Ordering {
    v.cmp(&BigRational::zero())
}

impl Real {
    pub fn zero() -> Real {
        Real::from_rational(BigRational::zero())
    }

    pub fn one() -> Real {
        Real::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Real {
        Real::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Real {
        Real::from_rational(BigRational::from_integer(n))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Real {
        Real::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: BigRational) -> Real {
        Real(Repr::Rational(q))
    }

    /// `a + b·√d`, normalized to a rational when `b = 0` or `d` is a square.
    pub fn quadratic(a: BigRational, b: BigRational, d: &BigRational) -> Result<Real> {
        if d.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        let (s, rad) = quadratic::split_square(d);
        let b = b * s;
        if b.is_zero() || rad.is_one() {
            return Ok(Real::from_rational(a + b));
        }
        Ok(Real(Repr::Quadratic(QuadSurd { a, b, d: rad })))
    }

    /// `√q` for a nonnegative rational `q`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Real> {
        Real::quadratic(BigRational::zero(), BigRational::one(), q)
    }

    /// The unique root of `poly` inside the closed interval `[lo, hi]`.
    ///
    /// Roots of degree one or two are stored as rationals or quadratic
    /// surds; higher degrees become a field generator.
    pub fn root_of(poly: &Poly, lo: &BigRational, hi: &BigRational) -> Result<Real> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::RootIsolation { roots: 0 });
        }
        if lo > hi {
            return Err(Error::Domain("empty isolating interval".into()));
        }
        let f = poly.squarefree();
        let roots = f.count_roots_closed(lo, hi);
        if roots != 1 {
            return Err(Error::RootIsolation { roots });
        }
        if f.eval(lo).is_zero() {
            return Ok(Real::from_rational(lo.clone()));
        }
        if f.eval(hi).is_zero() {
            return Ok(Real::from_rational(hi.clone()));
        }
        match f.degree() {
            Some(1) => Ok(Real::from_rational(-f.coeff(0) / f.coeff(1))),
            Some(2) => {
                // monic: x² + p·x + c, roots -p/2 ± √(p²/4 - c)
                let half_p = f.coeff(1) / BigRational::from_integer(2.into());
                let disc = &half_p * &half_p - f.coeff(0);
                for sgn in [1, -1] {
                    let cand = Real::quadratic(
                        -half_p.clone(),
                        BigRational::from_integer(sgn.into()),
                        &disc,
                    )?;
                    let lo_r = Real::from_rational(lo.clone());
                    let hi_r = Real::from_rational(hi.clone());
                    if cand.compare(&lo_r)? != Ordering::Less
                        && cand.compare(&hi_r)? != Ordering::Greater
                    {
                        return Ok(cand);
                    }
                }
                Err(Error::RootIsolation { roots: 0 })
            }
            _ => {
                let gen = Generator::new(f, Interval::new(lo.clone(), hi.clone()));
                if gen.isolating_interval().is_point() {
                    return Ok(Real::from_rational(gen.isolating_interval().lo.clone()));
                }
                let gen = Arc::new(gen);
                Ok(Real(Repr::Algebraic(FieldElem::new(gen, Poly::x()))))
            }
        }
    }

    /// Parse the textual grammar: integers, decimals, `p/q`, `sqrt(..)`,
    /// `root(<poly in x>, [lo, hi])`, combined with `+ - * / ^` and parentheses.
    pub fn parse(text: &str) -> Result<Real> {
        parse::parse_real(text)
    }

    fn from_field(e: FieldElem) -> Real {
        match e.p.degree() {
            None => Real::zero(),
            Some(0) => Real::from_rational(e.p.coeff(0)),
            _ => Real(Repr::Algebraic(e)),
        }
    }

    fn composite(c: Composite) -> Real {
        Real(Repr::Composite(Arc::new(c)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadSurd> {
        match &self.0 {
            Repr::Quadratic(s) => Some(s),
            _ => None,
        }
    }

    /// True unless this value is only known through enclosures.
    pub fn is_exact(&self) -> bool {
        !matches!(self.0, Repr::Composite(_))
    }

    /// Structural identity of exact values. Exact representations are
    /// canonical within a field, so this is value equality for values of the
    /// same field; it never reports equal for composites.
    pub fn same_exact(&self, other: &Real) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => a == b,
            (Repr::Quadratic(a), Repr::Quadratic(b)) => a == b,
            (Repr::Algebraic(a), Repr::Algebraic(b)) => {
                (Arc::ptr_eq(&a.gen, &b.gen) || a.gen == b.gen) && a.p == b.p
            }
            _ => false,
        }
    }

    /// Sign of an exact value, or `None` for composites.
    fn exact_sign(&self) -> Option<Ordering> {
        match &self.0 {
            Repr::Rational(q) => Some(sign_of(q)),
            Repr::Quadratic(s) => Some(s.sign()),
            Repr::Algebraic(e) => Some(e.sign()),
            Repr::Composite(_) => None,
        }
    }

    pub fn sign(&self) -> Result<Ordering> {
        self.sign_with(DEFAULT_PRECISION_BITS)
    }

    /// Sign, refining composites down to `2^-bits` before giving up.
    pub fn sign_with(&self, bits: u32) -> Result<Ordering> {
        if let Some(s) = self.exact_sign() {
            return Ok(s);
        }
        let mut k: u64 = 8;
        loop {
            let e = self.enclose_with(&pow2_recip(k), bits)?;
            if e.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if e.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if e.is_point() {
                return Ok(Ordering::Equal);
            }
            if k >= u64::from(bits) {
                return Err(Error::PrecisionExhausted { bits });
            }
            k = (k * 2).min(u64::from(bits));
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Equal)
    }

    pub fn compare(&self, other: &Real) -> Result<Ordering> {
        self.compare_with(other, DEFAULT_PRECISION_BITS)
    }

    /// Exact ordering. Values from different algebraic fields are compared
    /// through their minimal-polynomial isolations; only composites fall
    /// back to an enclosure race, which may exhaust `bits`.
    pub fn compare_with(&self, other: &Real, bits: u32) -> Result<Ordering> {
        let diff = self - other;
        if diff.is_exact() {
            return Ok(diff.exact_sign().expect("exact"));
        }
        if self.is_exact() && other.is_exact() {
            return algebraic_compare(self, other);
        }
        diff.sign_with(bits)
    }

    pub fn abs(&self) -> Result<Real> {
        Ok(if self.sign()? == Ordering::Less { -self } else { self.clone() })
    }

    pub fn max(&self, other: &Real) -> Result<Real> {
        Ok(if self.compare(other)? == Ordering::Less { other.clone() } else { self.clone() })
    }

    pub fn recip(&self) -> Result<Real> {
        match &self.0 {
            Repr::Rational(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Real::from_rational(q.recip()))
                }
            }
            Repr::Quadratic(s) => {
                // (a - b√d) / (a² - b²d); the norm is nonzero for irrational surds
                let n = s.norm();
                Ok(Real(Repr::Quadratic(QuadSurd {
                    a: &s.a / &n,
                    b: -(&s.b / &n),
                    d: s.d.clone(),
                })))
            }
            Repr::Algebraic(e) => {
                if e.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Real::from_field(e.recip()))
                }
            }
            Repr::Composite(_) => Real::one().checked_div(self),
        }
    }

    pub fn checked_div(&self, rhs: &Real) -> Result<Real> {
        if rhs.is_exact() {
            return Ok(self * &rhs.recip()?);
        }
        Ok(Real::composite(Composite::Div(self.clone(), rhs.clone())))
    }

    pub fn powi(&self, e: i32) -> Result<Real> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut b = base;
        let mut acc = Real::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn is_integer(&self) -> Result<bool> {
        let f = self.floor()?;
        Ok(self.compare(&Real::from_bigint(f))? == Ordering::Equal)
    }

    /// Greatest integer `≤ self`, decided exactly for exact values.
    pub fn floor(&self) -> Result<BigInt> {
        self.floor_with(DEFAULT_PRECISION_BITS)
    }

    pub fn floor_with(&self, bits: u32) -> Result<BigInt> {
        if let Repr::Rational(q) = &self.0 {
            return Ok(q.floor().to_integer());
        }
        let e = self.enclose_with(&BigRational::new(1.into(), 4.into()), bits)?;
        let n = e.lo.floor().to_integer();
        let next = Real::from_bigint(&n + 1);
        match self.compare_with(&next, bits)? {
            Ordering::Less => Ok(n),
            _ => Ok(n + 1),
        }
    }

    pub fn floor_i64(&self) -> Result<i64> {
        self.floor()?
            .to_i64()
            .ok_or_else(|| Error::Domain("integer part does not fit in i64".into()))
    }

    /// Enclosure of width at most `width`.
    pub fn enclose(&self, width: &BigRational) -> Result<Interval> {
        self.enclose_with(width, DEFAULT_PRECISION_BITS)
    }

    pub fn enclose_with(&self, width: &BigRational, bits: u32) -> Result<Interval> {
        if !width.is_positive() {
            return Err(Error::Domain("enclosure width must be positive".into()));
        }
        match &self.0 {
            Repr::Rational(q) => Ok(Interval::point(q.clone())),
            Repr::Quadratic(s) => Ok(s.enclose(width)),
            Repr::Algebraic(e) => Ok(e.enclose(width)),
            Repr::Composite(c) => c.enclose(width, bits),
        }
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        let mid = match self.enclose(&pow2_recip(80)) {
            Ok(e) => e.midpoint(),
            Err(_) => return f64::NAN,
        };
        mid.to_f64().unwrap_or(f64::NAN)
    }

    fn try_binary(
        &self,
        rhs: &Real,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        quad: impl Fn(&QuadSurd, &QuadSurd) -> Real,
        field: impl Fn(&Poly, &Poly, &Poly) -> Poly,
        comp: impl Fn(Real, Real) -> Composite,
    ) -> Real {
        use Repr::*;
        match (&self.0, &rhs.0) {
            (Rational(a), Rational(b)) => Real::from_rational(rat(a, b)),
            (Quadratic(a), Quadratic(b)) if a.d == b.d => quad(a, b),
            (Quadratic(a), Rational(b)) => {
                let b = QuadSurd { a: b.clone(), b: BigRational::zero(), d: a.d.clone() };
                quad(a, &b)
            }
            (Rational(a), Quadratic(b)) => {
                let a = QuadSurd { a: a.clone(), b: BigRational::zero(), d: b.d.clone() };
                quad(&a, b)
            }
            (Algebraic(a), Algebraic(b)) => match Generator::unify(&a.gen, &b.gen) {
                Some(g) => {
                    let (x, y) = (a.rebase(&g), b.rebase(&g));
                    Real::from_field(FieldElem::new(g.clone(), field(&x.p, &y.p, g.poly())))
                }
                None => Real::composite(comp(self.clone(), rhs.clone())),
            },
            (Algebraic(a), Rational(b)) => Real::from_field(FieldElem::new(
                a.gen.clone(),
                field(&a.p, &Poly::constant(b.clone()), a.gen.poly()),
            )),
            (Rational(a), Algebraic(b)) => Real::from_field(FieldElem::new(
                b.gen.clone(),
                field(&Poly::constant(a.clone()), &b.p, b.gen.poly()),
            )),
            _ => Real::composite(comp(self.clone(), rhs.clone())),
        }
    }

    /// A square-free polynomial vanishing at this exact value.
    fn annihilator(&self) -> Poly {
        match &self.0 {
            Repr::Rational(q) => Poly::new(alloc::vec![-q.clone(), BigRational::one()]),
            Repr::Quadratic(s) => s.min_poly(),
            Repr::Algebraic(e) => e.char_poly().squarefree(),
            Repr::Composite(_) => unreachable!("composites have no annihilator"),
        }
    }

    /// An interval containing this exact value and no other root of `poly`.
    fn isolate(&self, poly: &Poly) -> Result<Interval> {
        let mut k = 16u64;
        loop {
            let e = self.enclose(&pow2_recip(k))?;
            if e.is_point() {
                return Ok(e);
            }
            let ends_clear = !poly.eval(&e.lo).is_zero() && !poly.eval(&e.hi).is_zero();
            if ends_clear && poly.count_roots(&e.lo, &e.hi) == 1 {
                return Ok(e);
            }
            k *= 2;
        }
    }
}

/// Order two exact values that live in unrelated fields.
fn algebraic_compare(a: &Real, b: &Real) -> Result<Ordering> {
    let pa = a.annihilator();
    let pb = b.annihilator();
    let ia = a.isolate(&pa)?;
    let ib = b.isolate(&pb)?;
    if let Some(both) = ia.intersect(&ib) {
        // Roots of gcd(pa, pb) inside ia are a, inside ib are b.
        let g = pa.gcd(&pb);
        if g.degree().unwrap_or(0) > 0 && g.count_roots_closed(&both.lo, &both.hi) > 0 {
            return Ok(Ordering::Equal);
        }
    }
    let mut k = 32u64;
    loop {
        let ea = a.enclose(&pow2_recip(k))?;
        let eb = b.enclose(&pow2_recip(k))?;
        if ea.hi < eb.lo {
            return Ok(Ordering::Less);
        }
        if eb.hi < ea.lo {
            return Ok(Ordering::Greater);
        }
        k *= 2;
    }
}

impl Composite {
    fn enclose(&self, width: &BigRational, bits: u32) -> Result<Interval> {
        let floor = pow2_recip(u64::from(bits) + 64);
        let mut child = width / BigRational::from_integer(4.into());
        loop {
            let e = match self {
                Composite::Add(a, b) => {
                    &a.enclose_with(&child, bits)? + &b.enclose_with(&child, bits)?
                }
                Composite::Sub(a, b) => {
                    &a.enclose_with(&child, bits)? - &b.enclose_with(&child, bits)?
                }
                Composite::Mul(a, b) => {
                    &a.enclose_with(&child, bits)? * &b.enclose_with(&child, bits)?
                }
                Composite::Div(a, b) => {
                    let ea = a.enclose_with(&child, bits)?;
                    let eb = b.enclose_with(&child, bits)?;
                    match ea.checked_div(&eb) {
                        Some(e) => e,
                        None if eb.is_point() => return Err(Error::DivisionByZero),
                        None => {
                            if child < floor {
                                return Err(Error::PrecisionExhausted { bits });
                            }
                            child /= BigRational::from_integer(256.into());
                            continue;
                        }
                    }
                }
            };
            if &e.width() <= width {
                return Ok(e);
            }
            if child < floor {
                return Err(Error::PrecisionExhausted { bits });
            }
            child /= BigRational::from_integer(256.into());
        }
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        self.try_binary(
            rhs,
            |a, b| a + b,
            |a, b| quad_real(&a.a + &b.a, &a.b + &b.b, &a.d),
            |a, b, _| a + b,
            Composite::Add,
        )
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        self.try_binary(
            rhs,
            |a, b| a - b,
            |a, b| quad_real(&a.a - &b.a, &a.b - &b.b, &a.d),
            |a, b, _| a - b,
            Composite::Sub,
        )
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        self.try_binary(
            rhs,
            |a, b| a * b,
            |a, b| {
                let d = BigRational::from_integer(a.d.clone());
                quad_real(&a.a * &b.a + &a.b * &b.b * d, &a.a * &b.b + &a.b * &b.a, &a.d)
            },
            |a, b, f| (a * b).rem(f),
            Composite::Mul,
        )
    }
}

fn quad_real(a: BigRational, b: BigRational, d: &BigInt) -> Real {
    if b.is_zero() {
        Real::from_rational(a)
    } else {
        Real(Repr::Quadratic(QuadSurd { a, b, d: d.clone() }))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match &self.0 {
            Repr::Rational(q) => Real::from_rational(-q),
            Repr::Quadratic(s) => Real(Repr::Quadratic(s.neg())),
            Repr::Algebraic(e) => Real(Repr::Algebraic(FieldElem {
                gen: e.gen.clone(),
                p: -e.p.clone(),
            })),
            Repr::Composite(_) => Real::composite(Composite::Sub(Real::zero(), self.clone())),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { (&self).$m(&rhs) }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real { (&self).$m(rhs) }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Real {
        Real::from_integer(n)
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Real {
        Real::from_rational(q)
    }
}

impl core::str::FromStr for Real {
    type Err = Error;
    fn from_str(s: &str) -> Result<Real> {
        Real::parse(s)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::Quadratic(s) => write!(f, "{} + ({})*sqrt({})", s.a, s.b, s.d),
            Repr::Algebraic(e) => {
                let iso = e.gen.isolating_interval();
                write!(f, "({})[x = root({}) near {:.12}]", e.p, e.gen.poly(), iso.lo.to_f64().unwrap_or(f64::NAN))
            }
            Repr::Composite(_) => write!(f, "≈{}", self.to_f64()),
        }
    }
}
