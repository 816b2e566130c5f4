//! Exact arithmetic in real quadratic fields `Q(√d)`.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::poly::Poly;

/// The number `a + b·√d` with `b ≠ 0` and `d > 1` not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub(crate) a: BigRational,
    pub(crate) b: BigRational,
    pub(crate) d: BigInt,
}

/// Writes a nonnegative rational as `s²·d` with `d` a square-free-ish integer
/// and `s` rational, i.e. `√q = s·√d`. Square factors are stripped by trial
/// division up to `TRIAL_LIMIT`, so huge radicands may keep a square factor.
pub(crate) fn split_square(q: &BigRational) -> (BigRational, BigInt) {
    const TRIAL_LIMIT: u64 = 1 << 16;
    // √(n/m) = √(n·m)/m
    let mut rad = q.numer() * q.denom();
    let mut outside = BigRational::new(BigInt::one(), q.denom().clone());
    if rad.is_zero() {
        return (BigRational::zero(), BigInt::one());
    }
    let root = rad.sqrt();
    if &root * &root == rad {
        return (outside * BigRational::from_integer(root), BigInt::one());
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let sq = BigInt::from(p * p);
        if sq > rad {
            break;
        }
        while (&rad % &sq).is_zero() {
            rad /= &sq;
            outside *= BigRational::from_integer(p.into());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outside, rad)
}

impl QuadSurd {
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn sign(&self) -> Ordering {
        let sa = self.a.sign_ord();
        let sb = self.b.sign_ord();
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        // Opposite signs: compare a² with b²d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    /// Minimal polynomial `x² − 2a·x + (a² − b²d)`.
    pub fn min_poly(&self) -> Poly {
        Poly::new(alloc::vec![
            self.norm(),
            -(&self.a * BigRational::from_integer(2.into())),
            BigRational::one(),
        ])
    }

    /// Enclosure of width at most `|b| / 2^bits`.
    pub fn enclose_bits(&self, bits: u64) -> Interval {
        let scale = BigInt::one() << bits;
        let s = (&self.d * &scale * &scale).sqrt();
        let lo_root = BigRational::new(s.clone(), scale.clone());
        let hi_root = BigRational::new(s + 1, scale);
        let (x, y) = (&self.b * lo_root, &self.b * hi_root);
        let (lo, hi) = if self.b.is_positive() { (x, y) } else { (y, x) };
        Interval::new(&self.a + lo, &self.a + hi)
    }

    pub fn enclose(&self, width: &BigRational) -> Interval {
        // |b| / 2^bits ≤ width
        let ratio = self.b.abs() / width;
        let need = ratio.ceil().to_integer().bits() + 1;
        self.enclose_bits(need)
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigRational {
    fn sign_ord(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}
