//! Elements of `Q(θ)` where `θ` is a real root of a square-free polynomial,
//! located by an isolating interval.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::poly::Poly;

/// Width reached by the isolating interval at construction time.
pub(crate) const GENERATOR_BITS: u64 = 128;

/// A real algebraic number `θ`: a monic square-free polynomial with exactly
/// one root inside `iso`. The endpoints of `iso` are never roots.
#[derive(Debug, PartialEq, Eq)]
pub struct Generator {
    poly: Poly,
    iso: Interval,
}

fn sign_of(v: &BigRational) -> Ordering {
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl Generator {
    /// `poly` must be monic and square-free with a single root strictly inside
    /// `iso` and no root at either endpoint.
    pub(crate) fn new(poly: Poly, iso: Interval) -> Generator {
        let mut g = Generator { poly, iso };
        let target = BigRational::new(BigInt::one(), BigInt::one() << GENERATOR_BITS);
        while g.iso.width() > target && !g.iso.is_point() {
            g.iso = g.bisect(&g.iso);
        }
        g
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn isolating_interval(&self) -> &Interval {
        &self.iso
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// Halve an isolating interval, keeping the half that holds the root.
    pub(crate) fn bisect(&self, iso: &Interval) -> Interval {
        if iso.is_point() {
            return iso.clone();
        }
        let mid = iso.midpoint();
        let s_mid = sign_of(&self.poly.eval(&mid));
        if s_mid == Ordering::Equal {
            return Interval::point(mid);
        }
        if s_mid == sign_of(&self.poly.eval(&iso.lo)) {
            Interval::new(mid, iso.hi.clone())
        } else {
            Interval::new(iso.lo.clone(), mid)
        }
    }

    /// A generator for the same number, if `a` and `b` describe one root.
    pub(crate) fn unify(a: &Arc<Generator>, b: &Arc<Generator>) -> Option<Arc<Generator>> {
        if Arc::ptr_eq(a, b) || **a == **b {
            return Some(a.clone());
        }
        let g = a.poly.gcd(&b.poly);
        if g.degree().unwrap_or(0) == 0 {
            return None;
        }
        let both = a.iso.intersect(&b.iso)?;
        if g.count_roots_closed(&both.lo, &both.hi) == 0 {
            return None;
        }
        if g == a.poly {
            return Some(a.clone());
        }
        if g == b.poly {
            return Some(b.clone());
        }
        // The intersection endpoints come from the parents' isolating
        // intervals, so they are not roots of `g` either.
        Some(Arc::new(Generator::new(g, both)))
    }
}

/// `p(θ)` with `deg p < deg f`.
#[derive(Clone, Debug)]
pub struct FieldElem {
    pub(crate) gen: Arc<Generator>,
    pub(crate) p: Poly,
}

impl FieldElem {
    pub(crate) fn new(gen: Arc<Generator>, p: Poly) -> FieldElem {
        let p = p.rem(&gen.poly);
        FieldElem { gen, p }
    }

    pub fn generator(&self) -> &Arc<Generator> {
        &self.gen
    }

    pub fn poly(&self) -> &Poly {
        &self.p
    }

    pub(crate) fn rebase(&self, gen: &Arc<Generator>) -> FieldElem {
        if Arc::ptr_eq(&self.gen, gen) {
            return self.clone();
        }
        FieldElem::new(gen.clone(), self.p.clone())
    }

    /// Exact zero test: `p(θ) = 0` iff `θ` is a root of `gcd(p, f)`.
    pub fn is_zero(&self) -> bool {
        if self.p.is_zero() {
            return true;
        }
        let g = self.p.gcd(&self.gen.poly);
        g.degree().unwrap_or(0) > 0
            && g.count_roots_closed(&self.gen.iso.lo, &self.gen.iso.hi) > 0
    }

    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut iso = self.gen.iso.clone();
        loop {
            let e = self.p.eval_interval(&iso);
            if e.lo.is_positive() {
                return Ordering::Greater;
            }
            if e.hi.is_negative() {
                return Ordering::Less;
            }
            iso = self.gen.bisect(&iso);
        }
    }

    pub fn enclose(&self, width: &BigRational) -> Interval {
        let mut iso = self.gen.iso.clone();
        loop {
            let e = self.p.eval_interval(&iso);
            if &e.width() <= width {
                return e;
            }
            iso = self.gen.bisect(&iso);
        }
    }

    /// Multiplicative inverse. The caller guarantees the element is nonzero.
    /// When the defining polynomial shares a factor with `p`, the generator is
    /// shrunk to the cofactor that still vanishes at `θ`.
    pub fn recip(&self) -> FieldElem {
        let (g, s) = self.p.inverse_mod(&self.gen.poly);
        if g.degree() == Some(0) {
            return FieldElem::new(self.gen.clone(), s);
        }
        let cofactor = self.gen.poly.div_rem(&g).0.monic();
        let gen = Arc::new(Generator::new(cofactor, self.gen.iso.clone()));
        FieldElem::new(gen, self.p.clone()).recip()
    }

    /// Characteristic polynomial of multiplication by `p(θ)` on `Q[x]/(f)`,
    /// which vanishes at `p(θ)`. Computed by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Poly {
        let n = self.gen.degree();
        let f = &self.gen.poly;
        // Column j holds the coordinates of p·x^j mod f.
        let mut m = vec![vec![BigRational::zero(); n]; n];
        let mut col = self.p.clone();
        for j in 0..n {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = (&col * &Poly::x()).rem(f);
        }
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I
            let mut next = mat_mul(&m, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            let am = mat_mul(&m, &next);
            let trace: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
            coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
            mk = next;
        }
        Poly::new(coeffs)
    }
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}
