//! Dense univariate polynomials over an arbitrary commutative ring.
//!
//! Coefficient vectors are constant-first and carry no trailing zeros, so the
//! zero polynomial is the empty vector and structural equality is equality of
//! values.

use crate::error::{Error, Result};
use crate::ring::{Field, FqAlgebra, Ring};
use crate::field::Fq;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: Ring> {
    pub base: R,
}

pub type Poly<R> = Vec<<R as Ring>::Elem>;

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn normalize(&self, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
        while a.last().is_some_and(|c| self.base.is_zero(c)) {
            a.pop();
        }
        a
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self, a: &[R::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn lead<'a>(&self, a: &'a [R::Elem]) -> Option<&'a R::Elem> {
        a.last()
    }

    pub fn is_monic(&self, a: &[R::Elem]) -> bool {
        a.last().is_some_and(|c| self.base.is_one(c))
    }

    pub fn coeff(&self, a: &[R::Elem], i: usize) -> R::Elem {
        a.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn constant(&self, c: R::Elem) -> Vec<R::Elem> {
        self.normalize(vec![c])
    }

    pub fn monomial(&self, c: R::Elem, k: usize) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); k + 1];
        v[k] = c;
        self.normalize(v)
    }

    pub fn var(&self) -> Vec<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn from_coeffs(&self, c: Vec<R::Elem>) -> Vec<R::Elem> {
        self.normalize(c)
    }

    pub fn scale(&self, c: &R::Elem, a: &[R::Elem]) -> Vec<R::Elem> {
        self.normalize(a.iter().map(|x| self.base.mul(c, x)).collect())
    }

    pub fn shift(&self, a: &[R::Elem], k: usize) -> Vec<R::Elem> {
        if a.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.base.zero(); k];
        v.extend_from_slice(a);
        v
    }

    pub fn eval(&self, a: &[R::Elem], x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in a.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    /// Evaluate with coefficients mapped into another ring first.
    pub fn eval_in<S: Ring>(&self, a: &[R::Elem], target: &S, map: impl Fn(&R::Elem) -> S::Elem, x: &S::Elem) -> S::Elem {
        let mut acc = target.zero();
        for c in a.iter().rev() {
            acc = target.add(&target.mul(&acc, x), &map(c));
        }
        acc
    }

    /// `a(b(X))`.
    pub fn compose(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let mut acc: Vec<R::Elem> = Vec::new();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, &b.to_vec()), &self.constant(c.clone()));
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, a: &[R::Elem], target: &PolyRing<S>, f: impl Fn(&R::Elem) -> S::Elem) -> Vec<S::Elem> {
        target.normalize(a.iter().map(f).collect())
    }

    /// Division by a divisor whose leading coefficient is a unit.
    pub fn divmod(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
        let db = self.degree(b).ok_or(Error::InvalidArgument("division by zero polynomial".into()))?;
        let lc_inv = self.base.try_inv(&b[db]).ok_or(Error::NonUnit)?;
        Ok(self.divmod_with_inv(a, b, &lc_inv))
    }

    /// Division by a monic divisor; works over any commutative ring.
    pub fn divmod_monic(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
        if !self.is_monic(b) {
            return Err(Error::NonMonicDivisor);
        }
        Ok(self.divmod_with_inv(a, b, &self.base.one()))
    }

    fn divmod_with_inv(&self, a: &[R::Elem], b: &[R::Elem], lc_inv: &R::Elem) -> (Vec<R::Elem>, Vec<R::Elem>) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.to_vec());
        }
        let mut r = a.to_vec();
        let mut q = vec![self.base.zero(); a.len() - db];
        for k in (db..a.len()).rev() {
            if self.base.is_zero(&r[k]) {
                continue;
            }
            let c = self.base.mul(&r[k], lc_inv);
            let shift = k - db;
            for (j, bj) in b.iter().enumerate() {
                let t = self.base.mul(&c, bj);
                r[shift + j] = self.base.sub(&r[shift + j], &t);
            }
            q[shift] = c;
        }
        r.truncate(db);
        (self.normalize(q), self.normalize(r))
    }

    pub fn rem_monic(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<Vec<R::Elem>> {
        self.divmod_monic(a, b).map(|(_, r)| r)
    }

    /// Exact quotient by a monic divisor.
    pub fn div_exact_monic(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<Vec<R::Elem>> {
        let (q, r) = self.divmod_monic(a, b)?;
        if !r.is_empty() {
            return Err(Error::InexactDivision("nonzero remainder".into()));
        }
        Ok(q)
    }

    pub fn derivative(&self, a: &[R::Elem]) -> Vec<R::Elem> {
        self.normalize(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.base.mul(&self.base.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `a^e mod m` for monic `m`.
    pub fn pow_mod(&self, a: &[R::Elem], mut e: u64, m: &[R::Elem]) -> Result<Vec<R::Elem>> {
        let mut base = self.rem_monic(a, m)?;
        let mut acc = self.rem_monic(&self.one(), m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem_monic(&self.mul(&acc, &base), m)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.rem_monic(&self.mul(&base, &base), m)?;
            }
        }
        Ok(acc)
    }
}

impl<R: Field> PolyRing<R> {
    pub fn make_monic(&self, a: &[R::Elem]) -> Vec<R::Elem> {
        match a.last() {
            None => Vec::new(),
            Some(lc) => self.scale(&self.base.inv(lc), a),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        while !y.is_empty() {
            let (_, r) = self.divmod(&x, &y).expect("field division");
            x = y;
            y = r;
        }
        self.make_monic(&x)
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &[R::Elem], b: &[R::Elem]) -> (Vec<R::Elem>, Vec<R::Elem>, Vec<R::Elem>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (self.one(), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), self.one());
        while !r1.is_empty() {
            let (q, r) = self.divmod(&r0, &r1).expect("field division");
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = self.base.inv(lc);
                (self.scale(&inv, &r0), self.scale(&inv, &s0), self.scale(&inv, &t0))
            }
        }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.len().max(b.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        self.normalize(v)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.base.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                v[i + j] = self.base.add(&v[i + j], &t);
            }
        }
        self.normalize(v)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }

    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.len() == 1 {
            self.base.try_inv(&a[0]).map(|c| vec![c])
        } else {
            None
        }
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
}

impl<R: FqAlgebra> FqAlgebra for PolyRing<R> {
    fn base_field(&self) -> &Fq {
        self.base.base_field()
    }

    fn from_base(&self, c: u32) -> Self::Elem {
        self.constant(self.base.from_base(c))
    }

    /// `(sum a_i t^i)^q = sum a_i^q t^(q i)`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        if a.is_empty() {
            return Vec::new();
        }
        let q = self.base_field().q() as usize;
        let mut v = vec![self.base.zero(); (a.len() - 1) * q + 1];
        for (i, c) in a.iter().enumerate() {
            v[i * q] = self.base.frobenius(c);
        }
        self.normalize(v)
    }
}

/// Polynomials over F_q: the ring A = F_q[t].
pub type PolyFq = PolyRing<Fq>;

impl PolyRing<Fq> {
    /// Integer key of a polynomial for graded-lexicographic ordering:
    /// degree first, then coefficients read from the top.
    pub fn grlex_key(&self, a: &[u32]) -> (usize, Vec<u32>) {
        (a.len(), a.iter().rev().copied().collect())
    }

    /// Reduce into `F_q[t]/(m)` as a fixed-length coordinate vector.
    pub fn reduce_coords(&self, a: &[u32], m: &[u32]) -> Vec<u32> {
        let r = self.rem_monic(a, m).expect("monic modulus");
        let mut v = r;
        v.resize(m.len() - 1, 0);
        v
    }

    /// Largest `k` with `pi^k | a` (`None` for `a = 0`).
    pub fn valuation(&self, a: &[u32], pi: &[u32]) -> Option<usize> {
        if a.is_empty() {
            return None;
        }
        let mut k = 0;
        let mut x = a.to_vec();
        loop {
            let (q, r) = self.divmod_monic(&x, pi).expect("monic prime");
            if !r.is_empty() {
                return Some(k);
            }
            x = q;
            k += 1;
        }
    }
}

/// Enumerate all monic polynomials of exact degree `d` over `F_q` in
/// graded-lexicographic order (lower coefficients as a base-q counter,
/// most significant at the top).
pub fn monic_polys(fq: &Fq, d: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let q = fq.q() as u64;
    let total = q.checked_pow(d as u32).expect("too many polynomials");
    (0..total).map(move |mut n| {
        let mut v = vec![0u32; d + 1];
        for c in v.iter_mut().take(d) {
            *c = (n % q) as u32;
            n /= q;
        }
        v[d] = 1;
        v
    })
}
