//! Twisted polynomial rings `R{tau}` with `tau * x = x^q * tau`.
//!
//! Elements are dense coefficient lists `c_0, ..., c_d` of `tau^0..tau^d`
//! without trailing zeros; the zero polynomial is empty. The ring is not
//! commutative, so it does not implement [`Ring`].

use crate::error::{Error, Result};
use crate::ring::FqAlgebra;

#[derive(Clone, Debug)]
pub struct SkewPolyRing<R: FqAlgebra> {
    pub base: R,
}

impl<R: FqAlgebra> SkewPolyRing<R> {
    pub fn new(base: R) -> Self {
        SkewPolyRing { base }
    }

    pub fn normalize(&self, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
        while a.last().is_some_and(|c| self.base.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn degree(&self, a: &[R::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn zero(&self) -> Vec<R::Elem> {
        Vec::new()
    }

    pub fn one(&self) -> Vec<R::Elem> {
        vec![self.base.one()]
    }

    pub fn constant(&self, c: R::Elem) -> Vec<R::Elem> {
        self.normalize(vec![c])
    }

    /// `c * tau^k`.
    pub fn monomial(&self, c: R::Elem, k: usize) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.normalize(v)
    }

    pub fn tau_pow(&self, k: usize) -> Vec<R::Elem> {
        self.monomial(self.base.one(), k)
    }

    pub fn add(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let n = a.len().max(b.len());
        let z = self.base.zero();
        let out = (0..n).map(|i| self.base.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.normalize(out)
    }

    pub fn sub(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let n = a.len().max(b.len());
        let z = self.base.zero();
        let out = (0..n).map(|i| self.base.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.normalize(out)
    }

    /// `(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)`.
    pub fn mul(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.base.zero(); a.len() + b.len() - 1];
        let mut twisted: Vec<R::Elem> = b.to_vec();
        for (i, ai) in a.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|x| self.base.frobenius(x)).collect();
            }
            if self.base.is_zero(ai) {
                continue;
            }
            for (j, bj) in twisted.iter().enumerate() {
                if !self.base.is_zero(bj) {
                    out[i + j] = self.base.add(&out[i + j], &self.base.mul(ai, bj));
                }
            }
        }
        self.normalize(out)
    }

    /// Left scalar multiple `c * a`.
    pub fn scale_left(&self, c: &R::Elem, a: &[R::Elem]) -> Vec<R::Elem> {
        self.normalize(a.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// `a = q * b + r` with `deg r < deg b`; the leading coefficient of `b`
    /// must be a unit.
    pub fn right_divrem(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
        let db = self.degree(b).ok_or_else(|| Error::InvalidArgument("division by zero skew polynomial".into()))?;
        let lead = &b[db];
        let mut r = self.normalize(a.to_vec());
        let mut quot = vec![self.base.zero(); r.len().saturating_sub(db)];
        // inverse of lead^(q^k), cached per k
        let mut lead_pows: Vec<R::Elem> = Vec::new();
        while let Some(dr) = self.degree(&r).filter(|&d| d >= db) {
            let k = dr - db;
            while lead_pows.len() <= k {
                let next = match lead_pows.last() {
                    None => self.base.try_inv(lead).ok_or(Error::NonUnit)?,
                    Some(prev) => self.base.frobenius(prev),
                };
                lead_pows.push(next);
            }
            let c = self.base.mul(&r[dr], &lead_pows[k]);
            let term = self.monomial(c.clone(), k);
            r = self.sub(&r, &self.mul(&term, b));
            debug_assert!(self.degree(&r).is_none_or(|d| d < dr));
            quot[k] = c;
        }
        Ok((self.normalize(quot), r))
    }

    pub fn right_rem(&self, a: &[R::Elem], b: &[R::Elem]) -> Result<Vec<R::Elem>> {
        Ok(self.right_divrem(a, b)?.1)
    }

    /// Evaluate the additive polynomial `sum c_i x^(q^i)` at an element of an
    /// `F_q`-algebra `S`, with coefficients mapped into `S` by `embed`.
    pub fn apply_in<S: FqAlgebra>(&self, a: &[R::Elem], target: &S, embed: impl Fn(&R::Elem) -> S::Elem, x: &S::Elem) -> S::Elem {
        let mut acc = target.zero();
        let mut xp = x.clone();
        for (i, c) in a.iter().enumerate() {
            if i > 0 {
                xp = target.frobenius(&xp);
            }
            if !self.base.is_zero(c) {
                acc = target.add(&acc, &target.mul(&embed(c), &xp));
            }
        }
        acc
    }

    /// Evaluate at an element of the coefficient ring itself.
    pub fn apply(&self, a: &[R::Elem], x: &R::Elem) -> R::Elem {
        self.apply_in(a, &self.base, |c| c.clone(), x)
    }

    /// Horner evaluation of a polynomial with `F_q`-coefficients (constant
    /// first) at a skew polynomial.
    pub fn eval_fq_poly(&self, a: &[u32], x: &[R::Elem]) -> Vec<R::Elem> {
        let mut acc = self.zero();
        for &c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.constant(self.base.from_base(c)));
        }
        acc
    }

    pub fn map_coeffs<S: FqAlgebra>(&self, a: &[R::Elem], target: &SkewPolyRing<S>, f: impl Fn(&R::Elem) -> S::Elem) -> Vec<S::Elem> {
        target.normalize(a.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_tower, Fq};
    use crate::poly::PolyRing;
    use crate::ring::Ring;
    use crate::rng::Prng;

    #[test]
    fn twist_rule() {
        let f2 = Fq::prime_field(2).unwrap();
        let f4 = field_tower(&f2, 2).unwrap();
        let s = SkewPolyRing::new(f4.clone());
        let w = f4.gen();
        let lhs = s.mul(&s.tau_pow(1), std::slice::from_ref(&w));
        assert_eq!(lhs, s.monomial(f4.mul(&w, &w), 1));
        let one_tau = vec![f4.one(), f4.one()];
        assert_eq!(s.mul(&one_tau, &s.one()), one_tau);
    }

    #[test]
    fn over_polynomials() {
        let a = PolyRing::new(Fq::prime_field(2).unwrap());
        let s = SkewPolyRing::new(a.clone());
        let x = vec![a.var(), a.one()];
        // (t + tau)^2 = t^2 + (t + t^2) tau + tau^2
        assert_eq!(s.mul(&x, &x), vec![vec![0, 0, 1], vec![0, 1, 1], vec![1]]);
    }

    #[test]
    fn random_associativity_and_division() {
        let mut rng = Prng::new(3);
        for (p, m) in [(2u32, 2usize), (3, 2)] {
            let fq = Fq::prime_field(p).unwrap();
            let k = field_tower(&fq, m).unwrap();
            let s = SkewPolyRing::new(k.clone());
            let mut rand = |len: usize| s.normalize((0..len).map(|_| k.random(&mut rng)).collect());
            for _ in 0..1000 {
                let (a, b, c) = (rand(4), rand(3), rand(3));
                assert_eq!(s.mul(&s.mul(&a, &b), &c), s.mul(&a, &s.mul(&b, &c)));
                assert_eq!(s.mul(&a, &s.add(&b, &c)), s.add(&s.mul(&a, &b), &s.mul(&a, &c)));
                if !b.is_empty() {
                    let (q, r) = s.right_divrem(&a, &b).unwrap();
                    assert_eq!(s.add(&s.mul(&q, &b), &r), a);
                    assert!(r.len() < b.len());
                }
            }
        }
    }

    #[test]
    fn composition_matches_product() {
        let fq = Fq::prime_field(3).unwrap();
        let k = field_tower(&fq, 3).unwrap();
        let s = SkewPolyRing::new(k.clone());
        let mut rng = Prng::new(9);
        for _ in 0..50 {
            let a: Vec<_> = (0..3).map(|_| k.random(&mut rng)).collect();
            let b: Vec<_> = (0..3).map(|_| k.random(&mut rng)).collect();
            let x = k.random(&mut rng);
            assert_eq!(s.apply(&s.mul(&a, &b), &x), s.apply(&a, &s.apply(&b, &x)));
        }
    }
}
