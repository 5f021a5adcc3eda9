//! Truncated power series in `1/t`: `sum_{k=0}^{N} c_k t^{-k}` with explicit
//! precision `N`. Binary operations truncate to the smaller precision.

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries<E> {
    /// coefficients of `t^0, t^-1, ..., t^-prec`
    pub coeffs: Vec<E>,
}

impl<E> TruncatedSeries<E> {
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct SeriesRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R) -> Self {
        SeriesRing { base }
    }

    pub fn one(&self, prec: usize) -> TruncatedSeries<R::Elem> {
        self.constant(self.base.one(), prec)
    }

    pub fn constant(&self, c: R::Elem, prec: usize) -> TruncatedSeries<R::Elem> {
        let mut coeffs = vec![self.base.zero(); prec + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>, prec: usize) -> TruncatedSeries<R::Elem> {
        coeffs.resize(prec + 1, self.base.zero());
        TruncatedSeries { coeffs }
    }

    /// `p(t) / t^deg(p)` for a nonzero polynomial in `t` (constant first).
    pub fn from_poly_normalized(&self, p: &[R::Elem], prec: usize) -> TruncatedSeries<R::Elem> {
        let coeffs = p.iter().rev().take(prec + 1).cloned().collect();
        self.from_coeffs(coeffs, prec)
    }

    pub fn truncate(&self, a: &TruncatedSeries<R::Elem>, prec: usize) -> TruncatedSeries<R::Elem> {
        TruncatedSeries { coeffs: a.coeffs[..=prec.min(a.precision())].to_vec() }
    }

    pub fn add(&self, a: &TruncatedSeries<R::Elem>, b: &TruncatedSeries<R::Elem>) -> TruncatedSeries<R::Elem> {
        let n = a.precision().min(b.precision());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.base.add(&a.coeffs[k], &b.coeffs[k])).collect() }
    }

    pub fn sub(&self, a: &TruncatedSeries<R::Elem>, b: &TruncatedSeries<R::Elem>) -> TruncatedSeries<R::Elem> {
        let n = a.precision().min(b.precision());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.base.sub(&a.coeffs[k], &b.coeffs[k])).collect() }
    }

    pub fn mul(&self, a: &TruncatedSeries<R::Elem>, b: &TruncatedSeries<R::Elem>) -> TruncatedSeries<R::Elem> {
        let n = a.precision().min(b.precision());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = self.base.zero();
                for i in 0..=k {
                    if !self.base.is_zero(&a.coeffs[i]) && !self.base.is_zero(&b.coeffs[k - i]) {
                        acc = self.base.add(&acc, &self.base.mul(&a.coeffs[i], &b.coeffs[k - i]));
                    }
                }
                acc
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Inverse; requires a unit constant coefficient.
    pub fn inverse(&self, a: &TruncatedSeries<R::Elem>) -> Result<TruncatedSeries<R::Elem>> {
        let c0inv = self.base.try_inv(&a.coeffs[0]).ok_or(Error::NonUnit)?;
        let n = a.precision();
        let mut b: Vec<R::Elem> = Vec::with_capacity(n + 1);
        b.push(c0inv.clone());
        for k in 1..=n {
            let mut acc = self.base.zero();
            for i in 1..=k {
                acc = self.base.add(&acc, &self.base.mul(&a.coeffs[i], &b[k - i]));
            }
            b.push(self.base.neg(&self.base.mul(&c0inv, &acc)));
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    pub fn div(&self, a: &TruncatedSeries<R::Elem>, b: &TruncatedSeries<R::Elem>) -> Result<TruncatedSeries<R::Elem>> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// Number of leading coefficients on which `a` and `b` agree, capped at
    /// the smaller precision + 1. Agreement "to precision k" means the first
    /// `k + 1` coefficients agree.
    pub fn agreement(&self, a: &TruncatedSeries<R::Elem>, b: &TruncatedSeries<R::Elem>) -> usize {
        let n = a.precision().min(b.precision());
        (0..=n).find(|&k| a.coeffs[k] != b.coeffs[k]).unwrap_or(n + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::group::{AbelianGroup, GroupAlgebra};
    use crate::rng::Prng;

    #[test]
    fn geometric_series_char2() {
        let s = SeriesRing::new(Fq::prime_field(2).unwrap());
        let a = s.from_coeffs(vec![1, 1], 3);
        assert_eq!(s.inverse(&a).unwrap().coeffs, vec![1, 1, 1, 1]);
        assert_eq!(s.inverse(&s.one(4)).unwrap(), s.one(4));
        assert_eq!(s.inverse(&s.from_coeffs(vec![0, 1], 2)), Err(Error::NonUnit));
    }

    #[test]
    fn idempotent_series() {
        let ga = GroupAlgebra::new(Fq::prime_field(3).unwrap(), AbelianGroup::new(&[2]).unwrap());
        let s = SeriesRing::new(ga.clone());
        let e = vec![2, 2];
        let x = s.from_coeffs(vec![ga.one(), e.clone()], 2);
        // (1 + e/t)^{-1} = 1 - e/t + e/t^2
        let inv = s.inverse(&x).unwrap();
        assert_eq!(inv.coeffs, vec![ga.one(), ga.neg(&e), e]);
    }

    #[test]
    fn random_unit_inverses() {
        let mut rng = Prng::new(11);
        for (p, orders) in [(2u32, vec![3u64]), (3, vec![2])] {
            let ga = GroupAlgebra::new(Fq::prime_field(p).unwrap(), AbelianGroup::new(&orders).unwrap());
            let s = SeriesRing::new(ga.clone());
            let mut done = 0;
            while done < 1000 {
                let c: Vec<Vec<u32>> = (0..6).map(|_| (0..ga.group().size()).map(|_| rng.below(p as u64) as u32).collect()).collect();
                let a = s.from_coeffs(c, 5);
                let Ok(inv) = s.inverse(&a) else { continue };
                assert_eq!(s.mul(&a, &inv), s.one(5));
                assert_eq!(s.mul(&inv, &a), s.one(5));
                done += 1;
            }
        }
    }

    #[test]
    fn mixed_precision_truncates() {
        let s = SeriesRing::new(Fq::prime_field(2).unwrap());
        let a = s.one(5);
        let b = s.from_coeffs(vec![1, 1], 2);
        assert_eq!(s.mul(&a, &b).precision(), 2);
        assert_eq!(s.from_poly_normalized(&[0, 1, 1], 3).coeffs, vec![1, 1, 0, 0]);
    }
}
