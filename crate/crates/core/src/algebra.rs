//! Finite algebras `L[y]/(h)` over a finite field `L`, flattened to
//! `F_q`-coordinates. Both residue-ring models (`F_{q^m}[u]/(u^e)` and
//! `(A/v)[x]/(Phi_f)`) are instances.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fq, ResidueRing};
use crate::linalg::FqMat;
use crate::poly::PolyRing;
use crate::ring::{finite_algebra_inverse, FiniteFqAlgebra, FqAlgebra, Ring};

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    inner: Arc<QaInner>,
}

#[derive(Debug)]
struct QaInner {
    base: ResidueRing,
    h: Vec<Vec<u32>>,
    /// `y^(q i) mod h`
    frob_y: Vec<Vec<Vec<u32>>>,
}

impl QuotientAlgebra {
    /// `base[y]/(h)` for a monic `h` of positive degree.
    pub fn new(base: &ResidueRing, h: &[Vec<u32>]) -> Result<Self> {
        let ly = PolyRing::new(base.clone());
        let h = ly.normalize(h.to_vec());
        if h.len() < 2 || !ly.is_monic(&h) {
            return Err(Error::InvalidArgument("quotient modulus must be monic of positive degree".into()));
        }
        let d = h.len() - 1;
        let yq = ly.pow_mod(&ly.var(), base.fq().q() as u64, &h)?;
        let mut frob_y = Vec::with_capacity(d);
        let mut cur = ly.one();
        for _ in 0..d {
            let mut c = cur.clone();
            c.resize(d, base.zero());
            frob_y.push(c);
            cur = ly.rem_monic(&ly.mul(&cur, &yq), &h)?;
        }
        Ok(QuotientAlgebra { inner: Arc::new(QaInner { base: base.clone(), h, frob_y }) })
    }

    pub fn base(&self) -> &ResidueRing {
        &self.inner.base
    }

    pub fn modulus(&self) -> &[Vec<u32>] {
        &self.inner.h
    }

    /// Degree of `h`.
    pub fn degree(&self) -> usize {
        self.inner.h.len() - 1
    }

    pub fn y(&self) -> Vec<Vec<u32>> {
        self.reduce(&[self.base().zero(), self.base().one()])
    }

    pub fn from_base_elem(&self, c: &[u32]) -> Vec<Vec<u32>> {
        let mut v = self.zero();
        v[0] = c.to_vec();
        v
    }

    /// Reduce an arbitrary polynomial in `y` over the base field.
    pub fn reduce(&self, a: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let ly = PolyRing::new(self.base().clone());
        let mut r = ly.rem_monic(&ly.normalize(a.to_vec()), self.modulus()).expect("monic");
        r.resize(self.degree(), self.base().zero());
        r
    }

    /// The ring endomorphism fixing the base field pointwise up to
    /// `coeff_map` and sending `y` to `image`.
    pub fn substitute(&self, a: &[Vec<u32>], image: &[Vec<u32>], coeff_map: impl Fn(&Vec<u32>) -> Vec<u32>) -> Vec<Vec<u32>> {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, &image.to_vec()), &self.from_base_elem(&coeff_map(c)));
        }
        acc
    }

    /// Matrix of an `F_q`-linear map on the algebra (columns = images of the
    /// coordinate basis).
    pub fn linear_map_matrix(&self, f: impl Fn(&Vec<Vec<u32>>) -> Vec<Vec<u32>>) -> FqMat {
        let n = self.dim();
        let cols: Vec<Vec<u32>> = self.basis().iter().map(|b| self.coords(&f(b))).collect();
        FqMat::from_cols(&cols, n)
    }
}

impl Ring for QuotientAlgebra {
    type Elem = Vec<Vec<u32>>;

    fn zero(&self) -> Self::Elem {
        vec![self.base().zero(); self.degree()]
    }

    fn one(&self) -> Self::Elem {
        self.from_base_elem(&self.base().one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base().neg(x)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().sub(x, y)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let l = self.base();
        let d = self.degree();
        let h = self.modulus();
        let mut prod = vec![l.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if l.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !l.is_zero(y) {
                    prod[i + j] = l.add(&prod[i + j], &l.mul(x, y));
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            if l.is_zero(&prod[k]) {
                continue;
            }
            let c = prod[k].clone();
            for j in 0..d {
                if !l.is_zero(&h[j]) {
                    prod[k - d + j] = l.sub(&prod[k - d + j], &l.mul(&c, &h[j]));
                }
            }
        }
        prod.truncate(d);
        prod
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base().is_zero(x))
    }

    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        finite_algebra_inverse(self, a)
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_base_elem(&self.base().from_int(n))
    }
}

impl FqAlgebra for QuotientAlgebra {
    fn base_field(&self) -> &Fq {
        self.base().fq()
    }

    fn from_base(&self, c: u32) -> Self::Elem {
        self.from_base_elem(&self.base().embed_base(c))
    }

    /// `(sum c_i y^i)^q = sum c_i^q (y^q)^i`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        let l = self.base();
        let mut out = self.zero();
        for (i, c) in a.iter().enumerate() {
            if l.is_zero(c) {
                continue;
            }
            let cq = l.frobenius(c);
            for (o, y) in out.iter_mut().zip(&self.inner.frob_y[i]) {
                if !l.is_zero(y) {
                    *o = l.add(o, &l.mul(&cq, y));
                }
            }
        }
        out
    }
}

impl FiniteFqAlgebra for QuotientAlgebra {
    fn dim(&self) -> usize {
        self.degree() * self.base().degree()
    }

    fn coords(&self, a: &Self::Elem) -> Vec<u32> {
        a.iter().flatten().copied().collect()
    }

    fn from_coords(&self, c: &[u32]) -> Self::Elem {
        c.chunks(self.base().degree()).map(|ch| ch.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_tower;
    use crate::rng::Prng;

    #[test]
    fn truncated_ring_frobenius() {
        // F_3[u]/(u^2): (a + b u)^3 = a
        let f3 = Fq::prime_field(3).unwrap();
        let l = field_tower(&f3, 1).unwrap();
        let alg = QuotientAlgebra::new(&l, &[vec![0], vec![0], vec![1]]).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let x = vec![vec![a], vec![b]];
                assert_eq!(alg.frobenius(&x), vec![vec![a], vec![0]]);
                assert_eq!(alg.frobenius(&x), alg.pow(&x, 3));
            }
        }
    }

    #[test]
    fn frobenius_is_qth_power() {
        let f2 = Fq::prime_field(2).unwrap();
        let l = field_tower(&f2, 2).unwrap();
        let alg = QuotientAlgebra::new(&l, &[vec![1, 0], vec![0, 1], vec![0, 0], vec![1, 0]]).unwrap();
        let mut rng = Prng::new(1);
        for _ in 0..200 {
            let x: Vec<Vec<u32>> = (0..3).map(|_| l.random(&mut rng)).collect();
            let y: Vec<Vec<u32>> = (0..3).map(|_| l.random(&mut rng)).collect();
            assert_eq!(alg.frobenius(&x), alg.pow(&x, 2));
            assert_eq!(alg.mul(&x, &y), alg.mul(&y, &x));
            let img = alg.y();
            let s = alg.substitute(&alg.mul(&x, &y), &img, |c| c.clone());
            assert_eq!(s, alg.mul(&x, &y));
        }
    }
}
