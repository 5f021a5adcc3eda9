//! Finite abelian groups as products of cyclic factors, and their group
//! algebras over finite `F_q`-algebras.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ring::{finite_algebra_inverse, FiniteFqAlgebra, FqAlgebra, Ring};

/// `Z/m_1 x ... x Z/m_k`. Elements are exponent vectors; the flat index is
/// mixed radix with factor 0 least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u64>,
    size: usize,
}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidArgument("cyclic factor of order 0".into()));
        }
        let size = orders.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m as usize));
        let size = size.filter(|&s| s <= 1 << 16).ok_or_else(|| Error::InvalidArgument("group too large".into()))?;
        Ok(AbelianGroup { orders: orders.to_vec(), size })
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: Vec::new(), size: 1 }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    /// The `i`-th cyclic generator.
    pub fn generator(&self, i: usize) -> Vec<u64> {
        let mut g = self.identity();
        g[i] = 1 % self.orders[i];
        g
    }

    pub fn index(&self, g: &[u64]) -> usize {
        let mut idx = 0usize;
        for (i, &m) in self.orders.iter().enumerate().rev() {
            idx = idx * m as usize + (g[i] % m) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&m| {
                let e = (idx % m as usize) as u64;
                idx /= m as usize;
                e
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.size).map(|i| self.element(i))
    }

    pub fn op(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.orders.iter().zip(a.iter().zip(b)).map(|(&m, (&x, &y))| (x + y) % m).collect()
    }

    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        self.orders.iter().zip(a).map(|(&m, &x)| (m - x % m) % m).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        self.orders.iter().zip(a).map(|(&m, &x)| (x % m) * (k % m) % m).collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        self.orders.iter().zip(a).fold(1, |acc, (&m, &x)| lcm(acc, m / gcd(m, x % m)))
    }

    pub fn is_valid(&self, a: &[u64]) -> bool {
        a.len() == self.orders.len() && a.iter().zip(&self.orders).all(|(&x, &m)| x < m)
    }

    /// Flat indices of the subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[Vec<u64>]) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut members = vec![self.identity()];
        let mut i = 0;
        while i < members.len() {
            for g in gens {
                let h = self.op(&members[i], g);
                let k = self.index(&h);
                if !seen[k] {
                    seen[k] = true;
                    members.push(h);
                }
            }
            i += 1;
        }
        (0..self.size).filter(|&k| seen[k]).collect()
    }

    /// Index table `sum[a * n + b] = index(a + b)`.
    fn op_table(&self) -> Vec<u32> {
        let n = self.size;
        let elems: Vec<Vec<u64>> = self.elements().collect();
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.index(&self.op(&elems[a], &elems[b])) as u32;
            }
        }
        t
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `R[G]` for a finite `F_q`-algebra `R`. Elements are dense coefficient
/// vectors indexed by flat group index.
#[derive(Clone, Debug)]
pub struct GroupAlgebra<R: FiniteFqAlgebra> {
    inner: Arc<GaInner<R>>,
}

#[derive(Debug)]
struct GaInner<R> {
    coeff: R,
    group: AbelianGroup,
    table: Vec<u32>,
    /// index of g^p (used for the Frobenius `g -> g^q`)
    qpow: Vec<u32>,
}

impl<R: FiniteFqAlgebra> PartialEq for GroupAlgebra<R>
where
    R: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.coeff == other.inner.coeff && self.inner.group == other.inner.group)
    }
}

impl<R: FiniteFqAlgebra> GroupAlgebra<R> {
    pub fn new(coeff: R, group: AbelianGroup) -> Self {
        let table = group.op_table();
        let q = coeff.base_field().q() as u64;
        let qpow = group.elements().map(|g| group.index(&group.scale(&g, q)) as u32).collect();
        GroupAlgebra { inner: Arc::new(GaInner { coeff, group, table, qpow }) }
    }

    pub fn coeff_ring(&self) -> &R {
        &self.inner.coeff
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.inner.group
    }

    /// The basis element `[g]`.
    pub fn group_elem(&self, g: &[u64]) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[self.group().index(g)] = self.coeff_ring().one();
        v
    }

    pub fn group_elem_index(&self, idx: usize) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[idx] = self.coeff_ring().one();
        v
    }

    pub fn from_coeff(&self, c: R::Elem) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// Map coefficients through a ring homomorphism into another group
    /// algebra over the same group.
    pub fn map_coeffs<S: FiniteFqAlgebra>(&self, a: &[R::Elem], target: &GroupAlgebra<S>, f: impl Fn(&R::Elem) -> S::Elem) -> Vec<S::Elem> {
        assert_eq!(self.group(), target.group());
        a.iter().map(f).collect()
    }

    /// `sum_{h in H} [h]` for a list of flat indices.
    pub fn sum_of(&self, indices: &[usize]) -> Vec<R::Elem> {
        let mut v = self.zero();
        for &i in indices {
            v[i] = self.coeff_ring().add(&v[i], &self.coeff_ring().one());
        }
        v
    }

    /// Nonzero terms as (flat index, coefficient), in index order.
    pub fn support<'a>(&'a self, a: &'a [R::Elem]) -> impl Iterator<Item = (usize, &'a R::Elem)> + 'a {
        a.iter().enumerate().filter(move |(_, c)| !self.coeff_ring().is_zero(c))
    }
}

impl<R: FiniteFqAlgebra> Ring for GroupAlgebra<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.coeff_ring().zero(); self.group().size()]
    }

    fn one(&self) -> Self::Elem {
        self.from_coeff(self.coeff_ring().one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        a.iter().map(|x| r.neg(x)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        a.iter().zip(b).map(|(x, y)| r.sub(x, y)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        let n = self.group().size();
        let table = &self.inner.table;
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                let k = table[i * n + j] as usize;
                out[k] = r.add(&out[k], &r.mul(x, y));
            }
        }
        out
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.coeff_ring().is_zero(x))
    }

    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        finite_algebra_inverse(self, a)
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_coeff(self.coeff_ring().from_int(n))
    }
}

impl<R: FiniteFqAlgebra> FqAlgebra for GroupAlgebra<R> {
    fn base_field(&self) -> &Fq {
        self.coeff_ring().base_field()
    }

    fn from_base(&self, c: u32) -> Self::Elem {
        self.from_coeff(self.coeff_ring().from_base(c))
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            let k = self.inner.qpow[i] as usize;
            out[k] = r.add(&out[k], &r.frobenius(x));
        }
        out
    }

    fn scale(&self, c: u32, a: &Self::Elem) -> Self::Elem {
        let r = self.coeff_ring();
        a.iter().map(|x| r.scale(c, x)).collect()
    }
}

impl<R: FiniteFqAlgebra> FiniteFqAlgebra for GroupAlgebra<R> {
    fn dim(&self) -> usize {
        self.coeff_ring().dim() * self.group().size()
    }

    fn coords(&self, a: &Self::Elem) -> Vec<u32> {
        a.iter().flat_map(|x| self.coeff_ring().coords(x)).collect()
    }

    fn from_coords(&self, c: &[u32]) -> Self::Elem {
        let d = self.coeff_ring().dim();
        c.chunks(d).map(|ch| self.coeff_ring().from_coords(ch)).collect()
    }
}

/// `F_q[G]`.
pub type FqGroupAlgebra = GroupAlgebra<Fq>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FqMat;
    use crate::rng::Prng;
    use proptest::prelude::*;

    #[test]
    fn index_roundtrip() {
        let g = AbelianGroup::new(&[2, 3, 4]).unwrap();
        for i in 0..g.size() {
            assert_eq!(g.index(&g.element(i)), i);
        }
        assert_eq!(g.element(1), vec![1, 0, 0]);
        assert_eq!(g.element_order(&[1, 1, 0]), 6);
        assert_eq!(g.subgroup(&[vec![0, 1, 2]]).len(), 6);
    }

    #[test]
    fn idempotent_over_f3() {
        let f3 = Fq::prime_field(3).unwrap();
        let ga = GroupAlgebra::new(f3, AbelianGroup::new(&[2]).unwrap());
        let e = vec![2, 2];
        assert_eq!(ga.mul(&e, &e), e);
        // identity 2x2 has charpoly (X+1)^2 over F_2[G]
        let f2 = Fq::prime_field(2).unwrap();
        let g2 = GroupAlgebra::new(f2, AbelianGroup::new(&[3]).unwrap());
        let one = g2.one();
        let z = g2.zero();
        let cp = crate::matrix::berkowitz_charpoly(&g2, &[vec![one.clone(), z.clone()], vec![z, one.clone()]]).unwrap();
        assert_eq!(cp, vec![one.clone(), g2.zero(), one]);
        let ga3 = GroupAlgebra::new(Fq::prime_field(3).unwrap(), AbelianGroup::new(&[2]).unwrap());
        let cp = crate::matrix::berkowitz_charpoly(&ga3, &[vec![vec![2, 2]]]).unwrap();
        assert_eq!(cp, vec![vec![1, 1], ga3.one()]);
    }

    fn regular_matrix(ga: &FqGroupAlgebra, a: &[u32]) -> FqMat {
        let cols: Vec<Vec<u32>> = ga.basis().iter().map(|b| ga.mul(&a.to_vec(), b)).collect();
        FqMat::from_cols(&cols, ga.dim())
    }

    proptest! {
        #[test]
        fn commutative_and_regular(seed in any::<u64>()) {
            let fq = Fq::prime_field(3).unwrap();
            let ga = GroupAlgebra::new(fq.clone(), AbelianGroup::new(&[2, 3]).unwrap());
            let mut rng = Prng::new(seed);
            let mut rand = || (0..6).map(|_| rng.below(3) as u32).collect::<Vec<u32>>();
            let (a, b, c) = (rand(), rand(), rand());
            prop_assert_eq!(ga.mul(&a, &b), ga.mul(&b, &a));
            prop_assert_eq!(ga.mul(&ga.mul(&a, &b), &c), ga.mul(&a, &ga.mul(&b, &c)));
            prop_assert_eq!(ga.mul(&a, &ga.add(&b, &c)), ga.add(&ga.mul(&a, &b), &ga.mul(&a, &c)));
            let prod = regular_matrix(&ga, &a).mul(&fq, &regular_matrix(&ga, &b));
            prop_assert_eq!(prod, regular_matrix(&ga, &ga.mul(&a, &b)));
            prop_assert_eq!(ga.frobenius(&a), ga.pow(&a, 3));
            if let Some(inv) = ga.try_inv(&a) {
                prop_assert_eq!(ga.mul(&a, &inv), ga.one());
            }
        }
    }
}
