//! Drinfeld modules over `A = F_q[t]` and their reductions modulo primes.

use crate::error::{Error, Result};
use crate::field::{field_tower, is_irreducible, roots_of_base_poly, Fq, ResidueRing};
use crate::poly::{PolyFq, PolyRing};
use crate::ring::{FqAlgebra, Ring};
use crate::skew::SkewPolyRing;

/// `phi(t) = t + e_1 tau + ... + e_r tau^r` with `e_i` in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    fq: Fq,
    coeffs: Vec<Vec<u32>>,
}

impl DrinfeldModule {
    /// `coeffs = [e_0, ..., e_r]` as polynomials in `t`; `e_0` must be `t`.
    pub fn new(fq: &Fq, coeffs: Vec<Vec<u32>>) -> Result<Self> {
        let a = PolyRing::new(fq.clone());
        let mut coeffs: Vec<Vec<u32>> = coeffs.into_iter().map(|c| a.normalize(c)).collect();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_empty()) {
            coeffs.pop();
        }
        if coeffs.first() != Some(&a.var()) {
            return Err(Error::InvalidArgument("e_0 must equal t".into()));
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument("Drinfeld module must have rank at least 1".into()));
        }
        if coeffs.iter().flatten().any(|&c| c >= fq.q()) {
            return Err(Error::InvalidArgument("coefficient outside F_q".into()));
        }
        Ok(DrinfeldModule { fq: fq.clone(), coeffs })
    }

    pub fn carlitz(fq: &Fq) -> Self {
        DrinfeldModule { fq: fq.clone(), coeffs: vec![vec![0, 1], vec![1]] }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<u32>] {
        &self.coeffs
    }

    pub fn leading(&self) -> &[u32] {
        &self.coeffs[self.rank()]
    }

    pub fn skew_ring(&self) -> SkewPolyRing<PolyFq> {
        SkewPolyRing::new(PolyRing::new(self.fq.clone()))
    }

    pub fn phi_t(&self) -> Vec<Vec<u32>> {
        self.coeffs.clone()
    }

    /// `phi(a)` by Horner evaluation at `phi(t)`.
    pub fn phi_of(&self, a: &[u32]) -> Vec<Vec<u32>> {
        self.skew_ring().eval_fq_poly(a, &self.coeffs)
    }

    /// Good reduction at the prime `w`: `w` does not divide `e_r`.
    pub fn has_good_reduction(&self, w: &[u32]) -> bool {
        let a = PolyRing::new(self.fq.clone());
        !a.rem_monic(self.leading(), w).expect("monic prime").is_empty()
    }

    /// Reduce modulo the monic irreducible `w0` into `F_{q^n_v}`, sending `t`
    /// to the lex-smallest root of `w0`.
    pub fn reduce_mod(&self, w0: &[u32], n_v: usize) -> Result<ReducedDrinfeldModule> {
        self.reduce_mod_with_root(w0, n_v, 0)
    }

    /// As [`reduce_mod`](Self::reduce_mod) with the `k`-th root of `w0` in
    /// lex order (a Galois conjugate embedding).
    pub fn reduce_mod_with_root(&self, w0: &[u32], n_v: usize, k: usize) -> Result<ReducedDrinfeldModule> {
        let a = PolyRing::new(self.fq.clone());
        if !a.is_monic(w0) || !is_irreducible(&self.fq, w0) {
            return Err(Error::InvalidArgument("reduction prime must be monic irreducible".into()));
        }
        let d0 = w0.len() - 1;
        if n_v == 0 || !n_v.is_multiple_of(d0) {
            return Err(Error::DegreeMismatch(format!("deg w_0 = {d0} does not divide n_v = {n_v}")));
        }
        let l1 = field_tower(&self.fq, n_v)?;
        let roots = roots_of_base_poly(&l1, w0);
        let it = roots.get(k).cloned().ok_or_else(|| Error::InvalidArgument(format!("w_0 has no root with index {k}")))?;
        self.reduce_with(&l1, &it, w0)
    }

    /// Reduce into a caller-chosen field `l1` in which `it` is a root of `w0`.
    pub fn reduce_with(&self, l1: &ResidueRing, it: &[u32], w0: &[u32]) -> Result<ReducedDrinfeldModule> {
        if !self.has_good_reduction(w0) {
            return Err(Error::BadReduction);
        }
        let a = PolyRing::new(self.fq.clone());
        let embed = |c: &u32| l1.embed_base(*c);
        let coeffs: Vec<Vec<u32>> = self.coeffs.iter().map(|e| a.eval_in(e, l1, embed, &it.to_vec())).collect();
        debug_assert!(l1.is_zero(&a.eval_in(w0, l1, embed, &it.to_vec())));
        Ok(ReducedDrinfeldModule {
            fq: self.fq.clone(),
            l1: l1.clone(),
            w0: w0.to_vec(),
            coeffs,
        })
    }
}

/// A Drinfeld module over `L1 = F_{q^n_v}` of characteristic `w0`, with
/// `e_0 = i(t)` a root of `w0`.
#[derive(Clone, Debug)]
pub struct ReducedDrinfeldModule {
    fq: Fq,
    l1: ResidueRing,
    w0: Vec<u32>,
    coeffs: Vec<Vec<u32>>,
}

impl ReducedDrinfeldModule {
    /// Build directly from coefficients in `l1`; `w0` is the minimal
    /// polynomial of `e_0`.
    pub fn from_residue_coeffs(l1: &ResidueRing, coeffs: Vec<Vec<u32>>) -> Result<Self> {
        if !l1.is_field() {
            return Err(Error::InvalidArgument("residue coefficients must lie in a field".into()));
        }
        if coeffs.len() < 2 || coeffs.iter().any(|c| c.len() != l1.degree()) {
            return Err(Error::InvalidArgument("need e_0..e_r with r >= 1, each of field degree length".into()));
        }
        if l1.is_zero(coeffs.last().unwrap()) {
            return Err(Error::BadReduction);
        }
        let w0 = l1.min_poly(&coeffs[0]);
        Ok(ReducedDrinfeldModule { fq: l1.fq().clone(), l1: l1.clone(), w0, coeffs })
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn field(&self) -> &ResidueRing {
        &self.l1
    }

    pub fn n_v(&self) -> usize {
        self.l1.degree()
    }

    pub fn w0(&self) -> &[u32] {
        &self.w0
    }

    pub fn d0(&self) -> usize {
        self.w0.len() - 1
    }

    /// `i(t)`.
    pub fn image_of_t(&self) -> &[u32] {
        &self.coeffs[0]
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<u32>] {
        &self.coeffs
    }

    pub fn skew_ring(&self) -> SkewPolyRing<ResidueRing> {
        SkewPolyRing::new(self.l1.clone())
    }

    pub fn phi_t(&self) -> Vec<Vec<u32>> {
        self.coeffs.clone()
    }

    pub fn phi_of(&self, a: &[u32]) -> Vec<Vec<u32>> {
        self.skew_ring().eval_fq_poly(a, &self.coeffs)
    }

    /// `Nv = w0^(n_v / d0)`.
    pub fn norm(&self) -> Vec<u32> {
        let a = PolyRing::new(self.fq.clone());
        a.pow(&self.w0, (self.n_v() / self.d0()) as u64)
    }

    /// `h` with `phi(w0) = sum_{i >= d0 h} b_i tau^i`, `b_{d0 h} != 0`.
    pub fn height(&self) -> Result<usize> {
        let p = self.phi_of(&self.w0);
        let low = p
            .iter()
            .position(|c| !self.l1.is_zero(c))
            .ok_or_else(|| Error::Internal("phi(w_0) vanished".into()))?;
        if low == 0 || low % self.d0() != 0 {
            return Err(Error::Internal(format!("lowest tau-degree {low} of phi(w_0) is not a positive multiple of {}", self.d0())));
        }
        let h = low / self.d0();
        if h > self.rank() {
            return Err(Error::Internal(format!("height {h} exceeds rank {}", self.rank())));
        }
        Ok(h)
    }

    /// `t * m = sum e_i m^(q^i)` for `m` in an `F_q`-algebra containing `l1`
    /// through `embed`.
    pub fn star_action<S: FqAlgebra>(&self, target: &S, embed: impl Fn(&Vec<u32>) -> S::Elem, m: &S::Elem) -> S::Elem {
        self.skew_ring().apply_in(&self.coeffs, target, embed, m)
    }
}

/// Coefficients of the additive polynomial `sum c_i x^(q^i)` as a dense
/// polynomial in `x`.
pub fn additive_to_dense<R: Ring>(ring: &R, coeffs: &[R::Elem], q: u64) -> Vec<R::Elem> {
    if coeffs.is_empty() {
        return Vec::new();
    }
    let deg = q.pow(coeffs.len() as u32 - 1) as usize;
    let mut out = vec![ring.zero(); deg + 1];
    let mut e = 1usize;
    for c in coeffs {
        out[e] = c.clone();
        e *= q as usize;
    }
    PolyRing::new(ring.clone()).normalize(out)
}

/// The Carlitz polynomial `C_a(x)` over `A`, dense in `x`.
pub fn carlitz_poly(fq: &Fq, a: &[u32]) -> Vec<Vec<u32>> {
    let c = DrinfeldModule::carlitz(fq).phi_of(a);
    additive_to_dense(&PolyRing::new(fq.clone()), &c, fq.q() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Prng;

    fn f2() -> Fq {
        Fq::prime_field(2).unwrap()
    }

    #[test]
    fn carlitz_examples() {
        let fq = f2();
        let c = DrinfeldModule::carlitz(&fq);
        assert_eq!(c.phi_of(&[0, 0, 1]), vec![vec![0, 0, 1], vec![0, 1, 1], vec![1]]);
        assert_eq!(c.phi_of(&[1]), vec![vec![1]]);
        assert_eq!(carlitz_poly(&fq, &[0, 1]), vec![vec![], vec![0, 1], vec![1]]);
        assert_eq!(carlitz_poly(&fq, &[1]), vec![vec![], vec![1]]);
        let t2 = carlitz_poly(&fq, &[0, 0, 1]);
        assert_eq!(t2, vec![vec![], vec![0, 0, 1], vec![0, 1, 1], vec![], vec![1]]);
        let red = c.reduce_mod(&[0, 1], 1).unwrap();
        assert_eq!(red.phi_t(), vec![vec![0], vec![1]]);
        assert_eq!(red.height().unwrap(), 1);
    }

    #[test]
    fn reduction_examples() {
        let fq = f2();
        let bad = DrinfeldModule::new(&fq, vec![vec![0, 1], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(bad.reduce_mod(&[0, 1], 1).unwrap_err(), Error::BadReduction);
        let rank2 = DrinfeldModule::new(&fq, vec![vec![0, 1], vec![1], vec![1]]).unwrap();
        let r = rank2.reduce_mod(&[1, 1, 1], 2).unwrap();
        let w = r.image_of_t().to_vec();
        let l1 = r.field();
        assert_eq!(l1.add(&l1.add(&l1.mul(&w, &w), &w), &l1.one()), l1.zero());
        assert_eq!(r.coeffs()[1], l1.one());
        assert!((1..=2).contains(&r.height().unwrap()));
        assert!(matches!(rank2.reduce_mod(&[1, 1, 1], 3), Err(Error::DegreeMismatch(_))));
        let rt = rank2.reduce_mod(&[0, 1], 1).unwrap();
        assert_eq!(rt.height().unwrap(), 1);
        // rank-2 star action on F_8: t * x = x^2 + x^4
        let f8 = field_tower(&fq, 3).unwrap();
        for x in f8.elements() {
            let y = rt.star_action(&f8, |c| f8.embed_base(c[0]), &x);
            assert_eq!(y, f8.add(&f8.pow(&x, 2), &f8.pow(&x, 4)));
        }
    }

    fn random_module(fq: &Fq, r: usize, rng: &mut Prng) -> DrinfeldModule {
        let a = PolyRing::new(fq.clone());
        let mut coeffs = vec![vec![0, 1]];
        for _ in 0..r {
            coeffs.push(a.normalize((0..2).map(|_| rng.below(fq.q() as u64) as u32).collect()));
        }
        if coeffs[r].is_empty() {
            coeffs[r] = vec![1];
        }
        DrinfeldModule::new(fq, coeffs).unwrap()
    }

    #[test]
    fn phi_multiplicative_and_degree() {
        let mut rng = Prng::new(5);
        for p in [2u32, 3] {
            let fq = Fq::prime_field(p).unwrap();
            let a = PolyRing::new(fq.clone());
            let rand_poly = |n: usize, rng: &mut Prng| a.normalize((0..n).map(|_| rng.below(p as u64) as u32).collect());
            for _ in 0..30 {
                // global coefficients grow like t^(q^k): keep degrees small
                let r = 1 + rng.below(2) as usize;
                let e = random_module(&fq, r, &mut rng);
                let (x, y) = (rand_poly(2, &mut rng), rand_poly(2, &mut rng));
                let s = e.skew_ring();
                assert_eq!(e.phi_of(&a.mul(&x, &y)), s.mul(&e.phi_of(&x), &e.phi_of(&y)));
                if let Some(d) = a.degree(&x) {
                    assert_eq!(s.degree(&e.phi_of(&x)), Some(r * d));
                }
                // reduced modules: degree <= 3 inputs
                let Ok(red) = e.reduce_mod(&[1, 1], 2) else { continue };
                let (x, y) = (rand_poly(4, &mut rng), rand_poly(4, &mut rng));
                let s = red.skew_ring();
                assert_eq!(red.phi_of(&a.mul(&x, &y)), s.mul(&red.phi_of(&x), &red.phi_of(&y)));
            }
        }
    }

    #[test]
    fn height_bounds() {
        let mut rng = Prng::new(17);
        for cfg in [(2u32, 1usize), (3, 1), (2, 2)] {
            let fq = Fq::new(&crate::field::FqConfig { p: cfg.0, deg: cfg.1, modulus: None }).unwrap();
            let a = PolyRing::new(fq.clone());
            for _ in 0..40 {
                let r = 1 + rng.below(4) as usize;
                let d0 = 1 + rng.below(2) as usize;
                let primes = crate::field::monic_irreducibles(&fq, d0);
                let w0 = &primes[rng.below(primes.len() as u64) as usize];
                let mut coeffs = vec![vec![0, 1]];
                for _ in 0..r {
                    coeffs.push(a.normalize((0..3).map(|_| rng.below(fq.q() as u64) as u32).collect()));
                }
                let e = match DrinfeldModule::new(&fq, coeffs) {
                    Ok(e) if e.rank() == r => e,
                    _ => continue,
                };
                let Ok(red) = e.reduce_mod(w0, d0) else { continue };
                let h = red.height().unwrap();
                assert!(h >= 1 && h <= r);
            }
        }
    }
}
