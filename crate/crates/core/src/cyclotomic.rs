//! Carlitz cyclotomic extensions `K = k(lambda_f)`: the group
//! `G = (A/f)^x`, the residue algebras `(A/v)[x]/(Phi_f mod v)` with the
//! Carlitz action, and classification of primes.

use std::collections::HashMap;

use crate::algebra::QuotientAlgebra;
use crate::drinfeld::{carlitz_poly, DrinfeldModule, ReducedDrinfeldModule};
use crate::error::{Error, Result};
use crate::field::{is_irreducible, monic_irreducibles_up_to, Fq, ResidueRing};
use crate::group::{AbelianGroup, FqGroupAlgebra, GroupAlgebra};
use crate::module::GTModule;
use crate::poly::{PolyFq, PolyRing};
use crate::ring::{FqAlgebra, Ring};
use crate::skew::SkewPolyRing;

/// Monic irreducible factors of `f` with multiplicities, in enumeration order.
pub fn factor(fq: &Fq, f: &[u32]) -> Vec<(Vec<u32>, usize)> {
    let a = PolyRing::new(fq.clone());
    let mut rest = a.normalize(f.to_vec());
    let mut out = Vec::new();
    let Some(d) = a.degree(&rest) else { return out };
    for p in monic_irreducibles_up_to(fq, d) {
        if a.degree(&rest) == Some(0) {
            break;
        }
        let k = a.valuation(&rest, &p).unwrap_or(0);
        if k > 0 {
            for _ in 0..k {
                rest = a.div_exact_monic(&rest, &p).expect("divides");
            }
            out.push((p, k));
        }
    }
    out
}

/// `Phi_f(x) = prod_{d | f} C_{f/d}(x)^mu(d)` over `A`, dense in `x`.
pub fn cyclotomic_polynomial(fq: &Fq, f: &[u32]) -> Result<Vec<Vec<u32>>> {
    let a = PolyRing::new(fq.clone());
    if !a.is_monic(f) {
        return Err(Error::InvalidArgument("conductor must be monic".into()));
    }
    let ax: PolyRing<PolyFq> = PolyRing::new(a.clone());
    let primes: Vec<Vec<u32>> = factor(fq, f).into_iter().map(|(p, _)| p).collect();
    let mut num = ax.one();
    let mut den = ax.one();
    for mask in 0u32..(1 << primes.len()) {
        let mut d = a.one();
        for (i, p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d = a.mul(&d, p);
            }
        }
        let c = carlitz_poly(fq, &a.div_exact_monic(f, &d)?);
        if mask.count_ones() % 2 == 0 {
            num = ax.mul(&num, &c);
        } else {
            den = ax.mul(&den, &c);
        }
    }
    // Phi_1 = C_1 = x
    ax.div_exact_monic(&num, &den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeKind {
    Unramified,
    /// `v` exactly divides the conductor
    Tame,
    /// `v^2` divides the conductor
    Wild,
    /// `v` divides `e_r`; takes precedence over the other kinds
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClassification {
    pub v: Vec<u32>,
    pub kind: PrimeKind,
    /// `sigma_v` as an exponent vector (good tame and unramified primes)
    pub sigma: Option<Vec<u64>>,
    /// flat indices of `I_v`, sorted
    pub inertia: Vec<usize>,
    pub e: u64,
    /// residue degree `f(w/v)`
    pub f: u64,
    pub n_v: usize,
}

impl PrimeClassification {
    pub fn is_good_tame(&self) -> bool {
        matches!(self.kind, PrimeKind::Unramified | PrimeKind::Tame)
    }
}

#[derive(Clone, Debug)]
pub struct CyclotomicField {
    fq: Fq,
    conductor: Vec<u32>,
    phi: Vec<Vec<u32>>,
    group: AbelianGroup,
    /// representatives (mod f, coordinates) of the cyclic generators
    gen_reps: Vec<Vec<u32>>,
    /// unit (coordinates mod f) -> flat group index
    dlog: HashMap<Vec<u32>, usize>,
    /// flat group index -> unit
    units: Vec<Vec<u32>>,
}

impl CyclotomicField {
    pub fn new(fq: &Fq, conductor: &[u32]) -> Result<Self> {
        let a = PolyRing::new(fq.clone());
        let f = a.normalize(conductor.to_vec());
        if f.is_empty() || !a.is_monic(&f) {
            return Err(Error::InvalidArgument("conductor must be a nonzero monic polynomial".into()));
        }
        let deg = f.len() - 1;
        let q = fq.q() as u64;
        let size = q.checked_pow(deg as u32).filter(|&s| s <= 1 << 12).ok_or_else(|| Error::InvalidArgument("conductor too large".into()))?;
        let mulf = |x: &[u32], y: &[u32]| a.reduce_coords(&a.mul(&a.normalize(x.to_vec()), &a.normalize(y.to_vec())), &f);
        let mut one = vec![0u32; deg];
        if deg > 0 {
            one[0] = 1;
        }
        let all: Vec<Vec<u32>> = (0..size)
            .map(|mut n| {
                (0..deg)
                    .map(|_| {
                        let c = (n % q) as u32;
                        n /= q;
                        c
                    })
                    .collect()
            })
            .collect();
        let units: Vec<Vec<u32>> = all
            .into_iter()
            .filter(|x| a.gcd(&a.normalize(x.clone()), &f) == a.one() || deg == 0)
            .collect();
        let pos: HashMap<Vec<u32>, usize> = units.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        let n = units.len();
        let table: Vec<Vec<usize>> = units.iter().map(|x| units.iter().map(|y| pos[&mulf(x, y)]).collect()).collect();
        let id = pos[&one];

        // greedy invariant factors: an element of maximal order in G/H with
        // the same order in G generates a complement-friendly cyclic factor
        let mut coords: Vec<Option<Vec<u64>>> = vec![None; n];
        coords[id] = Some(Vec::new());
        let mut orders: Vec<u64> = Vec::new();
        let mut gens: Vec<usize> = Vec::new();
        let mut h_size = 1usize;
        while h_size < n {
            let mut best: Option<(u64, usize)> = None;
            for x in 0..n {
                if coords[x].is_some() {
                    continue;
                }
                let (mut k, mut y) = (1u64, x);
                while coords[y].is_none() {
                    y = table[y][x];
                    k += 1;
                }
                // x^k lies in H; require x^k = 1
                if y == id && best.is_none_or(|(m, _)| k > m) {
                    best = Some((k, x));
                }
            }
            let (m, g) = best.ok_or_else(|| Error::Internal("unit group decomposition failed".into()))?;
            let old: Vec<(usize, Vec<u64>)> = coords.iter().enumerate().filter_map(|(i, c)| c.clone().map(|c| (i, c))).collect();
            for (i, mut c) in old {
                c.push(0);
                coords[i] = Some(c);
            }
            let mut gp = id;
            for j in 1..m {
                gp = table[gp][g];
                let members: Vec<(usize, Vec<u64>)> = coords
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| c.as_ref().filter(|c| c[c.len() - 1] == 0).map(|c| (i, c.clone())))
                    .collect();
                for (i, mut c) in members {
                    let prod = table[i][gp];
                    if coords[prod].is_none() {
                        *c.last_mut().unwrap() = j;
                        coords[prod] = Some(c);
                    }
                }
            }
            orders.push(m);
            gens.push(g);
            h_size *= m as usize;
        }
        let group = AbelianGroup::new(&orders)?;
        let mut dlog = HashMap::new();
        let mut by_index = vec![Vec::new(); n];
        for (i, c) in coords.into_iter().enumerate() {
            let c = c.ok_or_else(|| Error::Internal("unit without discrete log".into()))?;
            let idx = group.index(&c);
            dlog.insert(units[i].clone(), idx);
            by_index[idx] = units[i].clone();
        }
        let phi = cyclotomic_polynomial(fq, &f)?;
        if phi.len() - 1 != n {
            return Err(Error::Internal("deg Phi_f differs from |(A/f)^x|".into()));
        }
        Ok(CyclotomicField {
            fq: fq.clone(),
            conductor: f,
            phi,
            group,
            gen_reps: gens.iter().map(|&g| units[g].clone()).collect(),
            dlog,
            units: by_index,
        })
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn conductor(&self) -> &[u32] {
        &self.conductor
    }

    pub fn phi(&self) -> &[Vec<u32>] {
        &self.phi
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn group_algebra(&self) -> FqGroupAlgebra {
        GroupAlgebra::new(self.fq.clone(), self.group.clone())
    }

    /// Residue class of the group element at a flat index.
    pub fn unit(&self, idx: usize) -> &[u32] {
        &self.units[idx]
    }

    pub fn generator_representatives(&self) -> &[Vec<u32>] {
        &self.gen_reps
    }

    /// Exponent vector of `[a]` for `a` prime to `f`.
    pub fn discrete_log(&self, a: &[u32]) -> Option<Vec<u64>> {
        let pa = PolyRing::new(self.fq.clone());
        let r = pa.reduce_coords(a, &self.conductor);
        self.dlog.get(&r).map(|&i| self.group.element(i))
    }

    pub fn classify(&self, e: &DrinfeldModule, v: &[u32]) -> Result<PrimeClassification> {
        let fq = &self.fq;
        if !is_irreducible(fq, v) || v.last() != Some(&1) {
            return Err(Error::InvalidArgument("prime must be monic irreducible".into()));
        }
        let a = PolyRing::new(fq.clone());
        let dv = v.len() - 1;
        let n_v = dv;
        let s = a.valuation(&self.conductor, v).unwrap_or(0);
        let mut c = PrimeClassification { v: v.to_vec(), kind: PrimeKind::Unramified, sigma: None, inertia: vec![0], e: 1, f: 1, n_v };
        if !e.has_good_reduction(v) {
            c.kind = PrimeKind::Bad;
            return Ok(c);
        }
        if s >= 2 {
            c.kind = PrimeKind::Wild;
            return Ok(c);
        }
        if s == 0 {
            let sigma = self.discrete_log(v).ok_or_else(|| Error::Internal("prime not invertible mod f".into()))?;
            c.f = self.group.element_order(&sigma);
            c.sigma = Some(sigma);
            return Ok(c);
        }
        // f = v g
        let g = a.div_exact_monic(&self.conductor, v)?;
        let mut inertia = Vec::new();
        let mut sigma = None;
        for (idx, u) in self.units.iter().enumerate() {
            let up = a.normalize(u.clone());
            if a.rem_monic(&a.sub(&up, &a.one()), &g)?.is_empty() {
                inertia.push(idx);
            }
            if sigma.is_none() && a.rem_monic(&a.sub(&up, &a.one()), v)?.is_empty() && a.rem_monic(&a.sub(&up, &v.to_vec()), &g)?.is_empty() {
                sigma = Some(self.group.element(idx));
            }
        }
        let sigma = sigma.ok_or_else(|| Error::Internal("no Frobenius lift found".into()))?;
        c.kind = PrimeKind::Tame;
        c.e = inertia.len() as u64;
        debug_assert_eq!(c.e, (fq.q() as u64).pow(dv as u32) - 1);
        c.f = self.group.element_order(&sigma);
        c.sigma = Some(sigma);
        c.inertia = inertia;
        Ok(c)
    }

    /// All monic irreducibles of degree at most `d`, classified.
    pub fn classify_primes(&self, e: &DrinfeldModule, d: usize) -> Result<Vec<PrimeClassification>> {
        monic_irreducibles_up_to(&self.fq, d).iter().map(|v| self.classify(e, v)).collect()
    }

    /// `e_v = (1/|I_v|) sum_{I_v}`.
    pub fn idempotent(&self, c: &PrimeClassification) -> Result<Vec<u32>> {
        let inv = self.fq.finv(self.fq.from_u64(c.e)).ok_or(Error::WildRamification { e: c.e })?;
        let ga = self.group_algebra();
        Ok(ga.scale(inv, &ga.sum_of(&c.inertia)))
    }

    /// `A/v` with `i(t) = t mod v`, and the reduction of `E` there.
    pub fn reduction(&self, e: &DrinfeldModule, v: &[u32]) -> Result<ReducedDrinfeldModule> {
        let av = ResidueRing::new(&self.fq, v)?;
        e.reduce_with(&av, &av.gen(), v)
    }

    /// `(A/v)[x]/(Phi_f mod v)`.
    pub fn residue_ring(&self, v: &[u32]) -> Result<QuotientAlgebra> {
        let av = ResidueRing::new(&self.fq, v)?;
        let a = PolyRing::new(self.fq.clone());
        let h: Vec<Vec<u32>> = self.phi.iter().map(|c| a.reduce_coords(c, v)).collect();
        QuotientAlgebra::new(&av, &h)
    }

    /// `(O_K/v, E(O_K/v))` as `G`-modules.
    pub fn residue_algebra(&self, e: &DrinfeldModule, v: &[u32]) -> Result<(GTModule, GTModule)> {
        match self.classify(e, v)?.kind {
            PrimeKind::Bad => return Err(Error::BadReduction),
            PrimeKind::Wild => return Err(Error::WildPrime),
            _ => {}
        }
        let red = self.reduction(e, v)?;
        let ring = self.residue_ring(v)?;
        let av = ring.base().clone();
        let a = PolyRing::new(self.fq.clone());
        let embed_a = |c: &Vec<u32>| ring.from_base_elem(&a.reduce_coords(c, v));
        let carlitz = DrinfeldModule::carlitz(&self.fq);
        let skew_a = SkewPolyRing::new(a.clone());
        let y = ring.y();
        let gens = self
            .gen_reps
            .iter()
            .map(|g| {
                let cg = carlitz.phi_of(&a.normalize(g.clone()));
                let image = skew_a.apply_in(&cg, &ring, embed_a, &y);
                ring.linear_map_matrix(|x| ring.substitute(x, &image, |c| c.clone()))
            })
            .collect::<Vec<_>>();
        let it = ring.from_base_elem(&av.gen());
        let plain_t = ring.linear_map_matrix(|x| ring.mul(&it, x));
        let star_t = ring.linear_map_matrix(|x| red.star_action(&ring, |c| ring.from_base_elem(c), x));
        let plain = GTModule::new(&self.fq, &self.group, gens.clone(), plain_t)?;
        let star = GTModule::new(&self.fq, &self.group, gens, star_t)?;
        Ok((plain, star))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::fitting_generator;

    fn f2() -> Fq {
        Fq::prime_field(2).unwrap()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        let fq = f2();
        assert_eq!(cyclotomic_polynomial(&fq, &[0, 1]).unwrap(), vec![vec![0, 1], vec![1]]);
        assert_eq!(cyclotomic_polynomial(&fq, &[0, 0, 1]).unwrap(), vec![vec![0, 1], vec![0, 1], vec![1]]);
        assert_eq!(cyclotomic_polynomial(&fq, &[1, 1, 1]).unwrap().len(), 4);
        assert_eq!(cyclotomic_polynomial(&fq, &[1]).unwrap(), vec![vec![], vec![1]]);
    }

    #[test]
    fn mobius_consistency() {
        let fq = Fq::prime_field(3).unwrap();
        let a = PolyRing::new(fq.clone());
        let ax = PolyRing::new(a.clone());
        for f in [vec![0, 0, 1], vec![0, 1, 1], vec![1, 0, 1], vec![0, 0, 0, 1], vec![0, 2, 0, 1]] {
            let mut prod = ax.one();
            for d in divisors(&fq, &f) {
                prod = ax.mul(&prod, &cyclotomic_polynomial(&fq, &d).unwrap());
            }
            assert_eq!(prod, carlitz_poly(&fq, &f), "f = {f:?}");
        }
    }

    fn divisors(fq: &Fq, f: &[u32]) -> Vec<Vec<u32>> {
        let a = PolyRing::new(fq.clone());
        let mut out = vec![a.one()];
        for (p, k) in factor(fq, f) {
            let mut next = Vec::new();
            for d in &out {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..k {
                    pk = a.mul(&pk, &p);
                    next.push(pk.clone());
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn z3_classification() {
        let fq = f2();
        let k = CyclotomicField::new(&fq, &[1, 1, 1]).unwrap();
        assert_eq!(k.group().orders(), &[3]);
        let c = DrinfeldModule::carlitz(&fq);
        let ps = k.classify_primes(&c, 1).unwrap();
        assert!(ps.iter().all(|p| p.kind == PrimeKind::Unramified && p.f == 3));
        let (plain, star) = k.residue_algebra(&c, &[0, 1]).unwrap();
        assert_eq!(plain.dim(), 3);
        let sigma = ps[0].sigma.clone().unwrap();
        let mut expect = vec![vec![0u32; 3], vec![1, 0, 0]];
        expect[0][k.group().index(&sigma)] = 1;
        assert_eq!(fitting_generator(&star, 0).unwrap().poly, expect);
    }

    #[test]
    fn tame_and_wild() {
        let fq = Fq::prime_field(3).unwrap();
        let k = CyclotomicField::new(&fq, &[0, 1, 1]).unwrap();
        let c = DrinfeldModule::carlitz(&fq);
        let t = k.classify(&c, &[0, 1]).unwrap();
        assert_eq!((t.kind, t.e), (PrimeKind::Tame, 2));
        let k2 = CyclotomicField::new(&fq, &[0, 0, 1]).unwrap();
        assert_eq!(k2.classify(&c, &[0, 1]).unwrap().kind, PrimeKind::Wild);
        assert_eq!(k2.residue_algebra(&c, &[0, 1]).unwrap_err(), Error::WildPrime);
        let bad = DrinfeldModule::new(&fq, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(k.classify(&bad, &[0, 1]).unwrap().kind, PrimeKind::Bad);
        let f2k = CyclotomicField::new(&f2(), &[0, 1]).unwrap();
        let p = f2k.classify(&DrinfeldModule::carlitz(&f2()), &[0, 1]).unwrap();
        assert_eq!((p.kind, p.e), (PrimeKind::Tame, 1));
    }

    #[test]
    fn group_law_matches_carlitz_composition() {
        let fq = Fq::prime_field(3).unwrap();
        let k = CyclotomicField::new(&fq, &[1, 0, 1]).unwrap();
        assert_eq!(k.group().size(), 8);
        let c = DrinfeldModule::carlitz(&fq);
        // GTModule::new checks orders and commutation of the generator actions
        let (plain, star) = k.residue_algebra(&c, &[1, 1]).unwrap();
        assert_eq!(plain.dim(), 8);
        assert_eq!(fitting_generator(&star, 0).unwrap().rank, 1);
        for (i, u) in (0..k.group().size()).map(|i| (i, k.unit(i).to_vec())) {
            assert_eq!(k.group().index(&k.discrete_log(&u).unwrap()), i);
        }
    }
}
