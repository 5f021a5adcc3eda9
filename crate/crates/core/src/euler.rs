//! Both sides of the equivariant Euler-factor identities
//! `rho^-1 P_v(e_v sigma_v) = |E(O_K/v)|_G` and `rho^-1 P_v(0) = Nv = |O_K/v|_G`,
//! their series form, and truncated Euler products `Theta(0)`.

use rayon::prelude::*;

use crate::charpoly::{charpoly_motive, CharPolyResult};
use crate::cyclotomic::{CyclotomicField, PrimeClassification, PrimeKind};
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::galois::GaloisDatum;
use crate::group::FqGroupAlgebra;
use crate::module::{fitting_generator, GTModule};
use crate::poly::monic_polys;
use crate::ring::{FqAlgebra, Ring};
use crate::series::{SeriesRing, TruncatedSeries};

/// A polynomial in `t` over `F_q[G]`, constant first.
pub type GroupPoly = Vec<Vec<u32>>;

/// Evaluates `P_v(e_v sigma_v)`; swappable so that fault injection can be
/// exercised against the identity suites.
pub type PvEvaluator = fn(&CharPolyResult, &FqGroupAlgebra, &[u32], &[u32]) -> Result<GroupPoly>;

/// `sum_i a_i(t) x^i` for `x` in `F_q[G]`.
pub fn substitute_group_element(cp: &CharPolyResult, ga: &FqGroupAlgebra, x: &[u32]) -> GroupPoly {
    let deg = cp.coeffs.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out = vec![ga.zero(); deg];
    let mut xp = ga.one();
    for a in &cp.coeffs {
        for (j, &c) in a.iter().enumerate() {
            if c != 0 {
                out[j] = ga.add(&out[j], &ga.scale(c, &xp));
            }
        }
        xp = ga.mul(&xp, &x.to_vec());
    }
    trim(ga, out)
}

fn trim(ga: &FqGroupAlgebra, mut p: GroupPoly) -> GroupPoly {
    while p.last().is_some_and(|c| ga.is_zero(c)) {
        p.pop();
    }
    p
}

/// `P_v(e_v sigma_v)`, by direct substitution and by
/// `e_v P_v(sigma_v) + (1 - e_v) P_v(0)`; the two must agree.
pub fn pv_at_idempotent(cp: &CharPolyResult, ga: &FqGroupAlgebra, e_v: &[u32], sigma: &[u32]) -> Result<GroupPoly> {
    let direct = substitute_group_element(cp, ga, &ga.mul(&e_v.to_vec(), &sigma.to_vec()));
    let split = split_form(cp, ga, e_v, sigma, false);
    if direct != split {
        return Err(Error::OracleMismatch("P_v(e_v sigma_v) differs from e_v P_v(sigma_v) + (1 - e_v) P_v(0)".into()));
    }
    Ok(direct)
}

fn split_form(cp: &CharPolyResult, ga: &FqGroupAlgebra, e_v: &[u32], sigma: &[u32], flip: bool) -> GroupPoly {
    let at_sigma = substitute_group_element(cp, ga, sigma);
    let at_zero = substitute_group_element(cp, ga, &ga.zero());
    let e = e_v.to_vec();
    let mut comp = ga.sub(&ga.one(), &e);
    if flip {
        comp = ga.neg(&comp);
    }
    let n = at_sigma.len().max(at_zero.len());
    let get = |p: &GroupPoly, i: usize| p.get(i).cloned().unwrap_or_else(|| ga.zero());
    let out = (0..n).map(|i| ga.add(&ga.mul(&e, &get(&at_sigma, i)), &ga.mul(&comp, &get(&at_zero, i)))).collect();
    trim(ga, out)
}

/// Fault-injection fixture: the splitting formula with the sign of the
/// `(1 - e_v)` term flipped and no internal cross-check.
pub fn pv_at_idempotent_flipped(cp: &CharPolyResult, ga: &FqGroupAlgebra, e_v: &[u32], sigma: &[u32]) -> Result<GroupPoly> {
    Ok(split_form(cp, ga, e_v, sigma, true))
}

fn scale_poly(ga: &FqGroupAlgebra, c: u32, p: &GroupPoly) -> GroupPoly {
    trim(ga, p.iter().map(|x| ga.scale(c, x)).collect())
}

fn is_monic_of_degree(ga: &FqGroupAlgebra, p: &GroupPoly, d: usize) -> bool {
    p.len() == d + 1 && ga.is_one(&p[d])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactorReport {
    pub description: String,
    pub p_v: CharPolyResult,
    pub rho: u32,
    pub nv: Vec<u32>,
    pub e_v: Vec<u32>,
    pub sigma_v: Vec<u64>,
    pub lhs_unit: GroupPoly,
    pub rhs_unit: GroupPoly,
    pub lhs_norm: GroupPoly,
    pub rhs_norm: GroupPoly,
    pub unit_identity: bool,
    pub norm_identity: bool,
    pub monic_degree: bool,
    pub series_precision: usize,
    pub series_identity: bool,
}

impl EulerFactorReport {
    pub fn all_pass(&self) -> bool {
        self.unit_identity && self.norm_identity && self.monic_degree && self.series_identity
    }
}

/// Everything needed to evaluate both sides at one prime.
pub struct EulerInstance<'a> {
    pub description: String,
    pub ga: FqGroupAlgebra,
    pub cp: CharPolyResult,
    pub e_v: Vec<u32>,
    pub sigma_v: Vec<u64>,
    pub plain: &'a GTModule,
    pub star: &'a GTModule,
}

pub fn evaluate_identity(inst: &EulerInstance, eval: PvEvaluator, seed: u64, precision: usize) -> Result<EulerFactorReport> {
    let ga = &inst.ga;
    let fq = ga.base_field().clone();
    let cp = &inst.cp;
    let rho_inv = fq.finv(cp.rho).ok_or_else(|| Error::Internal("rho vanished".into()))?;
    let sigma = ga.group_elem(&inst.sigma_v);
    let lhs_unit = scale_poly(ga, rho_inv, &eval(cp, ga, &inst.e_v, &sigma)?);
    let lhs_norm = scale_poly(ga, rho_inv, &substitute_group_element(cp, ga, &ga.zero()));
    let rhs_unit = fitting_generator(inst.star, seed)?.poly;
    let rhs_norm = fitting_generator(inst.plain, seed.wrapping_add(1))?.poly;
    let nv = cp.norm(&fq);
    let nv_group: GroupPoly = nv.iter().map(|&c| ga.from_base(c)).collect();
    let n = cp.n_v;
    let monic_degree = [&lhs_unit, &rhs_unit, &lhs_norm, &rhs_norm].iter().all(|p| is_monic_of_degree(ga, p, n));
    let sr = SeriesRing::new(ga.clone());
    let series_identity = monic_degree && {
        let s = |p: &GroupPoly| sr.from_poly_normalized(p, precision);
        let lhs = sr.div(&s(&lhs_unit), &s(&lhs_norm))?;
        let rhs = sr.div(&s(&rhs_unit), &s(&rhs_norm))?;
        sr.agreement(&lhs, &rhs) > precision
    };
    Ok(EulerFactorReport {
        description: inst.description.clone(),
        p_v: cp.clone(),
        rho: cp.rho,
        unit_identity: lhs_unit == rhs_unit,
        norm_identity: lhs_norm == rhs_norm && lhs_norm == nv_group,
        nv,
        e_v: inst.e_v.clone(),
        sigma_v: inst.sigma_v.clone(),
        lhs_unit,
        rhs_unit,
        lhs_norm,
        rhs_norm,
        monic_degree,
        series_precision: precision,
        series_identity,
    })
}

pub fn verify_synthetic(d: &GaloisDatum, eval: PvEvaluator, seed: u64, precision: usize) -> Result<EulerFactorReport> {
    let cp = charpoly_motive(d.reduction())?;
    let (plain, star) = d.global_residue()?;
    let inst = EulerInstance {
        description: format!("synthetic G={:?} n_v={} e={} f={}", d.group().orders(), d.n_v(), d.e(), d.f()),
        ga: d.group_algebra(),
        cp,
        e_v: d.idempotent()?,
        sigma_v: d.sigma().to_vec(),
        plain: &plain,
        star: &star,
    };
    evaluate_identity(&inst, eval, seed, precision)
}

pub fn verify_cyclotomic(k: &CyclotomicField, e: &DrinfeldModule, v: &[u32], eval: PvEvaluator, seed: u64, precision: usize) -> Result<EulerFactorReport> {
    let c = k.classify(e, v)?;
    let sigma = good_tame_sigma(&c)?;
    let red = k.reduction(e, v)?;
    let cp = charpoly_motive(&red)?;
    let (plain, star) = k.residue_algebra(e, v)?;
    let inst = EulerInstance {
        description: format!("cyclotomic f={:?} v={:?} {:?}", k.conductor(), v, c.kind),
        ga: k.group_algebra(),
        cp,
        e_v: k.idempotent(&c)?,
        sigma_v: sigma,
        plain: &plain,
        star: &star,
    };
    evaluate_identity(&inst, eval, seed, precision)
}

fn good_tame_sigma(c: &PrimeClassification) -> Result<Vec<u64>> {
    match c.kind {
        PrimeKind::Bad => Err(Error::BadReduction),
        PrimeKind::Wild => Err(Error::WildPrime),
        _ => c.sigma.clone().ok_or_else(|| Error::Internal("missing Frobenius".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTruncation {
    pub conductor: Vec<u32>,
    pub degree_bound: usize,
    pub requested_precision: usize,
    /// `min(N, floor(D / r))`
    pub guaranteed_precision: usize,
    pub value: TruncatedSeries<Vec<u32>>,
    /// good tame primes used, in enumeration order
    pub factors: Vec<Vec<u32>>,
    pub excluded: Vec<(Vec<u32>, PrimeKind)>,
}

/// `P_v(0) / P_v(e_v sigma_v)` as a series in `1/t`.
pub fn euler_factor_series(k: &CyclotomicField, e: &DrinfeldModule, c: &PrimeClassification, n: usize) -> Result<TruncatedSeries<Vec<u32>>> {
    let ga = k.group_algebra();
    let sigma = ga.group_elem(&good_tame_sigma(c)?);
    let cp = charpoly_motive(&k.reduction(e, &c.v)?)?;
    let num = substitute_group_element(&cp, &ga, &ga.zero());
    let den = pv_at_idempotent(&cp, &ga, &k.idempotent(c)?, &sigma)?;
    let sr = SeriesRing::new(ga);
    // both have t-degree n_v and leading coefficient rho
    sr.div(&sr.from_poly_normalized(&num, n), &sr.from_poly_normalized(&den, n))
}

/// Product of the Euler factors over good tame primes of degree `<= d`,
/// to `1/t`-precision `n`.
pub fn theta_truncated(k: &CyclotomicField, e: &DrinfeldModule, d: usize, n: usize) -> Result<ThetaTruncation> {
    let classes = if d == 0 { Vec::new() } else { k.classify_primes(e, d)? };
    let (good, bad): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| c.is_good_tame());
    let factors: Vec<TruncatedSeries<Vec<u32>>> = good.par_iter().map(|c| euler_factor_series(k, e, c, n)).collect::<Result<_>>()?;
    let sr = SeriesRing::new(k.group_algebra());
    let value = factors.iter().fold(sr.one(n), |acc, f| sr.mul(&acc, f));
    Ok(ThetaTruncation {
        conductor: k.conductor().to_vec(),
        degree_bound: d,
        requested_precision: n,
        guaranteed_precision: n.min(d / e.rank()),
        value,
        factors: good.into_iter().map(|c| c.v).collect(),
        excluded: bad.into_iter().map(|c| (c.v, c.kind)).collect(),
    })
}

/// `sum_{a monic, deg a <= n} 1/a` to `1/t`-precision `n`.
pub fn dirichlet_check(fq: &Fq, n: usize) -> Result<TruncatedSeries<u32>> {
    let sr = SeriesRing::new(fq.clone());
    let mut acc = sr.from_coeffs(vec![0], n);
    for d in 0..=n {
        for a in monic_polys(fq, d) {
            let inv = sr.inverse(&sr.from_poly_normalized(&a, n))?;
            // 1/a = t^-d (a / t^d)^-1
            let mut shifted = vec![0u32; d];
            shifted.extend_from_slice(&inv.coeffs[..=n - d]);
            acc = sr.add(&acc, &sr.from_coeffs(shifted, n));
        }
    }
    Ok(acc)
}

/// Agreement precision of a trivial-group `Theta` with the Dirichlet sum:
/// the largest `k` with coefficients `t^0..t^-k` equal.
pub fn dirichlet_agreement(theta: &ThetaTruncation, fq: &Fq) -> Result<Option<usize>> {
    let n = theta.requested_precision;
    let dir = dirichlet_check(fq, n)?;
    if theta.value.coeffs.first().map(|c| c.len()) != Some(1) {
        return Err(Error::InvalidArgument("Dirichlet comparison needs a trivial group".into()));
    }
    let th: Vec<u32> = theta.value.coeffs.iter().map(|c| c[0]).collect();
    let agree = (0..=n).find(|&k| th[k] != dir.coeffs[k]).unwrap_or(n + 1);
    Ok(agree.checked_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::ReducedDrinfeldModule;
    use crate::field::field_tower;
    use crate::group::AbelianGroup;

    fn tame_z2() -> GaloisDatum {
        let f3 = Fq::prime_field(3).unwrap();
        let l1 = field_tower(&f3, 1).unwrap();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![0], vec![1]]).unwrap();
        GaloisDatum::new(&AbelianGroup::new(&[2]).unwrap(), &[0], &[1], &red).unwrap()
    }

    #[test]
    fn tame_z2_identity() {
        let r = verify_synthetic(&tame_z2(), pv_at_idempotent, 0, 6).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.lhs_unit, vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(r.lhs_norm, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(r.rho, 2);
    }

    #[test]
    fn flipped_sign_is_detected() {
        let r = verify_synthetic(&tame_z2(), pv_at_idempotent_flipped, 0, 6).unwrap();
        assert!(!r.unit_identity);
    }

    #[test]
    fn z3_carlitz_identity() {
        let f2 = Fq::prime_field(2).unwrap();
        let k = CyclotomicField::new(&f2, &[1, 1, 1]).unwrap();
        let c = DrinfeldModule::carlitz(&f2);
        for v in [vec![0, 1], vec![1, 1], vec![1, 1, 0, 1]] {
            let r = verify_cyclotomic(&k, &c, &v, pv_at_idempotent, 0, 5).unwrap();
            assert!(r.all_pass(), "{r:?}");
        }
    }

    #[test]
    fn dirichlet_small() {
        let f2 = Fq::prime_field(2).unwrap();
        let s = dirichlet_check(&f2, 4).unwrap();
        // 1/t + 1/(t+1) = t^-2 + t^-3 + ..., so the t^-1 terms cancel
        assert_eq!(s.coeffs[0], 1);
        assert_eq!(s.coeffs[1], 0);
        let d1 = dirichlet_check(&f2, 1).unwrap();
        assert_eq!(d1.coeffs, vec![1, 0]);
    }

    #[test]
    fn theta_empty_and_trivial_group() {
        let f2 = Fq::prime_field(2).unwrap();
        let k = CyclotomicField::new(&f2, &[0, 1]).unwrap();
        let c = DrinfeldModule::carlitz(&f2);
        let th0 = theta_truncated(&k, &c, 0, 3).unwrap();
        assert_eq!(th0.value.coeffs[0], vec![1]);
        assert!(th0.value.coeffs[1..].iter().all(|x| x == &vec![0]));
        let th = theta_truncated(&k, &c, 4, 4).unwrap();
        assert_eq!(dirichlet_agreement(&th, &f2).unwrap(), Some(4));
    }
}
