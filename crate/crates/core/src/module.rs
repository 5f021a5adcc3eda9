//! Finite `F_q`-spaces with commuting actions of a finite abelian group `G`
//! and of `t`, i.e. finite `A[G]`-modules, together with the free-basis
//! search and the monic Fitting generator over `F_q[G][t]`.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::group::{AbelianGroup, FqGroupAlgebra, GroupAlgebra};
use crate::linalg::{Echelon, FqMat};
use crate::matrix::berkowitz_charpoly;
use crate::poly::PolyRing;
use crate::rng::Prng;

/// Largest `q^dim` searched exhaustively when certifying non-freeness.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
/// Largest dimension searched exhaustively.
pub const EXHAUSTIVE_MAX_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTModule {
    fq: Fq,
    group: AbelianGroup,
    /// matrix of each cyclic generator of `group`
    gens: Vec<FqMat>,
    t: FqMat,
    /// matrix of every group element, by flat index
    actions: Vec<FqMat>,
}

impl GTModule {
    pub fn new(fq: &Fq, group: &AbelianGroup, gens: Vec<FqMat>, t: FqMat) -> Result<Self> {
        let n = t.rows();
        if gens.len() != group.rank() || gens.iter().chain([&t]).any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::InvalidArgument("action matrices do not match the module dimension or group rank".into()));
        }
        let id = FqMat::identity(n);
        for (g, &m) in gens.iter().zip(group.orders()) {
            if g.pow(fq, m) != id {
                return Err(Error::InvalidArgument("generator action has the wrong order".into()));
            }
            if g.mul(fq, &t) != t.mul(fq, g) {
                return Err(Error::InvalidArgument("t-action does not commute with the group action".into()));
            }
        }
        for a in &gens {
            for b in &gens {
                if a.mul(fq, b) != b.mul(fq, a) {
                    return Err(Error::InvalidArgument("group actions do not commute".into()));
                }
            }
        }
        let actions = group
            .elements()
            .map(|g| {
                g.iter().zip(&gens).fold(FqMat::identity(n), |acc, (&k, m)| acc.mul(fq, &m.pow(fq, k)))
            })
            .collect();
        Ok(GTModule { fq: fq.clone(), group: group.clone(), gens, t, actions })
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    pub fn t_action(&self) -> &FqMat {
        &self.t
    }

    pub fn generator_actions(&self) -> &[FqMat] {
        &self.gens
    }

    pub fn action(&self, g: &[u64]) -> &FqMat {
        &self.actions[self.group.index(g)]
    }

    pub fn action_by_index(&self, idx: usize) -> &FqMat {
        &self.actions[idx]
    }

    /// `g x` for all `g`, in flat index order.
    pub fn orbit(&self, x: &[u32]) -> Vec<Vec<u32>> {
        self.actions.iter().map(|m| m.mul_vec(&self.fq, x)).collect()
    }

    /// The same `G`-module with a different `t`-action.
    pub fn with_t(&self, t: FqMat) -> Result<Self> {
        GTModule::new(&self.fq, &self.group, self.gens.clone(), t)
    }

    /// Matrix of an element of `F_q[G]`.
    pub fn group_algebra_action(&self, a: &[u32]) -> FqMat {
        let n = self.dim();
        let mut acc = FqMat::zeros(n, n);
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.fq, &self.actions[i].scale(&self.fq, c));
            }
        }
        acc
    }

    /// `p(t)` for a polynomial over `F_q`.
    pub fn t_poly_action(&self, p: &[u32]) -> FqMat {
        let n = self.dim();
        let mut acc = FqMat::zeros(n, n);
        for &c in p.iter().rev() {
            acc = acc.mul(&self.fq, &self.t).add(&self.fq, &FqMat::identity(n).scale(&self.fq, c));
        }
        acc
    }

    pub fn direct_sum(&self, other: &GTModule) -> Result<GTModule> {
        if self.group != other.group || self.fq != other.fq {
            return Err(Error::AmbientMismatch);
        }
        let bd = |a: &FqMat, b: &FqMat| {
            let (n, m) = (a.rows(), b.rows());
            let mut out = FqMat::zeros(n + m, n + m);
            for i in 0..n {
                for j in 0..n {
                    out.set(i, j, a.get(i, j));
                }
            }
            for i in 0..m {
                for j in 0..m {
                    out.set(n + i, n + j, b.get(i, j));
                }
            }
            out
        };
        let gens = self.gens.iter().zip(&other.gens).map(|(a, b)| bd(a, b)).collect();
        GTModule::new(&self.fq, &self.group, gens, bd(&self.t, &other.t))
    }

    /// Restriction to an invariant subspace spanned by the given
    /// independent vectors.
    pub fn restrict(&self, basis: &[Vec<u32>]) -> Result<GTModule> {
        let fq = &self.fq;
        let mut ech = Echelon::new(fq, self.dim());
        for b in basis {
            if !ech.insert(b) {
                return Err(Error::InvalidArgument("restriction basis is dependent".into()));
            }
        }
        let restrict_map = |m: &FqMat| -> Result<FqMat> {
            let cols = basis
                .iter()
                .map(|b| ech.express(&m.mul_vec(fq, b)).ok_or_else(|| Error::InvalidArgument("subspace is not invariant".into())))
                .collect::<Result<Vec<_>>>()?;
            Ok(FqMat::from_cols(&cols, basis.len()))
        };
        let gens = self.gens.iter().map(restrict_map).collect::<Result<Vec<_>>>()?;
        GTModule::new(fq, &self.group, gens, restrict_map(&self.t)?)
    }

    /// Quotient by an invariant subspace spanned by the given vectors.
    pub fn quotient(&self, sub: &[Vec<u32>]) -> Result<GTModule> {
        let fq = &self.fq;
        let n = self.dim();
        let mut ech = Echelon::new(fq, n);
        for s in sub {
            ech.insert(s);
        }
        let k = ech.dim();
        // complement: standard basis vectors outside the span
        let mut comp = Vec::new();
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            if ech.insert(&e) {
                comp.push(e);
            }
        }
        // ech now expresses vectors in (sub-basis, complement) coordinates
        let proj = |v: &[u32]| -> Vec<u32> { ech.express(v).expect("full span")[k..].to_vec() };
        let quot_map = |m: &FqMat| -> FqMat {
            let cols: Vec<Vec<u32>> = comp.iter().map(|c| proj(&m.mul_vec(fq, c))).collect();
            FqMat::from_cols(&cols, comp.len())
        };
        let gens = self.gens.iter().map(quot_map).collect();
        GTModule::new(fq, &self.group, gens, quot_map(&self.t))
    }

    /// The image `p(t) M`.
    pub fn image_of_t_poly(&self, p: &[u32]) -> Vec<Vec<u32>> {
        let m = self.t_poly_action(p);
        let mut ech = Echelon::new(&self.fq, self.dim());
        for j in 0..self.dim() {
            ech.insert(&m.col(j));
        }
        ech.basis()
    }
}

/// `F_q[G]^m` with `t` acting by zero.
pub fn regular_module(fq: &Fq, group: &AbelianGroup, m: usize) -> Result<GTModule> {
    let s = group.size();
    let n = s * m;
    let gens = (0..group.rank())
        .map(|i| {
            let g = group.generator(i);
            let mut mat = FqMat::zeros(n, n);
            for c in 0..m {
                for (k, h) in group.elements().enumerate() {
                    mat.set(c * s + group.index(&group.op(&g, &h)), c * s + k, 1);
                }
            }
            mat
        })
        .collect();
    GTModule::new(fq, group, gens, FqMat::zeros(n, n))
}

impl GTModule {
    /// The submodule `a M` for `a` in `F_q[G]`.
    pub fn image_of(&self, a: &[u32]) -> Result<GTModule> {
        let m = self.group_algebra_action(a);
        let mut ech = Echelon::new(&self.fq, self.dim());
        for j in 0..self.dim() {
            ech.insert(&m.col(j));
        }
        self.restrict(&ech.basis())
    }
}

/// `m` elements whose `G`-translates form an `F_q`-basis.
#[derive(Clone, Debug)]
pub struct FreeBasisCertificate {
    pub basis: Vec<Vec<u32>>,
    /// echelon of `g x_i`, inserted in order `(i, g)` with `g` inner
    span: Echelon,
}

impl FreeBasisCertificate {
    /// Coordinates of `v` in the basis `{g x_i}`, index `i |G| + g`.
    pub fn express(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.span.express(v)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Try to add the orbit of `x` to the span; commits only on success.
fn try_extend(module: &GTModule, span: &Echelon, x: &[u32]) -> Option<Echelon> {
    let mut next = span.clone();
    module.orbit(x).iter().all(|v| next.insert(v)).then_some(next)
}

/// Search for an `F_q[G]`-basis. Random greedy search first; if the budget
/// runs out and the module is small, an exhaustive greedy sweep either
/// completes the basis or certifies non-freeness. Greedy extension is
/// complete because free `F_q[G]`-modules are injective, so any free
/// submodule generated by part of a basis is a direct summand.
pub fn find_free_basis(module: &GTModule, seed: u64) -> Result<FreeBasisCertificate> {
    find_free_basis_with_budget(module, seed, random_budget(module.fq().q() as u64, module.group()))
}

/// Fraction of units in `F_q[G]`. The semisimple quotient is a product of
/// fields `F_{q^d}`, one per orbit of `g -> g^q` on the `p'`-part of `G`.
pub fn unit_fraction(q: u64, p: u64, group: &AbelianGroup) -> f64 {
    let mut seen = vec![false; group.size()];
    let mut frac = 1.0;
    for idx in 0..group.size() {
        let g = group.element(idx);
        if seen[idx] || group.element_order(&g).is_multiple_of(p) {
            continue;
        }
        let mut d = 0;
        let mut h = g;
        while !seen[group.index(&h)] {
            seen[group.index(&h)] = true;
            d += 1;
            h = group.scale(&h, q);
        }
        frac *= 1.0 - (q as f64).powi(-d);
    }
    frac
}

/// Attempts per basis vector. A random vector extends a partial basis of a
/// free module with probability at least the unit fraction `u`, so
/// `30 / u` attempts miss with probability below `e^-30`.
fn random_budget(q: u64, group: &AbelianGroup) -> usize {
    let p = crate::field::prime_factors(q)[0];
    let u = unit_fraction(q, p, group);
    ((30.0 / u).ceil() as usize).max(64)
}

pub fn find_free_basis_with_budget(module: &GTModule, seed: u64, budget_per_vector: usize) -> Result<FreeBasisCertificate> {
    let fq = module.fq();
    let n = module.dim();
    let s = module.group().size();
    if !n.is_multiple_of(s) {
        return Err(Error::NotFree);
    }
    let m = n / s;
    let mut rng = Prng::new(seed);
    let mut span = Echelon::new(fq, n);
    let mut basis: Vec<Vec<u32>> = Vec::with_capacity(m);
    let q = fq.q() as u64;
    'outer: while basis.len() < m {
        for _ in 0..budget_per_vector {
            let x: Vec<u32> = (0..n).map(|_| rng.below(q) as u32).collect();
            if let Some(next) = try_extend(module, &span, &x) {
                span = next;
                basis.push(x);
                continue 'outer;
            }
        }
        let total = (q as f64).powi(n as i32);
        if n > EXHAUSTIVE_MAX_DIM || total > EXHAUSTIVE_LIMIT as f64 {
            return Err(Error::NotFreeProbably);
        }
        for idx in 1..q.pow(n as u32) {
            let mut x = vec![0u32; n];
            let mut k = idx;
            for c in x.iter_mut() {
                *c = (k % q) as u32;
                k /= q;
            }
            if let Some(next) = try_extend(module, &span, &x) {
                span = next;
                basis.push(x);
                continue 'outer;
            }
        }
        return Err(Error::NotFree);
    }
    Ok(FreeBasisCertificate { basis, span })
}

/// `|M|_G = det(t - T)` in `F_q[G][t]`, constant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicGenerator {
    pub poly: Vec<Vec<u32>>,
    pub rank: usize,
}

/// Matrix of `t` over `F_q[G]` in a free basis.
pub fn t_matrix_over_group_algebra(module: &GTModule, cert: &FreeBasisCertificate) -> Result<Vec<Vec<Vec<u32>>>> {
    let s = module.group().size();
    let m = cert.rank();
    let mut mat = vec![vec![vec![0u32; s]; m]; m];
    for (j, x) in cert.basis.iter().enumerate() {
        let tx = module.t_action().mul_vec(module.fq(), x);
        let c = cert.express(&tx).ok_or_else(|| Error::Internal("free basis does not span".into()))?;
        for i in 0..m {
            mat[i][j] = c[i * s..(i + 1) * s].to_vec();
        }
    }
    Ok(mat)
}

pub fn monic_generator(module: &GTModule, cert: &FreeBasisCertificate) -> Result<MonicGenerator> {
    let ga = GroupAlgebra::new(module.fq().clone(), module.group().clone());
    let mat = t_matrix_over_group_algebra(module, cert)?;
    let poly = berkowitz_charpoly(&ga, &mat)?;
    Ok(MonicGenerator { poly, rank: cert.rank() })
}

/// Free basis search followed by the monic generator.
pub fn fitting_generator(module: &GTModule, seed: u64) -> Result<MonicGenerator> {
    monic_generator(module, &find_free_basis(module, seed)?)
}

/// Polynomial ring `F_q[G][t]`.
pub fn group_poly_ring(ga: &FqGroupAlgebra) -> PolyRing<FqGroupAlgebra> {
    PolyRing::new(ga.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuotientAlgebra;
    use crate::field::field_tower;
    use crate::ring::{FiniteFqAlgebra, FqAlgebra, Ring};

    fn tame_z2_modules() -> (GTModule, GTModule) {
        // F_3[u]/(u^2), gamma: u -> 2u, t acts by 0 (plain) or by x -> x^3 (star)
        let f3 = Fq::prime_field(3).unwrap();
        let l = field_tower(&f3, 1).unwrap();
        let alg = QuotientAlgebra::new(&l, &[vec![0], vec![0], vec![1]]).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        let gamma = alg.linear_map_matrix(|x| alg.substitute(x, &alg.scale(2, &alg.y()), |c| c.clone()));
        let star = alg.linear_map_matrix(|x| alg.frobenius(x));
        let plain = GTModule::new(&f3, &g, vec![gamma.clone()], FqMat::zeros(2, 2)).unwrap();
        let star = GTModule::new(&f3, &g, vec![gamma], star).unwrap();
        (plain, star)
    }

    #[test]
    fn tame_z2_generators() {
        let (plain, star) = tame_z2_modules();
        let cert = find_free_basis(&star, 0).unwrap();
        assert_eq!(cert.rank(), 1);
        let mg = monic_generator(&star, &cert).unwrap();
        assert_eq!(mg.poly, vec![vec![1, 1], vec![1, 0]]);
        let mp = fitting_generator(&plain, 1).unwrap();
        assert_eq!(mp.poly, vec![vec![0, 0], vec![1, 0]]);
        // basis independence
        for seed in 2..6 {
            assert_eq!(fitting_generator(&star, seed).unwrap(), mg);
        }
    }

    #[test]
    fn trivial_group_field() {
        let f2 = Fq::prime_field(2).unwrap();
        let f4 = field_tower(&f2, 2).unwrap();
        let w = f4.gen();
        let cols: Vec<Vec<u32>> = f4.basis().iter().map(|b| f4.mul(&w, b)).collect();
        let m = GTModule::new(&f2, &AbelianGroup::trivial(), vec![], FqMat::from_cols(&cols, 2)).unwrap();
        assert_eq!(fitting_generator(&m, 0).unwrap().poly, vec![vec![1], vec![1], vec![1]]);
    }

    #[test]
    fn unit_fractions() {
        let v4 = AbelianGroup::new(&[2, 2, 2]).unwrap();
        assert!((unit_fraction(3, 3, &v4) - (2.0f64 / 3.0).powi(8)).abs() < 1e-12);
        // F_2[Z/7] = F_2 x F_8 x F_8
        let z7 = AbelianGroup::new(&[7]).unwrap();
        assert!((unit_fraction(2, 2, &z7) - 0.5 * (7.0f64 / 8.0).powi(2)).abs() < 1e-12);
        // F_2[Z/2] is local
        assert_eq!(unit_fraction(2, 2, &AbelianGroup::new(&[2]).unwrap()), 0.5);
    }

    #[test]
    fn certified_not_free() {
        let f2 = Fq::prime_field(2).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        let m = GTModule::new(&f2, &g, vec![FqMat::identity(2)], FqMat::zeros(2, 2)).unwrap();
        assert_eq!(find_free_basis(&m, 0).unwrap_err(), Error::NotFree);
    }

    #[test]
    fn direct_sum_multiplicative() {
        let (plain, star) = tame_z2_modules();
        let sum = star.direct_sum(&plain).unwrap();
        let ga = GroupAlgebra::new(star.fq().clone(), star.group().clone());
        let gt = group_poly_ring(&ga);
        let a = fitting_generator(&star, 0).unwrap().poly;
        let b = fitting_generator(&plain, 0).unwrap().poly;
        assert_eq!(fitting_generator(&sum, 0).unwrap().poly, gt.mul(&a, &b));
    }

    #[test]
    fn restrict_and_quotient() {
        let (_, star) = tame_z2_modules();
        // u-line is invariant under gamma and under x -> x^3
        let sub = vec![vec![0, 1]];
        let r = star.restrict(&sub).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.generator_actions()[0].get(0, 0), 2);
        let q = star.quotient(&sub).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.t_action().get(0, 0), 1);
    }
}
