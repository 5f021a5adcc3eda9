//! Synthetic tame local Galois data: a decomposition group
//! `G_v = <sigma_v> x I_v` inside an abelian `G`, the local residue ring
//! `F_{q^(n_v f)}[u]/(u^e)` with its `G_v`-action, and induction to `G`.

use crate::algebra::QuotientAlgebra;
use crate::drinfeld::ReducedDrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{field_tower, Embedding, Fq, ResidueRing};
use crate::group::{AbelianGroup, FqGroupAlgebra, GroupAlgebra};
use crate::linalg::FqMat;
use crate::module::GTModule;
use crate::ring::{FqAlgebra, Ring};

#[derive(Clone, Debug)]
pub struct GaloisDatum {
    group: AbelianGroup,
    sigma: Vec<u64>,
    /// generator of `I_v`
    gamma: Vec<u64>,
    e: u64,
    f: u64,
    red: ReducedDrinfeldModule,
    zeta: Vec<u32>,
    /// flat index in `G` of `sigma^a gamma^b`, at `a + f b`
    local_to_global: Vec<usize>,
}

/// `(1/|H|) sum_{h in H} h` for the subgroup `H` generated by `gens`.
pub fn subgroup_idempotent(fq: &Fq, group: &AbelianGroup, gens: &[Vec<u64>]) -> Result<Vec<u32>> {
    let h = group.subgroup(gens);
    let size = fq.from_u64(h.len() as u64);
    let inv = fq.finv(size).ok_or(Error::WildRamification { e: h.len() as u64 })?;
    let ga = GroupAlgebra::new(fq.clone(), group.clone());
    Ok(ga.scale(inv, &ga.sum_of(&h)))
}

impl GaloisDatum {
    /// `sigma` of order `f` and `gamma` of order `e` with trivially
    /// intersecting cyclic subgroups; `red` is defined over `F_{q^n_v}`.
    pub fn new(group: &AbelianGroup, sigma: &[u64], gamma: &[u64], red: &ReducedDrinfeldModule) -> Result<Self> {
        if !group.is_valid(sigma) || !group.is_valid(gamma) {
            return Err(Error::ParameterMismatch("sigma_v or the inertia generator is not an element of G".into()));
        }
        let fq = red.fq();
        let f = group.element_order(sigma);
        let e = group.element_order(gamma);
        if fq.from_u64(e) == 0 {
            return Err(Error::WildRamification { e });
        }
        let q_nv = (fq.q() as u64).checked_pow(red.n_v() as u32).ok_or_else(|| Error::ParameterMismatch("q^n_v overflows".into()))?;
        if (q_nv - 1) % e != 0 {
            return Err(Error::ParameterMismatch(format!("inertia order {e} does not divide q^n_v - 1 = {}", q_nv - 1)));
        }
        let local = group.subgroup(&[sigma.to_vec(), gamma.to_vec()]);
        if local.len() as u64 != e * f {
            return Err(Error::ParameterMismatch("<sigma_v> meets I_v nontrivially".into()));
        }
        let mut local_to_global = vec![0; (e * f) as usize];
        for b in 0..e {
            for a in 0..f {
                let g = group.op(&group.scale(sigma, a), &group.scale(gamma, b));
                local_to_global[(a + f * b) as usize] = group.index(&g);
            }
        }
        let l1 = red.field();
        let g = l1.primitive_element()?;
        let zeta = l1.pow(&g, (q_nv - 1) / e);
        Ok(GaloisDatum {
            group: group.clone(),
            sigma: sigma.to_vec(),
            gamma: gamma.to_vec(),
            e,
            f,
            red: red.clone(),
            zeta,
            local_to_global,
        })
    }

    /// The unramified datum with cyclic `G = <sigma_v>` of order `f`.
    pub fn unramified(red: &ReducedDrinfeldModule, f: u64) -> Result<Self> {
        let g = AbelianGroup::new(&[f])?;
        GaloisDatum::new(&g, &[1 % f], &[0], red)
    }

    pub fn fq(&self) -> &Fq {
        self.red.fq()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn sigma(&self) -> &[u64] {
        &self.sigma
    }

    pub fn inertia_generator(&self) -> &[u64] {
        &self.gamma
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn n_v(&self) -> usize {
        self.red.n_v()
    }

    pub fn reduction(&self) -> &ReducedDrinfeldModule {
        &self.red
    }

    pub fn zeta(&self) -> &[u32] {
        &self.zeta
    }

    /// `G_v = Z/f x Z/e`, generators `sigma_v` then `gamma`.
    pub fn local_group(&self) -> AbelianGroup {
        AbelianGroup::new(&[self.f, self.e]).expect("small group")
    }

    /// Flat indices in `G` of the elements of `G_v`, in local index order.
    pub fn local_to_global(&self) -> &[usize] {
        &self.local_to_global
    }

    /// The same datum with `sigma_v` replaced by another lift `sigma_v gamma^k`.
    pub fn with_frobenius_lift(&self, k: u64) -> Result<Self> {
        let s = self.group.op(&self.sigma, &self.group.scale(&self.gamma, k));
        GaloisDatum::new(&self.group, &s, &self.gamma, &self.red)
    }

    /// `e_v` in `F_q[G]`.
    pub fn idempotent(&self) -> Result<Vec<u32>> {
        subgroup_idempotent(self.fq(), &self.group, std::slice::from_ref(&self.gamma))
    }

    /// `e_v` in `F_q[G_v]`.
    pub fn local_idempotent(&self) -> Result<Vec<u32>> {
        let gv = self.local_group();
        subgroup_idempotent(self.fq(), &gv, &[gv.generator(1)])
    }

    /// `Nv`, monic of degree `n_v`.
    pub fn norm_ideal(&self) -> Vec<u32> {
        self.red.norm()
    }

    /// `F_{q^(n_v f)}[u]/(u^e)` and the embedding of `F_{q^n_v}` into its
    /// constants.
    pub fn local_residue_ring(&self) -> Result<(QuotientAlgebra, Embedding)> {
        let lf = field_tower(self.fq(), self.n_v() * self.f as usize)?;
        let emb = Embedding::new(self.red.field(), &lf)?;
        let mut h = vec![lf.zero(); self.e as usize + 1];
        h[self.e as usize] = lf.one();
        Ok((QuotientAlgebra::new(&lf, &h)?, emb))
    }

    /// `(O_w/w^e, E(O_w/w^e))` as `G_v`-modules.
    pub fn local_residue(&self) -> Result<(GTModule, GTModule)> {
        let (ring, emb) = self.local_residue_ring()?;
        let lf: ResidueRing = ring.base().clone();
        let nv = self.n_v();
        let zeta = emb.apply(&self.zeta);
        let sigma = ring.linear_map_matrix(|x| x.iter().map(|c| lf.frobenius_pow(c, nv)).collect());
        let zu = ring.from_base_elem(&zeta);
        let zu = ring.mul(&zu, &ring.y());
        let gamma = ring.linear_map_matrix(|x| ring.substitute(x, &zu, |c| c.clone()));
        let it = ring.from_base_elem(&emb.apply(self.red.image_of_t()));
        let plain_t = ring.linear_map_matrix(|x| ring.mul(&it, x));
        let star_t = ring.linear_map_matrix(|x| self.red.star_action(&ring, |c| ring.from_base_elem(&emb.apply(c)), x));
        let gv = self.local_group();
        let fq = self.fq();
        let plain = GTModule::new(fq, &gv, vec![sigma.clone(), gamma.clone()], plain_t)?;
        let star = GTModule::new(fq, &gv, vec![sigma, gamma], star_t)?;
        Ok((plain, star))
    }

    /// Coset representatives of `G/G_v` (flat indices), the identity first.
    pub fn coset_representatives(&self) -> Vec<usize> {
        let mut covered = vec![false; self.group.size()];
        let mut reps = Vec::new();
        for c in 0..self.group.size() {
            if covered[c] {
                continue;
            }
            reps.push(c);
            let ce = self.group.element(c);
            for &h in &self.local_to_global {
                let g = self.group.op(&ce, &self.group.element(h));
                covered[self.group.index(&g)] = true;
            }
        }
        reps
    }

    /// `Ind_{G_v}^G M = M (x)_{F_q[G_v]} F_q[G]`: one copy of `M` per coset.
    pub fn induce(&self, m: &GTModule) -> Result<GTModule> {
        if m.group() != &self.local_group() {
            return Err(Error::AmbientMismatch);
        }
        let fq = self.fq();
        let grp = &self.group;
        let reps = self.coset_representatives();
        let n = m.dim();
        let big = n * reps.len();
        // global index -> (coset, local index)
        let mut locate = vec![(0usize, 0usize); grp.size()];
        for (i, &c) in reps.iter().enumerate() {
            let ce = grp.element(c);
            for (l, &h) in self.local_to_global.iter().enumerate() {
                locate[grp.index(&grp.op(&ce, &grp.element(h)))] = (i, l);
            }
        }
        let gens = (0..grp.rank())
            .map(|k| {
                let g = grp.generator(k);
                let mut mat = FqMat::zeros(big, big);
                for (i, &c) in reps.iter().enumerate() {
                    // g c_i = c_j h
                    let (j, l) = locate[grp.index(&grp.op(&g, &grp.element(c)))];
                    let h = m.action_by_index(l);
                    for r in 0..n {
                        for s in 0..n {
                            mat.set(j * n + r, i * n + s, h.get(r, s));
                        }
                    }
                }
                mat
            })
            .collect();
        let mut t = FqMat::zeros(big, big);
        for i in 0..reps.len() {
            for r in 0..n {
                for s in 0..n {
                    t.set(i * n + r, i * n + s, m.t_action().get(r, s));
                }
            }
        }
        GTModule::new(fq, grp, gens, t)
    }

    /// `(O_K/v, E(O_K/v))` as `G`-modules.
    pub fn global_residue(&self) -> Result<(GTModule, GTModule)> {
        let (plain, star) = self.local_residue()?;
        Ok((self.induce(&plain)?, self.induce(&star)?))
    }

    pub fn group_algebra(&self) -> FqGroupAlgebra {
        GroupAlgebra::new(self.fq().clone(), self.group.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::fitting_generator;
    use crate::ring::FiniteFqAlgebra;

    fn tame_z2() -> GaloisDatum {
        let f3 = Fq::prime_field(3).unwrap();
        let l1 = field_tower(&f3, 1).unwrap();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![0], vec![1]]).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        GaloisDatum::new(&g, &[0], &[1], &red).unwrap()
    }

    #[test]
    fn tame_z2_idempotent_and_actions() {
        let d = tame_z2();
        assert_eq!(d.idempotent().unwrap(), vec![2, 2]);
        let (plain, star) = d.local_residue().unwrap();
        assert!(plain.t_action().is_zero());
        // (a + b u) -> a
        assert_eq!(star.t_action().to_rows(), vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(fitting_generator(&star, 0).unwrap().poly, vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(d.norm_ideal(), vec![0, 1]);
    }

    #[test]
    fn wild_and_mismatch() {
        let f2 = Fq::prime_field(2).unwrap();
        let l1 = field_tower(&f2, 1).unwrap();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![0], vec![1]]).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        assert_eq!(GaloisDatum::new(&g, &[0], &[1], &red).unwrap_err(), Error::WildRamification { e: 2 });
        let f3 = Fq::prime_field(3).unwrap();
        let l1 = field_tower(&f3, 1).unwrap();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![1], vec![1]]).unwrap();
        let g = AbelianGroup::new(&[4]).unwrap();
        assert!(matches!(GaloisDatum::new(&g, &[0], &[1], &red), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn cube_root_inertia_over_f4() {
        let f2 = Fq::prime_field(2).unwrap();
        let l1 = field_tower(&f2, 2).unwrap();
        let w = l1.gen();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![w.clone(), l1.one()]).unwrap();
        let g = AbelianGroup::new(&[3]).unwrap();
        let d = GaloisDatum::new(&g, &[0], &[1], &red).unwrap();
        assert_eq!(l1.mult_order(d.zeta()), Some(3));
        let (plain, star) = d.local_residue().unwrap();
        assert_eq!(plain.dim(), 6);
        // inertia fixes exactly the constants
        let fix = plain.generator_actions()[1].sub(plain.fq(), &FqMat::identity(6));
        assert_eq!(6 - fix.rank(plain.fq()), 2);
        assert!(fitting_generator(&star, 3).is_ok());
    }

    #[test]
    fn induce_regular_quotient() {
        let f3 = Fq::prime_field(3).unwrap();
        let l1 = field_tower(&f3, 2).unwrap();
        let a = l1.gen();
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![a, l1.one()]).unwrap();
        let g = AbelianGroup::new(&[1, 2]).unwrap();
        let d = GaloisDatum::new(&g, &[0, 0], &[0, 0], &red).unwrap();
        assert_eq!(d.coset_representatives(), vec![0, 1]);
        let (plain, star) = d.local_residue().unwrap();
        let ind = d.induce(&plain).unwrap();
        assert_eq!(ind.dim(), 4);
        let swap = &ind.generator_actions()[1];
        assert_eq!(swap.mul(ind.fq(), swap), FqMat::identity(4));
        assert_eq!(swap.get(2, 0), 1);
        // freeness survives induction
        let ms = fitting_generator(&star, 0).unwrap();
        let is = fitting_generator(&d.induce(&star).unwrap(), 0).unwrap();
        assert_eq!(ms.rank, is.rank);
    }

    #[test]
    fn inertia_fixed_space_dimension() {
        let d = tame_z2();
        let (plain, _) = d.local_residue().unwrap();
        let ring = d.local_residue_ring().unwrap().0;
        let fix = plain.generator_actions()[1].sub(plain.fq(), &FqMat::identity(ring.dim()));
        assert_eq!(ring.dim() - fix.rank(plain.fq()), d.n_v() * d.f() as usize);
    }
}
