//! Fitting ideals over finite quotient rings `R = (A/v0^N)[G]`.
//!
//! Ideals are stored as their `F_q`-span; two ideals are equal iff the
//! reduced row echelon forms of the spans agree.

use crate::error::{Error, Result};
use crate::field::{Fq, ResidueRing};
use crate::group::{AbelianGroup, GroupAlgebra};
use crate::linalg::{Echelon, FqMat};
use crate::matrix::determinant;
use crate::module::GTModule;
use crate::poly::PolyRing;
use crate::ring::{FiniteFqAlgebra, FqAlgebra, Ring};
use crate::rng::Prng;

/// Largest minor size enumerated.
pub const MAX_MINOR_SIZE: usize = 8;
/// Largest number of minors enumerated.
pub const MAX_MINORS: u64 = 10_000;

/// `(A/v0^N)[G]`.
pub type FiniteGroupRing = GroupAlgebra<ResidueRing>;

pub fn finite_group_ring(fq: &Fq, v0: &[u32], n: usize, group: &AbelianGroup) -> Result<FiniteGroupRing> {
    let a = PolyRing::new(fq.clone());
    let m = a.pow(&a.normalize(v0.to_vec()), n as u64);
    Ok(GroupAlgebra::new(ResidueRing::new(fq, &m)?, group.clone()))
}

/// Image of `sum_i f_i t^i` (coefficients in `F_q[G]`) in `(A/v0^N)[G]`.
pub fn reduce_group_poly(ring: &FiniteGroupRing, f: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let av = ring.coeff_ring();
    let s = ring.group().size();
    (0..s)
        .map(|g| {
            let col: Vec<u32> = f.iter().map(|c| c[g]).collect();
            av.reduce(&col)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FiniteRingIdeal {
    ring: FiniteGroupRing,
    pub generators: Vec<Vec<Vec<u32>>>,
    /// nonzero rows of the rref of the span
    span: Vec<Vec<u32>>,
}

impl FiniteRingIdeal {
    pub fn new(ring: &FiniteGroupRing, generators: Vec<Vec<Vec<u32>>>) -> Self {
        let fq = ring.base_field().clone();
        let basis = ring.basis();
        let mut rows = Vec::new();
        for g in &generators {
            for b in &basis {
                rows.push(ring.coords(&ring.mul(b, g)));
            }
        }
        let span = rref_rows(&fq, rows, ring.dim());
        FiniteRingIdeal { ring: ring.clone(), generators, span }
    }

    pub fn ring(&self) -> &FiniteGroupRing {
        &self.ring
    }

    /// `F_q`-dimension of the ideal.
    pub fn dim(&self) -> usize {
        self.span.len()
    }

    pub fn contains(&self, x: &[Vec<u32>]) -> bool {
        let fq = self.ring.base_field().clone();
        let mut ech = Echelon::new(&fq, self.ring.dim());
        for r in &self.span {
            ech.insert(r);
        }
        ech.contains(&self.ring.coords(&x.to_vec()))
    }
}

fn rref_rows(fq: &Fq, rows: Vec<Vec<u32>>, n: usize) -> Vec<Vec<u32>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = FqMat::from_rows(&rows, n).rref(fq);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn ideal_equal(i: &FiniteRingIdeal, j: &FiniteRingIdeal) -> Result<bool> {
    if i.ring != j.ring {
        return Err(Error::AmbientMismatch);
    }
    Ok(i.span == j.span)
}

/// `Fitt^0` of the module presented by `p` (rows are relations, columns
/// generators): the ideal of maximal minors, or zero with too few relations.
pub fn fitting_from_presentation(ring: &FiniteGroupRing, p: &[Vec<Vec<Vec<u32>>>], generators: usize) -> Result<FiniteRingIdeal> {
    let k = generators;
    if p.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidArgument("presentation rows have the wrong length".into()));
    }
    if k == 0 {
        return Ok(FiniteRingIdeal::new(ring, vec![ring.one()]));
    }
    let rows = p.len();
    if rows < k {
        return Ok(FiniteRingIdeal::new(ring, Vec::new()));
    }
    if k > MAX_MINOR_SIZE || binomial(rows as u64, k as u64) > MAX_MINORS {
        return Err(Error::PresentationTooLarge(format!("{rows} relations on {k} generators")));
    }
    let mut minors = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<Vec<Vec<u32>>>> = idx.iter().map(|&r| p[r].clone()).collect();
        let d = determinant(ring, &sub)?;
        if !ring.is_zero(&d) {
            minors.push(d);
        }
        // next k-subset in lex order
        let mut i = k;
        while i > 0 && idx[i - 1] == rows - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(FiniteRingIdeal::new(ring, minors))
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Matrix of an element of `(A/v0^N)[G]` acting on a module killed by `v0^N`.
pub fn ring_element_action(m: &GTModule, ring: &FiniteGroupRing, r: &[Vec<u32>]) -> FqMat {
    let fq = m.fq();
    let n = m.dim();
    let av = ring.coeff_ring();
    let mut acc = FqMat::zeros(n, n);
    for (g, c) in r.iter().enumerate() {
        if av.is_zero(c) {
            continue;
        }
        let ct = m.t_poly_action(&av.to_poly(c));
        acc = acc.add(fq, &m.action_by_index(g).mul(fq, &ct));
    }
    acc
}

/// Generators and relations of `M` over `(A/v0^N)[G]`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<Vec<u32>>,
    pub relations: Vec<Vec<Vec<Vec<u32>>>>,
}

pub fn presentation(m: &GTModule, ring: &FiniteGroupRing) -> Result<Presentation> {
    let fq = m.fq().clone();
    let n = m.dim();
    if m.group() != ring.group() {
        return Err(Error::AmbientMismatch);
    }
    let modulus = ring.coeff_ring().modulus().to_vec();
    if !m.t_poly_action(&modulus).is_zero() {
        return Err(Error::InvalidArgument("module is not killed by v0^N".into()));
    }
    let basis = ring.basis();
    let actions: Vec<FqMat> = basis.iter().map(|b| ring_element_action(m, ring, b)).collect();
    let d = basis.len();

    // generators: x with the submodules R x spanning M
    let mut rng = Prng::new(PRESENTATION_SEED ^ n as u64);
    let q = fq.q() as u64;
    let images = |x: &Vec<u32>| -> Vec<Vec<u32>> { actions.iter().map(|a| a.mul_vec(&fq, x)).collect() };
    let gens = greedy_cover(&fq, n, n, &mut rng, |rng| (0..n).map(|_| rng.below(q) as u32).collect(), &images);
    let k = gens.len();
    // columns: (generator i, ring basis element b) -> b x_i
    let mut cols = Vec::with_capacity(k * d);
    for x in &gens {
        cols.extend(images(x));
    }
    let map = FqMat::from_cols(&cols, n);
    let kernel = map.kernel(&fq);
    let kdim = kernel.len();
    let to_relation = |v: &[u32]| -> Vec<Vec<Vec<u32>>> { v.chunks(d).map(|c| ring.from_coords(c)).collect() };
    let rel_images = |v: &Vec<u32>| -> Vec<Vec<u32>> {
        let rel = to_relation(v);
        basis.iter().map(|b| rel.iter().flat_map(|r| ring.coords(&ring.mul(b, r))).collect()).collect()
    };
    let random_kernel = |rng: &mut Prng| -> Vec<u32> {
        let mut v = vec![0u32; k * d];
        for w in &kernel {
            let c = rng.below(q) as u32;
            for (a, &b) in v.iter_mut().zip(w) {
                *a = fq.fma(c, b, *a);
            }
        }
        v
    };
    let relations = greedy_cover(&fq, k * d, kdim, &mut rng, random_kernel, &rel_images).iter().map(|v| to_relation(v)).collect();
    Ok(Presentation { generators: gens, relations })
}

const PRESENTATION_SEED: u64 = 0x5eed_f177;
const CANDIDATES: usize = 12;

/// Pick elements whose image sets span a space of dimension `target`,
/// each time taking the best of a few random candidates. Few generators
/// keep the number of maximal minors small.
fn greedy_cover(
    fq: &Fq,
    ambient: usize,
    target: usize,
    rng: &mut Prng,
    mut sample: impl FnMut(&mut Prng) -> Vec<u32>,
    images: &dyn Fn(&Vec<u32>) -> Vec<Vec<u32>>,
) -> Vec<Vec<u32>> {
    let mut span = Echelon::new(fq, ambient);
    let mut chosen = Vec::new();
    while span.dim() < target {
        let mut best: Option<(usize, Echelon, Vec<u32>)> = None;
        for _ in 0..CANDIDATES {
            let x = sample(rng);
            let mut next = span.clone();
            for v in images(&x) {
                next.insert(&v);
            }
            if best.as_ref().is_none_or(|b| next.dim() > b.0) {
                best = Some((next.dim(), next, x));
            }
        }
        let (gain, next, x) = best.expect("candidates");
        if gain == span.dim() {
            // every candidate already lay in the span (probability <= q^-CANDIDATES)
            continue;
        }
        span = next;
        chosen.push(x);
    }
    chosen
}

/// `Fitt^0` over `(A/v0^N)[G]` of a module killed by `v0^N`.
pub fn fitting_ideal(m: &GTModule, ring: &FiniteGroupRing) -> Result<FiniteRingIdeal> {
    let p = presentation(m, ring)?;
    fitting_from_presentation(ring, &p.relations, p.generators.len())
}

/// `M / v0(T)^N M`.
pub fn reduce_module(m: &GTModule, v0: &[u32], n: usize) -> Result<GTModule> {
    let a = PolyRing::new(m.fq().clone());
    let pn = a.pow(&a.normalize(v0.to_vec()), n as u64);
    m.quotient(&m.image_of_t_poly(&pn))
}

/// The `v0`-primary part: the stabilized kernel of `v0(T)^k`.
pub fn primary_part(m: &GTModule, v0: &[u32]) -> Result<GTModule> {
    let fq = m.fq();
    let p = m.t_poly_action(v0);
    let mut power = FqMat::identity(m.dim());
    let mut last = usize::MAX;
    loop {
        power = power.mul(fq, &p);
        let ker = power.kernel(fq);
        if ker.len() == last {
            return m.restrict(&ker);
        }
        last = ker.len();
        if last == 0 {
            return m.restrict(&ker);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::fitting_generator;

    fn tame_z2_star() -> GTModule {
        let f3 = Fq::prime_field(3).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        let gamma = FqMat::from_rows(&[vec![1, 0], vec![0, 2]], 2);
        let t = FqMat::from_rows(&[vec![1, 0], vec![0, 0]], 2);
        GTModule::new(&f3, &g, vec![gamma], t).unwrap()
    }

    #[test]
    fn one_by_one_and_diagonal() {
        let f3 = Fq::prime_field(3).unwrap();
        let g = AbelianGroup::new(&[2]).unwrap();
        let r = finite_group_ring(&f3, &[0, 1], 3, &g).unwrap();
        let a = reduce_group_poly(&r, &[vec![1, 1], vec![0, 1]]);
        let b = reduce_group_poly(&r, &[vec![0, 0], vec![1, 0]]);
        let i = fitting_from_presentation(&r, &[vec![a.clone()]], 1).unwrap();
        assert!(ideal_equal(&i, &FiniteRingIdeal::new(&r, vec![a.clone()])).unwrap());
        let z = r.zero();
        let d = fitting_from_presentation(&r, &[vec![a.clone(), z.clone()], vec![z, b.clone()]], 2).unwrap();
        assert!(ideal_equal(&d, &FiniteRingIdeal::new(&r, vec![r.mul(&a, &b)])).unwrap());
        // unit multiples
        let u = reduce_group_poly(&r, &[vec![2, 0]]);
        assert!(ideal_equal(&i, &FiniteRingIdeal::new(&r, vec![r.mul(&u, &a)])).unwrap());
    }

    #[test]
    fn t_versus_t_squared() {
        let f2 = Fq::prime_field(2).unwrap();
        let g = AbelianGroup::new(&[3]).unwrap();
        let r = finite_group_ring(&f2, &[0, 1], 3, &g).unwrap();
        let t = reduce_group_poly(&r, &[vec![0, 0, 0], vec![1, 0, 0]]);
        let t2 = r.mul(&t, &t);
        let i = FiniteRingIdeal::new(&r, vec![t]);
        let j = FiniteRingIdeal::new(&r, vec![t2]);
        assert!(!ideal_equal(&i, &j).unwrap());
        assert!(i.dim() > j.dim());
    }

    #[test]
    fn tame_z2_presentation_matches_generator() {
        let m = tame_z2_star();
        let f = fitting_generator(&m, 0).unwrap().poly;
        for (v0, n) in [(vec![1, 1], 2), (vec![2, 1], 1), (vec![2, 1], 2), (vec![2, 1], 3), (vec![0, 1], 3)] {
            let r = finite_group_ring(m.fq(), &v0, n, m.group()).unwrap();
            let mbar = reduce_module(&m, &v0, n).unwrap();
            let fit = fitting_ideal(&mbar, &r).unwrap();
            let expect = FiniteRingIdeal::new(&r, vec![reduce_group_poly(&r, &f)]);
            assert!(ideal_equal(&fit, &expect).unwrap(), "v0 = {v0:?}, N = {n}");
        }
    }

    #[test]
    fn primary_parts() {
        let f2 = Fq::prime_field(2).unwrap();
        let m = GTModule::new(&f2, &AbelianGroup::trivial(), vec![], FqMat::zeros(1, 1)).unwrap();
        assert_eq!(primary_part(&m, &[1, 1]).unwrap().dim(), 0);
        assert_eq!(primary_part(&m, &[0, 1]).unwrap().dim(), 1);
        let star = tame_z2_star();
        // t acts by 1 on the constants and 0 on u
        assert_eq!(primary_part(&star, &[2, 1]).unwrap().dim(), 1);
    }
}
