//! Frobenius characteristic polynomials of reduced Drinfeld modules.
//!
//! The primary computation works in the motive `L1{tau}`, a free
//! `L1[t]`-module on `tau^0..tau^(r-1)` where `t` acts by right
//! multiplication with `phi(t)`. Left multiplication by `tau^n_v` is
//! `L1[t]`-linear and its characteristic polynomial is `P_v`.
//!
//! The torsion oracle recomputes `P_v mod v0` from the Frobenius action on
//! the `v0`-torsion points in a splitting field.

use rayon::prelude::*;

use crate::drinfeld::ReducedDrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{field_tower, Embedding, Fq, ResidueRing};
use crate::linalg::{Echelon, FqMat};
use crate::matrix::berkowitz_charpoly;
use crate::poly::{PolyFq, PolyRing};
use crate::ring::{FiniteFqAlgebra, FqAlgebra, Ring};

/// Default splitting-field cap, as a multiple of `n_v`.
pub const DEFAULT_SPLITTING_CAP_FACTOR: usize = 24;

/// Matrix of `tau^n_v` on the motive; entry `[i][j]` is the `tau^i`
/// coordinate of `tau^(j + n_v)` in `L1[t]`.
#[derive(Clone, Debug)]
pub struct MotiveMatrix {
    pub entries: Vec<Vec<Vec<Vec<u32>>>>,
    pub n_v: usize,
}

/// `P_v(X) = sum a_i X^i` with `a_i` in `F_q[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyResult {
    pub coeffs: Vec<Vec<u32>>,
    pub r: usize,
    pub n_v: usize,
    /// leading coefficient of `a_0`
    pub rho: u32,
    pub w0: Vec<u32>,
    pub height: usize,
}

impl CharPolyResult {
    /// `Nv = w0^(n_v / deg w0)`.
    pub fn norm(&self, fq: &Fq) -> Vec<u32> {
        PolyRing::new(fq.clone()).pow(&self.w0, (self.n_v / (self.w0.len() - 1)) as u64)
    }

    /// Check `deg a_0 = n_v`, `r deg a_i <= n_v (r - i)`, monic of degree
    /// `r`, and `a_0 = rho Nv`.
    pub fn check_degree_bounds(&self, fq: &Fq) -> Result<()> {
        let a = PolyRing::new(fq.clone());
        if self.coeffs.len() != self.r + 1 || self.coeffs[self.r] != a.one() {
            return Err(Error::DegreeBoundViolation(format!("P_v is not monic of degree {}", self.r)));
        }
        if a.degree(&self.coeffs[0]) != Some(self.n_v) {
            return Err(Error::DegreeBoundViolation(format!(
                "deg a_0 = {:?}, expected n_v = {}",
                a.degree(&self.coeffs[0]),
                self.n_v
            )));
        }
        for i in 1..self.r {
            if let Some(d) = a.degree(&self.coeffs[i]) {
                if self.r * d > self.n_v * (self.r - i) {
                    return Err(Error::DegreeBoundViolation(format!("deg a_{i} = {d} exceeds n_v (r - i) / r")));
                }
            }
        }
        if self.coeffs[0] != a.scale(&self.rho, &self.norm(fq)) {
            return Err(Error::DegreeBoundViolation("a_0 differs from rho Nv".into()));
        }
        Ok(())
    }

    /// Reduce the coefficients modulo a monic `m`, as elements of `F_q[t]/(m)`.
    pub fn reduce_mod(&self, fq: &Fq, m: &[u32]) -> Vec<Vec<u32>> {
        let a = PolyRing::new(fq.clone());
        self.coeffs.iter().map(|c| a.reduce_coords(c, m)).collect()
    }
}

/// Coordinates of a skew polynomial in the motive basis, as polynomials in
/// `t` over `L1`.
pub fn motive_coords(red: &ReducedDrinfeldModule, mu: &[Vec<u32>]) -> Result<Vec<Vec<Vec<u32>>>> {
    let s = red.skew_ring();
    let lt = PolyRing::new(red.field().clone());
    let phi = red.phi_t();
    let mut out = vec![lt.zero(); red.rank()];
    let mut cur = s.normalize(mu.to_vec());
    let mut k = 0;
    // mu = rem + quot * phi(t), i.e. rem + t . quot
    while !cur.is_empty() {
        let (quot, rem) = s.right_divrem(&cur, &phi)?;
        for (j, c) in rem.into_iter().enumerate() {
            out[j] = lt.add(&out[j], &lt.monomial(c, k));
        }
        cur = quot;
        k += 1;
    }
    Ok(out)
}

pub fn motive_frobenius_matrix(red: &ReducedDrinfeldModule) -> Result<MotiveMatrix> {
    let r = red.rank();
    let n_v = red.n_v();
    let s = red.skew_ring();
    let lt = PolyRing::new(red.field().clone());
    let mut entries = vec![vec![lt.zero(); r]; r];
    for j in 0..r {
        let col = motive_coords(red, &s.tau_pow(j + n_v))?;
        for (i, c) in col.into_iter().enumerate() {
            entries[i][j] = c;
        }
    }
    Ok(MotiveMatrix { entries, n_v })
}

/// `P_v` as the characteristic polynomial of the motive Frobenius.
pub fn charpoly_motive(red: &ReducedDrinfeldModule) -> Result<CharPolyResult> {
    let m = motive_frobenius_matrix(red)?;
    let l1 = red.field();
    let lt = PolyRing::new(l1.clone());
    let cp = berkowitz_charpoly(&lt, &m.entries)?;
    let coeffs = cp
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.iter()
                .map(|x| l1.as_base(x).ok_or_else(|| Error::CoefficientNotRational(format!("coefficient of X^{i}"))))
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = *coeffs[0].last().ok_or_else(|| Error::DegreeBoundViolation("a_0 = 0".into()))?;
    let res = CharPolyResult { coeffs, r: red.rank(), n_v: red.n_v(), rho, w0: red.w0().to_vec(), height: red.height()? };
    res.check_degree_bounds(red.fq())?;
    Ok(res)
}

/// `P_v mod v0` from the Frobenius action on `v0`-torsion, as a polynomial
/// over `A/v0` (coefficients are coordinate vectors of length `deg v0`).
pub fn torsion_oracle(red: &ReducedDrinfeldModule, v0: &[u32], cap: Option<usize>) -> Result<Vec<Vec<u32>>> {
    let fq = red.fq();
    let a = PolyRing::new(fq.clone());
    if !a.is_monic(v0) || !crate::field::is_irreducible(fq, v0) {
        return Err(Error::InvalidArgument("v0 must be monic irreducible".into()));
    }
    if v0 == red.w0() {
        return Err(Error::InvalidArgument("v0 must differ from the characteristic w0".into()));
    }
    let n_v = red.n_v();
    let r = red.rank();
    let dv = v0.len() - 1;
    let cap = cap.unwrap_or(DEFAULT_SPLITTING_CAP_FACTOR * n_v);
    let s = red.skew_ring();
    let p = red.phi_of(v0);

    // Smallest k with tau^(n_v k) = 1 mod_right P: then ker P lies in F_{q^(n_v k)}.
    let step = s.tau_pow(n_v);
    let one = s.one();
    let mut rem = s.right_rem(&step, &p)?;
    let mut k = 1;
    while rem != one {
        k += 1;
        if n_v * k > cap {
            return Err(Error::SplittingFieldTooLarge { cap });
        }
        rem = s.right_rem(&s.mul(&step, &rem), &p)?;
    }
    let m = n_v * k;
    let big = field_tower(fq, m)?;
    let emb = Embedding::new(red.field(), &big)?;
    let embed = |c: &Vec<u32>| emb.apply(c);

    let basis = big.basis();
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| s.apply_in(&p, &big, embed, b)).collect();
    let kernel = FqMat::from_cols(&cols, m).kernel(fq);
    if kernel.len() != r * dv {
        return Err(Error::Internal(format!("v0-torsion has F_q-dimension {} instead of {}", kernel.len(), r * dv)));
    }

    let star = |x: &Vec<u32>| red.star_action(&big, embed, x);
    let mut ech = Echelon::new(fq, m);
    let mut gens = Vec::new();
    for x in &kernel {
        if ech.contains(x) {
            continue;
        }
        let mut y = x.clone();
        for _ in 0..dv {
            ech.insert(&y);
            y = star(&y);
        }
        gens.push(x.clone());
    }
    debug_assert_eq!(gens.len(), r);

    let av = ResidueRing::new(fq, v0)?;
    let mut mat = vec![vec![av.zero(); r]; r];
    for (j, b) in gens.iter().enumerate() {
        let fb = big.frobenius_pow(b, n_v);
        let c = ech.express(&fb).ok_or_else(|| Error::Internal("Frobenius does not preserve torsion".into()))?;
        for i in 0..r {
            mat[i][j] = c[i * dv..(i + 1) * dv].to_vec();
        }
    }
    berkowitz_charpoly(&av, &mat)
}

/// Compare the motive result with the oracle at each `v0`.
pub fn cross_check(red: &ReducedDrinfeldModule, cp: &CharPolyResult, primes: &[Vec<u32>], cap: Option<usize>) -> Result<()> {
    let fq = red.fq();
    let results: Vec<Result<Vec<Vec<u32>>>> = primes.par_iter().map(|v0| torsion_oracle(red, v0, cap)).collect();
    for (v0, res) in primes.iter().zip(results) {
        if res? != cp.reduce_mod(fq, v0) {
            return Err(Error::OracleMismatch(format!("motive and torsion results differ modulo {v0:?}")));
        }
    }
    Ok(())
}

/// Rebuild `P_v` from oracle residues by CRT and the degree bounds.
///
/// With `sum deg v0 > n_v` every coefficient is determined by its residue.
/// With equality, `a_0` (of degree exactly `n_v`) is pinned by
/// `a_0 = rho Nv` with `rho` read off the residue.
pub fn reconstruct_via_crt(red: &ReducedDrinfeldModule, primes: &[Vec<u32>], cap: Option<usize>) -> Result<CharPolyResult> {
    let fq = red.fq();
    let a = PolyRing::new(fq.clone());
    let total: usize = primes.iter().map(|p| p.len().saturating_sub(1)).sum();
    let n_v = red.n_v();
    if primes.is_empty() || total < n_v {
        return Err(Error::InsufficientModuli(format!("total degree {total} < n_v = {n_v}")));
    }
    let residues: Vec<Vec<Vec<u32>>> =
        primes.par_iter().map(|v0| torsion_oracle(red, v0, cap)).collect::<Result<Vec<_>>>()?;
    let r = red.rank();
    let mut modulus = a.one();
    let mut coeffs = vec![a.zero(); r + 1];
    for (v0, res) in primes.iter().zip(&residues) {
        for i in 0..=r {
            coeffs[i] = crt_pair(&a, &coeffs[i], &modulus, &a.normalize(res[i].clone()), v0)?;
        }
        modulus = a.mul(&modulus, v0);
    }
    let norm = red.norm();
    if total == n_v {
        let ninv = inverse_mod(&a, &norm, &modulus)?;
        let rho_poly = a.rem_monic(&a.mul(&coeffs[0], &ninv), &modulus)?;
        match rho_poly.as_slice() {
            [c] => coeffs[0] = a.scale(c, &norm),
            _ => return Err(Error::InsufficientModuli("a_0 residue is not a constant multiple of Nv".into())),
        }
    }
    let rho = *coeffs[0].last().ok_or_else(|| Error::DegreeBoundViolation("a_0 = 0".into()))?;
    let res = CharPolyResult { coeffs, r, n_v, rho, w0: red.w0().to_vec(), height: red.height()? };
    res.check_degree_bounds(fq)?;
    Ok(res)
}

fn inverse_mod(a: &PolyFq, x: &[u32], m: &[u32]) -> Result<Vec<u32>> {
    let (g, s, _) = a.ext_gcd(x, m);
    if g != a.one() {
        return Err(Error::NonUnit);
    }
    a.rem_monic(&s, m)
}

/// `x` with `x = x1 mod m1`, `x = x2 mod m2`, `deg x < deg m1 m2`.
fn crt_pair(a: &PolyFq, x1: &[u32], m1: &[u32], x2: &[u32], m2: &[u32]) -> Result<Vec<u32>> {
    let inv = inverse_mod(a, &a.rem_monic(m1, m2)?, m2)?;
    let diff = a.sub(&x2.to_vec(), &x1.to_vec());
    let k = a.rem_monic(&a.mul(&diff, &inv), m2)?;
    Ok(a.add(&x1.to_vec(), &a.mul(&m1.to_vec(), &k)))
}
