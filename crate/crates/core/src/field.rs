//! Finite fields and finite quotient rings of `F_q[x]`.
//!
//! `Fq` is the scalar field of every linear-algebra computation. Its elements
//! are `u32` codes `sum d_i p^i` of their coordinates in the polynomial basis
//! of the defining modulus; multiplication goes through log/exp tables, so
//! `q` is capped at 2^16.
//!
//! `ResidueRing` is `F_q[x]/(m)` for a monic `m`. With `m` irreducible it is
//! the extension field `F_{q^deg m}`; `field_tower` picks the first
//! irreducible `m` in graded-lexicographic order.
//!
//! Elements of `ResidueRing` are ordered "lexicographically" by comparing
//! coordinate vectors from the top coordinate down (equivalently, by the
//! integer `sum c_i q^i`). Root choices and canonical generators use this
//! order.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{monic_polys, PolyRing};
use crate::ring::{Field, FiniteFqAlgebra, FqAlgebra, Ring};
use crate::rng::Prng;

const MAX_Q: u64 = 1 << 16;
const ADD_TABLE_MAX_Q: u32 = 256;

/// Parameters of the base field `F_q`, `q = p^deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqConfig {
    pub p: u32,
    pub deg: usize,
    /// Monic irreducible polynomial over `F_p`, constant first. `None` selects
    /// the first irreducible polynomial of degree `deg` in graded-lex order.
    pub modulus: Option<Vec<u32>>,
}

impl FqConfig {
    pub fn prime(p: u32) -> Self {
        FqConfig { p, deg: 1, modulus: None }
    }
}

#[derive(Clone)]
pub struct Fq {
    inner: Arc<FqInner>,
}

struct FqInner {
    p: u32,
    deg: usize,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Fq {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits_of(mut a: u32, p: u32, deg: usize) -> Vec<u32> {
    let mut d = vec![0; deg];
    for x in d.iter_mut() {
        *x = a % p;
        a /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of two digit vectors modulo a monic modulus over `F_p`.
fn slow_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (deg..2 * deg).rev() {
        let c = prod[k] % p64;
        if c == 0 {
            continue;
        }
        for j in 0..deg {
            let sub = c * modulus[j] as u64 % p64;
            prod[k - deg + j] = (prod[k - deg + j] + p64 - sub) % p64;
        }
        prod[k] = 0;
    }
    prod.truncate(deg);
    prod.into_iter().map(|x| x as u32).collect()
}

impl Fq {
    /// Build `F_q` from a configuration, validating primality and
    /// irreducibility of the modulus.
    pub fn new(cfg: &FqConfig) -> Result<Fq> {
        let p = cfg.p;
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if cfg.deg == 0 {
            return Err(Error::InvalidField("deg must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(cfg.deg as u32).filter(|&q| q <= MAX_Q);
        let Some(q) = q else {
            return Err(Error::InvalidField(format!("q = {p}^{} exceeds 2^16", cfg.deg)));
        };
        let prime = Fq::build(p, 1, vec![0, 1]);
        let modulus = match &cfg.modulus {
            Some(m) => {
                if m.len() != cfg.deg + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus must be a monic degree-{} polynomial over F_{p} with digits < {p}",
                        cfg.deg
                    )));
                }
                if !is_irreducible(&prime, m) {
                    return Err(Error::InvalidField("modulus is not irreducible over F_p".into()));
                }
                m.clone()
            }
            None => first_irreducible(&prime, cfg.deg),
        };
        if cfg.deg == 1 && modulus == vec![0, 1] {
            return Ok(prime);
        }
        debug_assert_eq!(q, (p as u64).pow(cfg.deg as u32));
        Ok(Fq::build(p, cfg.deg, modulus))
    }

    pub fn prime_field(p: u32) -> Result<Fq> {
        Fq::new(&FqConfig::prime(p))
    }

    fn build(p: u32, deg: usize, modulus: Vec<u32>) -> Fq {
        let q = p.pow(deg as u32);
        let mul = |a: u32, b: u32| {
            from_digits(&slow_mul(&digits_of(a, p, deg), &digits_of(b, p, deg), &modulus, p), p)
        };
        let order = q as u64 - 1;
        let factors = prime_factors(order);
        let mut gen = 1;
        if q > 2 {
            'search: for g in 1..q {
                for &l in &factors {
                    let mut x = 1u32;
                    for _ in 0..order / l {
                        x = mul(x, g);
                    }
                    if x == 1 {
                        continue 'search;
                    }
                }
                gen = g;
                break;
            }
        }
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul(x, gen);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let add_digits = |a: u32, b: u32| {
            let da = digits_of(a, p, deg);
            let db = digits_of(b, p, deg);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            from_digits(&s, p)
        };
        let add = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            t
        });
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits_of(a, p, deg).iter().map(|&x| (p - x) % p).collect();
                from_digits(&d, p)
            })
            .collect();
        Fq { inner: Arc::new(FqInner { p, deg, q, modulus, exp, log, add, neg }) }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Degree of `F_q` over `F_p`.
    pub fn deg(&self) -> usize {
        self.inner.deg
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn config(&self) -> FqConfig {
        FqConfig { p: self.p(), deg: self.deg(), modulus: Some(self.inner.modulus.clone()) }
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q()
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits_of(a, self.p(), self.deg())
    }

    pub fn from_digits(&self, d: &[u32]) -> Result<u32> {
        if d.len() != self.deg() || d.iter().any(|&x| x >= self.p()) {
            return Err(Error::InvalidField(format!(
                "expected {} base-{} digits, got {:?}",
                self.deg(),
                self.p(),
                d
            )));
        }
        Ok(from_digits(d, self.p()))
    }

    /// The multiplicative generator used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        if self.q() == 2 {
            1
        } else {
            self.inner.exp[1]
        }
    }

    #[inline]
    pub fn fadd(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        match &inner.add {
            Some(t) => t[(a * inner.q + b) as usize],
            None => {
                if inner.deg == 1 {
                    (a + b) % inner.p
                } else {
                    let (mut a, mut b, mut out, mut pw) = (a, b, 0, 1);
                    for _ in 0..inner.deg {
                        out += ((a % inner.p + b % inner.p) % inner.p) * pw;
                        a /= inner.p;
                        b /= inner.p;
                        pw *= inner.p;
                    }
                    out
                }
            }
        }
    }

    #[inline]
    pub fn fneg(&self, a: u32) -> u32 {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn fsub(&self, a: u32, b: u32) -> u32 {
        self.fadd(a, self.fneg(b))
    }

    #[inline]
    pub fn fmul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    #[inline]
    pub fn finv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        let n = inner.q - 1;
        Some(inner.exp[((n - inner.log[a as usize]) % n.max(1)) as usize])
    }

    /// `a * x + y`.
    #[inline]
    pub fn fma(&self, a: u32, x: u32, y: u32) -> u32 {
        self.fadd(self.fmul(a, x), y)
    }

    /// Embed an integer via `Z -> F_p -> F_q`.
    pub fn from_u64(&self, n: u64) -> u32 {
        (n % self.p() as u64) as u32
    }
}

impl Ring for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.fadd(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.fneg(*a)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.fsub(*a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.fmul(*a, *b)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn try_inv(&self, a: &u32) -> Option<u32> {
        self.finv(*a)
    }
    fn from_int(&self, n: i64) -> u32 {
        let p = self.p() as i64;
        n.rem_euclid(p) as u32
    }
}

impl Field for Fq {}

impl FqAlgebra for Fq {
    fn base_field(&self) -> &Fq {
        self
    }
    fn from_base(&self, c: u32) -> u32 {
        c
    }
    fn frobenius(&self, a: &u32) -> u32 {
        *a
    }
}

impl FiniteFqAlgebra for Fq {
    fn dim(&self) -> usize {
        1
    }
    fn coords(&self, a: &u32) -> Vec<u32> {
        vec![*a]
    }
    fn from_coords(&self, c: &[u32]) -> u32 {
        c[0]
    }
}

/// Ben-Or irreducibility test over `F_q`.
pub fn is_irreducible(fq: &Fq, f: &[u32]) -> bool {
    let a = PolyRing::new(fq.clone());
    let f = a.normalize(f.to_vec());
    let Some(d) = a.degree(&f) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let f = a.make_monic(&f);
    let x = a.var();
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = a.pow_mod(&xp, fq.q() as u64, &f).expect("monic");
        let g = a.gcd(&f, &a.sub(&xp, &x));
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree `d` over `F_q` in graded-lex order.
pub fn first_irreducible(fq: &Fq, d: usize) -> Vec<u32> {
    monic_polys(fq, d).find(|f| is_irreducible(fq, f)).expect("irreducible polynomials exist in every degree")
}

/// All monic irreducibles of degree exactly `d`, in graded-lex order.
pub fn monic_irreducibles(fq: &Fq, d: usize) -> Vec<Vec<u32>> {
    monic_polys(fq, d).filter(|f| is_irreducible(fq, f)).collect()
}

/// All monic irreducibles of degree `1..=d`, sorted by degree then lex.
pub fn monic_irreducibles_up_to(fq: &Fq, d: usize) -> Vec<Vec<u32>> {
    (1..=d).flat_map(|k| monic_irreducibles(fq, k)).collect()
}

/// `F_q[x]/(m)` for monic `m` of degree at least one.
#[derive(Clone)]
pub struct ResidueRing {
    inner: Arc<ResidueInner>,
}

struct ResidueInner {
    fq: Fq,
    modulus: Vec<u32>,
    is_field: bool,
    /// `x^(q i) mod m` for `i < deg m`, as coordinate vectors.
    frob: Vec<Vec<u32>>,
}

impl fmt::Debug for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[x]/({:?})", self.inner.fq, self.inner.modulus)
    }
}

impl PartialEq for ResidueRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.fq == other.inner.fq && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for ResidueRing {}

impl ResidueRing {
    pub fn new(fq: &Fq, modulus: &[u32]) -> Result<ResidueRing> {
        let a = PolyRing::new(fq.clone());
        let m = a.normalize(modulus.to_vec());
        if m.len() < 2 || !a.is_monic(&m) {
            return Err(Error::InvalidArgument("residue modulus must be monic of positive degree".into()));
        }
        let is_field = is_irreducible(fq, &m);
        Ok(Self::build(fq, m, is_field))
    }

    fn build(fq: &Fq, m: Vec<u32>, is_field: bool) -> ResidueRing {
        let a = PolyRing::new(fq.clone());
        let d = m.len() - 1;
        let xq = a.pow_mod(&a.var(), fq.q() as u64, &m).expect("monic");
        let mut frob = Vec::with_capacity(d);
        let mut cur = a.one();
        for _ in 0..d {
            let mut c = cur.clone();
            c.resize(d, 0);
            frob.push(c);
            cur = a.rem_monic(&a.mul(&cur, &xq), &m).expect("monic");
        }
        ResidueRing { inner: Arc::new(ResidueInner { fq: fq.clone(), modulus: m, is_field, frob }) }
    }

    pub fn fq(&self) -> &Fq {
        &self.inner.fq
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    pub fn is_field(&self) -> bool {
        self.inner.is_field
    }

    /// Number of elements, when it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.fq().q() as u64).checked_pow(self.degree() as u32)
    }

    /// The class of `x`.
    pub fn gen(&self) -> Vec<u32> {
        self.reduce(&[0, 1])
    }

    /// Reduce an arbitrary polynomial over `F_q`.
    pub fn reduce(&self, a: &[u32]) -> Vec<u32> {
        PolyRing::new(self.fq().clone()).reduce_coords(a, self.modulus())
    }

    /// The element as a canonical polynomial over `F_q`.
    pub fn to_poly(&self, a: &[u32]) -> Vec<u32> {
        PolyRing::new(self.fq().clone()).normalize(a.to_vec())
    }

    pub fn embed_base(&self, c: u32) -> Vec<u32> {
        let mut v = vec![0; self.degree()];
        v[0] = c;
        v
    }

    /// `Some(c)` if the element lies in `F_q`.
    pub fn as_base(&self, a: &[u32]) -> Option<u32> {
        a[1..].iter().all(|&c| c == 0).then_some(a[0])
    }

    pub fn cmp_lex(&self, a: &[u32], b: &[u32]) -> Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }

    /// Element with integer key `n` (base-q digits, constant first).
    pub fn from_index(&self, mut n: u64) -> Vec<u32> {
        let q = self.fq().q() as u64;
        let mut v = vec![0; self.degree()];
        for c in v.iter_mut() {
            *c = (n % q) as u32;
            n /= q;
        }
        v
    }

    /// All elements in lex order (small rings only).
    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let n = self.order().expect("ring too large to enumerate");
        (0..n).map(|i| self.from_index(i))
    }

    pub fn random(&self, rng: &mut Prng) -> Vec<u32> {
        let q = self.fq().q() as u64;
        (0..self.degree()).map(|_| rng.below(q) as u32).collect()
    }

    /// Multiplicative order of a unit in a field of enumerable size.
    pub fn mult_order(&self, a: &[u32]) -> Option<u64> {
        if self.is_zero(&a.to_vec()) {
            return None;
        }
        let n = self.order()? - 1;
        let mut ord = n;
        for l in prime_factors(n) {
            while ord % l == 0 && self.pow(&a.to_vec(), ord / l) == self.one() {
                ord /= l;
            }
        }
        Some(ord)
    }

    /// Lex-smallest element of maximal multiplicative order.
    pub fn primitive_element(&self) -> Result<Vec<u32>> {
        if !self.is_field() {
            return Err(Error::InvalidArgument("primitive element requested in a non-field".into()));
        }
        let n = self.order().ok_or(Error::InvalidArgument("field too large".into()))? - 1;
        for i in 1..=n {
            let a = self.from_index(i);
            if self.mult_order(&a) == Some(n) {
                return Ok(a);
            }
        }
        unreachable!("finite fields have primitive elements")
    }

    /// Minimal polynomial over `F_q` of a field element.
    pub fn min_poly(&self, a: &[u32]) -> Vec<u32> {
        let lp = PolyRing::new(self.clone());
        let mut conj = vec![a.to_vec()];
        loop {
            let next = self.frobenius(conj.last().unwrap());
            if next == conj[0] {
                break;
            }
            conj.push(next);
        }
        let mut prod = lp.one();
        for c in &conj {
            prod = lp.mul(&prod, &vec![self.neg(c), self.one()]);
        }
        prod.iter().map(|c| self.as_base(c).expect("min poly coefficients lie in F_q")).collect()
    }

    /// Multiply by an `F_q`-scalar.
    pub fn scale_base(&self, c: u32, a: &[u32]) -> Vec<u32> {
        let fq = self.fq();
        a.iter().map(|&x| fq.fmul(c, x)).collect()
    }

    /// Matrix (columns = images of `x^i`) of the `F_q`-linear map `a -> a^q`.
    pub fn frobenius_columns(&self) -> &[Vec<u32>] {
        &self.inner.frob
    }
}

impl Ring for ResidueRing {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u32> {
        self.embed_base(1)
    }

    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let fq = self.fq();
        a.iter().zip(b).map(|(&x, &y)| fq.fadd(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        let fq = self.fq();
        a.iter().map(|&x| fq.fneg(x)).collect()
    }

    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let fq = self.fq();
        a.iter().zip(b).map(|(&x, &y)| fq.fsub(x, y)).collect()
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let fq = self.fq();
        let d = self.degree();
        let m = self.modulus();
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = fq.fma(x, y, prod[i + j]);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let nc = fq.fneg(c);
            for j in 0..d {
                prod[k - d + j] = fq.fma(nc, m[j], prod[k - d + j]);
            }
        }
        prod.truncate(d);
        prod
    }

    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn try_inv(&self, a: &Vec<u32>) -> Option<Vec<u32>> {
        let pr = PolyRing::new(self.fq().clone());
        let ap = self.to_poly(a);
        if ap.is_empty() {
            return None;
        }
        let (g, s, _) = pr.ext_gcd(&ap, self.modulus());
        if g.len() != 1 {
            return None;
        }
        Some(self.reduce(&s))
    }

    fn from_int(&self, n: i64) -> Vec<u32> {
        self.embed_base(self.fq().from_int(n))
    }
}

impl Field for ResidueRing {}

impl FqAlgebra for ResidueRing {
    fn base_field(&self) -> &Fq {
        self.fq()
    }

    fn from_base(&self, c: u32) -> Vec<u32> {
        self.embed_base(c)
    }

    fn frobenius(&self, a: &Vec<u32>) -> Vec<u32> {
        let fq = self.fq();
        let mut out = vec![0u32; self.degree()];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &f) in out.iter_mut().zip(&self.inner.frob[i]) {
                *o = fq.fma(c, f, *o);
            }
        }
        out
    }
}

impl FiniteFqAlgebra for ResidueRing {
    fn dim(&self) -> usize {
        self.degree()
    }
    fn coords(&self, a: &Vec<u32>) -> Vec<u32> {
        a.clone()
    }
    fn from_coords(&self, c: &[u32]) -> Vec<u32> {
        c.to_vec()
    }
}

/// The extension `F_{q^m}` with the first irreducible modulus of degree `m`
/// in graded-lex order.
pub fn field_tower(fq: &Fq, m: usize) -> Result<ResidueRing> {
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    Ok(ResidueRing::build(fq, first_irreducible(fq, m), true))
}

/// Extension field with a caller-supplied irreducible modulus.
pub fn field_with_modulus(fq: &Fq, modulus: &[u32]) -> Result<ResidueRing> {
    let r = ResidueRing::new(fq, modulus)?;
    if !r.is_field() {
        return Err(Error::InvalidField("modulus is not irreducible over F_q".into()));
    }
    Ok(r)
}

/// Distinct roots in `field` of a polynomial over `field`, in lex order.
pub fn roots_in(field: &ResidueRing, f: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let lp = PolyRing::new(field.clone());
    let f = lp.normalize(f.to_vec());
    if lp.degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = lp.make_monic(&f);
    // g = gcd(f, X^Q - X): the product of the distinct linear factors.
    let x = lp.var();
    let mut xq = x.clone();
    for _ in 0..field.degree() {
        xq = lp.pow_mod(&xq, field.fq().q() as u64, &f).expect("monic");
    }
    let g = lp.gcd(&f, &lp.sub(&xq, &x));
    let mut roots = Vec::new();
    let mut rng = Prng::new(0x5eed_0f_7007);
    split_linear(field, &lp, g, &mut rng, &mut roots);
    roots.sort_by(|a, b| field.cmp_lex(a, b));
    roots
}

fn split_linear(field: &ResidueRing, lp: &PolyRing<ResidueRing>, g: Vec<Vec<u32>>, rng: &mut Prng, out: &mut Vec<Vec<u32>>) {
    match lp.degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(field.neg(&g[0])),
        Some(_) => loop {
            // cX + delta: with c = 1 the trace cannot separate conjugate roots
            let a = vec![field.random(rng), field.random(rng)];
            let h = equal_degree_splitter(field, lp, &a, &g);
            let d = lp.gcd(&g, &h);
            let dd = lp.degree(&d).unwrap_or(0);
            if dd > 0 && dd < lp.degree(&g).unwrap() {
                let (other, _) = lp.divmod(&g, &d).expect("field");
                split_linear(field, lp, d, rng, out);
                split_linear(field, lp, other, rng, out);
                return;
            }
        },
    }
}

/// Cantor-Zassenhaus splitter for degree-1 factors: `a^((Q-1)/2) - 1` in odd
/// characteristic, the absolute trace of `a` in characteristic 2, both mod `g`.
fn equal_degree_splitter(field: &ResidueRing, lp: &PolyRing<ResidueRing>, a: &[Vec<u32>], g: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let p = field.fq().p() as u64;
    let k = field.fq().deg() * field.degree();
    let a = lp.rem_monic(a, g).expect("monic");
    if p == 2 {
        let mut c = a.clone();
        let mut acc = a;
        for _ in 1..k {
            c = lp.rem_monic(&lp.mul(&c, &c), g).expect("monic");
            acc = lp.add(&acc, &c);
        }
        acc
    } else {
        let b = lp.pow_mod(&a, (p - 1) / 2, g).expect("monic");
        let mut c = b.clone();
        let mut acc = b;
        for _ in 1..k {
            c = lp.pow_mod(&c, p, g).expect("monic");
            acc = lp.rem_monic(&lp.mul(&acc, &c), g).expect("monic");
        }
        lp.sub(&acc, &lp.one())
    }
}

/// Roots of a polynomial over `F_q` inside an extension field.
pub fn roots_of_base_poly(field: &ResidueRing, f: &[u32]) -> Vec<Vec<u32>> {
    let lifted: Vec<Vec<u32>> = f.iter().map(|&c| field.embed_base(c)).collect();
    roots_in(field, &lifted)
}

/// Field embedding `src -> dst` sending the generator of `src` to the
/// lex-smallest root of its modulus in `dst`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub src: ResidueRing,
    pub dst: ResidueRing,
    pub gen_image: Vec<u32>,
}

impl Embedding {
    pub fn new(src: &ResidueRing, dst: &ResidueRing) -> Result<Embedding> {
        Self::new_with_root_index(src, dst, 0)
    }

    /// Embedding choosing the `k`-th root in lex order (a Galois conjugate of
    /// the canonical one).
    pub fn new_with_root_index(src: &ResidueRing, dst: &ResidueRing, k: usize) -> Result<Embedding> {
        if src.fq() != dst.fq() {
            return Err(Error::InvalidArgument("embedding between fields over different F_q".into()));
        }
        if !dst.degree().is_multiple_of(src.degree()) {
            return Err(Error::DegreeMismatch(format!(
                "F_q^{} does not embed in F_q^{}",
                src.degree(),
                dst.degree()
            )));
        }
        let roots = roots_of_base_poly(dst, src.modulus());
        let gen_image = roots
            .get(k)
            .cloned()
            .ok_or_else(|| Error::Internal("modulus of subfield has no root".into()))?;
        Ok(Embedding { src: src.clone(), dst: dst.clone(), gen_image })
    }

    pub fn apply(&self, a: &[u32]) -> Vec<u32> {
        let mut acc = self.dst.zero();
        for &c in a.iter().rev() {
            acc = self.dst.add(&self.dst.mul(&acc, &self.gen_image), &self.dst.embed_base(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_moduli() {
        let f2 = Fq::prime_field(2).unwrap();
        let f3 = Fq::prime_field(3).unwrap();
        assert_eq!(first_irreducible(&f2, 2), vec![1, 1, 1]);
        assert_eq!(first_irreducible(&f2, 3), vec![1, 1, 0, 1]);
        assert_eq!(first_irreducible(&f3, 2), vec![1, 0, 1]);
        assert_eq!(first_irreducible(&f3, 1), vec![0, 1]);
        let f4 = Fq::new(&FqConfig { p: 2, deg: 2, modulus: None }).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(Fq::new(&FqConfig { p: 2, deg: 2, modulus: Some(vec![1, 0, 1]) }).is_err());
        assert!(Fq::prime_field(4).is_err());
        assert!(Fq::new(&FqConfig { p: 2, deg: 17, modulus: None }).is_err());
    }

    #[test]
    fn irreducible_counts() {
        // Necklace formula: 2, 1, 2, 3, 6 irreducibles of degree 1..5 over F_2.
        let f2 = Fq::prime_field(2).unwrap();
        let counts: Vec<usize> = (1..=5).map(|d| monic_irreducibles(&f2, d).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6]);
        let f3 = Fq::prime_field(3).unwrap();
        assert_eq!(monic_irreducibles(&f3, 2).len(), 3);
    }

    #[test]
    fn roots_and_embedding() {
        let f2 = Fq::prime_field(2).unwrap();
        let f4 = field_tower(&f2, 2).unwrap();
        let f16 = field_tower(&f2, 4).unwrap();
        let r = roots_of_base_poly(&f16, f4.modulus());
        assert_eq!(r.len(), 2);
        assert!(f16.cmp_lex(&r[0], &r[1]).is_lt());
        let e = Embedding::new(&f4, &f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(e.apply(&f4.mul(&a, &b)), f16.mul(&e.apply(&a), &e.apply(&b)));
            }
        }
        assert!(Embedding::new(&field_tower(&f2, 3).unwrap(), &f16).is_err());
    }

    #[test]
    fn primitive_and_min_poly() {
        let f3 = Fq::prime_field(3).unwrap();
        let f9 = field_tower(&f3, 2).unwrap();
        let g = f9.primitive_element().unwrap();
        assert_eq!(f9.mult_order(&g), Some(8));
        let mp = f9.min_poly(&g);
        assert_eq!(mp.len(), 3);
        assert!(is_irreducible(&f3, &mp));
    }

    proptest! {
        #[test]
        fn fq_field_axioms(a in 0u32..27, b in 0u32..27, c in 0u32..27) {
            let f = Fq::new(&FqConfig { p: 3, deg: 3, modulus: None }).unwrap();
            prop_assert_eq!(f.fmul(a, f.fadd(b, c)), f.fadd(f.fmul(a, b), f.fmul(a, c)));
            prop_assert_eq!(f.fadd(a, f.fneg(a)), 0);
            if a != 0 {
                prop_assert_eq!(f.fmul(a, f.finv(a).unwrap()), 1);
            }
        }

        #[test]
        fn extension_frobenius_is_power(x in prop::collection::vec(0u32..4, 3)) {
            let f4 = Fq::new(&FqConfig { p: 2, deg: 2, modulus: None }).unwrap();
            let k = field_tower(&f4, 3).unwrap();
            prop_assert_eq!(k.frobenius(&x), k.pow(&x, 4));
            if !k.is_zero(&x) {
                prop_assert_eq!(k.mul(&x, &k.inv(&x)), k.one());
            }
        }
    }
}
