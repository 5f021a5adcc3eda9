//! Randomized invariant suites shared by the command-line self-test and the
//! acceptance harness. Every suite is a pure function of its seed.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::charpoly::{charpoly_motive, cross_check, torsion_oracle};
use crate::cyclotomic::CyclotomicField;
use crate::drinfeld::{DrinfeldModule, ReducedDrinfeldModule};
use crate::error::{Error, Result};
use crate::euler::{dirichlet_agreement, pv_at_idempotent, substitute_group_element, theta_truncated, verify_cyclotomic, verify_synthetic, PvEvaluator};
use crate::field::{field_tower, is_irreducible, monic_irreducibles, monic_irreducibles_up_to, Fq, FqConfig};
use crate::fitting::{finite_group_ring, fitting_ideal, ideal_equal, primary_part, reduce_group_poly, reduce_module, FiniteRingIdeal};
use crate::galois::GaloisDatum;
use crate::group::{gcd, AbelianGroup, GroupAlgebra};
use crate::linalg::FqMat;
use crate::module::{find_free_basis, fitting_generator, regular_module, GTModule};
use crate::newton::{newton_polygon, unit_root_factor, Place};
use crate::poly::PolyRing;
use crate::ring::Ring;
use crate::rng::Prng;
use crate::series::SeriesRing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// reproduction descriptions of failing instances
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }

    /// A suite of one check.
    pub fn single(name: &str, outcome: std::result::Result<(), String>) -> Self {
        Self::collect(name, vec![outcome])
    }

    fn collect(name: &str, outcomes: Vec<std::result::Result<(), String>>) -> Self {
        let total = outcomes.len();
        let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
        SuiteResult { name: name.into(), passed: total - failures.len(), total, failures }
    }
}

/// `q` in `{2, 3, 4}`.
pub fn random_fq(rng: &mut Prng) -> Fq {
    match rng.below(3) {
        0 => Fq::prime_field(2),
        1 => Fq::prime_field(3),
        _ => Fq::new(&FqConfig { p: 2, deg: 2, modulus: None }),
    }
    .expect("small field")
}

fn random_poly(rng: &mut Prng, fq: &Fq, max_deg: usize) -> Vec<u32> {
    let d = rng.below(max_deg as u64 + 1) as usize;
    PolyRing::new(fq.clone()).normalize((0..=d).map(|_| rng.below(fq.q() as u64) as u32).collect())
}

fn random_monic(rng: &mut Prng, fq: &Fq, d: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..d).map(|_| rng.below(fq.q() as u64) as u32).collect();
    v.push(1);
    v
}

fn random_irreducible(rng: &mut Prng, fq: &Fq, d: usize) -> Vec<u32> {
    loop {
        let v = random_monic(rng, fq, d);
        if is_irreducible(fq, &v) {
            return v;
        }
    }
}

/// Random Drinfeld module of rank `r` over `F_{q^n_v}`.
pub fn random_reduced(rng: &mut Prng, fq: &Fq, n_v: usize, r: usize) -> ReducedDrinfeldModule {
    let l1 = field_tower(fq, n_v).expect("tower");
    let mut coeffs: Vec<Vec<u32>> = (0..=r).map(|_| l1.random(rng)).collect();
    while l1.is_zero(&coeffs[r]) {
        coeffs[r] = l1.random(rng);
    }
    ReducedDrinfeldModule::from_residue_coeffs(&l1, coeffs).expect("valid coefficients")
}

/// Random global Drinfeld module `t + e_1 tau + ... + e_r tau^r` with
/// `deg e_i <= max_deg`.
pub fn random_global(rng: &mut Prng, fq: &Fq, r: usize, max_deg: usize) -> DrinfeldModule {
    let mut coeffs = vec![vec![0, 1]];
    for i in 1..=r {
        let mut c = random_poly(rng, fq, max_deg);
        while i == r && c.is_empty() {
            c = random_poly(rng, fq, max_deg);
        }
        coeffs.push(c);
    }
    DrinfeldModule::new(fq, coeffs).expect("valid module")
}

fn describe_fq(fq: &Fq) -> String {
    format!("q={}", fq.q())
}

// ---------------------------------------------------------------------------
// golden rank-2 instance

pub fn golden_rank2() -> SuiteResult {
    let run = || -> std::result::Result<(), String> {
        let f2 = Fq::prime_field(2).map_err(|e| e.to_string())?;
        let e = DrinfeldModule::new(&f2, vec![vec![0, 1], vec![1], vec![1]]).map_err(|e| e.to_string())?;
        let red = e.reduce_mod(&[0, 1], 1).map_err(|e| e.to_string())?;
        let cp = charpoly_motive(&red).map_err(|e| e.to_string())?;
        check(cp.coeffs == vec![vec![0, 1], vec![1], vec![1]], "P_v = X^2 + X + t")?;
        let oracle = torsion_oracle(&red, &[1, 1], None).map_err(|e| e.to_string())?;
        check(oracle == vec![vec![1], vec![1], vec![1]], "oracle at t+1 = X^2 + X + 1")?;
        check(cp.height == 1, "height 1")?;
        let g = unit_root_factor(&f2, &cp, 2).map_err(|e| e.to_string())?;
        check(g.g == vec![vec![1, 1], vec![1, 0]], "unit-root factor X + 1 + t mod t^2")
    };
    SuiteResult::collect("golden_rank2", vec![run()])
}

fn check(cond: bool, what: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("failed: {what}"))
    }
}

// ---------------------------------------------------------------------------
// Carlitz law

/// `P_v = X - v` for the Carlitz module at every monic irreducible of degree
/// `<= max_deg`, cross-checked by torsion at two small primes.
pub fn carlitz_law(q: u32, max_deg: usize) -> SuiteResult {
    let fq = Fq::prime_field(q).expect("prime");
    let c = DrinfeldModule::carlitz(&fq);
    let a = PolyRing::new(fq.clone());
    let small = monic_irreducibles_up_to(&fq, 2);
    let primes = monic_irreducibles_up_to(&fq, max_deg);
    let outcomes = primes
        .par_iter()
        .map(|v| {
            let run = || -> Result<bool> {
                let red = c.reduce_mod(v, v.len() - 1)?;
                let cp = charpoly_motive(&red)?;
                let expect = vec![a.neg(v), a.one()];
                let v0s: Vec<Vec<u32>> = small.iter().filter(|p| *p != v).take(2).cloned().collect();
                cross_check(&red, &cp, &v0s, None)?;
                Ok(cp.coeffs == expect)
            };
            match run() {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("Carlitz q={q} v={v:?}: P_v differs from X - v")),
                Err(e) => Err(format!("Carlitz q={q} v={v:?}: {e}")),
            }
        })
        .collect();
    SuiteResult::collect(&format!("carlitz_law_q{q}"), outcomes)
}

// ---------------------------------------------------------------------------
// identity suite

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityClass {
    SyntheticUnramified,
    SyntheticTame,
    CyclotomicUnramified,
    CyclotomicTame,
}

impl IdentityClass {
    pub const ALL: [IdentityClass; 4] = [
        IdentityClass::SyntheticUnramified,
        IdentityClass::SyntheticTame,
        IdentityClass::CyclotomicUnramified,
        IdentityClass::CyclotomicTame,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityClass::SyntheticUnramified => "identity_synthetic_unramified",
            IdentityClass::SyntheticTame => "identity_synthetic_tame",
            IdentityClass::CyclotomicUnramified => "identity_cyclotomic_unramified",
            IdentityClass::CyclotomicTame => "identity_cyclotomic_tame",
        }
    }
}

/// Largest `F_q`-dimension of a global residue module drawn by the suites.
const MAX_MODULE_DIM: usize = 48;

/// Synthetic datum with `e = 1` (unramified) or a random tame `e > 1`.
pub fn random_synthetic(rng: &mut Prng, tame: bool) -> GaloisDatum {
    loop {
        let fq = random_fq(rng);
        let r = 1 + rng.below(3) as usize;
        let n_v = 1 + rng.below(4) as usize;
        let f = 1 + rng.below(2);
        let k = 1 + rng.below(3);
        let qn = (fq.q() as u64).pow(n_v as u32);
        let e = if tame {
            let divs: Vec<u64> = (2..=8).filter(|d| (qn - 1).is_multiple_of(*d)).collect();
            if divs.is_empty() {
                continue;
            }
            divs[rng.below(divs.len() as u64) as usize]
        } else {
            1
        };
        if n_v * (f * k * e) as usize > MAX_MODULE_DIM {
            continue;
        }
        let red = random_reduced(rng, &fq, n_v, r);
        // three shapes of G containing G_v = <sigma> x <gamma>
        let shape = rng.below(3);
        let built = match shape {
            0 => AbelianGroup::new(&[f, e, k]).and_then(|g| GaloisDatum::new(&g, &[1 % f, 0, 0], &[0, 1 % e, 0], &red)),
            1 => AbelianGroup::new(&[f * k, e]).and_then(|g| GaloisDatum::new(&g, &[k % (f * k), 0], &[0, 1 % e], &red)),
            _ if gcd(f, e) == 1 => AbelianGroup::new(&[f * e, k]).and_then(|g| GaloisDatum::new(&g, &[e % (f * e), 0], &[f % (f * e), 0], &red)),
            _ => continue,
        };
        if let Ok(d) = built {
            return d;
        }
    }
}

fn describe_datum(d: &GaloisDatum) -> String {
    format!(
        "synthetic {} G={:?} sigma={:?} gamma={:?} n_v={} e={} f={} coeffs={:?}",
        describe_fq(d.fq()),
        d.group().orders(),
        d.sigma(),
        d.inertia_generator(),
        d.n_v(),
        d.e(),
        d.f(),
        d.reduction().coeffs()
    )
}

/// Random cyclotomic instance `(K_f, E, v)` with `v` unramified or tame.
pub fn random_cyclotomic(rng: &mut Prng, tame: bool) -> (CyclotomicField, DrinfeldModule, Vec<u32>) {
    let a_ring = |fq: &Fq| PolyRing::new(fq.clone());
    loop {
        let fq = random_fq(rng);
        let a = a_ring(&fq);
        let q = fq.q() as usize;
        let r = 1 + rng.below(3) as usize;
        let (f, v) = if tame {
            let dv = 1 + rng.below(2) as usize;
            let v = random_irreducible(rng, &fq, dv);
            let dg = rng.below(3) as usize;
            let g = random_monic(rng, &fq, dg);
            if a.gcd(&g, &v) != a.one() {
                continue;
            }
            (a.mul(&v, &g), v)
        } else {
            let df = 1 + rng.below(2) as usize;
            let f = random_monic(rng, &fq, df);
            let dv = 1 + rng.below(4) as usize;
            let v = random_irreducible(rng, &fq, dv);
            if a.rem_monic(&f, &v).map(|x| x.is_empty()).unwrap_or(true) {
                continue;
            }
            (f, v)
        };
        let dv = v.len() - 1;
        if q.pow((f.len() - 1) as u32) * dv > MAX_MODULE_DIM {
            continue;
        }
        let Ok(k) = CyclotomicField::new(&fq, &f) else { continue };
        if k.group().size() * dv > MAX_MODULE_DIM {
            continue;
        }
        let e = random_global(rng, &fq, r, 2);
        if !e.has_good_reduction(&v) {
            continue;
        }
        // residue degree f(w/v) <= 2 and [G : G_v] <= 3
        match k.classify(&e, &v) {
            Ok(c) if c.f <= 2 && k.group().size() as u64 <= 3 * c.e * c.f => return (k, e, v),
            _ => continue,
        }
    }
}

fn describe_cyclotomic(k: &CyclotomicField, e: &DrinfeldModule, v: &[u32]) -> String {
    format!("cyclotomic {} f={:?} v={:?} coeffs={:?}", describe_fq(k.fq()), k.conductor(), v, e.coeffs())
}

pub fn identity_suite(class: IdentityClass, count: usize, seed: u64, eval: PvEvaluator) -> SuiteResult {
    let mut master = Prng::new(seed ^ class as u64);
    let seeds: Vec<u64> = (0..count).map(|_| master.next_u64()).collect();
    let outcomes = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            let (desc, report) = match class {
                IdentityClass::SyntheticUnramified | IdentityClass::SyntheticTame => {
                    let d = random_synthetic(&mut rng, class == IdentityClass::SyntheticTame);
                    let rep = verify_synthetic(&d, eval, s, 8).and_then(|r| lift_independent(&d, eval).map(|ok| (r, ok)));
                    (describe_datum(&d), rep)
                }
                _ => {
                    let (k, e, v) = random_cyclotomic(&mut rng, class == IdentityClass::CyclotomicTame);
                    (describe_cyclotomic(&k, &e, &v), verify_cyclotomic(&k, &e, &v, eval, s, 8).map(|r| (r, true)))
                }
            };
            match report {
                Ok((r, lift_ok)) if r.all_pass() && lift_ok => Ok(()),
                Ok((r, _)) => Err(format!(
                    "{desc} seed={s}: unit={} norm={} monic={} series={} lhs_unit={:?} rhs_unit={:?}",
                    r.unit_identity, r.norm_identity, r.monic_degree, r.series_identity, r.lhs_unit, r.rhs_unit
                )),
                Err(e) => Err(format!("{desc} seed={s}: {e}")),
            }
        })
        .collect();
    SuiteResult::collect(class.name(), outcomes)
}

/// `P_v(e_v sigma_v)` is unchanged when `sigma_v` is replaced by
/// `sigma_v gamma`.
fn lift_independent(d: &GaloisDatum, eval: PvEvaluator) -> Result<bool> {
    if d.e() == 1 {
        return Ok(true);
    }
    let cp = charpoly_motive(d.reduction())?;
    let ga = d.group_algebra();
    let e_v = d.idempotent()?;
    let lift = d.group().op(d.sigma(), d.inertia_generator());
    let a = eval(&cp, &ga, &e_v, &ga.group_elem(d.sigma()))?;
    let b = eval(&cp, &ga, &e_v, &ga.group_elem(&lift))?;
    Ok(a == b)
}

// ---------------------------------------------------------------------------
// degree bounds, Newton polygons, unit-root factors

fn random_reduced_instance(rng: &mut Prng) -> ReducedDrinfeldModule {
    let fq = random_fq(rng);
    let r = 1 + rng.below(3) as usize;
    let n_v = 1 + rng.below(4) as usize;
    random_reduced(rng, &fq, n_v, r)
}

fn instance_seeds(seed: u64, tag: u64, count: usize) -> Vec<u64> {
    let mut master = Prng::new(seed ^ tag.wrapping_mul(0x9e37_79b9));
    (0..count).map(|_| master.next_u64()).collect()
}

fn describe_reduced(red: &ReducedDrinfeldModule) -> String {
    format!("reduced {} n_v={} coeffs={:?}", describe_fq(red.fq()), red.n_v(), red.coeffs())
}

/// `deg a_0 = n_v`, `deg a_i <= n_v (r - i) / r`, one Newton segment of
/// slope `n_v / r` at infinity, and `a_0 = rho Nv`.
pub fn degree_bound_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 4, count)
        .par_iter()
        .map(|&s| {
            let red = random_reduced_instance(&mut Prng::new(s));
            let run = || -> Result<()> {
                let fq = red.fq();
                let a = PolyRing::new(fq.clone());
                let cp = charpoly_motive(&red)?;
                let (r, n) = (cp.r, cp.n_v);
                if a.degree(&cp.coeffs[0]) != Some(n) {
                    return Err(Error::DegreeBoundViolation("deg a_0".into()));
                }
                for i in 1..r {
                    if a.degree(&cp.coeffs[i]).is_some_and(|d| d * r > n * (r - i)) {
                        return Err(Error::DegreeBoundViolation(format!("deg a_{i}")));
                    }
                }
                if cp.coeffs[0] != a.scale(&cp.rho, &red.norm()) {
                    return Err(Error::DegreeBoundViolation("a_0 != rho Nv".into()));
                }
                let np = newton_polygon(fq, &cp.coeffs, &Place::Infinity)?;
                let single = np.segments.len() == 1 && np.segments[0].slope == Ratio::new(n as i64, r as i64);
                if !single {
                    return Err(Error::DegreeBoundViolation(format!("Newton polygon at infinity {:?}", np.segments)));
                }
                Ok(())
            };
            run().map_err(|e| format!("{} seed={s}: {e}", describe_reduced(&red)))
        })
        .collect();
    SuiteResult::collect("degree_bounds", outcomes)
}

/// `g` divides `P_v` modulo `w0^N` for `N <= 4`, with `deg g = r - h`.
pub fn unit_root_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 4, count)
        .par_iter()
        .map(|&s| {
            let red = random_reduced_instance(&mut Prng::new(s));
            let run = || -> Result<()> {
                let cp = charpoly_motive(&red)?;
                let h = red.height()?;
                for n in 1..=4 {
                    let g = unit_root_factor(red.fq(), &cp, n)?;
                    if !g.divides(&cp) || g.g.len() - 1 != cp.r - h {
                        return Err(Error::OracleMismatch(format!("unit-root factor at N={n}")));
                    }
                }
                Ok(())
            };
            run().map_err(|e| format!("{} seed={s}: {e}", describe_reduced(&red)))
        })
        .collect();
    SuiteResult::collect("unit_root_factor", outcomes)
}

/// Motive charpoly against the torsion oracle at a small prime.
pub fn oracle_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 11, count)
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            let fq = if rng.below(2) == 0 { Fq::prime_field(2) } else { Fq::prime_field(3) }.expect("prime");
            let n_v = 1 + rng.below(3) as usize;
            let r = 1 + rng.below(2) as usize;
            let red = random_reduced(&mut rng, &fq, n_v, r);
            let run = || -> Result<()> {
                let cp = charpoly_motive(&red)?;
                let v0 = monic_irreducibles(&fq, 1).into_iter().find(|p| p.as_slice() != red.w0()).expect("two primes");
                match cross_check(&red, &cp, &[v0], None) {
                    Err(Error::SplittingFieldTooLarge { .. }) => Ok(()),
                    other => other,
                }
            };
            run().map_err(|e| format!("{} seed={s}: {e}", describe_reduced(&red)))
        })
        .collect();
    SuiteResult::collect("torsion_oracle", outcomes)
}

// ---------------------------------------------------------------------------
// finite-level Fitting ideals

/// `Fitt` of `E(O_K/w)_{v0} / v0^N` over `(A/v0^N)[G_v]` equals
/// `(P_v(sigma_v))` there, for unramified local data.
pub fn finite_fitting_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 6, count)
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            let fq = if rng.below(2) == 0 { Fq::prime_field(2) } else { Fq::prime_field(3) }.expect("prime");
            let n_v = 1 + rng.below(2) as usize;
            let r = 1 + rng.below(2) as usize;
            let f = 1 + rng.below(2);
            let red = random_reduced(&mut rng, &fq, n_v, r);
            let dv0 = 1 + rng.below(2) as usize;
            let v0 = random_irreducible(&mut rng, &fq, dv0);
            let n = 1 + rng.below(3) as usize;
            let desc = format!("{} f={f} v0={v0:?} N={n}", describe_reduced(&red));
            let run = || finite_fitting_holds(&red, f, &v0, n);
            match run() {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("{desc} seed={s}: ideals differ")),
                Err(e) => Err(format!("{desc} seed={s}: {e}")),
            }
        })
        .collect();
    SuiteResult::collect("finite_fitting", outcomes)
}

/// One instance of the finite-level comparison for the unramified local
/// datum of residue degree `f`.
pub fn finite_fitting_holds(red: &ReducedDrinfeldModule, f: u64, v0: &[u32], n: usize) -> Result<bool> {
    let fq = red.fq();
    let d = GaloisDatum::unramified(red, f)?;
    let (_, star) = d.local_residue()?;
    let cp = charpoly_motive(red)?;
    let gv = d.local_group();
    let ga = GroupAlgebra::new(fq.clone(), gv.clone());
    let pv = substitute_group_element(&cp, &ga, &ga.group_elem(&gv.generator(0)));
    let ring = finite_group_ring(fq, v0, n, &gv)?;
    let mbar = reduce_module(&primary_part(&star, v0)?, v0, n)?;
    let fit = fitting_ideal(&mbar, &ring)?;
    ideal_equal(&fit, &FiniteRingIdeal::new(&ring, vec![reduce_group_poly(&ring, &pv)]))
}

/// The rank-2 module `t + tau + tau^2` over `F_2` reduced at `t`, for
/// residue degrees `1..=3` and `v0` in `{t + 1, t^2 + t + 1}`, modulo `v0^2`.
pub fn finite_fitting_rank2() -> SuiteResult {
    let f2 = Fq::prime_field(2).expect("prime");
    let e = DrinfeldModule::new(&f2, vec![vec![0, 1], vec![1], vec![1]]).expect("module");
    let red = e.reduce_mod(&[0, 1], 1).expect("good reduction");
    let mut outcomes = Vec::new();
    for f in 1..=3 {
        for v0 in [vec![1, 1], vec![1, 1, 1]] {
            outcomes.push(match finite_fitting_holds(&red, f, &v0, 2) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("rank-2 golden f={f} v0={v0:?}: ideals differ")),
                Err(err) => Err(format!("rank-2 golden f={f} v0={v0:?}: {err}")),
            });
        }
    }
    SuiteResult::collect("finite_fitting_rank2_golden", outcomes)
}

/// Fitting ideals from presentations agree with the monic generator on
/// free modules.
pub fn presentation_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 12, count)
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            let d = loop {
                let tame = rng.below(2) == 0;
                let d = random_synthetic(&mut rng, tame);
                if d.n_v() * (d.e() * d.f()) as usize <= 12 && d.fq().q() <= 3 {
                    break d;
                }
            };
            let v0 = random_irreducible(&mut rng, d.fq(), 1);
            let n = 1 + rng.below(2) as usize;
            let run = || -> Result<bool> {
                let (_, star) = d.local_residue()?;
                let g = fitting_generator(&star, s)?;
                let ring = finite_group_ring(d.fq(), &v0, n, star.group())?;
                let fit = fitting_ideal(&reduce_module(&star, &v0, n)?, &ring)?;
                ideal_equal(&fit, &FiniteRingIdeal::new(&ring, vec![reduce_group_poly(&ring, &g.poly)]))
            };
            match run() {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("{} v0={v0:?} N={n} seed={s}: ideals differ", describe_datum(&d))),
                Err(e) => Err(format!("{} v0={v0:?} N={n} seed={s}: {e}", describe_datum(&d))),
            }
        })
        .collect();
    SuiteResult::collect("presentation_fitting", outcomes)
}

// ---------------------------------------------------------------------------
// local structure of tame residue rings

/// `e_v`-splitting, graded slices, and equality of the `(1 - e_v)`-part
/// generators of `E(w/w^e)` and `w/w^e`.
pub fn local_structure_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 7, count)
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            let d = random_synthetic(&mut rng, true);
            let run = || -> Result<()> { local_structure(&d, s) };
            run().map_err(|e| format!("{} seed={s}: {e}", describe_datum(&d)))
        })
        .collect();
    SuiteResult::collect("local_structure", outcomes)
}

pub fn local_structure(d: &GaloisDatum, seed: u64) -> Result<()> {
    let fq = d.fq();
    let (plain, star) = d.local_residue()?;
    let slice = d.n_v() * d.f() as usize;
    let e = d.e() as usize;
    let total = plain.dim();
    let ev = d.local_idempotent()?;
    let gv = d.local_group();
    let ga = GroupAlgebra::new(fq.clone(), gv.clone());
    let comp = ga.sub(&ga.one(), &ev);

    // e_v M is the u^0 slice with trivial inertia; (1 - e_v) M is the rest
    let top = plain.image_of(&ev)?;
    let rest = plain.image_of(&comp)?;
    if top.dim() != slice || rest.dim() != slice * (e - 1) {
        return Err(Error::Internal(format!("splitting dimensions {} + {}", top.dim(), rest.dim())));
    }
    if top.generator_actions()[1] != FqMat::identity(slice) {
        return Err(Error::Internal("inertia acts nontrivially on e_v M".into()));
    }
    let ev_mat = plain.group_algebra_action(&ev);
    for j in 0..total {
        if (0..slice).any(|i| ev_mat.get(i, j) != 0) != (j < slice) && j >= slice {
            return Err(Error::Internal("e_v M is not the constant slice".into()));
        }
        if j < slice && (slice..total).any(|i| ev_mat.get(i, j) != 0) {
            return Err(Error::Internal("e_v moves constants out of the constant slice".into()));
        }
    }

    // star and plain agree on each u^i / u^(i+1) for i >= 1
    let diff = star.t_action().sub(fq, plain.t_action());
    for j in slice..total {
        let block = j / slice;
        if (0..(block + 1) * slice).any(|i| diff.get(i, j) != 0) {
            return Err(Error::Internal(format!("star and plain differ on the graded slice {block}")));
        }
    }

    // |E(w/w^e)| = |w/w^e| on the (1 - e_v) component
    if e > 1 {
        let pad = regular_module(fq, &gv, d.n_v())?.image_of(&ev)?;
        let a = fitting_generator(&star.image_of(&comp)?.direct_sum(&pad)?, seed)?;
        let b = fitting_generator(&plain.image_of(&comp)?.direct_sum(&pad)?, seed ^ 1)?;
        if a != b {
            return Err(Error::Internal("Fitting generators of E(w/w^e) and w/w^e differ".into()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// cross-model agreement

/// For unramified `v`, the cyclotomic residue module and the synthetic
/// induced module have the same monic generators.
pub fn cross_model_suite(count: usize, seed: u64) -> SuiteResult {
    let outcomes = instance_seeds(seed, 9, count)
        .par_iter()
        .map(|&s| {
            let mut rng = Prng::new(s);
            // the synthetic model needs F_{q^(n_v f)} explicitly
            let (k, e, v, c) = loop {
                let (k, e, v) = random_cyclotomic(&mut rng, false);
                match k.classify(&e, &v) {
                    Ok(c) if c.n_v * c.f as usize <= 8 => break (k, e, v, c),
                    _ => continue,
                }
            };
            let run = || -> Result<bool> {
                let red = k.reduction(&e, &v)?;
                let sigma = c.sigma.clone().ok_or_else(|| Error::Internal("no Frobenius".into()))?;
                let d = GaloisDatum::new(k.group(), &sigma, &k.group().identity(), &red)?;
                let (sp, ss) = d.global_residue()?;
                let (cp, cs) = k.residue_algebra(&e, &v)?;
                Ok(fitting_generator(&sp, s)? == fitting_generator(&cp, s)? && fitting_generator(&ss, s)? == fitting_generator(&cs, s)?)
            };
            match run() {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("{} seed={s}: models disagree", describe_cyclotomic(&k, &e, &v))),
                Err(err) => Err(format!("{} seed={s}: {err}", describe_cyclotomic(&k, &e, &v))),
            }
        })
        .collect();
    SuiteResult::collect("cross_model", outcomes)
}

// ---------------------------------------------------------------------------
// Theta

/// Trivial-group Carlitz `Theta` over primes of degree `<= d` against the
/// monic Dirichlet sum, required to agree to precision `d`.
pub fn theta_dirichlet(q: u32, d: usize) -> SuiteResult {
    let run = || -> Result<Option<usize>> {
        let fq = Fq::prime_field(q)?;
        // (A/t)^x is trivial for q = 2; otherwise use the trivial conductor
        let f: Vec<u32> = if q == 2 { vec![0, 1] } else { vec![1] };
        let k = CyclotomicField::new(&fq, &f)?;
        let th = theta_truncated(&k, &DrinfeldModule::carlitz(&fq), d, d + 1)?;
        dirichlet_agreement(&th, &fq)
    };
    let outcome = match run() {
        Ok(Some(p)) if p >= d => Ok(()),
        Ok(p) => Err(format!("q={q} D={d}: agreement only to precision {p:?}")),
        Err(e) => Err(format!("q={q} D={d}: {e}")),
    };
    SuiteResult::collect(&format!("theta_dirichlet_q{q}"), vec![outcome])
}

/// Partial products at `D` and `D + 1` agree to precision `floor(D / r)`.
pub fn theta_convergence(q: u32, conductor: &[u32], e: &DrinfeldModule, d: usize) -> std::result::Result<(), String> {
    let run = || -> Result<bool> {
        let fq = Fq::prime_field(q)?;
        let k = CyclotomicField::new(&fq, conductor)?;
        let n = d + 2;
        let a = theta_truncated(&k, e, d, n)?;
        let b = theta_truncated(&k, e, d + 1, n)?;
        let sr = SeriesRing::new(k.group_algebra());
        Ok(sr.agreement(&a.value, &b.value) > d / e.rank())
    };
    match run() {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("q={q} f={conductor:?} D={d}: partial products diverge early")),
        Err(err) => Err(format!("q={q} f={conductor:?} D={d}: {err}")),
    }
}

pub fn theta_convergence_suite(d: usize) -> SuiteResult {
    let f2 = Fq::prime_field(2).expect("prime");
    let f3 = Fq::prime_field(3).expect("prime");
    let rank2 = DrinfeldModule::new(&f2, vec![vec![0, 1], vec![1], vec![1]]).expect("module");
    let cases: Vec<(u32, Vec<u32>, DrinfeldModule)> = vec![
        (2, vec![1, 1, 1], DrinfeldModule::carlitz(&f2)),
        (2, vec![0, 1, 1], DrinfeldModule::carlitz(&f2)),
        (3, vec![1, 0, 1], DrinfeldModule::carlitz(&f3)),
        (2, vec![1, 1, 1], rank2),
    ];
    let outcomes = cases.par_iter().map(|(q, f, e)| theta_convergence(*q, f, e, d)).collect();
    SuiteResult::collect("theta_convergence", outcomes)
}

// ---------------------------------------------------------------------------
// negative controls

pub fn negative_controls(seed: u64) -> SuiteResult {
    let mut outcomes = Vec::new();
    let f2 = Fq::prime_field(2).expect("prime");
    let l1 = field_tower(&f2, 1).expect("field");
    let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![0], vec![1]]).expect("module");
    let wild = AbelianGroup::new(&[2]).and_then(|g| GaloisDatum::new(&g, &[0], &[1], &red));
    outcomes.push(check(matches!(wild, Err(Error::WildRamification { e: 2 })), "synthetic q=2, e=2 rejected as wild"));

    let k = CyclotomicField::new(&f2, &[0, 0, 1]).expect("field");
    let c = DrinfeldModule::carlitz(&f2);
    outcomes.push(check(matches!(k.residue_algebra(&c, &[0, 1]), Err(Error::WildPrime)), "cyclotomic v^2 | f rejected"));

    let bad = DrinfeldModule::new(&f2, vec![vec![0, 1], vec![0, 1]]).expect("module");
    outcomes.push(check(matches!(bad.reduce_mod(&[0, 1], 1), Err(Error::BadReduction)), "v | e_r rejected"));

    let g = AbelianGroup::new(&[2]).expect("group");
    let nonfree = GTModule::new(&f2, &g, vec![FqMat::identity(2)], FqMat::zeros(2, 2)).expect("module");
    outcomes.push(check(matches!(find_free_basis(&nonfree, seed), Err(Error::NotFree)), "trivial Z/2 action on F_2[u]/(u^2) certified not free"));
    SuiteResult::collect("negative_controls", outcomes)
}

/// The identity suite must catch a sign flip in the `P_v(e_v sigma_v)`
/// evaluation.
pub fn mutation_caught(count: usize, seed: u64) -> SuiteResult {
    let r = identity_suite(IdentityClass::SyntheticTame, count, seed, crate::euler::pv_at_idempotent_flipped);
    SuiteResult::collect("mutation_detected", vec![check(!r.failures.is_empty(), "flipped evaluator is rejected")])
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

/// All suites at the given scale, in a fixed order.
pub fn run_all(scale: Scale, seed: u64) -> Vec<SuiteResult> {
    let (id, inv, small) = match scale {
        Scale::Quick => (12, 40, 12),
        Scale::Full => (200, 200, 100),
    };
    let mut out = vec![golden_rank2(), carlitz_law(2, 4), carlitz_law(3, if scale == Scale::Full { 4 } else { 3 })];
    for class in IdentityClass::ALL {
        out.push(identity_suite(class, id, seed, pv_at_idempotent));
    }
    out.push(degree_bound_suite(inv, seed));
    out.push(unit_root_suite(inv, seed));
    out.push(oracle_suite(small, seed));
    out.push(finite_fitting_suite(small, seed));
    out.push(finite_fitting_rank2());
    out.push(presentation_suite(small, seed));
    out.push(local_structure_suite(small, seed));
    out.push(cross_model_suite(small, seed));
    let d = if scale == Scale::Full { 6 } else { 4 };
    out.push(theta_dirichlet(2, d));
    out.push(theta_dirichlet(3, d));
    out.push(theta_convergence_suite(3));
    out.push(negative_controls(seed));
    out.push(mutation_caught(small, seed));
    out
}
