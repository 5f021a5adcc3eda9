use eulerfit_core::charpoly::{charpoly_motive, reconstruct_via_crt};
use eulerfit_core::cyclotomic::CyclotomicField;
use eulerfit_core::drinfeld::DrinfeldModule;
use eulerfit_core::euler::{dirichlet_agreement, euler_factor_series, pv_at_idempotent, theta_truncated, verify_cyclotomic, verify_synthetic};
use eulerfit_core::field::{monic_irreducibles_up_to, Fq};
use eulerfit_core::ring::Ring;
use eulerfit_core::rng::Prng;
use eulerfit_core::series::SeriesRing;
use eulerfit_core::suites::{random_cyclotomic, random_global, random_synthetic};
use proptest::prelude::*;

#[test]
fn dirichlet_agreement_grows_with_degree_bound() {
    let f2 = Fq::prime_field(2).unwrap();
    let k = CyclotomicField::new(&f2, &[0, 1]).unwrap();
    let c = DrinfeldModule::carlitz(&f2);
    // t^2 + t + 1 is the first monic missed by the degree-1 product
    let th = theta_truncated(&k, &c, 1, 3).unwrap();
    assert_eq!(dirichlet_agreement(&th, &f2).unwrap(), Some(1));
    // at D = 2 the two missed cubics cancel at t^-3 in characteristic 2
    let th = theta_truncated(&k, &c, 2, 5).unwrap();
    assert!(dirichlet_agreement(&th, &f2).unwrap().is_some_and(|a| a >= 2));
}

#[test]
fn crt_reconstruction_matches_motive() {
    let f2 = Fq::prime_field(2).unwrap();
    let e = DrinfeldModule::new(&f2, vec![vec![0, 1], vec![1], vec![1]]).unwrap();
    let red = e.reduce_mod(&[1, 1, 1], 2).unwrap();
    let cp = charpoly_motive(&red).unwrap();
    let primes: Vec<Vec<u32>> = monic_irreducibles_up_to(&f2, 3).into_iter().filter(|p| p != &vec![1, 1, 1]).collect();
    assert_eq!(reconstruct_via_crt(&red, &primes, None).unwrap().coeffs, cp.coeffs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Theta is a product of independent factors: any split into two disjoint
    /// prime sets and any enumeration order give the same value.
    #[test]
    fn theta_multiplicative_and_order_free(seed in any::<u64>()) {
        let mut rng = Prng::new(seed);
        let q = [2u32, 3][rng.below(2) as usize];
        let fq = Fq::prime_field(q).unwrap();
        let conductors: Vec<Vec<u32>> = if q == 2 { vec![vec![1, 1, 1], vec![0, 1, 1]] } else { vec![vec![1, 0, 1], vec![0, 1]] };
        let f = &conductors[rng.below(2) as usize];
        let k = CyclotomicField::new(&fq, f).unwrap();
        let r = 1 + rng.below(2) as usize;
        let e = random_global(&mut rng, &fq, r, 1);
        let (d, n) = (3, 4);
        let th = theta_truncated(&k, &e, d, n).unwrap();
        let sr = SeriesRing::new(k.group_algebra());
        let mut factors: Vec<_> = k
            .classify_primes(&e, d)
            .unwrap()
            .into_iter()
            .filter(|c| c.is_good_tame())
            .map(|c| euler_factor_series(&k, &e, &c, n).unwrap())
            .collect();
        for i in (1..factors.len()).rev() {
            factors.swap(i, rng.below(i as u64 + 1) as usize);
        }
        let cut = rng.below(factors.len() as u64 + 1) as usize;
        let prod = |fs: &[_]| fs.iter().fold(sr.one(n), |acc, x| sr.mul(&acc, x));
        let split = sr.mul(&prod(&factors[..cut]), &prod(&factors[cut..]));
        prop_assert_eq!(split, th.value);
    }

    /// `e_v sigma_v = e_v sigma_v gamma` for every `gamma` in inertia, so the
    /// evaluated Euler factor does not see the choice of Frobenius lift.
    #[test]
    fn frobenius_lift_is_immaterial(seed in any::<u64>()) {
        let d = random_synthetic(&mut Prng::new(seed), true);
        let ga = d.group_algebra();
        let e_v = d.idempotent().unwrap();
        let cp = charpoly_motive(d.reduction()).unwrap();
        let base = pv_at_idempotent(&cp, &ga, &e_v, &ga.group_elem(d.sigma())).unwrap();
        for j in 1..d.e() {
            let s = d.group().op(d.sigma(), &d.group().scale(d.inertia_generator(), j));
            let g = ga.group_elem(&s);
            prop_assert_eq!(ga.mul(&e_v, &g), ga.mul(&e_v, &ga.group_elem(d.sigma())));
            prop_assert_eq!(&pv_at_idempotent(&cp, &ga, &e_v, &g).unwrap(), &base);
        }
    }

    /// The series form holds to every precision up to 10.
    #[test]
    fn series_identity_to_precision_ten(seed in any::<u64>(), tame in any::<bool>(), cyclo in any::<bool>()) {
        let mut rng = Prng::new(seed);
        for prec in [1, 5, 10] {
            let r = if cyclo {
                let (k, e, v) = random_cyclotomic(&mut rng.fork(1), tame);
                verify_cyclotomic(&k, &e, &v, pv_at_idempotent, seed, prec).unwrap()
            } else {
                verify_synthetic(&random_synthetic(&mut rng.fork(2), tame), pv_at_idempotent, seed, prec).unwrap()
            };
            prop_assert!(r.all_pass(), "{:?}", r);
        }
    }
}
