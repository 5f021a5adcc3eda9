//! Acceptance harness: one PASS/FAIL line per criterion. Exits nonzero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use eulerfit_core::drinfeld::{DrinfeldModule, ReducedDrinfeldModule};
use eulerfit_core::euler::{pv_at_idempotent, verify_synthetic};
use eulerfit_core::field::{field_tower, Fq};
use eulerfit_core::galois::GaloisDatum;
use eulerfit_core::group::AbelianGroup;
use eulerfit_core::suites::*;

const SEED: u64 = 0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn from_suites(results: &[SuiteResult], elapsed: Duration, limit: Duration) -> Verdict {
    let mut detail: Vec<String> = results.iter().map(|r| format!("{} {}/{}", r.name, r.passed, r.total)).collect();
    let failures: Vec<&String> = results.iter().flat_map(|r| r.failures.iter()).collect();
    for f in failures.iter().take(3) {
        detail.push(format!("failure: {f}"));
    }
    let in_time = elapsed <= limit;
    if !in_time {
        detail.push(format!("over time limit {:?}", limit));
    }
    detail.push(format!("{:.2}s", elapsed.as_secs_f64()));
    Verdict { pass: failures.is_empty() && results.iter().all(|r| r.ok()) && in_time, detail: detail.join("; ") }
}

fn timed(limit: Duration, f: impl FnOnce() -> Vec<SuiteResult>) -> Verdict {
    let start = Instant::now();
    let r = f();
    from_suites(&r, start.elapsed(), limit)
}

fn tame_z2_golden() -> SuiteResult {
    let run = || -> Result<(), String> {
        let f3 = Fq::prime_field(3).map_err(|e| e.to_string())?;
        let l1 = field_tower(&f3, 1).map_err(|e| e.to_string())?;
        let red = ReducedDrinfeldModule::from_residue_coeffs(&l1, vec![vec![0], vec![1]]).map_err(|e| e.to_string())?;
        let g = AbelianGroup::new(&[2]).map_err(|e| e.to_string())?;
        let d = GaloisDatum::new(&g, &[0], &[1], &red).map_err(|e| e.to_string())?;
        let r = verify_synthetic(&d, pv_at_idempotent, SEED, 10).map_err(|e| e.to_string())?;
        // t + 1 + gamma: constant term 1 + gamma, linear term 1
        let expect = vec![vec![1, 1], vec![1, 0]];
        if r.all_pass() && r.lhs_unit == expect && r.rhs_unit == expect {
            Ok(())
        } else {
            Err(format!("lhs {:?} rhs {:?}", r.lhs_unit, r.rhs_unit))
        }
    };
    SuiteResult::single("golden_tame_z2", run())
}

fn selftest(scale: &str) -> (i32, Vec<u8>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_eulerfit"))
        .args(["selftest", scale, "--seed", &SEED.to_string()])
        .output()
        .expect("run selftest");
    (out.status.code().unwrap_or(-1), out.stdout, start.elapsed())
}

fn determinism() -> Verdict {
    let (qc, qout, qt) = selftest("quick");
    let (c1, a, t1) = selftest("full");
    let (c2, b, t2) = selftest("full");
    let identical = a == b && !a.is_empty();
    let pass = qc == 0 && c1 == 0 && c2 == 0 && identical && qt < Duration::from_secs(60) && t1.max(t2) < Duration::from_secs(15 * 60) && !qout.is_empty();
    Verdict {
        pass,
        detail: format!(
            "quick exit {qc} {:.2}s; full exits {c1}/{c2} {:.2}s/{:.2}s; byte-identical {identical} ({} bytes)",
            qt.as_secs_f64(),
            t1.as_secs_f64(),
            t2.as_secs_f64(),
            a.len()
        ),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let f2 = Fq::prime_field(2).expect("prime");
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Verdict>)> = vec![
        ("1 golden rank-2 instance", Box::new(move || timed(secs(1), || vec![golden_rank2()]))),
        ("2 Carlitz law q=2,3 deg<=4", Box::new(move || timed(secs(30), || vec![carlitz_law(2, 4), carlitz_law(3, 4)]))),
        (
            "3 exact Euler-factor identities",
            Box::new(move || {
                timed(secs(300), || {
                    let mut v: Vec<SuiteResult> = IdentityClass::ALL.iter().map(|&c| identity_suite(c, 100, SEED, pv_at_idempotent)).collect();
                    v.push(tame_z2_golden());
                    v.push(cross_model_suite(50, SEED));
                    v
                })
            }),
        ),
        ("4 degree bounds and Newton polygon at infinity", Box::new(move || timed(secs(300), || vec![degree_bound_suite(200, SEED), oracle_suite(50, SEED)]))),
        ("5 unit-root factor", Box::new(move || timed(secs(300), || vec![unit_root_suite(200, SEED)]))),
        (
            "6 finite-level Fitting ideals",
            Box::new(move || timed(secs(300), || vec![finite_fitting_suite(100, SEED), finite_fitting_rank2(), presentation_suite(50, SEED)])),
        ),
        ("7 tame local structure", Box::new(move || timed(secs(300), || vec![local_structure_suite(100, SEED)]))),
        (
            "8 Theta oracle and convergence",
            Box::new(move || {
                timed(secs(300), || {
                    let z3_carlitz = SuiteResult::single("theta_z3_d3_vs_d4", theta_convergence(2, &[1, 1, 1], &DrinfeldModule::carlitz(&f2), 3));
                    vec![theta_dirichlet(2, 6), theta_dirichlet(3, 6), theta_convergence_suite(4), z3_carlitz]
                })
            }),
        ),
        ("9 negative controls and mutation", Box::new(move || timed(secs(300), || vec![negative_controls(SEED), mutation_caught(100, SEED)]))),
        ("10 determinism and runtime budgets", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
