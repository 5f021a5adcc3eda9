use std::path::PathBuf;
use std::process::Command;

use eulerfit_cli::record::OutputRecord;
use eulerfit_cli::{cmd_charpoly, cmd_euler_check, cmd_theta, euler_check_with, Outcome};
use eulerfit_core::euler::pv_at_idempotent_flipped;
use proptest::prelude::*;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(configs().join(name)).unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eulerfit")).args(args).current_dir(configs()).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn outcome(r: Result<Outcome, eulerfit_cli::CliError>) -> Outcome {
    Outcome::from_result(r)
}

#[test]
fn rank2_charpoly_record() {
    let o = outcome(cmd_charpoly(&read("rank2_charpoly.json"), Some(2)));
    assert_eq!(o.exit_code, 0);
    let OutputRecord::Charpoly(r) = o.record else { panic!() };
    assert_eq!(r.p_v, vec![vec![vec![0], vec![1]], vec![vec![1]], vec![vec![1]]]);
    assert_eq!(r.height, 1);
    assert_eq!(r.newton_infinity.len(), 1);
    assert_eq!(r.newton_infinity[0].slope, [1, 2]);
    let u = r.unit_root.unwrap();
    assert_eq!(u.g, vec![vec![vec![1], vec![1]], vec![vec![1]]]);
    assert!(u.divides);
    assert_eq!(r.oracle.unwrap().status, "agree");
}

#[test]
fn carlitz_charpoly_is_x_minus_v() {
    let o = outcome(cmd_charpoly(&read("carlitz_charpoly.json"), None));
    let OutputRecord::Charpoly(r) = o.record else { panic!() };
    assert_eq!(r.p_v, vec![vec![vec![1], vec![1], vec![0], vec![1]], vec![vec![1]]]);
    assert_eq!(r.rho, vec![1]);
}

#[test]
fn euler_check_examples() {
    for name in ["z3_carlitz_euler.json", "tame_z2_euler.json"] {
        let o = outcome(cmd_euler_check(&read(name)));
        assert_eq!(o.exit_code, 0, "{name}");
        let OutputRecord::EulerCheck(r) = o.record else { panic!() };
        assert!(r.verdicts.all_pass);
        assert_eq!(r.lhs_unit, r.rhs_unit);
    }
    // tame Z/2 instance: t + 1 + gamma on both sides
    let OutputRecord::EulerCheck(r) = outcome(cmd_euler_check(&read("tame_z2_euler.json"))).record else { panic!() };
    assert_eq!(r.lhs_unit, vec![vec![(vec![0], vec![1]), (vec![1], vec![1])], vec![(vec![0], vec![1])]]);
}

#[test]
fn flipped_evaluator_fails_tame_z2() {
    let o = outcome(euler_check_with(&read("tame_z2_euler.json"), pv_at_idempotent_flipped));
    assert_eq!(o.exit_code, 4);
}

#[test]
fn wild_and_bad_exit_3() {
    let o = outcome(cmd_euler_check(&read("wild_euler.json")));
    assert_eq!(o.exit_code, 3);
    let OutputRecord::Error(e) = o.record else { panic!() };
    assert_eq!(e.kind, "WildRamification");

    let wild_cyclo = r#"{"field": {"p": 2}, "model": "cyclotomic", "drinfeld": [[0, 1], [1]], "conductor": [0, 0, 1], "v": [0, 1]}"#;
    let o = outcome(cmd_euler_check(wild_cyclo));
    assert_eq!(o.exit_code, 3);
    let OutputRecord::Error(e) = o.record else { panic!() };
    assert_eq!(e.kind, "WildPrime");
    assert_eq!(e.classification.unwrap().kind, "wild");

    let bad = r#"{"field": {"p": 2}, "model": "cyclotomic", "drinfeld": [[0, 1], [0, 1]], "v": [0, 1]}"#;
    assert_eq!(outcome(cmd_charpoly(bad, None)).exit_code, 3);
}

#[test]
fn theta_examples() {
    let OutputRecord::Theta(r) = outcome(cmd_theta(&read("theta_z3.json"), false)).record else { panic!() };
    assert_eq!(r.group, vec![3]);
    assert_eq!(r.guaranteed_precision, 4);

    let OutputRecord::Theta(r) = outcome(cmd_theta(&read("theta_dirichlet.json"), true)).record else { panic!() };
    let d = r.dirichlet.unwrap();
    assert!(d.pass && d.agreement.unwrap() >= 6);

    let empty = r#"{"field": {"p": 2}, "model": "cyclotomic", "drinfeld": [[0, 1], [1]], "conductor": [1, 1, 1], "degree_bound": 0, "precision": 3}"#;
    let OutputRecord::Theta(r) = outcome(cmd_theta(empty, false)).record else { panic!() };
    assert!(r.factors.is_empty());
    assert_eq!(r.value[0], vec![(vec![0], vec![1])]);
    assert!(r.value[1..].iter().all(|c| c.is_empty()));

    // nontrivial group refuses the Dirichlet comparison
    assert_eq!(outcome(cmd_theta(&read("theta_z3.json"), true)).exit_code, 2);
}

#[test]
fn config_errors_exit_2() {
    let (code, _, err) = run(&["charpoly", "bad_modulus.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("field.modulus"), "{err}");
    let (code, _, _) = run(&["charpoly", "does_not_exist.json"]);
    assert_eq!(code, 2);
    let o = outcome(cmd_charpoly(r#"{"field": {"p": 4}, "model": "cyclotomic"}"#, None));
    assert_eq!(o.exit_code, 2);
    let o = outcome(cmd_euler_check(r#"{"field": {"p": 3}, "model": "synthetic", "synthetic": {"n_v": 1, "coefficients": [[0], [1]], "group": [4], "sigma": [0], "gamma": [1]}}"#));
    assert_eq!(o.exit_code, 2, "{:?}", o.record);
}

#[test]
fn binary_output_is_deterministic_and_parses() {
    for args in [
        vec!["charpoly", "rank2_charpoly.json", "--unit-root", "3"],
        vec!["euler-check", "z3_carlitz_euler.json"],
        vec!["theta", "theta_z3.json", "--pretty"],
    ] {
        let (c1, a, _) = run(&args);
        let (c2, b, _) = run(&args);
        assert_eq!((c1, &a), (c2, &b));
        let rec: OutputRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::from_str::<OutputRecord>(&rec.to_json(false)).unwrap(), rec);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("eulerfit-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let (code, stdout, _) = run(&["euler-check", "tame_z2_euler.json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let rec: OutputRecord = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(matches!(rec, OutputRecord::EulerCheck(_)));
    std::fs::remove_dir_all(dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random synthetic configurations round-trip through the JSON records.
    #[test]
    fn synthetic_records_round_trip(p in prop::sample::select(vec![2u32, 3]), a0 in 0u32..3, a1 in 1u32..3, a2 in 0u32..3, k in 1u64..3) {
        let (a0, a1, a2) = (a0 % p, (a1 % p).max(1), a2 % p);
        let cfg = format!(
            r#"{{"field": {{"p": {p}}}, "model": "synthetic", "synthetic": {{"n_v": 1, "coefficients": [[{a0}], [{a2}], [{a1}]], "group": [{k}], "sigma": [0], "gamma": [0]}}}}"#
        );
        let o = outcome(cmd_euler_check(&cfg));
        prop_assert_eq!(o.exit_code, 0);
        let json = o.record.to_json(false);
        let back: OutputRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &o.record);
        prop_assert_eq!(back.to_json(false), json);
    }
}
