use std::process::{Command, Output};
use std::sync::Arc;

use burnside_core::burnside::BurnsideRing;
use burnside_core::group::builtin;
use burnside_core::serial::{element_from_json, family_from_json, ElementJson, FamilyJson};
use burnside_core::tower::{zp_closed_form, QuotientTower};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn ring(spec: &str) -> Arc<BurnsideRing> {
    BurnsideRing::new(Arc::new(builtin(spec).unwrap()), 200).unwrap()
}

#[test]
fn alt5_integral_idempotents() {
    let text = stdout(&["idem", "--integral", "alt:5", "--format", "json"]);
    let json: Value = serde_json::from_str(&text).unwrap();
    let list = json["idempotents"].as_array().unwrap();
    assert_eq!(list.len(), 2);

    let ring = ring("alt:5");
    let l = ring.lattice();
    let c = |o| (0..l.num_classes()).find(|&c| l.class_order(c) == o).unwrap();
    let f = ring.from_integers(&[(c(60), 1), (c(12), -1), (c(10), -1), (c(6), -1), (c(3), 1), (c(2), 2), (c(1), -1)]);
    let parsed: Vec<_> = list
        .iter()
        .map(|e| {
            let ej: ElementJson = serde_json::from_value(e["element"].clone()).unwrap();
            element_from_json(&ej, &ring).unwrap()
        })
        .collect();
    assert!(parsed.contains(&f));
    assert!(parsed.contains(&(&ring.one() - &f)));
}

#[test]
fn sym3_marks_csv() {
    let csv = stdout(&["tom", "sym:3", "--format", "csv"]);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows, ["6,0,0,0", "3,1,0,0", "2,0,2,0", "1,1,1,1"]);
}

#[test]
fn zp_family_matches_closed_form() {
    let text = stdout(&["tower", "zp:p=2,depth=4", "idem", "--subgroup", "index:p^1", "--format", "json"]);
    let json: FamilyJson = serde_json::from_str(&text).unwrap();
    let t = QuotientTower::from_spec("zp:p=2,depth=4").unwrap();
    let fam = family_from_json(&json, &t).unwrap();
    assert!(fam.is_compatible());
    let levels = fam.plain_levels().unwrap();
    for (i, x) in levels.iter().enumerate().skip(1) {
        assert_eq!(*x, zp_closed_form(t.level(i).burnside(), 2, 1, i as u32 + 1), "level {i}");
    }
}

#[test]
fn oracle_agrees_on_every_command() {
    let dir = std::env::temp_dir().join(format!("burnside-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let x = dir.join("x.json");
    std::fs::write(&x, r#"{"group":"sym:3","coeffs":[{"class":"0-2","num":"2","den":"1"},{"class":"0","num":"-1","den":"3"}]}"#)
        .unwrap();
    let c = dir.join("c.json");
    std::fs::write(
        &c,
        r#"{"group":"sym:3","coeffs":[{"H":"0","a":1,"num":"1","den":"1"},{"H":"0-2","a":2,"num":"-2","den":"1"}]}"#,
    )
    .unwrap();
    let fam = dir.join("fam.json");
    std::fs::write(&fam, stdout(&["--format", "json", "tower", "zp:p=3,depth=3", "idem", "--subgroup", "index:p^1"])).unwrap();
    let (x, c, fam) = (x.to_str().unwrap(), c.to_str().unwrap(), fam.to_str().unwrap());

    let cases: Vec<Vec<&str>> = vec![
        vec!["tom", "sym:4"],
        vec!["idem", "dihedral:4"],
        vec!["idem", "--integral", "sym:4"],
        vec!["mul", "sym:3", x, x],
        vec!["crossed-basis", "quaternion:8"],
        vec!["crossed-mul", "sym:3", c, c],
        vec!["zeta", "sym:3", c],
        vec!["zeta", "cyclic:4"],
        vec!["tower", "zp:p=3,depth=3", "describe"],
        vec!["tower", "zp:p=3,depth=3", "idem", "--subgroup", "index:p^1"],
        vec!["tower", "zhat:depth=4", "census"],
        vec!["tower", "zp:p=3,depth=3", "check", fam],
        vec!["mackey", "sym:3", "--y", "G/0+G/0-2", "--crossed", c],
        vec!["mackey", "sym:3", "--functor", "fixed-quotient", "--field", "5", "--y", "G/0-1-3", "--pair", "0@1"],
        vec!["hall", "--samples", "5"],
    ];
    for case in cases {
        for format in ["text", "json"] {
            let mut args = vec!["--oracle", "--format", format];
            args.extend(&case);
            stdout(&args);
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_output_round_trips() {
    let text = stdout(&["idem", "sym:4", "--format", "json"]);
    let json: Value = serde_json::from_str(&text).unwrap();
    let ring = ring("sym:4");
    for e in json["idempotents"].as_array().unwrap() {
        let ej: ElementJson = serde_json::from_value(e["element"].clone()).unwrap();
        let x = element_from_json(&ej, &ring).unwrap();
        assert_eq!(serde_json::to_value(burnside_core::serial::element_to_json(&x)).unwrap(), e["element"]);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tom", "nosuch:3"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["mackey", "sym:3", "--y", "G/0", "--pair", "0-2@1"]).status.code(), Some(1));
    let capped = Command::new(env!("CARGO_BIN_EXE_burnside")).args(["tom", "alt:5"]).env("BURNSIDE_CAP", "10").output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    let err = String::from_utf8(capped.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "one-line diagnostic: {err}");
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&["--seed", "7", "--format", "json", "hall", "--samples", "10"]);
    let b = stdout(&["--seed", "7", "--format", "json", "hall", "--samples", "10"]);
    assert_eq!(a, b);
    assert_ne!(a, stdout(&["--seed", "8", "--format", "json", "hall", "--samples", "10"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mul_agrees_with_library(xs in proptest::collection::vec(-3i64..=3, 4), ys in proptest::collection::vec(-3i64..=3, 4)) {
        let ring = ring("sym:3");
        let l = ring.lattice();
        let enc = |v: &[i64]| {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(c, k)| format!(r#"{{"class":"{}","num":"{k}","den":"1"}}"#, l.class_id(c)))
                .collect();
            format!(r#"{{"group":"sym:3","coeffs":[{}]}}"#, terms.join(","))
        };
        let (xj, yj) = (enc(&xs), enc(&ys));
        let text = stdout(&["--oracle", "--format", "json", "mul", "sym:3", &xj, &yj]);
        let got: ElementJson = serde_json::from_str(&text).unwrap();
        let to = |v: &[i64]| ring.from_integers(&v.iter().copied().enumerate().collect::<Vec<_>>());
        prop_assert_eq!(element_from_json(&got, &ring).unwrap(), &to(&xs) * &to(&ys));
    }
}
