use std::process::Command;

use ascurves_cli::{render, run, Status};
use serde_json::Value;

const KEYS: [&str; 13] = [
    "family", "q", "p", "n", "genus", "p_rank", "ordinary", "irreducible", "order", "relations",
    "counts", "l_poly", "status",
];

fn args(s: &str) -> Vec<String> {
    std::iter::once("ascurves".to_string())
        .chain(s.split_whitespace().map(str::to_string))
        .collect()
}

fn json(s: &str) -> (i32, Value) {
    let (code, rep, _) = run(args(s));
    (code, serde_json::from_str(&render(&rep, true)).unwrap())
}

fn binary(s: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ascurves"))
        .args(s.split_whitespace())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn zieve_four_invariants() {
    let (code, v) = json("invariants --family zieve --q 4");
    assert_eq!(code, 0);
    assert_eq!(v["genus"], 45);
    assert_eq!(v["p_rank"], 45);
    assert_eq!(v["ordinary"], true);
    assert_eq!(v["p"], 2);
    assert_eq!(v["n"], 2);
}

#[test]
fn singer_three_group() {
    let (code, v) = json("aut --family singer --q 3");
    assert_eq!(code, 0);
    assert_eq!(v["order"], 72);
    assert_eq!(v["details"]["e_normal"], true);
}

#[test]
fn usage_errors_exit_two() {
    for cmd in [
        "invariants --family singer --q 6",
        "invariants --family singer --q 4",
        "invariants --family klein --q 3",
        "aut --family conic_mixed --q 3",
        "aut --family zieve --q 3 --bound 0",
        "zeta --family zieve_extended --q 3 --max-m 30",
        "frobnicate",
        "invariants --family zieve",
    ] {
        let (code, rep, _) = run(args(cmd));
        assert_eq!(code, 2, "{cmd}");
        assert_eq!(rep.status, Status::UsageError, "{cmd}");
    }
}

#[test]
fn json_keys_are_fixed_and_stable() {
    for cmd in [
        "invariants --family artin_mumford --q 5",
        "identities --family singer --q 3",
        "aut --family zieve --q 2",
        "zeta --family zieve --q 2",
        "invariants --family singer --q 6",
    ] {
        let (_, a) = json(cmd);
        let obj = a.as_object().unwrap();
        for k in KEYS {
            assert!(obj.contains_key(k), "{cmd}: missing {k}");
        }
        let (_, b) = json(cmd);
        assert_eq!(a, b, "{cmd}: output not deterministic");
    }
}

#[test]
fn zeta_reports_counts_and_l() {
    let (code, v) = json("zeta --family zieve --q 2 --max-m 6");
    assert_eq!(code, 0);
    assert_eq!(v["counts"].as_array().unwrap().len(), 6);
    assert_eq!(v["l_poly"].as_array().unwrap().len(), 7);
    assert_eq!(v["l_poly"][0], 1);
}

#[test]
fn quick_profile_passes() {
    let (code, v) = json("check --profile quick");
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "ok");
}

#[test]
fn injected_failure_is_named() {
    let (code, v) = json("check --profile quick --inject-failure identities_zieve");
    assert_eq!(code, 0, "no check has that name");
    assert_eq!(v["status"], "ok");
    let (code, v) = json("check --inject-failure splitting");
    assert_eq!(code, 1);
    let failed: Vec<&str> = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|n| n.contains("splitting")));
}

#[test]
fn exit_codes_agree_with_status() {
    let cmds = [
        "list",
        "list --json",
        "invariants --family artin_mumford --q 2 --json",
        "invariants --family singer --q 9 --json",
        "invariants --family singer_even --q 8 --json",
        "invariants --family conic_mixed --q 7 --json",
        "invariants --family conic_parabola --q 4 --json",
        "invariants --family conic_one_nonrational --q 5 --json",
        "invariants --family zieve_modified --q 5 --json",
        "invariants --family zieve_extended --q 3 --json",
        "identities --family zieve --q 4 --json",
        "identities --family conic_one_nonrational --q 3 --json",
        "aut --family zieve --q 4 --json",
        "aut --family zieve_extended --q 3 --json",
        "aut --family zieve_modified --q 3 --json",
        "aut --family singer --q 5 --bound 10 --json",
        "zeta --family artin_mumford --q 2 --json",
        "invariants --family zieve --q 12 --json",
        "invariants --family singer_even --q 3 --json",
        "aut --family conic_parabola --q 3 --json",
    ];
    for cmd in cmds {
        let (code, out) = binary(cmd);
        if cmd.starts_with("list") {
            assert_eq!(code, 0);
            continue;
        }
        let v: Value = serde_json::from_str(out.trim()).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        let expected = match v["status"].as_str().unwrap() {
            "ok" => 0,
            "check_failed" => 1,
            "usage_error" => 2,
            s => panic!("unknown status {s}"),
        };
        assert_eq!(code, expected, "{cmd}");
    }
}

#[test]
fn truncated_closure_fails_the_check() {
    let (code, v) = json("aut --family singer --q 5 --bound 10");
    assert_eq!(code, 1);
    assert_eq!(v["details"]["closure_complete"], false);
}

#[test]
fn help_is_not_an_error() {
    let (code, out) = binary("--help");
    assert_eq!(code, 0);
    assert!(out.contains("invariants"));
}
