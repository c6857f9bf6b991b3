use std::process::{Command, Output};

use serde_json::Value;
use wlogic::prover::{check, proof_from_text};
use wlogic::semantics::{is_model_for, model_from_text};

fn wlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlogic")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    wlogic(args).status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

#[test]
fn prove_exit_codes() {
    assert_eq!(code(&["prove", "--logic", "WK", "[](p->q) -> ([]p -> []q)"]), 0);
    assert_eq!(code(&["prove", "--logic", "WMC", "<>(p|q) -> <>p | <>q"]), 1);
    assert_eq!(code(&["prove", "--logic", "WM", "p | ~p"]), 1);
    assert_eq!(code(&["prove", "--logic", "M", "p | ~p"]), 0);
    assert_eq!(code(&["prove", "--logic", "WK", "p, p -> q |- q"]), 0);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&["prove", "--logic", "XYZ", "p"]), 64);
    assert_eq!(code(&["prove", "p"]), 64);
    assert_eq!(code(&["prove", "--logic", "WK", "p &"]), 64);
    assert_eq!(code(&["prove", "--logic", "WK", "|- p, q"]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
    assert_eq!(code(&["interpolate", "--logic", "K", "p", "p"]), 64);
}

#[test]
fn budget_exhaustion_exits_2() {
    let f = "[](p->q) & []p & [](q->r) & <>(p|r) -> [](r&q) | <>(r&p&q)";
    assert_eq!(code(&["prove", "--logic", "WK", "--max-nodes", "2", f]), 2);
}

#[test]
fn structured_proof_round_trips() {
    let o = wlogic(&["prove", "--logic", "WKT", "--format", "structured", "[]p -> p & <>p"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["version"], 1);
    assert_eq!(recs[0]["kind"], "proof");
    let (logic, d) = proof_from_text(recs[0]["proof"].as_str().unwrap()).unwrap();
    assert_eq!(logic.to_string(), "WKT");
    assert!(check(logic, &d));
}

#[test]
fn interpolate_examples() {
    let o = wlogic(&["interpolate", "--logic", "WK", "--format", "structured", "p & q", "p | r"]);
    assert_eq!(o.status.code(), Some(0));
    let rec = &records(&o)[0];
    let c = wlogic::syntax::parse(rec["interpolant"].as_str().unwrap()).unwrap();
    // p is p1; only bot and p1 may occur
    assert!(c.atoms().iter().all(|&a| a == 1), "{c}");
    for cert in ["left_certificate", "right_certificate"] {
        let (l, d) = proof_from_text(rec[cert].as_str().unwrap()).unwrap();
        assert!(check(l, &d));
    }
    assert_eq!(code(&["interpolate", "--logic", "WM", "p", "q"]), 1);
    let o = wlogic(&["interpolate", "--logic", "WM", "--format", "structured", "bot", "q"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["interpolant"], "bot");
}

#[test]
fn countermodel_examples() {
    let o = wlogic(&["countermodel", "--logic", "WM", "--format", "structured", "~<>bot"]);
    assert_eq!(o.status.code(), Some(0));
    let m = model_from_text(records(&o)[0]["model"].as_str().unwrap()).unwrap();
    assert_eq!(m.worlds, 1);
    let f = "<>(p|q) -> <>p | <>q";
    let o = wlogic(&["countermodel", "--logic", "WK", "--max-worlds", "3", "--format", "structured", f]);
    assert_eq!(o.status.code(), Some(0));
    let rec = &records(&o)[0];
    let m = model_from_text(rec["model"].as_str().unwrap()).unwrap();
    let logic = "WK".parse().unwrap();
    assert!(is_model_for(&m, logic));
    let world = rec["world"].as_u64().unwrap() as usize;
    assert!(!m.forces(world, &wlogic::syntax::parse("<>(p1|p2) -> <>p1 | <>p2").unwrap()));
    let o = wlogic(&["countermodel", "--logic", "WK", "--max-worlds", "3", "[](p->q)->([]p->[]q)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("none up to size 3"));
}

#[test]
fn check_model_reads_countermodels() {
    let dir = std::env::temp_dir().join(format!("wlogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cm.jsonl");
    let o = wlogic(&["countermodel", "--logic", "WMC", "--format", "structured", "<>(p|q) -> <>p | <>q"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&["check-model", "--logic", "WMC", p]), 0);
    assert_eq!(code(&["check-model", "--logic", "WMC", p, "<>(p1|p2) -> <>p1 | <>p2"]), 1);
    assert_eq!(code(&["check-model", "--logic", "WMC", p, "p1 -> p1"]), 0);
    assert_eq!(code(&["check-model", "--logic", "M", p]), 1);
    assert_eq!(code(&["check-model", "--logic", "WMC", dir.join("missing").to_str().unwrap()]), 64);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_passes_and_reports_cells() {
    let o = wlogic(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("WMN") && l.contains("N[]") && l.contains("got Theorem")));
    assert!(out.lines().any(|l| l.starts_with("WM ") && l.contains("C[]") && l.contains("got NonTheorem")));
    assert!(out.contains(" 0 mismatches"));
}

#[test]
fn fuzz_passes_and_catches_injected_fault() {
    assert_eq!(code(&["fuzz", "--seed", "3", "--count", "5"]), 0);
    let o = wlogic(&["fuzz", "--seed", "3", "--logic", "WMN", "--suite", "soundness", "--inject-fault", "skip-n-repair"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("seed 3"));
    assert!(out.contains("theorem []top fails"), "{out}");
}

#[test]
fn fuzz_logs_a_seed_when_none_given() {
    let o = wlogic(&["fuzz", "--count", "2", "--logic", "WK", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    assert!(recs[0]["seed"].is_u64());
    assert!(recs.iter().all(|r| r["version"] == 1));
}
