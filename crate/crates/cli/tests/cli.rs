use std::process::{Command, Output};

use brauer_core::algebra::Element;
use serde_json::Value;

fn brauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

#[test]
fn enumerate_counts() {
    let o = brauer(&["enumerate", "2", "2"]);
    assert!(o.status.success());
    assert_eq!(json(&o).as_array().unwrap().len(), 3);
    let o = brauer(&["enumerate", "3", "3"]);
    assert_eq!(json(&o).as_array().unwrap().len(), 15);
    let o = brauer(&["enumerate", "2", "1"]);
    assert_eq!(json(&o).as_array().unwrap().len(), 0);
}

#[test]
fn decomp_both_matches() {
    let o = brauer(&["decomp", "2", "--delta0", "0", "--method", "both"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["match"], Value::Bool(true));
    assert_eq!(v["oracle"], v["kl"]);
    assert_eq!(v["kl"]["entries"], serde_json::json!([[1, 0], [0, 1], [1, 0]]));
}

#[test]
fn fock_example() {
    let o = brauer(&["fock", "[2,1]", "--delta0", "4"]);
    assert_eq!(stdout(&o), r#"{"xi":[0,2,4,"..."],"phi":{"lambda_conj":[2,1],"d":1}}"#);
}

#[test]
fn errors_are_json_with_nonzero_exit() {
    for args in [
        vec!["blocks", "2", "--delta0", "1", "--p", "2"],
        vec!["decomp", "2"],
        vec!["kl", "[2]", "[]", "--delta0", "1/2"],
        vec!["cell", "3", "[2]", "--delta0", "1"],
        vec!["jm", "3", "2"],
    ] {
        let o = brauer(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(json(&o)["error"]["kind"].is_string(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let a = brauer(&["jm", "3", "3"]);
    let b = brauer(&["jm", "3", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let e: Element = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(serde_json::to_string(&e).unwrap(), stdout(&a));
}

#[test]
fn mult_reads_files() {
    let dir = std::env::temp_dir().join(format!("brauer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let x = brauer(&["jm", "2", "2", "--delta0", "3"]);
    let path = dir.join("x.json");
    std::fs::write(&path, &x.stdout).unwrap();
    let p = path.to_str().unwrap();
    let o = brauer(&["mult", p, p, "--delta0", "3"]);
    assert!(o.status.success());
    let sq: Element = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sq.hom_space(), (2, 2));
    let out = dir.join("out.json");
    let o = brauer(&["kl", "[1,1]", "[]", "--delta0", "0", "--rank-check", "--out", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["multiplicity"], 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cell_reports_gram_and_character() {
    let v = json(&brauer(&["cell", "2", "[]", "--delta0", "0"]));
    assert_eq!(v["dim"], 1);
    assert_eq!(v["gram"], serde_json::json!([["0"]]));
    let paths = json(&brauer(&["character-paths", "[]", "2", "--delta0", "0"]));
    assert_eq!(v["character"], paths);
}
