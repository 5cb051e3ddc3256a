use std::path::Path;
use std::process::{Command, Output};

fn privfeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_privfeas")).args(args).output().expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn gen_solve_learn_round_trip() {
    let dir = std::env::temp_dir().join(format!("privfeas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = path(&dir, "instance.json");
    let out = privfeas(&["gen", "--kind", "feasibility", "--d", "1", "--X", "2", "--m", "400", "--seed", "3", "--out", &inst]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = privfeas(&["solve", "--in", &inst, "--eps", "2", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(run["point"].as_array().unwrap().len(), 1);

    let lab = path(&dir, "labeled.json");
    let out = privfeas(&["gen", "--kind", "labeled", "--d", "2", "--X", "3", "--m", "6", "--general-position", "--out", &lab]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let model = path(&dir, "model.json");
    let out = privfeas(&["learn", "--in", &lab, "--eps", "4", "--out", &model]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert!(m["val"].as_u64().unwrap() <= 6);

    let audit = path(&dir, "audit.json");
    std::fs::write(&audit, r#"{"eps":1.0,"q":["0","1","2"],"q2":["1","1","1"]}"#).unwrap();
    let out = privfeas(&["audit", "--in", &audit]);
    assert!(out.status.success());
    std::fs::write(&audit, r#"{"eps":1.0,"q":["0","5"],"q2":["5","0"]}"#).unwrap();
    assert_eq!(privfeas(&["audit", "--in", &audit]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trials_and_accept_subcommands() {
    let out = privfeas(&["trials", "--kind", "solve", "--d", "1", "--X", "2", "--m", "50", "--trials", "3", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    let out = privfeas(&["accept", "--only", "10", "--seed", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("[PASS] 10"));
    assert_eq!(privfeas(&["solve", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
}
