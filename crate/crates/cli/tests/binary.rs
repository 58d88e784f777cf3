use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grigwalk"))
}

#[test]
fn exit_codes_follow_checks() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin().args(["verify", "schreier", "--out"]).arg(dir.path().join("s")).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS within-budget"));

    let bad = bin().args(["verify", "no-such-preset"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"version": 1, "experiment": {"kind": "acceptance", "criteria": ["minimal-stabilizer"]}}"#)
        .unwrap();
    let fail = bin().arg("run").arg(&cfg).arg("--out").arg(dir.path().join("f")).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));

    let report = bin().arg("report").arg(dir.path()).output().unwrap();
    let text = String::from_utf8_lossy(&report.stdout);
    assert!(text.contains("within-budget") && text.contains("FAIL"), "{text}");
    assert_eq!(report.status.code(), Some(1));

    let list = bin().arg("list").output().unwrap();
    assert!(String::from_utf8_lossy(&list.stdout).lines().any(|l| l == "acceptance"));
}
