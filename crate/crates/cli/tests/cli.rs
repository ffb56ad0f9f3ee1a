use std::process::{Command, Output};

fn lsfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsfc"))
        .args(args)
        .env_remove("LSFC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn csv_energies(csv: &str) -> Vec<String> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().to_string())
        .collect()
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["solve", "--model", "pe", "--N", "0"],
        vec!["solve", "--model", "pe", "--N", "7"],
        vec!["solve", "--model", "pe", "--N", "2"],
        vec!["solve", "--model", "made-up", "--N", "10"],
        vec!["solve", "--model", "pe", "--N", "10", "--strategy", "annealing"],
        vec!["solve", "--model", "pe", "--N", "10", "--format", "xml"],
        vec!["solve", "--model", "pe"],
        vec!["solve", "--N", "10"],
    ] {
        let out = lsfc(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?}\n{}", stdout(&out));
        assert!(!out.stderr.is_empty(), "diagnostic expected for {args:?}");
    }
}

#[test]
fn harmonic_check_example_passes() {
    let out = lsfc(&["solve", "--model", "harmonic4d", "--N", "6", "--k", "2", "--check"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("1.929802495"), "{text}");
    assert!(text.contains("2.755212192"), "{text}");
    assert!(text.contains("check result: ok"), "{text}");
    assert!(text.contains("5^4"), "{text}");
}

#[test]
fn check_tolerance_controls_exit_code() {
    let out = lsfc(&[
        "solve", "--model", "harmonic4d", "--N", "6", "--k", "2", "--check",
        "--tolerance", "1e-13",
    ]);
    assert_eq!(exit_code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("MISMATCH"));
}

#[test]
fn text_and_csv_agree_on_values() {
    let text = stdout(&lsfc(&["solve", "--model", "pe", "--N", "10", "--k", "2"]));
    let csv = stdout(&lsfc(&[
        "solve", "--model", "pe", "--N", "10", "--k", "2", "--format", "csv",
    ]));
    let energies = csv_energies(&csv);
    assert_eq!(energies.len(), 2);
    for e in &energies {
        assert!(text.contains(e.as_str()), "text lacks {e}:\n{text}");
        // 10 significant digits
        let digits = e.chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 10, "{e}");
    }
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# pe benchmark\nmodel = pe\nN = 10\nk = 2\nformat = csv\n",
    )
    .unwrap();
    let via_file = lsfc(&["solve", "--config", path.to_str().unwrap()]);
    let via_flags = lsfc(&[
        "solve", "--model", "pe", "--N", "10", "--k", "2", "--format", "csv",
    ]);
    assert_eq!(exit_code(&via_file), 0);
    assert_eq!(via_file.stdout, via_flags.stdout);

    // flags take precedence over file values
    let overridden = lsfc(&[
        "solve", "--config", path.to_str().unwrap(), "--format", "json",
    ]);
    assert!(stdout(&overridden).trim_start().starts_with('{'));
}

#[test]
fn potential_file_reproduces_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coupled.pot");
    std::fs::write(&path, "0.5 2 0\n0.5 0 2\n1 2 2\n").unwrap();
    let custom = stdout(&lsfc(&[
        "solve", "--model", path.to_str().unwrap(), "--N", "10", "--k", "3",
        "--format", "csv",
    ]));
    let builtin = stdout(&lsfc(&[
        "solve", "--model", "pe", "--N", "10", "--k", "3", "--format", "csv",
    ]));
    assert_eq!(csv_energies(&custom), csv_energies(&builtin));
    assert!(custom.lines().nth(1).unwrap().starts_with("coupled,"));
}

#[test]
fn empty_potential_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.pot");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let out = lsfc(&["solve", "--model", path.to_str().unwrap(), "--N", "10"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unbounded_potential_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inverted.pot");
    std::fs::write(&path, "-1 2\n").unwrap();
    let out = lsfc(&["solve", "--model", path.to_str().unwrap(), "--N", "10"]);
    assert_eq!(exit_code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["solve", "--model", "pe", "--N", "10,12", "--k", "3", "--check"];
    let a = lsfc(&args);
    let b = lsfc(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(exit_code(&a), exit_code(&b));
}

#[test]
fn thread_cap_keeps_output_stable() {
    let base = lsfc(&["solve", "--model", "pe", "--N", "12", "--k", "2", "--format", "csv"]);
    let capped = Command::new(env!("CARGO_BIN_EXE_lsfc"))
        .args(["solve", "--model", "pe", "--N", "12", "--k", "2", "--format", "csv"])
        .env("LSFC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(base.stdout, capped.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_lsfc"))
        .args(["solve", "--model", "pe", "--N", "12"])
        .env("LSFC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code().unwrap(), 2);
}

#[test]
fn json_output_is_structured() {
    let out = lsfc(&[
        "solve", "--model", "harmonic4d", "--N", "6", "--k", "2", "--check",
        "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["model"], "harmonic4d");
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["ok"], true);
    let run = &doc["runs"][0];
    assert_eq!(run["grid"], "5^4");
    assert_eq!(run["n"], 6);
    let e0 = run["energies"][0].as_f64().unwrap();
    assert!((e0 - 1.929802495).abs() < 1e-8);
    assert!(run["half_width"].as_f64().unwrap() > 0.0);
    assert_eq!(run["checks"].as_array().unwrap().len(), 2);
    assert!(run["checks"][0]["ok"].as_bool().unwrap());
    // full precision survives the round trip
    let text_e0 = 1.929802495f64;
    assert!((e0 - text_e0).abs() < 5e-10);
}

#[test]
fn csv_column_layout() {
    let out = stdout(&lsfc(&[
        "solve", "--model", "harmonic4d", "--N", "6", "--k", "2", "--check",
        "--format", "csv",
    ]));
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,grid,level,energy,reference,abs_error"
    );
    let first = lines.next().unwrap();
    let fields: Vec<_> = first.split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "harmonic4d");
    assert_eq!(fields[1], "5^4");
    assert_eq!(fields[2], "0");
    assert_eq!(fields[3], "1.929802495");
    assert_eq!(fields[4], "1.929802495");
    assert!(fields[5].ends_with("e-10") || fields[5].ends_with("e-11"));
}
