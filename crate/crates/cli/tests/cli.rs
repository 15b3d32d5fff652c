use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scheme-lab"))
        .args(args)
        .env_remove("SCHEME_LAB_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let cases: &[&[&str]] = &[
        &["gen", "--coding", "1", "-K", "3", "--seed", "7"],
        &[
            "gen", "--random", "-K", "3", "--seed", "7", "--format", "dot",
        ],
        &[
            "capture", "--coding", "1", "-K", "3", "--seed", "7", "--size", "2",
        ],
        &[
            "capture", "--random", "-K", "3", "--seed", "9", "--pool", "pairs", "--cap", "50",
        ],
        &[
            "code", "--coding", "1", "-K", "3", "--kind", "o", "--dump", "--sorted",
        ],
        &[
            "spectrum", "--coding", "1", "-K", "3", "--kind", "e", "--format", "csv",
        ],
        &[
            "entangle",
            "--coding",
            "1",
            "-K",
            "3",
            "--check",
            "increasing",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn generated_scheme_reloads_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let dot = dir.path().join("s.dot");
    let g = run(&[
        "gen",
        "--coding",
        "1",
        "-K",
        "3",
        "--out",
        p(&file),
        "--dot",
        p(&dot),
    ]);
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));

    let again = run(&["gen", "--scheme", p(&file)]);
    assert_eq!(again.stdout, std::fs::read(&file).unwrap());

    let v = run(&["verify", "--scheme", p(&file)]);
    assert_eq!(code(&v), 0, "{}", stderr(&v));
    let text = String::from_utf8(v.stdout).unwrap();
    for name in [
        "(i) initial-segment intersections",
        "om1",
        "xi_d",
        "delta_transfer",
    ] {
        assert!(text.contains(name), "missing {name} in\n{text}");
    }

    let j = run(&[
        "verify",
        "--scheme",
        p(&file),
        "--suite",
        "om",
        "--format",
        "json",
    ]);
    assert_eq!(code(&j), 0);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["report"]["passed"], true);
    assert!(v["report"].get("axioms").is_none());
    assert!(v["report"]["metric"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "om3"));
}

#[test]
fn corrupted_level_fails_clause_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let mut v: serde_json::Value =
        serde_json::from_slice(&run(&["gen", "--minimal", "-K", "2"]).stdout).unwrap();
    // {0,1} and {1,2} meet in {1}, which is not an initial segment of {0,1}
    v["levels"][1] = serde_json::json!([[0, 1], [1, 2]]);
    std::fs::write(&file, v.to_string()).unwrap();
    let out = run(&["verify", "--scheme", p(&file)]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("(i) initial-segment intersections"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn malformed_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("junk.json");
    std::fs::write(&file, "{\"type_seq\": [[1, 2").unwrap();
    assert_eq!(code(&run(&["verify", "--scheme", p(&file)])), 3);
    assert_eq!(
        code(&run(&[
            "gen",
            "--scheme",
            p(&dir.path().join("absent.json"))
        ])),
        3
    );
    assert_eq!(code(&run(&["gen", "--type-seq", "[[1,2]]"])), 3);
}

#[test]
fn invalid_types_and_overflow_exit_two() {
    // r_1 must be below m_0 = 1
    let bad = run(&["gen", "--type-seq", "[[1,2,1]]"]);
    assert_eq!(code(&bad), 2, "{}", stderr(&bad));
    let big = run(&["gen", "-K", "30", "--minimal", "--max-domain", "16"]);
    assert_eq!(code(&big), 2);
    assert!(stderr(&big).contains("exceeds the cap"));
    assert_eq!(
        code(&run(&[
            "gen",
            "-K",
            "10",
            "--coding",
            "2",
            "--max-domain",
            "500"
        ])),
        2
    );
}

#[test]
fn preconditions_exit_four() {
    let o = run(&["capture", "--minimal", "-K", "3", "--pool", "tails"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert_eq!(code(&run(&["gen"])), 4);
    let strict = run(&["code", "--minimal", "-K", "3", "--kind", "e", "--n", "2"]);
    assert_eq!(code(&strict), 4, "{}", stderr(&strict));
    assert_eq!(
        code(&run(&[
            "code",
            "--minimal",
            "-K",
            "3",
            "--kind",
            "e",
            "--n",
            "2",
            "--lenient"
        ])),
        0
    );
}

#[test]
fn failed_runs_leave_no_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let o = run(&[
        "gen",
        "-K",
        "30",
        "--minimal",
        "--max-domain",
        "16",
        "--out",
        p(&target),
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let ok = run(&["gen", "--minimal", "-K", "2", "--out", p(&target)]);
    assert_eq!(code(&ok), 0);
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, vec![std::ffi::OsString::from("out.json")]);
}

#[test]
fn capture_reports_rank_two_witness() {
    let o = run(&[
        "capture",
        "--minimal",
        "-K",
        "2",
        "--pool",
        "tails",
        "--level",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = &v["report"]["search"]["witnesses"];
    assert_eq!(w.as_array().unwrap().len(), 1);
    assert_eq!(w[0]["family"], serde_json::json!([[1], [2]]));
    assert_eq!(w[0]["kind"], "captured");
}

#[test]
fn entangle_checks_pass_on_a_coding_scheme() {
    for check in ["realization", "avoidance", "increasing"] {
        for kind in ["e", "o"] {
            if check == "increasing" && kind == "o" {
                continue;
            }
            let o = run(&[
                "entangle", "--coding", "1", "-K", "3", "--check", check, "--kind", kind,
            ]);
            assert_eq!(code(&o), 0, "{check}/{kind}: {}", stderr(&o));
        }
    }
}

#[test]
fn cap_is_read_from_the_environment() {
    let base = [
        "capture", "--random", "-K", "3", "--seed", "2", "--size", "2", "--format", "json",
    ];
    let o = Command::new(env!("CARGO_BIN_EXE_scheme-lab"))
        .args(base)
        .env("SCHEME_LAB_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for c in v["report"]["search"]["coverage"].as_array().unwrap() {
        assert!(c["examined"].as_u64().unwrap() <= 5, "{c}");
    }
}
