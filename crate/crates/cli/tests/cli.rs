use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_underapprox"));
    for (k, _) in std::env::vars() {
        if k.starts_with("UNDERAPPROX_") {
            c.env_remove(k);
        }
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().arg("--no-cache").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = run(&["greedy-approx", "19/20"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[2, 3, 9, 180]\n");

    let o = run(&["vardi", "--digits", "6"]);
    assert_eq!(stdout(&o), "1.264085 ± 1e-6\n");

    let o = run(&["check-claims", "--m", "1..6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with("ok")), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["greedy-approx", "3/2"]).status.code(), Some(2));
    assert_eq!(run(&["greedy-approx", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["conditions", "2/4"]).status.code(), Some(2));
    assert_eq!(
        run(&["limit", "/nonexistent/spec.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["greedy-under", "1", "--terms", "30"]).status.code(),
        Some(3)
    );
    let o = run(&["best-under", "10/61", "--terms", "3", "--node-cap", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("INCOMPLETE"));
    assert_eq!(run(&["vardi", "--digits", "1001"]).status.code(), Some(3));
}

#[test]
fn json_round_trips_and_is_stable() {
    let a = run(&[
        "best-under",
        "10/61",
        "--terms",
        "2",
        "--all-ties",
        "--format",
        "json",
    ]);
    let b = run(&[
        "best-under",
        "10/61",
        "--terms",
        "2",
        "--all-ties",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(
        v["result"]["canonical_witness"],
        serde_json::json!(["9", "19"])
    );
    assert_eq!(v["result"]["optimum_sum"], "28/171");
    assert_eq!(v["unique"], true);

    let o = run(&["construct", "--competitor", "3,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let spec = serde_json::to_string(&v["construction"]["c_spec"]).unwrap();
    let again = run(&["limit", &spec, "--digits", "10"]);
    assert!(
        again.status.success(),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    assert_eq!(v["construction"]["remainder_unit_fraction"], "1/1384152");
}

#[test]
fn probe_csv_columns() {
    let o = run(&["probe-greedy", "10/61", "--terms", "3", "--format", "csv"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap(),
        vec!["n", "R_n", "witness", "greedy_extension"]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(&rows[1][1], "28/171");
    assert_eq!(&rows[1][3], "false");
    assert_eq!(&rows[2][2], "[9, 19, 5216]");
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.toml");
    std::fs::write(&cfg, "digits = 4\nformat = \"json\"\nno_cache = true\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let file_only = bin().args(["--config", cfg, "vardi"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&file_only.stdout).unwrap();
    assert_eq!(v["decimal"], "1.2641");

    let env = bin()
        .args(["--config", cfg, "vardi"])
        .env("UNDERAPPROX_DIGITS", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["decimal"], "1.26408");

    let flag = bin()
        .args([
            "--config", cfg, "vardi", "--digits", "3", "--format", "human",
        ])
        .env("UNDERAPPROX_DIGITS", "5")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag), "1.264 ± 1e-3\n");

    std::fs::write(dir.path().join("bad.toml"), "colour = 1\n").unwrap();
    let bad = bin()
        .args([
            "--config",
            dir.path().join("bad.toml").to_str().unwrap(),
            "vardi",
        ])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

fn cache_lines(p: &Path) -> usize {
    std::fs::read_to_string(p)
        .map(|s| s.lines().count())
        .unwrap_or(0)
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("cache.ndjson");
    let p = path.to_str().unwrap();
    let args = ["--cache-path", p, "probe-greedy", "10/61", "--terms", "3"];
    let first = bin().args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(cache_lines(&path), 3);
    let second = bin().args(args).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(cache_lines(&path), 3);
    let line = std::fs::read_to_string(&path).unwrap();
    assert!(line.contains(r#""lambda":"10/61","n":2,"sum":"28/171","witness":["9","19"]"#));
}

#[test]
fn sequential_matches_parallel() {
    let a = run(&["best-under", "12/13", "--terms", "3", "--all-ties"]);
    let b = run(&[
        "best-under",
        "12/13",
        "--terms",
        "3",
        "--all-ties",
        "--sequential",
    ]);
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with("nodes"))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(stdout(&a).contains("unique: no"));
    assert!(stdout(&a).contains("tie: [3, 3, 4]"));
}
