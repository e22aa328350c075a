use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use unavoidable_cli::PROBE_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unavoidable")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/goldens").join(name);
    fs::read_to_string(path).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend(["--out", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

fn extract(input: &Path, n: &str, k: &str, cert: &Path) -> Output {
    run(&["extract", "--input", input.to_str().unwrap(), "--n", n, "--k", k, "--out", cert.to_str().unwrap()])
}

fn kind_of(cert: &Path) -> String {
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(cert).unwrap()).unwrap();
    doc["kind"].as_str().unwrap().to_owned()
}

#[test]
fn extract_flower_gives_short_system() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "flower.txt", &["--family", "flower", "--m", "8"]);
    let cert = dir.path().join("cert.json");
    let out = extract(&input, "4", "2", &cert);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(kind_of(&cert), "short_system");
    let report: serde_json::Value = serde_json::from_str(&stderr(&out)).unwrap();
    assert_eq!(report["verified"], true);
    assert_eq!(report["vertices"], 10);
    assert_eq!(report["strong"], true);
}

#[test]
fn extract_small_flower_closes_a_triangle() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "flower.txt", &["--family", "flower", "--m", "6"]);
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&extract(&input, "3", "2", &cert)), 0);
    assert_eq!(kind_of(&cert), "long_dicycle");
}

#[test]
fn extract_triangle_chain_gives_semi_chain() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "tc.txt", &["--family", "triangle_chain", "--k", "4"]);
    let cert = dir.path().join("cert.json");
    let report = dir.path().join("report.json");
    let out = run(&[
        "extract",
        "--input",
        input.to_str().unwrap(),
        "--n",
        "4",
        "--k",
        "2",
        "--out",
        cert.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(kind_of(&cert), "semi_chain");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(report["kind"], "semi_chain");
    assert_eq!(report["n_impl"], u64::MAX);
}

#[test]
fn extract_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let weak = dir.path().join("weak.txt");
    fs::write(&weak, "0 1\n").unwrap();
    assert_eq!(code(&extract(&weak, "3", "1", &cert)), 3);

    let broken = dir.path().join("broken.txt");
    fs::write(&broken, "0 1\n1 zero\n").unwrap();
    let out = extract(&broken, "3", "1", &cert);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let cycle = dir.path().join("cycle.txt");
    fs::write(&cycle, "0 1\n1 2\n2 0\n").unwrap();
    assert_eq!(code(&extract(&cycle, "1", "1", &cert)), 2);
    assert_eq!(code(&extract(&dir.path().join("missing.txt"), "3", "1", &cert)), 2);
    assert_eq!(code(&run(&["extract", "--input", cycle.to_str().unwrap(), "--n", "3"])), 2);

    let out = extract(&cycle, "4", "2", &cert);
    assert_eq!(code(&out), 0);
    assert_eq!(kind_of(&cert), "below_threshold");
}

#[test]
fn extract_writes_to_stdout_without_out() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "flower.txt", &["--family", "flower", "--m", "8"]);
    let out = run(&["extract", "--input", input.to_str().unwrap(), "--n", "4", "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), golden("flower_8_n4_k2.json"));
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "tc.txt", &["--family", "triangle_chain", "--k", "4"]);
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&extract(&input, "4", "2", &cert)), 0);
    let verify = |graph: &Path, cert: &Path| {
        run(&["verify", "--input", graph.to_str().unwrap(), "--cert", cert.to_str().unwrap()])
    };
    let out = verify(&input, &cert);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("semi_chain"));

    // cycles are [6,7,8] and [4,5,6]; renaming 7 breaks the first one
    let text = fs::read_to_string(&cert).unwrap();
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, text.replacen("7,", "3,", 1)).unwrap();
    let out = verify(&input, &tampered);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("reason: missing_edge"), "{}", stderr(&out));

    let other = generate(dir.path(), "flower.txt", &["--family", "flower", "--m", "8"]);
    let out = verify(&other, &cert);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("reason:"));

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{\"version\": 1").unwrap();
    assert_eq!(code(&verify(&input, &garbage)), 2);

    // stricter parameters than the certificate was made for
    let out = run(&["verify", "--input", input.to_str().unwrap(), "--cert", cert.to_str().unwrap(), "--n", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("cycle_too_long"), "{}", stderr(&out));
}

#[test]
fn generate_matches_goldens() {
    let strip =
        |s: String| s.lines().filter(|l| !l.starts_with("# note:")).map(|l| format!("{l}\n")).collect::<String>();
    let out = run(&["generate", "--family", "circular_grid", "--n", "3", "--h", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), strip(golden("circular_grid_3_4.txt")));
    let out = run(&["generate", "--family", "hexagonal_grid", "--n", "4", "--h", "4"]);
    assert_eq!(stdout(&out), strip(golden("hexagonal_grid_4_4.txt")));
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--family", "random_strong", "--v", "10", "--p", "0.2", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["generate", "--family", "random_strong", "--v", "10", "--p", "0.2", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn generate_counts_and_formats() {
    let out = run(&["generate", "--family", "stein_example", "--l", "2", "--h", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 21);
    assert_eq!(doc["generator"]["family"], "stein_example");

    let out = run(&["generate", "--family", "flower", "--m", "2", "--format", "dot"]);
    let dot = stdout(&out);
    assert!(dot.contains("digraph flower {"));
    assert!(dot.contains("  0 -> 2;"));

    let out = run(&["generate", "--family", "bidirected_quarter_grid", "--w", "2", "--h", "9", "--suppress"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"suppress\":true"));
}

#[test]
fn generate_rejects_bad_parameters() {
    assert_eq!(code(&run(&["generate", "--family", "flower"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "circular_grid", "--n", "1", "--h", "4"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "random_strong", "--v", "5", "--p", "2", "--seed", "0"])), 2);
    assert_eq!(code(&run(&["generate", "--family", "no_such_family"])), 2);
}

#[test]
fn probe_tables() {
    let out = run(&["probe", "--n", "3", "--k", "1", "--sizes", "14..20", "--samples", "100", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(PROBE_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 7);
    for row in &rows {
        assert_eq!(row[1], "100");
        assert_eq!(row[5], "0.0000", "{row:?}");
        assert_eq!(row[6], "0");
    }

    let out = run(&["probe", "--n", "3", "--k", "2", "--sizes", "3..5", "--samples", "100", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row["verify_failures"], 0);
        let total: f64 = ["long_dicycle", "semi_chain", "short_system", "below_threshold"]
            .iter()
            .map(|k| row[*k].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn probe_edge_cases() {
    let out = run(&["probe", "--n", "3", "--k", "1", "--sizes", "5..8", "--samples", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), format!("{PROBE_HEADER}\n"));
    assert_eq!(code(&run(&["probe", "--n", "3", "--k", "1", "--sizes", "5..201", "--samples", "1"])), 2);
    assert_eq!(code(&run(&["probe", "--n", "3", "--k", "1", "--sizes", "5..6", "--samples", "100001"])), 2);
    assert_eq!(code(&run(&["probe", "--n", "3", "--k", "1", "--sizes", "nine", "--samples", "1"])), 2);
    let a = run(&["probe", "--n", "4", "--k", "2", "--sizes", "6..9", "--samples", "30", "--seed", "3"]);
    let b = run(&["probe", "--n", "4", "--k", "2", "--sizes", "6..9", "--samples", "30", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn log_level_from_environment() {
    let dir = TempDir::new().unwrap();
    let input = generate(dir.path(), "flower.txt", &["--family", "flower", "--m", "8"]);
    let cert = dir.path().join("cert.json");
    let out = Command::new(env!("CARGO_BIN_EXE_unavoidable"))
        .env("UNAVOIDABLE_LOG", "info")
        .args(["extract", "--input", input.to_str().unwrap(), "--n", "4", "--k", "2", "--out", cert.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("short_system on 10 vertices"), "{}", stderr(&out));
}
