use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdice"))
        .args(args)
        .env_remove("FAIRDICE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn optimal_n3_prints_exact_minimum() {
    let o = run(&["optimal", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("d_min = 1/70"), "{s}");
    assert!(s.contains("(2/7, 3/7, 2/7)"), "{s}");
    assert!(s.contains("3/14"), "{s}");
}

#[test]
fn optimal_n6_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let (json, csv) = (p(&dir, "o.json"), p(&dir, "o.csv"));
    let o = run(&["optimal", "--n", "6", "--json", &json, "--csv", &csv]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains(r#""den": "352""#), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["theorem"], "thm1");
    assert_eq!(v["d_min"]["num"], "1");
    assert_eq!(v["manifest"]["subcommand"], "optimal");
    assert_eq!(v["manifest"]["params"]["n"], 6);
    assert_eq!(v["manifest"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["manifest"]["timestamp"].is_u64());
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("j,c_j\n2,0.0625\n"), "{csv}");
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["optimal", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["optimal", "--n", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["optimal"]).status.code(), Some(2));
    assert_eq!(run(&["conjecture", "--n", "5", "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--n", "3", "--m", "2", "--armijo-beta", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["optimal", "--n", "3", "--mode", "exact"]).status.code(), Some(2));
}

#[test]
fn construct_even_n_is_impossible() {
    let dir = TempDir::new().unwrap();
    let json = p(&dir, "c.json");
    let o = run(&["construct", "--n", "4", "--m", "2", "--json", &json]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("impossible: n even"));
    let v = read_json(Path::new(&json));
    assert_eq!(v["outcome"], "impossible");
    assert_eq!(v["reason"], "n even (Theorem 2)");
}

#[test]
fn construct_with_partition() {
    let dir = TempDir::new().unwrap();
    let json = p(&dir, "c.json");
    let o = run(&["construct", "--n", "5", "--m", "2", "--partition", "1,2;3,4", "--json", &json]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(Path::new(&json));
    assert_eq!(v["outcome"], "dice");
    assert_eq!(v["partition"], serde_json::json!([[1, 2], [3, 4]]));
    assert!(v["max_uniform_error"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["allow_negative"], true);

    // the written dice read back to an exactly-uniform total
    let o = run(&["distance", &json, "--json", &p(&dir, "d.json")]);
    assert_eq!(o.status.code(), Some(0));
    let d = read_json(&dir.path().join("d.json"));
    assert!(d["d_f64"].as_f64().unwrap() <= 1e-24);
}

#[test]
fn malformed_partitions_exit_2() {
    for bad in ["1,x", "1,2", "1,2;2,3", "1,2;3,9", ""] {
        let o = run(&["construct", "--n", "5", "--m", "2", "--partition", bad]);
        assert_eq!(o.status.code(), Some(2), "partition {bad:?}");
    }
}

#[test]
fn optimize_rediscovers_the_n6_pair() {
    let dir = TempDir::new().unwrap();
    let (json, csv) = (p(&dir, "o.json"), p(&dir, "o.csv"));
    let o = run(&["optimize", "--n", "6", "--m", "2", "--seed", "1", "--json", &json, "--csv", &csv]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("best of 200 starts"), "{s}");
    assert!(s.contains("symmetric: true"), "{s}");
    let v = read_json(Path::new(&json));
    assert!((v["d_value"].as_f64().unwrap() - 1.0 / 352.0).abs() <= 1e-12);
    assert!(v["optimal_pair_deviation"]["max_weight_deviation"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["seed"], 1);
    assert_eq!(v["config"]["starts"], 200);
    assert_eq!(v["starts"].as_array().unwrap().len(), 200);
    assert_eq!(v["converged"], true);
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("die,side,weight\n"));
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let json = p(&dir, "o.json");
    let o = Command::new(env!("CARGO_BIN_EXE_fairdice"))
        .args(["optimize", "--n", "3", "--m", "2", "--starts", "4", "--json", &json])
        .env("FAIRDICE_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(Path::new(&json));
    assert_eq!(v["seed"], 17);
    assert_eq!(v["manifest"]["seed"], 17);
}

#[test]
fn non_convergence_still_succeeds() {
    let dir = TempDir::new().unwrap();
    let json = p(&dir, "o.json");
    let o = run(&["optimize", "--n", "6", "--m", "2", "--starts", "2", "--max-iters", "1", "--json", &json]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(Path::new(&json))["converged"], false);
}

#[test]
fn float_only_subcommands_reject_rational_mode() {
    assert_eq!(run(&["optimize", "--n", "3", "--m", "2", "--mode", "rational"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--n", "3", "--m", "2", "--mode", "rational"]).status.code(), Some(2));
}

#[test]
fn identical_seed_gives_identical_json() {
    let dir = TempDir::new().unwrap();
    // the manifest echoes the output path, so both runs write to the same one
    let json = p(&dir, "r.json");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = run(&["optimize", "--n", "4", "--m", "3", "--starts", "8", "--seed", "9", "--no-timestamp", "--json", &json]);
        assert_eq!(o.status.code(), Some(0));
        runs.push(std::fs::read(&json).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    assert!(!String::from_utf8(runs.pop().unwrap()).unwrap().contains("timestamp"));
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn distance_of_fair_d6_pair() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("fair.json");
    std::fs::write(&file, r#"{"n": 6, "dice": [["1/6","1/6","1/6","1/6","1/6","1/6"], ["1/6","1/6","1/6","1/6","1/6","1/6"]]}"#).unwrap();
    let csv = p(&dir, "d.csv");
    let o = run(&["distance", file.to_str().unwrap(), "--csv", &csv]);
    assert_eq!(o.status.code(), Some(0));
    // D = Σ (k_j/36 - 1/11)² = Σ (11 k_j - 36)² / 396², with k_j the 2d6 counts
    let num: i64 = (2..=12i64).map(|j| (11 * (6 - (j - 7).abs()) - 36).pow(2)).sum();
    let den = 396i64 * 396;
    let g = gcd(num, den);
    let want = format!("D = {}/{}", num / g, den / g);
    let s = stdout(&o);
    assert!(s.contains(&want), "want {want}\n{s}");
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("j,c_j\n"));
}

#[test]
fn distance_of_n3_pair_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("pair.json");
    std::fs::write(&file, r#"{"n": 3, "mode": "rational", "dice": [["1/2","0","1/2"], [{"num":"2","den":"7"},"3/7","2/7"]]}"#).unwrap();
    let o = run(&["distance", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D = 1/70"));
}

#[test]
fn distance_of_published_d6_die_exceeds_optimum() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("gk.json");
    let w = "[0.243883, 0.137480, 0.118637, 0.118637, 0.137480, 0.243883]";
    std::fs::write(&file, format!(r#"{{"n": 6, "mode": "float", "dice": [{w}, {w}]}}"#)).unwrap();
    let json = p(&dir, "d.json");
    let o = run(&["distance", file.to_str().unwrap(), "--json", &json]);
    assert_eq!(o.status.code(), Some(0));
    let d = read_json(Path::new(&json))["d_f64"].as_f64().unwrap();
    assert!(d - 1.0 / 352.0 > 1e-6, "D = {d}");
}

#[test]
fn distance_rejects_bad_files() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("bad.json");
    for body in ["{", r#"{"dice": [[0.6, 0.6]], "mode": "float"}"#, r#"{"dice": [["1/2", "x"]]}"#] {
        std::fs::write(&file, body).unwrap();
        assert_eq!(run(&["distance", file.to_str().unwrap()]).status.code(), Some(2), "{body}");
    }
    assert_eq!(run(&["distance", &p(&dir, "missing.json")]).status.code(), Some(2));
}

#[test]
fn rational_output_round_trips_exactly() {
    let dir = TempDir::new().unwrap();
    for (args, key) in [
        (vec!["optimal", "--n", "7"], "d_min"),
        (vec!["conjecture", "--n", "5", "--m", "3"], ""),
    ] {
        let first = p(&dir, "first.json");
        let mut a = args.clone();
        a.extend(["--json", first.as_str()]);
        assert_eq!(run(&a).status.code(), Some(0));
        let second = p(&dir, "second.json");
        assert_eq!(run(&["distance", &first, "--json", &second]).status.code(), Some(0));
        let v1 = read_json(Path::new(&first));
        let v2 = read_json(Path::new(&second));
        assert_eq!(v1["dice"], v2["dice"]);
        if !key.is_empty() {
            assert_eq!(v1[key], v2["d"]);
        }
    }
}

#[test]
fn float_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let first = p(&dir, "first.json");
    let second = p(&dir, "second.json");
    run(&["optimize", "--n", "5", "--m", "3", "--starts", "6", "--seed", "3", "--json", &first]);
    assert_eq!(run(&["distance", &first, "--json", &second]).status.code(), Some(0));
    let d1 = read_json(Path::new(&first))["d_value"].as_f64().unwrap();
    let d2 = read_json(Path::new(&second))["d_f64"].as_f64().unwrap();
    assert!((d1 - d2).abs() <= 1e-14, "{d1} vs {d2}");

    let third = p(&dir, "third.json");
    run(&["optimal", "--n", "6", "--mode", "float", "--json", &first]);
    run(&["distance", &first, "--json", &third]);
    let d = read_json(Path::new(&third))["d_f64"].as_f64().unwrap();
    assert!((d - 1.0 / 352.0).abs() <= 1e-14);
}

#[test]
fn conjecture_reports_status() {
    let o = run(&["conjecture", "--n", "6", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("status: conjecture"), "{s}");
    assert!(s.contains("(3/26, 5/26, 5/26, 5/26, 5/26, 3/26)"), "{s}");
}
