use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn zipcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zipcal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = zipcal(args);
    assert!(
        out.status.success(),
        "zipcal {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn toy(dir: &Path) -> PathBuf {
    let path = dir.join("toy.txt");
    fs::write(&path, "a b\nb c\na b c\n").unwrap();
    path
}

/// Deterministic synthetic text: line i draws words from a skewed pool.
fn lines_file(dir: &Path, n: usize) -> PathBuf {
    let mut text = String::new();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..n {
        for _ in 0..12 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = ((state >> 11) as f64) / ((1u64 << 53) as f64);
            // inverse of a heavy-tailed cdf over ~5000 words
            let rank = (5000f64.powf(u)) as usize;
            text.push_str(&format!("w{rank} "));
        }
        text.push('\n');
    }
    let path = dir.join("lines.txt");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn toy_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let out = dir.path().join("out");
    ok(&["sample", "--dataset", s(&data), "-k", "2", "--out", s(&out)]);
    let m = read_json(&out.join("toy.zipcal.k2.manifest.json"));
    assert_eq!(m["format_version"], 1);
    assert_eq!(m["indices"], serde_json::json!([2, 0]));
    assert_eq!(m["gains"], serde_json::json!([3, 0]));
    assert_eq!(m["coverage"], serde_json::json!([1.0, 1.0]));
    assert_eq!(m["evaluations"], 5);
}

#[test]
fn emit_texts_writes_selected_lines_in_pick_order() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let out = dir.path().join("out");
    ok(&["sample", "--dataset", s(&data), "-k", "2", "--out", s(&out), "--emit-texts"]);
    let m = read_json(&out.join("toy.zipcal.k2.manifest.json"));
    assert_eq!(m["texts"], serde_json::json!(["a b c", "a b"]));
    let lines = fs::read_to_string(out.join("toy.zipcal.k2.texts.jsonl")).unwrap();
    let texts: Vec<Value> = lines.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(texts[0]["text"], "a b c");
    assert_eq!(texts[1]["id"], 0);
}

#[test]
fn random_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let data = lines_file(dir.path(), 300);
    let run = |out: &str| {
        let out = dir.path().join(out);
        ok(&["sample", "--dataset", s(&data), "-k", "20", "--method", "random", "--seed", "0", "--out", s(&out)]);
        fs::read(out.join("lines.random.k20.seed0.manifest.json")).unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    let strip = |bytes: &[u8]| without_timing(serde_json::from_slice(bytes).unwrap());
    assert_eq!(strip(&a), strip(&b));
    // byte-identical apart from the timing line
    let body = |bytes: &[u8]| {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .filter(|l| !l.contains("wall_time_secs"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&a), body(&b));
}

#[test]
fn thread_count_does_not_change_the_selection() {
    let dir = tempfile::tempdir().unwrap();
    let data = lines_file(dir.path(), 500);
    let run = |threads: &str, out: &str| {
        let out = dir.path().join(out);
        ok(&["--threads", threads, "sample", "--dataset", s(&data), "-k", "32", "--out", s(&out)]);
        without_timing(read_json(&out.join("lines.zipcal.k32.manifest.json")))
    };
    assert_eq!(run("1", "one"), run("3", "three"));
}

#[test]
fn ten_thousand_lines_k128_gains_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let data = lines_file(dir.path(), 10_000);
    let out = dir.path().join("out");
    ok(&["sample", "--dataset", s(&data), "-k", "128", "-w", "2048", "--out", s(&out)]);
    let m = read_json(&out.join("lines.zipcal.k128.manifest.json"));
    let gains: Vec<u64> = m["gains"].as_array().unwrap().iter().map(|g| g.as_u64().unwrap()).collect();
    assert_eq!(gains.len(), 128);
    assert!(gains.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(m["indices"].as_array().unwrap().len(), 128);
}

#[test]
fn stats_writes_rank_frequency_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let out = dir.path().join("out");
    ok(&["stats", "--dataset", s(&data), "--out", s(&out)]);
    let text = fs::read_to_string(out.join("toy.full.rank_frequency.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# format_version=1 dataset=toy method=full k=3 tokenizer="));
    assert!(header.ends_with("columns=rank,count"));
    // b:3, a:2, c:2
    assert_eq!(lines.collect::<Vec<_>>(), ["1,3", "2,2", "3,2"]);
}

#[test]
fn stats_with_manifest_exports_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let out = dir.path().join("out");
    ok(&["sample", "--dataset", s(&data), "-k", "1", "--out", s(&out)]);
    let manifest = out.join("toy.zipcal.k1.manifest.json");
    ok(&["stats", "--dataset", s(&data), "--manifest", s(&manifest), "--out", s(&out)]);
    let cov = fs::read_to_string(out.join("toy.zipcal.k1.coverage.csv")).unwrap();
    assert_eq!(cov.lines().nth(1), Some("1,1"));
    let rf = fs::read_to_string(out.join("toy.zipcal.k1.rank_frequency.csv")).unwrap();
    assert_eq!(rf.lines().skip(1).collect::<Vec<_>>(), ["1,1", "2,1", "3,1"]);
}

fn compare_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn compare_lists_greedy_first_at_each_budget() {
    let dir = tempfile::tempdir().unwrap();
    let data = lines_file(dir.path(), 2_000);
    let out = dir.path().join("out");
    let mut manifests = Vec::new();
    for k in ["16", "128", "1024"] {
        ok(&["sample", "--dataset", s(&data), "-k", k, "--out", s(&out)]);
        manifests.push(out.join(format!("lines.zipcal.k{k}.manifest.json")));
        for seed in ["0", "1"] {
            ok(&["sample", "--dataset", s(&data), "-k", k, "--method", "random", "--seed", seed, "--out", s(&out)]);
            manifests.push(out.join(format!("lines.random.k{k}.seed{seed}.manifest.json")));
        }
    }
    let mut args = vec!["compare", "--dataset", s(&data), "--out", s(&out)];
    for m in &manifests {
        args.extend(["--manifest", s(m)]);
    }
    let stdout = ok(&args);
    assert!(stdout.contains("k=16") && stdout.contains("k=1024"));
    for k in [16, 128, 1024] {
        let rows = compare_rows(&out.join(format!("lines.compare.k{k}.csv")));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][0], "zipcal");
        assert_eq!(rows[1][0], "random");
        assert_eq!(rows[1][2], "2");
        let greedy: f64 = rows[0][3].parse().unwrap();
        let random: f64 = rows[1][4].parse().unwrap();
        assert!(greedy >= random, "k={k}: {greedy} < {random}");
        assert_eq!(rows[0][6], format!("lines.zipcal.k{k}.coverage.csv"));
        assert!(out.join(&rows[0][6]).exists());
    }
}

#[test]
fn tokenizer_mismatch_is_an_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let out = dir.path().join("out");
    ok(&["sample", "--dataset", s(&data), "-k", "2", "--out", s(&out)]);
    let manifest = out.join("toy.zipcal.k2.manifest.json");
    let res = zipcal(&["stats", "--dataset", s(&data), "-w", "1", "--manifest", s(&manifest), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("tokenizer"));

    let res = zipcal(&[
        "compare", "--dataset", s(&data), "-w", "1", "--manifest", s(&manifest), "--manifest", s(&manifest), "--out", s(&out),
    ]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let d = s(&data);
    for args in [
        vec!["sample", "--dataset", d, "-k", "0"],
        vec!["sample", "--dataset", d, "--method", "cola"],
        vec!["sample", "--dataset", d, "--engine", "magic"],
        vec!["sample"],
        vec!["sample", "--dataset", d, "-k", "5", "--method", "random"],
        vec!["frobnicate"],
        vec!["sample", "--no-such-flag"],
    ] {
        let res = zipcal(&args);
        assert_eq!(res.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(zipcal(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_and_malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    assert_eq!(zipcal(&["sample", "--dataset", s(&missing)]).status.code(), Some(2));
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"text\": \"ok\"}\nnot json\n").unwrap();
    let res = zipcal(&["sample", "--dataset", s(&bad), "--format", "jsonl", "--out", s(dir.path())]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains('2'));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let data = toy(dir.path());
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "k = 1\nout = \"from_config\"\n").unwrap();
    ok(&["sample", "--config", s(&cfg), "--dataset", s(&data), "-k", "3", "--out", s(&dir.path().join("from_flags"))]);
    assert!(dir.path().join("from_config/toy.zipcal.k1.manifest.json").exists());
    assert!(!dir.path().join("from_flags").exists());
}

#[test]
fn multi_domain_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("alpha.txt");
    let b = dir.path().join("beta.txt");
    fs::write(&a, (0..30).map(|i| format!("a{i} a{} shared\n", i + 1)).collect::<String>()).unwrap();
    fs::write(&b, (0..30).map(|i| format!("b{i} b{} shared\n", i + 1)).collect::<String>()).unwrap();
    let out = dir.path().join("out");
    ok(&["sample-multi", "--dataset", s(&a), "--dataset", s(&b), "-k", "6", "--seed", "4", "--out", s(&out)]);
    let m = read_json(&out.join("multi.k6.seed4.manifest.json"));
    assert_eq!(m["kind"], "multi");
    assert_eq!(m["selected"].as_array().unwrap().len(), 6);
    assert_eq!(m["domains"].as_array().unwrap().len(), 2);
    assert_eq!(m["radii"].as_array().unwrap().len(), 5);
}

#[test]
fn bench_counts_follow_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    ok(&[
        "bench", "--sizes", "200,400,800", "--budgets", "16,64", "--types", "2000", "--tokens-per-sample", "64",
        "--repeats", "1", "--out", s(&out),
    ]);
    let table = fs::read_to_string(out.join("bench.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next(),
        Some("n,k,method,engine,wall_time_secs,evaluation_count,expected_evaluations")
    );
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (n, k): (u64, u64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let count: u64 = f[5].parse().unwrap();
        assert_eq!(count, k * n - k * (k + 1) / 2 + k, "{line}");
        assert_eq!(f[6], f[5]);
        rows += 1;
    }
    assert_eq!(rows, 6);
}
