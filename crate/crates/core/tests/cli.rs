use std::process::{Command, Output};

use renewal_dst::metrics::tv_to_limit;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renewal-dst"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

/// CSV body rows after the `#` metadata line and the header.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn csv_header_and_metadata() {
    let text = stdout(&["limit-law"]);
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# "));
    assert!(meta.contains("seed=20070201"));
    assert!(meta.contains("version="));
    assert_eq!(lines.next().unwrap(), "x,cdf,pmf,tail");
    assert_eq!(csv_rows(&text).len(), 16);
    assert!(stdout(&["limit-law", "--seed", "11"]).contains("seed=11"));
}

#[test]
fn limit_law_rows() {
    let rows = csv_rows(&stdout(&["limit-law", "--eta", "0"]));
    let cdf: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(rows[0][0], "-3");
    assert_eq!(rows[15][0], "12");

    let zero = json(&["limit-law", "--eta", "0"]);
    let one = json(&["limit-law", "--eta", "1", "--x-range", "-2:13"]);
    let (zero, one) = (zero["rows"].as_array().unwrap(), one["rows"].as_array().unwrap());
    for (a, b) in zero.iter().zip(one) {
        assert_eq!(a["x"].as_i64().unwrap() + 1, b["x"].as_i64().unwrap());
        for key in ["cdf", "pmf", "tail"] {
            assert_eq!(a[key], b[key]);
        }
    }
}

#[test]
fn json_schema() {
    let v = json(&["limit-law", "--eta", "0.25"]);
    assert_eq!(v["meta"]["command"], "limit-law");
    assert_eq!(v["meta"]["eta"], "0.25");
    assert_eq!(v["meta"]["seed"], "20070201");
    let rows = v["rows"].as_array().unwrap();
    let mut keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["cdf", "pmf", "tail", "x"]);

    let v = json(&["converge", "--kind", "ks", "--n-grid", "4:6"]);
    let mut keys: Vec<&str> =
        v["rows"][0].as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["eta", "kind", "ms", "n", "trunc_bound", "value"]);
    assert_eq!(v["rows"][0]["ms"].as_f64(), Some(0.0));
}

#[test]
fn depth_dist_trailer_and_columns() {
    let rows = csv_rows(&stdout(&["depth-dist", "--n", "1024"]));
    let (body, trailer) = rows.split_at(rows.len() - 1);
    assert_eq!(trailer[0][0], "tv");
    assert_eq!(num(&trailer[0][3]), tv_to_limit(1024).unwrap().tv);
    for col in [1, 2] {
        let s: f64 = body.iter().map(|r| num(&r[col])).sum();
        assert!((s - 1.0).abs() < 1e-10, "column {col}: {s}");
    }
    for r in body {
        assert_eq!(num(&r[3]), (num(&r[1]) - num(&r[2])).abs());
    }

    let rows = csv_rows(&stdout(&["depth-dist", "--n", "1"]));
    let support: Vec<&str> = rows[..rows.len() - 1]
        .iter()
        .filter(|r| num(&r[1]) > 0.0)
        .map(|r| r[0].as_str())
        .collect();
    assert_eq!(support, ["1"]);
}

#[test]
fn dst_demo_listing() {
    let rows = csv_rows(&stdout(&["dst-demo", "--probe", "011100"]));
    let depths: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(depths, ["0", "1", "1", "2", "2", "3", "3", "2", "3", "3", "4"]);
    assert_eq!(rows[0][3], "");
    assert_eq!(rows[0][4], "root");
    assert_eq!(rows[10][..], ["probe", "011100", "4", "x_6", "right"]);
}

#[test]
fn dst_demo_files() {
    let dir = std::env::temp_dir().join(format!("renewal-dst-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str, body: &str| {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };

    let empty = path("empty.txt", "");
    let out = run(&["dst-demo", "--corpus", &empty]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&String::from_utf8(out.stdout).unwrap()).len(), 0);

    let bad = path("bad.txt", "# keys\na 0101\nb 01x1\n");
    let out = run(&["dst-demo", "--corpus", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let short = path("short.txt", "a 1\nb 1\nlast 1\n");
    let out = run(&["dst-demo", "--corpus", &short]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("last"));

    let missing = dir.join("missing.txt");
    assert_eq!(code(&["dst-demo", "--corpus", missing.to_str().unwrap()]), 3);

    let target = dir.join("out.csv");
    assert_eq!(code(&["dst-demo", "--out", target.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), stdout(&["dst-demo"]));
    let unwritable = dir.join("no-such-dir").join("out.csv");
    assert_eq!(code(&["dst-demo", "--out", unwritable.to_str().unwrap()]), 3);

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["limit-law", "--eta", "1.5"]), 2);
    assert_eq!(code(&["limit-law", "--x-range", "5:1"]), 2);
    assert_eq!(code(&["depth-dist", "--n", "0"]), 2);
    assert_eq!(code(&["depth-dist", "--n", "100000000"]), 2);
    assert_eq!(code(&["dst-demo", "--probe", "01a"]), 2);
    assert_eq!(code(&["simulate", "--samples", "0"]), 2);
    assert_eq!(code(&["simulate", "--alpha", "1"]), 2);
    assert_eq!(code(&["simulate", "--alpha", "3", "--family", "dst"]), 2);
    assert_eq!(code(&["converge", "--n-grid", "2^10:2^4:2"]), 2);
    assert_eq!(code(&["converge", "--kind", "ks", "--n-grid", "18:4"]), 2);
    assert_eq!(code(&["limit-law", "--format", "xml"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn converge_defaults_pass() {
    for kind in ["tv", "ks"] {
        let out = run(&["converge", "--kind", kind]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
        assert_eq!(rows.len(), if kind == "tv" { 8 } else { 15 });
    }
}

#[test]
fn converge_reports_violations() {
    // Off the dyadic grid, tv(n) n^0.9 oscillates with eta = {log2 n}.
    let out = run(&["converge", "--kind", "tv", "--n-grid", "300:600:50"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("row 4 (n = 500)"), "{stderr}");
    assert_eq!(csv_rows(&String::from_utf8(out.stdout).unwrap()).len(), 7);
}

#[test]
fn simulate_matches_exact_trailers() {
    let samples = 200_000;
    let sim = json(&["simulate", "--n-grid", "2^6:2^10:2", "--samples", &samples.to_string()]);
    for row in sim["rows"].as_array().unwrap() {
        let n = row["n"].as_i64().unwrap();
        assert_eq!(row["kind"], "tv_sim");
        let exact = tv_to_limit(n).unwrap().tv;
        let value = row["value"].as_f64().unwrap();
        // The empirical TV adds sampling noise of order sqrt(support / samples).
        assert!((value - exact).abs() < 0.01, "n={n}: {value} vs {exact}");
    }
}

#[test]
fn simulate_general_alpha() {
    let v = json(&["simulate", "--alpha", "1.5", "--n-grid", "2^4:2^14:2", "--samples", "50000"]);
    assert_eq!(v["meta"]["family"], "scaled");
    let rows = v["rows"].as_array().unwrap();
    let values: Vec<f64> = rows.iter().map(|r| r["value"].as_f64().unwrap()).collect();
    for row in rows {
        let eta = row["eta"].as_f64().unwrap();
        assert!((0.0..1.0).contains(&eta));
    }
    // Lifetimes grow slowly at alpha = 1.5, so t = 16 is still far from the
    // limit; from t = 256 on what remains is two-sample noise.
    assert!(values[0] > 0.1, "{values:?}");
    assert!(values[2..].iter().all(|&v| v < 0.03), "{values:?}");
}

#[test]
fn timing_flag_only_changes_ms() {
    let with = json(&["converge", "--kind", "ks", "--n-grid", "8:10", "--timing"]);
    let without = json(&["converge", "--kind", "ks", "--n-grid", "8:10"]);
    for (a, b) in with["rows"].as_array().unwrap().iter().zip(without["rows"].as_array().unwrap()) {
        assert_eq!(a["value"], b["value"]);
        assert!(a["ms"].as_f64().unwrap() > 0.0);
    }
}
