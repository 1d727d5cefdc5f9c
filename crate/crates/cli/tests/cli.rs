use std::process::{Command, Output};

use serde_json::Value;

fn perron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perron")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV emission, header excluded.
fn rows(out: &Output) -> Vec<Vec<String>> {
    let text = stdout(out);
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(rows: &[Vec<String>], i: usize) -> Vec<&str> {
    rows.iter().map(|r| r[i].as_str()).collect()
}

#[test]
fn check_verdicts_and_exit_codes() {
    let out = perron(&["check", "--poly", "x^2-x-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# perron: true\n"));
    assert!(text.contains("# m: 1\n"));
    assert_eq!(rows(&out).len(), 2);

    let out = perron(&["check", "--poly", "x^2-2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("# perron: false\n"));

    let out = perron(&["check", "--poly", "x^2-5x+3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# m: 4\n"));
}

#[test]
fn invalid_input_exits_3() {
    for args in [
        &["check", "--poly", "x^^2"][..],
        &["check"],
        &["check", "--poly", "2x^2-1"],
        &["check", "--poly", "x^2-x-1", "--precision", "32"],
        &["count", "--poly", "x-2", "--n", "0"],
        &["count", "--poly", "x-2"],
        &["count", "--poly", "x-2", "--n", "3", "--threads", "0"],
        &["count", "--poly", "x-2", "--n", "3", "--memory", "lots"],
        &["angular", "--poly", "x^2-x-1", "--n", "3"],
        &["expand", "--poly", "x^2-x-1", "--n", "3", "--x", "[5,0]"],
    ] {
        let out = perron(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn non_perron_dominant_exits_1() {
    assert_eq!(perron(&["check", "--poly", "x^2+1"]).status.code(), Some(1));
    assert_eq!(perron(&["witness", "--poly", "x^2-2"]).status.code(), Some(1));
}

#[test]
fn count_rows() {
    let out = perron(&["count", "--poly", "x^2-x-1", "--n", "3"]);
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!(column(&r, 0), ["1", "2", "3"]);
    assert_eq!(column(&r, 1), ["2", "4", "7"]);
    let r = rows(&perron(&["count", "--poly", "x-2", "--n", "2"]));
    assert_eq!(column(&r, 1), ["3", "7"]);
}

#[test]
fn count_truncation_is_flagged() {
    let out = perron(&["count", "--poly", "x^2-x-1", "--n", "30", "--memory", "64k"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("# truncated: memory budget"));
    let r = rows(&out);
    assert!(!r.is_empty() && r.len() < 30);

    let out = perron(&["count", "--poly", "x^2-x-1", "--n", "30", "--memory", "64k", "--format", "json"]);
    assert_eq!(json(&out)["truncated"]["reason"], "memory");
}

#[test]
fn count_json_has_exact_counts_and_ordered_enclosures() {
    let v = json(&perron(&["count", "--poly", "x^3-x-1", "--n", "8", "--format", "json"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["d"], 3);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 8);
    assert_eq!(levels[0]["count"], 2);
    for level in levels {
        for key in ["ratio", "ratio_over_sqrt_n"] {
            let (lo, hi) = (level[key]["lo"].as_f64().unwrap(), level[key]["hi"].as_f64().unwrap());
            assert!(lo <= hi);
        }
    }
}

#[test]
fn witness_examples() {
    let out = perron(&["witness", "--poly", "x^2-x-1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["witness"]["coefficients"], serde_json::json!([-1, -1, 1]));
    assert_eq!(v["witness"]["verified"], true);
    assert!(v["search"]["states"].as_u64().unwrap() > 0);

    let v = json(&perron(&["witness", "--poly", "x-2", "--format", "json"]));
    assert_eq!(v["witness"]["coefficients"], serde_json::json!([-2, 1]));

    let v = json(&perron(&["witness", "--poly", "x^2-5x+3", "--format", "json"]));
    assert_eq!(v["witness"]["verified"], true);
    assert!(v["witness"]["height"].as_u64().unwrap() <= 4);
}

#[test]
fn witness_cap_exhaustion_exits_4() {
    let out = perron(&["witness", "--poly", "x^2-5x+3", "--state-cap", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let out = perron(&["witness", "--poly", "x^2-5x+3", "--max-depth", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(json(&out)["witness"].is_null());
}

#[test]
fn traces_gap_admissible_examples() {
    let r = rows(&perron(&["traces", "--poly", "x^2-x-1", "--n", "3"]));
    assert_eq!(column(&r, 1), ["1", "3", "4"]);

    let r = rows(&perron(&["gap", "--poly", "x^2-x-1", "--n", "2"]));
    assert_eq!((r[1][2].as_str(), r[1][3].as_str()), ("1", "1"));

    let r = rows(&perron(&["admissible", "--poly", "x^2-x-1", "--n", "3"]));
    assert_eq!(r[2][1], "5");
    assert!(column(&r, 3).iter().all(|&h| h == "true"));
}

#[test]
fn expand_words() {
    let out = perron(&["expand", "--poly", "x^2-2x-1", "--n", "6"]);
    assert_eq!(rows(&out)[0][3], "202020");
    let v = json(&perron(&["expand", "--poly", "x^2-x-1", "--n", "6", "--x", "[1/2,0]", "--format", "json"]));
    assert_eq!(v["kind"], "greedy");
    assert!(v["digits"].as_array().unwrap().iter().all(|d| d.as_u64().unwrap() <= 1));
}

#[test]
fn angular_and_powersum_defaults() {
    let out = perron(&["angular", "--poly", "x^3-x-1", "--n", "50"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("# j: 2\n"));
    let r = rows(&out);
    assert_eq!(r.len(), 50);
    assert!(column(&r, 1).iter().all(|a| a.parse::<f64>().unwrap().abs() <= 1.0));

    let out = perron(&["powersum", "--poly", "x^2-5x+3", "--n", "5"]);
    assert!(out.status.success());
    assert_eq!(rows(&out).len(), 5);
}

#[test]
fn threads_do_not_change_output() {
    for args in [
        &["count", "--poly", "x^2-x-1", "--n", "14"][..],
        &["count", "--poly", "x^3-x-1", "--n", "16", "--format", "json"],
        &["gap", "--poly", "x^2-2x-1", "--n", "8"],
        &["witness", "--poly", "x^2-5x+3", "--format", "json"],
    ] {
        let one = perron(&[args, &["--threads", "1"]].concat());
        let many = perron(&[args, &["--threads", "8"]].concat());
        assert!(one.status.success());
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("perron-cli-test-{}.csv", std::process::id()));
    let out = perron(&["traces", "--poly", "x^2-x-1", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.contains("k,trace,ratio\n"));
}
