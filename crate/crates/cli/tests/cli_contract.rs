//! Black-box checks of the command-line contract: exit codes, output
//! formats, seed handling, and sweep row accounting.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn task_file(doc: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cohiggs-contract-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(format!("task-{}.json", COUNTER.fetch_add(1, Ordering::SeqCst)));
    std::fs::write(&path, doc).expect("write task file");
    path
}

fn run(doc: &str, args: &[&str]) -> Output {
    let path = task_file(doc);
    Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg(&path)
        .args(args)
        .env_remove("COHIGGS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn classify_reports_the_verdict_in_all_formats() {
    let doc = r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-2]]},"task":"classify"}"#;

    let text = run(doc, &[]);
    assert_eq!(text.status.code(), Some(0));
    let body = stdout_str(&text);
    assert!(body.contains("verdict: Mixed"), "{body}");
    assert!(body.contains("gamma -2"), "{body}");

    let json = run(doc, &["--format", "json"]);
    assert_eq!(json.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_slice(&json.stdout).expect("valid JSON output");
    assert_eq!(value["verdict"], "Mixed");
    assert_eq!(value["gamma"], -2);
    assert_eq!(value["profile"], "1:0;1:-2");

    let csv_out = run(doc, &["--format", "csv"]);
    assert_eq!(csv_out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let headers = reader.headers().expect("header row").clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        vec!["g", "m", "gamma", "profile", "verdict", "citation"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.expect("row")).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][4], "Mixed");
}

#[test]
fn usage_problems_exit_one() {
    // missing file
    let out = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg("/nonexistent/task.json")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).starts_with("error:"));

    // malformed JSON carries the line number
    let out = run("{not json", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("syntax (line 1)"), "{}", stderr_str(&out));

    // unknown keys are rejected, not ignored
    let out = run(
        r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0]]},"task":"classify","bogus":1}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("schema (bogus)"), "{}", stderr_str(&out));

    // unknown flag
    let out = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg("--definitely-not-a-flag")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));

    // unparseable seed in the environment
    let path = task_file(
        r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"basis"}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg(&path)
        .env("COHIGGS_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));

    // help and version are not errors
    for flag in ["--help", "--version"] {
        let out = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
            .arg(flag)
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "{flag}");
    }
}

#[test]
fn validation_problems_exit_two() {
    // non-negative gamma is rejected before any missing-key complaints
    let out = run(r#"{"curve":{"genus":0,"marked_points":1}}"#, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("gamma"), "{}", stderr_str(&out));

    // splitting profiles only live on the projective line
    let out = run(
        r#"{"curve":{"genus":1,"marked_points":1},"profile":{"splitting":[1,0]},"task":"delta"}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // genus-0 profiles must have integral slopes
    let out = run(
        r#"{"curve":{"genus":0,"marked_points":3},"profile":{"hn":[[2,1],[1,-1]]},"task":"classify"}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // field entries must match their prescribed degrees
    let out = run(
        r#"{"curve":{"genus":0,"marked_points":3},"profile":{"splitting":[1,0]},"task":"nilpotency","field":[[[],["1/2",0]],[[],[]]]}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("degree"), "{}", stderr_str(&out));

    // split-bundle tasks reject plain filtration profiles
    let out = run(
        r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-2]]},"task":"basis"}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // the oracle cross-check needs a split bundle to enumerate
    let out = run(
        r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-2]]},"task":"segre"}"#,
        &["--oracle"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_flag_and_environment_agree() {
    let doc = r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"basis"}"#;
    let flagged = run(doc, &["--seed", "1234"]);
    assert_eq!(flagged.status.code(), Some(0));

    let path = task_file(doc);
    let env_run = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg(&path)
        .env("COHIGGS_SEED", "1234")
        .output()
        .expect("binary runs");
    assert_eq!(env_run.status.code(), Some(0));
    assert_eq!(flagged.stdout, env_run.stdout);

    // an explicit flag wins over the environment
    let both = Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg(&path)
        .args(["--seed", "1234"])
        .env("COHIGGS_SEED", "9999")
        .output()
        .expect("binary runs");
    assert_eq!(both.stdout, flagged.stdout);
}

#[test]
fn sweep_rows_equal_grid_points_minus_rejections() {
    // 3 genus values; g=0 and g=1 make gamma non-negative at m=0 and are
    // rejected with a warning, leaving a single row
    let doc = r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-2]]},"task":"sweep","sweep":{"genus":[0,1,2]}}"#;
    let out = run(doc, &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> =
        reader.records().map(|r| r.expect("row")).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "2");
    let warnings = stderr_str(&out);
    assert_eq!(warnings.matches("rejected:").count(), 2, "{warnings}");

    // non-integral slopes at genus 0 are a per-point rejection, not a crash
    let doc = r#"{"curve":{"genus":2,"marked_points":3},"profile":{"hn":[[2,1],[1,-1]]},"task":"sweep","sweep":{"genus":[0,2]}}"#;
    let out = run(doc, &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> =
        reader.records().map(|r| r.expect("row")).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(stderr_str(&out).matches("rejected:").count(), 1);

    // the reference six-point sweep keeps every point
    let doc = r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-1]]},"task":"sweep","sweep":{"bottom_degree":{"from":-6,"to":-1}}}"#;
    let out = run(doc, &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> =
        reader.records().map(|r| r.expect("row")).collect();
    assert_eq!(rows.len(), 6);
    assert!(stderr_str(&out).is_empty());
    let verdicts: Vec<&str> = rows.iter().map(|r| &r[4]).collect();
    assert_eq!(
        verdicts,
        vec!["AllAdmit", "AllAdmit", "AllAdmit", "Mixed", "Mixed", "NoneForAll"]
    );
}

#[test]
fn splitting_sweeps_append_projective_line_columns() {
    let doc = r#"{"curve":{"genus":0,"marked_points":3},"profile":{"splitting":[1,-2]},"task":"sweep","sweep":{"bottom_twist":[-2]}}"#;
    let out = run(doc, &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().expect("header row").clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        vec!["g", "m", "gamma", "profile", "verdict", "citation", "delta", "e", "s_list", "endo_dim"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.expect("row")).collect();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(&row[0], "0");
    assert_eq!(&row[1], "3");
    assert_eq!(&row[2], "-1");
    assert_eq!(&row[3], "1;-2");
    assert_eq!(&row[4], "AllAdmit");
    assert_eq!(&row[6], "3"); // hom-space dimension of O(1) + O(-2) at gamma -1
    assert_eq!(&row[7], "3"); // vanishing exponent floor((1 - (-2)) / 1)
    assert_eq!(&row[8], "1:-3"); // k d - r delta_k = -1 - 2*1
    assert_eq!(&row[9], "6"); // end_dim: 1 + (1+2+1) + 1
}

#[test]
fn field_payload_tasks_report_exact_numbers() {
    let doc = r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"nilpotency","field":[[[],["1/2"],[1,0,0,0]],[[],[],[2,0]],[[],[],[]]]}"#;
    let out = run(doc, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(value["bound"], 2);
    assert_eq!(value["index"], 3);
    assert_eq!(value["vanishes_at_bound_plus_one"], true);

    let doc = r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"endo","field":[[[],["1/2"],[1,0,0,0]],[[],[],[2,0]],[[],[],[]]]}"#;
    let out = run(doc, &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(value["end_dim"], 16);
    assert_eq!(value["commutant"]["contains_identity"], true);
    assert_eq!(value["commutant"]["simple"], false);
}

#[test]
fn delta_task_agrees_with_its_oracle_flag() {
    let doc = r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[0,-3]},"task":"delta"}"#;
    let plain = run(doc, &[]);
    assert_eq!(plain.status.code(), Some(0));
    assert!(stdout_str(&plain).contains("delta: 2"));

    let checked = run(doc, &["--oracle"]);
    assert_eq!(checked.status.code(), Some(0));
    let body = stdout_str(&checked);
    assert!(body.contains("delta: 2"), "{body}");
    assert!(body.contains("oracle"), "{body}");
}
