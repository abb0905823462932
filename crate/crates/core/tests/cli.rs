use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppassoc::glrt::{run_test, run_test_anchored, GlrOutcome, TestOptions};
use ppassoc::measure::{NullIntensity, ObservationWindow, PointPattern};
use ppassoc::multiplicity::ScreenResult;
use tempfile::TempDir;

fn ppassoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppassoc"))
        .args(args)
        .env_remove("PPASSOC_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn times(t: &[f64]) -> String {
    let mut body = String::from("time\n");
    for x in t {
        body.push_str(&format!("{x}\n"));
    }
    body
}

const A: [f64; 3] = [0.0, 3.0, 6.5];
const B: [f64; 8] = [0.4, 1.9, 3.2, 3.3, 5.0, 6.6, 6.8, 9.1];

#[test]
fn test_output_matches_the_library_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let b = write(&dir, "b.csv", &times(&B));
    let text = stdout(&ppassoc(&["test", "--a", s(&a), "--b", s(&b), "--window-end", "10"]));
    let parsed: GlrOutcome = serde_json::from_str(&text).unwrap();

    let intensity = NullIntensity::uniform(ObservationWindow::new(0.0, 10.0).unwrap());
    let want = run_test(
        &PointPattern::new(A.to_vec()).unwrap(),
        &PointPattern::new(B.to_vec()).unwrap(),
        &intensity,
        &TestOptions::triggering(),
    )
    .unwrap();
    assert_eq!(parsed, want);
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
}

#[test]
fn correlate_with_intensity_file_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let b = write(&dir, "b.csv", &times(&B));
    let r = write(&dir, "r.csv", "breakpoint,density\n0,0.15\n5,0.05\n10,0\n");
    let out = dir.path().join("out.json");
    let text = ppassoc(&["correlate", "--a", s(&a), "--b", s(&b), "--intensity", s(&r), "--tau-max", "1.5", "--out", s(&out)]);
    assert!(stdout(&text).is_empty());
    let parsed: GlrOutcome = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();

    let intensity = NullIntensity::build(&[0.0, 5.0, 10.0], &[0.15, 0.05], ObservationWindow::new(0.0, 10.0).unwrap()).unwrap();
    let want = run_test_anchored(
        &PointPattern::new(A.to_vec()).unwrap(),
        &PointPattern::new(B.to_vec()).unwrap(),
        &intensity,
        &TestOptions::correlation().with_tau_max(1.5),
    )
    .unwrap();
    assert_eq!(parsed, want);
}

#[test]
fn report_lists_the_driving_events() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "time\n0\n10\n");
    let b = write(&dir, "b.csv", "time,payload\n5,x\n10.1,first\n10.2,second\n10.3,third\n17,y\n");
    let report = dir.path().join("report.json");
    stdout(&ppassoc(&["test", "--a", s(&a), "--b", s(&b), "--window-end", "20", "--report", s(&report)]));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let payloads: Vec<&str> = json["entries"].as_array().unwrap().iter().map(|e| e["payload"].as_str().unwrap()).collect();
    assert_eq!(payloads, ["first", "second", "third"]);
}

#[test]
fn input_errors_exit_with_status_two() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let missing = dir.path().join("nope.csv");

    let out = ppassoc(&["test", "--a", s(&a), "--b", s(&missing), "--window-end", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));

    let out = ppassoc(&["test", "--a", s(&a), "--b", s(&a), "--bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ppassoc(&["test", "--a", s(&a), "--b", s(&a)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--window-end"));

    let bad = write(&dir, "bad.csv", "time\n0.5\nabc\n");
    let out = ppassoc(&["test", "--a", s(&a), "--b", s(&bad), "--window-end", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn duplicate_times_are_rejected_unless_jittered() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let b = write(&dir, "b.csv", "time\n1.0\n2.0\n2.0\n4.0\n");
    let out = ppassoc(&["test", "--a", s(&a), "--b", s(&b), "--window-end", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains("line 3"), "{err}");

    let args = ["test", "--a", s(&a), "--b", s(&b), "--window-end", "10", "--jitter", "1e-6", "--seed", "3"];
    let first: GlrOutcome = serde_json::from_str(&stdout(&ppassoc(&args))).unwrap();
    let again: GlrOutcome = serde_json::from_str(&stdout(&ppassoc(&args))).unwrap();
    assert_eq!(first, again);
    assert_eq!(first.n, 4);
}

#[test]
fn strict_mode_turns_degeneracy_into_status_three() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let b = write(&dir, "b.csv", &times(&[0.5, 3.0, 8.0]));
    let base = ["test", "--a", s(&a), "--b", s(&b), "--window-end", "10"];

    let relaxed = ppassoc(&base);
    assert_eq!(relaxed.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&relaxed.stderr).is_empty());
    let outcome: GlrOutcome = serde_json::from_slice(&relaxed.stdout).unwrap();
    assert_eq!(outcome.degeneracy.zero_u, 1);

    let mut strict = base.to_vec();
    strict.push("--strict");
    assert_eq!(ppassoc(&strict).status.code(), Some(3));
}

#[test]
fn calibration_is_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cal.conf", "# small run\nreplicates = 60\nmean_events = 15\nsource_events = 5\nseed = 11\n");
    let run = |threads: Option<&str>, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ppassoc"));
        cmd.env_remove("PPASSOC_THREADS").args(["calibrate", "--config", s(&cfg)]);
        if let Some(t) = threads {
            cmd.args(["--threads", t]);
        }
        if let Some(e) = env {
            cmd.env("PPASSOC_THREADS", e);
        }
        stdout(&cmd.output().unwrap())
    };
    let reference = run(Some("1"), None);
    assert_eq!(run(Some("1"), None), reference);
    assert_eq!(run(Some("3"), None), reference);
    assert_eq!(run(None, Some("2")), reference);
    let json: serde_json::Value = serde_json::from_str(&reference).unwrap();
    assert_eq!(json["replicates"], 60);
    assert_eq!(json["p_values"].as_array().unwrap().len(), 60);
}

#[test]
fn screen_writes_json_and_matrix() {
    let dir = TempDir::new().unwrap();
    let mut events = String::from("time,stream,payload\n");
    for i in 0..10 {
        let t = i as f64 * 10.0 + 1.0;
        events.push_str(&format!("{t},src,\n"));
        events.push_str(&format!("{},hit,\"r{i},a\"\n", t + 0.05));
        events.push_str(&format!("{},noise,\n", i as f64 * 9.7 + 4.3));
    }
    let events = write(&dir, "events.csv", &events);
    let pairs = write(&dir, "pairs.csv", "source,target\nsrc,hit\nsrc,noise\nnoise,hit\n");
    let matrix = dir.path().join("matrix.csv");
    let text = stdout(&ppassoc(&[
        "screen", "--events", s(&events), "--pairs", s(&pairs), "--window-end", "100", "--matrix", s(&matrix),
    ]));
    let result: ScreenResult = serde_json::from_str(&text).unwrap();
    assert_eq!(result.entries.len(), 3);
    let hit = &result.entries[0];
    assert_eq!((hit.source.as_str(), hit.target.as_str()), ("src", "hit"));
    assert_eq!(hit.tier.as_str(), "fdr-rejected");
    let report = hit.report.as_ref().expect("rejected triggering pair carries a report");
    let payload = report.entries[0].payload.as_deref().unwrap();
    assert!(payload.starts_with('r') && payload.ends_with(",a"), "{payload}");

    let m = std::fs::read_to_string(&matrix).unwrap();
    assert!(m.starts_with("source,"));
    assert!(m.contains("fdr-rejected"));
}

#[test]
fn diagnose_accepts_u_values_or_patterns() {
    let dir = TempDir::new().unwrap();
    let u = write(&dir, "u.csv", "u\n0.9\n0.1\n0.3\n0.05\n0.6\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&ppassoc(&["diagnose", "--u", s(&u)]))).unwrap();
    assert_eq!(json["ecdf"].as_array().unwrap().len(), 5);
    assert!(json["fisher"]["p_value"].as_f64().unwrap() > 0.0);

    let a = write(&dir, "a.csv", &times(&A));
    let b = write(&dir, "b.csv", &times(&B));
    let ecdf = dir.path().join("ecdf.csv");
    stdout(&ppassoc(&["diagnose", "--a", s(&a), "--b", s(&b), "--window-end", "10", "--ecdf", s(&ecdf), "--correlation"]));
    let table = std::fs::read_to_string(&ecdf).unwrap();
    assert_eq!(table.lines().next(), Some("u,ecdf"));
    // 3.3 and 6.8 sit at the same distance from their nearest source and share a row.
    assert_eq!(table.lines().count(), B.len());
}

#[test]
fn experiments_read_config_files() {
    let dir = TempDir::new().unwrap();
    let fig = write(&dir, "fig.conf", "n = 40\nreplicates = 30\ngamma1 = 0.05\ngamma2 = 0.95\nseed = 2\n");
    let table = dir.path().join("fig.csv");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&ppassoc(&["figure1", "--config", s(&fig), "--table", s(&table)]))).unwrap();
    assert_eq!(json["n"], 40);
    assert_eq!(std::fs::read_to_string(&table).unwrap().lines().count(), 61);

    let con = write(&dir, "con.conf", "ladder = 5, 20\nreplicates = 8\nseed = 4\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&ppassoc(&["consistency", "--config", s(&con)]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);

    let unknown = write(&dir, "bad.conf", "replicate = 8\n");
    assert_eq!(ppassoc(&["consistency", "--config", s(&unknown)]).status.code(), Some(2));
}

#[test]
fn simulate_writes_sorted_events_in_the_window() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &times(&A));
    let args = ["simulate", "--a", s(&a), "--tau", "0.5", "--lambda1", "8", "--lambda2", "2", "--n", "25", "--window-end", "10", "--seed", "9"];
    let text = stdout(&ppassoc(&args));
    assert_eq!(text, stdout(&ppassoc(&args)));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time"));
    let t: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
    assert_eq!(t.len(), 25);
    assert!(t.windows(2).all(|w| w[0] <= w[1]));
    assert!(t.iter().all(|x| (0.0..10.0).contains(x)));
}
