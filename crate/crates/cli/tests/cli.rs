use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;
use stabshare_cli::codefile::CodeFile;
use stabshare_cli::{analyze_report, run_with, Io};
use stabshare_core::constructions::{rs_scheme, RsParams};
use stabshare_core::{Field, Limits};

const SUPERDENSE: &str = "# superdense coding\np=2 mu=1 n=2 k=2\n[C]\n[CMAX]\n1 1 | 0 0\n0 0 | 1 1\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("stabshare").chain(args.iter().copied());
    let code = run_with(argv, Io { stdin: &mut input, stdout: &mut out, stderr: &mut err });
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

#[test]
fn analyze_superdense_all_subsets() {
    let r = run(&["analyze", "--input", "-", "--all-subsets", "--json"], SUPERDENSE);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["tool"], "stabshare");
    assert_eq!(v["seed"], Value::Null);
    let rows = v["subsets"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let labels: Vec<&Value> = rows.iter().map(|r| &r["subset"]).collect();
    assert_eq!(labels, [&serde_json::json!([]), &serde_json::json!([1]), &serde_json::json!([2]), &serde_json::json!([1, 2])]);
    assert_eq!(rows[3]["status"], "qualified");
    for row in &rows[..3] {
        assert_eq!(row["status"], "forbidden");
    }
    assert_eq!(rows[1]["quantum_status"], "q_intermediate");
    assert_eq!(rows[3]["quantum_status"], "q_qualified");
    assert_eq!(v["thresholds"]["t"], serde_json::json!([1, 1]));
    assert_eq!(v["thresholds"]["r"], serde_json::json!([2, 2]));
    assert_eq!(v["scheme"]["reps_source"], "default");
    assert_eq!(v["bounds"]["distance"]["passed"], true);
}

#[test]
fn analyze_single_subset_human() {
    let r = run(&["analyze", "--input", "-", "--subset", "1,2"], SUPERDENSE);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("{1,2}"), "{}", r.stdout);
    assert!(r.stdout.contains("qualified"));
    assert!(r.stdout.contains("thresholds: t = [1, 1], r = [2, 2]"));
    assert!(!r.stdout.contains('\u{1b}'), "plain output has no escape codes");
}

#[test]
fn analyze_from_file_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex.code");
    std::fs::write(&path, "p=2 n=2 k=2\n[C]\n[CMAX]\n0 0 1 0\n0 0 0 1\n").unwrap();
    let r = run(&["analyze", "--input", path.to_str().unwrap(), "--oracle", "--json"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    let rows = v["subsets"].as_array().unwrap();
    assert_eq!(rows[1]["status"], "intermediate");
    assert_eq!(rows[1]["leaked_dim"], 1);
    assert_eq!(rows[1]["leaked_bits"], 1.0);
    let oracle = v["oracle"].as_array().unwrap();
    assert!(oracle.iter().all(|r| r["agree"] == true));
    assert_eq!(oracle[1]["num_classes"], 2);
}

#[test]
fn gv_prints_unreduced_lhs() {
    let r = run(&["gv", "--q", "2", "--n", "5", "--k", "1", "--dt", "2", "--dr", "2"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("holds, LHS = 720/1023\n"), "{}", r.stdout);
    let v = json(&run(&["gv", "--q", "2", "--n", "5", "--k", "1", "--dt", "2", "--dr", "2", "--json"], ""));
    assert_eq!(v["lhs"], "720/1023");
    assert_eq!(v["lhs_reduced"], "240/341");
    assert_eq!(v["holds"], true);
}

#[test]
fn gv_asym_rate_half() {
    let r = run(&["gv-asym", "--q", "2", "--R", "0.5", "--json"], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    let eps_t = v["eps_t"].as_f64().unwrap();
    let eps_r = v["eps_r"].as_f64().unwrap();
    assert!((0.185..=0.195).contains(&eps_t));
    assert!(eps_r < eps_t && eps_r > 0.0);
    // h_2(x) + x log2 3 = 1/2 at eps_r.
    let h = -eps_r * eps_r.log2() - (1.0 - eps_r) * (1.0 - eps_r).log2() + eps_r * 3f64.log2();
    assert!((h - 0.5).abs() < 1e-6);
}

#[test]
fn search_is_reproducible_and_reports_seed() {
    let args = ["search", "--q", "2", "--n", "4", "--k", "1", "--dt", "2", "--dr", "2", "--seed", "5", "--json"];
    let a = run(&args, "");
    let b = run(&args, "");
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 5);
    let w = &v["witness"];
    assert!(w["ds_t"].as_u64().unwrap() >= 2 && w["ds_r"].as_u64().unwrap() >= 2);
    let code = w["code_file"].as_str().unwrap();
    let r = run(&["analyze", "--input", "-", "--json"], code);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["distances"]["ds_t"], w["ds_t"]);
}

#[test]
fn rs_round_trip_is_byte_identical() {
    let f4 = Field::of_order(4).unwrap();
    let scheme = rs_scheme(&f4, &RsParams::new(&f4, 2)).unwrap();
    let direct = analyze_report(&scheme, None, true, false, &Limits::default()).unwrap();
    let direct = serde_json::to_string_pretty(&stabshare_cli::report::Envelope::new("analyze", None, direct)).unwrap() + "\n";

    let emitted = run(&["rs", "--q", "4", "--k", "2"], "");
    assert_eq!(emitted.code, 0, "{}", emitted.stderr);
    assert_eq!(emitted.stdout, CodeFile::from_scheme(&scheme).emit());
    let reparsed = run(&["analyze", "--input", "-", "--all-subsets", "--json"], &emitted.stdout);
    assert_eq!(reparsed.code, 0, "{}", reparsed.stderr);
    assert_eq!(reparsed.stdout, direct);

    let v = json(&reparsed);
    let rows = v["subsets"].as_array().unwrap();
    for row in rows {
        let size = row["subset"].as_array().unwrap().len();
        let expect = if size <= 2 { "forbidden" } else { "qualified" };
        assert_eq!(row["status"], expect);
    }
}

#[test]
fn css_and_hermitian_emit_code_files() {
    let css = run(&["css", "--input", "-"], "p=2 n=2\n[C2]\n[C1]\n1 0\n0 1\n");
    assert_eq!(css.code, 0, "{}", css.stderr);
    let s = CodeFile::parse(&css.stdout).unwrap().to_scheme().unwrap();
    assert_eq!((s.n(), s.k()), (2, 2));

    let euclid = run(&["css", "--input", "-", "--json"], "p=2 n=2\n[E]\n[EMAX]\n1 1\n");
    assert_eq!(euclid.code, 0, "{}", euclid.stderr);
    assert_eq!(json(&euclid)["scheme"]["k"], 2);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.code");
    let herm = run(
        &["hermitian", "--input", "-", "--output", out.to_str().unwrap()],
        "p=2 mu=2 n=2\n[D]\n[DMAX]\n1 1\n",
    );
    assert_eq!(herm.code, 0, "{}", herm.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let s = CodeFile::parse(&text).unwrap().to_scheme().unwrap();
    assert_eq!((s.field().q(), s.n(), s.k()), (2, 2, 2));
}

#[test]
fn simulate_agrees_on_superdense() {
    let r = run(&["simulate", "--input", "-", "--json"], SUPERDENSE);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["oracle"].as_array().unwrap().len(), 4);
}

#[test]
fn distances_respects_max_i() {
    let r = run(&["distances", "--input", "-", "--max-i", "1", "--json"], SUPERDENSE);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["distances"]["ds_t"], 2);
    assert_eq!(v["distances"]["ds_r"], 1);
    assert_eq!(v["distances"]["dsi_t"], serde_json::json!([2]));
}

#[test]
fn validation_errors_exit_one_with_code() {
    let r = run(&["analyze", "--input", "-", "--json"], "p=2 n=2 k=0\n[C]\n1 0 0 0\n0 0 1 0\n");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("error[not_self_orthogonal]"), "{}", r.stderr);
    assert!(r.stderr.contains("rows 1 and 2"));
    assert_eq!(json(&r)["error"]["code"], "not_self_orthogonal");

    let r = run(&["analyze", "--input", "-"], "p=2 n=2 k=1\n[C]\n1 0 7 0\n");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("error[parse_error]: line 3"), "{}", r.stderr);

    let r = run(&["distances", "--input", "-"], "p=2 n=1 k=0\n[C]\n1 0\n");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("equal_spaces"));

    let r = run(&["analyze", "--input", "/nonexistent/file.code"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("io_error"));
}

#[test]
fn too_large_exits_two() {
    let r = run(&["search", "--q", "2", "--n", "9", "--k", "1", "--dt", "2", "--dr", "2"], "");
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("error[too_large]"));

    let c_rows = "";
    let text = format!("p=2 n=25 k=25\n[C]\n{c_rows}");
    let r = run(&["analyze", "--input", "-"], &text);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"], "").code, 64);
    assert_eq!(run(&["gv", "--q", "2"], "").code, 64);
    assert_eq!(run(&["analyze", "--input", "-", "--subset", "1", "--all-subsets"], SUPERDENSE).code, 64);
    let help = run(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("analyze"));
}

#[test]
fn json_reports_are_deterministic() {
    let a = run(&["analyze", "--input", "-", "--json", "--oracle"], SUPERDENSE);
    let b = run(&["analyze", "--input", "-", "--json", "--oracle"], SUPERDENSE);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("timestamp"));
}

#[test]
fn binary_reads_stdin_and_honours_no_color() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_stabshare"))
        .args(["analyze", "--input", "-", "--all-subsets"])
        .env("NO_COLOR", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SUPERDENSE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{1,2}") && !text.contains('\u{1b}'));

    let status = Command::new(env!("CARGO_BIN_EXE_stabshare")).arg("bogus").output().unwrap().status;
    assert_eq!(status.code(), Some(64));
}
