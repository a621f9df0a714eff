use std::fs;
use std::path::PathBuf;

use gaplab::cli::run;
use gaplab::VerificationReport;

fn gaplab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gaplab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("gaplab-cli-{}-{name}", std::process::id()))
}

#[test]
fn count() {
    assert_eq!(gaplab(&["count", "10", "20"]), (0, "4\n".into(), String::new()));
    assert_eq!(gaplab(&["count", "10^6", "2e6"]).1, "70435\n");
    assert_eq!(gaplab(&["count", "20", "10"]).0, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(gaplab(&["verify", "bertrand", "--from", "8", "--to", "100000"]).0, 0);
    let (code, out, _) = gaplab(&["verify", "bertrand", "--from", "2", "--to", "100"]);
    assert_eq!(code, 1);
    let r: VerificationReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.violations.iter().map(|row| row.n).collect::<Vec<_>>(), vec![2, 3, 4, 5, 6, 7]);
    for bad in [
        &["verify", "nope", "--to", "10"][..],
        &["verify", "bertrand", "--from", "0", "--to", "10"],
        &["verify", "bertrand", "--from", "10", "--to", "5"],
        &["verify", "gap:ultra:-1:2", "--to", "10"],
        &["threshold", "0", "--limit", "100"],
        &["merits", "--kind", "cramer", "--epsilon", "1", "--limit", "100"],
        &["frobnicate"],
        &["verify", "trost"],
    ] {
        let (code, _, err) = gaplab(bad);
        assert_eq!(code, 2, "{bad:?}");
        assert!(!err.is_empty(), "{bad:?}");
    }
    assert_eq!(gaplab(&["--help"]).0, 0);
}

#[test]
fn json_round_trip() {
    let (code, out, _) = gaplab(&["verify", "prop2:1:10", "--to", "5000", "--no-timing"]);
    assert_eq!(code, 0);
    let r: VerificationReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.wall_time_ms, 0);
    assert_eq!(r.range, (2, 5000));
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, out);
}

#[test]
fn csv_and_json_list_the_same_rows() {
    for claim in ["bertrand", "gap:sqrt:0.5", "bhp", "prop1:4:0"] {
        let (_, json, _) = gaplab(&["verify", claim, "--to", "3000", "--no-timing"]);
        let (_, csv_text, _) = gaplab(&["verify", claim, "--to", "3000", "--format", "csv"]);
        let r: VerificationReport = serde_json::from_str(&json).unwrap();
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let header = reader.headers().unwrap().clone();
        let key_col = if claim.starts_with("gap") { 1 } else { 0 };
        let premise_col = header.iter().position(|h| h == "in_premise").unwrap();
        let rows: Vec<(u64, bool)> = reader
            .records()
            .map(|rec| {
                let rec = rec.unwrap();
                (rec[key_col].parse().unwrap(), &rec[premise_col] == "1")
            })
            .collect();
        let from_json: Vec<(u64, bool)> = r.failing_rows().into_iter().map(|(row, p)| (row.n, p)).collect();
        assert_eq!(rows, from_json, "{claim}");
        assert!(!rows.is_empty(), "{claim}");
    }
}

#[test]
fn out_file_and_table_format() {
    let path = temp_path("report.json");
    let (code, out, _) = gaplab(&["verify", "cor2", "--to", "1000", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let r: VerificationReport = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.passed());
    fs::remove_file(&path).unwrap();

    let (_, table, _) = gaplab(&["threshold", "2", "--limit", "10^5"]);
    assert!(table.starts_with("N_2 = 131, last violation (113, 127)"), "{table}");
    let (_, json, _) = gaplab(&["threshold", "2", "--limit", "10^5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n_k"], 131);
}

#[test]
fn merits_ultra_one_equals_cramer() {
    let (_, a, _) = gaplab(&["merits", "--kind", "ultra", "--epsilon", "1.0", "--limit", "100000", "--format", "csv"]);
    let (_, b, _) = gaplab(&["merits", "--kind", "cramer", "--limit", "100000", "--format", "csv"]);
    let strip = |s: &str| s.lines().skip(1).map(|l| l.split_once(',').unwrap().1.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
    let (_, all, _) = gaplab(&["merits", "--kind", "ultra", "--limit", "1000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&all).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn bounds_and_calibrate() {
    let (code, out, _) = gaplab(&["bounds", "--n", "131", "--k", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cor2"], 8);
    assert_eq!(v["prop1"], 8);
    assert_eq!(gaplab(&["bounds", "--n", "1"]).0, 2);
    let (_, out, _) = gaplab(&["calibrate", "--limit", "10^6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["min_integer_k"], 1);
    assert_eq!(v["at"]["p_next"], 3);
}

#[test]
fn bhp_scan_reports_the_small_failure() {
    let (code, out, _) = gaplab(&["bhp-scan", "--from", "100", "--to", "200", "--format", "csv"]);
    assert_eq!(code, 1);
    assert_eq!(out, "x,distance,width,in_premise,holds\n126,13,12,1,0\n");
    assert_eq!(gaplab(&["bhp-scan", "--from", "127", "--to", "100000"]).0, 0);
}

#[test]
fn config_file_and_flags() {
    let path = temp_path("gaplab.conf");
    fs::write(&path, "# test\nsieve.segment_size = 4096\nchunk_size = 1000\nformat = table\n").unwrap();
    let cfg = path.to_str().unwrap();
    let (code, out, _) = gaplab(&["--config", cfg, "verify", "bertrand", "--to", "50"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("claim "), "{out}");
    let (_, out, _) = gaplab(&["--config", cfg, "verify", "bertrand", "--to", "50", "--format", "json"]);
    assert!(out.starts_with('{'));
    fs::write(&path, "segment = 3\n").unwrap();
    assert_eq!(gaplab(&["--config", cfg, "count", "1", "10"]).0, 2);
    fs::remove_file(&path).unwrap();
    assert_eq!(gaplab(&["--config", "/nonexistent/gaplab.conf", "count", "1", "10"]).0, 2);
    assert_eq!(gaplab(&["--segment-size", "8", "count", "1", "10"]).0, 2);
}

#[test]
fn no_timing_runs_are_byte_identical() {
    let args = |p: &'static str| ["verify", "trost", "--to", "200000", "--no-timing", "--parallelism", p, "--chunk-size", "4096"];
    let (_, a, _) = gaplab(&args("1"));
    let (_, b, _) = gaplab(&args("8"));
    assert_eq!(a, b);
}
