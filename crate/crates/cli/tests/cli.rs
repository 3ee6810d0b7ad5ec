use std::path::Path;
use std::process::{Command, Output};

use ffdecomp::{Payload, RunRecord, SCHEMA_VERSION};
use ffdecomp_core::decomp::SearchStatus;

fn ffdecomp(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdecomp"))
        .args(args)
        .env("FFDECOMP_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<RunRecord> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid record"))
        .collect()
}

#[test]
fn search_qr_seven_is_indecomposable() {
    let cache = tempfile::tempdir().unwrap();
    let out = ffdecomp(&["search", "--set", "qr", "--prime", "7"], cache.path());
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].schema_version, SCHEMA_VERSION);
    let Payload::DecompReport(r) = &recs[0].payload else {
        panic!("expected a search report");
    };
    assert_eq!(r.status, SearchStatus::ExhaustedNone);
    assert!(cache.path().join("field-7.bin").exists());
}

#[test]
fn shkvyu_example_passes() {
    let cache = tempfile::tempdir().unwrap();
    let out = ffdecomp(
        &[
            "shkvyu", "--prime", "61", "--d", "15", "--m", "2", "--shifts", "1,2",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let Payload::BoundReport(r) = &records(&out)[0].payload else {
        panic!("expected a bound report");
    };
    assert!(r.hypothesis_ok);
    assert_eq!(r.ok, Some(true));
}

#[test]
fn usage_errors_exit_two() {
    let cache = tempfile::tempdir().unwrap();
    let out = ffdecomp(&["search", "--set", "qr", "--prime", "6"], cache.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--prime 6"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));

    let out = ffdecomp(&["growth", "--prime", "7", "--d", "4"], cache.path());
    assert_eq!(out.status.code(), Some(2));
    let out = ffdecomp(
        &["search", "--set", "squares", "--prime", "7"],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = ffdecomp(&["frobnicate"], cache.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let cache = tempfile::tempdir().unwrap();
    let out = ffdecomp(
        &[
            "search",
            "--set",
            "qr",
            "--prime",
            "61",
            "--mode",
            "self",
            "--node-budget",
            "5",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let Payload::DecompReport(r) = &records(&out)[0].payload else {
        panic!("expected a search report");
    };
    assert_eq!(r.status, SearchStatus::BudgetExceeded);
}

#[test]
fn csv_projection() {
    let cache = tempfile::tempdir().unwrap();
    let out = ffdecomp(
        &[
            "vinogradov",
            "--prime",
            "7",
            "--a-set",
            "{1,2}",
            "--b-set",
            "{3,4}",
            "--format",
            "csv",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header = rows.headers().unwrap().clone();
    let row = rows.records().next().unwrap().unwrap();
    let field = |name: &str| row[header.iter().position(|h| h == name).unwrap()].to_owned();
    assert_eq!(field("name"), "vinogradov");
    assert_eq!(field("lhs"), "2.0");
    assert_eq!(field("ok"), "true");
}

#[test]
fn sweeps_are_deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("vino.json");
    std::fs::write(
        &config,
        r#"{"experiment": "vinogradov", "p_range": [3, 199], "samples": 120, "seed": 42}"#,
    )
    .unwrap();
    let run = |workers: &str, name: &str| {
        let out_path = dir.path().join(name);
        let out = ffdecomp(
            &[
                "sweep",
                config.to_str().unwrap(),
                "--workers",
                workers,
                "--reproducible",
                "--out",
                out_path.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(out_path).unwrap()
    };
    let one = run("1", "one.jsonl");
    assert_eq!(one, run("4", "four.jsonl"));
    assert_eq!(String::from_utf8_lossy(&one).lines().count(), 120);
}

#[test]
fn sweep_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"experiment": "growth", "p_range": [10, 3]}"#).unwrap();
    let out = ffdecomp(&["sweep", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p_range"));

    std::fs::write(
        &config,
        "{\n  \"experiment\": \"growth\",\n  \"p_rang\": [3, 10]\n}",
    )
    .unwrap();
    let out = ffdecomp(&["sweep", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn qr_sweep_finds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("qr.json");
    std::fs::write(
        &config,
        r#"{"experiment": "search", "p_range": [5, 37], "set": "qr", "seed": 1}"#,
    )
    .unwrap();
    let out = ffdecomp(&["sweep", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 10);
    for rec in recs {
        assert_eq!(rec.command, "sweep");
        assert_eq!(rec.seed, 1);
        let Payload::DecompReport(r) = rec.payload else {
            panic!("expected search reports");
        };
        assert_eq!(r.status, SearchStatus::ExhaustedNone);
    }
}

#[test]
fn records_round_trip() {
    let cache = tempfile::tempdir().unwrap();
    for args in [
        &["packing", "--prime", "13", "--d", "3"][..],
        &["wsum", "--prime", "7", "--d", "2", "--shifts", "3,5"],
        &[
            "interval", "--prime", "7", "--m", "0", "--n", "6", "--a-set", "{1,6}", "--b-set",
            "{1,2,3}",
        ],
        &[
            "search", "--prime", "7", "--set", "{0,1,2}", "--mode", "self",
        ],
    ] {
        let out = ffdecomp(args, cache.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let line = String::from_utf8(out.stdout).unwrap();
        let rec: RunRecord = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(serde_json::to_string(&rec).unwrap(), line.trim());
    }
}
