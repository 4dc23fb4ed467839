use std::process::{Command, Output};

use serde_json::Value;

fn lineperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lineperc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn plane_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pg25.json");
    let p = path.to_str().unwrap();
    let summary = json(&lineperc(&["plane", "--q", "5", "--out", p]));
    assert_eq!(summary["points"], 31);
    assert_eq!(summary["config"]["q"], 5);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["points"], 31);
    assert_eq!(file["lines"].as_array().unwrap().len(), 31);

    let before = std::fs::read(&path).unwrap();
    let out = json(&lineperc(&[
        "percolate",
        "--plane",
        p,
        "--r",
        "2",
        "--points",
        "0,1,2",
    ]));
    assert_eq!(
        std::fs::read(&path).unwrap(),
        before,
        "input file untouched"
    );
    assert_eq!(out["initial"], serde_json::json!([0, 1, 2]));
}

#[test]
fn search_min_matches_known_value() {
    let out = json(&lineperc(&["search", "min", "--q", "5", "--r", "3"]));
    assert_eq!(out["value"], 6);
    assert_eq!(out["exact"], true);
    assert_eq!(out["target"], "min_perc");
    for key in [
        "target", "q", "r", "value", "exact", "witness", "nodes", "seconds", "strategy", "seed",
    ] {
        assert!(out.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn construction_reports_checks() {
    let out = json(&lineperc(&["construct", "t3", "--q", "11", "--r", "5"]));
    assert_eq!(out["size"], 15);
    assert_eq!(out["time"], 3);
    assert_eq!(out["minimal"], true);
    assert!(out["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn exit_codes() {
    // bad input
    assert_eq!(lineperc(&["plane", "--q", "6"]).status.code(), Some(2));
    assert_eq!(
        lineperc(&["bounds", "--q", "7", "--r", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lineperc(&["percolate", "--q", "3", "--r", "2", "--points", "99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lineperc(&["table", "--qmax", "4", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lineperc(&["construct", "hyperoval", "--q", "5"])
            .status
            .code(),
        Some(2)
    );
    // unknown flag and missing file
    assert_eq!(lineperc(&["plane", "--order", "5"]).status.code(), Some(2));
    assert_eq!(
        lineperc(&["percolate", "--plane", "/nonexistent.json", "--r", "2"])
            .status
            .code(),
        Some(2)
    );
    // a construction that cannot be verified is not the caller's fault
    let out = lineperc(&["construct", "t3", "--q", "11", "--r", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn stochastic_commands_need_a_seed() {
    let out = lineperc(&[
        "search",
        "time",
        "--q",
        "5",
        "--r",
        "4",
        "--strategy",
        "hillclimb",
        "--max-nodes",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = lineperc(&["mc", "bottleneck", "--q", "5", "--r", "3", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lineperc(&["table", "--qmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeded_runs_repeat_byte_for_byte() {
    let runs = [
        vec![
            "mc",
            "threshold",
            "--q",
            "7",
            "--r",
            "3",
            "--grid",
            "0.5,1,2",
            "--relative",
            "--trials",
            "40",
            "--seed",
            "3",
        ],
        vec![
            "mc",
            "bottleneck",
            "--q",
            "7",
            "--r",
            "3",
            "--trials",
            "20",
            "--seed",
            "3",
        ],
        vec![
            "mc", "uniform", "--q", "7", "--r", "3", "--m", "12", "--trials", "40", "--seed", "3",
            "--format", "json",
        ],
        vec![
            "construct",
            "min-perc",
            "--q",
            "7",
            "--r",
            "3",
            "--seed",
            "9",
        ],
        vec!["table", "--qmax", "3", "--seed", "1", "--format", "csv"],
    ];
    for args in runs {
        let a = lineperc(&args);
        let b = lineperc(&args);
        assert!(
            a.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let args = [
        "search",
        "time",
        "--q",
        "5",
        "--r",
        "4",
        "--strategy",
        "hillclimb",
        "--max-nodes",
        "20000",
        "--seed",
        "7",
    ];
    let mut a = json(&lineperc(&args));
    let mut b = json(&lineperc(&args));
    a["seconds"] = Value::Null;
    b["seconds"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_mc_output() {
    let base = [
        "mc",
        "bottleneck",
        "--q",
        "7",
        "--r",
        "3",
        "--trials",
        "30",
        "--seed",
        "5",
    ];
    let one = lineperc(&base);
    let mut args = base.to_vec();
    args.extend(["--threads", "4"]);
    let four = lineperc(&args);
    let body = |o: &Output| {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    assert_eq!(body(&one), body(&four));
}

#[test]
fn csv_outputs_have_config_preamble() {
    let out = lineperc(&[
        "mc",
        "threshold",
        "--q",
        "5",
        "--r",
        "3",
        "--grid",
        "0,1",
        "--trials",
        "5",
        "--seed",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "# seed=1"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "p,trials,percolated,estimate,ci_low,ci_high");
    assert!(rows[1].starts_with("0,5,0,"));
    assert!(rows[2].starts_with("1,5,5,"));

    let out = lineperc(&[
        "mc",
        "bottleneck",
        "--q",
        "5",
        "--r",
        "2",
        "--trials",
        "4",
        "--seed",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "trial,tau_r,tau_perc,equal"));
}

#[test]
fn table_text_layout() {
    let out = lineperc(&["table", "--qmax", "3", "--seed", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with('q') && rows[1].starts_with('r') && rows[2].starts_with('T'));
    assert!(!rows[2].contains(">="), "q = 3 cells are exact");
}

#[test]
fn bounds_report_all_parameters() {
    let out = json(&lineperc(&["bounds", "--q", "11", "--r", "4"]));
    assert_eq!(out["m_r"]["exact"], 10);
    assert!(out["M_r"]["lower"]["cite"].is_string());
    assert_eq!(out["T_r"]["exact"], 4);
}
