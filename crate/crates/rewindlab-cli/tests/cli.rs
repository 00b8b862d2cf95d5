use std::path::PathBuf;
use std::process::{Command, Output};

use rewindlab::noise::{make_channel, ChannelKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rewindlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rewindlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn closed_and_twirl_rows() {
    let o = run(&["fidelity", "--family", "conv", "--q", "2", "--n", "3", "--target", "1", "--method", "closed,twirl"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = records(&stdout(&o));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(&r[6], "0.600000000000000");
    }
    assert_eq!(&rows[0][7], "3/5");
}

#[test]
fn local_shallow_circuit_is_restored() {
    let o = run(&["fidelity", "--family", "local", "--q", "2", "--n", "6", "--m", "4", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(&records(&stdout(&o))[0][7], "1");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["fidelity", "--family", "conv", "--q", "2"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--family", "conv", "--q", "2", "--n", "3..5", "--method", ""]).status.code(), Some(1));
    assert_eq!(run(&["fidelity", "--family", "local", "--q", "2", "--n", "5"]).status.code(), Some(1));
    assert_eq!(run(&["fidelity", "--family", "conv", "--q", "2", "--n", "4", "--target", "pair:x"]).status.code(), Some(1));
}

#[test]
fn computation_errors_exit_with_two() {
    let o = run(&["fidelity", "--family", "hybrid", "--q", "2", "--n", "40", "--m", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("combinatorial blowup"));
}

#[test]
fn hybrid_sweep_decays_at_the_expected_rate() {
    let o = run(&["sweep", "--family", "hybrid", "--q", "2", "--n", "4..12", "--m", "2", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = records(&stdout(&o));
    assert_eq!(rows.len(), 9);
    // 1 - F_n = 0.8^n (a + b n) at m = 2, so the rescaled column is affine.
    let scaled: Vec<f64> = rows
        .iter()
        .map(|r| (1.0 - r[6].parse::<f64>().unwrap()) / 0.8f64.powi(r[2].parse::<i32>().unwrap()))
        .collect();
    for w in scaled.windows(3) {
        assert!((w[2] - 2.0 * w[1] + w[0]).abs() < 1e-10, "{w:?}");
    }
    assert!((scaled[1] - scaled[0]).abs() > 1e-3);
}

#[test]
fn local_deep_sweep_approaches_one_half() {
    let o = run(&["sweep", "--family", "local", "--q", "2", "--n", "4", "--m", "4..20:2", "--method", "closed", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let v: Vec<f64> = rows.iter().map(|r| r["value"].as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(v.len(), 9);
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    assert!(v.iter().all(|&x| x > 0.5) && v[8] - 0.5 < 0.01);
}

#[test]
fn same_seed_gives_identical_files() {
    let args = |path: &str| {
        vec![
            "sweep".to_string(),
            "--family=conv".into(),
            "--q=2".into(),
            "--n=3..4".into(),
            "--method=closed,mc".into(),
            "--samples=500".into(),
            "--seed=11".into(),
            format!("--output={path}"),
        ]
    };
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    for p in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_rewindlab")).args(args(p.to_str().unwrap())).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(records(std::str::from_utf8(&x).unwrap())[1][9].to_string(), "11");
}

#[test]
fn path_backends_print_the_same_count() {
    let o = run(&["paths", "--from", "0,0", "--to", "2,2", "--s", "-1", "--t", "1", "--method", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = records(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[1] == "4"));
}

#[test]
fn noise_stats_from_a_channel_file() {
    let path = scratch("depol.json");
    std::fs::write(&path, make_channel(ChannelKind::Depolarizing(0.04), 2).unwrap().to_json()).unwrap();
    let o = run(&["noise-stats", "--channel", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&stdout(&o))[0];
    assert_eq!(&r[2], "0.970000000000000");
    assert!((r[3].parse::<f64>().unwrap() - 0.9412).abs() < 1e-12);
}

#[test]
fn compare_passes_and_fails() {
    let o = run(&["compare", "--family", "conv", "--q", "2", "--n", "5", "--target", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let dev: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(dev < 1e-9, "{last}");

    let o = run(&["compare", "--family", "conv", "--q", "2", "--n", "4", "--method", "closed,mc", "--samples", "200", "--tolerance", "1e-12"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_rewindlab"))
        .args(["fidelity", "--family", "conv", "--q", "2", "--n", "4", "--method", "twirl"])
        .env("REWINDLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_rewindlab"))
        .args(["fidelity", "--family", "conv", "--q", "2", "--n", "4"])
        .env("REWINDLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
