//! End-to-end runs of the `asymrate` binary.

use std::path::Path;
use std::process::{Command, Output};

use asymrate::operator::{read_matrix_json, write_matrix_json, MatrixJson};
use asymrate::sequences::{poisson, write_sequence_csv};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymrate")).args(args).output().expect("binary runs")
}

fn json_at(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn figure1_csv_starts_with_config_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = run(&["--seed", "3", "figure1", "--p", "0.1", "--q", "0.25,0.5,0.75", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(header["command"], "figure1");
    assert_eq!(header["seed"], 3);
    assert_eq!(lines.next().unwrap(), "q,sld_bound,wyd_bound,wyd_limit_bound");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!(r[2] <= r[1] + 1e-12);
        assert!((r[3] - (9.0 - 7.0 * r[0]) / 4.0).abs() < 1e-12);
    }
    assert!((rows[1][1] - rows[1][2]).abs() < 1e-12);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "--suite", "skew"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "channels", "--inject-noncovariant"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["figure1"]).status.code(), Some(2));
    assert_eq!(run(&["figure1", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn config_file_fills_missing_flags_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("fig.csv");
    std::fs::write(&cfg, format!("# figure settings\np = 0.3\nq = 0.5,0.6\nout = {}\n", s(&out))).unwrap();
    let o = run(&["--config", s(&cfg), "figure1", "--q", "0.2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let data: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(data.len(), 1);
    assert!(data[0].starts_with("0.2,"));
    assert!(text.lines().next().unwrap().contains("\"p\":0.3"));
}

#[test]
fn skew_reads_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let (state, ham, out) = (dir.path().join("rho.json"), dir.path().join("h.json"), dir.path().join("r.json"));
    let rho = asymrate::reference::qutrit_mixture(0.3).unwrap();
    let h = asymrate::reference::qutrit_hamiltonian();
    write_matrix_json(rho.matrix(), std::fs::File::create(&state).unwrap()).unwrap();
    write_matrix_json(h.matrix(), std::fs::File::create(&ham).unwrap()).unwrap();
    let o = run(&["skew", "--state", s(&state), "--hamiltonian", s(&ham), "--f", "wyd:p=0.3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_at(&out);
    let expect = asymrate::reference::wyd_mixture_closed_form(0.3, 0.3);
    assert!((v["result"]["value"].as_f64().unwrap() - expect).abs() < 1e-10);
    assert_eq!(v["config"]["command"], "skew");
}

#[test]
fn skew_rejects_malformed_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bad.json");
    std::fs::write(&state, r#"{"dim": 2, "re": [1, 0, 0, 1], "im": [0, 0, 0, 0]}"#).unwrap();
    let o = run(&["skew", "--state", s(&state), "--preset", "coherence-bit"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["skew", "--state", s(&state), "--hamiltonian", s(&state)]);
    assert_eq!(o.status.code(), Some(2), "trace-2 matrix is not a state");
}

#[test]
fn maxmin_from_truncated_poisson_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (dist, out) = (dir.path().join("p.csv"), dir.path().join("m.json"));
    write_sequence_csv(&poisson(0.5, 60), std::fs::File::create(&dist).unwrap()).unwrap();
    let o = run(&["maxmin", "--dist", s(&dist), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json_at(&out)["result"];
    assert!((r["f_max"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-3);
    assert!((r["f_min"].as_f64().unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn smooth_writes_witnesses_within_the_ball() {
    let dir = tempfile::tempdir().unwrap();
    let (wit, out) = (dir.path().join("w.json"), dir.path().join("s.json"));
    let o = run(&[
        "smooth", "--preset", "qutrit-mixture:0.4", "--eps", "0.05,0.1", "--restarts", "2", "--witness", s(&wit),
        "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json_at(&out)["result"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let eps = r["epsilon"].as_f64().unwrap();
        assert!(r["witness_distance"].as_f64().unwrap() <= eps + 1e-9);
        assert!(r["value"].as_f64().unwrap() <= r["unsmoothed"].as_f64().unwrap());
    }
    let ws: Vec<MatrixJson> = serde_json::from_str(&std::fs::read_to_string(&wit).unwrap()).unwrap();
    assert_eq!(ws.len(), 2);
    let m = ws[0].to_matrix().unwrap();
    assert!((m.trace().re - 1.0).abs() < 1e-9);
    let text = serde_json::to_string(&ws[1]).unwrap();
    assert_eq!(read_matrix_json(text.as_bytes()).unwrap().nrows(), 3);
}

#[test]
fn rates_for_coherence_bit() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = (dir.path().join("r.json"), dir.path().join("r.csv"));
    let o = run(&[
        "rates", "--m", "2..3", "--eps", "0.2,0.1", "--restarts", "2", "--out", s(&out), "--csv", s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json_at(&out)["result"];
    assert!(r["cost_lower_bound"].as_f64().unwrap() + 1e-12 >= r["dist_upper_bound"].as_f64().unwrap());
    assert!(!r["report"]["caveat"].as_str().unwrap().is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# config: "));
    assert_eq!(text.lines().nth(1).unwrap(), "m,eps=0.2,eps=0.1");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn rates_reject_dimension_blowup() {
    let o = run(&["rates", "--family", "iid:qutrit-psi1", "--m", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn example_noniid_matches_variance_formula() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n.csv");
    let o = run(&["example-noniid", "--m", "4,9,100", "--restarts", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < 1e-8);
    }
    assert!(rows[2][6].is_empty(), "no smoothing beyond the qutrit cap");
}
