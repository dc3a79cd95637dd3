use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn expsys(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsys"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("EXPSYS_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> Value {
    let o = expsys(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&std::fs::read_to_string(out.join("results.json")).unwrap()).unwrap()
}

fn column(out: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(out.join("results.csv")).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).expect("column");
    r.records().map(|rec| rec.unwrap()[idx].parse().unwrap()).collect()
}

fn failure(args: &[&str], out: &Path) -> (i32, Value) {
    let o = expsys(args, out);
    let err = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).expect("error json");
    (o.status.code().unwrap(), err)
}

#[test]
fn density_of_half_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let json = ok(&["density", "--generator", "lattice:0.5", "--rmax", "4096"], dir.path());
    assert_eq!(json["statement"], "beurling-density");
    let plateau = json["result"]["plateau"].as_f64().unwrap();
    assert!((plateau - 2.0).abs() <= 1.0 / 4096.0, "{plateau}");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn sharpness_column_settles_on_target() {
    let dir = tempfile::tempdir().unwrap();
    let json = ok(&["sharpness", "--d", "0.5", "--eps", "0.2", "--N", "64", "--C", "1.0"], dir.path());
    let target = 0.5 * (8.0f64 / 7.0).sqrt();
    assert!((json["result"]["target_residual"].as_f64().unwrap() - target).abs() < 1e-15);
    assert_eq!(json["result"]["alpha"], "1/7");
    let residual = column(dir.path(), "residual");
    assert!(residual.windows(2).all(|w| w[1] <= w[0]), "{residual:?}");
    let last = *residual.last().unwrap();
    assert!(last >= target * 0.99 && (last - target) / target < 0.01, "{last}");
}

#[test]
fn sparse_lattice_cannot_complete_the_interval() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["certify-comp", "--set", "[[0,1]]", "--generator", "lattice:2", "--Cgrid", "1,4,16", "--R", "64"];
    ok(&args, dir.path());
    let residual = column(dir.path(), "residual");
    assert_eq!(residual.len(), 3);
    assert!(residual.iter().all(|&r| r >= 0.70), "{residual:?}");
}

#[test]
fn seeded_runs_reproduce_byte_for_byte() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["stability", "--set", "[[0,1]]", "--generator", "integers", "--R", "10", "--eta", "0.01", "--seed", "7"];
    ok(&args, a.path());
    ok(&args, b.path());
    for file in ["results.csv", "results.json"] {
        assert_eq!(
            std::fs::read(a.path().join(file)).unwrap(),
            std::fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
    let hash = |p: &Path| -> Value {
        let m: Value = serde_json::from_str(&std::fs::read_to_string(p.join("manifest.json")).unwrap()).unwrap();
        m["config_sha256"].clone()
    };
    assert_eq!(hash(a.path()), hash(b.path()));
    let ratios = column(a.path(), "ratio");
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r < 50.0), "{ratios:?}");

    let c = tempfile::tempdir().unwrap();
    let mut other = args;
    other[10] = "8";
    ok(&other, c.path());
    assert_ne!(hash(a.path()), hash(c.path()));
    assert_ne!(column(c.path(), "ratio"), ratios);
}

#[test]
fn randomized_runs_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = failure(&["subspace-lemma", "--d", "0.3", "--gamma", "2"], dir.path());
    assert_eq!(code, 2);
    assert_eq!(err["error"], "validation");
    assert_eq!(err["field"], "seed");
    assert!(!dir.path().join("results.csv").exists());
}

#[test]
fn subspace_lemma_bounds_hold() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["subspace-lemma", "--N", "32", "--d", "0.3", "--gamma", "2", "--instances", "5", "--probes", "200", "--seed", "3"];
    let json = ok(&args, dir.path());
    assert_eq!(json["result"]["all_hold"], true);
    let probe = column(dir.path(), "probe_min_gain");
    let exact = column(dir.path(), "min_gain");
    assert!(probe.iter().zip(&exact).all(|(p, e)| p + 1e-12 >= *e));
}

#[test]
fn invalid_inputs_exit_two_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["gram", "--set", "[[1,0]]", "--generator", "integers"],
        &["gram", "--set", "[[0,1]]", "--generator", "lattice:-1"],
        &["density", "--generator", "integers", "--eta", "0.1"],
        &["stability", "--set", "[[0,1]]", "--generator", "integers", "--eta", "0.5", "--seed", "1"],
        &["no-such-command"],
    ];
    for args in cases {
        let (code, err) = failure(args, dir.path());
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(err["error"], "validation", "{args:?}");
    }
}

#[test]
fn config_file_supplies_nested_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("duality.json");
    std::fs::write(
        &cfg,
        r#"{"set":{"intervals":[["1/2",1]]},"generator":{"kind":"named","name":"neg_odd_even_zero"},"radii":[4,8]}"#,
    )
    .unwrap();
    let out = dir.path().join("run");
    let json = ok(&["duality", "--config", cfg.to_str().unwrap(), "--M", "4"], &out);
    assert_eq!(json["statement"], "complement-duality");
    assert_eq!(json["result"]["rows"].as_array().unwrap().len(), 2);
    assert_eq!(json["config"]["minimality_budget"], 4.0);
    let frame = column(&out, "A_frame");
    assert!(frame[1] < frame[0]);

    std::fs::write(&cfg, r#"{"radii":[4],"unknown_key":1}"#).unwrap();
    let (code, err) = failure(&["duality", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!((code, err["field"].as_str()), (2, Some("config")));
}

#[test]
fn coefficient_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "certify-min",
        "--set",
        r#"[[0,"1/2"]]"#,
        "--generator",
        "integers",
        "--R",
        "8",
        "--lambda",
        "0",
        "--Mgrid",
        "1,4",
        "--dump-coefficients",
    ];
    ok(&args, dir.path());
    let residual = column(dir.path(), "residual");
    assert!(residual[1] <= residual[0]);
    let mut r = csv::Reader::from_path(dir.path().join("coefficients/minimality_1.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["index", "frequency", "re", "im"]);
    assert_eq!(r.records().count(), 17);
}

#[test]
fn projection_integral_recovers_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let json = ok(&["projection-integral", "--set", "[[0,1]]", "--generator", "integers", "--R", "1", "--T", "2000"], dir.path());
    let v = json["result"]["value"].as_f64().unwrap();
    assert_eq!(json["result"]["dim"], 3);
    assert!((v - 3.0).abs() < 0.02, "{v}");
}

#[test]
fn tradeoffs_and_examples() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["tradeoff-min", "--set", r#"[[0,"1/2"]]"#, "--generator", "integers", "--radii", "8,16", "--Mgrid", "1,4"], dir.path());
    assert_eq!(column(dir.path(), "residual").len(), 4);
    ok(&["tradeoff-comp", "--set", "[[0,1]]", "--generator", "lattice:2", "--radii", "16,32", "--Cgrid", "1,4"], dir.path());
    assert!(column(dir.path(), "residual").iter().all(|&r| r >= 0.677));
    ok(&["bessel", "--set", "[[0,1]]", "--generator", "lattice:0.5", "--radii", "4,8"], dir.path());
    assert!(column(dir.path(), "bessel_bound").iter().all(|&b| b <= 2.0 + 1e-9));
    let json = ok(&["examples", "--rmax", "512"], dir.path());
    let seqs = json["result"]["sequences"].as_array().unwrap();
    assert_eq!(seqs.len(), 4);
    assert!((seqs[0]["upper_density"].as_f64().unwrap() - 0.5).abs() <= 1.0 / 512.0);
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_expsys"))
        .args(["density", "--generator", "integers", "--out"])
        .arg(dir.path())
        .env("EXPSYS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
