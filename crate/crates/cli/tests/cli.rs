use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

use cscx_core::ale_models::solve_simanca_ode;
use cscx_core::neck_gluing::{solve_matching, GluingConfig};

fn cscx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cscx"))
        .args(args)
        .current_dir(dir)
        .env_remove("CSCX_THREADS")
        .output()
        .expect("spawn cscx")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let (header, rows) = csv_rows(path);
    let j = header.iter().position(|h| h == name).unwrap();
    rows.into_iter().map(|r| r[j].clone()).collect()
}

/// Every file in `dir` except manifests is listed with a correct digest.
fn assert_manifest_complete(dir: &Path, manifest: &str) {
    let man = json(&dir.join(manifest));
    let mut listed: Vec<String> = man["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| {
            let name = o["path"].as_str().unwrap().to_string();
            let bytes = fs::read(dir.join(&name)).unwrap();
            assert_eq!(o["sha256"].as_str().unwrap(), format!("{:x}", Sha256::digest(&bytes)), "{name}");
            assert_eq!(o["bytes"].as_u64().unwrap() as usize, bytes.len());
            name
        })
        .collect();
    let mut present: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| !n.ends_with(".manifest.json"))
        .collect();
    listed.sort();
    present.sort();
    assert_eq!(listed, present);
    assert!(man["config"].is_object());
    assert!(man["inputs"]["config"].as_str().unwrap().len() == 64);
}

#[test]
fn simanca_writes_profile_fit_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        cscx(dir.path(), &["simanca", "--m", "3", "--smax", "1e4", "--tol", "1e-10", "--check", "--out", "p.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&dir.path().join("p.json"));
    for key in ["m", "lambda", "s_max", "tol", "ode_residual_max", "nodes"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert!(doc["ode_residual_max"].as_f64().unwrap() <= 1e-9);
    let lambda = solve_simanca_ode(3, 1e4, 1e-10).unwrap().lambda();
    assert_eq!(doc["lambda"].as_f64().unwrap(), lambda);
    let fit = json(&dir.path().join("p.fit.json"));
    for key in ["a", "b", "c", "remainder_order", "window"] {
        assert!(fit.get(key).is_some(), "missing {key}");
    }
    // Leading decay coefficient of the unit model for m = 3 is −2.
    assert!((fit["c"].as_f64().unwrap() + 2.0).abs() < 0.05, "{}", fit["c"]);
    let (header, rows) = csv_rows(&dir.path().join("p.asymptotics.csv"));
    assert_eq!(header, ["radius", "excess", "remainder"]);
    assert_eq!(rows.len(), 60);
    assert_manifest_complete(dir.path(), "p.manifest.json");
}

#[test]
fn simanca_rejects_dimension_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = cscx(dir.path(), &["simanca", "--m", "2"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "no files on failure");
}

#[test]
fn root_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&cscx(d, &["roots", "--m", "3", "--gamma-max", "4", "--out", "t.csv"])), 0);
    let (header, rows) = csv_rows(&d.join("t.csv"));
    assert_eq!(header, ["gamma", "root1", "root2", "root3", "root4"]);
    let mut g0: Vec<i64> = rows[0][1..].iter().map(|v| v.parse().unwrap()).collect();
    g0.sort();
    assert_eq!((rows[0][0].as_str(), g0), ("0", vec![-4, -2, 0, 2]));
    assert_eq!(rows.len(), 5);

    assert_eq!(code(&cscx(d, &["roots", "--m", "3", "--group", "z2", "--gamma-max", "4", "--out", "z.csv"])), 0);
    let gammas: Vec<u32> = column(&d.join("z.csv"), "gamma").iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(gammas, [0, 2, 4]);

    assert_eq!(code(&cscx(d, &["roots", "--m", "2", "--out", "m2.csv"])), 0);
    let (_, rows) = csv_rows(&d.join("m2.csv"));
    let zeros = rows[0][1..].iter().filter(|v| *v == "0").count();
    assert_eq!(zeros, 2, "doubled 0 root from γ = 0");

    assert_eq!(code(&cscx(d, &["roots", "--m", "3", "--group", "q7"])), 2);
}

#[test]
fn glue_report_meets_tolerance_and_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = cscx(dir.path(), &["glue", "--m", "2", "--ale", "burns", "--eps", "1e-2", "--out", "run.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("run.json"));
    let mismatch = report["mismatch"].as_array().unwrap();
    assert_eq!(mismatch.len(), 4);
    assert!(mismatch.iter().all(|v| v.as_f64().unwrap().abs() <= 1e-9));
    assert!(report["iterations"].as_u64().unwrap() > 0);
    assert_eq!(report["config"]["ale"], "burns");
    let lib = solve_matching(&GluingConfig::new(2, cscx_core::ale_models::AleKind::Burns, 1e-2)).unwrap();
    assert_eq!(report["nu"].as_f64().unwrap(), lib.nu);
    assert_manifest_complete(dir.path(), "run.manifest.json");
}

#[test]
fn glue_with_explicit_theta() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["glue", "--m", "2", "--ale", "burns", "--a", "0.5", "--theta", "0.75", "--eps"];
    let run = |eps: &str, out: &str| {
        let mut v = args.to_vec();
        v.extend([eps, "--out", out]);
        cscx(dir.path(), &v)
    };
    let out = run("1e-4", "t.json");
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("t.json"));
    assert!((report["r_eps"].as_f64().unwrap() - 1e-3).abs() < 1e-17);
    assert!((report["R_eps"].as_f64().unwrap() - 10.0).abs() < 1e-12);
    assert_eq!(report["config"]["neck_exponent"].as_f64().unwrap(), 0.75);
    assert!(report["mismatch"].as_array().unwrap().iter().all(|v| v.as_f64().unwrap().abs() <= 1e-9));
    // At larger ε this exponent leaves the matching map non-contracting:
    // a numerical failure, reported without output.
    let out = run("1e-2", "d.json");
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("contraction"));
    assert!(!dir.path().join("d.json").exists());
}

#[test]
fn glue_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["glue", "--m", "3", "--ale", "calabi", "--eps", "3e-2", "--out"];
    for name in ["a.json", "b.json"] {
        let mut v = args.to_vec();
        v.push(name);
        assert_eq!(code(&cscx(dir.path(), &v)), 0);
    }
    assert_eq!(fs::read(dir.path().join("a.json")).unwrap(), fs::read(dir.path().join("b.json")).unwrap());
}

#[test]
fn sweep_reports_slope_and_records_failures_in_table() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        cscx(dir.path(), &["sweep", "--m", "2", "--ale", "burns", "--eps", "1e-1,3e-2,1e-2,3e-3", "--out", "s.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let slopes = json(&dir.path().join("s.slopes.json"));
    let nu_slope = slopes["nu_slope"].as_f64().unwrap();
    assert!((nu_slope - 4.0).abs() <= 0.5, "ν slope {nu_slope}");
    let status = column(&dir.path().join("s.csv"), "status");
    assert_eq!(status.len(), 4);
    assert_eq!(slopes["converged"].as_u64().unwrap() as usize, status.iter().filter(|s| *s == "ok").count());
    assert!(status.iter().filter(|s| *s == "ok").count() >= 3);
    assert_manifest_complete(dir.path(), "s.manifest.json");
}

#[test]
fn sweep_with_every_point_failing_exits_numerical() {
    let dir = tempfile::tempdir().unwrap();
    let out = cscx(dir.path(), &["sweep", "--m", "2", "--ale", "burns", "--eps", "1e-1", "--out", "f.csv"]);
    assert_eq!(code(&out), 3);
    // The table is still written.
    assert!(column(&dir.path().join("f.csv"), "status")[0].starts_with("failed"));
}

#[test]
fn scal_sweep_is_decreasing() {
    let dir = tempfile::tempdir().unwrap();
    let out = cscx(dir.path(), &["scal", "--m", "2", "--vol", "1", "--chern", "0", "--weights", "1", "--out", "c.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, _) = csv_rows(&dir.path().join("c.csv"));
    assert_eq!(&header[..4], ["eps", "volume", "chern_pair", "s"]);
    let s: Vec<f64> = column(&dir.path().join("c.csv"), "s").iter().map(|v| v.parse().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(s[0], 0.0);
    let mono = json(&dir.path().join("c.monotonicity.json"));
    assert_eq!(mono["decreasing"], true);

    let alias_dir = tempfile::tempdir().unwrap();
    let out = cscx(
        alias_dir.path(),
        &[
            "scal-sweep",
            "--m",
            "2",
            "--vol",
            "1",
            "--chern",
            "0",
            "--weights",
            "1,1",
            "--eps-max",
            "0.3",
            "--out",
            "sweep.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_manifest_complete(dir.path(), "c.manifest.json");
    let eps = column(&alias_dir.path().join("sweep.csv"), "eps");
    assert_eq!(eps.first().unwrap(), "0.0");
    assert_eq!(eps.last().unwrap(), "0.3");
    assert_manifest_complete(alias_dir.path(), "sweep.manifest.json");
}

#[test]
fn verify_accepts_a_rerun_and_detects_changes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let base = ["scal", "--m", "3", "--vol", "2", "--chern", "1", "--weights", "0.5,1", "--out", "v.csv"];
    assert_eq!(code(&cscx(d, &base)), 0);
    let mut verify = base.to_vec();
    verify.push("--verify");
    let out = cscx(d, &verify);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    // Different flags: the recorded config no longer matches.
    let mut other = verify.clone();
    other[6] = "3";
    assert_eq!(code(&cscx(d, &other)), 3);

    // Tampered output.
    let path = d.join("v.monotonicity.json");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push(' ');
    fs::write(&path, text).unwrap();
    assert_eq!(code(&cscx(d, &verify)), 3);

    // No manifest to verify against.
    let mut missing = verify.clone();
    missing[10] = "absent.csv";
    assert_eq!(code(&cscx(d, &missing)), 4);
}

#[test]
fn manifest_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cscx(dir.path(), &["glue", "--m", "2", "--ale", "burns", "--eps", "3e-2", "--a", "0.5"])), 0);
    let man = json(&dir.path().join("run.manifest.json"));
    assert_eq!(man["command"], "glue");
    let cfg: GluingConfig = serde_json::from_value(man["config"]["gluing"].clone()).unwrap();
    assert_eq!(
        cfg,
        GluingConfig { a_weight: 0.5, ..GluingConfig::new(2, cscx_core::ale_models::AleKind::Burns, 3e-2) }
    );
}

#[test]
fn exit_codes_for_bad_input_and_io() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&cscx(d, &["glue", "--m", "2", "--ale", "burns", "--eps", "0.5"])), 2);
    assert_eq!(code(&cscx(d, &["glue", "--m", "3", "--ale", "burns", "--eps", "1e-2"])), 2);
    assert_eq!(code(&cscx(d, &["scal", "--m", "2", "--vol", "-1", "--chern", "0", "--weights", "1"])), 2);
    assert_eq!(code(&cscx(d, &["frobnicate"])), 2);
    fs::write(d.join("file"), "").unwrap();
    assert_eq!(code(&cscx(d, &["roots", "--m", "3", "--out", "file/under/a/file.csv"])), 4);
    let out = Command::new(env!("CARGO_BIN_EXE_cscx"))
        .args(["roots", "--m", "3"])
        .current_dir(d)
        .env("CSCX_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_cscx"))
        .args(["roots", "--m", "3"])
        .current_dir(d)
        .env("CSCX_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}
