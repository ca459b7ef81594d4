use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use compsemi::operators::{composition_matrix, read_matrix_binary, Basis};
use jsonschema::{Retrieve, Uri};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compsemi"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

struct SchemaFiles;

impl Retrieve for SchemaFiles {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.path().as_str().rsplit('/').next().unwrap_or_default().to_string();
        let text = std::fs::read_to_string(schema_dir().join(name))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn assert_valid(schema_file: &str, instance: &Value) {
    let text = std::fs::read_to_string(schema_dir().join(schema_file)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::options()
        .with_retriever(SchemaFiles)
        .build(&schema)
        .unwrap_or_else(|e| panic!("{schema_file}: {e}"));
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}");
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn verify_measure_passes_and_matches_schema() {
    let out = run(&["verify-measure"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_valid("verification_run.schema.json", &v);
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 25);
}

#[test]
fn starved_cutoff_fails_with_tail_diagnostics() {
    let out = run(&["verify-measure", "--y-cutoff", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL total_mass"), "{stderr}");
    assert!(stderr.contains("tail_estimate="), "{stderr}");
    let v = stdout_json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["reports"][0]["tail_estimate"].as_f64().unwrap() > 1e-4);
}

#[test]
fn malformed_grid_is_a_usage_error() {
    assert_eq!(run(&["verify-kernel-ip", "--w", "1+"]).status.code(), Some(2));
    assert_eq!(run(&["verify-kernel-ip", "--s", "0.5,,0.25"]).status.code(), Some(2));
    assert_eq!(run(&["verify-kernel-ip", "--s", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["verify-measure", "--nodes-per-unit", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn kernel_ip_small_grid_in_csv() {
    let out = run(&["verify-kernel-ip", "--s", "0.5", "--t", "0.25", "--w", "1+1i,-0.3+2i", "--n", "200", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "identity");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[8] == "true"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "y_cutoff = 2\nformat = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(run(&["--config", cfg, "verify-measure"]).status.code(), Some(1));
    let out = run(&["--config", cfg, "verify-measure", "--y-cutoff", "40", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["spec"]["y_cutoff"], 40.0);
    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "verify-measure"]).status.code(), Some(2));
}

#[test]
fn out_flag_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sech.json");
    let out = run(&["verify-sech", "--c", "2", "--threads", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("verification_run.schema.json", &v);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn every_verifier_validates() {
    for args in [
        vec!["verify-eigen", "--n", "2,20"],
        vec!["verify-mean", "--a", "0.5", "--b", "0.5,1"],
        vec!["verify-three-lines", "--a", "0.5"],
        vec!["verify-norm-bound", "--random", "2"],
        vec!["verify-separation", "--s", "0.5", "--m", "1", "--y0", "1", "--samples", "3"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_valid("verification_run.schema.json", &stdout_json(&out));
    }
}

#[test]
fn spectrum_json_and_csv() {
    let out = run(&["spectrum", "--s", "0.25", "--y", "1", "--ell", "1,2,10", "--n", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_valid("spectrum.schema.json", &v);
    assert_eq!(v["radius"], 2.0);
    assert_eq!(v["exclusion_bounds"].as_array().unwrap().len(), 5);

    let out = run(&["spectrum", "--s", "0.25", "--ell", "1,20", "--n", "200", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# s=0.25 radius=2"));
    assert_eq!(lines.next(), Some("s,y,ell,N,numeric,analytic,lower,upper,tail_mass,warning"));
    let warnings: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(warnings, ["true", "true"]);
}

#[test]
fn joint_shape_curve_and_membership() {
    let out = run(&["joint", "--q", "1,3/2", "--beta", "1", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_valid("joint.schema.json", &v);
    assert_valid("joint_shape.schema.json", &v["shape"]);
    assert_eq!(v["shape"]["lattice_basis"], serde_json::json!([[3, -2]]));

    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "theta_1,theta_2\n0,0\n1,2\n0.5,0.75\n").unwrap();
    let out = run(&["joint", "--q", "1,3/2", "--points", pts.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let member: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(member, ["true", "false", "true"]);

    std::fs::write(&pts, "0,0,0\n").unwrap();
    let out = run(&["joint", "--q", "1,3/2", "--points", pts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["joint", "--q", "1,3/2", "--format", "csv", "--samples", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("y,re_1,im_1,re_2,im_2"));
}

#[test]
fn symbol_output_is_byte_exact() {
    let out = run(&["symbol", "C(0.25)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_valid("symbol.schema.json", &v);
    let compact = serde_json::json!({ "symbol": v["symbol"], "point": v["point"] });
    assert_eq!(
        compact.to_string(),
        r#"{"point":[0.0,0.0],"symbol":[{"freq":1.3862943611198906,"im":0.0,"re":2.0}]}"#
    );
    let raw = String::from_utf8(out.stdout).unwrap();
    assert!(raw.contains("\"freq\": 1.3862943611198906"));

    let out = run(&["symbol", "I + 0.5*C(0.25)C*(0.5)", "--inclusion", "--n", "100", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_valid("symbol.schema.json", &v);
    assert_valid("inclusion_report.schema.json", &v["inclusion"]);

    let out = run(&["symbol", "C(0.25"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn dump_matrix_binary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    let out = run(&["dump-matrix", "--s", "0.5", "--n", "30", "--binary", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(&path).unwrap();
    let back = read_matrix_binary(bytes.as_slice(), Basis::Monomial).unwrap();
    assert_eq!(back.entries(), composition_matrix(0.5, 30).unwrap().entries());

    assert_eq!(run(&["dump-matrix", "--s", "0.5", "--n", "3", "--binary"]).status.code(), Some(2));
    let out = run(&["dump-matrix", "--word", "C(0.5)C*(0.25)", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 10);
}

#[test]
fn schemas_reject_malformed_documents() {
    let text = std::fs::read_to_string(schema_dir().join("verification_run.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaFiles).build(&schema).unwrap();
    let out = run(&["verify-sech", "--c", "1", "--u", "0"]);
    let mut v = stdout_json(&out);
    assert!(validator.is_valid(&v));
    v["reports"][0]["closed_form"] = serde_json::json!([1.0]);
    assert!(!validator.is_valid(&v));
    v["reports"][0]["closed_form"] = serde_json::json!([1.0, 0.0]);
    v["reports"][0]["extra"] = serde_json::json!(true);
    assert!(!validator.is_valid(&v));
}

#[test]
fn kernel_ip_near_the_boundary() {
    let out = run(&["verify-kernel-ip", "--w=-0.45,-0.45+0.5i", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(run(&["verify-kernel-ip", "--w=-0.49", "--n", "50"]).status.code(), Some(1));
    let out = run(&["verify-kernel-ip", "--w=-0.49", "--n", "50", "--nodes-per-unit", "32"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn single_exponent_is_a_circle() {
    let v = stdout_json(&run(&["joint", "--q", "1", "--samples", "2"]));
    assert_valid("joint.schema.json", &v);
    assert!((v["shape"]["period"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(v["shape"]["lattice_basis"], serde_json::json!([]));
    let v = stdout_json(&run(&["joint", "--q", "1,3/2", "--beta", "1", "--samples", "2"]));
    assert!((v["shape"]["period"].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn generator_times_adjoint_is_constant() {
    let v = stdout_json(&run(&["symbol", "C(0.25)C*(0.25)"]));
    assert_eq!(v["symbol"], serde_json::json!([{ "freq": 0.0, "re": 4.0, "im": 0.0 }]));
    assert_eq!(v["point"], serde_json::json!([0.0, 0.0]));
    let v = stdout_json(&run(&["symbol", "I"]));
    assert_eq!(v["symbol"], serde_json::json!([{ "freq": 0.0, "re": 1.0, "im": 0.0 }]));
    assert_eq!(v["point"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn analytic_residuals_decrease_in_ell() {
    let v = stdout_json(&run(&["spectrum", "--s", "0.25", "--y", "1", "--n", "100"]));
    let rows = v["residuals"].as_array().unwrap();
    assert_eq!(rows.last().unwrap()["ell"], 200);
    let analytic: Vec<f64> = rows.iter().map(|r| r["analytic"].as_f64().unwrap()).collect();
    assert!(analytic.windows(2).all(|w| w[1] < w[0]), "{analytic:?}");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-separation", "--s", "0.5", "--m", "0,1", "--samples", "4", "--seed", "3"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    let c = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}
