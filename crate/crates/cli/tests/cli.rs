//! End-to-end runs of the `semijulia` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semijulia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// Width, height and RGB bytes of a binary PPM.
fn read_ppm(path: &Path) -> (usize, usize, Vec<u8>) {
    let bytes = std::fs::read(path).unwrap();
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        let end = pos + bytes[pos..].iter().position(|b| b.is_ascii_whitespace()).unwrap();
        fields.push(String::from_utf8(bytes[pos..end].to_vec()).unwrap());
        pos = end + 1;
    }
    assert_eq!(fields[0], "P6");
    assert_eq!(fields[3], "255");
    let (w, h) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
    let rgb = bytes[pos..].to_vec();
    assert_eq!(rgb.len(), w * h * 3);
    (w, h, rgb)
}

/// Plane coordinates of the centres of all non-black pixels.
fn marked(path: &Path, window: [f64; 4]) -> (Vec<(f64, f64)>, f64) {
    let (w, h, rgb) = read_ppm(path);
    let px = (window[2] - window[0]) / w as f64;
    let mut points = Vec::new();
    for row in 0..h {
        for col in 0..w {
            let i = 3 * (row * w + col);
            if rgb[i..i + 3] != [0, 0, 0] {
                let re = window[0] + (col as f64 + 0.5) * px;
                let im = window[3] - (row as f64 + 0.5) * (window[3] - window[1]) / h as f64;
                points.push((re, im));
            }
        }
    }
    (points, px)
}

/// Report bytes up to the timings block, which is always last.
fn without_timings(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cut = text.find("\"timings\"").expect("timings block");
    text.as_bytes()[..cut].to_vec()
}

#[test]
fn lemma_commutator_example() {
    let r = report(&["lemma", "commutator", "--j", "2", "--m", "2", "--c", "-1", "--n", "1", "--r", "-5"]);
    assert_eq!(r["results"]["value"], "-21/4");
    assert_eq!(r["results"]["explicit_value"], "-21/4");
    assert_eq!(r["results"]["identity_holds"], true);
    assert_eq!(r["results"]["round_trip_holds"], true);
    assert_eq!(r["config"]["params"]["r0"], "1");
    assert!(r["reproducibility"]["version"].is_string());
}

#[test]
fn lemma_commutator_accepts_fractions() {
    let r = report(&["lemma", "commutator", "--j", "2", "--m", "3", "--c", "-2", "--n", "1", "--r", "0"]);
    assert_eq!(r["results"]["value"], "-1/3");
    let r = report(&["lemma", "commutator", "--j", "3", "--m", "2", "--c", "-3/7", "--n", "2", "--r", "-5/2"]);
    assert_eq!(r["results"]["identity_holds"], true);
}

#[test]
fn lemma_density_example() {
    let r = report(&[
        "lemma", "density", "--j", "2", "--m", "2", "--c", "-1", "--rstar-log", "-1", "--r-prime", "-10", "--n-max", "10",
    ]);
    let res = &r["results"];
    assert_eq!(res["d_n_max"], "2047/1048576");
    assert_eq!(res["gap_within_d_n_max"], true);
    assert_eq!(res["first_limit"], "-11");
    assert_eq!(res["first_stage"].as_array().unwrap().len(), 10);
}

#[test]
fn lemma_circles_and_monomial_examples() {
    let r = report(&["lemma", "circles", "--j", "2", "--delta", "1.5707963"]);
    assert_eq!(r["results"]["n"], 3);
    assert_eq!(r["results"]["radius_ok"], true);
    assert_eq!(r["results"]["covers_circle"], true);

    let r = report(&["lemma", "monomial", "0.5*z^2"]);
    assert_eq!(r["results"]["outcome"], "consistent");
    assert_eq!(r["results"]["j"], 2);
    assert_eq!(r["results"]["a"], serde_json::json!([0.5, 0.0]));

    let r = report(&["lemma", "monomial", "z^2 + 0.1*z^3", "--radii", "0.5"]);
    assert_eq!(r["results"]["outcome"], "violation");
    let spread = r["results"]["modulus_spread"].as_f64().unwrap();
    assert!((spread - 0.025).abs() <= 1e-3);
}

#[test]
fn invalid_lemma_parameters_are_usage_errors() {
    assert_eq!(code(&["lemma", "commutator", "--j", "2", "--m", "2", "--c", "1", "--n", "1", "--r", "-5"]), 2);
    assert_eq!(code(&["lemma", "circles", "--j", "2", "--delta", "9"]), 2);
    assert_eq!(code(&["lemma", "monomial", "z^2 + 1"]), 2);
    assert_eq!(code(&["lemma", "density", "--j", "2", "--m", "2", "--c", "-1", "--r-prime", "-1"]), 2);
    assert_eq!(code(&["lemma", "frobnicate"]), 2);
}

#[test]
fn parse_errors_cite_the_column() {
    let out = run(&["semigroup-julia", "--gen", "z^2 + * 3", "--depth", "1", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn compare_examples() {
    let small = ["--samples", "4000"];
    let verdict = |f: &str, g: &str| {
        let mut args = vec!["compare", "--gen", f, "--gen", g];
        args.extend_from_slice(&small);
        report(&args)["results"].clone()
    };
    assert_eq!(verdict("z^2", "z^4")["verdict"], "equal");
    assert_eq!(verdict("z^2-2", "z^2-2")["verdict"], "equal");
    let distinct = verdict("z^2", "z^2/3");
    assert_eq!(distinct["verdict"], "distinct");
    let w = &distinct["witness"];
    assert!((w["modulus"].as_f64().unwrap() - 3.0).abs() <= 1e-6);
    assert!((w["green_other"].as_f64().unwrap() - 3f64.ln()).abs() <= 1e-3);
    assert_eq!(code(&["compare", "--gen", "z^2"]), 2);
}

#[test]
fn coverage_curves() {
    let r = report(&["coverage", "--gen", "z^2", "--gen", "z^4", "--depth", "8", "--budget", "20000"]);
    let curve = r["results"]["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 9);
    assert!(r["results"]["final_fraction"].as_f64().unwrap() <= 0.10);
    assert_eq!(r["results"]["non_decreasing"], true);

    let r = report(&["coverage", "--gen", "z^2", "--gen", "z^2/3", "--depth", "0", "--budget", "1000"]);
    assert_eq!(r["results"]["curve"].as_array().unwrap().len(), 1);
    assert_eq!(code(&["coverage", "--gen", "z^2", "--depth", "2", "--budget", "100"]), 2);
}

#[test]
fn cloud_commands_report_layers_and_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("cloud.txt");
    let r = report(&[
        "semigroup-julia", "--gen", "z^2", "--gen", "z^2/3", "--depth", "6", "--budget", "5000", "--points",
        pts.to_str().unwrap(),
    ]);
    let res = &r["results"];
    assert_eq!(res["kind"], "semigroup-julia");
    assert_eq!(res["layers"].as_array().unwrap().len(), 7);
    assert!(res["min_modulus"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert!(res["max_modulus"].as_f64().unwrap() <= 3.0 + 1e-6);
    let lines = std::fs::read_to_string(&pts).unwrap().lines().count();
    assert_eq!(lines as u64, res["points"].as_u64().unwrap());

    let r = report(&["invariant-set", "--gen", "z^2", "--gen", "z^2/3", "--depth", "12", "--budget", "5000"]);
    assert_eq!(r["results"]["kind"], "invariant-E");
    assert!(r["results"]["infinite_points"].as_u64().is_some());
}

#[test]
fn reports_are_reproducible() {
    let args = ["invariant-set", "--gen", "z^2-1", "--gen", "z^3/2", "--depth", "5", "--budget", "3000", "--seed", "7"];
    assert_eq!(without_timings(&args), without_timings(&args));
    let args = ["lemma", "density", "--j", "3", "--m", "2", "--c", "-1/2", "--r-prime", "-4", "--n-max", "4"];
    assert_eq!(without_timings(&args), without_timings(&args));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"generators": ["z^2", "z^4"], "depth": 3, "budget": 2000, "seed": 5}"#).unwrap();
    let r = report(&["coverage", "--config", cfg.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(r["config"]["depth"], 2);
    assert_eq!(r["config"]["seed"], 5);
    assert_eq!(r["results"]["curve"].as_array().unwrap().len(), 3);

    std::fs::write(&cfg, "{\n \"depth\": \"two\"\n}").unwrap();
    let out = run(&["coverage", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn io_failures_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/report.json");
    let args = ["lemma", "circles", "--j", "2", "--delta", "6", "--out", missing.to_str().unwrap()];
    assert_eq!(code(&args), 4);
    let missing_cfg = dir.path().join("absent.json");
    assert_eq!(code(&["coverage", "--config", missing_cfg.to_str().unwrap()]), 4);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = run(&["lemma", "circles", "--j", "3", "--delta", "2.0943951023931953", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["results"]["n"], 2);
}

#[test]
fn render_single_unit_circle() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("single.ppm");
    let window = [-1.5, -1.5, 1.5, 1.5];
    let r = report(&[
        "render", "--mode", "single", "--gen", "z^2", "--depth", "12", "--budget", "20000", "--width", "200",
        "--height", "200", "--window", "-1.5,-1.5,1.5,1.5", "--image", img.to_str().unwrap(),
    ]);
    assert_eq!(r["results"]["mode"], "single");
    let (points, px) = marked(&img, window);
    assert!(points.len() > 200, "{} pixels", points.len());
    for (re, im) in points {
        let d = ((re * re + im * im).sqrt() - 1.0).abs();
        assert!(d <= 1.0 * px, "pixel at ({re}, {im}) is {d} from the circle");
    }
}

#[test]
fn render_semigroup_annulus() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("annulus.ppm");
    let window = [-3.5, -3.5, 3.5, 3.5];
    report(&[
        "render", "--mode", "semigroup-julia", "--gen", "z^2", "--gen", "z^2/3", "--depth", "8", "--budget", "20000",
        "--width", "256", "--height", "256", "--image", img.to_str().unwrap(),
    ]);
    let (points, px) = marked(&img, window);
    assert!(!points.is_empty());
    for (re, im) in points {
        let m = (re * re + im * im).sqrt();
        assert!(m >= 1.0 - px && m <= 3.0 + px, "pixel at modulus {m}");
    }
}

#[test]
fn render_empty_cloud_and_escape_mode() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("empty.ppm");
    report(&[
        "render", "--mode", "single", "--gen", "z^2", "--depth", "6", "--budget", "1000", "--width", "32", "--height",
        "16", "--window", "10,10,11,11", "--image", img.to_str().unwrap(),
    ]);
    let (w, h, rgb) = read_ppm(&img);
    assert_eq!((w, h), (32, 16));
    assert!(rgb.iter().all(|&b| b == 0));

    let img = dir.path().join("escape.ppm");
    report(&[
        "render", "--mode", "escape", "--gen", "z^2-1", "--width", "64", "--height", "64", "--image", img.to_str().unwrap(),
    ]);
    let (_, _, rgb) = read_ppm(&img);
    assert!(rgb.contains(&0) && rgb.iter().any(|&b| b > 0));

    assert_eq!(code(&["render", "--mode", "escape", "--gen", "z^2", "--gen", "z^3"]), 2);
}
