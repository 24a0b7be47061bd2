use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use orbitx::algebra::AlgebraId;
use orbitx::formats::Record;
use orbitx::grids::GridKind;
use orbitx::imaging::{load_image, make_hexagon_test_image, save_image, Image};
use orbitx::verify::random_function;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn orbitx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitx"))
        .args(args)
        .env_remove("ORBITX_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write_function(dir: &Path, name: &str, algebra: AlgebraId, m: u32, kind: GridKind, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_function(algebra, m, kind, &mut rng).unwrap();
    let p = path(dir, name);
    std::fs::write(&p, Record::from_function(&f).unwrap().to_csv()).unwrap();
    p
}

#[test]
fn grid_info_lists_ten_points_for_a2_m3() {
    let out = orbitx(&["grid-info", "--algebra", "a2", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.split(',').count() == 7));

    let out = orbitx(&["grid-info", "--algebra", "G2", "--m", "4", "--kind", "e", "--labels", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["algebra"], "G2");
    assert!(doc["labels"].as_array().unwrap().len() > 1);
}

#[test]
fn transform_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [GridKind::C, GridKind::E] {
        let f_path = write_function(dir.path(), "f.csv", AlgebraId::C2, 5, kind, 3);
        let s_path = path(dir.path(), "s.json");
        let b_path = path(dir.path(), "back.csv");
        assert_eq!(code(&orbitx(&["transform", "--in", &f_path, "--out", &s_path, "--format", "json"])), 0);
        assert_eq!(code(&orbitx(&["inv-transform", "--in", &s_path, "--out", &b_path])), 0);
        let f = Record::from_csv(&std::fs::read_to_string(&f_path).unwrap()).unwrap().to_function().unwrap();
        let back = Record::from_csv(&std::fs::read_to_string(&b_path).unwrap()).unwrap().to_function().unwrap();
        let err = f.values.iter().zip(&back.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{kind}: {err}");
    }
}

#[test]
fn input_expectations_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_function(dir.path(), "f.csv", AlgebraId::A2, 4, GridKind::C, 1);
    assert_eq!(code(&orbitx(&["transform", "--in", &f, "--algebra", "a2", "--m", "4", "--kind", "c"])), 0);
    assert_eq!(code(&orbitx(&["transform", "--in", &f, "--m", "5"])), 2);
    // a function file is not a spectrum
    assert_eq!(code(&orbitx(&["inv-transform", "--in", &f])), 2);
}

#[test]
fn convolve_with_builtin_and_file_kernels() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_function(dir.path(), "f.csv", AlgebraId::A2, 4, GridKind::C, 9);
    let spectral = orbitx(&["convolve", "--in", &f, "--kernel", "mean"]);
    let spatial = orbitx(&["convolve", "--in", &f, "--kernel", "mean", "--method", "spatial"]);
    assert_eq!(code(&spectral), 0);
    assert_eq!(code(&spatial), 0);
    let a = Record::from_csv(&String::from_utf8(spectral.stdout).unwrap()).unwrap().to_function().unwrap();
    let b = Record::from_csv(&String::from_utf8(spatial.stdout).unwrap()).unwrap().to_function().unwrap();
    let err = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9);

    // the origin indicator as a kernel file: f ∗ δ = |W| f
    let grid = orbitx::transforms::OrbitBasis::shared(AlgebraId::A2, 4, GridKind::C).unwrap();
    let delta = orbitx::convolution::Kernel {
        name: "delta".into(),
        mode: orbitx::convolution::NormalizationMode::None,
        function: orbitx::transforms::DiscreteFunction::origin_indicator(grid.grid()),
    };
    let k = path(dir.path(), "k.csv");
    std::fs::write(&k, Record::from_kernel(&delta).unwrap().to_csv()).unwrap();
    let out = orbitx(&["convolve", "--in", &f, "--kernel", &k]);
    assert_eq!(code(&out), 0);
    let got = Record::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap().to_function().unwrap();
    let input = Record::from_csv(&std::fs::read_to_string(&f).unwrap()).unwrap().to_function().unwrap();
    for (g, x) in got.values.iter().zip(&input.values) {
        assert!((g - x * Complex64::new(6.0, 0.0)).norm() < 1e-9);
    }

    assert_eq!(code(&orbitx(&["convolve", "--in", &f, "--kernel", "laplace"])), 1);
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = orbitx(&["verify", "--algebra", "g2", "--m", "4", "--kind", "c"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gram-off-diagonal,G2,4,C,"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));

    let out = orbitx(&["verify", "--algebra", "a2", "--m", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let checks: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(checks.as_array().unwrap().iter().all(|c| c["passed"] == true));

    // an impossible tolerance must fail with exit code 3
    let out = orbitx(&["verify", "--algebra", "c2", "--m", "3", "--tolerance-scale=-1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(code(&orbitx(&["--help"])), 0);
    assert_eq!(code(&orbitx(&[])), 1);
    assert_eq!(code(&orbitx(&["frobnicate"])), 1);
    assert_eq!(code(&orbitx(&["grid-info", "--algebra", "b3", "--m", "3"])), 1);
    assert_eq!(code(&orbitx(&["grid-info", "--algebra", "a2", "--m", "0"])), 2);
    assert_eq!(code(&orbitx(&["grid-info", "--algebra", "a2", "--m", "3", "--format", "pgm"])), 1);
    assert_eq!(code(&orbitx(&["transform", "--in", "/nonexistent/f.csv"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let junk = path(dir.path(), "junk.csv");
    std::fs::write(&junk, "not,a,function\n").unwrap();
    assert_eq!(code(&orbitx(&["transform", "--in", &junk])), 2);

    let threads = Command::new(env!("CARGO_BIN_EXE_orbitx"))
        .args(["grid-info", "--algebra", "a2", "--m", "2"])
        .env("ORBITX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 1);
    let threads = Command::new(env!("CARGO_BIN_EXE_orbitx"))
        .args(["grid-info", "--algebra", "a2", "--m", "2"])
        .env("ORBITX_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 0);
}

#[test]
fn filter_image_writes_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "hex.pgm");
    save_image(&make_hexagon_test_image(32).unwrap(), &input).unwrap();
    for (method, kernel) in [("orbit", "mean"), ("orbit", "edge"), ("r2", "sharpen")] {
        let out = path(dir.path(), &format!("{method}-{kernel}.pgm"));
        let status = orbitx(&[
            "filter-image", "--algebra", "a2", "--m", "32", "--kernel", kernel, "--method", method, "--in", &input,
            "--out", &out,
        ]);
        assert_eq!(code(&status), 0, "{}", String::from_utf8_lossy(&status.stderr));
        let img = load_image(&out).unwrap();
        assert_eq!((img.width(), img.height()), (32, 32));
    }

    let wide = path(dir.path(), "wide.pgm");
    save_image(&Image::filled(4, 3, 0.5).unwrap(), &wide).unwrap();
    let out = path(dir.path(), "never.pgm");
    assert_eq!(code(&orbitx(&["filter-image", "--kernel", "mean", "--in", &wide, "--out", &out])), 2);

    let color = path(dir.path(), "color.ppm");
    std::fs::write(&color, b"P6\n1 1\n255\n\x01\x02\x03").unwrap();
    assert_eq!(code(&orbitx(&["filter-image", "--kernel", "mean", "--in", &color, "--out", &out])), 2);
    assert!(!Path::new(&out).exists());
}
