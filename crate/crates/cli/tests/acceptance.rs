//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use orbitx::algebra::{even_weyl_group, weyl_group, AlgebraId, PointCoords, WeightCoords};
use orbitx::convolution::{convolve_spatial, convolve_spectral, product_identity_residual_at, KernelName};
use orbitx::grids::{
    epsilon, epsilon_even, epsilon_even_oracle, epsilon_oracle, h_dual, h_dual_even, h_dual_even_oracle,
    h_dual_oracle, Grid, GridKind,
};
use orbitx::imaging::{baseline_r2_filter, filter_image, make_hexagon_test_image, Image, R2Kernel};
use orbitx::transforms::{verify_orthogonality, OrbitBasis};
use orbitx::verify::random_function;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [GridKind; 2] = [GridKind::C, GridKind::E];

type Verdict = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn group_orders() -> Verdict {
    let expected = [(AlgebraId::A2, 6, 3), (AlgebraId::C2, 8, 4), (AlgebraId::G2, 12, 6)];
    let mut bad = Vec::new();
    for (id, w, we) in expected {
        let (got_w, got_we) = (weyl_group(id).len(), even_weyl_group(id).len());
        if (got_w, got_we) != (w, we) {
            bad.push(format!("{id}: |W|={got_w} |We|={got_we}"));
        }
    }
    ensure(bad.is_empty(), if bad.is_empty() { "6/8/12 and 3/4/6".into() } else { bad.join(", ") })
}

fn cartan_determinants() -> Verdict {
    let got: Vec<i64> = AlgebraId::ALL
        .iter()
        .map(|id| {
            let c = id.data().cartan;
            c[0][0] * c[1][1] - c[0][1] * c[1][0]
        })
        .collect();
    ensure(got == [3, 2, 1], format!("det C = {got:?}"))
}

fn table_oracles() -> Verdict {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for id in AlgebraId::ALL {
        for m in 1..=6 {
            let c = Grid::new(id, m, GridKind::C).map_err(|e| e.to_string())?;
            for p in c.points() {
                checked += 1;
                if epsilon(&p.base()) != epsilon_oracle(&p.base()) {
                    bad.push(format!("ε {id} M={m} {:?}", p.base().s()));
                }
            }
            for l in c.labels() {
                checked += 1;
                if h_dual(&l.base()) != h_dual_oracle(&l.base()) {
                    bad.push(format!("h {id} M={m} {:?}", l.base().t()));
                }
            }
            let e = Grid::new(id, m, GridKind::E).map_err(|e| e.to_string())?;
            for p in e.points() {
                checked += 1;
                if epsilon_even(p) != epsilon_even_oracle(p) {
                    bad.push(format!("εe {id} M={m} {:?}", p.base().s()));
                }
            }
            for l in e.labels() {
                checked += 1;
                if h_dual_even(l) != h_dual_even_oracle(l) {
                    bad.push(format!("he {id} M={m} {:?}", l.base().t()));
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{checked} entries, {} mismatches {:?}", bad.len(), bad.iter().take(5).collect::<Vec<_>>()))
}

fn orthogonality() -> Verdict {
    let (mut off, mut diag) = (0.0_f64, 0.0_f64);
    for id in AlgebraId::ALL {
        let c_w_m = |m: u32| (id.data().cartan_det * id.data().weyl_order as i64) as f64 * f64::from(m * m);
        for kind in KINDS {
            for m in 1..=8 {
                let r = verify_orthogonality(id, m, kind).map_err(|e| e.to_string())?;
                off = off.max(r.max_off_diagonal / c_w_m(m));
                diag = diag.max(r.max_diagonal_rel_error);
            }
        }
    }
    ensure(off < 1e-8 && diag <= 1e-10, format!("max off-diagonal/(c|W|M²) = {off:.2e}, max diagonal rel error = {diag:.2e}"))
}

fn round_trip_and_parseval(rng: &mut ChaCha8Rng) -> Result<(f64, f64), String> {
    let (mut round, mut parseval) = (0.0_f64, 0.0_f64);
    for id in AlgebraId::ALL {
        for kind in KINDS {
            for m in 1..=8 {
                let basis = OrbitBasis::shared(id, m, kind).map_err(|e| e.to_string())?;
                let grid = basis.grid();
                for _ in 0..3 {
                    let f = random_function(id, m, kind, rng).map_err(|e| e.to_string())?;
                    let spectrum = basis.forward(&f).map_err(|e| e.to_string())?;
                    let back = basis.inverse_grid(&spectrum).map_err(|e| e.to_string())?;
                    for (a, b) in back.values.iter().zip(&f.values) {
                        round = round.max((a - b).norm() / b.norm());
                    }
                    let lhs: f64 = f.values.iter().zip(grid.epsilons()).map(|(v, &e)| f64::from(e) * v.norm_sqr()).sum();
                    let rhs: f64 = spectrum.coeffs.iter().enumerate().map(|(i, c)| grid.norm(i) * c.norm_sqr()).sum();
                    parseval = parseval.max((lhs - rhs).abs() / lhs);
                }
            }
        }
    }
    Ok((round, parseval))
}

fn product_identity(rng: &mut ChaCha8Rng) -> Verdict {
    let m = 5;
    let mut worst = 0.0_f64;
    for id in AlgebraId::ALL {
        let data = id.data();
        let grid = Grid::new(id, m, GridKind::C).map_err(|e| e.to_string())?;
        let order = weyl_group(id).len() as f64;
        let mf = f64::from(m);
        let point = |s: [i64; 2]| PointCoords([s[0] as f64 / mf, s[1] as f64 / mf]);
        for _ in 0..100 {
            let l = grid.weights()[rng.gen_range(0..grid.len())];
            let x = grid.lattice()[rng.gen_range(0..grid.len())];
            let y = grid.lattice()[rng.gen_range(0..grid.len())];
            let r = product_identity_residual_at(WeightCoords([l[0] as f64, l[1] as f64]), point(x), point(y), &data);
            worst = worst.max(r / (order * order));
        }
    }
    ensure(worst < 1e-10, format!("max residual/|W|² = {worst:.2e} over 300 triples"))
}

fn convolution_theorems(rng: &mut ChaCha8Rng) -> Verdict {
    let mut worst = [0.0_f64; 2];
    for (k, kind) in KINDS.into_iter().enumerate() {
        for id in AlgebraId::ALL {
            for m in 2..=6 {
                for _ in 0..20 {
                    let f = random_function(id, m, kind, rng).map_err(|e| e.to_string())?;
                    let g = random_function(id, m, kind, rng).map_err(|e| e.to_string())?;
                    let a = convolve_spatial(&f, &g).map_err(|e| e.to_string())?;
                    let b = convolve_spectral(&f, &g).map_err(|e| e.to_string())?;
                    worst[k] = worst[k].max(max_diff(&a.values, &b.values) / max_norm(&a.values));
                }
            }
        }
    }
    ensure(
        worst[0] < 1e-8 && worst[1] < 1e-8,
        format!("max rel difference C = {:.2e}, E = {:.2e}", worst[0], worst[1]),
    )
}

fn filter_contracts(rng: &mut ChaCha8Rng) -> Verdict {
    let size = 32;
    let level = 0.6;
    let flat = Image::filled(size, size, level).map_err(|e| e.to_string())?;
    let (mut mean_err, mut edge_max) = (0.0_f64, 0.0_f64);
    for id in AlgebraId::ALL {
        let m = size as u32;
        let mean = filter_image(&flat, KernelName::Mean, id, m).map_err(|e| e.to_string())?;
        mean_err = mean.pixels().iter().map(|v| ((v - level) / level).abs()).fold(mean_err, f64::max);
        let edge = filter_image(&flat, KernelName::Edge, id, m).map_err(|e| e.to_string())?;
        edge_max = edge.pixels().iter().map(|v| v.abs()).fold(edge_max, f64::max);
    }
    let values: Vec<f64> = (0..size * size).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let noisy = Image::new(size, size, values).map_err(|e| e.to_string())?;
    let identity_exact = baseline_r2_filter(&noisy, R2Kernel::Identity) == noisy;
    ensure(
        mean_err <= 1e-6 && edge_max <= 1.0 / 255.0 && identity_exact,
        format!("mean rel error {mean_err:.2e}, edge max {edge_max:.2e}, R² identity exact: {identity_exact}"),
    )
}

const DEMO_FILES: [&str; 7] = [
    "hexagon.pgm",
    "orbit_mean.pgm",
    "r2_mean.pgm",
    "orbit_sharpen.pgm",
    "r2_sharpen.pgm",
    "orbit_edge.pgm",
    "r2_edge.pgm",
];

fn run_demo(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_orbitx"))
        .arg("demo")
        .arg("--out")
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("demo exited with {}: {}", status.status, String::from_utf8_lossy(&status.stderr)));
    }
    DEMO_FILES
        .iter()
        .map(|f| std::fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}")))
        .collect()
}

fn demo_reproduction() -> Verdict {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_demo(a.path())?;
    let second = run_demo(b.path())?;
    let identical = first == second;
    let golden: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "data", "hexagon64.pgm"].iter().collect();
    let golden_ok = std::fs::read(golden).map_err(|e| e.to_string())? == first[0];
    let expected_hex = orbitx::pgm::encode(&make_hexagon_test_image(64).map_err(|e| e.to_string())?);
    ensure(
        identical && golden_ok && expected_hex == first[0],
        format!("{} files, byte-identical across runs: {identical}, hexagon matches golden: {golden_ok}", first.len()),
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b17);
    let mut failures = 0;
    let mut report = |n: u32, title: &str, verdict: Verdict, start: Instant| {
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {n:>2} {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {n:>2} {title}: {detail} ({secs:.1}s)");
            }
        }
    };

    let t = Instant::now();
    report(1, "group orders", group_orders(), t);
    let t = Instant::now();
    report(2, "Cartan determinants", cartan_determinants(), t);
    let t = Instant::now();
    report(3, "table oracle equivalence", table_oracles(), t);
    let t = Instant::now();
    report(4, "discrete orthogonality", orthogonality(), t);

    let t = Instant::now();
    let rp = round_trip_and_parseval(&mut rng);
    let elapsed = t;
    match rp {
        Ok((round, parseval)) => {
            report(5, "transform round trip", ensure(round < 1e-10, format!("max rel error {round:.2e}")), elapsed);
            report(6, "Parseval", ensure(parseval < 1e-9, format!("max rel error {parseval:.2e}")), elapsed);
        }
        Err(e) => {
            report(5, "transform round trip", Err(e.clone()), elapsed);
            report(6, "Parseval", Err(e), elapsed);
        }
    }

    let t = Instant::now();
    report(7, "product identity", product_identity(&mut rng), t);
    let t = Instant::now();
    report(8, "convolution theorems", convolution_theorems(&mut rng), t);
    let t = Instant::now();
    report(9, "filter contracts", filter_contracts(&mut rng), t);
    let t = Instant::now();
    report(10, "demo reproduction", demo_reproduction(), t);

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
