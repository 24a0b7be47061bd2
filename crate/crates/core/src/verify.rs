//! Numerical self-checks of one grid: tables, orthogonality, round trip,
//! Parseval, the convolution theorem and the product identity.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{weyl_group, AlgebraId, PointCoords, WeightCoords};
use crate::convolution::{convolve_spatial, convolve_spectral, product_identity_residual_at};
use crate::error::Result;
use crate::grids::{
    epsilon, epsilon_even, epsilon_even_oracle, epsilon_oracle, h_dual, h_dual_even, h_dual_even_oracle, h_dual_oracle,
    GridKind,
};
use crate::transforms::{verify_orthogonality, DiscreteFunction, OrbitBasis};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub algebra: AlgebraId,
    pub m: u32,
    pub kind: GridKind,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, algebra: AlgebraId, m: u32, kind: GridKind, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            algebra,
            m,
            kind,
            measured,
            tolerance,
            // NaN never passes
            passed: measured <= tolerance,
        }
    }
}

pub fn random_function(algebra: AlgebraId, m: u32, kind: GridKind, rng: &mut impl Rng) -> Result<DiscreteFunction> {
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let values = (0..basis.grid().len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    DiscreteFunction::new(algebra, m, kind, values)
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Number of grid entries whose tabulated weight differs from the orbit-stabilizer count.
pub fn table_mismatches(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<usize> {
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let grid = basis.grid();
    let bad = match kind {
        GridKind::C => {
            grid.points().iter().filter(|p| epsilon(&p.base()) != epsilon_oracle(&p.base())).count()
                + grid.labels().iter().filter(|l| h_dual(&l.base()) != h_dual_oracle(&l.base())).count()
        }
        GridKind::E => {
            grid.points().iter().filter(|p| epsilon_even(p) != epsilon_even_oracle(p)).count()
                + grid.labels().iter().filter(|l| h_dual_even(l) != h_dual_even_oracle(l)).count()
        }
    };
    Ok(bad)
}

/// Runs every check on one grid with `trials` random inputs drawn from `seed`.
pub fn verify_grid(algebra: AlgebraId, m: u32, kind: GridKind, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(m) << 8) ^ ((algebra as u64) << 4) ^ (kind as u64));
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let grid = basis.grid();
    let mut checks = Vec::new();
    let check = |name, measured, tol| Check::new(name, algebra, m, kind, measured, tol);

    checks.push(check("tables", table_mismatches(algebra, m, kind)? as f64, 0.0));

    let orth = verify_orthogonality(algebra, m, kind)?;
    checks.push(check("gram-off-diagonal", orth.max_off_diagonal / orth.scale, 1e-8));
    checks.push(check("gram-diagonal", orth.max_diagonal_rel_error, 1e-10));

    let (mut round, mut parseval, mut conv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..trials {
        let f = random_function(algebra, m, kind, &mut rng)?;
        let spectrum = basis.forward(&f)?;
        let back = basis.inverse_grid(&spectrum)?;
        round = round.max(max_diff(&back.values, &f.values) / max_norm(&f.values));

        let lhs: f64 = f.values.iter().zip(grid.epsilons()).map(|(v, &e)| f64::from(e) * v.norm_sqr()).sum();
        let rhs: f64 = spectrum.coeffs.iter().enumerate().map(|(i, c)| grid.norm(i) * c.norm_sqr()).sum();
        parseval = parseval.max((lhs - rhs).abs() / lhs);

        let g = random_function(algebra, m, kind, &mut rng)?;
        let spatial = convolve_spatial(&f, &g)?;
        let spectral = convolve_spectral(&f, &g)?;
        conv = conv.max(max_diff(&spatial.values, &spectral.values) / max_norm(&spatial.values));
    }
    checks.push(check("round-trip", round, 1e-10));
    checks.push(check("parseval", parseval, 1e-9));
    checks.push(check("convolution-theorem", conv, 1e-8));

    if kind == GridKind::C {
        let data = algebra.data();
        let order = weyl_group(algebra).len() as f64;
        let mf = f64::from(m);
        let mut worst = 0.0_f64;
        for _ in 0..trials {
            let l = grid.weights()[rng.gen_range(0..grid.len())];
            let x = grid.lattice()[rng.gen_range(0..grid.len())];
            let y = grid.lattice()[rng.gen_range(0..grid.len())];
            let r = product_identity_residual_at(
                WeightCoords([l[0] as f64, l[1] as f64]),
                PointCoords([x[0] as f64 / mf, x[1] as f64 / mf]),
                PointCoords([y[0] as f64 / mf, y[1] as f64 / mf]),
                &data,
            );
            worst = worst.max(r / (order * order));
        }
        checks.push(check("product-identity", worst, 1e-10));
    }
    Ok(checks)
}
