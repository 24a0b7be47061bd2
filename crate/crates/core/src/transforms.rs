//! C- and E-orbit functions and the discrete orbit transforms.
//!
//! Normalization follows the analysis side:
//!
//! ```text
//! F_λ  = 1/(c |G| M² h_λ) · Σ_x ε(x) f(x) conj(Φ_λ(x))
//! f(x) = Σ_λ F_λ Φ_λ(x)
//! ```
//!
//! with `G = W, ε, h∨` for C-functions and `G = W^e, ε^e, h^e∨` for
//! E-functions.
//!
//! On grid points every phase `⟨wλ, s/M⟩` is a multiple of `1/(cM)`, so the
//! basis matrix is assembled from a table of `cM`-th roots of unity and is
//! exact up to the rounding of those roots.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    even_weyl_group, pairing, weyl_group, AlgebraData, AlgebraId, PointCoords, WeightCoords,
    WeylGroup,
};
use crate::error::{Error, Result};
use crate::grids::{Grid, GridKind};

/// Basis matrices above this many entries are rebuilt per call instead of cached.
const CACHE_ENTRY_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteFunction {
    pub algebra: AlgebraId,
    pub m: u32,
    pub kind: GridKind,
    pub values: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub algebra: AlgebraId,
    pub m: u32,
    pub kind: GridKind,
    pub coeffs: Vec<Complex64>,
}

fn grid_len(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<usize> {
    Ok(OrbitBasis::shared(algebra, m, kind)?.grid().len())
}

impl DiscreteFunction {
    pub fn new(algebra: AlgebraId, m: u32, kind: GridKind, values: Vec<Complex64>) -> Result<Self> {
        let n = grid_len(algebra, m, kind)?;
        if values.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{kind} grid of {algebra} at M = {m} has {n} points, got {} values",
                values.len()
            )));
        }
        Ok(DiscreteFunction { algebra, m, kind, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn constant(grid: &Grid, value: Complex64) -> Self {
        DiscreteFunction {
            algebra: grid.algebra(),
            m: grid.m(),
            kind: grid.kind(),
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f` at every grid point, passing the point's lattice coordinates.
    pub fn from_lattice_fn(grid: &Grid, f: impl Fn([i64; 2]) -> Complex64) -> Self {
        DiscreteFunction {
            algebra: grid.algebra(),
            m: grid.m(),
            kind: grid.kind(),
            values: grid.lattice().iter().map(|&s| f(s)).collect(),
        }
    }

    /// Indicator of the origin grid point.
    pub fn origin_indicator(grid: &Grid) -> Self {
        let mut f = Self::zeros(grid);
        f.values[grid.origin_index()] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        DiscreteFunction { values: self.values.iter().map(|v| v * a).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        Ok(DiscreteFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn grid(&self) -> Result<Arc<OrbitBasis>> {
        OrbitBasis::shared(self.algebra, self.m, self.kind)
    }
}

impl Spectrum {
    pub fn new(algebra: AlgebraId, m: u32, kind: GridKind, coeffs: Vec<Complex64>) -> Result<Self> {
        let n = grid_len(algebra, m, kind)?;
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{kind} label grid of {algebra} at M = {m} has {n} labels, got {} coefficients",
                coeffs.len()
            )));
        }
        Ok(Spectrum { algebra, m, kind, coeffs })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Spectrum {
            algebra: grid.algebra(),
            m: grid.m(),
            kind: grid.kind(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }
}

pub(crate) fn check_compatible(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<()> {
    if f.algebra != g.algebra || f.m != g.m || f.kind != g.kind || f.values.len() != g.values.len() {
        return Err(Error::DimensionMismatch(format!(
            "({}, M = {}, {}) vs ({}, M = {}, {})",
            f.algebra, f.m, f.kind, g.algebra, g.m, g.kind
        )));
    }
    Ok(())
}

fn orbit_sum(group: &WeylGroup, lambda: WeightCoords, x: PointCoords, data: &AlgebraData) -> Complex64 {
    group
        .iter()
        .map(|w| Complex64::from_polar(1.0, TAU * pairing(w.act_weight(lambda), x, data)))
        .sum()
}

/// `Φ_λ(x) = Σ_{w∈W} exp(2πi ⟨wλ, x⟩)`.
pub fn eval_c(lambda: WeightCoords, x: PointCoords, data: &AlgebraData) -> Complex64 {
    orbit_sum(weyl_group(data.id), lambda, x, data)
}

/// `Ξ_λ(x) = Σ_{w∈W^e} exp(2πi ⟨wλ, x⟩)`.
pub fn eval_e(lambda: WeightCoords, x: PointCoords, data: &AlgebraData) -> Complex64 {
    orbit_sum(even_weyl_group(data.id), lambda, x, data)
}

/// Orbit function of the given family at an arbitrary point.
pub fn eval(kind: GridKind, lambda: WeightCoords, x: PointCoords, data: &AlgebraData) -> Complex64 {
    match kind {
        GridKind::C => eval_c(lambda, x, data),
        GridKind::E => eval_e(lambda, x, data),
    }
}

/// The grid together with the matrix `Φ_λ(x)` (rows: labels, columns: points).
#[derive(Debug)]
pub struct OrbitBasis {
    grid: Grid,
    matrix: Vec<Complex64>,
}

type CacheKey = (AlgebraId, u32, GridKind);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<OrbitBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<OrbitBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl OrbitBasis {
    pub fn new(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<Self> {
        let grid = Grid::new(algebra, m, kind)?;
        let data = grid.data();
        let n = grid.len();
        let period = data.cartan_det * i64::from(m);
        let roots: Vec<Complex64> = (0..period)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / period as f64))
            .collect();
        let adj = data.adjugate();
        // ⟨μ, s/M⟩ = μ · (adj s) / (cM)
        let scaled: Vec<[i64; 2]> = grid.lattice().iter().map(|&s| crate::algebra::mat_vec(&adj, s)).collect();
        let group = grid.group();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        matrix.par_chunks_mut(n).zip(grid.weights().par_iter()).for_each(|(row, &lambda)| {
            let orbit: Vec<[i64; 2]> = group.iter().map(|w| w.act_weight_lattice(lambda)).collect();
            for (cell, v) in row.iter_mut().zip(&scaled) {
                *cell = orbit
                    .iter()
                    .map(|mu| roots[(mu[0] * v[0] + mu[1] * v[1]).rem_euclid(period) as usize])
                    .sum();
            }
        });
        Ok(OrbitBasis { grid, matrix })
    }

    /// Shared, read-only basis for `(algebra, M, kind)`.
    pub fn shared(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<Arc<Self>> {
        let key = (algebra, m, kind);
        if let Some(b) = cache().lock().expect("basis cache poisoned").get(&key) {
            return Ok(Arc::clone(b));
        }
        let basis = Arc::new(OrbitBasis::new(algebra, m, kind)?);
        if basis.matrix.len() <= CACHE_ENTRY_LIMIT {
            cache()
                .lock()
                .expect("basis cache poisoned")
                .entry(key)
                .or_insert_with(|| Arc::clone(&basis));
        }
        Ok(basis)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `Φ_λ` sampled on the grid, for the label at `label_index`.
    pub fn row(&self, label_index: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.matrix[label_index * n..(label_index + 1) * n]
    }

    /// The orbit function of a label as a discrete function.
    pub fn basis_function(&self, label_index: usize) -> DiscreteFunction {
        DiscreteFunction {
            algebra: self.grid.algebra(),
            m: self.grid.m(),
            kind: self.grid.kind(),
            values: self.row(label_index).to_vec(),
        }
    }

    fn check(&self, f: &DiscreteFunction) -> Result<()> {
        let g = &self.grid;
        if f.algebra != g.algebra() || f.m != g.m() || f.kind != g.kind() || f.values.len() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "function on ({}, M = {}, {}) used with basis ({}, M = {}, {})",
                f.algebra,
                f.m,
                f.kind,
                g.algebra(),
                g.m(),
                g.kind()
            )));
        }
        Ok(())
    }

    pub fn scalar_product(&self, f: &DiscreteFunction, g: &DiscreteFunction) -> Result<Complex64> {
        self.check(f)?;
        self.check(g)?;
        Ok(weighted_product(self.grid.epsilons(), &f.values, &g.values))
    }

    pub fn forward(&self, f: &DiscreteFunction) -> Result<Spectrum> {
        self.check(f)?;
        let eps = self.grid.epsilons();
        let weighted: Vec<Complex64> = f.values.iter().zip(eps).map(|(v, &e)| v * f64::from(e)).collect();
        let coeffs = (0..self.grid.len())
            .into_par_iter()
            .map(|l| {
                let dot: Complex64 = self.row(l).iter().zip(&weighted).map(|(phi, v)| v * phi.conj()).sum();
                dot / self.grid.norm(l)
            })
            .collect();
        Ok(Spectrum { algebra: f.algebra, m: f.m, kind: f.kind, coeffs })
    }

    pub fn inverse_grid(&self, s: &Spectrum) -> Result<DiscreteFunction> {
        let g = &self.grid;
        if s.algebra != g.algebra() || s.m != g.m() || s.kind != g.kind() || s.coeffs.len() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "spectrum ({}, M = {}, {}) used with basis ({}, M = {}, {})",
                s.algebra,
                s.m,
                s.kind,
                g.algebra(),
                g.m(),
                g.kind()
            )));
        }
        let n = g.len();
        let values = (0..n)
            .into_par_iter()
            .map(|x| (0..n).map(|l| s.coeffs[l] * self.matrix[l * n + x]).sum())
            .collect();
        Ok(DiscreteFunction { algebra: s.algebra, m: s.m, kind: s.kind, values })
    }

    /// Gram matrix of the basis under the discrete scalar product.
    pub fn gram(&self) -> Vec<Vec<Complex64>> {
        let n = self.grid.len();
        let eps = self.grid.epsilons();
        (0..n)
            .into_par_iter()
            .map(|a| (0..n).map(|b| weighted_product(eps, self.row(a), self.row(b))).collect())
            .collect()
    }
}

fn weighted_product(eps: &[u32], f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter()
        .zip(g)
        .zip(eps)
        .map(|((a, b), &e)| a * b.conj() * f64::from(e))
        .sum()
}

fn require_kind(kind: GridKind, expected: GridKind) -> Result<()> {
    if kind != expected {
        return Err(Error::DimensionMismatch(format!("expected a {expected} grid, got {kind}")));
    }
    Ok(())
}

/// Discrete scalar product matching the kind of the operands.
pub fn scalar_product(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<Complex64> {
    check_compatible(f, g)?;
    f.grid()?.scalar_product(f, g)
}

pub fn scalar_product_c(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<Complex64> {
    require_kind(f.kind, GridKind::C)?;
    scalar_product(f, g)
}

pub fn scalar_product_e(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<Complex64> {
    require_kind(f.kind, GridKind::E)?;
    scalar_product(f, g)
}

pub fn forward(f: &DiscreteFunction) -> Result<Spectrum> {
    f.grid()?.forward(f)
}

pub fn forward_c(f: &DiscreteFunction) -> Result<Spectrum> {
    require_kind(f.kind, GridKind::C)?;
    forward(f)
}

pub fn forward_e(f: &DiscreteFunction) -> Result<Spectrum> {
    require_kind(f.kind, GridKind::E)?;
    forward(f)
}

pub fn inverse_grid(s: &Spectrum) -> Result<DiscreteFunction> {
    OrbitBasis::shared(s.algebra, s.m, s.kind)?.inverse_grid(s)
}

pub fn inverse_c_grid(s: &Spectrum) -> Result<DiscreteFunction> {
    require_kind(s.kind, GridKind::C)?;
    inverse_grid(s)
}

pub fn inverse_e_grid(s: &Spectrum) -> Result<DiscreteFunction> {
    require_kind(s.kind, GridKind::E)?;
    inverse_grid(s)
}

/// Interpolant `I_M(x) = Σ_λ F_λ Φ_λ(x)` at an arbitrary point.
pub fn inverse_at(s: &Spectrum, x: PointCoords) -> Result<Complex64> {
    let basis = OrbitBasis::shared(s.algebra, s.m, s.kind)?;
    let grid = basis.grid();
    if s.coeffs.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has {} coefficients, label grid has {}",
            s.coeffs.len(),
            grid.len()
        )));
    }
    let data = grid.data();
    Ok(grid
        .weights()
        .iter()
        .zip(&s.coeffs)
        .map(|(&l, c)| c * eval(s.kind, WeightCoords::from(l), x, &data))
        .sum())
}

pub fn inverse_c(s: &Spectrum, x: PointCoords) -> Result<Complex64> {
    require_kind(s.kind, GridKind::C)?;
    inverse_at(s, x)
}

pub fn inverse_e(s: &Spectrum, x: PointCoords) -> Result<Complex64> {
    require_kind(s.kind, GridKind::E)?;
    inverse_at(s, x)
}

/// Deviation of the basis Gram matrix from the orthogonality relations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub algebra: AlgebraId,
    pub m: u32,
    pub kind: GridKind,
    /// `c |G| M²`
    pub scale: f64,
    pub max_off_diagonal: f64,
    pub max_diagonal_rel_error: f64,
}

pub fn verify_orthogonality(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<OrthogonalityReport> {
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let grid = basis.grid();
    let gram = basis.gram();
    let mut off = 0.0_f64;
    let mut diag = 0.0_f64;
    for (a, row) in gram.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if a == b {
                let expected = grid.norm(a);
                diag = diag.max((v - expected).norm() / expected);
            } else {
                off = off.max(v.norm());
            }
        }
    }
    Ok(OrthogonalityReport {
        algebra,
        m,
        kind,
        scale: grid.scale(),
        max_off_diagonal: off,
        max_diagonal_rel_error: diag,
    })
}
