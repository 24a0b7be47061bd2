//! Orbit convolutions and the filter kernels built on them.
//!
//! The spatial form sums `ε(x) f(x) g(u − w x)` over the grid and the group,
//! extending `g` off the fundamental domain by folding. The spectral form
//! multiplies transforms:
//!
//! ```text
//! (f ∗ g)(u) = Σ_λ c |G| M² h_λ F_λ G_λ Φ_λ(u)
//! ```
//!
//! Both exist for C-grids (`G = W`) and E-grids (`G = W^e`, with the even
//! weights `ε^e`, `h^e∨`). The spectral path is the one used for filtering;
//! the spatial path is kept as its independent check.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{weyl_group, AlgebraData, AlgebraId, PointCoords, WeightCoords};
use crate::error::{Error, Result};
use crate::grids::{Grid, GridKind, GridPoint, LabelPoint};
use crate::transforms::{check_compatible, eval_c, DiscreteFunction, OrbitBasis, Spectrum};

/// `(f ∗ g)(u)` by direct summation over the grid and the group.
pub fn convolve_spatial(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    check_compatible(f, g)?;
    let basis = f.grid()?;
    let grid = basis.grid();
    let group = grid.group();
    // every image w(x) of every grid point, with its weight ε(x) f(x)
    let images: Vec<([i64; 2], Complex64)> = grid
        .lattice()
        .iter()
        .zip(grid.epsilons())
        .zip(&f.values)
        .flat_map(|((&s, &e), &fx)| {
            let weight = fx * f64::from(e);
            group.iter().map(move |w| (w.act_point_lattice(s), weight))
        })
        .filter(|(_, weight)| weight.norm_sqr() != 0.0)
        .collect();
    let values = grid
        .lattice()
        .par_iter()
        .map(|&u| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(wx, weight) in &images {
                let idx = grid.locate([u[0] - wx[0], u[1] - wx[1]])?;
                acc += weight * g.values[idx];
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteFunction { values, ..f.clone() })
}

/// `(f ∗ g)(u)` through the orbit transforms.
pub fn convolve_spectral(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    check_compatible(f, g)?;
    let basis = f.grid()?;
    let fs = basis.forward(f)?;
    let gs = basis.forward(g)?;
    spectral_product(&basis, &fs, &gs)
}

/// Inverse transform of `c |G| M² h_λ F_λ G_λ`.
pub fn spectral_product(basis: &OrbitBasis, fs: &Spectrum, gs: &Spectrum) -> Result<DiscreteFunction> {
    let grid = basis.grid();
    let coeffs = fs
        .coeffs
        .iter()
        .zip(&gs.coeffs)
        .enumerate()
        .map(|(l, (a, b))| a * b * grid.norm(l))
        .collect();
    basis.inverse_grid(&Spectrum { coeffs, ..fs.clone() })
}

fn require(f: &DiscreteFunction, kind: GridKind) -> Result<()> {
    if f.kind != kind {
        return Err(Error::DimensionMismatch(format!("expected a {kind} grid, got {}", f.kind)));
    }
    Ok(())
}

pub fn convolve_c_spatial(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    require(f, GridKind::C)?;
    convolve_spatial(f, g)
}

pub fn convolve_c_spectral(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    require(f, GridKind::C)?;
    convolve_spectral(f, g)
}

pub fn convolve_e_spatial(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    require(f, GridKind::E)?;
    convolve_spatial(f, g)
}

pub fn convolve_e_spectral(f: &DiscreteFunction, g: &DiscreteFunction) -> Result<DiscreteFunction> {
    require(f, GridKind::E)?;
    convolve_spectral(f, g)
}

/// `|Φ_λ(x) conj(Φ_λ(y)) − Σ_w Φ_λ(x − w y)|` at arbitrary points.
pub fn product_identity_residual_at(lambda: WeightCoords, x: PointCoords, y: PointCoords, data: &AlgebraData) -> f64 {
    let lhs = eval_c(lambda, x, data) * eval_c(lambda, y, data).conj();
    let rhs: Complex64 = weyl_group(data.id)
        .iter()
        .map(|w| eval_c(lambda, x - w.act_point(y), data))
        .sum();
    (lhs - rhs).norm()
}

/// Residual of the product formula for a label and two grid points.
pub fn product_identity_check(lambda: &LabelPoint, x: &GridPoint, y: &GridPoint) -> Result<f64> {
    if lambda.algebra() != x.algebra() || x.algebra() != y.algebra() || lambda.m() != x.m() || x.m() != y.m() {
        return Err(Error::DimensionMismatch("label and points come from different grids".into()));
    }
    let data = lambda.algebra().data();
    Ok(product_identity_residual_at(
        crate::grids::label_coords(lambda),
        crate::grids::point_coords(x),
        crate::grids::point_coords(y),
        &data,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalizationMode {
    /// Scaled so that constants pass through unchanged.
    SumPreserving,
    /// Left as given (difference kernels).
    None,
}

impl NormalizationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormalizationMode::SumPreserving => "sum-preserving",
            NormalizationMode::None => "none",
        }
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sum-preserving" => Ok(NormalizationMode::SumPreserving),
            "none" => Ok(NormalizationMode::None),
            other => Err(Error::Parse(format!("unknown normalization mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelName {
    Mean,
    Sharpen,
    Edge,
}

impl KernelName {
    pub const ALL: [KernelName; 3] = [KernelName::Mean, KernelName::Sharpen, KernelName::Edge];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelName::Mean => "mean",
            KernelName::Sharpen => "sharpen",
            KernelName::Edge => "edge",
        }
    }
}

impl fmt::Display for KernelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" | "blur" => Ok(KernelName::Mean),
            "sharpen" => Ok(KernelName::Sharpen),
            "edge" => Ok(KernelName::Edge),
            other => Err(Error::UnknownKernel(other.to_string())),
        }
    }
}

/// A convolution kernel: a discrete function on the grid plus metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub name: String,
    pub mode: NormalizationMode,
    pub function: DiscreteFunction,
}

/// Response of `∗ g` to the constant function 1: `|G| Σ_x ε(x) g(x)`.
pub fn dc_gain(g: &DiscreteFunction) -> Result<Complex64> {
    let basis = g.grid()?;
    let grid = basis.grid();
    let sum: Complex64 = g
        .values
        .iter()
        .zip(grid.epsilons())
        .map(|(v, &e)| v * f64::from(e))
        .sum();
    Ok(sum * grid.group().len() as f64)
}

pub fn normalize_kernel(k: Kernel) -> Result<Kernel> {
    match k.mode {
        NormalizationMode::None => Ok(k),
        NormalizationMode::SumPreserving => {
            let gain = dc_gain(&k.function)?;
            if gain.norm() < 1e-300 {
                return Err(Error::ZeroKernelSum);
            }
            let function = k.function.scale(gain.inv());
            Ok(Kernel { function, ..k })
        }
    }
}

/// Kernel with the given weights at arbitrary lattice offsets (scaled by M);
/// each offset is folded onto its grid representative.
pub fn kernel_from_offsets(
    name: &str,
    mode: NormalizationMode,
    grid: &Grid,
    taps: &[([i64; 2], f64)],
) -> Result<Kernel> {
    let mut function = DiscreteFunction::zeros(grid);
    for &(offset, weight) in taps {
        let idx = grid.locate(offset)?;
        function.values[idx] += weight;
    }
    normalize_kernel(Kernel { name: name.to_string(), mode, function })
}

/// Raw weights `(origin, ω1∨/M neighbour, ω2∨/M neighbour)` of a builtin kernel.
pub fn builtin_weights(name: KernelName, grid: &Grid) -> Result<[f64; 3]> {
    Ok(match name {
        KernelName::Mean => [1.0 / 3.0; 3],
        KernelName::Sharpen => [5.0, 0.0, -1.0],
        KernelName::Edge => {
            // centre weight equal to ε of the neighbour, so that Σ ε g = 0;
            // this is 3 on A2
            let n2 = grid.index_of([0, 1]).ok_or(Error::KernelSupport([0, 1]))?;
            [f64::from(grid.epsilons()[n2]), 0.0, -1.0]
        }
    })
}

pub fn builtin_kernel(name: KernelName, algebra: AlgebraId, m: u32, kind: GridKind) -> Result<Kernel> {
    let basis = OrbitBasis::shared(algebra, m, kind)?;
    let grid = basis.grid();
    let support = [[0, 0], [1, 0], [0, 1]];
    for s in support {
        if GridPoint::from_lattice(algebra, m, s).is_none() {
            return Err(Error::KernelSupport(s));
        }
    }
    let weights = builtin_weights(name, grid)?;
    let mode = match name {
        KernelName::Mean | KernelName::Sharpen => NormalizationMode::SumPreserving,
        KernelName::Edge => NormalizationMode::None,
    };
    let taps: Vec<_> = support.into_iter().zip(weights).collect();
    kernel_from_offsets(name.as_str(), mode, grid, &taps)
}
