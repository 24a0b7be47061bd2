//! Square grayscale images on orbit-function grids.
//!
//! A square image of side `n` is cut along its main diagonal. Each half is
//! mapped affinely onto the fundamental domain `F`, sampled on the C-grid,
//! filtered by orbit convolution and resampled back onto the pixels.
//!
//! Pixel `(row, col)` of the lower half (`row >= col`) goes to
//!
//! ```text
//! x1 = (row - col) / ((n - 1) m1),   x2 = col / ((n - 1) m2)
//! ```
//!
//! so the top-left corner is the origin, the bottom-left corner is vertex 1
//! and the bottom-right corner is vertex 2. The upper half uses the
//! transposed pixel. For C2 and G2 the right angle of the half-square lands
//! on the right angle of `F`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraId, PointCoords};
use crate::convolution::{builtin_kernel, convolve_spectral, KernelName};
use crate::error::{Error, Result};
use crate::grids::{Grid, GridKind};
use crate::transforms::{inverse_at, DiscreteFunction, OrbitBasis};

pub use crate::pgm::{load_image, save_image};

/// Row-major intensities, nominally in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels do not fill a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Image { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Image::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Result<Self> {
        let pixels = (0..width * height)
            .into_par_iter()
            .map(|i| f(i / width, i % width))
            .collect();
        Image::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn clamped(&self) -> Image {
        let pixels = self
            .pixels
            .iter()
            .map(|&v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect();
        Image { pixels, ..*self }
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }

    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        let var = self.pixels.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / self.pixels.len() as f64;
        var.sqrt()
    }

    /// Bilinear interpolation at fractional pixel coordinates, clamped to the image.
    pub fn bilinear(&self, row: f64, col: f64) -> f64 {
        let r = row.clamp(0.0, (self.height - 1) as f64);
        let c = col.clamp(0.0, (self.width - 1) as f64);
        let r0 = (r.floor() as usize).min(self.height.saturating_sub(2));
        let c0 = (c.floor() as usize).min(self.width.saturating_sub(2));
        let r1 = (r0 + 1).min(self.height - 1);
        let c1 = (c0 + 1).min(self.width - 1);
        let fr = r - r0 as f64;
        let fc = c - c0 as f64;
        let top = self.get(r0, c0) * (1.0 - fc) + self.get(r0, c1) * fc;
        let bottom = self.get(r1, c0) * (1.0 - fc) + self.get(r1, c1) * fc;
        top * (1.0 - fr) + bottom * fr
    }

    fn require_square(&self) -> Result<usize> {
        if self.width != self.height {
            return Err(Error::NonSquare { width: self.width, height: self.height });
        }
        if self.width < 2 {
            return Err(Error::InvalidImage("image side must be at least 2".into()));
        }
        Ok(self.width)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Half {
    /// `row >= col`
    Lower,
    /// `row <= col`
    Upper,
}

/// `x = matrix · (row, col) + offset`, pixel coordinates to ω∨-coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

impl AffineMap {
    pub fn for_half(algebra: AlgebraId, side: usize, half: Half) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidImage("image side must be at least 2".into()));
        }
        let data = algebra.data();
        let a = 1.0 / ((side - 1) as f64 * data.marks[0] as f64);
        let b = 1.0 / ((side - 1) as f64 * data.marks[1] as f64);
        let matrix = match half {
            Half::Lower => [[a, -a], [0.0, b]],
            Half::Upper => [[-a, a], [b, 0.0]],
        };
        Ok(AffineMap { matrix, offset: [0.0, 0.0] })
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + self.offset[0],
            m[1][0] * p[0] + m[1][1] * p[1] + self.offset[1],
        ]
    }

    pub fn determinant(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let det = self.determinant();
        if det.abs() < 1e-300 || !det.is_finite() {
            return Err(Error::InvalidImage("affine map is singular".into()));
        }
        let m = &self.matrix;
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        let o = self.offset;
        let offset = [
            -(inv[0][0] * o[0] + inv[0][1] * o[1]),
            -(inv[1][0] * o[0] + inv[1][1] * o[1]),
        ];
        Ok(AffineMap { matrix: inv, offset })
    }
}

/// One half of a square image sampled on a C-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleSampling {
    pub function: DiscreteFunction,
    pub map: AffineMap,
    pub half: Half,
    pub side: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReassemblyMode {
    /// Piecewise-linear interpolation of the grid values.
    #[default]
    Barycentric,
    /// Evaluation of the continuous orbit-function expansion.
    Spectral,
}

impl FromStr for ReassemblyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "barycentric" | "linear" => Ok(ReassemblyMode::Barycentric),
            "spectral" | "inverse" => Ok(ReassemblyMode::Spectral),
            other => Err(Error::Parse(format!("unknown reassembly method '{other}'"))),
        }
    }
}

pub fn sample_half(img: &Image, algebra: AlgebraId, m: u32, half: Half) -> Result<TriangleSampling> {
    let side = img.require_square()?;
    let map = AffineMap::for_half(algebra, side, half)?;
    let inv = map.inverse()?;
    let basis = OrbitBasis::shared(algebra, m, GridKind::C)?;
    let grid = basis.grid();
    let mf = f64::from(m);
    let values = grid
        .lattice()
        .par_iter()
        .map(|s| {
            let p = inv.apply([s[0] as f64 / mf, s[1] as f64 / mf]);
            Complex64::new(img.bilinear(p[0], p[1]), 0.0)
        })
        .collect();
    let function = DiscreteFunction::new(algebra, m, GridKind::C, values)?;
    Ok(TriangleSampling { function, map, half, side })
}

/// Splits a square image along its main diagonal into lower and upper samplings.
pub fn split_square(img: &Image, algebra: AlgebraId, m: u32) -> Result<(TriangleSampling, TriangleSampling)> {
    let side = img.require_square()?;
    let marks = algebra.data().marks;
    let needed = (side as u64 - 1) * marks[0].max(marks[1]) as u64;
    if u64::from(m) < needed {
        log::warn!("grid density M={m} is below the pixel density along the legs (M >= {needed} recommended)");
    }
    Ok((
        sample_half(img, algebra, m, Half::Lower)?,
        sample_half(img, algebra, m, Half::Upper)?,
    ))
}

/// Piecewise-linear interpolation on the Kuhn triangulation of the `(s1, s2)` lattice.
fn barycentric_value(grid: &Grid, values: &[Complex64], s: [f64; 2]) -> f64 {
    let base = [s[0].floor() as i64, s[1].floor() as i64];
    let value = |p: [i64; 2]| grid.index_of(p).map(|i| values[i].re);
    let mut best: Option<(f64, f64)> = None;
    // the slanted walls of C2 and G2 cut whole cells, so look a few cells out
    for d0 in -3..=3 {
        for d1 in -3..=3 {
            let c = [base[0] + d0, base[1] + d1];
            let f = [s[0] - c[0] as f64, s[1] - c[1] as f64];
            // lower simplex (0,0),(1,0),(1,1) and upper simplex (0,0),(0,1),(1,1)
            for (corner, w) in [
                ([c[0] + 1, c[1]], [1.0 - f[0], f[0] - f[1], f[1]]),
                ([c[0], c[1] + 1], [1.0 - f[1], f[1] - f[0], f[0]]),
            ] {
                let min_w = w.iter().copied().fold(f64::INFINITY, f64::min);
                if best.is_some_and(|(m, _)| m >= min_w) {
                    continue;
                }
                if let (Some(a), Some(b), Some(d)) = (value(c), value(corner), value([c[0] + 1, c[1] + 1])) {
                    best = Some((min_w, w[0] * a + w[1] * b + w[2] * d));
                }
            }
        }
    }
    if let Some((_, v)) = best {
        return v;
    }
    // no complete simplex nearby: nearest grid point
    grid.lattice()
        .iter()
        .zip(values)
        .min_by(|(p, _), (q, _)| {
            let dp = (p[0] as f64 - s[0]).powi(2) + (p[1] as f64 - s[1]).powi(2);
            let dq = (q[0] as f64 - s[0]).powi(2) + (q[1] as f64 - s[1]).powi(2);
            dp.total_cmp(&dq)
        })
        .map_or(0.0, |(_, v)| v.re)
}

struct Evaluator<'a> {
    sampling: &'a TriangleSampling,
    basis: std::sync::Arc<OrbitBasis>,
    spectrum: Option<crate::transforms::Spectrum>,
}

impl<'a> Evaluator<'a> {
    fn new(sampling: &'a TriangleSampling, mode: ReassemblyMode) -> Result<Self> {
        let basis = sampling.function.grid()?;
        let spectrum = match mode {
            ReassemblyMode::Barycentric => None,
            ReassemblyMode::Spectral => Some(basis.forward(&sampling.function)?),
        };
        Ok(Evaluator { sampling, basis, spectrum })
    }

    fn at(&self, row: usize, col: usize) -> Result<f64> {
        let x = self.sampling.map.apply([row as f64, col as f64]);
        match &self.spectrum {
            None => {
                let m = f64::from(self.sampling.function.m);
                Ok(barycentric_value(self.basis.grid(), &self.sampling.function.values, [x[0] * m, x[1] * m]))
            }
            Some(spectrum) => Ok(inverse_at(spectrum, PointCoords(x))?.re),
        }
    }
}

/// Resamples two half samplings back onto a `width × height` image, clamped to `[0, 1]`.
/// Diagonal pixels take the mean of both halves.
pub fn reassemble(
    lower: &TriangleSampling,
    upper: &TriangleSampling,
    width: usize,
    height: usize,
    mode: ReassemblyMode,
) -> Result<Image> {
    if width != height {
        return Err(Error::NonSquare { width, height });
    }
    if lower.half != Half::Lower || upper.half != Half::Upper || lower.side != width || upper.side != width {
        return Err(Error::DimensionMismatch("samplings do not match the requested image".into()));
    }
    let lo = Evaluator::new(lower, mode)?;
    let up = Evaluator::new(upper, mode)?;
    let pixels = (0..width * height)
        .into_par_iter()
        .map(|i| {
            let (row, col) = (i / width, i % width);
            let v = match row.cmp(&col) {
                std::cmp::Ordering::Greater => lo.at(row, col)?,
                std::cmp::Ordering::Less => up.at(row, col)?,
                std::cmp::Ordering::Equal => 0.5 * (lo.at(row, col)? + up.at(row, col)?),
            };
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Image::new(width, height, pixels)?.clamped())
}

/// Orbit-convolution filtering of a square image on the C-grid of `algebra`.
pub fn filter_image(img: &Image, kernel: KernelName, algebra: AlgebraId, m: u32) -> Result<Image> {
    filter_image_with(img, kernel, algebra, m, ReassemblyMode::Barycentric)
}

pub fn filter_image_with(
    img: &Image,
    kernel: KernelName,
    algebra: AlgebraId,
    m: u32,
    mode: ReassemblyMode,
) -> Result<Image> {
    let k = builtin_kernel(kernel, algebra, m, GridKind::C)?;
    let (mut lower, mut upper) = split_square(img, algebra, m)?;
    lower.function = convolve_spectral(&lower.function, &k.function)?;
    upper.function = convolve_spectral(&upper.function, &k.function)?;
    reassemble(&lower, &upper, img.width(), img.height(), mode)
}

/// 3×3 kernels for the planar baseline filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum R2Kernel {
    Identity,
    Mean,
    Sharpen,
    Edge,
}

impl R2Kernel {
    pub fn matrix(self) -> [[f64; 3]; 3] {
        match self {
            R2Kernel::Identity => [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
            R2Kernel::Mean => [[1.0 / 9.0; 3]; 3],
            R2Kernel::Sharpen => [[0.0, -1.0, 0.0], [-1.0, 5.0, -1.0], [0.0, -1.0, 0.0]],
            R2Kernel::Edge => [[0.0, 0.0, -1.0], [-1.0, 3.0, 0.0], [0.0, 0.0, -1.0]],
        }
    }
}

impl From<KernelName> for R2Kernel {
    fn from(k: KernelName) -> Self {
        match k {
            KernelName::Mean => R2Kernel::Mean,
            KernelName::Sharpen => R2Kernel::Sharpen,
            KernelName::Edge => R2Kernel::Edge,
        }
    }
}

impl fmt::Display for R2Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            R2Kernel::Identity => "identity",
            R2Kernel::Mean => "mean",
            R2Kernel::Sharpen => "sharpen",
            R2Kernel::Edge => "edge",
        })
    }
}

impl FromStr for R2Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("identity") {
            return Ok(R2Kernel::Identity);
        }
        s.parse::<KernelName>().map(R2Kernel::from)
    }
}

/// `F(m, n) = Σ_{i,j} f(m + i, n + j) a_ij` with replicated borders, clamped to `[0, 1]`.
pub fn baseline_r2_filter(img: &Image, kernel: R2Kernel) -> Image {
    let a = kernel.matrix();
    let (w, h) = (img.width as i64, img.height as i64);
    let pixels = (0..img.pixels.len())
        .into_par_iter()
        .map(|idx| {
            let (row, col) = ((idx / img.width) as i64, (idx % img.width) as i64);
            let mut acc = 0.0;
            for (i, a_row) in a.iter().enumerate() {
                for (j, &aij) in a_row.iter().enumerate() {
                    if aij == 0.0 {
                        continue;
                    }
                    let r = (row + i as i64 - 1).clamp(0, h - 1) as usize;
                    let c = (col + j as i64 - 1).clamp(0, w - 1) as usize;
                    acc += img.get(r, c) * aij;
                }
            }
            acc
        })
        .collect();
    Image { pixels, ..*img }.clamped()
}

/// Signed distance-like margin of a pixel centre inside the test hexagon (positive inside).
fn hexagon_margin(size: usize, row: usize, col: usize) -> f64 {
    let r = 0.4 * size as f64;
    let centre = size as f64 / 2.0;
    let dx = (col as f64 + 0.5 - centre).abs();
    let dy = (row as f64 + 0.5 - centre).abs();
    let s3 = 3f64.sqrt();
    // half-plane distances for the slanted and the flat edges
    let slanted = (s3 * r - s3 * dx - dy) / 2.0;
    let flat = s3 / 2.0 * r - dy;
    slanted.min(flat)
}

/// White flat-topped regular hexagon on black, circumradius `0.4 · size`.
pub fn make_hexagon_test_image(size: usize) -> Result<Image> {
    if size < 2 {
        return Err(Error::InvalidImage("hexagon image needs size >= 2".into()));
    }
    Image::from_fn(size, size, |row, col| if hexagon_margin(size, row, col) >= 0.0 { 1.0 } else { 0.0 })
}
