//! Discrete Weyl-group orbit transforms and orbit convolutions on the
//! fundamental domains of the rank-two algebras A2, C2 and G2.

pub mod algebra;
pub mod convolution;
pub mod error;
pub mod formats;
pub mod grids;
pub mod imaging;
pub mod pgm;
pub mod transforms;
pub mod verify;

pub use algebra::{AlgebraData, AlgebraId, PointCoords, WeightCoords, WeylElement, WeylGroup};
pub use convolution::{Kernel, KernelName, NormalizationMode};
pub use error::{Error, Result};
pub use grids::{Grid, GridKind, GridPoint, LabelPoint, Sector};
pub use transforms::{DiscreteFunction, OrbitBasis, Spectrum};
pub use imaging::{Image, ReassemblyMode, R2Kernel};
