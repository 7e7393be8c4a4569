//! Scattered-data approximation with radial basis functions: Wendland
//! functions and Sobolev splines, their radial Fourier transforms, local
//! polynomial reproduction, and `L^p` convergence-rate experiments.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); exact
//! constructions use arbitrary-precision rationals. The `*F64` aliases name
//! the common instantiations.

// `!(a < b)` is how NaN fails a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod bessel;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod jet;
pub mod kernels;
pub mod linalg;
pub mod poly;
pub mod polyrep;
pub mod quad;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use kernels::{Gaussian, KernelId, RadialKernel, SobolevSpline, Wendland};
pub use scalar::Real;

pub type WendlandF64 = kernels::Wendland<f64>;
pub type WendlandF32 = kernels::Wendland<f32>;
pub type SobolevSplineF64 = kernels::SobolevSpline<f64>;
pub type WendlandTransformF64 = spectral::WendlandTransform<f64>;
pub type FiniteMeasureF64 = spectral::FiniteMeasure<f64>;
pub type PointSetF64 = geometry::PointSet<f64>;
pub type BoxDomainF64 = geometry::BoxDomain<f64>;
pub type ReproFunctionalF64 = polyrep::ReproFunctional<f64>;
pub type TestFunctionF64 = approx::TestFunction<f64>;
pub type MatF64 = linalg::Mat<f64>;
