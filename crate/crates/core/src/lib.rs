//! Walsh–Fourier analysis on the dyadic group: partial sums, Nörlund and
//! Riesz logarithmic means, their kernels, and the logarithmic variation of
//! integers that controls the kernels' L₁ norms.
//!
//! Every function on `[0, 1)` is represented as a [`grid::GridFunction`]
//! that is constant on the dyadic cells of a fixed resolution. Values are
//! generic over [`grid::Scalar`], which is implemented for `f64` (fast
//! sweeps) and [`Rational`] (exact identity checks).

pub mod acceptance;
pub mod dyadic;
pub mod error;
pub mod fmt;
pub mod grid;
pub mod kernels;
pub mod means;
pub mod par;
pub mod sweep;
pub mod variation;
pub mod walsh;

pub use dyadic::{BlockRuns, DyadicIndex, DyadicPoint, HarmonicValue};
pub use error::{Error, Result};
pub use grid::{GridFunction, Scalar, ScalarMode, SpectrumFunction};
pub use par::Parallelism;

/// Arbitrary-precision rational used in exact mode.
pub type Rational = num_rational::BigRational;

/// Largest grid resolution accepted by constructors (2^24 cells).
pub const MAX_RESOLUTION: u32 = 24;

/// Library version, echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
