//! Computational core of a topology-aware, dual-scale subseasonal temperature
//! forecasting pipeline: gridded fields and their storage format, critical-point
//! and contour channels, cubical persistent homology with bottleneck distance,
//! dual-trend sample construction, fusion arithmetic, loss kernels and forecast
//! verification.

pub mod error;
pub mod field;
pub mod fusion;
pub mod gfs;
pub mod losses;
pub mod metrics;
pub mod persistence;
pub mod perturb;
pub mod synthetic;
pub mod temporal;
pub mod topo;

pub use error::{Error, Result};
pub use field::{FieldStack, NormStats, ScalarField, SplitSpec};
