//! Added-mass partitioned (AMP) coupling of linearized incompressible flow with
//! thin structural shells.
//!
//! The crate contains everything needed to run and verify the scheme on a
//! periodic channel `(0, L) x (-H, 0)` whose upper boundary is an elastic shell:
//!
//! - [`params`]: physical constants, model-problem presets and run configuration.
//! - [`grid`]: the Cartesian grid and ghost-padded node arrays.
//! - [`shell`]: the discrete shell operator with leap-frog / trapezoidal updates.
//! - [`fluid`]: velocity-pressure Stokes stages and the pressure Poisson solve.
//! - [`coupling`]: interface conditions and the AMP / traditional time steps.
//! - [`modes`]: Fourier-mode stability theory for both coupling schemes.
//! - [`exact`]: traveling-wave and manufactured exact solutions.
//! - [`harness`]: runs, convergence studies, scheme comparisons and output files.
//!
//! Data-parallel loops go through [`exec::Exec`]; building without the default
//! `parallel` feature removes rayon and every loop runs sequentially.

pub mod coupling;
pub mod error;
pub mod exact;
pub mod exec;
pub mod fluid;
pub mod grid;
pub mod harness;
pub mod linalg;
pub mod modes;
pub mod params;
pub mod shell;

pub use error::{Error, Result};
pub use exec::Exec;
