//! High-order finite-volume building blocks for the compressible Euler
//! equations on uniform Cartesian grids.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//! ideal-gas physics, an exact Riemann solver with wave-speed bounds, eight
//! interface fluxes, WENO reconstruction of orders 3/5/7, the bDeC time
//! integrator, the semidiscrete finite-volume driver and the benchmark
//! catalog. File formats and the command line live in the `wenodec` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod linalg;
pub mod math;

pub mod bench;
pub mod dec;
pub mod euler;
pub mod flux;
pub mod fv;
pub mod quadrature;
pub mod riemann;
pub mod weno;

pub use error::{Error, Result};
pub use euler::{Conserved, Direction, Eigensystem, GasModel, Primitive};
pub use flux::{FluxContext, FluxScheme};
pub use weno::{VariableMode, WenoConfig};
