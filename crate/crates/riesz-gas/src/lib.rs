//! Numerical laboratory for spherically symmetric compressible Euler-Riesz and
//! Navier-Stokes-Riesz flows.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod io;
pub mod kernel_matrix;
pub mod nsr_solver;
pub mod quadrature;
pub mod radial_kernel;
pub mod regime;
pub mod stability_experiments;
pub mod steady_states;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{RadialField, RadialGrid};
pub use radial_kernel::PotentialSpec;
