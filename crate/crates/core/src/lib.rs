//! Axisymmetric nonlinear force-free magnetic fields.
//!
//! The crate evaluates the explicit Chandrasekhar solution, relaxes Clebsch
//! potentials to helicity-constrained energy minimizers on a truncated
//! half-plane grid, and simulates resistive flux transport while tracking the
//! balance laws of generalized magnetic helicity and mean-square potential.

pub mod error;
pub mod quad;
pub mod specfun;
pub mod fields;
pub mod clebsch;
pub mod relax;
pub mod fluxsim;
pub mod cli;

pub use error::{Error, Result};
