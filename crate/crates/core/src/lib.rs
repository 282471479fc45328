//! Exact complex-order fractional reduction of lumped mass-spring-damper
//! chains, and fractional model synthesis from Bode data.
//!
//! ```
//! use fracred::chain::{build_chain, integer_tf, FrequencyGrid};
//! use fracred::numerics::NewtonConfig;
//! use fracred::reduction::{reduce_to_fndof, sweep_fsdof, MassPartition};
//!
//! let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
//! let grid = FrequencyGrid::log(0.01, 100.0, 101)?;
//!
//! // Force on DOF 1, match DOF 1.
//! let fsdof = sweep_fsdof(&model, 1, 1, &grid)?;
//!
//! // Match DOFs 1 and 3 with the masses lumped as {1,2} and {3,4}.
//! let part = MassPartition::from_active(&[1, 3], 4)?;
//! let fndof = reduce_to_fndof(&model, 1, &[1, 3], &part, &grid, &NewtonConfig::default())?;
//!
//! let h = integer_tf(&model, 1, 3, 1.0)?;
//! let g = fndof.response_at(50)?[1];
//! assert!((g - h).norm() < 1e-10 * h.norm() && fsdof.all_converged());
//! # Ok::<(), fracred::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod cli;
pub mod error;
pub mod fractional;
pub mod io;
pub mod numerics;
pub mod oracle;
pub mod plot;
pub mod reduction;
pub mod sysid;
pub mod testing;

pub use error::{Error, Result};
