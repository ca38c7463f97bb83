//! Online volunteer notification.
//!
//! Tasks of `S` types arrive over `T` periods (at most one per period).
//! Notifying an active volunteer may get the task done, but it also sends
//! them into a random inactivity spell. This crate builds the LP benchmark,
//! computes ex-ante fractional solutions, turns them into online policies
//! (sparse notification via per-volunteer dynamic programs, scaled-down
//! notification, and several heuristics), simulates them, and provides the
//! canonical hard instances and closed-form bounds used to check all of it.
//!
//! Indices are zero-based throughout the Rust API; file formats and the CLI
//! use 1-based indices.

pub mod bounds;
pub mod error;
pub mod exante;
pub mod experiment;
pub mod format;
pub mod model;
pub mod policies;
pub mod sim;

pub use error::{Error, Result};
pub use model::{FractionalSolution, Instance, InterActivity};
