//! Minimum transmit-power ceiling for a suborbital node's downlink under an
//! extreme-reliability QoS budget, with satellite interference taken in
//! expectation over Poisson orbital shells.
//!
//! The crate exposes the pipeline in layers: finite-blocklength/queueing
//! calculus ([`qos`]), fading outage ([`fading`]), beam patterns and overlap
//! gains ([`antenna`]), shell geometry and intensity measures ([`geometry`]),
//! the interference expectation with its Monte Carlo cross-check
//! ([`interference`]), and the power-threshold solve ([`solver`]). The
//! [`scenario`] and [`sweep`] modules back the `subolink` command-line tool.

// Validation guards are deliberately written `!(x > 0.0)` so NaN fails them
// too; the partial_cmp rewrite clippy suggests hides that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod defaults;
pub mod error;
mod exec;
pub mod fading;
pub mod geometry;
pub mod interference;
pub mod qos;
pub mod scenario;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use solver::{solve_power_threshold, PowerSolution};
