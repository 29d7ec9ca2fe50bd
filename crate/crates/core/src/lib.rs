//! Single-elevator dispatching.
//!
//! A route is a permutation of every floor in the building with its head
//! pinned to the elevator's starting floor. Its cost is the average passenger
//! journey time (waiting plus riding). This crate provides:
//!
//! - [`problem`]: instances, routes and feasibility.
//! - [`cost`]: the closed-form per-passenger timing model and route fitness.
//! - [`oracle`]: a discrete-event simulator and an exhaustive search used to
//!   check the cost model and the optimizers.
//! - [`encoding`]: continuous-to-permutation decoders and route neighborhoods.
//! - [`algorithms`]: simulated annealing, a genetic algorithm, particle swarm
//!   and whale optimization behind one run interface.
//! - [`harness`]: multi-run comparisons and convergence export.
//! - [`cli`]: the `edp` command-line front end.

pub mod algorithms;
pub mod cli;
pub mod cost;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod problem;

pub use error::{Error, Result};
pub use problem::{Passenger, ProblemInstance, Route, TimingParams};
