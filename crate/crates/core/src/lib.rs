//! State transition optimization.
//!
//! A single incumbent state is transformed repeatedly and replaced only when a
//! transformation produces something strictly better.
//!
//! * Continuous problems ([`solver::solve`]) use three operators from
//!   [`ops`]: expansion for global search, rotation with a decaying factor for
//!   local search, and translation as a line search after each improvement.
//! * Permutation problems ([`discrete::solve_discrete`]) apply general
//!   elementary transformations (swap, insert and reverse permutation
//!   matrices) to the incumbent tour.
//!
//! [`benchmarks`] holds the sphere, Rosenbrock, Rastrigin and Griewank test
//! functions and [`harness`] runs seeded multi-trial experiments over them.

pub mod benchmarks;
pub mod discrete;
pub mod error;
pub mod harness;
pub mod ops;
pub mod solver;
pub mod state;

pub use error::{Result, StaError};
pub use state::{Bounds, EvaluatedState, Objective, Point, RngStream, SearchParams};
