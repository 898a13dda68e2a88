//! Finite-difference machinery for the indefinite sublinear Dirichlet problem
//! `-Δu = a(x) u^q` (0 < q < 1) on intervals and radial balls: nonlinear
//! solvers, ground states, weighted principal eigenpairs, and continuation of
//! the solution branch in `q`, including the singular exponent range.

pub mod cli;
pub mod continuation;
pub mod corpus;
pub mod error;
pub mod grid;
pub mod ground_state;
pub mod solver;
pub mod spectrum;
pub mod weight;

pub use error::{Error, Result};
pub use grid::{Field, Grid, GridKind};

