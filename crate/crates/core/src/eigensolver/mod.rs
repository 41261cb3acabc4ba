//! Dense generalized eigensolver and bound-state extraction.

mod banded;
mod dense;
mod spectrum;

pub use dense::{solve, solve_pencil, solve_with, SolverOptions, Strategy};
pub use spectrum::{bound_states, Spectrum};
