//! Cascade routes, the population-equalisation residual, the angle solver and
//! the end-to-end preparation pipeline.

mod cascade;
mod pipeline;
mod residual;
mod solver;

pub use cascade::{
    default_cascade, flipped_spin, validate_cascade, CascadeReport, CascadeSpec, CascadeStep,
    CascadeViolation,
};
pub use pipeline::{prepare_pseudo_pure, prepare_with_cascade, Preparation, PrepareOptions};
pub use residual::{cascade_pulses, cascade_unitary, pulsed_state, residual, residual_rad};
pub use solver::{
    solve_angles, start_grid, SolveOptions, SolverResult, StartTrace, PUBLISHED_ANGLES_DEG,
};
