//! Operator algebra and channel semantics for `n` spin-1/2 nuclei.

mod basis;
mod expm;
mod operator;
mod state;
mod system;

pub use basis::{bits_of, dim_of, level_of, level_of_n, Axis, LevelIndex};
pub use expm::{expm_unitary, hermitian_eigenvalues};
pub use operator::{
    generator, hard_generator, projector, spin_op, transition_op, CMatrix, Operator, Pulse, Sign,
};
pub use state::{
    coherence_order, crush, evolve, max_rel_error, max_rel_error_symmetric, population_spread,
    pure_part, pure_part_with_tol, thermal_deviation, CrushMode, DeviationMatrix, PurePart,
    DEFAULT_PURE_TOL,
};
pub use system::SpinSystem;
