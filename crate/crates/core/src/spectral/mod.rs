//! Birman–Schwinger reduction: Nyström matrix, Perron eigenpair, bound state.

mod eigen;
mod ground;
mod matrix;
mod strong;

pub use eigen::{max_eigenpair, max_eigenpair_with, EigenOptions, Eigenpair};
pub use ground::{
    eigenfunction_at, ground_state, ground_state_with, largest_eigenvalue, GroundStateOptions,
    GroundStateResult,
};
pub use matrix::{assemble_bs_matrix, BsMatrix, QuadratureScheme, CLOSURE_TOLERANCE};
pub use strong::strong_coupling_reference;
