//! Composite Hilbert spaces of two-level particles and truncated field modes.

mod density;
mod layout;
pub mod linalg;
mod operator;
mod state;

pub use density::{partial_trace, trace_distance, DensityOp, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
pub use layout::{compose_layout, Subsystem, SubsystemKind, SystemLayout, E, G};
pub use operator::{annihilation, embed_operator, number, sigma_minus, sigma_plus, tensor_op, LinearOp};
pub use state::{
    basis_state, coherent_mode_state, default_cutoff, superpose, CoherentState, PureState, NORM_TOL,
};

/// Free-function form of [`PureState::tensor`].
pub fn tensor(a: &PureState, b: &PureState) -> crate::Result<PureState> {
    a.tensor(b)
}
