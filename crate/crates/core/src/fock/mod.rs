//! Linear algebra on the truncated Fock space.

mod expm;
pub(crate) mod matrix;
mod operator;
mod state;
mod truncation;

pub use expm::{exp_action, generator_norm, matrix_exponential, matrix_exponential_with, ExpmOptions};
pub use operator::{
    build_ladder, commutator, embed_mode, kron, ladder, sandwich_low_block, FockOperator, OperatorJson,
};
pub use state::{apply, inner, normalize, vec_norm, FockState, StateJson};
pub use truncation::{levels_of, low_indices, Modes, Truncation};
