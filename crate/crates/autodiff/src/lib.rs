//! Dense-tensor numerics with reverse-mode automatic differentiation.
//!
//! The crate provides the pieces a small actor-critic stack needs and nothing
//! more: rank-2 tensors of a generic float scalar, a tape-based gradient
//! graph, fully connected and GRU network blocks, softmax utilities, and an
//! Adam optimiser with global gradient-norm clipping.
//!
//! Core math is generic over the scalar type via [`Scalar`]; the crate root
//! exports `f64` aliases which the rest of the workspace uses.

mod error;
mod graph;
mod nn;
mod optim;
mod prob;
mod scalar;
mod store;
mod tensor;

pub use error::AdError;
pub use graph::{GraphBase, NodeId};
pub use nn::{orthogonal_init, GruParams, MlpParams, NetArch};
pub use optim::{clip_global_norm, sgd_step, AdamBase, AdamHyper};
pub use prob::{categorical_sample, entropy, log_softmax, softmax};
pub use scalar::Scalar;
pub use store::{ParamId, ParamStoreBase};
pub use tensor::TensorBase;

/// Workspace-wide concrete precision: 64-bit floats throughout.
pub type Tensor = TensorBase<f64>;
pub type Graph = GraphBase<f64>;
pub type ParamStore = ParamStoreBase<f64>;
pub type Adam = AdamBase<f64>;
