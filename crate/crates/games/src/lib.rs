//! Normal-form game machinery: payoff tensors, exact equilibrium analysis,
//! the 2x2 no-conflict taxonomy, and the one-shot matrix-game environment
//! with the POSG environment contract the rest of the workspace trains on.

mod analysis;
mod env;
mod error;
mod joint;
mod payoff;
mod taxonomy;

pub use analysis::{
    classify_convergence, is_no_conflict, pareto_optimal, pure_nash, ConvergenceLabel,
    GameAnalysis,
};
pub use env::{Environment, MatrixEnv, Observation, StepOutcome};
pub use error::GameError;
pub use joint::{joint_actions, JointAction};
pub use payoff::{
    climbing_2, climbing_3, penalty, prisoners_dilemma, stag_hunt, PayoffTensorBase, PayoffValue,
};
pub use taxonomy::{canonical_2x2, enumerate_no_conflict_2x2};

/// Payoff tensor in the training precision. The taxonomy uses exact `i64`
/// ordinal payoffs via [`PayoffTensorBase`] directly.
pub type PayoffTensor = PayoffTensorBase<f64>;
