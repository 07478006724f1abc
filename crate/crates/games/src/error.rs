use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid action {action} for agent {agent} (action space size {size})")]
    InvalidAction {
        agent: usize,
        action: usize,
        size: usize,
    },

    #[error("environment contract violation: {0}")]
    Contract(String),

    #[error("payoff tensor parse error: {0}")]
    Parse(String),
}
