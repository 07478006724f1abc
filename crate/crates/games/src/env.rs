use crate::error::GameError;
use crate::joint::JointAction;
use crate::payoff::PayoffTensorBase;

/// Per-agent observations plus the global state the centralised critics see.
#[derive(Clone, Debug)]
pub struct Observation {
    pub obs: Vec<Vec<f64>>,
    pub state: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub obs: Vec<Vec<f64>>,
    pub state: Vec<f64>,
    pub rewards: Vec<f64>,
    pub done: bool,
}

/// POSG environment contract. Implementations are deterministic given the
/// reset seed and the action sequence, and terminate by the horizon at the
/// latest.
pub trait Environment: Send {
    fn n_agents(&self) -> usize;
    fn action_sizes(&self) -> Vec<usize>;
    fn obs_sizes(&self) -> Vec<usize>;
    fn state_size(&self) -> usize;
    fn horizon(&self) -> usize;
    fn common_reward(&self) -> bool;
    /// Declared class of the game; algorithm/environment compatibility
    /// checks use this together with `common_reward`.
    fn no_conflict(&self) -> bool;
    fn reset(&mut self, seed: u64) -> Observation;
    fn step(&mut self, joint: &JointAction) -> Result<StepOutcome, GameError>;
}

/// One-shot matrix game: horizon 1, constant dummy observation, rewards from
/// the payoff tensor.
pub struct MatrixEnv {
    payoffs: PayoffTensorBase<f64>,
    common: bool,
    no_conflict: bool,
    awaiting_reset: bool,
}

impl MatrixEnv {
    pub fn new(payoffs: PayoffTensorBase<f64>) -> Self {
        let common = payoffs.common_reward();
        let no_conflict = crate::analysis::is_no_conflict(&payoffs);
        MatrixEnv {
            payoffs,
            common,
            no_conflict,
            awaiting_reset: true,
        }
    }

    pub fn payoffs(&self) -> &PayoffTensorBase<f64> {
        &self.payoffs
    }

    fn constant_obs(&self) -> Observation {
        Observation {
            obs: vec![vec![1.0]; self.payoffs.n_agents()],
            state: vec![1.0],
        }
    }
}

impl Environment for MatrixEnv {
    fn n_agents(&self) -> usize {
        self.payoffs.n_agents()
    }

    fn action_sizes(&self) -> Vec<usize> {
        self.payoffs.action_sizes().to_vec()
    }

    fn obs_sizes(&self) -> Vec<usize> {
        vec![1; self.payoffs.n_agents()]
    }

    fn state_size(&self) -> usize {
        1
    }

    fn horizon(&self) -> usize {
        1
    }

    fn common_reward(&self) -> bool {
        self.common
    }

    fn no_conflict(&self) -> bool {
        self.no_conflict
    }

    fn reset(&mut self, _seed: u64) -> Observation {
        self.awaiting_reset = false;
        self.constant_obs()
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepOutcome, GameError> {
        if self.awaiting_reset {
            return Err(GameError::Contract(
                "step called on a finished episode; call reset first".into(),
            ));
        }
        if joint.n_agents() != self.n_agents() {
            return Err(GameError::Contract(format!(
                "joint action arity {} != {} agents",
                joint.n_agents(),
                self.n_agents()
            )));
        }
        for (agent, (&a, &s)) in joint
            .0
            .iter()
            .zip(self.payoffs.action_sizes().iter())
            .enumerate()
        {
            if a >= s {
                return Err(GameError::InvalidAction {
                    agent,
                    action: a,
                    size: s,
                });
            }
        }
        self.awaiting_reset = true;
        let obs = self.constant_obs();
        Ok(StepOutcome {
            obs: obs.obs,
            state: obs.state,
            rewards: self.payoffs.payoffs(joint).to_vec(),
            done: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{climbing_2, penalty, stag_hunt};

    #[test]
    fn matrix_env_returns_payoffs_and_terminates() {
        let mut env = MatrixEnv::new(stag_hunt());
        env.reset(0);
        let out = env.step(&JointAction(vec![0, 0])).unwrap();
        assert_eq!(out.rewards, vec![4.0, 4.0]);
        assert!(out.done);

        let mut env = MatrixEnv::new(climbing_2());
        env.reset(0);
        let out = env.step(&JointAction(vec![0, 1])).unwrap();
        assert_eq!(out.rewards, vec![-30.0, -30.0]);

        let mut env = MatrixEnv::new(penalty());
        env.reset(0);
        let out = env.step(&JointAction(vec![2, 0])).unwrap();
        assert_eq!(out.rewards, vec![10.0, 10.0]);
    }

    #[test]
    fn matrix_env_rejects_bad_actions_and_double_steps() {
        let mut env = MatrixEnv::new(stag_hunt());
        env.reset(0);
        assert!(matches!(
            env.step(&JointAction(vec![0, 7])),
            Err(GameError::InvalidAction { agent: 1, .. })
        ));
        env.reset(0);
        env.step(&JointAction(vec![0, 0])).unwrap();
        assert!(matches!(
            env.step(&JointAction(vec![0, 0])),
            Err(GameError::Contract(_))
        ));
    }

    #[test]
    fn matrix_env_observation_is_constant() {
        let mut env = MatrixEnv::new(stag_hunt());
        let a = env.reset(1);
        let b = env.reset(99);
        assert_eq!(a.obs, b.obs);
        assert_eq!(a.state, vec![1.0]);
    }
}
