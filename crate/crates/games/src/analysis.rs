use std::collections::BTreeSet;
use std::fmt;

use crate::joint::JointAction;
use crate::payoff::{PayoffTensorBase, PayoffValue};

/// Joint actions where no agent gains by unilateral deviation. Ties count as
/// equilibria (weak inequality).
pub fn pure_nash<T: PayoffValue>(p: &PayoffTensorBase<T>) -> BTreeSet<JointAction> {
    let mut out = BTreeSet::new();
    'joint: for ja in p.joint_actions() {
        for agent in 0..p.n_agents() {
            let own = p.payoff(&ja, agent);
            for alt in 0..p.action_sizes()[agent] {
                if alt == ja.0[agent] {
                    continue;
                }
                if p.payoff(&ja.with_agent(agent, alt), agent) > own {
                    continue 'joint;
                }
            }
        }
        out.insert(ja);
    }
    out
}

/// Joint actions not Pareto-dominated by any other pure joint action.
pub fn pareto_optimal<T: PayoffValue>(p: &PayoffTensorBase<T>) -> BTreeSet<JointAction> {
    let n = p.n_agents();
    let mut out = BTreeSet::new();
    'joint: for ja in p.joint_actions() {
        let mine = p.payoffs(&ja);
        for other in p.joint_actions() {
            if other == ja {
                continue;
            }
            let theirs = p.payoffs(&other);
            let mut weakly_better = true;
            let mut strictly_better = false;
            for i in 0..n {
                if theirs[i] < mine[i] {
                    weakly_better = false;
                    break;
                }
                if theirs[i] > mine[i] {
                    strictly_better = true;
                }
            }
            if weakly_better && strictly_better {
                continue 'joint;
            }
        }
        out.insert(ja);
    }
    out
}

/// True iff every agent's set of payoff-maximising joint actions is the same.
pub fn is_no_conflict<T: PayoffValue>(p: &PayoffTensorBase<T>) -> bool {
    let n = p.n_agents();
    let argmax_set = |agent: usize| -> BTreeSet<JointAction> {
        let mut best: Option<T> = None;
        for ja in p.joint_actions() {
            let v = p.payoff(&ja, agent);
            if best.is_none() || v > best.unwrap() {
                best = Some(v);
            }
        }
        let best = best.expect("non-empty game");
        p.joint_actions()
            .filter(|ja| p.payoff(ja, agent) == best)
            .collect()
    };
    let first = argmax_set(0);
    (1..n).all(|i| argmax_set(i) == first)
}

/// Exact analysis of a finite game restricted to pure joint actions.
#[derive(Clone, Debug, PartialEq)]
pub struct GameAnalysis {
    pub pure_nash: BTreeSet<JointAction>,
    pub pareto_optimal: BTreeSet<JointAction>,
    pub pareto_optimal_nash: BTreeSet<JointAction>,
    pub no_conflict: bool,
}

impl GameAnalysis {
    pub fn analyze<T: PayoffValue>(p: &PayoffTensorBase<T>) -> Self {
        let nash = pure_nash(p);
        let pareto = pareto_optimal(p);
        let both: BTreeSet<JointAction> = nash.intersection(&pareto).cloned().collect();
        GameAnalysis {
            pure_nash: nash,
            pareto_optimal: pareto,
            pareto_optimal_nash: both,
            no_conflict: is_no_conflict(p),
        }
    }
}

/// Where a learned greedy joint action landed relative to the game's
/// equilibrium structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceLabel {
    ParetoOptimalNash,
    DominatedNash,
    NonEquilibrium,
}

impl fmt::Display for ConvergenceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConvergenceLabel::ParetoOptimalNash => "pareto_optimal_nash",
            ConvergenceLabel::DominatedNash => "dominated_nash",
            ConvergenceLabel::NonEquilibrium => "non_equilibrium",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ConvergenceLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pareto_optimal_nash" => Ok(ConvergenceLabel::ParetoOptimalNash),
            "dominated_nash" => Ok(ConvergenceLabel::DominatedNash),
            "non_equilibrium" => Ok(ConvergenceLabel::NonEquilibrium),
            other => Err(format!("unknown convergence label {other:?}")),
        }
    }
}

pub fn classify_convergence<T: PayoffValue>(
    p: &PayoffTensorBase<T>,
    greedy: &JointAction,
) -> ConvergenceLabel {
    let analysis = GameAnalysis::analyze(p);
    if analysis.pareto_optimal_nash.contains(greedy) {
        ConvergenceLabel::ParetoOptimalNash
    } else if analysis.pure_nash.contains(greedy) {
        ConvergenceLabel::DominatedNash
    } else {
        ConvergenceLabel::NonEquilibrium
    }
}
