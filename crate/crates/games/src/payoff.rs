use std::fmt::{Debug, Display};
use std::str::FromStr;

use crate::error::GameError;
use crate::joint::{joint_actions, JointAction};

/// Scalar a payoff tensor may hold. Training uses `f64`; the ordinal
/// taxonomy uses exact `i64` payoffs.
pub trait PayoffValue:
    Copy + PartialOrd + PartialEq + Display + Debug + FromStr + Send + Sync + 'static
{
}

impl PayoffValue for f64 {}
impl PayoffValue for i64 {}

/// N-dimensional array of per-agent rewards indexed by joint action.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTensorBase<T: PayoffValue> {
    action_sizes: Vec<usize>,
    /// `data[flat(joint) * n_agents + agent]`
    data: Vec<T>,
}

impl<T: PayoffValue> PayoffTensorBase<T> {
    pub fn new(action_sizes: Vec<usize>, fill: T) -> Self {
        let n = action_sizes.len();
        let cells: usize = action_sizes.iter().product();
        PayoffTensorBase {
            action_sizes,
            data: vec![fill; cells * n],
        }
    }

    pub fn from_fn(action_sizes: Vec<usize>, mut f: impl FnMut(&JointAction) -> Vec<T>) -> Self {
        let n = action_sizes.len();
        let mut data = Vec::with_capacity(action_sizes.iter().product::<usize>() * n);
        for ja in joint_actions(&action_sizes) {
            let r = f(&ja);
            assert_eq!(r.len(), n, "payoff vector length must equal agent count");
            data.extend(r);
        }
        PayoffTensorBase { action_sizes, data }
    }

    pub fn n_agents(&self) -> usize {
        self.action_sizes.len()
    }

    pub fn action_sizes(&self) -> &[usize] {
        &self.action_sizes
    }

    pub fn num_joint_actions(&self) -> usize {
        self.action_sizes.iter().product()
    }

    pub fn payoffs(&self, joint: &JointAction) -> &[T] {
        let n = self.n_agents();
        let i = joint.flat_index(&self.action_sizes);
        &self.data[i * n..(i + 1) * n]
    }

    pub fn payoff(&self, joint: &JointAction, agent: usize) -> T {
        self.payoffs(joint)[agent]
    }

    pub fn set(&mut self, joint: &JointAction, values: &[T]) {
        let n = self.n_agents();
        assert_eq!(values.len(), n);
        let i = joint.flat_index(&self.action_sizes);
        self.data[i * n..(i + 1) * n].copy_from_slice(values);
    }

    pub fn joint_actions(&self) -> impl Iterator<Item = JointAction> + '_ {
        joint_actions(&self.action_sizes)
    }

    /// True iff all agents receive the same reward at every joint action.
    pub fn common_reward(&self) -> bool {
        let n = self.n_agents();
        self.data.chunks(n).all(|c| c.iter().all(|v| *v == c[0]))
    }

    /// Plain-text serialisation: first line `N sizes...`, then one line per
    /// joint action `indices : payoff_1 ... payoff_N`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}", self.n_agents()));
        for s in &self.action_sizes {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
        for ja in self.joint_actions() {
            let idx: Vec<String> = ja.0.iter().map(|a| a.to_string()).collect();
            let pays: Vec<String> = self.payoffs(&ja).iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("{} : {}\n", idx.join(" "), pays.join(" ")));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GameError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GameError::Parse("empty input".into()))?;
        let mut head_it = header.split_whitespace();
        let n: usize = head_it
            .next()
            .ok_or_else(|| GameError::Parse("missing agent count".into()))?
            .parse()
            .map_err(|_| GameError::Parse("bad agent count".into()))?;
        let sizes: Vec<usize> = head_it
            .map(|t| t.parse().map_err(|_| GameError::Parse(format!("bad size {t}"))))
            .collect::<Result<_, _>>()?;
        if sizes.len() != n || n == 0 {
            return Err(GameError::Parse(format!(
                "expected {n} action sizes, got {}",
                sizes.len()
            )));
        }
        let cells: usize = sizes.iter().product();
        let mut data: Vec<Option<T>> = vec![None; cells * n];
        for line in lines {
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| GameError::Parse(format!("missing ':' in line {line:?}")))?;
            let idx: Vec<usize> = lhs
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| GameError::Parse(format!("bad index {t}"))))
                .collect::<Result<_, _>>()?;
            if idx.len() != n {
                return Err(GameError::Parse(format!("wrong index arity in {line:?}")));
            }
            for (a, &s) in idx.iter().zip(sizes.iter()) {
                if *a >= s {
                    return Err(GameError::Parse(format!("index out of range in {line:?}")));
                }
            }
            let pays: Vec<T> = rhs
                .split_whitespace()
                .map(|t| {
                    t.parse::<T>()
                        .map_err(|_| GameError::Parse(format!("bad payoff {t}")))
                })
                .collect::<Result<_, _>>()?;
            if pays.len() != n {
                return Err(GameError::Parse(format!("wrong payoff arity in {line:?}")));
            }
            let flat = JointAction(idx).flat_index(&sizes);
            for (k, p) in pays.into_iter().enumerate() {
                data[flat * n + k] = Some(p);
            }
        }
        let data: Vec<T> = data
            .into_iter()
            .collect::<Option<Vec<T>>>()
            .ok_or_else(|| GameError::Parse("payoff table incomplete".into()))?;
        Ok(PayoffTensorBase {
            action_sizes: sizes,
            data,
        })
    }
}

impl PayoffTensorBase<i64> {
    pub fn to_f64(&self) -> PayoffTensorBase<f64> {
        PayoffTensorBase {
            action_sizes: self.action_sizes.clone(),
            data: self.data.iter().map(|&v| v as f64).collect(),
        }
    }
}

fn common(sizes: Vec<usize>, table: &[f64]) -> PayoffTensorBase<f64> {
    let n = sizes.len();
    assert_eq!(table.len(), sizes.iter().product::<usize>());
    PayoffTensorBase {
        data: table.iter().flat_map(|&v| std::iter::repeat(v).take(n)).collect(),
        action_sizes: sizes,
    }
}

/// Stag Hunt: two pure equilibria, (A,A) Pareto-optimal, (B,B) risk-averse.
pub fn stag_hunt() -> PayoffTensorBase<f64> {
    let mut t = PayoffTensorBase::new(vec![2, 2], 0.0);
    t.set(&JointAction(vec![0, 0]), &[4.0, 4.0]);
    t.set(&JointAction(vec![0, 1]), &[0.0, 3.0]);
    t.set(&JointAction(vec![1, 0]), &[3.0, 0.0]);
    t.set(&JointAction(vec![1, 1]), &[2.0, 2.0]);
    t
}

/// Two-agent Climbing game (common reward).
pub fn climbing_2() -> PayoffTensorBase<f64> {
    common(
        vec![3, 3],
        &[
            11.0, -30.0, 0.0, //
            -30.0, 7.0, 0.0, //
            0.0, 6.0, 5.0,
        ],
    )
}

/// Three-agent Climbing game (common reward), indexed `[a1][a2][a3]`.
pub fn climbing_3() -> PayoffTensorBase<f64> {
    let mut table = vec![0.0; 27];
    let mut set = |a1: usize, a2: usize, a3: usize, v: f64| {
        table[a1 * 9 + a2 * 3 + a3] = v;
    };
    set(0, 0, 0, 11.0);
    set(0, 1, 0, -30.0);
    set(1, 0, 0, -30.0);
    set(0, 0, 1, -30.0);
    set(0, 0, 2, -30.0);
    set(1, 1, 1, 7.0);
    set(2, 1, 2, 6.0);
    set(2, 2, 2, 5.0);
    common(vec![3, 3, 3], &table)
}

/// Penalty game (common reward): Pareto-optimal equilibria (A,C) and (C,A).
pub fn penalty() -> PayoffTensorBase<f64> {
    common(
        vec![3, 3],
        &[
            -100.0, 0.0, 10.0, //
            0.0, 2.0, 0.0, //
            10.0, 0.0, -100.0,
        ],
    )
}

/// Classic Prisoner's Dilemma with actions (C, D); a conflict game used in
/// tests of the no-conflict predicate and Pareto analysis.
pub fn prisoners_dilemma() -> PayoffTensorBase<f64> {
    let mut t = PayoffTensorBase::new(vec![2, 2], 0.0);
    t.set(&JointAction(vec![0, 0]), &[-1.0, -1.0]);
    t.set(&JointAction(vec![0, 1]), &[-3.0, 0.0]);
    t.set(&JointAction(vec![1, 0]), &[0.0, -3.0]);
    t.set(&JointAction(vec![1, 1]), &[-2.0, -2.0]);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_match_printed_tables() {
        let c3 = climbing_3();
        assert_eq!(c3.payoff(&JointAction(vec![0, 0, 0]), 0), 11.0);
        assert_eq!(c3.payoff(&JointAction(vec![1, 1, 1]), 2), 7.0);
        assert_eq!(c3.payoff(&JointAction(vec![2, 1, 2]), 0), 6.0);
        assert_eq!(c3.payoff(&JointAction(vec![2, 2, 2]), 1), 5.0);
        assert_eq!(c3.payoff(&JointAction(vec![0, 1, 0]), 0), -30.0);
        assert!(c3.common_reward());

        let p = penalty();
        assert_eq!(p.payoff(&JointAction(vec![0, 0]), 0), -100.0);
        assert_eq!(p.payoff(&JointAction(vec![0, 2]), 1), 10.0);
        assert!(p.common_reward());

        assert!(!stag_hunt().common_reward());
        assert!(!prisoners_dilemma().common_reward());
    }
}
