/// One action index per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction(pub Vec<usize>);

impl JointAction {
    pub fn n_agents(&self) -> usize {
        self.0.len()
    }

    /// Row-major flat index (agent 0 slowest, last agent fastest).
    pub fn flat_index(&self, sizes: &[usize]) -> usize {
        debug_assert_eq!(self.0.len(), sizes.len());
        let mut idx = 0;
        for (a, &s) in self.0.iter().zip(sizes.iter()) {
            debug_assert!(*a < s);
            idx = idx * s + a;
        }
        idx
    }

    pub fn from_flat(mut idx: usize, sizes: &[usize]) -> Self {
        let mut out = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            out[i] = idx % sizes[i];
            idx /= sizes[i];
        }
        JointAction(out)
    }

    /// Copy with agent `i`'s action replaced.
    pub fn with_agent(&self, agent: usize, action: usize) -> Self {
        let mut v = self.0.clone();
        v[agent] = action;
        JointAction(v)
    }
}

impl std::fmt::Display for JointAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All joint actions in flat (row-major) order.
pub fn joint_actions(sizes: &[usize]) -> impl Iterator<Item = JointAction> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |i| JointAction::from_flat(i, sizes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trips() {
        let sizes = [3usize, 2, 4];
        for (i, ja) in joint_actions(&sizes).enumerate() {
            assert_eq!(ja.flat_index(&sizes), i);
            assert_eq!(JointAction::from_flat(i, &sizes), ja);
        }
    }
}
