//! Equilibrium analysis vs an independent brute-force oracle on random games.
//!
//! The oracle takes a different route than the library: Nash via explicit
//! best-response sets per opponent profile, Pareto via building the full
//! dominated set from all ordered pairs.

use std::collections::BTreeSet;

use games::{joint_actions, pareto_optimal, pure_nash, JointAction, PayoffTensorBase};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nash_oracle(p: &PayoffTensorBase<i64>) -> BTreeSet<JointAction> {
    let sizes = p.action_sizes().to_vec();
    let n = p.n_agents();
    let mut out = BTreeSet::new();
    for ja in joint_actions(&sizes) {
        let mut is_nash = true;
        for agent in 0..n {
            // Best-response set of `agent` against the others' profile.
            let mut best = i64::MIN;
            for a in 0..sizes[agent] {
                best = best.max(p.payoff(&ja.with_agent(agent, a), agent));
            }
            let br: BTreeSet<usize> = (0..sizes[agent])
                .filter(|&a| p.payoff(&ja.with_agent(agent, a), agent) == best)
                .collect();
            if !br.contains(&ja.0[agent]) {
                is_nash = false;
                break;
            }
        }
        if is_nash {
            out.insert(ja);
        }
    }
    out
}

fn pareto_oracle(p: &PayoffTensorBase<i64>) -> BTreeSet<JointAction> {
    let sizes = p.action_sizes().to_vec();
    let n = p.n_agents();
    let mut dominated: BTreeSet<JointAction> = BTreeSet::new();
    for a in joint_actions(&sizes) {
        for b in joint_actions(&sizes) {
            if a == b {
                continue;
            }
            let pa = p.payoffs(&a);
            let pb = p.payoffs(&b);
            let all_geq = (0..n).all(|i| pb[i] >= pa[i]);
            let any_gt = (0..n).any(|i| pb[i] > pa[i]);
            if all_geq && any_gt {
                dominated.insert(a.clone());
            }
        }
    }
    joint_actions(&sizes).filter(|a| !dominated.contains(a)).collect()
}

fn random_game(rng: &mut ChaCha8Rng) -> PayoffTensorBase<i64> {
    let n = rng.random_range(2..=3usize);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=4usize)).collect();
    PayoffTensorBase::from_fn(sizes, |_| {
        (0..n).map(|_| rng.random_range(-10..=10i64)).collect()
    })
}

#[test]
fn nash_and_pareto_match_brute_force_on_1000_random_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for _ in 0..1000 {
        let game = random_game(&mut rng);
        assert_eq!(pure_nash(&game), nash_oracle(&game));
        assert_eq!(pareto_optimal(&game), pareto_oracle(&game));
    }
}
