use games::{Environment, GameError, JointAction, Observation, StepOutcome};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{add, bfs_distances, resolve_moves, Pos, MOVE_DELTAS};

const SIZE: i64 = 8;
const HORIZON: usize = 50;
const PUSH_REWARD: f64 = 0.1;
const LONE_PUSH_PENALTY: f64 = -0.1;
const COMPLETION_REWARD: f64 = 1.0;

/// Two agents push a two-cell boulder across an 8x8 grid. The boulder
/// advances only when both agents stand in the push cells behind it and move
/// in the push direction together; pushing alone is penalised.
pub struct BoulderPush {
    agents: [Pos; 2],
    /// Left cell of the boulder; it also occupies (row, col+1).
    boulder: Pos,
    /// -1 pushes toward row 0, +1 toward the bottom edge.
    dir: i64,
    t: usize,
    done: bool,
    event_log: Option<Vec<String>>,
}

impl BoulderPush {
    pub fn new() -> Self {
        BoulderPush {
            agents: [(0, 0), (0, 1)],
            boulder: (3, 3),
            dir: -1,
            t: 0,
            done: true,
            event_log: None,
        }
    }

    /// Per-episode CSV event log (timestep, positions, actions, rewards).
    pub fn enable_event_log(&mut self) {
        self.event_log = Some(Vec::new());
    }

    pub fn take_event_log(&mut self) -> Vec<String> {
        match self.event_log.as_mut() {
            Some(log) => std::mem::take(log),
            None => Vec::new(),
        }
    }

    fn boulder_cells(&self) -> [Pos; 2] {
        [self.boulder, (self.boulder.0, self.boulder.1 + 1)]
    }

    /// Cells agents must occupy to push: directly behind the boulder.
    pub fn push_cells(&self) -> [Pos; 2] {
        let row = self.boulder.0 - self.dir;
        [(row, self.boulder.1), (row, self.boulder.1 + 1)]
    }

    fn push_action(&self) -> usize {
        if self.dir < 0 {
            0
        } else {
            1
        }
    }

    fn observation(&self) -> Observation {
        let obs: Vec<Vec<f64>> = (0..2).map(|i| self.encode_observation(i)).collect();
        let state = obs.concat();
        Observation { obs, state }
    }

    /// Fixed layout: offset to the other agent, offset to the boulder's left
    /// cell, distances to the four grid boundaries, push direction.
    pub fn encode_observation(&self, agent: usize) -> Vec<f64> {
        let me = self.agents[agent];
        let other = self.agents[1 - agent];
        vec![
            (other.0 - me.0) as f64,
            (other.1 - me.1) as f64,
            (self.boulder.0 - me.0) as f64,
            (self.boulder.1 - me.1) as f64,
            me.0 as f64,
            (SIZE - 1 - me.0) as f64,
            me.1 as f64,
            (SIZE - 1 - me.1) as f64,
            self.dir as f64,
        ]
    }

    /// Waiting spots with a guaranteed harmless blocked move: beside the
    /// boulder, or the push cell itself when the boulder band touches a wall.
    fn parking_cells(&self) -> [Pos; 2] {
        let push = self.push_cells();
        let left = if self.boulder.1 >= 1 {
            (self.boulder.0, self.boulder.1 - 1)
        } else {
            push[0]
        };
        let right = if self.boulder.1 + 2 < SIZE {
            (self.boulder.0, self.boulder.1 + 2)
        } else {
            push[1]
        };
        [left, right]
    }

    /// A move guaranteed to cancel (wall or boulder sideways, never the push
    /// action from a push cell), so the agent stays in place.
    fn blocked_stay(&self, me: Pos) -> Option<usize> {
        let boulder_cells = self.boulder_cells();
        let in_push_cell = self.push_cells().contains(&me);
        for (k, delta) in MOVE_DELTAS.iter().enumerate() {
            if in_push_cell && k == self.push_action() {
                continue;
            }
            let q = add(me, *delta);
            if q.0 < 0 || q.0 >= SIZE || q.1 < 0 || q.1 >= SIZE || boulder_cells.contains(&q) {
                return Some(k);
            }
        }
        None
    }

    /// Joint action of a scripted optimal policy for the current state.
    ///
    /// Plan: agent i walks to parking cell i beside the boulder and holds
    /// there with blocked moves (parking cells always have one). Once both
    /// are parked, they enter the push cells over a two-step lockstep path
    /// (row move to the mid cell, then column move in), and push in unison
    /// until the boulder reaches the edge. The lockstep entry cannot
    /// collide, and any desynced state regresses to parking, so waiting
    /// never pushes and the episode return is exactly 1 + 0.1 per advance.
    pub fn scripted_optimal_action(&self) -> JointAction {
        let push = self.push_cells();
        let parking = self.parking_cells();
        let mid = [(push[0].0, parking[0].1), (push[1].0, parking[1].1)];
        let boulder_cells = self.boulder_cells();
        let is_boulder = |p: Pos| boulder_cells.contains(&p);
        let me = self.agents;
        // Moving away from the boulder is never a push.
        let away = 1 - self.push_action();

        let both_on_push = (me[0] == push[0] && me[1] == push[1])
            || (me[0] == push[1] && me[1] == push[0]);
        if both_on_push {
            let a = self.push_action();
            return JointAction(vec![a, a]);
        }

        let phase = |i: usize| -> Option<u8> {
            if me[i] == push[i] {
                Some(2)
            } else if me[i] == mid[i] {
                Some(1)
            } else if me[i] == parking[i] {
                Some(0)
            } else {
                None
            }
        };
        // When the boulder band touches a wall, that side's parking cell is
        // the push cell itself and holds are wall moves.
        let wall_case = parking[0] == push[0] || parking[1] == push[1];

        let mut actions = vec![0usize; 2];
        match (phase(0), phase(1)) {
            (Some(p0), Some(p1)) if p0 == p1 || wall_case => {
                for agent in 0..2 {
                    let ph = [p0, p1][agent];
                    actions[agent] = match ph {
                        2 => self.blocked_stay(me[agent]).unwrap_or(away),
                        1 => {
                            if push[agent].1 < me[agent].1 {
                                2
                            } else {
                                3
                            }
                        }
                        _ => {
                            if mid[agent].0 < me[agent].0 {
                                0
                            } else {
                                1
                            }
                        }
                    };
                }
            }
            _ => {
                // Regroup: walk to own parking cell, hold once there.
                for agent in 0..2 {
                    let my_pos = me[agent];
                    let other_pos = me[1 - agent];
                    if my_pos == parking[agent] {
                        actions[agent] = self.blocked_stay(my_pos).unwrap_or(away);
                        continue;
                    }
                    let f = bfs_distances(SIZE, SIZE, parking[agent], |p| {
                        is_boulder(p) || p == other_pos
                    });
                    let my_d = f[my_pos.0 as usize][my_pos.1 as usize];
                    // Agents scan moves in opposite orders so contested
                    // corridors untangle.
                    let order: Vec<usize> = if agent == 0 {
                        (0..4).collect()
                    } else {
                        (0..4).rev().collect()
                    };
                    let mut chosen = None;
                    if my_d != i64::MAX {
                        for &k in &order {
                            let q = add(my_pos, MOVE_DELTAS[k]);
                            if q.0 < 0
                                || q.0 >= SIZE
                                || q.1 < 0
                                || q.1 >= SIZE
                                || is_boulder(q)
                                || q == other_pos
                            {
                                continue;
                            }
                            if f[q.0 as usize][q.1 as usize] < my_d {
                                chosen = Some(k);
                                break;
                            }
                        }
                    }
                    actions[agent] = chosen
                        .or_else(|| self.blocked_stay(my_pos))
                        .unwrap_or(away);
                }
            }
        }
        JointAction(actions)
    }
}

impl Default for BoulderPush {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for BoulderPush {
    fn n_agents(&self) -> usize {
        2
    }

    fn action_sizes(&self) -> Vec<usize> {
        vec![4, 4]
    }

    fn obs_sizes(&self) -> Vec<usize> {
        vec![9, 9]
    }

    fn state_size(&self) -> usize {
        18
    }

    fn horizon(&self) -> usize {
        HORIZON
    }

    fn common_reward(&self) -> bool {
        false
    }

    fn no_conflict(&self) -> bool {
        true
    }

    fn reset(&mut self, seed: u64) -> Observation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.dir = if rng.random::<bool>() { -1 } else { 1 };
        // Spawn distance to the target edge uniform over 1..=6 pushes.
        let d = rng.random_range(1..=6i64);
        let row = if self.dir < 0 { d } else { SIZE - 1 - d };
        let col = rng.random_range(0..=SIZE - 2);
        self.boulder = (row, col);
        let boulder_cells = self.boulder_cells();
        let mut free: Vec<Pos> = (0..SIZE)
            .flat_map(|r| (0..SIZE).map(move |c| (r, c)))
            .filter(|p| !boulder_cells.contains(p))
            .collect();
        let i = rng.random_range(0..free.len());
        let a0 = free.remove(i);
        let j = rng.random_range(0..free.len());
        let a1 = free[j];
        self.agents = [a0, a1];
        self.t = 0;
        self.done = false;
        self.observation()
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepOutcome, GameError> {
        if self.done {
            return Err(GameError::Contract(
                "step called on a finished episode; call reset first".into(),
            ));
        }
        if joint.0.len() != 2 {
            return Err(GameError::Contract("expected 2 actions".into()));
        }
        for (agent, &a) in joint.0.iter().enumerate() {
            if a >= 4 {
                return Err(GameError::InvalidAction {
                    agent,
                    action: a,
                    size: 4,
                });
            }
        }

        let push_cells = self.push_cells();
        let push_action = self.push_action();
        let pushing: Vec<bool> = (0..2)
            .map(|i| joint.0[i] == push_action && push_cells.contains(&self.agents[i]))
            .collect();

        let mut rewards = vec![0.0; 2];
        if pushing[0] && pushing[1] {
            // The boulder and both agents advance together.
            self.boulder.0 += self.dir;
            for a in self.agents.iter_mut() {
                a.0 += self.dir;
            }
            rewards[0] += PUSH_REWARD;
            rewards[1] += PUSH_REWARD;
            let at_edge = if self.dir < 0 {
                self.boulder.0 == 0
            } else {
                self.boulder.0 == SIZE - 1
            };
            if at_edge {
                rewards[0] += COMPLETION_REWARD;
                rewards[1] += COMPLETION_REWARD;
                self.done = true;
            }
        } else {
            for i in 0..2 {
                if pushing[i] {
                    rewards[i] += LONE_PUSH_PENALTY;
                }
            }
            let boulder_cells = self.boulder_cells();
            let proposals: Vec<Pos> = (0..2)
                .map(|i| {
                    if pushing[i] {
                        self.agents[i] // a lone pusher stays put
                    } else {
                        add(self.agents[i], MOVE_DELTAS[joint.0[i]])
                    }
                })
                .collect();
            let new_pos = resolve_moves(&self.agents, &proposals, |p| {
                p.0 < 0 || p.0 >= SIZE || p.1 < 0 || p.1 >= SIZE || boulder_cells.contains(&p)
            });
            self.agents = [new_pos[0], new_pos[1]];
        }

        self.t += 1;
        if self.t >= HORIZON {
            self.done = true;
        }
        if let Some(log) = self.event_log.as_mut() {
            log.push(format!(
                "{},{},{},{},{},{},{},{},{}",
                self.t,
                self.agents[0].0,
                self.agents[0].1,
                self.agents[1].0,
                self.agents[1].1,
                joint.0[0],
                joint.0[1],
                rewards[0],
                rewards[1]
            ));
        }
        let obs = self.observation();
        Ok(StepOutcome {
            obs: obs.obs,
            state: obs.state,
            rewards,
            done: self.done,
        })
    }
}
