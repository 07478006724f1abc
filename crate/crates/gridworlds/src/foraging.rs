use games::{Environment, GameError, JointAction, Observation, StepOutcome};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{add, resolve_moves, Pos, MOVE_DELTAS};

const SIZE: i64 = 5;
const HORIZON: usize = 25;
const LOAD_ACTION: usize = 4;
const NOOP_ACTION: usize = 5;
const FORAGE_REWARD: f64 = 1.0;
const FAILED_LOAD_PENALTY: f64 = -0.6;

/// Level-Based Foraging on a 5x5 grid with a single food item. A load
/// succeeds iff the summed levels of adjacent loading agents reach the food
/// level; failed attempts are penalised.
pub struct LevelForaging {
    n_agents: usize,
    agents: Vec<Pos>,
    levels: Vec<i64>,
    food: Pos,
    food_level: i64,
    t: usize,
    done: bool,
    event_log: Option<Vec<String>>,
}

impl LevelForaging {
    /// `n_agents` must be 2 or 3. The two-agent variant draws levels so that
    /// only both agents together can forage; the three-agent variant draws
    /// the food level so it may need one, two, or all three agents.
    pub fn new(n_agents: usize) -> Self {
        assert!(n_agents == 2 || n_agents == 3, "LBF supports 2 or 3 agents");
        LevelForaging {
            n_agents,
            agents: vec![(0, 0); n_agents],
            levels: vec![1; n_agents],
            food: (2, 2),
            food_level: 2,
            t: 0,
            done: true,
            event_log: None,
        }
    }

    pub fn enable_event_log(&mut self) {
        self.event_log = Some(Vec::new());
    }

    pub fn take_event_log(&mut self) -> Vec<String> {
        match self.event_log.as_mut() {
            Some(log) => std::mem::take(log),
            None => Vec::new(),
        }
    }

    pub fn food(&self) -> Pos {
        self.food
    }

    pub fn food_level(&self) -> i64 {
        self.food_level
    }

    pub fn agent_positions(&self) -> &[Pos] {
        &self.agents
    }

    pub fn agent_levels(&self) -> &[i64] {
        &self.levels
    }

    fn adjacent_to_food(&self, p: Pos) -> bool {
        (p.0 - self.food.0).abs() + (p.1 - self.food.1).abs() == 1
    }

    fn observation(&self) -> Observation {
        let obs: Vec<Vec<f64>> = (0..self.n_agents).map(|i| self.encode_observation(i)).collect();
        let state = obs.concat();
        Observation { obs, state }
    }

    /// Fixed layout: own level, then (row offset, col offset, level) per
    /// other agent in index order, the same triple for the food, and the
    /// four boundary distances.
    pub fn encode_observation(&self, agent: usize) -> Vec<f64> {
        let me = self.agents[agent];
        let mut v = vec![self.levels[agent] as f64];
        for j in 0..self.n_agents {
            if j == agent {
                continue;
            }
            let p = self.agents[j];
            v.push((p.0 - me.0) as f64);
            v.push((p.1 - me.1) as f64);
            v.push(self.levels[j] as f64);
        }
        v.push((self.food.0 - me.0) as f64);
        v.push((self.food.1 - me.1) as f64);
        v.push(self.food_level as f64);
        v.push(me.0 as f64);
        v.push((SIZE - 1 - me.0) as f64);
        v.push(me.1 as f64);
        v.push((SIZE - 1 - me.1) as f64);
        v
    }
}

impl Environment for LevelForaging {
    fn n_agents(&self) -> usize {
        self.n_agents
    }

    fn action_sizes(&self) -> Vec<usize> {
        vec![6; self.n_agents]
    }

    fn obs_sizes(&self) -> Vec<usize> {
        vec![1 + 3 * (self.n_agents - 1) + 3 + 4; self.n_agents]
    }

    fn state_size(&self) -> usize {
        self.obs_sizes().iter().sum()
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
        let mut cells: Vec<Pos> = (0..SIZE)
            .flat_map(|r| (0..SIZE).map(move |c| (r, c)))
            .collect();
        let f = cells.remove(rng.random_range(0..cells.len()));
        self.food = f;
        self.agents = (0..self.n_agents)
            .map(|_| cells.remove(rng.random_range(0..cells.len())))
            .collect();
        self.levels = (0..self.n_agents).map(|_| rng.random_range(1..=3i64)).collect();
        self.food_level = match self.n_agents {
            2 => {
                // Neither agent alone suffices, both together do.
                let max = self.levels.iter().copied().max().unwrap();
                let sum: i64 = self.levels.iter().sum();
                rng.random_range(max + 1..=sum)
            }
            _ => {
                // Buckets: weakest alone / a random pair / all three.
                match rng.random_range(0..3u8) {
                    0 => self.levels.iter().copied().min().unwrap(),
                    1 => {
                        let i = rng.random_range(0..self.n_agents);
                        let mut j = rng.random_range(0..self.n_agents - 1);
                        if j >= i {
                            j += 1;
                        }
                        self.levels[i] + self.levels[j]
                    }
                    _ => self.levels.iter().sum(),
                }
            }
        };
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
        if joint.0.len() != self.n_agents {
            return Err(GameError::Contract(format!(
                "expected {} actions",
                self.n_agents
            )));
        }
        for (agent, &a) in joint.0.iter().enumerate() {
            if a > NOOP_ACTION {
                return Err(GameError::InvalidAction {
                    agent,
                    action: a,
                    size: 6,
                });
            }
        }

        let mut rewards = vec![0.0; self.n_agents];
        // Loading: only attempts adjacent to the food count.
        let loaders: Vec<usize> = (0..self.n_agents)
            .filter(|&i| joint.0[i] == LOAD_ACTION && self.adjacent_to_food(self.agents[i]))
            .collect();
        if !loaders.is_empty() {
            let level_sum: i64 = loaders.iter().map(|&i| self.levels[i]).sum();
            if level_sum >= self.food_level {
                for &i in &loaders {
                    rewards[i] += FORAGE_REWARD;
                }
                self.done = true;
            } else {
                for &i in &loaders {
                    rewards[i] += FAILED_LOAD_PENALTY;
                }
            }
        }

        if !self.done {
            let food = self.food;
            let proposals: Vec<Pos> = (0..self.n_agents)
                .map(|i| {
                    let a = joint.0[i];
                    if a < 4 {
                        add(self.agents[i], MOVE_DELTAS[a])
                    } else {
                        self.agents[i]
                    }
                })
                .collect();
            self.agents = resolve_moves(&self.agents, &proposals, |p| {
                p.0 < 0 || p.0 >= SIZE || p.1 < 0 || p.1 >= SIZE || p == food
            });
        }

        self.t += 1;
        if self.t >= HORIZON {
            self.done = true;
        }
        if self.event_log.is_some() {
            let pos: Vec<String> = self
                .agents
                .iter()
                .map(|p| format!("{},{}", p.0, p.1))
                .collect();
            let act: Vec<String> = joint.0.iter().map(|a| a.to_string()).collect();
            let rew: Vec<String> = rewards.iter().map(|r| r.to_string()).collect();
            let line = format!("{},{},{},{}", self.t, pos.join(","), act.join(","), rew.join(","));
            self.event_log.as_mut().unwrap().push(line);
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
