use games::Environment;
use gridworlds::BoulderPush;

fn main() {
    let mut env = BoulderPush::new();
    env.reset(9);
    for t in 0..50 {
        let ja = env.scripted_optimal_action();
        let push = env.push_cells();
        let out = env.step(&ja).unwrap();
        let s: Vec<i64> = out.state.iter().map(|v| *v as i64).collect();
        // agent0 abs pos from boundary distances: s[4]=row, s[6]=col; agent1: s[13], s[15]
        println!(
            "t={t} act={:?} rew={:?} push={:?} a0=({},{}) a1=({},{}) bould_off0=({},{}) dir={}",
            ja.0, out.rewards, push, s[4], s[6], s[13], s[15], s[2], s[3], s[8]
        );
        if out.done { println!("done"); break; }
    }
}
