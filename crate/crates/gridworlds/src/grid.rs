pub type Pos = (i64, i64);

/// Cardinal moves: 0 up, 1 down, 2 left, 3 right.
pub const MOVE_DELTAS: [Pos; 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

pub fn add(p: Pos, d: Pos) -> Pos {
    (p.0 + d.0, p.1 + d.1)
}

/// Joint move resolution: a proposal is cancelled if its target is blocked,
/// occupied by any agent's current cell, or contested by another proposal.
/// Order-free by construction.
pub fn resolve_moves(
    positions: &[Pos],
    proposals: &[Pos],
    mut blocked: impl FnMut(Pos) -> bool,
) -> Vec<Pos> {
    let n = positions.len();
    let mut target: Vec<Pos> = Vec::with_capacity(n);
    for i in 0..n {
        let t = proposals[i];
        let hits_agent = positions.iter().enumerate().any(|(j, &p)| j != i && p == t);
        if t == positions[i] || blocked(t) || hits_agent {
            target.push(positions[i]);
        } else {
            target.push(t);
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let contested = (0..n).any(|j| j != i && target[j] == target[i]);
        out.push(if contested { positions[i] } else { target[i] });
    }
    out
}

/// Breadth-first distance field from `start`, treating `blocked` cells as
/// impassable. Neighbour expansion order follows MOVE_DELTAS, so paths are
/// deterministic.
pub fn bfs_distances(
    height: i64,
    width: i64,
    start: Pos,
    mut blocked: impl FnMut(Pos) -> bool,
) -> Vec<Vec<i64>> {
    let mut dist = vec![vec![i64::MAX; width as usize]; height as usize];
    let mut queue = std::collections::VecDeque::new();
    dist[start.0 as usize][start.1 as usize] = 0;
    queue.push_back(start);
    while let Some(p) = queue.pop_front() {
        let d = dist[p.0 as usize][p.1 as usize];
        for delta in MOVE_DELTAS {
            let q = add(p, delta);
            if q.0 < 0 || q.0 >= height || q.1 < 0 || q.1 >= width {
                continue;
            }
            if blocked(q) || dist[q.0 as usize][q.1 as usize] != i64::MAX {
                continue;
            }
            dist[q.0 as usize][q.1 as usize] = d + 1;
            queue.push_back(q);
        }
    }
    dist
}
