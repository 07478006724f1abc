use std::collections::BTreeSet;

use crate::analysis::is_no_conflict;
use crate::joint::JointAction;
use crate::payoff::PayoffTensorBase;

/// A 2x2 game as four (u1, u2) cells in row-major order:
/// (0,0), (0,1), (1,0), (1,1).
type Cells = [(i64, i64); 4];

fn to_tensor(cells: &Cells) -> PayoffTensorBase<i64> {
    let mut t = PayoffTensorBase::new(vec![2, 2], 0i64);
    for (i, &(u1, u2)) in cells.iter().enumerate() {
        t.set(&JointAction::from_flat(i, &[2, 2]), &[u1, u2]);
    }
    t
}

fn from_tensor(t: &PayoffTensorBase<i64>) -> Cells {
    let mut cells = [(0, 0); 4];
    for i in 0..4 {
        let p = t.payoffs(&JointAction::from_flat(i, &[2, 2]));
        cells[i] = (p[0], p[1]);
    }
    cells
}

fn swap_rows(c: &Cells) -> Cells {
    [c[2], c[3], c[0], c[1]]
}

fn swap_cols(c: &Cells) -> Cells {
    [c[1], c[0], c[3], c[2]]
}

/// Simultaneous player swap: transpose the table and exchange payoff roles.
fn swap_players(c: &Cells) -> Cells {
    let t = [c[0], c[2], c[1], c[3]];
    t.map(|(u1, u2)| (u2, u1))
}

fn orbit(c: Cells) -> BTreeSet<Cells> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![c];
    while let Some(g) = frontier.pop() {
        if !seen.insert(g) {
            continue;
        }
        frontier.push(swap_rows(&g));
        frontier.push(swap_cols(&g));
        frontier.push(swap_players(&g));
    }
    seen
}

/// Canonical representative of a 2x2 game under row permutation, column
/// permutation and player swap: the lexicographically smallest orbit element.
pub fn canonical_2x2(t: &PayoffTensorBase<i64>) -> PayoffTensorBase<i64> {
    assert_eq!(t.action_sizes(), &[2, 2], "canonical_2x2 is for 2x2 games");
    let cells = from_tensor(t);
    let min = orbit(cells).into_iter().next().expect("orbit is non-empty");
    to_tensor(&min)
}

fn permutations_of_1234() -> Vec<[i64; 4]> {
    let mut out = Vec::with_capacity(24);
    let vals = [1i64, 2, 3, 4];
    let mut idx = [0usize, 1, 2, 3];
    // Heap's algorithm, iterative.
    let mut c = [0usize; 4];
    out.push(vals);
    let mut i = 0;
    while i < 4 {
        if c[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i);
            } else {
                idx.swap(c[i], i);
            }
            out.push([vals[idx[0]], vals[idx[1]], vals[idx[2]], vals[idx[3]]]);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// All structurally distinct strictly ordinal 2x2 no-conflict games: each
/// player's payoffs are a permutation of {1,2,3,4}, deduplicated under the
/// symmetry group, filtered to the no-conflict class, in a stable order.
pub fn enumerate_no_conflict_2x2() -> Vec<PayoffTensorBase<i64>> {
    let perms = permutations_of_1234();
    let mut canon: BTreeSet<Cells> = BTreeSet::new();
    for p1 in &perms {
        for p2 in &perms {
            let cells: Cells = [
                (p1[0], p2[0]),
                (p1[1], p2[1]),
                (p1[2], p2[2]),
                (p1[3], p2[3]),
            ];
            let t = to_tensor(&cells);
            if !is_no_conflict(&t) {
                continue;
            }
            let min = orbit(cells).into_iter().next().unwrap();
            canon.insert(min);
        }
    }
    canon.into_iter().map(|c| to_tensor(&c)).collect()
}
