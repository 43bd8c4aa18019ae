//! Small hand-built games used by the test-suites and the CLI smoke tests.

use std::collections::BTreeMap;

use crate::game::{GameGraph, Lasso, Objective, ObjectiveSet};
use crate::witness::{EntryKey, SymbolicWitness};

/// Two-player Büchi game on seven vertices `v0..v6`.
///
/// Player 2 owns `v0` and `v4`, player 1 owns the rest. Edges:
/// `v0→v1, v0→v4, v1→v2, v2→v1, v2→v3, v3→v3, v4→v5, v4→v6, v5→v5, v6→v6`.
/// Player 1 wants to see `v1` infinitely often, player 2 wants `v3` or `v5`.
pub fn running_example() -> (GameGraph, ObjectiveSet) {
    let names = (0..7).map(|i| format!("v{i}")).collect();
    let owner = vec![1, 0, 0, 0, 1, 0, 0];
    let edges = [
        (0, 1),
        (0, 4),
        (1, 2),
        (2, 1),
        (2, 3),
        (3, 3),
        (4, 5),
        (4, 6),
        (5, 5),
        (6, 6),
    ];
    let game = GameGraph::new(2, names, owner, &edges, 0).expect("valid game");
    let objectives = ObjectiveSet::new(
        &game,
        vec![
            Objective::Buchi(game.set_of([1])),
            Objective::Buchi(game.set_of([3, 5])),
        ],
    )
    .expect("valid objectives");
    (game, objectives)
}

/// One vertex `u` with a self-loop, owned by player 1, Büchi target `{u}`.
pub fn self_loop() -> (GameGraph, ObjectiveSet) {
    let game = GameGraph::new(1, vec!["u".into()], vec![0], &[(0, 0)], 0).expect("valid game");
    let objectives =
        ObjectiveSet::new(&game, vec![Objective::Buchi(game.set_of([0]))]).expect("valid objectives");
    (game, objectives)
}

/// Good witness for payoff `01` at `v0` of [`running_example`]: the outcome
/// `v0 v1 v2 v3^ω`, with punishments for every deviation.
pub fn running_witness() -> SymbolicWitness {
    let key = |i: usize, v: usize| EntryKey {
        deviator: i,
        vertex: v,
    };
    let l = |prefix: &[usize], cycle: &[usize]| Lasso::new(prefix.to_vec(), cycle.to_vec());
    let lassoes = BTreeMap::from([
        (key(0, 0), l(&[0, 1, 2], &[3])),
        (key(2, 4), l(&[4], &[5])),
        (key(1, 2), l(&[2], &[3])),
        (key(1, 1), l(&[1, 2], &[3])),
        (key(1, 3), l(&[], &[3])),
        (key(2, 5), l(&[], &[5])),
        (key(2, 6), l(&[], &[6])),
        (key(1, 5), l(&[], &[5])),
        (key(1, 6), l(&[], &[6])),
        (key(2, 1), l(&[1, 2], &[3])),
    ]);
    SymbolicWitness { root: 0, lassoes }
}
