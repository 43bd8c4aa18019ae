//! Symbolic witnesses: one lasso per deviation index, and their goodness check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fixpoint::LabelTable;
use crate::game::{payoff_of, GameGraph, Lasso, ObjectiveSet, Payoff, Vertex};
use crate::path_oracle::PathOracle;

/// Index `(i, v)` of a witness lasso. `deviator` is 0 for the outcome from
/// the root and the one-based number of the player who moved into `vertex`
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryKey {
    pub deviator: usize,
    pub vertex: Vertex,
}

impl EntryKey {
    pub fn root(v0: Vertex) -> Self {
        Self {
            deviator: 0,
            vertex: v0,
        }
    }

    /// Entry reached when zero-based `player` moves into `vertex`.
    pub fn deviation(player: usize, vertex: Vertex) -> Self {
        Self {
            deviator: player + 1,
            vertex,
        }
    }

    pub fn display(&self, game: &GameGraph) -> String {
        format!("({},{})", self.deviator, game.name(self.vertex))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationIndex {
    pub entries: BTreeSet<EntryKey>,
}

/// `(0, v0)` plus `(i, v')` for every edge `(v, v')` inside the part reachable
/// from `v0` with `v` owned by player `i`.
pub fn deviation_index(game: &GameGraph, v0: Vertex) -> DeviationIndex {
    let reach = game.reachable_from(v0);
    let mut entries = BTreeSet::from([EntryKey::root(v0)]);
    for v in reach.ones() {
        for &w in game.successors(v) {
            entries.insert(EntryKey::deviation(game.owner(v), w));
        }
    }
    DeviationIndex { entries }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicWitness {
    pub root: Vertex,
    pub lassoes: BTreeMap<EntryKey, Lasso>,
}

impl SymbolicWitness {
    pub fn root_lasso(&self) -> Option<&Lasso> {
        self.lassoes.get(&EntryKey::root(self.root))
    }

    pub fn len(&self) -> usize {
        self.lassoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lassoes.is_empty()
    }

    /// Lasso length bound `2·|V|²`.
    pub fn length_bound(game: &GameGraph) -> usize {
        2 * game.vertex_count() * game.vertex_count()
    }

    /// Checks lasso validity, `First(ρ_{i,v}) = v` and the length bound.
    pub fn check_structure(&self, game: &GameGraph) -> Result<()> {
        let bound = Self::length_bound(game);
        if self.root_lasso().is_none() {
            return Err(Error::WitnessIncomplete(EntryKey::root(self.root).display(game)));
        }
        for (key, lasso) in &self.lassoes {
            if key.vertex >= game.vertex_count() || key.deviator > game.player_count() {
                return Err(Error::MalformedWitness(format!(
                    "index ({}, {}) out of range",
                    key.deviator, key.vertex
                )));
            }
            lasso.check(game).map_err(|e| match e {
                Error::MalformedWitness(msg) => {
                    Error::MalformedWitness(format!("{}: {msg}", key.display(game)))
                }
                other => other,
            })?;
            if lasso.first() != key.vertex {
                return Err(Error::MalformedWitness(format!(
                    "lasso {} starts at {} instead of {}",
                    key.display(game),
                    game.name(lasso.first()),
                    game.name(key.vertex)
                )));
            }
            if lasso.length() > bound {
                return Err(Error::MalformedWitness(format!(
                    "lasso {} has length {} above the bound {bound}",
                    key.display(game),
                    lasso.length()
                )));
            }
        }
        Ok(())
    }

    /// Whether every index of the deviation index set has a lasso.
    pub fn missing(&self, game: &GameGraph) -> Vec<EntryKey> {
        deviation_index(game, self.root)
            .entries
            .into_iter()
            .filter(|k| !self.lassoes.contains_key(k))
            .collect()
    }
}

/// A profitable one-shot deviation between two witness lassoes: the owner of
/// `vertex` (visited by lasso `entry`) gains more by moving to the start of
/// lasso `deviation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub entry: EntryKey,
    pub vertex: Vertex,
    pub deviation: EntryKey,
    pub entry_gain: bool,
    pub deviation_gain: bool,
}

impl Violation {
    pub fn display(&self, game: &GameGraph) -> String {
        format!(
            "lasso {} visits {} where player {} gains {} by moving to lasso {} instead of {}",
            self.entry.display(game),
            game.name(self.vertex),
            self.deviation.deviator,
            self.deviation_gain as u8,
            self.deviation.display(game),
            self.entry_gain as u8
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) at vertex {} vs ({}, {})",
            self.entry.deviator,
            self.entry.vertex,
            self.vertex,
            self.deviation.deviator,
            self.deviation.vertex
        )
    }
}

/// First violation of goodness in entry order, then lasso order, then
/// successor order; `None` when the witness is good.
pub fn is_good(
    witness: &SymbolicWitness,
    game: &GameGraph,
    objectives: &ObjectiveSet,
) -> Result<Option<Violation>> {
    witness.check_structure(game)?;
    let payoffs: BTreeMap<EntryKey, Payoff> = witness
        .lassoes
        .iter()
        .map(|(k, l)| (*k, payoff_of(l, objectives)))
        .collect();
    for (key, lasso) in &witness.lassoes {
        let mut visited = game.empty_set();
        for v in lasso.vertices() {
            if visited.put(v) {
                continue;
            }
            let i = game.owner(v);
            let own = payoffs[key].get(i);
            for &succ in game.successors(v) {
                let dev = EntryKey::deviation(i, succ);
                let Some(other) = payoffs.get(&dev) else {
                    return Err(Error::WitnessIncomplete(dev.display(game)));
                };
                if !own && other.get(i) {
                    return Ok(Some(Violation {
                        entry: *key,
                        vertex: v,
                        deviation: dev,
                        entry_gain: own,
                        deviation_gain: true,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Builds a good witness for `target` from the fixpoint labels: the root lasso
/// has payoff `target`, and each deviation lasso `(i, v)` realizes a payoff of
/// the label at `v` that is worst for player `i`.
pub fn build_witness(
    oracle: &mut PathOracle<'_>,
    table: &LabelTable,
    v0: Vertex,
    target: &Payoff,
) -> Result<SymbolicWitness> {
    let game = oracle.game();
    let objectives = oracle.objectives();
    let index = deviation_index(game, v0);
    let not_achievable = || Error::TargetNotAchievable(target.to_string());
    if !table.contains(v0, target) {
        return Err(not_achievable());
    }
    if index.entries.iter().any(|k| table.labels(k.vertex).is_empty()) {
        return Err(not_achievable());
    }
    let mut lassoes = BTreeMap::new();
    for key in &index.entries {
        let payoff = if key.deviator == 0 {
            *target
        } else {
            let player = key.deviator - 1;
            let labels = table.labels(key.vertex);
            let worst = labels
                .iter()
                .map(|q| q.get(player))
                .min()
                .expect("nonempty label");
            *labels
                .iter()
                .find(|q| q.get(player) == worst)
                .expect("minimum is attained")
        };
        let allowed = table.labeled_with(&payoff);
        let lasso = oracle.extract_lasso(&allowed, key.vertex, &payoff)?;
        lassoes.insert(*key, lasso);
    }
    let witness = SymbolicWitness { root: v0, lassoes };
    if let Some(v) = is_good(&witness, game, objectives)? {
        return Err(Error::InternalWitnessNotGood(v.display(game)));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::fixpoint;
    use crate::sample::{running_example, self_loop};

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    fn key(i: usize, v: Vertex) -> EntryKey {
        EntryKey {
            deviator: i,
            vertex: v,
        }
    }

    fn hand_witness() -> SymbolicWitness {
        crate::sample::running_witness()
    }

    #[test]
    fn deviation_index_of_running_example() {
        let (g, _) = running_example();
        let idx = deviation_index(&g, 0);
        let expected: BTreeSet<EntryKey> = [
            key(0, 0),
            key(2, 4),
            key(1, 2),
            key(1, 1),
            key(1, 3),
            key(2, 5),
            key(2, 6),
            key(1, 5),
            key(1, 6),
            key(2, 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(idx.entries, expected);
    }

    #[test]
    fn deviation_index_of_self_loop() {
        let (g, _) = self_loop();
        let idx = deviation_index(&g, 0);
        assert_eq!(idx.entries, BTreeSet::from([key(0, 0), key(1, 0)]));
    }

    #[test]
    fn hand_witness_is_good() {
        let (g, o) = running_example();
        let w = hand_witness();
        assert!(w.missing(&g).is_empty());
        assert_eq!(is_good(&w, &g, &o).unwrap(), None);
    }

    #[test]
    fn mutated_witness_reports_violation() {
        let (g, o) = running_example();
        let mut w = hand_witness();
        w.lassoes.insert(key(1, 1), Lasso::new(vec![], vec![1, 2]));
        let v = is_good(&w, &g, &o).unwrap().unwrap();
        assert_eq!(v.entry, key(0, 0));
        assert_eq!(v.vertex, 2);
        assert_eq!(v.deviation, key(1, 1));
        assert!(!v.entry_gain && v.deviation_gain);
    }

    #[test]
    fn malformed_witnesses_are_rejected() {
        let (g, o) = running_example();
        let mut w = hand_witness();
        w.lassoes.insert(key(1, 3), Lasso::new(vec![], vec![5]));
        assert!(matches!(is_good(&w, &g, &o), Err(Error::MalformedWitness(_))));
        let mut w = hand_witness();
        w.lassoes.insert(key(1, 3), Lasso::new(vec![3], vec![4]));
        assert!(matches!(is_good(&w, &g, &o), Err(Error::MalformedWitness(_))));
        let mut w = hand_witness();
        w.lassoes.remove(&key(1, 1));
        assert!(matches!(is_good(&w, &g, &o), Err(Error::WitnessIncomplete(_))));
    }

    #[test]
    fn built_witness_payoffs_match_hand_witness() {
        let (g, o) = running_example();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("01")).unwrap();
        let expected = [
            (key(0, 0), "01"),
            (key(2, 4), "01"),
            (key(1, 2), "01"),
            (key(1, 1), "01"),
            (key(1, 3), "01"),
            (key(2, 5), "01"),
            (key(2, 6), "00"),
            (key(1, 5), "01"),
            (key(1, 6), "00"),
        ];
        for (k, payoff) in expected {
            assert_eq!(payoff_of(&w.lassoes[&k], &o), p(payoff), "entry {k:?}");
        }
        assert_eq!(w.lassoes[&key(1, 1)], Lasso::new(vec![1, 2], vec![3]));
        assert_eq!(w.lassoes[&key(2, 6)], Lasso::new(vec![], vec![6]));
        assert!(w.len() <= g.vertex_count() * g.player_count() + 1);
    }

    #[test]
    fn build_rejects_unreachable_target() {
        let (g, o) = running_example();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        assert!(matches!(
            build_witness(&mut oracle, &fix.table, 0, &p("10")),
            Err(Error::TargetNotAchievable(_))
        ));
    }

    #[test]
    fn self_loop_witness() {
        let (g, o) = self_loop();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("1")).unwrap();
        assert_eq!(w.len(), 2);
        let lassoes: Vec<&Lasso> = w.lassoes.values().collect();
        assert_eq!(lassoes[0], lassoes[1]);
        assert_eq!(is_good(&w, &g, &o).unwrap(), None);
    }
}
