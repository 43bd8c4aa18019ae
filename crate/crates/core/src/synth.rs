//! Finite-memory strategy profiles and their synthesis from good witnesses.
//!
//! A machine reads the history vertex by vertex: the strategy's move at a
//! history `h·v` is `next_action(update*(initial, h), v)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::game::{GameGraph, Lasso, ObjectiveSet, Player, Vertex};
use crate::witness::{is_good, EntryKey, SymbolicWitness};

/// Deterministic Moore machine of one player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreMachine {
    pub player: Player,
    pub state_names: Vec<String>,
    pub initial: usize,
    /// `update[m][v]`: memory after reading `v` in state `m`.
    pub update: Vec<Vec<usize>>,
    /// `action[m][v]`: successor chosen at an owned vertex `v` in state `m`.
    pub action: Vec<Vec<Option<Vertex>>>,
}

impl MooreMachine {
    pub fn size(&self) -> usize {
        self.state_names.len()
    }

    pub fn next_state(&self, m: usize, v: Vertex) -> usize {
        self.update[m][v]
    }

    pub fn next_action(&self, m: usize, v: Vertex) -> Option<Vertex> {
        self.action[m][v]
    }

    /// Table shapes, target ranges and that every action follows an edge.
    pub fn check(&self, game: &GameGraph) -> Result<()> {
        let bad = |msg: String| {
            Err(Error::MalformedProfile(format!(
                "player {}: {msg}",
                self.player + 1
            )))
        };
        let states = self.size();
        if states == 0 || self.initial >= states {
            return bad("initial state out of range".into());
        }
        if self.update.len() != states || self.action.len() != states {
            return bad("tables do not cover every state".into());
        }
        for m in 0..states {
            if self.update[m].len() != game.vertex_count() || self.action[m].len() != game.vertex_count() {
                return bad(format!(
                    "state {} does not cover every vertex",
                    self.state_names[m]
                ));
            }
            if self.update[m].iter().any(|&t| t >= states) {
                return bad(format!(
                    "state {} updates to an unknown state",
                    self.state_names[m]
                ));
            }
            for v in game.vertices() {
                match self.action[m][v] {
                    Some(_) if game.owner(v) != self.player => {
                        return bad(format!(
                            "action at {}, which belongs to another player",
                            game.name(v)
                        ));
                    }
                    Some(w) if w >= game.vertex_count() || !game.has_edge(v, w) => {
                        return bad(format!(
                            "state {} moves from {} along a missing edge",
                            self.state_names[m],
                            game.name(v)
                        ));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// One machine per player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyProfile {
    pub machines: Vec<MooreMachine>,
}

impl StrategyProfile {
    /// Whether all machines carry the same memory: same states, initial state
    /// and update table.
    pub fn is_shared(&self) -> bool {
        self.machines.windows(2).all(|w| {
            w[0].state_names == w[1].state_names && w[0].initial == w[1].initial && w[0].update == w[1].update
        })
    }

    pub fn initial_states(&self) -> Vec<usize> {
        self.machines.iter().map(|m| m.initial).collect()
    }

    pub fn max_size(&self) -> usize {
        self.machines.iter().map(MooreMachine::size).max().unwrap_or(0)
    }

    /// One-state version of the profile when no machine's moves depend on
    /// its memory.
    pub fn positional_form(&self) -> Option<StrategyProfile> {
        let mut machines = Vec::with_capacity(self.machines.len());
        for m in &self.machines {
            let row = &m.action[0];
            if m.action.iter().any(|r| r != row) {
                return None;
            }
            machines.push(MooreMachine {
                player: m.player,
                state_names: vec!["m0".to_string()],
                initial: 0,
                update: vec![vec![0; row.len()]],
                action: vec![row.clone()],
            });
        }
        Some(StrategyProfile { machines })
    }

    pub fn check(&self, game: &GameGraph) -> Result<()> {
        if self.machines.len() != game.player_count() {
            return Err(Error::MalformedProfile(format!(
                "{} machines for {} players",
                self.machines.len(),
                game.player_count()
            )));
        }
        for (i, m) in self.machines.iter().enumerate() {
            if m.player != i {
                return Err(Error::MalformedProfile(format!(
                    "machine {} is labeled for player {}",
                    i + 1,
                    m.player + 1
                )));
            }
            m.check(game)?;
        }
        Ok(())
    }

    /// Move prescribed at `v` given the owner's memory before reading `v`.
    pub fn prescribed(&self, game: &GameGraph, states: &[usize], v: Vertex) -> Result<Vertex> {
        let i = game.owner(v);
        let machine = &self.machines[i];
        machine
            .next_action(states[i], v)
            .ok_or_else(|| Error::MachinePartial {
                player: i + 1,
                state: machine.state_names[states[i]].clone(),
                vertex: game.name(v).to_string(),
            })
    }

    /// Every machine's memory after reading `v`.
    pub fn advance(&self, states: &[usize], v: Vertex) -> Vec<usize> {
        self.machines
            .iter()
            .zip(states)
            .map(|(m, &s)| m.next_state(s, v))
            .collect()
    }
}

/// `(|V|·|Π| + 1) · 2·|V|²`.
pub fn memory_bound(vertex_count: usize, player_count: usize) -> usize {
    (vertex_count * player_count + 1) * 2 * vertex_count * vertex_count
}

/// The play from `start` when every player follows the profile and the
/// machines hold `start_states` before reading `start`.
pub fn outcome_from(
    profile: &StrategyProfile,
    game: &GameGraph,
    start: Vertex,
    start_states: &[usize],
) -> Result<Lasso> {
    let mut seen: HashMap<(Vertex, Vec<usize>), usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut v = start;
    let mut states = start_states.to_vec();
    loop {
        if let Some(&at) = seen.get(&(v, states.clone())) {
            let cycle = vertices.split_off(at);
            return Ok(Lasso::new(vertices, cycle));
        }
        seen.insert((v, states.clone()), vertices.len());
        vertices.push(v);
        let next = profile.prescribed(game, &states, v)?;
        states = profile.advance(&states, v);
        v = next;
    }
}

/// Shared-memory profile whose subgame outcomes follow the witness lassoes.
/// Fails when the witness is not good or does not cover the deviation index.
pub fn synthesize(
    witness: &SymbolicWitness,
    game: &GameGraph,
    objectives: &ObjectiveSet,
) -> Result<StrategyProfile> {
    let missing = witness.missing(game);
    if let Some(k) = missing.first() {
        return Err(Error::WitnessIncomplete(k.display(game)));
    }
    if let Some(v) = is_good(witness, game, objectives)? {
        return Err(Error::WitnessNotGood(v.display(game)));
    }
    Ok(build_profile(witness, game))
}

/// The machine construction without the goodness check, so that profiles
/// built from defective witnesses can be inspected by the verifier.
///
/// Memory is `start` plus one state `(e, k)` per witness entry `e` and
/// position `k` along `prefix·cycle`, meaning "the last vertex read is
/// position `k` of lasso `e`". Reading the expected next vertex advances the
/// position (wrapping into the cycle); reading anything else is a deviation
/// by the owner `i` of the last vertex and jumps to `((i, w), 0)`.
pub fn build_profile(witness: &SymbolicWitness, game: &GameGraph) -> StrategyProfile {
    let entries: Vec<(&EntryKey, &Lasso)> = witness.lassoes.iter().collect();
    let seqs: Vec<Vec<Vertex>> = entries.iter().map(|(_, l)| l.vertices().collect()).collect();
    let prefix_lens: Vec<usize> = entries.iter().map(|(_, l)| l.prefix.len()).collect();
    let mut offsets = Vec::with_capacity(entries.len());
    let mut names = vec!["start".to_string()];
    for ((key, _), seq) in entries.iter().zip(&seqs) {
        offsets.push(names.len());
        for (pos, &v) in seq.iter().enumerate() {
            names.push(format!("{}#{}:{}", key.display(game), pos, game.name(v)));
        }
    }
    let entry_index: BTreeMap<EntryKey, usize> = entries
        .iter()
        .enumerate()
        .map(|(k, (key, _))| (**key, k))
        .collect();
    let first_entry_at = |w: Vertex| entries.iter().position(|(key, _)| key.vertex == w);
    // (entry, position) of each non-start state
    let mut decode = vec![(usize::MAX, 0usize)];
    for (e, seq) in seqs.iter().enumerate() {
        decode.extend((0..seq.len()).map(|pos| (e, pos)));
    }
    let next_pos = |e: usize, pos: usize| {
        if pos + 1 < seqs[e].len() {
            pos + 1
        } else {
            prefix_lens[e]
        }
    };

    let start = 0;
    let root = entry_index[&EntryKey::root(witness.root)];
    let mut update = vec![vec![start; game.vertex_count()]; names.len()];
    for w in game.vertices() {
        update[start][w] = if w == witness.root {
            offsets[root]
        } else {
            first_entry_at(w).map_or(start, |e| offsets[e])
        };
    }
    for m in 1..names.len() {
        let (e, pos) = decode[m];
        let here = seqs[e][pos];
        let np = next_pos(e, pos);
        let expected = seqs[e][np];
        for w in game.vertices() {
            update[m][w] = if w == expected {
                offsets[e] + np
            } else if let Some(&d) = entry_index.get(&EntryKey::deviation(game.owner(here), w)) {
                offsets[d]
            } else {
                // not a move of the game; any total choice will do
                first_entry_at(w).map_or(m, |d| offsets[d])
            };
        }
    }

    let machines = (0..game.player_count())
        .map(|player| {
            let action = (0..names.len())
                .map(|m| {
                    game.vertices()
                        .map(|v| {
                            if game.owner(v) != player {
                                return None;
                            }
                            let after = update[m][v];
                            let lasso_move = (after != start)
                                .then(|| decode[after])
                                .filter(|&(e, pos)| seqs[e][pos] == v)
                                .map(|(e, pos)| seqs[e][next_pos(e, pos)]);
                            Some(lasso_move.unwrap_or(game.successors(v)[0]))
                        })
                        .collect()
                })
                .collect();
            MooreMachine {
                player,
                state_names: names.clone(),
                initial: start,
                update: update.clone(),
                action,
            }
        })
        .collect();
    StrategyProfile { machines }
}

/// Memory state reached right after a profile built by [`build_profile`]
/// enters lasso `key`, i.e. position 0 of that lasso.
pub fn entry_state(witness: &SymbolicWitness, key: &EntryKey) -> Option<usize> {
    let mut offset = 1;
    for (k, lasso) in &witness.lassoes {
        if k == key {
            return Some(offset);
        }
        offset += lasso.prefix.len() + lasso.cycle.len();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::fixpoint;
    use crate::game::{payoff_of, Payoff};
    use crate::path_oracle::PathOracle;
    use crate::sample::{running_example, running_witness, self_loop};
    use crate::witness::build_witness;

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    fn running_profile() -> (GameGraph, ObjectiveSet, SymbolicWitness, StrategyProfile) {
        let (g, o) = running_example();
        let w = running_witness();
        let prof = synthesize(&w, &g, &o).unwrap();
        (g, o, w, prof)
    }

    #[test]
    fn outcome_of_synthesized_profile() {
        let (g, o, w, prof) = running_profile();
        prof.check(&g).unwrap();
        assert!(prof.is_shared());
        let out = outcome_from(&prof, &g, 0, &prof.initial_states()).unwrap();
        assert!(out.same_play(&Lasso::new(vec![0, 1, 2], vec![3])));
        assert_eq!(payoff_of(&out, &o), p("01"));
        assert!(prof.max_size() <= memory_bound(7, 2));
        assert_eq!(
            prof.max_size(),
            1 + w.lassoes.values().map(|l| l.length() + 1).sum::<usize>()
        );
    }

    #[test]
    fn deviation_switches_to_punishment_lasso() {
        let (g, _, _, prof) = running_profile();
        // history v0 v1 v2, then player 1 deviates from v2 back to v1
        let mut states = prof.initial_states();
        for v in [0, 1, 2] {
            states = prof.advance(&states, v);
        }
        let out = outcome_from(&prof, &g, 1, &states).unwrap();
        assert!(out.same_play(&Lasso::new(vec![1, 2], vec![3])));
    }

    #[test]
    fn every_entry_state_replays_its_lasso() {
        let (g, _, w, prof) = running_profile();
        for (key, lasso) in &w.lassoes {
            let m = entry_state(&w, key).unwrap();
            // the memory after reading the lasso's first vertex; continue from its second
            let seq: Vec<Vertex> = lasso.vertices().collect();
            let second = seq.get(1).copied().unwrap_or(lasso.cycle[0]);
            let out = outcome_from(&prof, &g, second, &[m; 2]).unwrap();
            assert!(out.same_play(&lasso.suffix_from(1)), "entry {key:?}");
        }
    }

    #[test]
    fn self_loop_profile_is_small() {
        let (g, o) = self_loop();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("1")).unwrap();
        let prof = synthesize(&w, &g, &o).unwrap();
        let out = outcome_from(&prof, &g, 0, &prof.initial_states()).unwrap();
        assert_eq!(out.normalized(), Lasso::new(vec![], vec![0]));
        let positional = prof.positional_form().unwrap();
        assert_eq!(positional.max_size(), 1);
        let out = outcome_from(&positional, &g, 0, &positional.initial_states()).unwrap();
        assert_eq!(out, Lasso::new(vec![], vec![0]));
    }

    #[test]
    fn synthesize_rejects_bad_witness() {
        let (g, o, mut w, _) = running_profile();
        w.lassoes.insert(
            EntryKey {
                deviator: 1,
                vertex: 1,
            },
            Lasso::new(vec![], vec![1, 2]),
        );
        assert!(matches!(synthesize(&w, &g, &o), Err(Error::WitnessNotGood(_))));
        w.lassoes.remove(&EntryKey {
            deviator: 1,
            vertex: 1,
        });
        assert!(matches!(synthesize(&w, &g, &o), Err(Error::WitnessIncomplete(_))));
    }
}
