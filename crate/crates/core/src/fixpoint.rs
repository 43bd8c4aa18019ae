//! The Remove-Adjust labeling procedure and the constraint decision built on it.
//!
//! Every vertex reachable from the root is labeled with the payoffs of plays
//! starting there. Remove drops a payoff `p` at a vertex of player `i` when
//! some successor only carries payoffs strictly better for `i`; Adjust then
//! drops `p` wherever no play with payoff `p` survives through vertices still
//! labeled `p`. At the fixpoint the root's label is the set of weak SPE
//! payoffs, provided no reachable label is empty.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameGraph, ObjectiveSet, Payoff, Vertex, VertexSet};
use crate::path_oracle::PathOracle;

pub type PayoffSet = BTreeSet<Payoff>;

/// Labels of the active (reachable) vertices at some step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelTable {
    labels: Vec<PayoffSet>,
    active: VertexSet,
    step: usize,
}

impl LabelTable {
    pub fn labels(&self, v: Vertex) -> &PayoffSet {
        &self.labels[v]
    }

    pub fn contains(&self, v: Vertex, p: &Payoff) -> bool {
        self.labels[v].contains(p)
    }

    pub fn active(&self) -> &VertexSet {
        &self.active
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Active vertices whose label contains `p`.
    pub fn labeled_with(&self, p: &Payoff) -> VertexSet {
        let mut s = VertexSet::with_capacity(self.labels.len());
        s.extend(self.active.ones().filter(|&v| self.labels[v].contains(p)));
        s
    }

    pub fn empty_vertices(&self) -> Vec<Vertex> {
        self.active
            .ones()
            .filter(|&v| self.labels[v].is_empty())
            .collect()
    }

    pub fn total_size(&self) -> usize {
        self.active.ones().map(|v| self.labels[v].len()).sum()
    }

    pub fn snapshot(&self) -> Vec<PayoffSet> {
        self.labels.clone()
    }

    fn remove(&mut self, v: Vertex, p: &Payoff) -> bool {
        self.labels[v].remove(p)
    }
}

/// How Remove picks among several admissible removals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RemoveOrder {
    /// Smallest vertex, then smallest payoff, then smallest successor.
    #[default]
    Canonical,
    /// Uniformly random admissible removal from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FixpointOptions {
    pub order: RemoveOrder,
    /// Keep a full label snapshot per step in the trace.
    pub snapshots: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepEvent {
    Init,
    Remove {
        vertex: Vertex,
        payoff: Payoff,
        successor: Vertex,
    },
    /// Remove found nothing to do: the fixpoint is reached.
    RemoveNone,
    Adjust {
        payoff: Payoff,
        adjusted: Vec<Vertex>,
    },
}

#[derive(Clone, Debug)]
pub struct TraceRow {
    pub step: usize,
    pub event: StepEvent,
    /// Active vertices whose label became empty during this step.
    pub emptied: Vec<Vertex>,
    pub labels: Option<Vec<PayoffSet>>,
}

#[derive(Clone, Debug)]
pub struct FixpointResult {
    pub table: LabelTable,
    /// Completed Remove-Adjust rounds.
    pub steps_taken: usize,
    /// The step at which Remove first changed nothing.
    pub fixpoint_step: usize,
    pub initial_size: usize,
    pub max_initial_label: usize,
    pub trace: Vec<TraceRow>,
}

impl FixpointResult {
    /// Payoffs at `root` when every active label is nonempty.
    pub fn spe_payoffs(&self, root: Vertex) -> Option<&PayoffSet> {
        if self.table.empty_vertices().is_empty() {
            Some(self.table.labels(root))
        } else {
            None
        }
    }
}

/// Initial labels of every vertex reachable from `root`: the payoffs of all
/// plays starting there.
pub fn init_labels(oracle: &mut PathOracle<'_>, root: Vertex) -> Result<LabelTable> {
    let game = oracle.game();
    let active = game.reachable_from(root);
    let mut labels = vec![PayoffSet::new(); game.vertex_count()];
    for p in Payoff::all(game.player_count()) {
        for v in active.ones() {
            if oracle.exists_play(&active, v, &p)? {
                labels[v].insert(p);
            }
        }
    }
    Ok(LabelTable {
        labels,
        active,
        step: 0,
    })
}

/// All `(v, p, v')` triples enabling a Remove, in canonical order.
pub fn admissible_removals(table: &LabelTable, game: &GameGraph) -> Vec<(Vertex, Payoff, Vertex)> {
    let mut out = Vec::new();
    for v in table.active.ones() {
        let i = game.owner(v);
        for p in table.labels[v].iter().filter(|p| !p.get(i)) {
            for &succ in game.successors(v) {
                if table.labels[succ].iter().all(|q| q.get(i)) {
                    out.push((v, *p, succ));
                }
            }
        }
    }
    out
}

fn canonical_removal(table: &LabelTable, game: &GameGraph) -> Option<(Vertex, Payoff, Vertex)> {
    for v in table.active.ones() {
        let i = game.owner(v);
        let Some(p) = table.labels[v].iter().find(|p| !p.get(i)) else {
            continue;
        };
        if let Some(&succ) = game
            .successors(v)
            .iter()
            .find(|&&s| table.labels[s].iter().all(|q| q.get(i)))
        {
            return Some((v, *p, succ));
        }
    }
    None
}

/// One Remove operation with the canonical selection rule. Returns the
/// removed `(vertex, payoff)` or `None` when no removal is admissible.
pub fn remove_step(table: &mut LabelTable, game: &GameGraph) -> Option<(Vertex, Payoff)> {
    let (v, p, _) = canonical_removal(table, game)?;
    table.remove(v, &p);
    table.step += 1;
    Some((v, p))
}

/// One Adjust operation after `removed` was dropped somewhere. Returns the
/// vertices that lost `removed`.
pub fn adjust_step(
    table: &mut LabelTable,
    oracle: &mut PathOracle<'_>,
    removed: &Payoff,
) -> Result<Vec<Vertex>> {
    let allowed = table.labeled_with(removed);
    let mut lost = Vec::new();
    for u in allowed.ones() {
        if !oracle.exists_play(&allowed, u, removed)? {
            lost.push(u);
        }
    }
    for &u in &lost {
        table.remove(u, removed);
    }
    table.step += 1;
    Ok(lost)
}

/// Runs the procedure from the game's initial vertex with default options.
pub fn fixpoint(game: &GameGraph, objectives: &ObjectiveSet) -> Result<FixpointResult> {
    let mut oracle = PathOracle::new(game, objectives)?;
    fixpoint_with(&mut oracle, game.initial(), FixpointOptions::default())
}

pub fn fixpoint_with(
    oracle: &mut PathOracle<'_>,
    root: Vertex,
    options: FixpointOptions,
) -> Result<FixpointResult> {
    let game = oracle.game();
    let mut table = init_labels(oracle, root)?;
    let initial_size = table.total_size();
    let max_initial_label = table
        .active
        .ones()
        .map(|v| table.labels[v].len())
        .max()
        .unwrap_or(0);
    let mut rng = match options.order {
        RemoveOrder::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RemoveOrder::Canonical => None,
    };
    let snap = |t: &LabelTable| options.snapshots.then(|| t.snapshot());
    let mut trace = vec![TraceRow {
        step: 0,
        event: StepEvent::Init,
        emptied: table.empty_vertices(),
        labels: snap(&table),
    }];
    let mut rounds = 0;
    loop {
        let choice = match rng.as_mut() {
            None => canonical_removal(&table, game),
            Some(rng) => {
                let mut options = admissible_removals(&table, game);
                options.dedup_by_key(|(v, p, _)| (*v, *p));
                options.choose(rng).copied()
            }
        };
        let Some((v, p, succ)) = choice else {
            trace.push(TraceRow {
                step: table.step + 1,
                event: StepEvent::RemoveNone,
                emptied: Vec::new(),
                labels: None,
            });
            break;
        };
        table.remove(v, &p);
        table.step += 1;
        trace.push(TraceRow {
            step: table.step,
            event: StepEvent::Remove {
                vertex: v,
                payoff: p,
                successor: succ,
            },
            emptied: if table.labels[v].is_empty() {
                vec![v]
            } else {
                Vec::new()
            },
            labels: snap(&table),
        });

        let adjusted = adjust_step(&mut table, oracle, &p)?;
        let emptied = adjusted
            .iter()
            .copied()
            .filter(|&u| table.labels[u].is_empty())
            .collect();
        trace.push(TraceRow {
            step: table.step,
            event: StepEvent::Adjust { payoff: p, adjusted },
            emptied,
            labels: snap(&table),
        });
        rounds += 1;
    }
    Ok(FixpointResult {
        fixpoint_step: table.step + 1,
        table,
        steps_taken: rounds,
        initial_size,
        max_initial_label,
        trace,
    })
}

/// Smallest payoff `p` with `min ≤ p ≤ max` of a weak SPE from `root`.
pub fn decide_constraint(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    root: Vertex,
    min: &Payoff,
    max: &Payoff,
) -> Result<Option<Payoff>> {
    check_thresholds(game, min, max)?;
    let mut oracle = PathOracle::new(game, objectives)?;
    let result = fixpoint_with(&mut oracle, root, FixpointOptions::default())?;
    Ok(select_payoff(&result, root, min, max))
}

pub fn check_thresholds(game: &GameGraph, min: &Payoff, max: &Payoff) -> Result<()> {
    for t in [min, max] {
        if t.len() != game.player_count() {
            return Err(Error::PayoffLength {
                payoff: t.to_string(),
                got: t.len(),
                expected: game.player_count(),
            });
        }
    }
    if !min.le(max) {
        return Err(Error::InvalidThresholds {
            min: min.to_string(),
            max: max.to_string(),
        });
    }
    Ok(())
}

pub fn select_payoff(result: &FixpointResult, root: Vertex, min: &Payoff, max: &Payoff) -> Option<Payoff> {
    result
        .spe_payoffs(root)?
        .iter()
        .find(|p| p.within(min, max))
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{running_example, self_loop};

    fn set(items: &[&str]) -> PayoffSet {
        items.iter().map(|s| Payoff::parse(s, s.len()).unwrap()).collect()
    }

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    #[test]
    fn initial_labels_of_running_example() {
        let (g, o) = running_example();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let t = init_labels(&mut oracle, 0).unwrap();
        assert_eq!(t.labels(0), &set(&["00", "10", "01"]));
        assert_eq!(t.labels(1), &set(&["10", "01"]));
        assert_eq!(t.labels(2), &set(&["10", "01"]));
        assert_eq!(t.labels(3), &set(&["01"]));
        assert_eq!(t.labels(4), &set(&["00", "01"]));
        assert_eq!(t.labels(5), &set(&["01"]));
        assert_eq!(t.labels(6), &set(&["00"]));
    }

    #[test]
    fn step_by_step_running_example() {
        let (g, o) = running_example();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let mut t = init_labels(&mut oracle, 0).unwrap();

        assert_eq!(remove_step(&mut t, &g), Some((4, p("00"))));
        assert_eq!(adjust_step(&mut t, &mut oracle, &p("00")).unwrap(), vec![0]);
        assert_eq!(remove_step(&mut t, &g), Some((0, p("10"))));
        assert!(adjust_step(&mut t, &mut oracle, &p("10")).unwrap().is_empty());
        assert_eq!(remove_step(&mut t, &g), None);
        assert_eq!(t.step(), 4);
    }

    #[test]
    fn adjust_without_other_holders_is_noop() {
        let (g, o) = running_example();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let mut t = init_labels(&mut oracle, 0).unwrap();
        assert!(adjust_step(&mut t, &mut oracle, &p("11")).unwrap().is_empty());
    }

    #[test]
    fn final_table_of_running_example() {
        let (g, o) = running_example();
        let r = fixpoint(&g, &o).unwrap();
        let t = &r.table;
        assert_eq!(t.labels(0), &set(&["01"]));
        assert_eq!(t.labels(1), &set(&["10", "01"]));
        assert_eq!(t.labels(2), &set(&["10", "01"]));
        for v in [3, 4, 5] {
            assert_eq!(t.labels(v), &set(&["01"]));
        }
        assert_eq!(t.labels(6), &set(&["00"]));
        assert_eq!(r.steps_taken, 2);
        assert_eq!(r.fixpoint_step, 5);
    }

    #[test]
    fn self_loop_is_already_stable() {
        let (g, o) = self_loop();
        let r = fixpoint(&g, &o).unwrap();
        assert_eq!(r.steps_taken, 0);
        assert_eq!(r.table.labels(0), &set(&["1"]));
    }

    #[test]
    fn decisions_on_running_example() {
        let (g, o) = running_example();
        let d = |a: &str, b: &str| decide_constraint(&g, &o, 0, &p(a), &p(b)).unwrap();
        assert_eq!(d("01", "01"), Some(p("01")));
        assert_eq!(d("10", "11"), None);
        assert_eq!(d("00", "11"), Some(p("01")));
        assert_eq!(d("00", "00"), None);
        assert!(matches!(
            decide_constraint(&g, &o, 0, &p("10"), &p("01")),
            Err(Error::InvalidThresholds { .. })
        ));
    }

    #[test]
    fn seeded_orders_reach_the_same_table() {
        let (g, o) = running_example();
        let canonical = fixpoint(&g, &o).unwrap().table;
        for seed in 0..5 {
            let mut oracle = PathOracle::new(&g, &o).unwrap();
            let opts = FixpointOptions {
                order: RemoveOrder::Seeded(seed),
                snapshots: false,
            };
            assert_eq!(
                fixpoint_with(&mut oracle, 0, opts).unwrap().table.labels,
                canonical.labels
            );
        }
    }
}
