//! Exhaustive one-shot deviation check of finite-memory profiles.
//!
//! A configuration is a current vertex together with every machine's memory
//! before reading it. Histories reaching the same configuration induce the
//! same continuation, and with prefix-independent gains they also induce the
//! same subgame payoffs, so checking every configuration reachable through
//! arbitrary moves decides whether the profile is a very weak SPE, and hence
//! a weak SPE.

use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::game::{GameGraph, Lasso, ObjectiveSet, Payoff, Player, Vertex};
use crate::synth::StrategyProfile;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub vertex: Vertex,
    pub states: Vec<usize>,
}

/// A profitable one-shot deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub configuration: Configuration,
    pub player: Player,
    pub prescribed: Vertex,
    pub deviation: Vertex,
    pub gain: bool,
    pub deviation_gain: bool,
    pub outcome: Lasso,
    pub deviation_outcome: Lasso,
}

impl Counterexample {
    pub fn display(&self, game: &GameGraph, profile: &StrategyProfile) -> String {
        let states: Vec<&str> = self
            .configuration
            .states
            .iter()
            .zip(&profile.machines)
            .map(|(&s, m)| m.state_names[s].as_str())
            .collect();
        format!(
            "at {} with memory [{}], player {} improves from {} to {} by moving to {} instead of {}",
            game.name(self.configuration.vertex),
            states.join(", "),
            self.player + 1,
            self.gain as u8,
            self.deviation_gain as u8,
            game.name(self.deviation),
            game.name(self.prescribed)
        )
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub configurations: usize,
    pub counterexample: Option<Counterexample>,
}

pub fn verify_very_weak_spe(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    v0: Vertex,
    profile: &StrategyProfile,
) -> Result<Option<Counterexample>> {
    Ok(verify_with_report(game, objectives, v0, profile)?.counterexample)
}

pub fn verify_with_report(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    v0: Vertex,
    profile: &StrategyProfile,
) -> Result<VerificationReport> {
    objectives.require_prefix_independent()?;
    profile.check(game)?;

    // reachable configurations in breadth-first order, over all moves
    let mut ids: HashMap<Configuration, usize> = HashMap::new();
    let mut configs: Vec<Configuration> = Vec::new();
    let mut prescribed: Vec<Vertex> = Vec::new();
    let mut moves: Vec<Vec<(Vertex, usize)>> = Vec::new();
    let root = Configuration {
        vertex: v0,
        states: profile.initial_states(),
    };
    ids.insert(root.clone(), 0);
    configs.push(root);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let Configuration { vertex, states } = configs[c].clone();
        prescribed.push(profile.prescribed(game, &states, vertex)?);
        let after = profile.advance(&states, vertex);
        let mut out = Vec::with_capacity(game.successors(vertex).len());
        for &w in game.successors(vertex) {
            let next = Configuration {
                vertex: w,
                states: after.clone(),
            };
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                configs.push(next);
                queue.push_back(configs.len() - 1);
                configs.len() - 1
            });
            out.push((w, id));
        }
        moves.push(out);
    }
    // `queue` pops in id order, so per-id vectors line up with `configs`
    let follow: Vec<usize> = (0..configs.len())
        .map(|c| {
            moves[c]
                .iter()
                .find(|(w, _)| *w == prescribed[c])
                .map(|&(_, id)| id)
                .expect("prescribed move is an edge")
        })
        .collect();

    let payoffs = outcome_payoffs(game, objectives, &configs, &follow);

    for c in 0..configs.len() {
        let v = configs[c].vertex;
        let i = game.owner(v);
        let gain = payoffs[c].get(i);
        if gain {
            continue;
        }
        for &(w, d) in &moves[c] {
            if w != prescribed[c] && payoffs[d].get(i) {
                return Ok(VerificationReport {
                    configurations: configs.len(),
                    counterexample: Some(Counterexample {
                        configuration: configs[c].clone(),
                        player: i,
                        prescribed: prescribed[c],
                        deviation: w,
                        gain,
                        deviation_gain: true,
                        outcome: lasso_along(&configs, &follow, c),
                        deviation_outcome: lasso_along(&configs, &follow, d),
                    }),
                });
            }
        }
    }
    Ok(VerificationReport {
        configurations: configs.len(),
        counterexample: None,
    })
}

/// Payoff of the outcome from every configuration. Outcomes follow the
/// functional graph `follow`; every configuration on the way to a cycle shares
/// the cycle's Inf set, hence its payoff.
fn outcome_payoffs(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    configs: &[Configuration],
    follow: &[usize],
) -> Vec<Payoff> {
    const UNKNOWN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut mark = vec![UNKNOWN; configs.len()];
    let mut payoff = vec![Payoff::zero(game.player_count()); configs.len()];
    for start in 0..configs.len() {
        if mark[start] == DONE {
            continue;
        }
        let mut path = Vec::new();
        let mut c = start;
        while mark[c] == UNKNOWN {
            mark[c] = ON_PATH;
            path.push(c);
            c = follow[c];
        }
        let value = if mark[c] == ON_PATH {
            let at = path.iter().position(|&x| x == c).unwrap();
            let inf = game.set_of(path[at..].iter().map(|&x| configs[x].vertex));
            objectives.payoff_of_inf(&inf)
        } else {
            payoff[c]
        };
        for x in path {
            mark[x] = DONE;
            payoff[x] = value;
        }
    }
    payoff
}

fn lasso_along(configs: &[Configuration], follow: &[usize], start: usize) -> Lasso {
    let mut seen = HashMap::new();
    let mut order = Vec::new();
    let mut c = start;
    while !seen.contains_key(&c) {
        seen.insert(c, order.len());
        order.push(c);
        c = follow[c];
    }
    let at = seen[&c];
    let vertices: Vec<Vertex> = order.iter().map(|&x| configs[x].vertex).collect();
    Lasso::new(vertices[..at].to_vec(), vertices[at..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixpoint::fixpoint;
    use crate::game::{payoff_of, Objective};
    use crate::path_oracle::PathOracle;
    use crate::sample::{running_example, running_witness, self_loop};
    use crate::synth::{build_profile, outcome_from, synthesize};
    use crate::witness::{build_witness, EntryKey};

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    #[test]
    fn synthesized_running_profile_verifies() {
        let (g, o) = running_example();
        let hand = synthesize(&running_witness(), &g, &o).unwrap();
        assert!(verify_very_weak_spe(&g, &o, 0, &hand).unwrap().is_none());
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("01")).unwrap();
        let prof = synthesize(&w, &g, &o).unwrap();
        let report = verify_with_report(&g, &o, 0, &prof).unwrap();
        assert!(report.counterexample.is_none());
        assert!(report.configurations <= g.vertex_count() * prof.max_size());
    }

    #[test]
    fn corrupted_punishment_is_caught() {
        let (g, o) = running_example();
        let mut w = running_witness();
        w.lassoes.insert(
            EntryKey {
                deviator: 1,
                vertex: 1,
            },
            Lasso::new(vec![], vec![1, 2]),
        );
        let prof = build_profile(&w, &g);
        let cex = verify_very_weak_spe(&g, &o, 0, &prof).unwrap().unwrap();
        assert_eq!(cex.configuration.vertex, 2);
        assert_eq!(cex.player, 0);
        assert_eq!(cex.deviation, 1);
        assert_eq!(payoff_of(&cex.deviation_outcome, &o), p("10"));
        // deterministic
        assert_eq!(verify_very_weak_spe(&g, &o, 0, &prof).unwrap().unwrap(), cex);
    }

    #[test]
    fn one_shot_deviation_at_v2_is_not_profitable() {
        // after v0 v1, at v2 player 1 may go back to v1; the punishment keeps gain 0
        let (g, o) = running_example();
        let prof = synthesize(&running_witness(), &g, &o).unwrap();
        let mut states = prof.initial_states();
        for v in [0, 1] {
            states = prof.advance(&states, v);
        }
        let stay = outcome_from(&prof, &g, 2, &states).unwrap();
        let dev = outcome_from(&prof, &g, 1, &prof.advance(&states, 2)).unwrap();
        assert!(!payoff_of(&stay, &o).get(0));
        assert!(!payoff_of(&dev, &o).get(0));
    }

    #[test]
    fn rejects_reachability() {
        let (g, o) = self_loop();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("1")).unwrap();
        let prof = synthesize(&w, &g, &o).unwrap();
        let reach = ObjectiveSet::new(&g, vec![Objective::Reachability(g.set_of([0]))]).unwrap();
        assert!(matches!(
            verify_very_weak_spe(&g, &reach, 0, &prof),
            Err(Error::ObjectiveNotPrefixIndependent(_))
        ));
    }

    #[test]
    fn partial_machine_is_reported() {
        let (g, o) = self_loop();
        let fix = fixpoint(&g, &o).unwrap();
        let mut oracle = PathOracle::new(&g, &o).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &p("1")).unwrap();
        let mut prof = synthesize(&w, &g, &o).unwrap();
        for row in &mut prof.machines[0].action {
            row[0] = None;
        }
        assert!(matches!(
            verify_very_weak_spe(&g, &o, 0, &prof),
            Err(Error::MachinePartial { .. })
        ));
    }
}
