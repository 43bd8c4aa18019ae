//! Reachability and Safety games as Büchi and CoBüchi games on a product
//! that remembers which players have already seen their target set.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::game::{GameGraph, Lasso, Objective, ObjectiveKind, ObjectiveSet, Player, Vertex};
use crate::synth::{MooreMachine, StrategyProfile};

/// Set of players as a bit mask, player 1 in bit 0.
pub type Flags = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductVertex {
    pub base: Vertex,
    pub flags: Flags,
}

pub fn format_flags(flags: Flags) -> String {
    let players: Vec<String> = (0..Flags::BITS)
        .filter(|i| flags >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", players.join(","))
}

/// The product game together with the correspondence to the base game.
#[derive(Clone, Debug)]
pub struct Product {
    pub source_kind: ObjectiveKind,
    pub game: GameGraph,
    pub objectives: ObjectiveSet,
    pub vertices: Vec<ProductVertex>,
    index: HashMap<ProductVertex, Vertex>,
    triggers: Vec<Flags>,
    base_vertex_count: usize,
}

impl Product {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn lookup(&self, base: Vertex, flags: Flags) -> Option<Vertex> {
        self.index.get(&ProductVertex { base, flags }).copied()
    }

    /// Players whose target set contains `v`.
    pub fn triggers(&self, v: Vertex) -> Flags {
        self.triggers[v]
    }

    pub fn base(&self, v: Vertex) -> Vertex {
        self.vertices[v].base
    }

    /// `|V|·2^|Π|`.
    pub fn size_bound(&self) -> usize {
        self.base_vertex_count << self.game.player_count()
    }

    pub fn project(&self, lasso: &Lasso) -> Lasso {
        Lasso::new(
            lasso.prefix.iter().map(|&v| self.base(v)).collect(),
            lasso.cycle.iter().map(|&v| self.base(v)).collect(),
        )
    }

    /// The product play above a base lasso starting at the base initial
    /// vertex, or `None` if the lasso starts elsewhere or leaves the edges.
    pub fn lift(&self, lasso: &Lasso) -> Option<Lasso> {
        let seq: Vec<Vertex> = lasso.vertices().collect();
        let wrap = lasso.prefix.len();
        let mut seen: HashMap<(usize, Flags), usize> = HashMap::new();
        let mut out = Vec::new();
        let mut pos = 0;
        let mut flags = 0;
        loop {
            flags |= self.triggers[seq[pos]];
            if let Some(&at) = seen.get(&(pos, flags)) {
                let cycle = out.split_off(at);
                return Some(Lasso::new(out, cycle));
            }
            seen.insert((pos, flags), out.len());
            let v = self.lookup(seq[pos], flags)?;
            if let Some(&prev) = out.last() {
                if !self.game.has_edge(prev, v) {
                    return None;
                }
            } else if v != self.game.initial() {
                return None;
            }
            out.push(v);
            pos = if pos + 1 < seq.len() { pos + 1 } else { wrap };
        }
    }
}

/// Builds the product reachable from the base initial vertex. Flags are set
/// on entering a vertex, the initial one included.
pub fn to_prefix_independent(game: &GameGraph, objectives: &ObjectiveSet) -> Result<Product> {
    let kind = objectives.kind();
    if kind.is_prefix_independent() {
        return Err(Error::NotReachSafety(kind.name()));
    }
    let players = game.player_count();
    if players >= Flags::BITS as usize {
        return Err(Error::TooLarge(format!("{players} players in a product game")));
    }
    let triggers: Vec<Flags> = game
        .vertices()
        .map(|v| {
            objectives
                .iter()
                .enumerate()
                .filter(|(_, o)| match o {
                    Objective::Reachability(f) | Objective::Safety(f) => f.contains(v),
                    _ => false,
                })
                .fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect();

    let start = ProductVertex {
        base: game.initial(),
        flags: triggers[game.initial()],
    };
    let mut vertices = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let pu = vertices[u];
        for &w in game.successors(pu.base) {
            let pw = ProductVertex {
                base: w,
                flags: pu.flags | triggers[w],
            };
            let id = *index.entry(pw).or_insert_with(|| {
                vertices.push(pw);
                queue.push_back(vertices.len() - 1);
                vertices.len() - 1
            });
            edges.push((u, id));
        }
    }
    let names = vertices
        .iter()
        .map(|p| format!("{}@{}", game.name(p.base), format_flags(p.flags)))
        .collect();
    let owner = vertices.iter().map(|p| game.owner(p.base)).collect();
    let product = GameGraph::new(players, names, owner, &edges, 0)?;
    let flagged =
        |i: Player| product.set_of((0..vertices.len()).filter(|&v| vertices[v].flags >> i & 1 == 1));
    let objs = (0..players)
        .map(|i| match kind {
            ObjectiveKind::Reachability => Objective::Buchi(flagged(i)),
            _ => Objective::CoBuchi(flagged(i)),
        })
        .collect();
    let objectives = ObjectiveSet::new(&product, objs)?;
    Ok(Product {
        source_kind: kind,
        game: product,
        objectives,
        vertices,
        index,
        triggers,
        base_vertex_count: game.vertex_count(),
    })
}

/// Runs a product profile on the base game by tracking the flags in memory.
///
/// A state `(m, S)` holds the product machine's state `m` and the flags `S`
/// of the history read so far. Only pairs reachable by reading arbitrary
/// vertices are kept, so each machine has at most `|M|·2^|Π|` states.
pub fn pull_back_profile(product: &Product, base: &GameGraph, profile: &StrategyProfile) -> StrategyProfile {
    let machines = profile
        .machines
        .iter()
        .map(|m| pull_back_machine(product, base, m))
        .collect();
    StrategyProfile { machines }
}

fn pull_back_machine(product: &Product, base: &GameGraph, machine: &MooreMachine) -> MooreMachine {
    let mut states: Vec<(usize, Flags)> = vec![(machine.initial, 0)];
    let mut ids: BTreeMap<(usize, Flags), usize> = BTreeMap::from([((machine.initial, 0), 0)]);
    let mut update: Vec<Vec<usize>> = Vec::new();
    let mut action: Vec<Vec<Option<Vertex>>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (m, flags) = states[next];
        next += 1;
        let mut up_row = Vec::with_capacity(base.vertex_count());
        let mut act_row = Vec::with_capacity(base.vertex_count());
        for v in base.vertices() {
            let seen = flags | product.triggers(v);
            let here = product.lookup(v, seen);
            let m2 = here.map_or(m, |pv| machine.next_state(m, pv));
            let key = (m2, seen);
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            up_row.push(id);
            act_row.push((base.owner(v) == machine.player).then(|| {
                here.and_then(|pv| machine.next_action(m, pv))
                    .map_or(base.successors(v)[0], |w| product.base(w))
            }));
        }
        update.push(up_row);
        action.push(act_row);
    }
    let state_names = states
        .iter()
        .map(|&(m, flags)| format!("{}|{}", machine.state_names[m], format_flags(flags)))
        .collect();
    MooreMachine {
        player: machine.player,
        state_names,
        initial: 0,
        update,
        action,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::fixpoint;
    use crate::game::{payoff_of, Payoff};
    use crate::path_oracle::PathOracle;
    use crate::synth::{outcome_from, synthesize};
    use crate::verify::verify_very_weak_spe;
    use crate::witness::build_witness;

    fn two_vertex(kind: ObjectiveKind) -> (GameGraph, ObjectiveSet) {
        let g = GameGraph::new(1, vec!["a".into(), "b".into()], vec![0, 0], &[(0, 1), (1, 1)], 0).unwrap();
        let f = g.set_of([1]);
        let o = match kind {
            ObjectiveKind::Reachability => Objective::Reachability(f),
            _ => Objective::Safety(f),
        };
        let objs = ObjectiveSet::new(&g, vec![o]).unwrap();
        (g, objs)
    }

    #[test]
    fn two_vertex_reachability() {
        let (g, o) = two_vertex(ObjectiveKind::Reachability);
        let prod = to_prefix_independent(&g, &o).unwrap();
        assert_eq!(prod.game.names(), &["a@{}".to_string(), "b@{1}".to_string()]);
        assert!(prod.game.has_edge(0, 1) && prod.game.has_edge(1, 1));
        assert_eq!(prod.objectives.get(0), &Objective::Buchi(prod.game.set_of([1])));
        let play = Lasso::new(vec![0], vec![1]);
        assert_eq!(payoff_of(&play, &prod.objectives), Payoff::parse("1", 1).unwrap());
        assert_eq!(
            payoff_of(&prod.project(&play), &o),
            Payoff::parse("1", 1).unwrap()
        );
        assert_eq!(prod.lift(&play).unwrap(), play);
    }

    #[test]
    fn safety_with_bad_initial_vertex() {
        let g = GameGraph::new(1, vec!["a".into()], vec![0], &[(0, 0)], 0).unwrap();
        let o = ObjectiveSet::new(&g, vec![Objective::Safety(g.set_of([0]))]).unwrap();
        let prod = to_prefix_independent(&g, &o).unwrap();
        assert_eq!(prod.vertices, vec![ProductVertex { base: 0, flags: 1 }]);
        assert_eq!(
            payoff_of(&Lasso::new(vec![], vec![0]), &prod.objectives),
            Payoff::zero(1)
        );
    }

    #[test]
    fn rejects_prefix_independent_input() {
        let (g, o) = crate::sample::running_example();
        assert!(matches!(
            to_prefix_independent(&g, &o),
            Err(Error::NotReachSafety(_))
        ));
    }

    #[test]
    fn flags_only_grow() {
        let (g, _) = crate::sample::running_example();
        let o = ObjectiveSet::new(
            &g,
            vec![
                Objective::Reachability(g.set_of([1])),
                Objective::Reachability(g.set_of([3])),
            ],
        )
        .unwrap();
        let prod = to_prefix_independent(&g, &o).unwrap();
        assert!(prod.vertex_count() <= prod.size_bound());
        for (u, w) in prod.game.edges() {
            let (a, b) = (prod.vertices[u], prod.vertices[w]);
            assert_eq!(a.flags & b.flags, a.flags);
            assert!(g.has_edge(a.base, b.base));
        }
    }

    #[test]
    fn pulled_back_profile_follows_product_outcomes() {
        let (g, o) = two_vertex(ObjectiveKind::Reachability);
        let prod = to_prefix_independent(&g, &o).unwrap();
        let fix = fixpoint(&prod.game, &prod.objectives).unwrap();
        let mut oracle = PathOracle::new(&prod.game, &prod.objectives).unwrap();
        let w = build_witness(&mut oracle, &fix.table, 0, &Payoff::parse("1", 1).unwrap()).unwrap();
        let profile = synthesize(&w, &prod.game, &prod.objectives).unwrap();
        assert!(verify_very_weak_spe(&prod.game, &prod.objectives, 0, &profile)
            .unwrap()
            .is_none());
        let back = pull_back_profile(&prod, &g, &profile);
        back.check(&g).unwrap();
        assert!(back.max_size() <= profile.max_size() << 1);
        let out = outcome_from(&back, &g, 0, &back.initial_states()).unwrap();
        assert!(out.same_play(&Lasso::new(vec![0], vec![1])));
    }
}
