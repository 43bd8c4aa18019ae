//! Existence and extraction of plays with an exact payoff inside a sub-arena.
//!
//! For prefix-independent objectives the payoff of a play only depends on its
//! Inf set, and the possible Inf sets of plays from `v` staying in `A` are
//! exactly the strongly connected subsets of `A` (with an edge) reachable from
//! `v` inside `A`. Every query reduces to finding such a set whose payoff is
//! the target.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::game::{
    ConditionPair, GameGraph, Lasso, Objective, ObjectiveKind, ObjectiveSet, Payoff, Vertex, VertexSet,
};
use crate::graph::{
    backward_reach, covering_cycle, forward_reach, is_cycle_set, nontrivial_sccs, shortest_path,
};

/// Default bound on the component size handled by subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// Plays are confined to `allowed`, prefix and cycle alike.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArenaRestriction {
    pub allowed: VertexSet,
}

impl ArenaRestriction {
    pub fn full(game: &GameGraph) -> Self {
        Self {
            allowed: game.full_set(),
        }
    }
}

/// Conjunction over pairs of "Inf ∩ G = ∅ or Inf ∩ R ≠ ∅".
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreettSpec {
    pub pairs: Vec<ConditionPair>,
}

impl StreettSpec {
    pub fn holds_on(&self, set: &VertexSet) -> bool {
        self.pairs
            .iter()
            .all(|p| p.g.is_disjoint(set) || !p.r.is_disjoint(set))
    }
}

/// All maximal sub-components of `allowed` satisfying `spec`.
///
/// Any strongly connected set satisfying all pairs lies inside one of the
/// returned sets: removing the G-part of a violated pair never deletes a
/// vertex of such a set.
pub fn streett_cores(game: &GameGraph, allowed: &VertexSet, spec: &StreettSpec) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let mut work: Vec<VertexSet> = nontrivial_sccs(game, allowed);
    work.reverse();
    while let Some(comp) = work.pop() {
        let mut strip = game.empty_set();
        for pair in &spec.pairs {
            if !pair.g.is_disjoint(&comp) && pair.r.is_disjoint(&comp) {
                strip.union_with(&pair.g);
            }
        }
        if strip.is_clear() {
            out.push(comp);
            continue;
        }
        let mut rest = comp;
        rest.difference_with(&strip);
        let mut subs = nontrivial_sccs(game, &rest);
        subs.reverse();
        work.extend(subs);
    }
    out
}

/// A strongly connected set reachable from `from` inside `allowed` on which
/// `spec` holds, if any.
pub fn streett_nonempty(
    game: &GameGraph,
    restriction: &ArenaRestriction,
    from: Vertex,
    spec: &StreettSpec,
) -> Option<VertexSet> {
    if !restriction.allowed.contains(from) {
        return None;
    }
    let reach = forward_reach(game, &game.set_of([from]), &restriction.allowed);
    streett_cores(game, &reach, spec).into_iter().next()
}

/// Every possible Inf set of a play from `from` inside `allowed`, by
/// increasing size and then lexicographically.
pub fn feasible_inf_sets(
    game: &GameGraph,
    restriction: &ArenaRestriction,
    from: Vertex,
    cap: usize,
) -> Result<Vec<VertexSet>> {
    if !restriction.allowed.contains(from) {
        return Err(Error::VertexNotAllowed(game.name(from).to_string()));
    }
    let reach = forward_reach(game, &game.set_of([from]), &restriction.allowed);
    let mut sets = cycle_subsets(game, &reach, cap)?;
    sets.sort_by_cached_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
    Ok(sets)
}

/// All strongly connected subsets (with an edge) of `within`.
fn cycle_subsets(game: &GameGraph, within: &VertexSet, cap: usize) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    for comp in nontrivial_sccs(game, within) {
        let members: Vec<Vertex> = comp.ones().collect();
        if members.len() > cap {
            return Err(Error::ArenaTooLarge {
                size: members.len(),
                cap,
            });
        }
        for mask in 1u64..(1u64 << members.len()) {
            let subset = game.set_of(
                members
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &v)| v),
            );
            if is_cycle_set(game, &subset) {
                out.push(subset);
            }
        }
    }
    Ok(out)
}

/// Translation of "the payoff is exactly `target`" into a disjunction of
/// Streett conjunctions. `None` for kinds without such a translation here.
pub fn streett_branches(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    target: &Payoff,
) -> Option<Vec<StreettSpec>> {
    let all = game.full_set();
    let none = game.empty_set();
    let pair = |g: &VertexSet, r: &VertexSet| ConditionPair {
        g: g.clone(),
        r: r.clone(),
    };
    // Options per player; the result is their cartesian product.
    let mut per_player: Vec<Vec<Vec<ConditionPair>>> = Vec::new();
    for (i, obj) in objectives.iter().enumerate() {
        let win = target.get(i);
        let options = match obj {
            Objective::Buchi(f) if win => vec![vec![pair(&all, f)]],
            Objective::Buchi(f) => vec![vec![pair(f, &none)]],
            Objective::CoBuchi(f) if win => vec![vec![pair(f, &none)]],
            Objective::CoBuchi(f) => vec![vec![pair(&all, f)]],
            Objective::Parity(colors) => {
                // max color even: every odd color seen infinitely often is
                // dominated by a larger one; max odd symmetrically.
                let d = colors.iter().copied().max().unwrap_or(1);
                let bad_parity = if win { 1 } else { 0 };
                let pairs = (1..=d)
                    .filter(|c| c % 2 == bad_parity)
                    .map(|c| ConditionPair {
                        g: game.set_of(game.vertices().filter(|&v| colors[v] == c)),
                        r: game.set_of(game.vertices().filter(|&v| colors[v] > c)),
                    })
                    .collect();
                vec![pairs]
            }
            Objective::Rabin(pairs) if win => rabin_branches(pairs, &all, &none),
            Objective::Rabin(pairs) => vec![pairs.clone()],
            Objective::Streett(pairs) if win => vec![pairs.clone()],
            Objective::Streett(pairs) => rabin_branches(pairs, &all, &none),
            _ => return None,
        };
        per_player.push(options);
    }
    let mut specs = vec![StreettSpec::default()];
    for options in per_player {
        let mut next = Vec::with_capacity(specs.len() * options.len());
        for spec in &specs {
            for opt in &options {
                let mut pairs = spec.pairs.clone();
                pairs.extend(opt.iter().cloned());
                next.push(StreettSpec { pairs });
            }
        }
        specs = next;
    }
    Some(specs)
}

/// One branch per pair index `j`: "Inf meets G_j and avoids R_j".
fn rabin_branches(pairs: &[ConditionPair], all: &VertexSet, none: &VertexSet) -> Vec<Vec<ConditionPair>> {
    pairs
        .iter()
        .map(|p| {
            vec![
                ConditionPair {
                    g: all.clone(),
                    r: p.g.clone(),
                },
                ConditionPair {
                    g: p.r.clone(),
                    r: none.clone(),
                },
            ]
        })
        .collect()
}

/// Possible Inf sets with the target payoff and the vertices that can reach
/// one of them, all inside one restriction.
#[derive(Clone, Debug)]
pub struct PlayRegion {
    /// Strongly connected sets with the target payoff. Every play with that
    /// payoff inside the restriction ends up inside one of them.
    pub cores: Vec<VertexSet>,
    /// Vertices from which a play with the target payoff exists.
    pub region: VertexSet,
}

/// One recorded `exists_play` query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub allowed: VertexSet,
    pub from: Vertex,
    pub target: Payoff,
    pub answer: bool,
}

/// Memoizing play oracle for one game. Not shareable across threads; each
/// worker builds its own.
pub struct PathOracle<'g> {
    game: &'g GameGraph,
    objectives: &'g ObjectiveSet,
    cap: usize,
    cache: HashMap<(VertexSet, Payoff), Rc<PlayRegion>>,
    log: Option<Vec<Query>>,
}

impl<'g> PathOracle<'g> {
    pub fn new(game: &'g GameGraph, objectives: &'g ObjectiveSet) -> Result<Self> {
        objectives.require_prefix_independent()?;
        Ok(Self {
            game,
            objectives,
            cap: DEFAULT_ENUMERATION_CAP,
            cache: HashMap::new(),
            log: None,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Record every `exists_play` query for later inspection.
    pub fn with_logging(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn take_log(&mut self) -> Vec<Query> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn game(&self) -> &'g GameGraph {
        self.game
    }

    pub fn objectives(&self) -> &'g ObjectiveSet {
        self.objectives
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn region(&mut self, allowed: &VertexSet, target: &Payoff) -> Result<Rc<PlayRegion>> {
        let key = (allowed.clone(), *target);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(Rc::clone(hit));
        }
        let cores = self.cores(allowed, target)?;
        let mut union = self.game.empty_set();
        for c in &cores {
            union.union_with(c);
        }
        let region = backward_reach(self.game, &union, allowed);
        let computed = Rc::new(PlayRegion { cores, region });
        self.cache.insert(key, Rc::clone(&computed));
        Ok(computed)
    }

    fn cores(&self, allowed: &VertexSet, target: &Payoff) -> Result<Vec<VertexSet>> {
        let game = self.game;
        if let Some(branches) = streett_branches(game, self.objectives, target) {
            let mut seen = HashSet::new();
            let mut cores = Vec::new();
            for spec in &branches {
                for core in streett_cores(game, allowed, spec) {
                    if seen.insert(core.clone()) {
                        cores.push(core);
                    }
                }
            }
            return Ok(cores);
        }
        match self.objectives.kind() {
            ObjectiveKind::ExplicitMuller => Ok(self.explicit_muller_cores(allowed, target)),
            ObjectiveKind::Muller => Ok(cycle_subsets(game, allowed, self.cap)?
                .into_iter()
                .filter(|s| self.objectives.payoff_of_inf(s) == *target)
                .collect()),
            kind => Err(Error::ObjectiveNotPrefixIndependent(kind.name())),
        }
    }

    fn explicit_muller_cores(&self, allowed: &VertexSet, target: &Payoff) -> Vec<VertexSet> {
        let families = |i: usize| match self.objectives.get(i) {
            Objective::ExplicitMuller(f) => f.as_slice(),
            _ => unreachable!("homogeneous objective set"),
        };
        let n = self.objectives.player_count();
        if let Some(winner) = (0..n).find(|&i| target.get(i)) {
            // Inf must be one of the winner's listed sets.
            let mut seen = HashSet::new();
            return families(winner)
                .iter()
                .filter(|s| s.is_subset(allowed) && is_cycle_set(self.game, s))
                .filter(|s| self.objectives.payoff_of_inf(s) == *target)
                .filter(|s| seen.insert((*s).clone()))
                .cloned()
                .collect();
        }
        let listed: HashSet<VertexSet> = (0..n).flat_map(|i| families(i).iter().cloned()).collect();
        let mut visited = HashSet::new();
        let mut out = Vec::new();
        for comp in nontrivial_sccs(self.game, allowed) {
            self.avoid_listed(comp, &listed, &mut visited, &mut out);
        }
        out
    }

    /// Maximal strongly connected subsets of `set` listed in no family. Only
    /// listed sets are split further, so the search visits at most the total
    /// family size many strongly connected sets plus their components.
    fn avoid_listed(
        &self,
        set: VertexSet,
        listed: &HashSet<VertexSet>,
        visited: &mut HashSet<VertexSet>,
        out: &mut Vec<VertexSet>,
    ) {
        if !visited.insert(set.clone()) {
            return;
        }
        if !is_cycle_set(self.game, &set) {
            for comp in nontrivial_sccs(self.game, &set) {
                self.avoid_listed(comp, listed, visited, out);
            }
            return;
        }
        if !listed.contains(&set) {
            out.push(set);
            return;
        }
        for v in set.ones() {
            let mut smaller = set.clone();
            smaller.set(v, false);
            if !smaller.is_clear() {
                self.avoid_listed(smaller, listed, visited, out);
            }
        }
    }

    /// Whether some play from `from` inside `allowed` has payoff `target`.
    pub fn exists_play(&mut self, allowed: &VertexSet, from: Vertex, target: &Payoff) -> Result<bool> {
        if !allowed.contains(from) {
            return Err(Error::VertexNotAllowed(self.game.name(from).to_string()));
        }
        let answer = self.region(allowed, target)?.region.contains(from);
        if let Some(log) = self.log.as_mut() {
            log.push(Query {
                allowed: allowed.clone(),
                from,
                target: *target,
                answer,
            });
        }
        Ok(answer)
    }

    /// A lasso from `from` inside `allowed` with payoff `target`: a shortest
    /// path into the nearest witness component followed by a closed walk
    /// covering that component. Its length stays below `|V| - 1 + |V|²`.
    pub fn extract_lasso(&mut self, allowed: &VertexSet, from: Vertex, target: &Payoff) -> Result<Lasso> {
        let game = self.game;
        let no_play = || Error::NoSuchPlay {
            from: game.name(from).to_string(),
            payoff: target.to_string(),
        };
        if !allowed.contains(from) {
            return Err(Error::VertexNotAllowed(game.name(from).to_string()));
        }
        let found = self.region(allowed, target)?;
        if !found.region.contains(from) {
            return Err(no_play());
        }
        let mut union = game.empty_set();
        for c in &found.cores {
            union.union_with(c);
        }
        let path = shortest_path(game, from, &union, allowed).ok_or_else(no_play)?;
        let entry = *path.last().unwrap();
        let core = found
            .cores
            .iter()
            .find(|c| c.contains(entry))
            .expect("entry lies in a core");
        let cycle = covering_cycle(game, entry, core);
        let prefix = path[..path.len() - 1].to_vec();
        Ok(Lasso::new(prefix, cycle))
    }
}

pub fn exists_play(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    restriction: &ArenaRestriction,
    from: Vertex,
    target: &Payoff,
) -> Result<bool> {
    PathOracle::new(game, objectives)?.exists_play(&restriction.allowed, from, target)
}

pub fn extract_lasso(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    restriction: &ArenaRestriction,
    from: Vertex,
    target: &Payoff,
) -> Result<Lasso> {
    PathOracle::new(game, objectives)?.extract_lasso(&restriction.allowed, from, target)
}
