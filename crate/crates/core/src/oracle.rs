//! Brute-force reference computations and a seeded random game generator.
//!
//! The brute functions only use the game's adjacency lists and the objective
//! definitions. They enumerate vertex subsets with plain bit masks instead of
//! calling the component machinery they are meant to cross-check.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{
    ConditionPair, GameGraph, Lasso, Objective, ObjectiveKind, ObjectiveSet, Payoff, Player, Vertex,
    VertexSet,
};
use crate::witness::{EntryKey, SymbolicWitness};

/// Largest number of vertices a subset enumeration accepts.
pub const BRUTE_LIMIT: usize = 20;

/// Candidate witnesses tried by the sampled witness search.
pub const DEFAULT_TRIAL_BUDGET: u64 = 100_000;

/// Local bit-mask view of the arena `allowed`.
struct MaskArena {
    members: Vec<Vertex>,
    succ: Vec<u32>,
}

impl MaskArena {
    fn new(game: &GameGraph, allowed: &VertexSet) -> Result<Self> {
        let members: Vec<Vertex> = allowed.ones().collect();
        if members.len() > BRUTE_LIMIT {
            return Err(Error::TooLarge(format!(
                "{} vertices in a brute-force enumeration (limit {BRUTE_LIMIT})",
                members.len()
            )));
        }
        let local: BTreeMap<Vertex, usize> = members.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let succ = members
            .iter()
            .map(|&v| {
                game.successors(v)
                    .iter()
                    .filter_map(|w| local.get(w))
                    .fold(0u32, |m, &k| m | 1 << k)
            })
            .collect();
        Ok(Self { members, succ })
    }

    fn local(&self, v: Vertex) -> Option<usize> {
        self.members.iter().position(|&m| m == v)
    }

    /// Vertices reachable from `start` using only vertices of `within`.
    fn closure(&self, start: usize, within: u32) -> u32 {
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let k = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.succ[k] & within & !seen;
            seen |= new;
            frontier |= new;
        }
        seen
    }

    /// Whether some closed walk visits exactly the vertices of `set`.
    fn is_cycle_set(&self, set: u32) -> bool {
        if set == 0 {
            return false;
        }
        let first = set.trailing_zeros() as usize;
        if set.count_ones() == 1 {
            return self.succ[first] & set != 0;
        }
        let mut k = set;
        while k != 0 {
            let v = k.trailing_zeros() as usize;
            k &= k - 1;
            if self.closure(v, set) != set {
                return false;
            }
        }
        true
    }

    fn to_set(&self, game: &GameGraph, mask: u32) -> VertexSet {
        game.set_of(
            (0..self.members.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.members[k]),
        )
    }
}

/// Every possible Inf set of a play from `from` that stays in `allowed`.
pub fn brute_inf_sets(game: &GameGraph, allowed: &VertexSet, from: Vertex) -> Result<Vec<VertexSet>> {
    let arena = MaskArena::new(game, allowed)?;
    let Some(start) = arena.local(from) else {
        return Err(Error::VertexNotAllowed(game.name(from).to_string()));
    };
    let all = if arena.members.len() == 32 {
        u32::MAX
    } else {
        (1u32 << arena.members.len()) - 1
    };
    let reach = arena.closure(start, all);
    let mut out = Vec::new();
    // iterate over the submasks of `reach`
    let mut sub = reach;
    loop {
        if arena.is_cycle_set(sub) {
            out.push(arena.to_set(game, sub));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & reach;
    }
    Ok(out)
}

pub fn brute_exists_play(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    allowed: &VertexSet,
    from: Vertex,
    target: &Payoff,
) -> Result<bool> {
    objectives.require_prefix_independent()?;
    Ok(brute_inf_sets(game, allowed, from)?
        .iter()
        .any(|s| objectives.payoff_of_sets(s, s) == *target))
}

pub fn brute_payoff_set(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    from: Vertex,
) -> Result<BTreeSet<Payoff>> {
    objectives.require_prefix_independent()?;
    Ok(brute_inf_sets(game, &game.full_set(), from)?
        .iter()
        .map(|s| objectives.payoff_of_sets(s, s))
        .collect())
}

/// The labeling procedure run naively: initial labels by enumeration, then
/// repeatedly the first Remove found followed by re-checking every label
/// until nothing changes.
pub fn brute_fixpoint(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    root: Vertex,
) -> Result<Vec<BTreeSet<Payoff>>> {
    objectives.require_prefix_independent()?;
    let reach = {
        let arena = MaskArena::new(game, &game.full_set())?;
        let all = (1u32 << game.vertex_count()) - 1;
        arena.to_set(game, arena.closure(arena.local(root).expect("root exists"), all))
    };
    let mut labels = vec![BTreeSet::new(); game.vertex_count()];
    for v in reach.ones() {
        labels[v] = brute_payoff_set(game, objectives, v)?;
    }
    loop {
        let removal = reach.ones().find_map(|v| {
            let i = game.owner(v);
            let beaten = game
                .successors(v)
                .iter()
                .any(|&w| labels[w].iter().all(|q: &Payoff| q.get(i)));
            if !beaten {
                return None;
            }
            labels[v].iter().find(|p| !p.get(i)).map(|p| (v, *p))
        });
        let Some((v, p)) = removal else {
            return Ok(labels);
        };
        labels[v].remove(&p);
        loop {
            let mut changed = false;
            for u in reach.ones() {
                let current: Vec<Payoff> = labels[u].iter().copied().collect();
                for q in current {
                    let allowed = game.set_of(reach.ones().filter(|&w| labels[w].contains(&q)));
                    if !brute_exists_play(game, objectives, &allowed, u, &q)? {
                        labels[u].remove(&q);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Complete search, for games with at most four vertices.
    Exhaustive,
    /// Random assignments until `budget` candidates were tried.
    Sampled { budget: u64, seed: u64 },
}

/// One representative lasso per class that matters for goodness.
#[derive(Clone, Debug)]
struct Candidate {
    lasso: Lasso,
    occ: VertexSet,
    payoff: Payoff,
}

/// Lassoes from `v` made of a simple path followed by a closed walk covering
/// an Inf set, keeping for each payoff only those whose Occ set is minimal.
/// Goodness only looks at Occ and payoff, and shrinking Occ only removes
/// constraints, so the kept lassoes suffice.
fn candidates(game: &GameGraph, objectives: &ObjectiveSet, v: Vertex) -> Result<Vec<Candidate>> {
    let full = game.full_set();
    let mut all: Vec<Candidate> = Vec::new();
    let mut paths = vec![vec![v]];
    let mut stack = vec![vec![v]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for &w in game.successors(last) {
            if !path.contains(&w) {
                let mut longer = path.clone();
                longer.push(w);
                paths.push(longer.clone());
                stack.push(longer);
            }
        }
    }
    for path in paths {
        // the cycle starts at the last vertex of the path
        let entry = *path.last().unwrap();
        let prefix = path[..path.len() - 1].to_vec();
        for s in brute_inf_sets(game, &full, entry)? {
            if !s.contains(entry) {
                continue;
            }
            let cycle = walk_covering(game, entry, &s);
            let lasso = Lasso::new(prefix.clone(), cycle);
            let occ = game.set_of(lasso.vertices());
            let payoff = objectives.payoff_of_sets(&s, &s);
            all.push(Candidate { lasso, occ, payoff });
        }
    }
    let mut kept: Vec<Candidate> = Vec::new();
    for c in all {
        let dominated = kept
            .iter()
            .any(|k| k.payoff == c.payoff && k.occ.is_subset(&c.occ));
        if dominated {
            continue;
        }
        kept.retain(|k| !(k.payoff == c.payoff && c.occ.is_subset(&k.occ)));
        kept.push(c);
    }
    kept.sort_by(|a, b| {
        (a.payoff, a.occ.count_ones(..), a.lasso.length()).cmp(&(
            b.payoff,
            b.occ.count_ones(..),
            b.lasso.length(),
        ))
    });
    Ok(kept)
}

/// Closed walk from `start` through every vertex of the strongly connected
/// `set`, built from breadth-first shortest paths inside `set`.
fn walk_covering(game: &GameGraph, start: Vertex, set: &VertexSet) -> Vec<Vertex> {
    let bfs = |from: Vertex, to: Vertex| -> Vec<Vertex> {
        // path from `from` to `to` with at least one edge, `from` excluded
        let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        for &w in game.successors(from) {
            if set.contains(w) && !parent.contains_key(&w) {
                parent.insert(w, from);
                queue.push_back(w);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in game.successors(u) {
                if set.contains(w) && !parent.contains_key(&w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while parent[&cur] != from {
            cur = parent[&cur];
            path.push(cur);
        }
        path.reverse();
        path
    };
    let mut walk = vec![start];
    let mut at = start;
    for target in set.ones() {
        if walk.contains(&target) {
            continue;
        }
        let step = bfs(at, target);
        walk.extend(step.iter().copied());
        at = target;
    }
    // close the walk
    let back = bfs(at, start);
    walk.extend(back[..back.len() - 1].iter().copied());
    walk
}

fn brute_index(game: &GameGraph, v0: Vertex) -> Result<Vec<EntryKey>> {
    let arena = MaskArena::new(game, &game.full_set())?;
    let all = (1u32 << game.vertex_count()) - 1;
    let reach = arena.closure(v0, all);
    let mut keys = BTreeSet::from([EntryKey {
        deviator: 0,
        vertex: v0,
    }]);
    for v in (0..game.vertex_count()).filter(|v| reach >> v & 1 == 1) {
        for &w in game.successors(v) {
            keys.insert(EntryKey {
                deviator: game.owner(v) + 1,
                vertex: w,
            });
        }
    }
    Ok(keys.into_iter().collect())
}

/// Searches for a good symbolic witness whose root lasso has payoff `target`.
///
/// Exhaustive mode is complete for lassoes built from a simple path and a
/// closed walk of length at most `|V|²`; sampled mode only proves presence
/// and reports [`Error::BudgetExceeded`] when nothing was found.
pub fn brute_witness_search(
    game: &GameGraph,
    objectives: &ObjectiveSet,
    v0: Vertex,
    target: &Payoff,
    mode: SearchMode,
) -> Result<Option<SymbolicWitness>> {
    objectives.require_prefix_independent()?;
    let keys = brute_index(game, v0)?;
    let mut pools: Vec<Vec<Candidate>> = Vec::with_capacity(keys.len());
    for key in &keys {
        let mut pool = candidates(game, objectives, key.vertex)?;
        if key.deviator == 0 {
            pool.retain(|c| c.payoff == *target);
        }
        if pool.is_empty() {
            return match mode {
                SearchMode::Exhaustive => Ok(None),
                SearchMode::Sampled { budget, .. } => Err(Error::BudgetExceeded(budget)),
            };
        }
        pools.push(pool);
    }
    let position: BTreeMap<EntryKey, usize> = keys.iter().enumerate().map(|(k, key)| (*key, k)).collect();
    // for each entry, the entries its Occ vertices can deviate to, per candidate
    let deviations = |c: &Candidate| -> Vec<(Player, usize)> {
        let mut out = Vec::new();
        for x in c.occ.ones() {
            let i = game.owner(x);
            for &w in game.successors(x) {
                out.push((
                    i,
                    position[&EntryKey {
                        deviator: i + 1,
                        vertex: w,
                    }],
                ));
            }
        }
        out
    };
    let consistent = |choice: &[Option<usize>], k: usize| -> bool {
        // constraints between k and every assigned entry, in both directions
        let ck = &pools[k][choice[k].unwrap()];
        for (i, d) in deviations(ck) {
            if let Some(cd) = choice[d] {
                if !ck.payoff.get(i) && pools[d][cd].payoff.get(i) {
                    return false;
                }
            }
        }
        for e in 0..keys.len() {
            if e == k {
                continue;
            }
            let Some(ce) = choice[e] else { continue };
            let ce = &pools[e][ce];
            for (i, d) in deviations(ce) {
                if d == k && !ce.payoff.get(i) && ck.payoff.get(i) {
                    return false;
                }
            }
        }
        true
    };
    let assemble = |choice: &[Option<usize>]| SymbolicWitness {
        root: v0,
        lassoes: keys
            .iter()
            .enumerate()
            .map(|(k, key)| (*key, pools[k][choice[k].unwrap()].lasso.clone()))
            .collect(),
    };

    match mode {
        SearchMode::Exhaustive => {
            if game.vertex_count() > 4 {
                return Err(Error::TooLarge(format!(
                    "{} vertices for an exhaustive witness search (limit 4)",
                    game.vertex_count()
                )));
            }
            let mut choice: Vec<Option<usize>> = vec![None; keys.len()];
            let mut k = 0;
            loop {
                let next = choice[k].map_or(0, |c| c + 1);
                if next >= pools[k].len() {
                    choice[k] = None;
                    if k == 0 {
                        return Ok(None);
                    }
                    k -= 1;
                    continue;
                }
                choice[k] = Some(next);
                if consistent(&choice, k) {
                    if k + 1 == keys.len() {
                        return Ok(Some(assemble(&choice)));
                    }
                    k += 1;
                }
            }
        }
        SearchMode::Sampled { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                let choice: Vec<Option<usize>> =
                    pools.iter().map(|p| Some(rng.random_range(0..p.len()))).collect();
                if (0..keys.len()).all(|k| consistent(&choice, k)) {
                    return Ok(Some(assemble(&choice)));
                }
            }
            Err(Error::BudgetExceeded(budget))
        }
    }
}

/// Probability that a vertex belongs to a sampled vertex set.
pub const SET_DENSITY: f64 = 0.3;
/// Colors used by random Parity colorings.
pub const PARITY_COLORS: u32 = 4;
/// Colors used by random Muller colorings.
pub const MULLER_COLORS: u32 = 3;

/// Seeded random game with vertices `v0, v1, …`, initial vertex `v0` and
/// uniformly random owners.
///
/// Each ordered pair, self-loops included, is an edge with probability
/// `density`; a vertex left without successors gets the edge to the next
/// vertex (cyclically). Vertex sets include each vertex with probability
/// 0.3; Parity colors are uniform in `1..=4`; Muller colors are uniform in
/// `1..=3` with 1 to 3 random nonempty color sets; explicit Muller families
/// hold 1 to 3 random nonempty vertex sets; Rabin and Streett conditions
/// have 1 to 3 pairs of random sets.
pub fn gen_random_game(
    seed: u64,
    vertex_count: usize,
    player_count: usize,
    kind: ObjectiveKind,
    density: f64,
) -> Result<(GameGraph, ObjectiveSet)> {
    if vertex_count == 0 || player_count == 0 {
        return Err(Error::InvalidParams(
            "vertex and player counts must be positive".into(),
        ));
    }
    if player_count > 20 {
        return Err(Error::InvalidParams(format!(
            "{player_count} players (at most 20)"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParams(format!("density {density} outside (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = vertex_count;
    let mut edges = Vec::new();
    for u in 0..n {
        let before = edges.len();
        for v in 0..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
        if edges.len() == before {
            edges.push((u, (u + 1) % n));
        }
    }
    let owner: Vec<Player> = (0..n).map(|_| rng.random_range(0..player_count)).collect();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let game = GameGraph::new(player_count, names, owner, &edges, 0)?;

    let random_set = |rng: &mut ChaCha8Rng, p: f64| game.set_of((0..n).filter(|_| rng.random_bool(p)));
    let mut objectives = Vec::with_capacity(player_count);
    for _ in 0..player_count {
        let obj = match kind {
            ObjectiveKind::Reachability => Objective::Reachability(random_set(&mut rng, SET_DENSITY)),
            ObjectiveKind::Safety => Objective::Safety(random_set(&mut rng, SET_DENSITY)),
            ObjectiveKind::Buchi => Objective::Buchi(random_set(&mut rng, SET_DENSITY)),
            ObjectiveKind::CoBuchi => Objective::CoBuchi(random_set(&mut rng, SET_DENSITY)),
            ObjectiveKind::Parity => {
                Objective::Parity((0..n).map(|_| rng.random_range(1..=PARITY_COLORS)).collect())
            }
            ObjectiveKind::ExplicitMuller => {
                let count = rng.random_range(1..=3);
                let family = (0..count)
                    .map(|_| {
                        let mut s = random_set(&mut rng, 0.5);
                        if s.is_clear() {
                            s.insert(rng.random_range(0..n));
                        }
                        s
                    })
                    .collect();
                Objective::ExplicitMuller(family)
            }
            ObjectiveKind::Muller => {
                let colors: Vec<u32> = (0..n).map(|_| rng.random_range(1..=MULLER_COLORS)).collect();
                let max = *colors.iter().max().unwrap();
                let count = rng.random_range(1..=3);
                let family = (0..count)
                    .map(|_| {
                        let mut s: BTreeSet<u32> = (1..=max).filter(|_| rng.random_bool(0.5)).collect();
                        if s.is_empty() {
                            s.insert(rng.random_range(1..=max));
                        }
                        s
                    })
                    .collect();
                Objective::Muller { colors, family }
            }
            ObjectiveKind::Rabin | ObjectiveKind::Streett => {
                let count = rng.random_range(1..=3);
                let pairs = (0..count)
                    .map(|_| ConditionPair {
                        g: random_set(&mut rng, SET_DENSITY),
                        r: random_set(&mut rng, SET_DENSITY),
                    })
                    .collect();
                if kind == ObjectiveKind::Rabin {
                    Objective::Rabin(pairs)
                } else {
                    Objective::Streett(pairs)
                }
            }
        };
        objectives.push(obj);
    }
    let objectives = ObjectiveSet::new(&game, objectives)?;
    Ok((game, objectives))
}

/// Random lasso from `from`: a random walk of up to `max_prefix` steps,
/// continued until a vertex repeats after that point.
pub fn random_lasso(game: &GameGraph, rng: &mut impl Rng, from: Vertex, max_prefix: usize) -> Lasso {
    let lead = rng.random_range(0..=max_prefix);
    let mut walk = vec![from];
    for _ in 0..lead {
        let next = *game
            .successors(*walk.last().unwrap())
            .choose(rng)
            .expect("total game");
        walk.push(next);
    }
    let tail_start = walk.len() - 1;
    loop {
        let next = *game
            .successors(*walk.last().unwrap())
            .choose(rng)
            .expect("total game");
        if let Some(k) = walk[tail_start..].iter().position(|&x| x == next) {
            let at = tail_start + k;
            let cycle = walk.split_off(at);
            return Lasso::new(walk, cycle);
        }
        walk.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::payoff_of;
    use crate::sample::{running_example, self_loop};
    use crate::witness::is_good;

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    #[test]
    fn brute_play_examples() {
        let (g, o) = running_example();
        assert!(brute_exists_play(&g, &o, &g.full_set(), 0, &p("00")).unwrap());
        assert!(!brute_exists_play(&g, &o, &g.set_of([0, 6]), 0, &p("00")).unwrap());
        let (g, o) = self_loop();
        assert!(brute_exists_play(&g, &o, &g.full_set(), 0, &p("1")).unwrap());
    }

    #[test]
    fn brute_payoff_sets_of_running_example() {
        let (g, o) = running_example();
        let at = |v| brute_payoff_set(&g, &o, v).unwrap();
        assert_eq!(at(0), BTreeSet::from([p("00"), p("10"), p("01")]));
        assert_eq!(at(3), BTreeSet::from([p("01")]));
        assert_eq!(at(6), BTreeSet::from([p("00")]));
    }

    #[test]
    fn brute_fixpoint_of_running_example() {
        let (g, o) = running_example();
        let labels = brute_fixpoint(&g, &o, 0).unwrap();
        assert_eq!(labels[0], BTreeSet::from([p("01")]));
        assert_eq!(labels[1], BTreeSet::from([p("10"), p("01")]));
        assert_eq!(labels[4], BTreeSet::from([p("01")]));
        assert_eq!(labels[6], BTreeSet::from([p("00")]));
    }

    #[test]
    fn covering_walks_are_closed_and_complete() {
        let (g, _) = running_example();
        let set = g.set_of([1, 2]);
        for start in [1, 2] {
            let walk = walk_covering(&g, start, &set);
            let lasso = Lasso::new(vec![], walk.clone());
            lasso.check(&g).unwrap();
            assert_eq!(g.set_of(walk), set);
        }
    }

    #[test]
    fn witness_search_on_running_example() {
        let (g, o) = running_example();
        let found = brute_witness_search(
            &g,
            &o,
            0,
            &p("01"),
            SearchMode::Sampled {
                budget: 1000,
                seed: 1,
            },
        );
        // seven vertices are too many for the exhaustive mode but sampling may still find one
        if let Ok(Some(w)) = found {
            assert!(is_good(&w, &g, &o).unwrap().is_none());
            assert_eq!(payoff_of(w.root_lasso().unwrap(), &o), p("01"));
        }
        assert!(matches!(
            brute_witness_search(&g, &o, 0, &p("11"), SearchMode::Sampled { budget: 10, seed: 1 }),
            Err(Error::BudgetExceeded(10))
        ));
        assert!(matches!(
            brute_witness_search(&g, &o, 0, &p("01"), SearchMode::Exhaustive),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn exhaustive_search_on_small_game() {
        // v0 (player 1) chooses between v1 (good for 1) and v2 (good for 2)
        let g = GameGraph::new(
            2,
            vec!["v0".into(), "v1".into(), "v2".into()],
            vec![0, 0, 0],
            &[(0, 1), (0, 2), (1, 1), (2, 2)],
            0,
        )
        .unwrap();
        let o = ObjectiveSet::new(
            &g,
            vec![Objective::Buchi(g.set_of([1])), Objective::Buchi(g.set_of([2]))],
        )
        .unwrap();
        let w = brute_witness_search(&g, &o, 0, &p("10"), SearchMode::Exhaustive)
            .unwrap()
            .unwrap();
        assert!(is_good(&w, &g, &o).unwrap().is_none());
        assert!(brute_witness_search(&g, &o, 0, &p("01"), SearchMode::Exhaustive)
            .unwrap()
            .is_none());
    }

    #[test]
    fn generator_is_deterministic_and_total() {
        for kind in ObjectiveKind::ALL {
            let a = gen_random_game(7, 6, 2, kind, 0.3).unwrap();
            let b = gen_random_game(7, 6, 2, kind, 0.3).unwrap();
            assert_eq!(a.0.edges().collect::<Vec<_>>(), b.0.edges().collect::<Vec<_>>());
            assert_eq!(a.1, b.1);
            assert!(a.0.vertices().all(|v| !a.0.successors(v).is_empty()));
        }
        let (g, _) = gen_random_game(3, 1, 1, ObjectiveKind::Buchi, 0.1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        let (g, _) = gen_random_game(3, 4, 2, ObjectiveKind::Parity, 1.0).unwrap();
        assert_eq!(g.edge_count(), 16);
        assert!(matches!(
            gen_random_game(0, 3, 1, ObjectiveKind::Buchi, 0.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            gen_random_game(0, 0, 1, ObjectiveKind::Buchi, 0.5),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn random_lassoes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, _) = gen_random_game(11, 7, 2, ObjectiveKind::Buchi, 0.3).unwrap();
        for _ in 0..200 {
            let l = random_lasso(&g, &mut rng, 0, 6);
            l.check(&g).unwrap();
            assert_eq!(l.first(), 0);
        }
    }
}
