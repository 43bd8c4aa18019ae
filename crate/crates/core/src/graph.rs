//! Graph algorithms over sub-arenas given as vertex sets.

use std::collections::VecDeque;

use crate::game::{GameGraph, Vertex, VertexSet};

/// Strongly connected components of the subgraph induced by `within`,
/// ordered by their smallest vertex.
pub fn sccs_within(game: &GameGraph, within: &VertexSet) -> Vec<VertexSet> {
    const UNSEEN: usize = usize::MAX;
    let n = game.vertex_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = game.empty_set();
    let mut stack: Vec<Vertex> = Vec::new();
    let mut next_index = 0;
    let mut out = Vec::new();
    // (vertex, position in its successor list)
    let mut call: Vec<(Vertex, usize)> = Vec::new();

    for root in within.ones() {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack.insert(root);

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = game.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !within.contains(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    call.push((w, 0));
                } else if on_stack.contains(w) {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = game.empty_set();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack.set(w, false);
                        comp.insert(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out.sort_by_key(|c| c.minimum());
    out
}

/// Whether the subgraph induced by `set` has at least one edge.
pub fn has_edge_within(game: &GameGraph, set: &VertexSet) -> bool {
    set.ones()
        .any(|v| game.successors(v).iter().any(|&w| set.contains(w)))
}

/// Components of `within` that can carry an infinite play.
pub fn nontrivial_sccs(game: &GameGraph, within: &VertexSet) -> Vec<VertexSet> {
    sccs_within(game, within)
        .into_iter()
        .filter(|c| has_edge_within(game, c))
        .collect()
}

/// Whether `set` is a possible Inf set: nonempty, strongly connected, with an edge.
pub fn is_cycle_set(game: &GameGraph, set: &VertexSet) -> bool {
    let Some(start) = set.minimum() else {
        return false;
    };
    has_edge_within(game, set) && forward_reach(game, &set_with(game, start), set) == *set && {
        let mut back = game.empty_set();
        back.insert(start);
        backward_reach(game, &back, set) == *set
    }
}

fn set_with(game: &GameGraph, v: Vertex) -> VertexSet {
    let mut s = game.empty_set();
    s.insert(v);
    s
}

/// Vertices of `within` reachable from `sources` without leaving `within`.
pub fn forward_reach(game: &GameGraph, sources: &VertexSet, within: &VertexSet) -> VertexSet {
    let mut seen = sources.clone();
    seen.intersect_with(within);
    let mut stack: Vec<Vertex> = seen.ones().collect();
    while let Some(v) = stack.pop() {
        for &w in game.successors(v) {
            if within.contains(w) && !seen.put(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Vertices of `within` that can reach `targets` without leaving `within`.
pub fn backward_reach(game: &GameGraph, targets: &VertexSet, within: &VertexSet) -> VertexSet {
    let mut seen = targets.clone();
    seen.intersect_with(within);
    let mut stack: Vec<Vertex> = seen.ones().collect();
    while let Some(v) = stack.pop() {
        for &u in game.predecessors(v) {
            if within.contains(u) && !seen.put(u) {
                stack.push(u);
            }
        }
    }
    seen
}

/// Shortest path from `from` to some vertex of `targets` inside `within`,
/// both endpoints included. Successors are explored in index order.
pub fn shortest_path(
    game: &GameGraph,
    from: Vertex,
    targets: &VertexSet,
    within: &VertexSet,
) -> Option<Vec<Vertex>> {
    if !within.contains(from) {
        return None;
    }
    if targets.contains(from) {
        return Some(vec![from]);
    }
    let mut parent = vec![usize::MAX; game.vertex_count()];
    let mut seen = game.empty_set();
    seen.insert(from);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in game.successors(v) {
            if !within.contains(w) || seen.put(w) {
                continue;
            }
            parent[w] = v;
            if targets.contains(w) {
                let mut path = vec![w];
                let mut cur = w;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Closed walk through every vertex of the strongly connected `set`, starting
/// at `start` and staying inside `set`. The returned sequence omits the final
/// return to `start`; its last vertex has an edge back to `start`.
pub fn covering_cycle(game: &GameGraph, start: Vertex, set: &VertexSet) -> Vec<Vertex> {
    debug_assert!(set.contains(start));
    let mut walk = vec![start];
    let mut unvisited = set.clone();
    unvisited.set(start, false);
    let mut cur = start;
    while unvisited.count_ones(..) > 0 {
        let path = shortest_path_step(game, cur, &unvisited, set).expect("set is not strongly connected");
        for &v in &path[1..] {
            unvisited.set(v, false);
        }
        walk.extend_from_slice(&path[1..]);
        cur = *walk.last().unwrap();
    }
    // close the walk
    if game.has_edge(cur, start) {
        return walk;
    }
    let back =
        shortest_path_step(game, cur, &set_with(game, start), set).expect("set is not strongly connected");
    walk.extend_from_slice(&back[1..back.len() - 1]);
    walk
}

/// Like [`shortest_path`] but requires at least one edge, so a path from a
/// target to itself is a proper cycle.
fn shortest_path_step(
    game: &GameGraph,
    from: Vertex,
    targets: &VertexSet,
    within: &VertexSet,
) -> Option<Vec<Vertex>> {
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; game.vertex_count()];
    let mut queue = VecDeque::new();
    let mut seen = game.empty_set();
    for &w in game.successors(from) {
        if within.contains(w) && !seen.put(w) {
            parent[w] = from;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if targets.contains(v) {
            let mut path = vec![v];
            let mut cur = v;
            loop {
                cur = parent[cur];
                path.push(cur);
                if cur == from {
                    break;
                }
            }
            path.reverse();
            return Some(path);
        }
        for &w in game.successors(v) {
            if within.contains(w) && !seen.put(w) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(n: usize, edges: &[(usize, usize)]) -> GameGraph {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        GameGraph::new(1, names, vec![0; n], edges, 0).unwrap()
    }

    #[test]
    fn sccs_of_chain_with_loops() {
        let g = game(4, &[(0, 1), (1, 2), (2, 1), (2, 3), (3, 3)]);
        let comps = sccs_within(&g, &g.full_set());
        let as_vecs: Vec<Vec<usize>> = comps.iter().map(|c| c.ones().collect()).collect();
        assert_eq!(as_vecs, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(nontrivial_sccs(&g, &g.full_set()).len(), 2);
    }

    #[test]
    fn sccs_respect_restriction() {
        let g = game(3, &[(0, 1), (1, 2), (2, 0)]);
        let within = g.set_of([0, 1]);
        assert!(nontrivial_sccs(&g, &within).is_empty());
        assert!(is_cycle_set(&g, &g.full_set()));
        assert!(!is_cycle_set(&g, &within));
    }

    #[test]
    fn covering_cycle_visits_everything() {
        let g = game(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)]);
        let set = g.full_set();
        let walk = covering_cycle(&g, 0, &set);
        let mut seen = g.empty_set();
        seen.extend(walk.iter().copied());
        assert_eq!(seen, set);
        for w in walk.windows(2) {
            assert!(g.has_edge(w[0], w[1]));
        }
        assert!(g.has_edge(*walk.last().unwrap(), 0));
    }

    #[test]
    fn covering_cycle_of_self_loop() {
        let g = game(2, &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(covering_cycle(&g, 1, &g.set_of([1])), vec![1]);
    }

    #[test]
    fn covering_cycle_two_cycle_without_loops() {
        let g = game(2, &[(0, 1), (1, 0)]);
        assert_eq!(covering_cycle(&g, 0, &g.full_set()), vec![0, 1]);
    }
}
