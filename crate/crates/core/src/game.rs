//! Game arenas, objectives, payoffs and lassoes.
//!
//! Vertices and players are dense zero-based indices internally. Vertex names
//! and one-based player numbers only appear at the serialization boundary.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Player = usize;
pub type VertexSet = FixedBitSet;

/// Finite arena with a total successor relation and an owner for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    succ: Vec<Vec<Vertex>>,
    pred: Vec<Vec<Vertex>>,
    owner: Vec<Player>,
    players: usize,
    initial: Vertex,
}

impl GameGraph {
    /// Builds a game from named vertices. `owner` holds zero-based players;
    /// successor lists are sorted and deduplicated.
    pub fn new(
        players: usize,
        names: Vec<String>,
        owner: Vec<Player>,
        edges: &[(Vertex, Vertex)],
        initial: Vertex,
    ) -> Result<Self> {
        let n = names.len();
        if players == 0 {
            return Err(Error::InvalidGame("at least one player is required".into()));
        }
        if players > 64 {
            return Err(Error::InvalidGame("at most 64 players are supported".into()));
        }
        if n == 0 {
            return Err(Error::InvalidGame("the vertex set is empty".into()));
        }
        if owner.len() != n {
            return Err(Error::InvalidGame(format!(
                "owner map covers {} of {} vertices",
                owner.len(),
                n
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (v, name) in names.iter().enumerate() {
            if index.insert(name.clone(), v).is_some() {
                return Err(Error::InvalidGame(format!("duplicate vertex {name:?}")));
            }
        }
        if let Some(v) = owner.iter().position(|&p| p >= players) {
            return Err(Error::InvalidGame(format!(
                "vertex {} is owned by player {} but the game has {} players",
                names[v],
                owner[v] + 1,
                players
            )));
        }
        if initial >= n {
            return Err(Error::InvalidGame("initial vertex out of range".into()));
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGame(format!("edge ({a}, {b}) out of range")));
            }
            succ[a].push(b);
        }
        let mut pred = vec![Vec::new(); n];
        for (v, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "vertex {} has no successor",
                    names[v]
                )));
            }
            for &w in list.iter() {
                pred[w].push(v);
            }
        }
        Ok(Self {
            names,
            index,
            succ,
            pred,
            owner,
            players,
            initial,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn initial(&self) -> Vertex {
        self.initial
    }

    pub fn owner(&self, v: Vertex) -> Player {
        self.owner[v]
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.pred[v]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(v, list)| list.iter().map(move |&w| (v, w)))
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    pub fn empty_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.vertex_count())
    }

    pub fn full_set(&self) -> VertexSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, vertices: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut s = self.empty_set();
        s.extend(vertices);
        s
    }

    /// Succ*(from): vertices reachable from `from`, including itself.
    pub fn reachable_from(&self, from: Vertex) -> VertexSet {
        let mut seen = self.empty_set();
        seen.insert(from);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in &self.succ[v] {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Same arena with a different initial vertex.
    pub fn with_initial(&self, initial: Vertex) -> Self {
        assert!(initial < self.vertex_count());
        Self {
            initial,
            ..self.clone()
        }
    }

    pub fn format_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.ones().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Gain vector over all players; player 1 is the leftmost bit when displayed,
/// so the derived order on payoffs of equal length is the lexicographic order
/// of their bitstrings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Payoff {
    len: u8,
    code: u64,
}

impl Payoff {
    pub fn zero(len: usize) -> Self {
        assert!((1..=64).contains(&len));
        Self {
            len: len as u8,
            code: 0,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            p.set(i, b);
        }
        p
    }

    /// Payoff whose bitstring, read as a binary number, is `code`.
    pub fn from_code(len: usize, code: u64) -> Self {
        assert!((1..=64).contains(&len));
        assert!(len == 64 || code < (1u64 << len));
        Self { len: len as u8, code }
    }

    /// Every payoff of the given length in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Payoff> {
        assert!((1..=20).contains(&len), "payoff space too large to enumerate");
        (0..(1u64 << len)).map(move |code| Payoff::from_code(len, code))
    }

    pub fn parse(s: &str, expected_len: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > 64 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidPayoff(s.to_string()));
        }
        if s.len() != expected_len {
            return Err(Error::PayoffLength {
                payoff: s.to_string(),
                got: s.len(),
                expected: expected_len,
            });
        }
        let bits: Vec<bool> = s.bytes().map(|b| b == b'1').collect();
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    fn mask(&self, player: Player) -> u64 {
        assert!(player < self.len as usize);
        1u64 << (self.len as usize - 1 - player)
    }

    pub fn get(&self, player: Player) -> bool {
        self.code & self.mask(player) != 0
    }

    pub fn set(&mut self, player: Player, value: bool) {
        let m = self.mask(player);
        if value {
            self.code |= m;
        } else {
            self.code &= !m;
        }
    }

    /// Componentwise order.
    pub fn le(&self, other: &Payoff) -> bool {
        assert_eq!(self.len, other.len);
        self.code & !other.code == 0
    }

    pub fn within(&self, min: &Payoff, max: &Payoff) -> bool {
        min.le(self) && self.le(max)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len as usize {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Ultimately periodic play `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<Vertex>,
    pub cycle: Vec<Vertex>,
}

impl Lasso {
    pub fn new(prefix: Vec<Vertex>, cycle: Vec<Vertex>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Self { prefix, cycle }
    }

    pub fn first(&self) -> Vertex {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    /// Number of edges of prefix·cycle read as a history.
    pub fn length(&self) -> usize {
        self.prefix.len() + self.cycle.len() - 1
    }

    /// Vertices of prefix·cycle in order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }

    pub fn occ(&self, vertex_count: usize) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(vertex_count);
        s.extend(self.vertices());
        s
    }

    pub fn inf(&self, vertex_count: usize) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(vertex_count);
        s.extend(self.cycle.iter().copied());
        s
    }

    pub fn check(&self, game: &GameGraph) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::MalformedWitness("lasso with empty cycle".into()));
        }
        let n = game.vertex_count();
        if let Some(v) = self.vertices().find(|&v| v >= n) {
            return Err(Error::MalformedWitness(format!("vertex index {v} out of range")));
        }
        let seq: Vec<Vertex> = self.vertices().collect();
        for w in seq.windows(2) {
            if !game.has_edge(w[0], w[1]) {
                return Err(Error::MalformedWitness(format!(
                    "missing edge ({}, {})",
                    game.name(w[0]),
                    game.name(w[1])
                )));
            }
        }
        let (last, head) = (*self.cycle.last().unwrap(), self.cycle[0]);
        if !game.has_edge(last, head) {
            return Err(Error::MalformedWitness(format!(
                "cycle does not close: missing edge ({}, {})",
                game.name(last),
                game.name(head)
            )));
        }
        Ok(())
    }

    /// Canonical representative of the infinite word: primitive cycle and
    /// shortest prefix. Two lassoes denote the same play iff their
    /// normalizations are equal.
    pub fn normalized(&self) -> Lasso {
        let mut cycle = self.cycle.clone();
        let len = cycle.len();
        for period in 1..=len {
            if len.is_multiple_of(period) && (period..len).all(|i| cycle[i] == cycle[i - period]) {
                cycle.truncate(period);
                break;
            }
        }
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Lasso { prefix, cycle }
    }

    pub fn same_play(&self, other: &Lasso) -> bool {
        self.normalized() == other.normalized()
    }

    /// The play from position `pos` of prefix·cycle on.
    pub fn suffix_from(&self, pos: usize) -> Lasso {
        if pos < self.prefix.len() {
            Lasso::new(self.prefix[pos..].to_vec(), self.cycle.clone())
        } else {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(pos - self.prefix.len());
            Lasso::new(Vec::new(), cycle)
        }
    }

    pub fn display(&self, game: &GameGraph) -> String {
        let p: Vec<&str> = self.prefix.iter().map(|&v| game.name(v)).collect();
        let c: Vec<&str> = self.cycle.iter().map(|&v| game.name(v)).collect();
        format!(
            "{}({})^w",
            p.join(" ") + if p.is_empty() { "" } else { " " },
            c.join(" ")
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveKind {
    Reachability,
    Safety,
    Buchi,
    CoBuchi,
    Parity,
    ExplicitMuller,
    Muller,
    Rabin,
    Streett,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 9] = [
        ObjectiveKind::Reachability,
        ObjectiveKind::Safety,
        ObjectiveKind::Buchi,
        ObjectiveKind::CoBuchi,
        ObjectiveKind::Parity,
        ObjectiveKind::ExplicitMuller,
        ObjectiveKind::Muller,
        ObjectiveKind::Rabin,
        ObjectiveKind::Streett,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Reachability => "reachability",
            ObjectiveKind::Safety => "safety",
            ObjectiveKind::Buchi => "buchi",
            ObjectiveKind::CoBuchi => "cobuchi",
            ObjectiveKind::Parity => "parity",
            ObjectiveKind::ExplicitMuller => "explicit_muller",
            ObjectiveKind::Muller => "muller",
            ObjectiveKind::Rabin => "rabin",
            ObjectiveKind::Streett => "streett",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Some(match key.as_str() {
            "reachability" | "reach" => ObjectiveKind::Reachability,
            "safety" => ObjectiveKind::Safety,
            "buchi" | "büchi" => ObjectiveKind::Buchi,
            "cobuchi" => ObjectiveKind::CoBuchi,
            "parity" => ObjectiveKind::Parity,
            "explicitmuller" => ObjectiveKind::ExplicitMuller,
            "muller" => ObjectiveKind::Muller,
            "rabin" => ObjectiveKind::Rabin,
            "streett" => ObjectiveKind::Streett,
            _ => return None,
        })
    }

    pub fn is_prefix_independent(self) -> bool {
        !matches!(self, ObjectiveKind::Reachability | ObjectiveKind::Safety)
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Rabin or Streett pair `(G, R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConditionPair {
    pub g: VertexSet,
    pub r: VertexSet,
}

/// One player's objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Reachability(VertexSet),
    Safety(VertexSet),
    Buchi(VertexSet),
    CoBuchi(VertexSet),
    /// Color per vertex, in `1..=d`; max-parity, even wins.
    Parity(Vec<u32>),
    ExplicitMuller(Vec<VertexSet>),
    Muller {
        colors: Vec<u32>,
        family: Vec<BTreeSet<u32>>,
    },
    Rabin(Vec<ConditionPair>),
    Streett(Vec<ConditionPair>),
}

fn meets(a: &VertexSet, b: &VertexSet) -> bool {
    !a.is_disjoint(b)
}

impl Objective {
    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::Reachability(_) => ObjectiveKind::Reachability,
            Objective::Safety(_) => ObjectiveKind::Safety,
            Objective::Buchi(_) => ObjectiveKind::Buchi,
            Objective::CoBuchi(_) => ObjectiveKind::CoBuchi,
            Objective::Parity(_) => ObjectiveKind::Parity,
            Objective::ExplicitMuller(_) => ObjectiveKind::ExplicitMuller,
            Objective::Muller { .. } => ObjectiveKind::Muller,
            Objective::Rabin(_) => ObjectiveKind::Rabin,
            Objective::Streett(_) => ObjectiveKind::Streett,
        }
    }

    /// Membership of a play with the given Occ and Inf sets.
    pub fn satisfied(&self, occ: &VertexSet, inf: &VertexSet) -> bool {
        match self {
            Objective::Reachability(f) => meets(occ, f),
            Objective::Safety(f) => !meets(occ, f),
            Objective::Buchi(f) => meets(inf, f),
            Objective::CoBuchi(f) => !meets(inf, f),
            Objective::Parity(colors) => inf.ones().map(|v| colors[v]).max().is_some_and(|c| c % 2 == 0),
            Objective::ExplicitMuller(family) => family.iter().any(|s| s == inf),
            Objective::Muller { colors, family } => {
                let seen: BTreeSet<u32> = inf.ones().map(|v| colors[v]).collect();
                family.contains(&seen)
            }
            Objective::Rabin(pairs) => pairs.iter().any(|p| meets(inf, &p.g) && !meets(inf, &p.r)),
            Objective::Streett(pairs) => pairs.iter().all(|p| !meets(inf, &p.g) || meets(inf, &p.r)),
        }
    }
}

/// Per-player objectives, all of one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveSet {
    kind: ObjectiveKind,
    vertex_count: usize,
    objectives: Vec<Objective>,
}

impl ObjectiveSet {
    pub fn new(game: &GameGraph, objectives: Vec<Objective>) -> Result<Self> {
        let n = game.vertex_count();
        if objectives.len() != game.player_count() {
            return Err(Error::InvalidObjectives(format!(
                "{} objectives for {} players",
                objectives.len(),
                game.player_count()
            )));
        }
        let kind = objectives[0].kind();
        for (i, obj) in objectives.iter().enumerate() {
            let bad = |msg: String| Err(Error::InvalidObjectives(format!("player {}: {msg}", i + 1)));
            if obj.kind() != kind {
                return bad(format!("kind {} differs from {}", obj.kind(), kind));
            }
            let check_set = |s: &VertexSet| s.len() == n;
            let ok = match obj {
                Objective::Reachability(f)
                | Objective::Safety(f)
                | Objective::Buchi(f)
                | Objective::CoBuchi(f) => check_set(f),
                Objective::Parity(colors) => {
                    if colors.len() != n || colors.contains(&0) {
                        return bad("coloring must be total with colors >= 1".into());
                    }
                    true
                }
                Objective::ExplicitMuller(family) => family.iter().all(check_set),
                Objective::Muller { colors, family } => {
                    if colors.len() != n || colors.contains(&0) {
                        return bad("coloring must be total with colors >= 1".into());
                    }
                    let max = colors.iter().copied().max().unwrap_or(0);
                    if family.iter().flatten().any(|&c| c == 0 || c > max) {
                        return bad("family references a color outside the coloring range".into());
                    }
                    true
                }
                Objective::Rabin(pairs) | Objective::Streett(pairs) => {
                    pairs.iter().all(|p| check_set(&p.g) && check_set(&p.r))
                }
            };
            if !ok {
                return bad("vertex set has the wrong universe size".into());
            }
        }
        Ok(Self {
            kind,
            vertex_count: n,
            objectives,
        })
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn player_count(&self) -> usize {
        self.objectives.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn get(&self, player: Player) -> &Objective {
        &self.objectives[player]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Objective> {
        self.objectives.iter()
    }

    pub fn require_prefix_independent(&self) -> Result<()> {
        if self.kind.is_prefix_independent() {
            Ok(())
        } else {
            Err(Error::ObjectiveNotPrefixIndependent(self.kind.name()))
        }
    }

    /// Payoff of any play with the given Occ and Inf sets.
    pub fn payoff_of_sets(&self, occ: &VertexSet, inf: &VertexSet) -> Payoff {
        let mut p = Payoff::zero(self.objectives.len());
        for (i, obj) in self.objectives.iter().enumerate() {
            p.set(i, obj.satisfied(occ, inf));
        }
        p
    }

    /// Payoff of a play whose Inf set is `inf`. Only meaningful for
    /// prefix-independent kinds, where Occ is irrelevant.
    pub fn payoff_of_inf(&self, inf: &VertexSet) -> Payoff {
        self.payoff_of_sets(inf, inf)
    }
}

pub fn occ(lasso: &Lasso, game: &GameGraph) -> VertexSet {
    lasso.occ(game.vertex_count())
}

pub fn inf(lasso: &Lasso, game: &GameGraph) -> VertexSet {
    lasso.inf(game.vertex_count())
}

/// Gain of `player` on the play described by `lasso`.
pub fn gain(lasso: &Lasso, objectives: &ObjectiveSet, player: Player) -> bool {
    let n = objectives.vertex_count();
    objectives.get(player).satisfied(&lasso.occ(n), &lasso.inf(n))
}

pub fn payoff_of(lasso: &Lasso, objectives: &ObjectiveSet) -> Payoff {
    let n = objectives.vertex_count();
    objectives.payoff_of_sets(&lasso.occ(n), &lasso.inf(n))
}
