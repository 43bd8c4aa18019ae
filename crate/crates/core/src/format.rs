//! JSON, DOT and CSV representations of games, witnesses, profiles and
//! reports. Every JSON document carries `"format": 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    payoff_of, ConditionPair, GameGraph, Lasso, Objective, ObjectiveKind, ObjectiveSet, Payoff, Vertex,
    VertexSet,
};
use crate::synth::{MooreMachine, StrategyProfile};
use crate::verify::Counterexample;
use crate::witness::{EntryKey, SymbolicWitness};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(found: u32, what: &str) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::InvalidGame(format!(
            "unsupported {what} format version {found}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub format: u32,
    pub players: usize,
    pub vertices: Vec<String>,
    /// Vertex name to one-based player.
    pub owner: BTreeMap<String, usize>,
    pub edges: Vec<(String, String)>,
    pub initial: String,
    pub objective_type: String,
    /// One-based player number (as a string) to objective data.
    pub objectives: BTreeMap<String, ObjectiveData>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveData {
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<Vec<FamilyItem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairData>>,
}

/// A vertex name in explicit Muller families, a color in Muller families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FamilyItem {
    Color(u32),
    Vertex(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PairData {
    #[serde(rename = "G")]
    pub g: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<String>,
}

fn vertex_of(game: &GameGraph, name: &str) -> Result<Vertex> {
    game.vertex(name)
        .ok_or_else(|| Error::InvalidGame(format!("unknown vertex {name:?}")))
}

fn set_of_names(game: &GameGraph, names: &[String]) -> Result<VertexSet> {
    let mut set = game.empty_set();
    for n in names {
        set.insert(vertex_of(game, n)?);
    }
    Ok(set)
}

fn names_of_set(game: &GameGraph, set: &VertexSet) -> Vec<String> {
    set.ones().map(|v| game.name(v).to_string()).collect()
}

fn coloring(game: &GameGraph, colors: &BTreeMap<String, u32>) -> Result<Vec<u32>> {
    let mut out = vec![0; game.vertex_count()];
    for (name, &c) in colors {
        out[vertex_of(game, name)?] = c;
    }
    if let Some(v) = out.iter().position(|&c| c == 0) {
        return Err(Error::InvalidObjectives(format!(
            "vertex {} has no color",
            game.name(v)
        )));
    }
    Ok(out)
}

impl GameFile {
    pub fn to_game(&self) -> Result<(GameGraph, ObjectiveSet)> {
        check_version(self.format, "game")?;
        let index: BTreeMap<&str, Vertex> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, n)| (n.as_str(), v))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGame(format!("unknown vertex {name:?}")))
        };
        let mut owner = vec![usize::MAX; self.vertices.len()];
        for (name, &player) in &self.owner {
            if player == 0 || player > self.players {
                return Err(Error::InvalidGame(format!(
                    "vertex {name:?} owned by unknown player {player}"
                )));
            }
            owner[lookup(name)?] = player - 1;
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidGame(format!(
                "vertex {:?} has no owner",
                self.vertices[v]
            )));
        }
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let game = GameGraph::new(
            self.players,
            self.vertices.clone(),
            owner,
            &edges,
            lookup(&self.initial)?,
        )?;

        let kind = ObjectiveKind::from_name(&self.objective_type).ok_or_else(|| {
            Error::InvalidObjectives(format!("unknown objective type {:?}", self.objective_type))
        })?;
        let mut objectives = Vec::with_capacity(self.players);
        for player in 1..=self.players {
            let data = self
                .objectives
                .get(&player.to_string())
                .ok_or_else(|| Error::InvalidObjectives(format!("no objective for player {player}")))?;
            objectives.push(data.to_objective(&game, kind, player)?);
        }
        if let Some(extra) = self
            .objectives
            .keys()
            .find(|k| k.parse::<usize>().map_or(true, |p| p == 0 || p > self.players))
        {
            return Err(Error::InvalidObjectives(format!(
                "objective for unknown player {extra:?}"
            )));
        }
        let objectives = ObjectiveSet::new(&game, objectives)?;
        Ok((game, objectives))
    }

    pub fn from_game(game: &GameGraph, objectives: &ObjectiveSet) -> Self {
        let objective_data = objectives
            .iter()
            .enumerate()
            .map(|(i, o)| ((i + 1).to_string(), ObjectiveData::from_objective(game, o)))
            .collect();
        GameFile {
            format: FORMAT_VERSION,
            players: game.player_count(),
            vertices: game.names().to_vec(),
            owner: game
                .vertices()
                .map(|v| (game.name(v).to_string(), game.owner(v) + 1))
                .collect(),
            edges: game
                .edges()
                .map(|(a, b)| (game.name(a).to_string(), game.name(b).to_string()))
                .collect(),
            initial: game.name(game.initial()).to_string(),
            objective_type: objectives.kind().name().to_string(),
            objectives: objective_data,
        }
    }
}

impl ObjectiveData {
    fn to_objective(&self, game: &GameGraph, kind: ObjectiveKind, player: usize) -> Result<Objective> {
        let missing = |field: &str| {
            Error::InvalidObjectives(format!("player {player}: {kind} objective needs {field:?}"))
        };
        let set = || set_of_names(game, self.f.as_ref().ok_or_else(|| missing("F"))?);
        Ok(match kind {
            ObjectiveKind::Reachability => Objective::Reachability(set()?),
            ObjectiveKind::Safety => Objective::Safety(set()?),
            ObjectiveKind::Buchi => Objective::Buchi(set()?),
            ObjectiveKind::CoBuchi => Objective::CoBuchi(set()?),
            ObjectiveKind::Parity => Objective::Parity(coloring(
                game,
                self.colors.as_ref().ok_or_else(|| missing("colors"))?,
            )?),
            ObjectiveKind::ExplicitMuller => {
                let families = self.families.as_ref().ok_or_else(|| missing("families"))?;
                let mut out = Vec::with_capacity(families.len());
                for member in families {
                    let mut s = game.empty_set();
                    for item in member {
                        match item {
                            FamilyItem::Vertex(name) => s.insert(vertex_of(game, name)?),
                            FamilyItem::Color(c) => {
                                return Err(Error::InvalidObjectives(format!(
                                    "player {player}: explicit Muller families list vertices, found {c}"
                                )))
                            }
                        }
                    }
                    out.push(s);
                }
                Objective::ExplicitMuller(out)
            }
            ObjectiveKind::Muller => {
                let colors = coloring(game, self.colors.as_ref().ok_or_else(|| missing("colors"))?)?;
                let families = self.families.as_ref().ok_or_else(|| missing("families"))?;
                let mut family = Vec::with_capacity(families.len());
                for member in families {
                    let mut s = BTreeSet::new();
                    for item in member {
                        match item {
                            FamilyItem::Color(c) => s.insert(*c),
                            FamilyItem::Vertex(name) => {
                                return Err(Error::InvalidObjectives(format!(
                                    "player {player}: Muller families list colors, found {name:?}"
                                )))
                            }
                        };
                    }
                    family.push(s);
                }
                Objective::Muller { colors, family }
            }
            ObjectiveKind::Rabin | ObjectiveKind::Streett => {
                let pairs = self
                    .pairs
                    .as_ref()
                    .ok_or_else(|| missing("pairs"))?
                    .iter()
                    .map(|p| {
                        Ok(ConditionPair {
                            g: set_of_names(game, &p.g)?,
                            r: set_of_names(game, &p.r)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if kind == ObjectiveKind::Rabin {
                    Objective::Rabin(pairs)
                } else {
                    Objective::Streett(pairs)
                }
            }
        })
    }

    fn from_objective(game: &GameGraph, objective: &Objective) -> Self {
        let colors = |c: &[u32]| {
            Some(
                game.vertices()
                    .map(|v| (game.name(v).to_string(), c[v]))
                    .collect(),
            )
        };
        let pairs = |ps: &[ConditionPair]| {
            Some(
                ps.iter()
                    .map(|p| PairData {
                        g: names_of_set(game, &p.g),
                        r: names_of_set(game, &p.r),
                    })
                    .collect(),
            )
        };
        match objective {
            Objective::Reachability(f)
            | Objective::Safety(f)
            | Objective::Buchi(f)
            | Objective::CoBuchi(f) => ObjectiveData {
                f: Some(names_of_set(game, f)),
                ..Default::default()
            },
            Objective::Parity(c) => ObjectiveData {
                colors: colors(c),
                ..Default::default()
            },
            Objective::ExplicitMuller(family) => ObjectiveData {
                families: Some(
                    family
                        .iter()
                        .map(|s| {
                            names_of_set(game, s)
                                .into_iter()
                                .map(FamilyItem::Vertex)
                                .collect()
                        })
                        .collect(),
                ),
                ..Default::default()
            },
            Objective::Muller { colors: c, family } => ObjectiveData {
                colors: colors(c),
                families: Some(
                    family
                        .iter()
                        .map(|s| s.iter().map(|&c| FamilyItem::Color(c)).collect())
                        .collect(),
                ),
                ..Default::default()
            },
            Objective::Rabin(ps) | Objective::Streett(ps) => ObjectiveData {
                pairs: pairs(ps),
                ..Default::default()
            },
        }
    }
}

pub fn parse_game(text: &str) -> Result<(GameGraph, ObjectiveSet)> {
    let file: GameFile = serde_json::from_str(text)?;
    file.to_game()
}

pub fn game_to_json(game: &GameGraph, objectives: &ObjectiveSet) -> String {
    serde_json::to_string_pretty(&GameFile::from_game(game, objectives)).expect("game serializes")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub format: u32,
    pub root: String,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    /// 0 for the root outcome, otherwise the one-based deviating player.
    pub i: usize,
    pub v: String,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoff: Option<String>,
}

impl WitnessFile {
    pub fn from_witness(witness: &SymbolicWitness, game: &GameGraph, objectives: &ObjectiveSet) -> Self {
        let names = |vs: &[Vertex]| vs.iter().map(|&v| game.name(v).to_string()).collect();
        WitnessFile {
            format: FORMAT_VERSION,
            root: game.name(witness.root).to_string(),
            entries: witness
                .lassoes
                .iter()
                .map(|(k, l)| WitnessEntry {
                    i: k.deviator,
                    v: game.name(k.vertex).to_string(),
                    prefix: names(&l.prefix),
                    cycle: names(&l.cycle),
                    payoff: Some(payoff_of(l, objectives).to_string()),
                })
                .collect(),
        }
    }

    /// Resolves names. A `payoff` field, when present, must match the lasso.
    pub fn to_witness(&self, game: &GameGraph, objectives: &ObjectiveSet) -> Result<SymbolicWitness> {
        check_version(self.format, "witness")?;
        let bad = |msg: String| Error::MalformedWitness(msg);
        let vertex = |name: &str| {
            game.vertex(name)
                .ok_or_else(|| bad(format!("unknown vertex {name:?}")))
        };
        let root = vertex(&self.root)?;
        let mut lassoes = BTreeMap::new();
        for e in &self.entries {
            let key = EntryKey {
                deviator: e.i,
                vertex: vertex(&e.v)?,
            };
            let prefix = e.prefix.iter().map(|n| vertex(n)).collect::<Result<Vec<_>>>()?;
            let cycle = e.cycle.iter().map(|n| vertex(n)).collect::<Result<Vec<_>>>()?;
            let lasso = Lasso::new(prefix, cycle);
            lasso.check(game)?;
            if let Some(p) = &e.payoff {
                let claimed = Payoff::parse(p, game.player_count())?;
                let actual = payoff_of(&lasso, objectives);
                if claimed != actual {
                    return Err(bad(format!(
                        "entry ({},{}) claims payoff {claimed} but has {actual}",
                        e.i, e.v
                    )));
                }
            }
            if lassoes.insert(key, lasso).is_some() {
                return Err(bad(format!("duplicate entry ({},{})", e.i, e.v)));
            }
        }
        Ok(SymbolicWitness { root, lassoes })
    }
}

pub fn parse_witness(text: &str, game: &GameGraph, objectives: &ObjectiveSet) -> Result<SymbolicWitness> {
    let file: WitnessFile = serde_json::from_str(text)?;
    file.to_witness(game, objectives)
}

pub fn witness_to_json(witness: &SymbolicWitness, game: &GameGraph, objectives: &ObjectiveSet) -> String {
    serde_json::to_string_pretty(&WitnessFile::from_witness(witness, game, objectives))
        .expect("witness serializes")
}

/// State name to vertex name to successor state.
pub type UpdateTable = BTreeMap<String, BTreeMap<String, String>>;
/// State name to owned vertex name to chosen successor.
pub type ActionTable = BTreeMap<String, BTreeMap<String, String>>;

/// Either the shared form (`states`, `initial`, `update`, and `actions` keyed
/// by player) or one entry per player in `machines`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update: Option<UpdateTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<BTreeMap<String, ActionTable>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machines: Option<Vec<MachineFile>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub player: usize,
    pub states: Vec<String>,
    pub initial: String,
    pub update: UpdateTable,
    pub actions: ActionTable,
}

fn update_table(game: &GameGraph, m: &MooreMachine) -> UpdateTable {
    (0..m.size())
        .map(|s| {
            let row = game
                .vertices()
                .map(|v| (game.name(v).to_string(), m.state_names[m.update[s][v]].clone()))
                .collect();
            (m.state_names[s].clone(), row)
        })
        .collect()
}

fn action_table(game: &GameGraph, m: &MooreMachine) -> ActionTable {
    (0..m.size())
        .map(|s| {
            let row = game
                .vertices()
                .filter_map(|v| m.action[s][v].map(|w| (game.name(v).to_string(), game.name(w).to_string())))
                .collect();
            (m.state_names[s].clone(), row)
        })
        .collect()
}

fn build_machine(
    game: &GameGraph,
    player: usize,
    states: &[String],
    initial: &str,
    update: &UpdateTable,
    actions: &ActionTable,
) -> Result<MooreMachine> {
    let bad = |msg: String| Error::MalformedProfile(format!("player {}: {msg}", player + 1));
    let index: BTreeMap<&str, usize> = states.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    if index.len() != states.len() {
        return Err(bad("duplicate state names".into()));
    }
    let state = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| bad(format!("unknown state {name:?}")))
    };
    let vertex = |name: &str| {
        game.vertex(name)
            .ok_or_else(|| bad(format!("unknown vertex {name:?}")))
    };
    let mut upd = vec![vec![usize::MAX; game.vertex_count()]; states.len()];
    for (s, row) in update {
        let s = state(s)?;
        for (v, t) in row {
            upd[s][vertex(v)?] = state(t)?;
        }
    }
    for (s, row) in upd.iter().enumerate() {
        if let Some(v) = row.iter().position(|&t| t == usize::MAX) {
            return Err(bad(format!(
                "no update for state {:?} at {}",
                states[s],
                game.name(v)
            )));
        }
    }
    let mut act = vec![vec![None; game.vertex_count()]; states.len()];
    for (s, row) in actions {
        let s = state(s)?;
        for (v, w) in row {
            act[s][vertex(v)?] = Some(vertex(w)?);
        }
    }
    let machine = MooreMachine {
        player,
        state_names: states.to_vec(),
        initial: state(initial)?,
        update: upd,
        action: act,
    };
    machine.check(game)?;
    Ok(machine)
}

impl ProfileFile {
    pub fn from_profile(profile: &StrategyProfile, game: &GameGraph) -> Self {
        if profile.is_shared() && !profile.machines.is_empty() {
            let m0 = &profile.machines[0];
            ProfileFile {
                format: FORMAT_VERSION,
                states: Some(m0.state_names.clone()),
                initial: Some(m0.state_names[m0.initial].clone()),
                update: Some(update_table(game, m0)),
                actions: Some(
                    profile
                        .machines
                        .iter()
                        .map(|m| ((m.player + 1).to_string(), action_table(game, m)))
                        .collect(),
                ),
                machines: None,
            }
        } else {
            ProfileFile {
                format: FORMAT_VERSION,
                states: None,
                initial: None,
                update: None,
                actions: None,
                machines: Some(
                    profile
                        .machines
                        .iter()
                        .map(|m| MachineFile {
                            player: m.player + 1,
                            states: m.state_names.clone(),
                            initial: m.state_names[m.initial].clone(),
                            update: update_table(game, m),
                            actions: action_table(game, m),
                        })
                        .collect(),
                ),
            }
        }
    }

    pub fn to_profile(&self, game: &GameGraph) -> Result<StrategyProfile> {
        if self.format != FORMAT_VERSION {
            return Err(Error::MalformedProfile(format!(
                "unsupported format version {}",
                self.format
            )));
        }
        let mut machines = Vec::with_capacity(game.player_count());
        match (
            &self.machines,
            &self.states,
            &self.initial,
            &self.update,
            &self.actions,
        ) {
            (None, Some(states), Some(initial), Some(update), Some(actions)) => {
                for key in actions.keys() {
                    if key
                        .parse::<usize>()
                        .map_or(true, |p| p == 0 || p > game.player_count())
                    {
                        return Err(Error::MalformedProfile(format!(
                            "actions for unknown player {key:?}"
                        )));
                    }
                }
                let empty = ActionTable::new();
                for player in 0..game.player_count() {
                    let table = actions.get(&(player + 1).to_string()).unwrap_or(&empty);
                    machines.push(build_machine(game, player, states, initial, update, table)?);
                }
            }
            (Some(list), None, None, None, None) => {
                for player in 0..game.player_count() {
                    let m = list.iter().find(|m| m.player == player + 1).ok_or_else(|| {
                        Error::MalformedProfile(format!("no machine for player {}", player + 1))
                    })?;
                    machines.push(build_machine(
                        game, player, &m.states, &m.initial, &m.update, &m.actions,
                    )?);
                }
                if list.len() != game.player_count() {
                    return Err(Error::MalformedProfile(format!(
                        "{} machines for {} players",
                        list.len(),
                        game.player_count()
                    )));
                }
            }
            _ => {
                return Err(Error::MalformedProfile(
                    "expected either states/initial/update/actions or machines".into(),
                ))
            }
        }
        Ok(StrategyProfile { machines })
    }
}

pub fn parse_profile(text: &str, game: &GameGraph) -> Result<StrategyProfile> {
    let file: ProfileFile = serde_json::from_str(text)?;
    file.to_profile(game)
}

pub fn profile_to_json(profile: &StrategyProfile, game: &GameGraph) -> String {
    serde_json::to_string_pretty(&ProfileFile::from_profile(profile, game)).expect("profile serializes")
}

fn lasso_names(game: &GameGraph, l: &Lasso) -> serde_json::Value {
    serde_json::json!({
        "prefix": l.prefix.iter().map(|&v| game.name(v)).collect::<Vec<_>>(),
        "cycle": l.cycle.iter().map(|&v| game.name(v)).collect::<Vec<_>>(),
    })
}

pub fn counterexample_json(
    cex: &Counterexample,
    game: &GameGraph,
    objectives: &ObjectiveSet,
    profile: &StrategyProfile,
) -> serde_json::Value {
    let states: Vec<&str> = cex
        .configuration
        .states
        .iter()
        .zip(&profile.machines)
        .map(|(&s, m)| m.state_names[s].as_str())
        .collect();
    serde_json::json!({
        "vertex": game.name(cex.configuration.vertex),
        "memory": states,
        "player": cex.player + 1,
        "prescribed": game.name(cex.prescribed),
        "deviation": game.name(cex.deviation),
        "gain": cex.gain as u8,
        "deviation_gain": cex.deviation_gain as u8,
        "outcome": lasso_names(game, &cex.outcome),
        "outcome_payoff": payoff_of(&cex.outcome, objectives).to_string(),
        "deviation_outcome": lasso_names(game, &cex.deviation_outcome),
        "deviation_payoff": payoff_of(&cex.deviation_outcome, objectives).to_string(),
    })
}

const SHAPES: [&str; 8] = [
    "circle", "box", "diamond", "hexagon", "triangle", "octagon", "pentagon", "house",
];

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Node shape follows the owner (player 1 round, player 2
/// square, …); the edges of the witness lassoes are drawn bold, and those of
/// the root lasso also in red.
pub fn to_dot(game: &GameGraph, objectives: &ObjectiveSet, witness: Option<&SymbolicWitness>) -> String {
    let mut bold: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut root_edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    if let Some(w) = witness {
        for (key, l) in &w.lassoes {
            let seq: Vec<Vertex> = l.vertices().collect();
            let mut edges: Vec<(Vertex, Vertex)> = seq.windows(2).map(|p| (p[0], p[1])).collect();
            edges.push((*seq.last().unwrap(), l.cycle[0]));
            if key.deviator == 0 {
                root_edges.extend(edges.iter().copied());
            }
            bold.extend(edges);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph game {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  __start [shape=point];");
    for v in game.vertices() {
        let shape = SHAPES[game.owner(v) % SHAPES.len()];
        let mut marks = Vec::new();
        for (i, o) in objectives.iter().enumerate() {
            let member = match o {
                Objective::Reachability(f)
                | Objective::Safety(f)
                | Objective::Buchi(f)
                | Objective::CoBuchi(f) => f.contains(v).then(|| format!("F{}", i + 1)),
                Objective::Parity(c) => Some(format!("c{}={}", i + 1, c[v])),
                _ => None,
            };
            marks.extend(member);
        }
        let label = if marks.is_empty() {
            game.name(v).to_string()
        } else {
            format!("{}\\n{}", game.name(v), marks.join(" "))
        };
        let _ = writeln!(
            out,
            "  \"{}\" [shape={shape}, label=\"{}\"];",
            dot_escape(game.name(v)),
            dot_escape(&label).replace("\\\\n", "\\n")
        );
    }
    let _ = writeln!(out, "  __start -> \"{}\";", dot_escape(game.name(game.initial())));
    for (a, b) in game.edges() {
        let style = if root_edges.contains(&(a, b)) {
            " [penwidth=2.5, color=red]"
        } else if bold.contains(&(a, b)) {
            " [penwidth=2.5]"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\"{style};",
            dot_escape(game.name(a)),
            dot_escape(game.name(b))
        );
    }
    out.push_str("}\n");
    out
}

/// One line of a batch CSV report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BatchRow {
    pub seed: u64,
    pub vertices: usize,
    pub players: usize,
    pub kind: String,
    pub density: f64,
    pub solved_vertices: usize,
    pub exists: bool,
    pub payoff: String,
    pub fixpoint_step: usize,
    pub millis: f64,
}

pub fn write_batch_csv<W: std::io::Write>(rows: &[BatchRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}
