use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wspe::fixpoint::{FixpointOptions, FixpointResult, StepEvent};
use wspe::format::{
    counterexample_json, game_to_json, parse_game, parse_profile, parse_witness, profile_to_json, to_dot,
    witness_to_json, write_batch_csv, BatchRow,
};
use wspe::oracle::gen_random_game;
use wspe::reduction::{to_prefix_independent, Product};
use wspe::solve::{solve, SolveOptions};
use wspe::synth::synthesize;
use wspe::verify::verify_with_report;
use wspe::witness::is_good;
use wspe::{Error, GameGraph, ObjectiveKind, ObjectiveSet, Payoff, Result};

/// Weak subgame perfect equilibria in Boolean games on graphs.
#[derive(Parser, Debug)]
#[command(name = "wspe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a weak SPE with min <= payoff <= max exists.
    Solve(SolveArgs),
    /// Print the labeling procedure step by step.
    Fixpoint(FixpointArgs),
    /// Check that a profile is a weak SPE.
    Verify(VerifyArgs),
    /// Build a witness for a payoff, or check a witness file.
    Witness(WitnessArgs),
    /// Turn a good witness into a finite-memory profile.
    Synth(SynthArgs),
    /// Emit a random game.
    Gen(GenArgs),
    /// Render a game (and optionally a witness) in Graphviz format.
    ExportDot(DotArgs),
    /// Solve a series of random games and write one CSV row per game.
    Batch(BatchArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    game: PathBuf,
    #[arg(long)]
    min: String,
    #[arg(long)]
    max: String,
    /// Write the witness of the selected payoff here.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write a synthesized, verified profile here.
    #[arg(long)]
    synth: Option<PathBuf>,
    /// Write the product game here (Reachability and Safety inputs).
    #[arg(long)]
    product: Option<PathBuf>,
    /// Largest component size handled by Inf-set enumeration.
    #[arg(long, default_value_t = wspe::path_oracle::DEFAULT_ENUMERATION_CAP)]
    enum_cap: usize,
}

#[derive(Args, Debug)]
struct FixpointArgs {
    game: PathBuf,
    /// Print every step instead of only the final labels.
    #[arg(long)]
    trace: bool,
    /// Also write the trace as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = wspe::path_oracle::DEFAULT_ENUMERATION_CAP)]
    enum_cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    game: PathBuf,
    profile: PathBuf,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    game: PathBuf,
    /// Payoff of the witness to build.
    #[arg(long, conflicts_with = "check", required_unless_present = "check")]
    payoff: Option<String>,
    /// Witness file to check for goodness.
    #[arg(long)]
    check: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    game: PathBuf,
    witness: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    players: usize,
    #[arg(long, default_value = "buchi", value_parser = parse_kind)]
    kind: ObjectiveKind,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DotArgs {
    game: PathBuf,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: u64,
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    players: usize,
    #[arg(long, default_value = "buchi", value_parser = parse_kind)]
    kind: ObjectiveKind,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<ObjectiveKind, String> {
    ObjectiveKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = ObjectiveKind::ALL.iter().map(|k| k.name()).collect();
        format!(
            "unknown objective kind {s:?}, expected one of {}",
            names.join(", ")
        )
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn load_game(path: &Path) -> Result<(GameGraph, ObjectiveSet)> {
    parse_game(&read(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

/// The game on which witnesses and profiles live: the input itself, or its
/// product for Reachability and Safety objectives.
fn solved_game(
    game: GameGraph,
    objectives: ObjectiveSet,
) -> Result<(GameGraph, ObjectiveSet, Option<Product>)> {
    if objectives.kind().is_prefix_independent() {
        Ok((game, objectives, None))
    } else {
        let p = to_prefix_independent(&game, &objectives)?;
        Ok((p.game.clone(), p.objectives.clone(), Some(p)))
    }
}

fn labels_json(game: &GameGraph, result: &FixpointResult) -> serde_json::Value {
    let map: BTreeMap<&str, Vec<String>> = result
        .table
        .active()
        .ones()
        .map(|v| {
            (
                game.name(v),
                result.table.labels(v).iter().map(|p| p.to_string()).collect(),
            )
        })
        .collect();
    json!(map)
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let n = game.player_count();
    let mut opts = SolveOptions::new(Payoff::parse(&args.min, n)?, Payoff::parse(&args.max, n)?);
    opts.enumeration_cap = args.enum_cap;
    opts.witness = args.witness.is_some();
    opts.synthesize = args.synth.is_some();
    let solution = solve(&game, &objectives, &opts)?;
    let g = solution.solved_game(&game);
    let o = solution.solved_objectives(&objectives);

    let mut report = json!({
        "format": 1,
        "exists": solution.exists(),
        "payoff": solution.payoff.map(|p| p.to_string()),
        "fixpoint": labels_json(g, &solution.fixpoint),
        "fixpoint_step": solution.fixpoint.fixpoint_step,
    });
    if let Some(p) = &solution.product {
        report["product"] = json!({
            "vertices": p.vertex_count(),
            "bound": p.size_bound(),
            "source_kind": p.source_kind.name(),
        });
        if let Some(path) = &args.product {
            std::fs::write(path, game_to_json(&p.game, &p.objectives))?;
        }
    }
    if let (Some(path), Some(w)) = (&args.witness, &solution.witness) {
        std::fs::write(path, witness_to_json(w, g, o))?;
    }
    if let (Some(path), Some(prof)) = (&args.synth, &solution.profile) {
        std::fs::write(path, profile_to_json(prof, g))?;
        report["profile_states"] = json!(prof.max_size());
        if let Some(v) = &solution.verification {
            report["verified"] = json!(v.counterexample.is_none());
            report["configurations"] = json!(v.configurations);
        }
        if let Some(base) = &solution.base_profile {
            report["base_profile_states"] = json!(base.max_size());
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(if solution.exists() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn event_text(game: &GameGraph, event: &StepEvent) -> String {
    match event {
        StepEvent::Init => "init".to_string(),
        StepEvent::Remove {
            vertex,
            payoff,
            successor,
        } => {
            format!(
                "remove ({}, {payoff}) via {}",
                game.name(*vertex),
                game.name(*successor)
            )
        }
        StepEvent::RemoveNone => "fixpoint".to_string(),
        StepEvent::Adjust { payoff, adjusted } => {
            let names: Vec<&str> = adjusted.iter().map(|&v| game.name(v)).collect();
            format!("adjust {payoff}: {{{}}}", names.join(","))
        }
    }
}

fn event_json(game: &GameGraph, event: &StepEvent) -> serde_json::Value {
    match event {
        StepEvent::Init => json!({"kind": "init"}),
        StepEvent::Remove {
            vertex,
            payoff,
            successor,
        } => json!({
            "kind": "remove",
            "vertex": game.name(*vertex),
            "payoff": payoff.to_string(),
            "successor": game.name(*successor),
        }),
        StepEvent::RemoveNone => json!({"kind": "fixpoint"}),
        StepEvent::Adjust { payoff, adjusted } => json!({
            "kind": "adjust",
            "payoff": payoff.to_string(),
            "removed_at": adjusted.iter().map(|&v| game.name(v)).collect::<Vec<_>>(),
        }),
    }
}

fn cmd_fixpoint(args: &FixpointArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let (g, o, product) = solved_game(game, objectives)?;
    if let Some(p) = &product {
        println!(
            "# product game with {} vertices (bound {})",
            p.vertex_count(),
            p.size_bound()
        );
    }
    let mut oracle = wspe::path_oracle::PathOracle::new(&g, &o)?.with_cap(args.enum_cap);
    let options = FixpointOptions {
        snapshots: true,
        ..Default::default()
    };
    let result = wspe::fixpoint::fixpoint_with(&mut oracle, g.initial(), options)?;
    let active: Vec<usize> = result.table.active().ones().collect();
    let set_text = |labels: &wspe::fixpoint::PayoffSet| {
        let items: Vec<String> = labels.iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", items.join(","))
    };

    let header: Vec<&str> = active.iter().map(|&v| g.name(v)).collect();
    println!("k\tevent\t{}", header.join("\t"));
    let mut last_labels = Vec::new();
    for row in &result.trace {
        if let Some(l) = &row.labels {
            last_labels = l.clone();
        }
        if !args.trace && row.event != StepEvent::RemoveNone {
            continue;
        }
        let cells: Vec<String> = active.iter().map(|&v| set_text(&last_labels[v])).collect();
        println!(
            "{}\t{}\t{}",
            row.step,
            event_text(&g, &row.event),
            cells.join("\t")
        );
        for &v in &row.emptied {
            println!("#\twarning: label of {} became empty", g.name(v));
        }
    }
    println!("# fixpoint reached at step {}", result.fixpoint_step);

    if let Some(path) = &args.json {
        let rows: Vec<serde_json::Value> = result
            .trace
            .iter()
            .map(|row| {
                let mut r = json!({
                    "k": row.step,
                    "event": event_json(&g, &row.event),
                    "emptied": row.emptied.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                });
                if let Some(l) = &row.labels {
                    let map: BTreeMap<&str, Vec<String>> = active
                        .iter()
                        .map(|&v| (g.name(v), l[v].iter().map(|p| p.to_string()).collect()))
                        .collect();
                    r["labels"] = json!(map);
                }
                r
            })
            .collect();
        let doc = json!({
            "format": 1,
            "vertices": header,
            "rows": rows,
            "fixpoint_step": result.fixpoint_step,
            "final": labels_json(&g, &result),
        });
        std::fs::write(
            path,
            serde_json::to_string_pretty(&doc).expect("trace serializes"),
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let (g, o, _) = solved_game(game, objectives)?;
    let profile = parse_profile(&read(&args.profile)?, &g)?;
    let report = verify_with_report(&g, &o, g.initial(), &profile)?;
    match &report.counterexample {
        None => {
            println!(
                "{}",
                json!({"format": 1, "verified": true, "configurations": report.configurations})
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(cex) => {
            eprintln!("counterexample: {}", cex.display(&g, &profile));
            println!(
                "{}",
                json!({
                    "format": 1,
                    "verified": false,
                    "configurations": report.configurations,
                    "counterexample": counterexample_json(cex, &g, &o, &profile),
                })
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_witness(args: &WitnessArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let (g, o, _) = solved_game(game, objectives)?;
    if let Some(path) = &args.check {
        let witness = parse_witness(&read(path)?, &g, &o)?;
        let missing = witness.missing(&g);
        if let Some(k) = missing.first() {
            return Err(Error::WitnessIncomplete(k.display(&g)));
        }
        return Ok(match is_good(&witness, &g, &o)? {
            None => {
                println!("{}", json!({"format": 1, "good": true}));
                ExitCode::SUCCESS
            }
            Some(v) => {
                eprintln!("{}", v.display(&g));
                println!(
                    "{}",
                    json!({
                        "format": 1,
                        "good": false,
                        "violation": {
                            "entry": {"i": v.entry.deviator, "v": g.name(v.entry.vertex)},
                            "vertex": g.name(v.vertex),
                            "deviation": {"i": v.deviation.deviator, "v": g.name(v.deviation.vertex)},
                            "entry_gain": v.entry_gain as u8,
                            "deviation_gain": v.deviation_gain as u8,
                        }
                    })
                );
                ExitCode::from(1)
            }
        });
    }
    let payoff = Payoff::parse(args.payoff.as_deref().unwrap_or_default(), g.player_count())?;
    let mut oracle = wspe::path_oracle::PathOracle::new(&g, &o)?;
    let result = wspe::fixpoint::fixpoint_with(&mut oracle, g.initial(), FixpointOptions::default())?;
    match wspe::witness::build_witness(&mut oracle, &result.table, g.initial(), &payoff) {
        Ok(w) => {
            emit(args.out.as_deref(), &witness_to_json(&w, &g, &o))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::TargetNotAchievable(p)) => {
            eprintln!("payoff {p} is not achievable by a weak SPE");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e),
    }
}

fn cmd_synth(args: &SynthArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let (g, o, _) = solved_game(game, objectives)?;
    let witness = parse_witness(&read(&args.witness)?, &g, &o)?;
    match synthesize(&witness, &g, &o) {
        Ok(profile) => {
            emit(args.out.as_deref(), &profile_to_json(&profile, &g))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::WitnessNotGood(msg)) => {
            eprintln!("witness is not good: {msg}");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    let (g, o) = gen_random_game(args.seed, args.vertices, args.players, args.kind, args.density)?;
    emit(args.out.as_deref(), &game_to_json(&g, &o))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dot(args: &DotArgs) -> Result<ExitCode> {
    let (game, objectives) = load_game(&args.game)?;
    let dot = match &args.witness {
        Some(path) => {
            let (g, o, _) = solved_game(game, objectives)?;
            let w = parse_witness(&read(path)?, &g, &o)?;
            to_dot(&g, &o, Some(&w))
        }
        None => to_dot(&game, &objectives, None),
    };
    emit(args.out.as_deref(), &dot)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_batch(args: &BatchArgs) -> Result<ExitCode> {
    let mut rows = Vec::with_capacity(args.count as usize);
    for seed in args.seed..args.seed + args.count {
        let (g, o) = gen_random_game(seed, args.vertices, args.players, args.kind, args.density)?;
        let n = g.player_count();
        let opts = SolveOptions::new(Payoff::zero(n), Payoff::parse(&"1".repeat(n), n)?);
        let start = Instant::now();
        let s = solve(&g, &o, &opts)?;
        let millis = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
        rows.push(BatchRow {
            seed,
            vertices: args.vertices,
            players: args.players,
            kind: args.kind.name().to_string(),
            density: args.density,
            solved_vertices: s.solved_game(&g).vertex_count(),
            exists: s.exists(),
            payoff: s.payoff.map(|p| p.to_string()).unwrap_or_default(),
            fixpoint_step: s.fixpoint.fixpoint_step,
            millis,
        });
    }
    match &args.out {
        Some(path) => write_batch_csv(&rows, std::fs::File::create(path)?)?,
        None => write_batch_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Fixpoint(a) => cmd_fixpoint(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Gen(a) => cmd_gen(a),
        Command::ExportDot(a) => cmd_dot(a),
        Command::Batch(a) => cmd_batch(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
