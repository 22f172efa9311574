//! Command-line front end: define games, play profiles, search equilibria,
//! and emit figure-ready sweep data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qnuel::analysis::grid::{emit_grid, Axis, GridFormat, GridValues, SweepGrid};
use qnuel::analysis::phases::{maximin_phases, phase_landscape, repeated_duel_curve};
use qnuel::analysis::regions::{
    one_shot_region_map_mc, strategy_region_map, McMapOptions, Regime, Scenario,
};
use qnuel::analysis::{find_equilibria, StrategySpace};
use qnuel::classical::{
    duel_payoff, truel_survival, ClassicalDuelParams, TruelStrategy,
};
use qnuel::config::{approximate_fraction, load_game_config, load_profile, parse_action, parse_number};
use qnuel::engine::{expected_payoffs, play, Action, GameConfig, Payoffs, StrategyProfile};
use qnuel::operators::{Marksmanship, PhaseParams};

#[derive(Parser)]
#[command(
    name = "qnuel",
    version,
    about = "Quantum duel / truel / n-uel simulator and analysis toolkit"
)]
struct Cli {
    /// Worker threads for sweeps (falls back to QNUEL_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a duel profile, or sweep its phase landscape.
    Duel(DuelArgs),
    /// Play a three-player game (config/profile files or inline flags).
    Truel(TruelArgs),
    /// Play an n-player game from config/profile files.
    Nuel(NuelArgs),
    /// Enumerate pure-strategy Nash equilibria of a game.
    Equilibria(EquilibriaArgs),
    /// Alice's payoff over the (alpha1, alpha2) grid of a duel.
    PhaseSweep(PhaseSweepArgs),
    /// Best-strategy region map over the (a, b) marksmanship plane.
    RegionMap(RegionMapArgs),
    /// One-shot region maps across decoherence probabilities.
    DecoherenceSweep(DecoherenceArgs),
    /// Classical closed-form baselines.
    Classical(ClassicalArgs),
}

#[derive(Args)]
struct MarksArgs {
    /// Alice's miss probability a (decimal or rational like 2/3).
    #[arg(long)]
    a: Option<String>,
    /// Bob's miss probability b.
    #[arg(long)]
    b: Option<String>,
    /// Alice's hit probability (alternative to --a).
    #[arg(long)]
    hit_a: Option<String>,
    /// Bob's hit probability (alternative to --b).
    #[arg(long)]
    hit_b: Option<String>,
    /// Alice's rotation angle theta (alternative to --a).
    #[arg(long)]
    theta_a: Option<String>,
    /// Bob's rotation angle theta (alternative to --b).
    #[arg(long)]
    theta_b: Option<String>,
}

struct ParsedInputs {
    rational: bool,
}

impl ParsedInputs {
    fn new() -> Self {
        Self { rational: true }
    }

    fn number(&mut self, text: &str) -> qnuel::Result<f64> {
        self.rational &= text.contains('/') || text.trim().parse::<i64>().is_ok();
        parse_number(text)
    }

    /// Exactly one of (miss, hit, theta) per player.
    fn marksmanship(
        &mut self,
        miss: &Option<String>,
        hit: &Option<String>,
        theta: &Option<String>,
        who: &str,
    ) -> qnuel::Result<Marksmanship> {
        match (miss, hit, theta) {
            (Some(m), None, None) => Marksmanship::from_miss_prob(self.number(m)?),
            (None, Some(h), None) => Marksmanship::from_hit_prob(self.number(h)?),
            (None, None, Some(t)) => {
                self.rational = false;
                Marksmanship::from_theta(parse_number(t)?)
            }
            _ => Err(qnuel::Error::ConfigError(format!(
                "give exactly one of the miss/hit/theta forms for {who}"
            ))),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result grid to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File format for --out.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for GridFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => GridFormat::Csv,
            FormatArg::Json => GridFormat::Json,
        }
    }
}

#[derive(Args)]
struct DuelArgs {
    #[command(flatten)]
    marks: MarksArgs,
    /// Number of rounds.
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    /// Alice's phase alpha1.
    #[arg(long, default_value = "0")]
    alpha1: String,
    /// Bob's phase alpha2.
    #[arg(long, default_value = "0")]
    alpha2: String,
    /// Alice's phase beta1.
    #[arg(long, default_value = "0")]
    beta1: String,
    /// Bob's phase beta2.
    #[arg(long, default_value = "0")]
    beta2: String,
    /// Alice's actions, comma-separated (fire|air), one per round.
    #[arg(long, default_value = "fire")]
    strategy_alice: String,
    /// Bob's actions, comma-separated (fire|air), one per round.
    #[arg(long, default_value = "fire")]
    strategy_bob: String,
    /// Sweep Alice's payoff over the (alpha1, alpha2) grid instead.
    #[arg(long)]
    phase_sweep: bool,
    /// Phase grid points per axis for --phase-sweep.
    #[arg(long, default_value_t = 73)]
    grid: usize,
    /// Also report the grid maximin phases.
    #[arg(long)]
    maximin: bool,
    /// Print the payoff for every round count up to --rounds.
    #[arg(long)]
    curve: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TruelArgs {
    /// Game definition file (TOML).
    #[arg(long, conflicts_with_all = ["a", "b", "c"])]
    config: Option<PathBuf>,
    /// Strategy profile file (TOML).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Alice's miss probability (inline form).
    #[arg(long)]
    a: Option<String>,
    /// Bob's miss probability.
    #[arg(long)]
    b: Option<String>,
    /// Charles's miss probability.
    #[arg(long)]
    c: Option<String>,
    /// Rounds (inline form).
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    /// Alice's actions: comma list of air|A|B|C (or indices).
    #[arg(long)]
    strategy_alice: Option<String>,
    /// Bob's actions.
    #[arg(long)]
    strategy_bob: Option<String>,
    /// Charles's actions.
    #[arg(long)]
    strategy_charles: Option<String>,
}

#[derive(Args)]
struct NuelArgs {
    /// Game definition file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Strategy profile file (TOML).
    #[arg(long)]
    profile: PathBuf,
}

#[derive(Args)]
struct EquilibriaArgs {
    /// Game definition file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Pin an action: PLAYER:ROUND:ACTION (e.g. 1:1:C). Repeatable.
    #[arg(long = "pin")]
    pins: Vec<String>,
    /// Show at most this many equilibria.
    #[arg(long, default_value_t = 20)]
    limit: usize,
}

#[derive(Args)]
struct PhaseSweepArgs {
    #[command(flatten)]
    marks: MarksArgs,
    /// Number of rounds of mutual fire.
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    /// Grid points per phase axis.
    #[arg(long, default_value_t = 73)]
    grid: usize,
    /// Also report the grid maximin phases.
    #[arg(long)]
    maximin: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    OneShot,
    TwoShotAb,
    TwoShotBa,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Quantum,
    Classical,
    Decoherent,
}

#[derive(Args)]
struct RegionMapArgs {
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_enum)]
    regime: RegimeArg,
    /// Decoherence probability (for --regime decoherent).
    #[arg(long, default_value = "0.5")]
    p: String,
    /// Grid points per marksmanship axis.
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Sample cells with Monte Carlo trajectories instead of exact values
    /// (one-shot decoherent maps only).
    #[arg(long)]
    mc: bool,
    /// Base trajectories per cell for --mc.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Master seed for --mc.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DecoherenceArgs {
    /// Comma-separated decoherence probabilities.
    #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
    p_list: String,
    /// Grid points per marksmanship axis.
    #[arg(long, default_value_t = 41)]
    grid: usize,
    /// Trajectories per cell and strategy (sampled maps).
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Master seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Evaluate cells exactly instead of sampling trajectories.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Duel mode.
    #[arg(long, conflicts_with = "truel")]
    duel: bool,
    /// Truel mode.
    #[arg(long)]
    truel: bool,
    /// Alice's miss probability.
    #[arg(long)]
    a: String,
    /// Bob's miss probability.
    #[arg(long)]
    b: String,
    /// Charles's miss probability (truel).
    #[arg(long)]
    c: Option<String>,
    /// Bullets per player (duel); unlimited when omitted.
    #[arg(long)]
    bullets: Option<u64>,
    /// Alice's opening strategy (truel).
    #[arg(long, value_enum, default_value_t = StrategyArg::Air)]
    strategy: StrategyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Air,
    TargetB,
    TargetC,
}

/// Decimal with 9 significant digits; scientific notation outside a sane
/// magnitude window.
fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..=12).contains(&exp) {
        return format!("{v:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// "0.320987654 = 26/81" when the value is (numerically) an exact small
/// fraction. The tight tolerance rejects the incidental convergents that
/// irrational payoffs always have.
fn fmt_payoff(v: f64, rational_inputs: bool) -> String {
    let dec = sig9(v);
    if rational_inputs {
        if let Some((p, q)) = approximate_fraction(v, 10_000, 1e-11) {
            if q > 1 {
                return format!("{dec} = {p}/{q}");
            }
        }
    }
    dec
}

fn print_payoffs(payoffs: &Payoffs, rational: bool) {
    println!("expected payoffs:");
    for (i, v) in payoffs.as_slice().iter().enumerate() {
        let name = player_name(i + 1);
        println!("  {name:<8} {}", fmt_payoff(*v, rational));
    }
}

fn player_name(p: usize) -> String {
    const NAMES: [&str; 4] = ["Alice", "Bob", "Charles", "Daisy"];
    NAMES
        .get(p - 1)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("player{p}"))
}

fn parse_duel_actions(text: &str, rounds: usize, player: usize) -> qnuel::Result<Vec<Action>> {
    let toks: Vec<&str> = text.split(',').map(str::trim).collect();
    let opponent = 3 - player;
    let mut actions: Vec<Action> = toks
        .iter()
        .map(|t| {
            if t.eq_ignore_ascii_case("fire") {
                Ok(Action::FireAt(opponent))
            } else {
                parse_action(t, 2)
            }
        })
        .collect::<qnuel::Result<_>>()?;
    // A single token repeats for every round.
    if actions.len() == 1 && rounds > 1 {
        actions = vec![actions[0]; rounds];
    }
    if actions.len() != rounds {
        return Err(qnuel::Error::ProfileError(format!(
            "{} actions for {rounds} rounds",
            actions.len()
        )));
    }
    Ok(actions)
}

fn run_duel(args: &DuelArgs) -> qnuel::Result<()> {
    let mut inputs = ParsedInputs::new();
    let ma = inputs.marksmanship(&args.marks.a, &args.marks.hit_a, &args.marks.theta_a, "Alice")?;
    let mb = inputs.marksmanship(&args.marks.b, &args.marks.hit_b, &args.marks.theta_b, "Bob")?;
    let phases = vec![
        PhaseParams::new(parse_number(&args.alpha1)?, parse_number(&args.beta1)?),
        PhaseParams::new(parse_number(&args.alpha2)?, parse_number(&args.beta2)?),
    ];
    let cfg = GameConfig::new(vec![ma, mb], args.rounds)?.with_phases(phases)?;

    if args.phase_sweep {
        let prof = StrategyProfile::new(vec![
            parse_duel_actions(&args.strategy_alice, args.rounds, 1)?,
            parse_duel_actions(&args.strategy_bob, args.rounds, 2)?,
        ]);
        let grid = phase_landscape(&cfg, &prof, args.grid)?;
        report_grid(&grid, &args.output, "phase landscape (alice_payoff)")?;
        if args.maximin {
            print_maximin(&cfg, &prof, args.grid)?;
        }
        return Ok(());
    }
    if args.curve {
        let curve = repeated_duel_curve(&cfg, args.rounds, args.grid.min(25))?;
        println!("rounds  payoff       min          max");
        for row in &curve {
            println!(
                "{:>6}  {}  {}  {}",
                row.rounds,
                sig9(row.payoff),
                sig9(row.min_payoff),
                sig9(row.max_payoff)
            );
        }
        return Ok(());
    }
    let prof = StrategyProfile::new(vec![
        parse_duel_actions(&args.strategy_alice, args.rounds, 1)?,
        parse_duel_actions(&args.strategy_bob, args.rounds, 2)?,
    ]);
    let state = play(&cfg, &prof)?;
    print_payoffs(&expected_payoffs(&state, &cfg), inputs.rational);
    if args.maximin {
        print_maximin(&cfg, &prof, args.grid)?;
    }
    Ok(())
}

fn print_maximin(
    cfg: &GameConfig,
    prof: &StrategyProfile,
    grid: usize,
) -> qnuel::Result<()> {
    let report = maximin_phases(cfg, prof, grid)?;
    let fmt_list = |v: &[f64]| {
        v.iter()
            .map(|a| format!("{:.4}", a / std::f64::consts::PI))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("maximin over the phase grid:");
    println!(
        "  Alice: security {} at alpha1/pi in [{}]",
        sig9(report.alice_security),
        fmt_list(&report.alice_best_alphas)
    );
    println!(
        "  Bob:   security {} at alpha2/pi in [{}]",
        sig9(report.bob_security),
        fmt_list(&report.bob_best_alphas)
    );
    println!(
        "  payoff at the joint maximin point: {} (balanced at 1e-9: {})",
        sig9(report.alice_payoff_at_joint),
        report.is_balanced(1e-9)
    );
    Ok(())
}

fn run_truel(args: &TruelArgs) -> qnuel::Result<()> {
    let (cfg, rational, profile) = if let Some(path) = &args.config {
        let loaded = load_game_config(path)?;
        let profile_path = args.profile.as_ref().ok_or_else(|| {
            qnuel::Error::ConfigError("--profile is required with --config".into())
        })?;
        let prof = load_profile(profile_path, &loaded.cfg)?;
        (loaded.cfg, loaded.rational_inputs, prof)
    } else {
        let mut inputs = ParsedInputs::new();
        let (a, b, c) = match (&args.a, &args.b, &args.c) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(qnuel::Error::ConfigError(
                    "give --config/--profile or all of --a --b --c".into(),
                ))
            }
        };
        let miss = [inputs.number(a)?, inputs.number(b)?, inputs.number(c)?];
        let cfg = GameConfig::from_miss_probs(&miss, args.rounds)?;
        let rows = [
            (&args.strategy_alice, "Alice"),
            (&args.strategy_bob, "Bob"),
            (&args.strategy_charles, "Charles"),
        ]
        .map(|(s, who)| {
            s.as_ref().ok_or_else(|| {
                qnuel::Error::ProfileError(format!("missing --strategy-{}", who.to_lowercase()))
            })
        });
        let mut actions = Vec::new();
        for row in rows {
            let row = row?;
            actions.push(
                row.split(',')
                    .map(|t| parse_action(t, 3))
                    .collect::<qnuel::Result<Vec<_>>>()?,
            );
        }
        let prof = StrategyProfile::new(actions);
        (cfg, inputs.rational, prof)
    };
    let state = play(&cfg, &profile)?;
    print_payoffs(&expected_payoffs(&state, &cfg), rational);
    Ok(())
}

fn run_nuel(args: &NuelArgs) -> qnuel::Result<()> {
    let loaded = load_game_config(&args.config)?;
    let prof = load_profile(&args.profile, &loaded.cfg)?;
    let state = play(&loaded.cfg, &prof)?;
    print_payoffs(
        &expected_payoffs(&state, &loaded.cfg),
        loaded.rational_inputs,
    );
    Ok(())
}

fn run_equilibria(args: &EquilibriaArgs) -> qnuel::Result<()> {
    let loaded = load_game_config(&args.config)?;
    let cfg = loaded.cfg;
    let mut space = StrategySpace::full(&cfg);
    for pin in &args.pins {
        let parts: Vec<&str> = pin.split(':').collect();
        if parts.len() != 3 {
            return Err(qnuel::Error::ConfigError(format!(
                "--pin wants PLAYER:ROUND:ACTION, got {pin:?}"
            )));
        }
        let player: usize = parts[0]
            .parse()
            .map_err(|_| qnuel::Error::ConfigError(format!("bad player in {pin:?}")))?;
        let round: usize = parts[1]
            .parse()
            .map_err(|_| qnuel::Error::ConfigError(format!("bad round in {pin:?}")))?;
        let action = parse_action(parts[2], cfg.n_players())?;
        space = space.pin(player, round, action);
    }
    let report = find_equilibria(&cfg, &space)?;
    println!(
        "{} pure equilibria among {} profiles (epsilon {:.0e})",
        report.equilibria.len(),
        report.profiles_checked,
        report.epsilon
    );
    for eq in report.equilibria.iter().take(args.limit) {
        let rows: Vec<String> = (1..=cfg.n_players())
            .map(|p| {
                let acts: Vec<String> = eq
                    .profile
                    .player_actions(p)
                    .iter()
                    .map(|a| match a {
                        Action::FireInAir => "air".to_string(),
                        Action::FireAt(t) => player_name(*t)[..1].to_string(),
                    })
                    .collect();
                format!("{}: [{}]", &player_name(p)[..1], acts.join(","))
            })
            .collect();
        let pays: Vec<String> = eq
            .payoffs
            .as_slice()
            .iter()
            .map(|v| fmt_payoff(*v, loaded.rational_inputs))
            .collect();
        println!("  {}  ->  ({})", rows.join("  "), pays.join(", "));
    }
    if report.equilibria.len() > args.limit {
        println!("  ... and {} more", report.equilibria.len() - args.limit);
    }
    Ok(())
}

fn run_phase_sweep(args: &PhaseSweepArgs) -> qnuel::Result<()> {
    let mut inputs = ParsedInputs::new();
    let ma = inputs.marksmanship(&args.marks.a, &args.marks.hit_a, &args.marks.theta_a, "Alice")?;
    let mb = inputs.marksmanship(&args.marks.b, &args.marks.hit_b, &args.marks.theta_b, "Bob")?;
    let cfg = GameConfig::new(vec![ma, mb], args.rounds)?;
    let prof = StrategyProfile::new(vec![
        vec![Action::FireAt(2); args.rounds],
        vec![Action::FireAt(1); args.rounds],
    ]);
    let grid = phase_landscape(&cfg, &prof, args.grid)?;
    report_grid(&grid, &args.output, "phase landscape (alice_payoff)")?;
    if args.maximin {
        print_maximin(&cfg, &prof, args.grid)?;
    }
    Ok(())
}

fn run_region_map(args: &RegionMapArgs) -> qnuel::Result<()> {
    let scenario = match args.scenario {
        ScenarioArg::OneShot => Scenario::OneShot,
        ScenarioArg::TwoShotAb => Scenario::TwoShotAGreaterB,
        ScenarioArg::TwoShotBa => Scenario::TwoShotBGreaterA,
    };
    let regime = match args.regime {
        RegimeArg::Quantum => Regime::Quantum,
        RegimeArg::Classical => Regime::Classical,
        RegimeArg::Decoherent => Regime::Decoherent(parse_number(&args.p)?),
    };
    let grid = if args.mc {
        let p = match regime {
            Regime::Decoherent(p) => p,
            Regime::Quantum => 0.0,
            Regime::Classical => 1.0,
        };
        if scenario != Scenario::OneShot {
            return Err(qnuel::Error::UnsupportedConfig(
                "--mc supports the one-shot scenario".into(),
            ));
        }
        let opts = McMapOptions {
            base_trials: args.trials,
            seed: args.seed,
            ..McMapOptions::default()
        };
        one_shot_region_map_mc(p, args.grid, &opts)?
    } else {
        strategy_region_map(scenario, regime, args.grid)?
    };
    report_grid(&grid, &args.output, "region map (best strategy per cell)")
}

fn run_decoherence_sweep(args: &DecoherenceArgs) -> qnuel::Result<()> {
    let ps: Vec<f64> = args
        .p_list
        .split(',')
        .map(parse_number)
        .collect::<qnuel::Result<_>>()?;
    let mut labels: Vec<String> = Vec::new();
    let mut template: Option<SweepGrid> = None;
    for &p in &ps {
        let map = if args.exact {
            strategy_region_map(Scenario::OneShot, Regime::Decoherent(p), args.grid)?
        } else {
            let opts = McMapOptions {
                base_trials: args.trials,
                seed: args.seed,
                ..McMapOptions::default()
            };
            one_shot_region_map_mc(p, args.grid, &opts)?
        };
        if let GridValues::Labels(l) = &map.values {
            labels.extend(l.iter().cloned());
        }
        template = Some(map);
    }
    let template = template.expect("at least one p");
    let grid = SweepGrid::new(
        vec![
            Axis::new("p", ps),
            template.axes[0].clone(),
            template.axes[1].clone(),
        ],
        "alice_best",
        GridValues::Labels(labels),
    )?;
    report_grid(&grid, &args.output, "decoherence sweep (best strategy per cell)")
}

fn run_classical(args: &ClassicalArgs) -> qnuel::Result<()> {
    let mut inputs = ParsedInputs::new();
    let a = inputs.number(&args.a)?;
    let b = inputs.number(&args.b)?;
    if args.truel {
        let c = inputs.number(args.c.as_deref().ok_or_else(|| {
            qnuel::Error::ConfigError("--truel needs --c".into())
        })?)?;
        let strategy = match args.strategy {
            StrategyArg::Air => TruelStrategy::Air,
            StrategyArg::TargetB => TruelStrategy::TargetB,
            StrategyArg::TargetC => TruelStrategy::TargetC,
        };
        let s = truel_survival(a, b, c, strategy)?;
        println!("sole-survival probabilities:");
        println!("  Alice    {}", fmt_payoff(s.alice, inputs.rational));
        println!("  Bob      {}", fmt_payoff(s.bob, inputs.rational));
        println!("  Charles  {}", fmt_payoff(s.charles, inputs.rational));
    } else {
        let value = duel_payoff(&ClassicalDuelParams {
            miss_a: a,
            miss_b: b,
            bullets: args.bullets,
        })?;
        println!("Alice    {}", fmt_payoff(value, inputs.rational));
        println!("Bob      {}", fmt_payoff(1.0 - value, inputs.rational));
    }
    Ok(())
}

fn report_grid(grid: &SweepGrid, output: &OutputArgs, title: &str) -> qnuel::Result<()> {
    let cells = grid.values.len();
    println!("{title}: {} axes, {cells} cells", grid.axes.len());
    for axis in &grid.axes {
        let lo = axis.values.first().copied().unwrap_or(f64::NAN);
        let hi = axis.values.last().copied().unwrap_or(f64::NAN);
        println!(
            "  axis {:<8} {} points in [{:.6}, {:.6}]",
            axis.name,
            axis.values.len(),
            lo,
            hi
        );
    }
    match &grid.values {
        GridValues::Scalars(v) => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &x in v {
                lo = lo.min(x);
                hi = hi.max(x);
            }
            println!("  value {:<8} in [{}, {}]", grid.value_name, sig9(lo), sig9(hi));
        }
        GridValues::Labels(v) => {
            let mut counts = std::collections::BTreeMap::new();
            for l in v {
                *counts.entry(l.as_str()).or_insert(0usize) += 1;
            }
            for (label, count) in counts {
                println!("  label {label:<18} {count} cells");
            }
        }
    }
    if let Some(path) = &output.out {
        emit_grid(grid, output.format.into(), path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("QNUEL_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let result = match &cli.command {
        Command::Duel(args) => run_duel(args),
        Command::Truel(args) => run_truel(args),
        Command::Nuel(args) => run_nuel(args),
        Command::Equilibria(args) => run_equilibria(args),
        Command::PhaseSweep(args) => run_phase_sweep(args),
        Command::RegionMap(args) => run_region_map(args),
        Command::DecoherenceSweep(args) => run_decoherence_sweep(args),
        Command::Classical(args) => run_classical(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
