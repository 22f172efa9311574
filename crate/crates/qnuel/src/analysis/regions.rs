//! Strategy-region maps over the marksmanship plane (a, b).
//!
//! Each scenario fixes the opponents' reasoning (who shoots at whom) and
//! rasters the deciding player's best choice. The one-shot truel with a
//! perfect Charles supports three regimes: fully quantum, fully classical,
//! and partially decoherent, where after every move the whole system is
//! measured with probability p and later movers react to the public record.
//! Charles breaks his indifference with a fair coin chosen before play.
//!
//! Cells are independent pure evaluations; maps assemble them in row-major
//! order, so parallel evaluation stays deterministic.

use rand::RngCore;
use rayon::prelude::*;

use super::grid::{Axis, GridValues, SweepGrid};
use crate::classical::{game_tree_expectation, ClassicalRule, Info};
use crate::engine::{
    expected_payoffs, expected_payoffs_density, play, play_mixture, Action, GameConfig,
    StrategyProfile,
};
use crate::qstate::StateVector;
use crate::trajectory::{run_trajectory_with_rng, trial_rng, Policy, RecordEntry};
use crate::{Error, Result};

pub const LABEL_AIR: &str = "air";
pub const LABEL_CHARLES: &str = "charles";
/// Cells outside a scenario's parameter order (e.g. a ≤ b in the a>b map).
pub const LABEL_OUTSIDE: &str = "-";

/// Argmax labelling tolerance: ties within this go to the earlier label in
/// tie-break order (air first, then ascending target).
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// One round, c = 0: Bob shoots Charles, Charles coin-flips when
    /// indifferent, Alice picks air vs Charles.
    OneShot,
    /// Two rounds, a > b > c = 0: Bob and Charles target each other, then
    /// both target Alice; Alice picks her two actions.
    TwoShotAGreaterB,
    /// Two rounds, b > a > c = 0: Charles opens at Alice; Alice picks round
    /// one, Bob picks round two.
    TwoShotBGreaterA,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Quantum,
    Classical,
    Decoherent(f64),
}

// ---------------------------------------------------------------------------
// One-shot payoffs in the three regimes
// ---------------------------------------------------------------------------

fn one_shot_cfg(a: f64, b: f64) -> Result<GameConfig> {
    GameConfig::from_miss_probs(&[a, b, 0.0], 1)
}

/// Alice's expected payoff in the quantum one-shot truel: her action against
/// the fair-coin mixture over Charles's committed target.
pub fn one_shot_alice_payoff_quantum(a: f64, b: f64, targets_charles: bool) -> Result<f64> {
    let cfg = one_shot_cfg(a, b)?;
    let alice = if targets_charles {
        Action::FireAt(3)
    } else {
        Action::FireInAir
    };
    let prof_at = |charles_target: usize| {
        StrategyProfile::new(vec![
            vec![alice],
            vec![Action::FireAt(3)],
            vec![Action::FireAt(charles_target)],
        ])
    };
    let mixed = play_mixture(&cfg, &[(0.5, prof_at(1)), (0.5, prof_at(2))])?;
    Ok(expected_payoffs_density(&mixed, &cfg).player(1))
}

/// The classical scenario rules: Bob prefers Charles then Alice; Charles
/// coin-flips between Alice and Bob while everyone stands.
fn one_shot_classical_rules(targets_charles: bool) -> Vec<ClassicalRule> {
    let alice = ClassicalRule::Committed(vec![if targets_charles {
        Action::FireAt(3)
    } else {
        Action::FireInAir
    }]);
    vec![
        alice,
        ClassicalRule::PreferTarget {
            priority: vec![3, 1],
        },
        ClassicalRule::CoinWhenAllAlive {
            coin_over: vec![1, 2],
            priority: vec![1, 2],
        },
    ]
}

pub fn one_shot_alice_payoff_classical(a: f64, b: f64, targets_charles: bool) -> Result<f64> {
    let cfg = one_shot_cfg(a, b)?;
    let rules = one_shot_classical_rules(targets_charles);
    Ok(game_tree_expectation(&cfg, &rules, Info::Full)?.player(1))
}

/// Exact decoherent payoff by branching over measure/skip after each move
/// and over measurement outcomes, with the scenario's record-driven targets.
pub fn one_shot_alice_payoff_decoherent(
    a: f64,
    b: f64,
    p: f64,
    targets_charles: bool,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let cfg = one_shot_cfg(a, b)?;
    // Charles commits his coin before play; both branches weigh 1/2.
    let mut total = 0.0;
    for charles_target in [1usize, 2] {
        total += 0.5
            * decoherent_branch(
                &cfg,
                targets_charles,
                charles_target,
                p,
                StateVector::all_alive(3)?,
                None,
                0,
            )?;
    }
    Ok(total)
}

fn decoherent_branch(
    cfg: &GameConfig,
    targets_charles: bool,
    charles_target: usize,
    p: f64,
    state: StateVector,
    latest: Option<usize>,
    mover_pos: usize,
) -> Result<f64> {
    if mover_pos == 3 {
        return Ok(expected_payoffs(&state, cfg).player(1));
    }
    let mover = mover_pos + 1;
    let charles_alive_bit = 0b001usize;
    let action = match mover {
        1 => {
            if targets_charles {
                Action::FireAt(3)
            } else {
                Action::FireInAir
            }
        }
        2 => match latest {
            // Record shows Charles dead: Bob turns on Alice.
            Some(idx) if idx & charles_alive_bit == 0 => Action::FireAt(1),
            _ => Action::FireAt(3),
        },
        _ => Action::FireAt(charles_target),
    };
    let op = cfg.op_for(mover, 1, action)?;
    let mut evolved = state;
    op.apply_in_place(evolved.amplitudes_mut());

    let coherent = if p < 1.0 {
        decoherent_branch(
            cfg,
            targets_charles,
            charles_target,
            p,
            evolved.clone(),
            latest,
            mover_pos + 1,
        )?
    } else {
        0.0
    };
    let measured = if p > 0.0 {
        let mut acc = 0.0;
        for (idx, amp) in evolved.amplitudes().iter().enumerate() {
            let pr = amp.norm_sqr();
            if pr > 1e-15 {
                acc += pr
                    * decoherent_branch(
                        cfg,
                        targets_charles,
                        charles_target,
                        p,
                        StateVector::basis(3, idx)?,
                        Some(idx),
                        mover_pos + 1,
                    )?;
            }
        }
        acc
    } else {
        0.0
    };
    Ok((1.0 - p) * coherent + p * measured)
}

/// Payoff difference "target Charles" − "fire in air" for Alice at (a, b).
pub fn one_shot_payoff_difference(regime: Regime, a: f64, b: f64) -> Result<f64> {
    let (c, air) = match regime {
        Regime::Quantum => (
            one_shot_alice_payoff_quantum(a, b, true)?,
            one_shot_alice_payoff_quantum(a, b, false)?,
        ),
        Regime::Classical => (
            one_shot_alice_payoff_classical(a, b, true)?,
            one_shot_alice_payoff_classical(a, b, false)?,
        ),
        Regime::Decoherent(p) => (
            one_shot_alice_payoff_decoherent(a, b, p, true)?,
            one_shot_alice_payoff_decoherent(a, b, p, false)?,
        ),
    };
    Ok(c - air)
}

// ---------------------------------------------------------------------------
// Record-driven policies for the Monte Carlo path
// ---------------------------------------------------------------------------

/// Alice's fixed one-shot choice.
#[derive(Debug, Clone, Copy)]
pub struct OneShotAlice {
    pub targets_charles: bool,
}

impl Policy for OneShotAlice {
    fn decide(&self, _round: usize, _latest: Option<&RecordEntry>, _rng: &mut dyn RngCore) -> Action {
        if self.targets_charles {
            Action::FireAt(3)
        } else {
            Action::FireInAir
        }
    }
}

/// Bob targets Charles unless the public record shows him dead.
#[derive(Debug, Clone, Copy)]
pub struct OneShotBob;

impl Policy for OneShotBob {
    fn decide(&self, _round: usize, latest: Option<&RecordEntry>, _rng: &mut dyn RngCore) -> Action {
        match latest {
            Some(entry) if !entry.outcome.alive(3) => Action::FireAt(1),
            _ => Action::FireAt(3),
        }
    }
}

/// Charles shoots a known survivor's opponent if the record singles one
/// out; otherwise he is indifferent and flips a fair coin. The coin is drawn
/// on every call so coupled runs consume identical random streams.
#[derive(Debug, Clone, Copy)]
pub struct OneShotCharles;

impl Policy for OneShotCharles {
    fn decide(&self, _round: usize, latest: Option<&RecordEntry>, rng: &mut dyn RngCore) -> Action {
        let coin = if (rng.next_u32() & 1) == 0 { 1 } else { 2 };
        if let Some(entry) = latest {
            if !entry.outcome.alive(1) {
                return Action::FireAt(2);
            }
            if !entry.outcome.alive(2) {
                return Action::FireAt(1);
            }
        }
        Action::FireAt(coin)
    }
}

/// The scenario's policy set for one Alice choice.
pub fn one_shot_policies(targets_charles: bool) -> (OneShotAlice, OneShotBob, OneShotCharles) {
    (
        OneShotAlice { targets_charles },
        OneShotBob,
        OneShotCharles,
    )
}

// ---------------------------------------------------------------------------
// Exact region maps
// ---------------------------------------------------------------------------

fn marks_axes(grid_points: usize) -> (Axis, Axis) {
    (
        Axis::half_open("a", 0.0, 1.0, grid_points),
        Axis::half_open("b", 0.0, 1.0, grid_points),
    )
}

/// The scalar difference grid behind the one-shot map (charles − air).
pub fn one_shot_difference_grid(regime: Regime, grid_points: usize) -> Result<SweepGrid> {
    let (axis_a, axis_b) = marks_axes(grid_points);
    let cells: Vec<(f64, f64)> = axis_a
        .values
        .iter()
        .flat_map(|&a| axis_b.values.iter().map(move |&b| (a, b)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(a, b)| one_shot_payoff_difference(regime, a, b).expect("grid within [0,1)"))
        .collect();
    SweepGrid::new(
        vec![axis_a, axis_b],
        "charles_minus_air",
        GridValues::Scalars(values),
    )
}

/// Turn a payoff-difference grid into best-action labels (ties go to air).
pub fn labels_from_differences(diff: &SweepGrid) -> SweepGrid {
    let values = match &diff.values {
        GridValues::Scalars(v) => v,
        GridValues::Labels(_) => unreachable!(),
    };
    let labels = values
        .iter()
        .map(|&d| {
            if d >= TIE_EPSILON {
                LABEL_CHARLES.to_string()
            } else {
                LABEL_AIR.to_string()
            }
        })
        .collect();
    SweepGrid::new(
        diff.axes.clone(),
        "alice_best",
        GridValues::Labels(labels),
    )
    .expect("same shape")
}

/// Alice's best-action label per cell for the given scenario and regime.
///
/// Two-shot maps label only cells respecting the scenario's parameter order
/// (a > b or b > a); the rest carry [`LABEL_OUTSIDE`]. Decoherent evaluation
/// is available for the one-shot scenario, matching the published analysis.
pub fn strategy_region_map(
    scenario: Scenario,
    regime: Regime,
    grid_points: usize,
) -> Result<SweepGrid> {
    if let Regime::Decoherent(p) = regime {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if scenario != Scenario::OneShot {
            return Err(Error::UnsupportedConfig(
                "decoherent maps cover the one-shot scenario".into(),
            ));
        }
    }
    match scenario {
        Scenario::OneShot => {
            let diff = one_shot_difference_grid(regime, grid_points)?;
            Ok(labels_from_differences(&diff))
        }
        Scenario::TwoShotAGreaterB => two_shot_map(grid_points, regime, true),
        Scenario::TwoShotBGreaterA => two_shot_map(grid_points, regime, false),
    }
}

fn two_shot_map(grid_points: usize, regime: Regime, a_greater: bool) -> Result<SweepGrid> {
    let (axis_a, axis_b) = marks_axes(grid_points);
    let cells: Vec<(f64, f64)> = axis_a
        .values
        .iter()
        .flat_map(|&a| axis_b.values.iter().map(move |&b| (a, b)))
        .collect();
    let labels: Vec<String> = cells
        .par_iter()
        .map(|&(a, b)| {
            let inside = if a_greater { a > b } else { b > a };
            if !inside {
                return LABEL_OUTSIDE.to_string();
            }
            let cell = match (regime, a_greater) {
                (Regime::Quantum, true) => two_shot_agb_quantum_cell(a, b),
                (Regime::Classical, true) => two_shot_agb_classical_cell(a, b),
                (Regime::Quantum, false) => two_shot_bga_quantum_cell(a, b),
                (Regime::Classical, false) => two_shot_bga_classical_cell(a, b),
                (Regime::Decoherent(_), _) => unreachable!("rejected above"),
            };
            cell.expect("grid within [0,1)")
        })
        .collect();
    SweepGrid::new(
        vec![axis_a, axis_b],
        "best_strategy",
        GridValues::Labels(labels),
    )
}

/// Two-shot, a > b > c = 0. Alice chooses (round 1 ∈ {air, Charles},
/// round 2 ∈ {Bob, Charles}); Bob plays [Charles, Alice], Charles
/// [Bob, Alice].
fn two_shot_agb_quantum_cell(a: f64, b: f64) -> Result<String> {
    let cfg = GameConfig::from_miss_probs(&[a, b, 0.0], 2)?;
    let bob = vec![Action::FireAt(3), Action::FireAt(1)];
    let charles = vec![Action::FireAt(2), Action::FireAt(1)];
    let choices = [
        (Action::FireInAir, Action::FireAt(2), "air+bob"),
        (Action::FireInAir, Action::FireAt(3), "air+charles"),
        (Action::FireAt(3), Action::FireAt(2), "charles+bob"),
        (Action::FireAt(3), Action::FireAt(3), "charles+charles"),
    ];
    let mut best: Option<(&str, f64)> = None;
    for (r1, r2, label) in choices {
        let prof = StrategyProfile::new(vec![vec![r1, r2], bob.clone(), charles.clone()]);
        let payoff = expected_payoffs(&play(&cfg, &prof)?, &cfg).player(1);
        match best {
            Some((_, p)) if payoff < p + TIE_EPSILON => {}
            _ => best = Some((label, payoff)),
        }
    }
    Ok(best.expect("choices nonempty").0.to_string())
}

fn two_shot_agb_classical_cell(a: f64, b: f64) -> Result<String> {
    let cfg = GameConfig::from_miss_probs(&[a, b, 0.0], 2)?;
    let opponents = [
        ClassicalRule::PreferTarget {
            priority: vec![3, 1],
        },
        ClassicalRule::PreferTarget {
            priority: vec![2, 1],
        },
    ];
    let mut best: Option<(&str, f64)> = None;
    for (alice, label) in [
        (
            ClassicalRule::AirWhileAllAlive {
                priority: vec![3, 2],
            },
            LABEL_AIR,
        ),
        (
            ClassicalRule::PreferTarget {
                priority: vec![3, 2],
            },
            LABEL_CHARLES,
        ),
    ] {
        let rules = vec![alice, opponents[0].clone(), opponents[1].clone()];
        let payoff = game_tree_expectation(&cfg, &rules, Info::Full)?.player(1);
        match best {
            Some((_, p)) if payoff < p + TIE_EPSILON => {}
            _ => best = Some((label, payoff)),
        }
    }
    Ok(best.expect("choices nonempty").0.to_string())
}

/// Two-shot, b > a > c = 0. Alice picks round 1 (air vs Charles), Bob picks
/// round 2 (Alice vs Charles); the cell is labelled by the pure equilibrium
/// of the resulting 2×2 game.
fn two_shot_bga_quantum_cell(a: f64, b: f64) -> Result<String> {
    let cfg = GameConfig::from_miss_probs(&[a, b, 0.0], 2)?;
    let alice_choices = [Action::FireInAir, Action::FireAt(3)];
    let bob_choices = [Action::FireAt(1), Action::FireAt(3)];
    let mut pay = [[(0.0f64, 0.0f64); 2]; 2];
    for (i, &ar1) in alice_choices.iter().enumerate() {
        for (j, &br2) in bob_choices.iter().enumerate() {
            let prof = StrategyProfile::new(vec![
                vec![ar1, Action::FireAt(2)],
                vec![Action::FireAt(3), br2],
                vec![Action::FireAt(1), Action::FireAt(2)],
            ]);
            let p = expected_payoffs(&play(&cfg, &prof)?, &cfg);
            pay[i][j] = (p.player(1), p.player(2));
        }
    }
    let name = |i: usize, j: usize| {
        format!(
            "alice-{}+bob-{}",
            if i == 0 { "air" } else { "charles" },
            if j == 0 { "alice" } else { "charles" },
        )
    };
    for i in 0..2 {
        for j in 0..2 {
            let alice_ok = pay[i][j].0 >= pay[1 - i][j].0 - TIE_EPSILON;
            let bob_ok = pay[i][j].1 >= pay[i][1 - j].1 - TIE_EPSILON;
            if alice_ok && bob_ok {
                return Ok(name(i, j));
            }
        }
    }
    Ok("none".to_string())
}

fn two_shot_bga_classical_cell(a: f64, b: f64) -> Result<String> {
    let cfg = GameConfig::from_miss_probs(&[a, b, 0.0], 2)?;
    let opponents = [
        ClassicalRule::PreferTarget {
            priority: vec![3, 1],
        },
        ClassicalRule::PreferTarget {
            priority: vec![1, 2],
        },
    ];
    let mut best: Option<(&str, f64)> = None;
    for (alice, label) in [
        (
            ClassicalRule::AirWhileAllAlive {
                priority: vec![3, 2],
            },
            LABEL_AIR,
        ),
        (
            ClassicalRule::PreferTarget {
                priority: vec![3, 2],
            },
            LABEL_CHARLES,
        ),
    ] {
        let rules = vec![alice, opponents[0].clone(), opponents[1].clone()];
        let payoff = game_tree_expectation(&cfg, &rules, Info::Full)?.player(1);
        match best {
            Some((_, p)) if payoff < p + TIE_EPSILON => {}
            _ => best = Some((label, payoff)),
        }
    }
    Ok(best.expect("choices nonempty").0.to_string())
}

// ---------------------------------------------------------------------------
// Monte Carlo one-shot map (trajectory sampling with common random numbers)
// ---------------------------------------------------------------------------

/// Controls for the sampled one-shot map.
#[derive(Debug, Clone, Copy)]
pub struct McMapOptions {
    /// Trajectories per cell and strategy before any escalation.
    pub base_trials: u64,
    /// Ambiguous cells double their trials up to this many times.
    pub max_doublings: u32,
    /// Escalate while |mean| < `sigma` × standard error.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for McMapOptions {
    fn default() -> Self {
        Self {
            base_trials: 100_000,
            max_doublings: 8,
            sigma: 4.0,
            seed: 0x51D,
        }
    }
}

/// Estimate the payoff difference (charles − air) for one cell by paired
/// trajectories: both strategies replay the same per-trial random stream, so
/// trials where Alice's opening shot misses cancel exactly.
pub fn one_shot_mc_cell_difference(
    a: f64,
    b: f64,
    p: f64,
    opts: &McMapOptions,
    cell_seed: u64,
) -> Result<(f64, f64, u64)> {
    let cfg = one_shot_cfg(a, b)?;
    let (alice_c, bob, charles) = one_shot_policies(true);
    let (alice_air, _, _) = one_shot_policies(false);
    let pol_c: [&dyn Policy; 3] = [&alice_c, &bob, &charles];
    let pol_air: [&dyn Policy; 3] = [&alice_air, &bob, &charles];

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut done: u64 = 0;
    let mut target = opts.base_trials.max(1);
    let mut doublings = 0;
    loop {
        for trial in done..target {
            let mut rng_c = trial_rng(cell_seed, trial);
            let mut rng_air = trial_rng(cell_seed, trial);
            let out_c = run_trajectory_with_rng(&cfg, &pol_c, p, &mut rng_c)?;
            let out_air = run_trajectory_with_rng(&cfg, &pol_air, p, &mut rng_air)?;
            let alive = |o: &crate::qstate::BasisState| o.count_alive();
            let u_c = if out_c.alive(1) {
                cfg.utility(alive(&out_c))
            } else {
                0.0
            };
            let u_air = if out_air.alive(1) {
                cfg.utility(alive(&out_air))
            } else {
                0.0
            };
            let d = u_c - u_air;
            sum += d;
            sum_sq += d * d;
        }
        done = target;
        let t = done as f64;
        let mean = sum / t;
        let var = ((sum_sq / t - mean * mean).max(0.0)) * t / (t - 1.0).max(1.0);
        let se = (var / t).sqrt();
        if mean.abs() >= opts.sigma * se || doublings >= opts.max_doublings {
            return Ok((mean, se, done));
        }
        target *= 2;
        doublings += 1;
    }
}

/// The sampled one-shot region map at decoherence probability `p`.
pub fn one_shot_region_map_mc(p: f64, grid_points: usize, opts: &McMapOptions) -> Result<SweepGrid> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let (axis_a, axis_b) = marks_axes(grid_points);
    let cells: Vec<(usize, f64, f64)> = axis_a
        .values
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| {
            axis_b
                .values
                .iter()
                .enumerate()
                .map(move |(j, &b)| (i * grid_points + j, a, b))
        })
        .collect();
    let labels: Vec<String> = cells
        .par_iter()
        .map(|&(flat, a, b)| {
            let cell_seed = opts
                .seed
                .wrapping_add((flat as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let (mean, _se, _trials) =
                one_shot_mc_cell_difference(a, b, p, opts, cell_seed).expect("valid cell");
            if mean > 0.0 {
                LABEL_CHARLES.to_string()
            } else {
                LABEL_AIR.to_string()
            }
        })
        .collect();
    SweepGrid::new(
        vec![axis_a, axis_b],
        "alice_best",
        GridValues::Labels(labels),
    )
}

// ---------------------------------------------------------------------------
// Boundary extraction
// ---------------------------------------------------------------------------

/// For each second-axis value (column), the interpolated first-axis position
/// where the scalar grid crosses zero from below (scanning the first axis
/// upward). `None` when the column never crosses.
pub fn column_crossings(diff: &SweepGrid) -> Result<Vec<Option<f64>>> {
    let values = match &diff.values {
        GridValues::Scalars(v) => v,
        GridValues::Labels(_) => {
            return Err(Error::ConfigError("need a scalar grid".into()));
        }
    };
    let rows = diff.axes[0].values.len();
    let cols = diff.axes[1].values.len();
    let avals = &diff.axes[0].values;
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut crossing = None;
        for i in 0..rows - 1 {
            let d0 = values[i * cols + j];
            let d1 = values[(i + 1) * cols + j];
            if d0 < 0.0 && d1 >= 0.0 {
                let frac = if d1 > d0 { -d0 / (d1 - d0) } else { 0.0 };
                crossing = Some(avals[i] + frac * (avals[i + 1] - avals[i]));
                break;
            }
        }
        out.push(crossing);
    }
    Ok(out)
}

/// For each first-axis value (row), the interpolated second-axis position
/// where the scalar grid crosses zero from below (scanning the second axis
/// upward). `None` when the row never crosses.
pub fn row_crossings(diff: &SweepGrid) -> Result<Vec<Option<f64>>> {
    let values = match &diff.values {
        GridValues::Scalars(v) => v,
        GridValues::Labels(_) => {
            return Err(Error::ConfigError("need a scalar grid".into()));
        }
    };
    let rows = diff.axes[0].values.len();
    let cols = diff.axes[1].values.len();
    let bvals = &diff.axes[1].values;
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut crossing = None;
        for j in 0..cols - 1 {
            let d0 = values[i * cols + j];
            let d1 = values[i * cols + j + 1];
            if d0 < 0.0 && d1 >= 0.0 {
                let frac = if d1 > d0 { -d0 / (d1 - d0) } else { 0.0 };
                crossing = Some(bvals[j] + frac * (bvals[j + 1] - bvals[j]));
                break;
            }
        }
        out.push(crossing);
    }
    Ok(out)
}

/// For each first-axis value (row), the first column whose label equals
/// `label`; `None` when the row never reaches it.
pub fn row_first_label(labels: &SweepGrid, label: &str) -> Result<Vec<Option<usize>>> {
    let values = match &labels.values {
        GridValues::Labels(v) => v,
        GridValues::Scalars(_) => {
            return Err(Error::ConfigError("need a label grid".into()));
        }
    };
    let rows = labels.axes[0].values.len();
    let cols = labels.axes[1].values.len();
    Ok((0..rows)
        .map(|i| (0..cols).find(|&j| values[i * cols + j] == label))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::estimate_payoffs_mc;

    #[test]
    fn quantum_one_shot_boundary_is_the_printed_parabola() {
        // On a = (1-2b)^2 with b < 1/2 the two payoffs tie exactly.
        for b in [0.05, 0.2, 0.35, 0.45] {
            let a = (1.0 - 2.0 * b) * (1.0 - 2.0 * b);
            let d = one_shot_payoff_difference(Regime::Quantum, a, b).unwrap();
            assert!(d.abs() < 1e-12, "b={b}: {d}");
        }
        // Above the parabola Alice shoots Charles, below she abstains.
        assert!(one_shot_payoff_difference(Regime::Quantum, 0.9, 0.1).unwrap() > 0.0);
        assert!(one_shot_payoff_difference(Regime::Quantum, 0.3, 0.1).unwrap() < 0.0);
        // For b > 1/2 helping Bob always wins.
        assert!(one_shot_payoff_difference(Regime::Quantum, 0.1, 0.7).unwrap() > 0.0);
    }

    #[test]
    fn classical_one_shot_boundary_is_the_vertical_line() {
        // Exact tie on b = 2/3 for every a; air below, Charles above.
        for a in [0.1, 0.5, 0.9] {
            let d = one_shot_payoff_difference(Regime::Classical, a, 2.0 / 3.0).unwrap();
            assert!(d.abs() < 1e-12, "a={a}: {d}");
            assert!(one_shot_payoff_difference(Regime::Classical, a, 0.6).unwrap() < 0.0);
            assert!(one_shot_payoff_difference(Regime::Classical, a, 0.7).unwrap() > 0.0);
        }
    }

    #[test]
    fn decoherent_endpoints_match_the_pure_regimes() {
        for (a, b) in [(0.3, 0.4), (0.7, 0.2), (0.1, 0.8)] {
            let q = one_shot_payoff_difference(Regime::Quantum, a, b).unwrap();
            let d0 = one_shot_payoff_difference(Regime::Decoherent(0.0), a, b).unwrap();
            assert!((q - d0).abs() < 1e-12);
            let c = one_shot_payoff_difference(Regime::Classical, a, b).unwrap();
            let d1 = one_shot_payoff_difference(Regime::Decoherent(1.0), a, b).unwrap();
            assert!((c - d1).abs() < 1e-12);
        }
    }

    #[test]
    fn decoherent_boundary_moves_between_the_extremes() {
        // At a = 0.3: quantum boundary b* ≈ 0.2261, classical 2/3; the
        // intermediate maps cross in between and in increasing order of p.
        let a = 0.3;
        let mut prev = 0.0;
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let (mut lo, mut hi) = (0.0, 0.999);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                let d = one_shot_payoff_difference(Regime::Decoherent(p), a, mid).unwrap();
                if d > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let bstar = 0.5 * (lo + hi);
            assert!(bstar > prev - 1e-9, "p={p}: {bstar} < {prev}");
            prev = bstar;
            if p == 0.0 {
                assert!((bstar - (1.0 - a.sqrt()) / 2.0).abs() < 1e-6);
            }
            if p == 1.0 {
                assert!((bstar - 2.0 / 3.0).abs() < 1e-6);
            }
            if (p - 0.5).abs() < 1e-12 {
                // Independent branch-enumeration oracle value.
                assert!((bstar - 0.4693).abs() < 1e-3, "p=0.5: {bstar}");
            }
        }
    }

    #[test]
    fn trajectory_sampler_agrees_with_exact_decoherent_values() {
        let (a, b, p) = (0.4, 0.3, 0.6);
        for targets_charles in [false, true] {
            let exact = one_shot_alice_payoff_decoherent(a, b, p, targets_charles).unwrap();
            let cfg = one_shot_cfg(a, b).unwrap();
            let (alice, bob, charles) = one_shot_policies(targets_charles);
            let pols: [&dyn Policy; 3] = [&alice, &bob, &charles];
            let est = estimate_payoffs_mc(&cfg, &pols, p, 60_000, 21).unwrap();
            let d = (est.payoffs.player(1) - exact).abs();
            assert!(
                d <= 3.0 * est.std_errs[0].max(1e-4),
                "targets_charles={targets_charles}: {d}"
            );
        }
    }

    #[test]
    fn exact_map_labels_follow_the_difference_sign() {
        let map = strategy_region_map(Scenario::OneShot, Regime::Quantum, 21).unwrap();
        let a_idx = 18; // a = 18/21 ≈ 0.857
        let b_low = 1; // b = 1/21: above parabola → charles
        let b_mid = 8; // b = 8/21 ≈ 0.38: (1-2b)² ≈ 0.056 < a → charles
        assert_eq!(map.label_at(&[a_idx, b_low]).unwrap(), LABEL_CHARLES);
        assert_eq!(map.label_at(&[a_idx, b_mid]).unwrap(), LABEL_CHARLES);
        let a_small = 2; // a ≈ 0.095 < (1-2/21·2)² → air at small b
        assert_eq!(map.label_at(&[a_small, b_low]).unwrap(), LABEL_AIR);
    }

    #[test]
    fn mc_map_matches_exact_labels_away_from_the_boundary() {
        let n = 9;
        let opts = McMapOptions {
            base_trials: 4_000,
            max_doublings: 4,
            sigma: 4.0,
            seed: 99,
        };
        let p = 0.5;
        let mc = one_shot_region_map_mc(p, n, &opts).unwrap();
        for (i, &a) in mc.axes[0].values.iter().enumerate() {
            for (j, &b) in mc.axes[1].values.iter().enumerate() {
                let d = one_shot_payoff_difference(Regime::Decoherent(p), a, b).unwrap();
                if d.abs() > 0.03 {
                    let expect = if d > 0.0 { LABEL_CHARLES } else { LABEL_AIR };
                    assert_eq!(mc.label_at(&[i, j]).unwrap(), expect, "cell ({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn two_shot_maps_have_the_expected_structure() {
        let agb = strategy_region_map(Scenario::TwoShotAGreaterB, Regime::Quantum, 15).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..15 {
            for j in 0..15 {
                seen.insert(agb.label_at(&[i, j]).unwrap().to_string());
            }
        }
        assert!(seen.contains(LABEL_OUTSIDE));
        assert!(seen.len() > 2, "more than one strategy region: {seen:?}");

        // Classical b>a case: air below b = 1/2, Charles above (away from
        // the degenerate edges).
        let bga = strategy_region_map(Scenario::TwoShotBGreaterA, Regime::Classical, 21).unwrap();
        let a_idx = 4; // a ≈ 0.19
        let lo = 8; // b ≈ 0.38 < 1/2
        let hi = 16; // b ≈ 0.76 > 1/2
        assert_eq!(bga.label_at(&[a_idx, lo]).unwrap(), LABEL_AIR);
        assert_eq!(bga.label_at(&[a_idx, hi]).unwrap(), LABEL_CHARLES);

        assert!(matches!(
            strategy_region_map(Scenario::TwoShotAGreaterB, Regime::Decoherent(0.5), 9),
            Err(Error::UnsupportedConfig(_))
        ));
    }

    #[test]
    fn boundary_extraction_interpolates_crossings() {
        let diff = one_shot_difference_grid(Regime::Quantum, 41).unwrap();
        let crossings = column_crossings(&diff).unwrap();
        for (j, &b) in diff.axes[1].values.iter().enumerate() {
            if b < 0.5 {
                let expect = (1.0 - 2.0 * b) * (1.0 - 2.0 * b);
                if let Some(a_star) = crossings[j] {
                    assert!(
                        (a_star - expect).abs() <= 1.0 / 41.0,
                        "b={b}: {a_star} vs {expect}"
                    );
                }
            } else {
                assert!(crossings[j].is_none(), "b={b} should not cross");
            }
        }

        let labels = labels_from_differences(&diff);
        let cols = row_first_label(&labels, LABEL_CHARLES).unwrap();
        // Row a=0: Charles from b=0 — wait, at a=0 the quantum boundary is
        // b=1/2, so air up to there.
        let row0 = cols[0].unwrap();
        let b_at = labels.axes[1].values[row0];
        assert!((b_at - 0.5).abs() <= 1.0 / 41.0 + 1e-12);
    }
}
