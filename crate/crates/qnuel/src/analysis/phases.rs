//! Phase-parameter searches for duels: payoff landscapes over (α₁, α₂),
//! maximin security levels, the repeated-duel payoff curve with its phase
//! envelope, and the second-shot abstention surface.
//!
//! Payoffs never depend on β₁, β₂ in these scans, so only the α axes are
//! swept; β comes from the supplied configuration.

use rayon::prelude::*;

use super::grid::{Axis, GridValues, SweepGrid};
use crate::engine::{expected_payoffs, play, Action, GameConfig, StrategyProfile};
use crate::operators::PhaseParams;
use crate::{Error, Result};

fn require_duel(cfg: &GameConfig) -> Result<()> {
    if cfg.n_players() != 2 {
        return Err(Error::UnsupportedConfig(format!(
            "phase analysis needs a duel, got {} players",
            cfg.n_players()
        )));
    }
    Ok(())
}

/// The standard phase grid: `n` points covering [-π, π] inclusive. 73 points
/// land exactly on the multiples of π/36, which include ±π/3 and ±2π/3.
pub fn phase_axis(n: usize) -> Axis {
    Axis::closed("alpha", -std::f64::consts::PI, std::f64::consts::PI, n)
}

/// Alice's expected payoff in the duel `cfg`/`prof` with the α phases
/// overridden to (α₁, α₂).
pub fn duel_payoff_at_phases(
    cfg: &GameConfig,
    prof: &StrategyProfile,
    alpha1: f64,
    alpha2: f64,
) -> Result<f64> {
    require_duel(cfg)?;
    let cfg = cfg.clone().with_phases(vec![
        PhaseParams::new(alpha1, cfg.phases(1).beta()),
        PhaseParams::new(alpha2, cfg.phases(2).beta()),
    ])?;
    Ok(expected_payoffs(&play(&cfg, prof)?, &cfg).player(1))
}

/// Alice's payoff over an (α₁, α₂) grid for a fixed targeting profile.
pub fn phase_landscape(
    cfg: &GameConfig,
    prof: &StrategyProfile,
    grid_points: usize,
) -> Result<SweepGrid> {
    require_duel(cfg)?;
    let axis = phase_axis(grid_points);
    let values: Vec<f64> = axis
        .values
        .par_iter()
        .flat_map_iter(|&a1| {
            let axis2 = axis.clone();
            axis2.values.into_iter().map(move |a2| (a1, a2))
        })
        .map(|(a1, a2)| duel_payoff_at_phases(cfg, prof, a1, a2).expect("duel checked"))
        .collect();
    SweepGrid::new(
        vec![
            Axis::new("alpha1", axis.values.clone()),
            Axis::new("alpha2", axis.values),
        ],
        "alice_payoff",
        GridValues::Scalars(values),
    )
}

/// Grid maximin summary for both players of a duel.
#[derive(Debug, Clone)]
pub struct MaximinReport {
    pub grid: Vec<f64>,
    /// Alice's worst-case payoff at her best α₁, with every tied α₁.
    pub alice_security: f64,
    pub alice_best_alphas: Vec<f64>,
    /// Bob's worst-case payoff (of 1 − Alice's) at his best α₂, with ties.
    pub bob_security: f64,
    pub bob_best_alphas: Vec<f64>,
    /// Alice's payoff when both play the first of their tied maximin phases.
    pub alice_payoff_at_joint: f64,
}

impl MaximinReport {
    /// Whether the game is balanced (both players at payoff 1/2) when both
    /// play their maximin phases, within `tol`.
    pub fn is_balanced(&self, tol: f64) -> bool {
        (self.alice_payoff_at_joint - 0.5).abs() <= tol
    }
}

/// Grid maximin over (α₁, α₂): each player maximises their worst-case payoff
/// against the opponent's phase choice, holding the targeting profile fixed.
pub fn maximin_phases(
    cfg: &GameConfig,
    prof: &StrategyProfile,
    grid_points: usize,
) -> Result<MaximinReport> {
    let landscape = phase_landscape(cfg, prof, grid_points)?;
    let grid = landscape.axes[0].values.clone();
    let n = grid.len();
    let pa = match &landscape.values {
        GridValues::Scalars(v) => v,
        GridValues::Labels(_) => unreachable!(),
    };
    let tie = 1e-12;

    let alice_floor: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| pa[i * n + j]).fold(f64::INFINITY, f64::min))
        .collect();
    let alice_security = alice_floor.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let alice_best_alphas: Vec<f64> = (0..n)
        .filter(|&i| alice_floor[i] >= alice_security - tie)
        .map(|i| grid[i])
        .collect();

    let bob_floor: Vec<f64> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| 1.0 - pa[i * n + j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let bob_security = bob_floor.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bob_best_alphas: Vec<f64> = (0..n)
        .filter(|&j| bob_floor[j] >= bob_security - tie)
        .map(|j| grid[j])
        .collect();

    let i0 = grid
        .iter()
        .position(|&g| g == alice_best_alphas[0])
        .unwrap();
    let j0 = grid.iter().position(|&g| g == bob_best_alphas[0]).unwrap();
    Ok(MaximinReport {
        grid,
        alice_security,
        alice_best_alphas,
        bob_security,
        bob_best_alphas,
        alice_payoff_at_joint: pa[i0 * n + j0],
    })
}

/// One row of the repeated-duel curve: Alice's payoff after `rounds` rounds
/// of mutual fire, and the payoff envelope over the (α₁, α₂) grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundPayoff {
    pub rounds: usize,
    pub payoff: f64,
    pub min_payoff: f64,
    pub max_payoff: f64,
}

/// Alice's payoff in the repeated duel (both always fire) for every round
/// count up to `max_rounds`, with the min/max envelope over an α grid.
pub fn repeated_duel_curve(
    cfg: &GameConfig,
    max_rounds: usize,
    envelope_grid: usize,
) -> Result<Vec<RoundPayoff>> {
    require_duel(cfg)?;
    if max_rounds < 1 {
        return Err(Error::ConfigError("max_rounds must be >= 1".into()));
    }
    // Mutual fire, evolved incrementally: payoff after every prefix of
    // rounds in a single pass.
    let curve_for = |cfg: &GameConfig| -> Result<Vec<f64>> {
        let mut state = crate::qstate::StateVector::all_alive(2)?;
        let mut payoffs = Vec::with_capacity(max_rounds);
        let full = cfg.clone().with_rounds(max_rounds)?;
        for round in 1..=max_rounds {
            for &player in [1usize, 2].iter() {
                let op = full.op_for(player, round, Action::FireAt(3 - player))?;
                op.apply_in_place(state.amplitudes_mut());
            }
            payoffs.push(expected_payoffs(&state, &full).player(1));
        }
        Ok(payoffs)
    };

    let base = curve_for(&cfg.clone().with_rounds(max_rounds)?)?;
    let axis = phase_axis(envelope_grid);
    let pairs: Vec<(f64, f64)> = axis
        .values
        .iter()
        .flat_map(|&a1| axis.values.iter().map(move |&a2| (a1, a2)))
        .collect();
    let envelopes: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|&(a1, a2)| {
            let cfg = cfg
                .clone()
                .with_rounds(max_rounds)
                .and_then(|c| {
                    c.with_phases(vec![
                        PhaseParams::new(a1, cfg.phases(1).beta()),
                        PhaseParams::new(a2, cfg.phases(2).beta()),
                    ])
                })
                .expect("duel checked");
            curve_for(&cfg).expect("duel checked")
        })
        .collect();

    let mut out = Vec::with_capacity(max_rounds);
    for m in 0..max_rounds {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for env in &envelopes {
            lo = lo.min(env[m]);
            hi = hi.max(env[m]);
        }
        out.push(RoundPayoff {
            rounds: m + 1,
            payoff: base[m],
            min_payoff: lo,
            max_payoff: hi,
        });
    }
    // Sanity: the fixed-phase curve lies inside its own envelope.
    debug_assert!(out
        .iter()
        .all(|r| r.min_payoff <= r.payoff + 1e-12 && r.payoff <= r.max_payoff + 1e-12));
    Ok(out)
}

/// Δ(a, b) = payoff(air on the second shot) − payoff(fire both rounds) for
/// the two-shot duel at α₁ = α₂ = 0. Positive cells mean abstaining wins.
pub fn second_shot_advantage_surface(grid_points: usize) -> Result<SweepGrid> {
    let axis_a = Axis::half_open("a", 0.0, 1.0, grid_points);
    let axis_b = Axis::half_open("b", 0.0, 1.0, grid_points);
    let values: Vec<f64> = axis_a
        .values
        .par_iter()
        .flat_map_iter(|&a| {
            let bs = axis_b.values.clone();
            bs.into_iter().map(move |b| (a, b))
        })
        .map(|(a, b)| second_shot_advantage(a, b).expect("grid within [0,1)"))
        .collect();
    SweepGrid::new(
        vec![axis_a, axis_b],
        "air_minus_fire",
        GridValues::Scalars(values),
    )
}

/// The advantage at a single (a, b) point.
pub fn second_shot_advantage(a: f64, b: f64) -> Result<f64> {
    let cfg = GameConfig::from_miss_probs(&[a, b], 2)?;
    let fire_both = StrategyProfile::new(vec![
        vec![Action::FireAt(2), Action::FireAt(2)],
        vec![Action::FireAt(1), Action::FireAt(1)],
    ]);
    let air_second = StrategyProfile::new(vec![
        vec![Action::FireAt(2), Action::FireInAir],
        vec![Action::FireAt(1), Action::FireAt(1)],
    ]);
    let p_fire = expected_payoffs(&play(&cfg, &fire_both)?, &cfg).player(1);
    let p_air = expected_payoffs(&play(&cfg, &air_second)?, &cfg).player(1);
    Ok(p_air - p_fire)
}
