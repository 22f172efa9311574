//! Monte Carlo trajectories with per-move decoherence.
//!
//! The partial-decoherence channel ρ → (1−p)ρ + p·diag(ρ) is realised by
//! sampling: after each individual action the whole system is projectively
//! measured with probability p (collapsing the state and appending the
//! outcome to a public record), and left untouched otherwise. A final
//! projective measurement always occurs. Policies pick each action from the
//! round index and the latest record entry — never from amplitudes, which
//! the players cannot see.
//!
//! Trials are independent given per-trial generators derived from the master
//! seed, so aggregates are reproducible regardless of evaluation order and
//! trials may run concurrently.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{utilities_of_outcome, Action, GameConfig, Payoffs, StrategyProfile};
use crate::qstate::{BasisState, StateVector};
use crate::{Error, Result};

/// One public measurement record entry: after `mover`'s action in `round`
/// the system collapsed to `outcome`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordEntry {
    pub round: usize,
    pub mover: usize,
    pub outcome: BasisState,
}

/// A per-player decision rule. With no measurement information ever supplied
/// it must reduce to a fixed action list, i.e. behave like a strategy
/// profile row.
pub trait Policy: Sync + Send {
    fn decide(&self, round: usize, latest: Option<&RecordEntry>, rng: &mut dyn RngCore) -> Action;
}

/// Plays a fixed action list, ignoring all measurement information.
#[derive(Debug, Clone)]
pub struct FixedPolicy {
    actions: Vec<Action>,
}

impl FixedPolicy {
    pub fn new(actions: Vec<Action>) -> Self {
        Self { actions }
    }
}

impl Policy for FixedPolicy {
    fn decide(&self, round: usize, _latest: Option<&RecordEntry>, _rng: &mut dyn RngCore) -> Action {
        self.actions[round - 1]
    }
}

/// The rows of a strategy profile as fixed policies.
pub fn policies_from_profile(prof: &StrategyProfile) -> Vec<FixedPolicy> {
    (1..=prof.n_players())
        .map(|p| FixedPolicy::new(prof.player_actions(p).to_vec()))
        .collect()
}

/// Sample a basis outcome from the state's measurement distribution using a
/// single uniform draw (inverse CDF by ascending basis index), collapse the
/// state onto it and return the index.
fn measure_collapse(state: &mut StateVector, rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let amps = state.amplitudes_mut();
    let mut cum = 0.0;
    let mut hit = amps.len() - 1;
    for (i, a) in amps.iter().enumerate() {
        cum += a.norm_sqr();
        if u < cum {
            hit = i;
            break;
        }
    }
    for (i, a) in amps.iter_mut().enumerate() {
        *a = if i == hit {
            Complex64::ONE
        } else {
            Complex64::ZERO
        };
    }
    hit
}

/// Run a single decoherent game and return the terminal measurement outcome.
///
/// RNG draws occur in a fixed order (policy decision, then the measure/skip
/// coin, then the outcome draw when measuring), so two runs that share a
/// generator stay coupled while their states coincide. That makes common
/// random numbers effective for comparing strategies cell-by-cell.
pub fn run_trajectory_with_rng(
    cfg: &GameConfig,
    policies: &[&dyn Policy],
    p: f64,
    rng: &mut impl Rng,
) -> Result<BasisState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if policies.len() != cfg.n_players() {
        return Err(Error::ProfileError(format!(
            "{} policies for {} players",
            policies.len(),
            cfg.n_players()
        )));
    }
    let n = cfg.n_players();
    let mut state = StateVector::all_alive(n)?;
    let mut latest: Option<RecordEntry> = None;
    for round in 1..=cfg.rounds() {
        for &player in cfg.firing_order() {
            let action = policies[player - 1].decide(round, latest.as_ref(), rng);
            if let Action::FireAt(t) = action {
                if t == player {
                    return Err(Error::SelfTarget(player));
                }
            }
            let op = cfg.op_for(player, round, action)?;
            op.apply_in_place(state.amplitudes_mut());
            // Decohere: measure the whole system with probability p.
            let measure = rng.gen::<f64>() < p;
            if measure {
                let idx = measure_collapse(&mut state, rng);
                latest = Some(RecordEntry {
                    round,
                    mover: player,
                    outcome: BasisState::new(n, idx)?,
                });
            }
        }
    }
    // Terminal measurement always occurs.
    let idx = measure_collapse(&mut state, rng);
    BasisState::new(n, idx)
}

/// Seed-keyed variant of [`run_trajectory_with_rng`].
pub fn run_trajectory(
    cfg: &GameConfig,
    policies: &[&dyn Policy],
    p: f64,
    seed: u64,
) -> Result<BasisState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_trajectory_with_rng(cfg, policies, p, &mut rng)
}

/// Monte Carlo payoff estimate with per-player standard errors.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub payoffs: Payoffs,
    pub std_errs: Vec<f64>,
    pub trials: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Deterministic per-trial generator: trial t of master seed s always sees
/// the same stream, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Estimate expected payoffs by averaging `trials` trajectories.
pub fn estimate_payoffs_mc(
    cfg: &GameConfig,
    policies: &[&dyn Policy],
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials < 1 {
        return Err(Error::ConfigError("trials must be >= 1".into()));
    }
    let n = cfg.n_players();
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let outcome = run_trajectory_with_rng(cfg, policies, p, &mut rng)
                .expect("trajectory parameters validated up front");
            let u = utilities_of_outcome(&outcome, cfg);
            let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
            (u, sq)
        })
        .reduce(
            || (vec![0.0; n], vec![0.0; n]),
            |(mut sa, mut qa), (sb, qb)| {
                for i in 0..n {
                    sa[i] += sb[i];
                    qa[i] += qb[i];
                }
                (sa, qa)
            },
        );
    let t = trials as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / t).collect();
    let std_errs = (0..n)
        .map(|i| {
            if trials > 1 {
                let var = (sum_sq[i] / t - mean[i] * mean[i]).max(0.0) * t / (t - 1.0);
                (var / t).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    // Validate parameters once so the expect() above cannot fire.
    run_trajectory(cfg, policies, p, seed)?;
    Ok(McEstimate {
        payoffs: Payoffs(mean),
        std_errs,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{expected_payoffs, play};

    fn truel_cfg(rounds: usize) -> GameConfig {
        GameConfig::from_miss_probs(&[2.0 / 3.0, 1.0 / 3.0, 0.0], rounds).unwrap()
    }

    #[test]
    fn p_zero_matches_exact_engine_statistics() {
        let cfg = truel_cfg(2);
        let prof = StrategyProfile::new(vec![
            vec![Action::FireInAir, Action::FireAt(2)],
            vec![Action::FireAt(3), Action::FireAt(1)],
            vec![Action::FireAt(2), Action::FireAt(1)],
        ]);
        let exact = expected_payoffs(&play(&cfg, &prof).unwrap(), &cfg);
        let policies = policies_from_profile(&prof);
        let refs: Vec<&dyn Policy> = policies.iter().map(|p| p as &dyn Policy).collect();
        let est = estimate_payoffs_mc(&cfg, &refs, 0.0, 40_000, 11).unwrap();
        for p in 1..=3 {
            let d = (est.payoffs.player(p) - exact.player(p)).abs();
            assert!(
                d <= 3.0 * est.std_errs[p - 1].max(1e-4),
                "player {p}: {d} vs 3σ {}",
                3.0 * est.std_errs[p - 1]
            );
        }
    }

    #[test]
    fn single_trial_yields_a_valid_outcome() {
        let cfg = truel_cfg(1);
        let prof = StrategyProfile::new(vec![
            vec![Action::FireAt(3)],
            vec![Action::FireAt(3)],
            vec![Action::FireAt(2)],
        ]);
        let policies = policies_from_profile(&prof);
        let refs: Vec<&dyn Policy> = policies.iter().map(|p| p as &dyn Policy).collect();
        let est = estimate_payoffs_mc(&cfg, &refs, 0.5, 1, 3).unwrap();
        assert_eq!(est.trials, 1);
        let total = est.payoffs.sum();
        assert!((0.0..=1.0 + 1e-12).contains(&total));
    }

    #[test]
    fn fixed_seed_reruns_are_bit_identical() {
        let cfg = truel_cfg(2);
        let prof = StrategyProfile::uniform(3, 2, |p| Action::FireAt(if p == 1 { 2 } else { 1 }));
        let policies = policies_from_profile(&prof);
        let refs: Vec<&dyn Policy> = policies.iter().map(|p| p as &dyn Policy).collect();
        let a = estimate_payoffs_mc(&cfg, &refs, 0.3, 5_000, 42).unwrap();
        let b = estimate_payoffs_mc(&cfg, &refs, 0.3, 5_000, 42).unwrap();
        assert_eq!(a.payoffs.as_slice(), b.payoffs.as_slice());
        assert_eq!(a.std_errs, b.std_errs);
    }

    #[test]
    fn invalid_probability_is_rejected() {
        let cfg = truel_cfg(1);
        let prof = StrategyProfile::uniform(3, 1, |_| Action::FireInAir);
        let policies = policies_from_profile(&prof);
        let refs: Vec<&dyn Policy> = policies.iter().map(|p| p as &dyn Policy).collect();
        assert!(matches!(
            run_trajectory(&cfg, &refs, 1.5, 0),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn full_decoherence_duel_is_fair_at_the_papers_marksmanship() {
        // a=2/3, b=1/2: the classical duel gives both players 1/2.
        let cfg = GameConfig::from_miss_probs(&[2.0 / 3.0, 0.5], 6).unwrap();
        let prof = StrategyProfile::new(vec![
            vec![Action::FireAt(2); 6],
            vec![Action::FireAt(1); 6],
        ]);
        let policies = policies_from_profile(&prof);
        let refs: Vec<&dyn Policy> = policies.iter().map(|p| p as &dyn Policy).collect();
        let est = estimate_payoffs_mc(&cfg, &refs, 1.0, 60_000, 9).unwrap();
        let d = (est.payoffs.player(1) - 0.5).abs();
        assert!(d <= 3.0 * est.std_errs[0], "{d} vs {}", 3.0 * est.std_errs[0]);
    }
}
