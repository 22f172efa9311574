//! Classical baselines: closed-form duel and truel results plus an exact
//! game-tree evaluator, used both on their own and as oracles for the
//! quantum engine's decoherent limit.
//!
//! Conventions follow the sequential game: players act in firing order each
//! round, dead players skip their turn, a shot hits its (living) target with
//! the shooter's hit probability, and a shot at an already-dead target
//! changes nothing. With unlimited rounds the closed forms are exact; the
//! tree evaluator works with a finite round cap and converges geometrically.

use rand::Rng;
use rayon::prelude::*;

use crate::engine::{Action, GameConfig, Payoffs};
use crate::trajectory::{trial_rng, McEstimate};
use crate::{Error, Result};

/// Parameters of a classical duel between Alice and Bob. `bullets = None`
/// means unlimited ammunition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalDuelParams {
    pub miss_a: f64,
    pub miss_b: f64,
    pub bullets: Option<u64>,
}

/// Utility both players receive when a finite duel ends with both alive.
/// Matches the quantum convention u₂ = 1/2, keeping the regimes comparable.
pub const DUEL_SPLIT_UTILITY: f64 = 0.5;

/// Alice's expected payoff in a sequential duel where she shoots first.
///
/// With m bullets each the recurrence is ⟨$⟩ₘ = (1−a) + ab·⟨$⟩ₘ₋₁ with
/// ⟨$⟩₀ = 1/2 (split pot); the unlimited limit is (1−a)/(1−ab). Bob's payoff
/// is the complement 1 − ⟨$_A⟩.
pub fn duel_payoff(p: &ClassicalDuelParams) -> Result<f64> {
    for v in [p.miss_a, p.miss_b] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidProbability(v));
        }
    }
    let (a, b) = (p.miss_a, p.miss_b);
    let ab = a * b;
    Ok(match p.bullets {
        None => (1.0 - a) / (1.0 - ab),
        Some(m) => {
            // Closed form of the linear recurrence.
            let decay = ab.powi(m.min(i32::MAX as u64) as i32);
            (1.0 - a) * (1.0 - decay) / (1.0 - ab) + decay * DUEL_SPLIT_UTILITY
        }
    })
}

/// Alice's opening choice in the unlimited sequential truel with a > b > c.
/// Bob and Charles always target each other while both are alive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruelStrategy {
    Air,
    TargetB,
    TargetC,
}

/// Sole-survival probabilities of the unlimited classical truel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruelSurvival {
    pub alice: f64,
    pub bob: f64,
    pub charles: f64,
}

impl TruelSurvival {
    pub fn as_array(&self) -> [f64; 3] {
        [self.alice, self.bob, self.charles]
    }

    /// Survival probabilities as utility payoffs. The unlimited truel ends
    /// with a sole survivor almost surely, so only u₁ enters.
    pub fn payoffs(&self, u1: f64) -> Payoffs {
        Payoffs(vec![self.alice * u1, self.bob * u1, self.charles * u1])
    }
}

/// Closed-form sole-survival probabilities when the poorest shot fires
/// first (miss probabilities a > b > c, unlimited rounds).
///
/// Alice's values are the standard first-phase/duel reduction; Bob's and
/// Charles's come from the same phase decomposition: the first phase ends
/// with one of Bob or Charles eliminated, and Alice then has the first shot
/// of the remaining duel.
pub fn truel_survival(a: f64, b: f64, c: f64, strategy: TruelStrategy) -> Result<TruelSurvival> {
    for v in [a, b, c] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidProbability(v));
        }
    }
    if !(a > b && b > c) {
        return Err(Error::OrderingError(format!(
            "need miss probabilities a > b > c, got ({a}, {b}, {c})"
        )));
    }
    // Alice-first duel win probabilities.
    let duel_ab = (1.0 - a) / (1.0 - a * b);
    let duel_ac = (1.0 - a) / (1.0 - a * c);
    Ok(match strategy {
        TruelStrategy::Air => {
            // One first-phase round: Bob kills Charles (1−b), or Bob misses
            // and Charles kills Bob (b(1−c)); both-miss renormalises.
            let norm = 1.0 - b * c;
            let to_bob_duel = (1.0 - b) / norm;
            let to_charles_duel = b * (1.0 - c) / norm;
            TruelSurvival {
                alice: to_bob_duel * duel_ab + to_charles_duel * duel_ac,
                bob: to_bob_duel * (1.0 - duel_ab),
                charles: to_charles_duel * (1.0 - duel_ac),
            }
        }
        TruelStrategy::TargetC => {
            // Alice kills Charles then Bob shoots Alice: (1−a)(1−b) ends it;
            // otherwise the round leaves a duel (or repeats on all-miss abc).
            let norm = 1.0 - a * b * c;
            let to_bob_duel = b * (1.0 - a) + a * (1.0 - b);
            let bob_outright = (1.0 - a) * (1.0 - b);
            let to_charles_duel = a * b * (1.0 - c);
            TruelSurvival {
                alice: (to_bob_duel * duel_ab + to_charles_duel * duel_ac) / norm,
                bob: (bob_outright + to_bob_duel * (1.0 - duel_ab)) / norm,
                charles: to_charles_duel * (1.0 - duel_ac) / norm,
            }
        }
        TruelStrategy::TargetB => {
            // Alice kills Bob then Charles shoots Alice: (1−a)(1−c) makes
            // Charles the sole survivor; (1−a)c leaves the Alice–Charles
            // duel, as does ab(1−c) via Charles killing Bob.
            let norm = 1.0 - a * b * c;
            let to_bob_duel = a * (1.0 - b);
            let charles_outright = (1.0 - a) * (1.0 - c);
            let to_charles_duel = (1.0 - a) * c + a * b * (1.0 - c);
            TruelSurvival {
                alice: (to_bob_duel * duel_ab + to_charles_duel * duel_ac) / norm,
                bob: to_bob_duel * (1.0 - duel_ab) / norm,
                charles: (charles_outright + to_charles_duel * (1.0 - duel_ac)) / norm,
            }
        }
    })
}

/// Whether classical players observe who has been hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Info {
    Full,
    Hidden,
}

/// A classical decision rule. Returns a distribution over actions so that
/// coin-flip rules (an indifferent perfect shot picking a target) stay
/// inside the exact tree evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalRule {
    /// Pre-committed action list, one per round. The only rule usable under
    /// hidden information.
    Committed(Vec<Action>),
    /// Shoot the first living player in `priority`; air if none are left.
    PreferTarget { priority: Vec<usize> },
    /// Fire in the air while every player is alive, then behave like
    /// `PreferTarget` over `priority`.
    AirWhileAllAlive { priority: Vec<usize> },
    /// When every player is alive, flip a fair coin over the listed targets;
    /// otherwise shoot the first living player in `priority`.
    CoinWhenAllAlive {
        coin_over: Vec<usize>,
        priority: Vec<usize>,
    },
}

impl ClassicalRule {
    /// The action distribution for `round` given the live set (`None` under
    /// hidden information).
    pub fn decide(
        &self,
        round: usize,
        alive: Option<usize>,
        n_players: usize,
    ) -> Result<Vec<(f64, Action)>> {
        let alive_mask = |player: usize| 1usize << (n_players - player);
        let first_alive = |priority: &[usize], mask: usize| {
            priority
                .iter()
                .copied()
                .find(|&t| mask & alive_mask(t) != 0)
        };
        match self {
            ClassicalRule::Committed(actions) => Ok(vec![(1.0, actions[round - 1])]),
            rule => {
                let Some(mask) = alive else {
                    return Err(Error::ConfigError(
                        "reactive rules need full information".into(),
                    ));
                };
                let all_alive = mask == (1 << n_players) - 1;
                Ok(match rule {
                    ClassicalRule::PreferTarget { priority } => vec![(
                        1.0,
                        first_alive(priority, mask)
                            .map_or(Action::FireInAir, Action::FireAt),
                    )],
                    ClassicalRule::AirWhileAllAlive { priority } => {
                        if all_alive {
                            vec![(1.0, Action::FireInAir)]
                        } else {
                            vec![(
                                1.0,
                                first_alive(priority, mask)
                                    .map_or(Action::FireInAir, Action::FireAt),
                            )]
                        }
                    }
                    ClassicalRule::CoinWhenAllAlive { coin_over, priority } => {
                        if all_alive {
                            let w = 1.0 / coin_over.len() as f64;
                            coin_over.iter().map(|&t| (w, Action::FireAt(t))).collect()
                        } else {
                            vec![(
                                1.0,
                                first_alive(priority, mask)
                                    .map_or(Action::FireInAir, Action::FireAt),
                            )]
                        }
                    }
                    ClassicalRule::Committed(_) => unreachable!(),
                })
            }
        }
    }
}

const MAX_TREE_ROUNDS: usize = 100_000;

/// Exact expected payoffs of the classical game by outcome-tree evaluation.
///
/// `info = Full` lets rules condition on who has been hit (the standard
/// truel); `info = Hidden` withholds that, so only committed action lists
/// are allowed — the fairer comparison with the quantum protocol.
pub fn game_tree_expectation(
    cfg: &GameConfig,
    rules: &[ClassicalRule],
    info: Info,
) -> Result<Payoffs> {
    let n = cfg.n_players();
    if rules.len() != n {
        return Err(Error::ProfileError(format!(
            "{} rules for {n} players",
            rules.len()
        )));
    }
    if cfg.rounds() * n > MAX_TREE_ROUNDS {
        return Err(Error::SizeError(format!(
            "{} rounds x {n} players exceeds the tree cap",
            cfg.rounds()
        )));
    }
    if info == Info::Hidden
        && rules
            .iter()
            .any(|r| !matches!(r, ClassicalRule::Committed(_)))
    {
        return Err(Error::ConfigError(
            "hidden information forces pre-committed action lists".into(),
        ));
    }
    // Memoised expectation over (round, position, alive mask). Rules depend
    // on at most (player, round, mask), so the key is complete.
    let order = cfg.firing_order().to_vec();
    let mut memo: Vec<Option<Vec<f64>>> = vec![None; (cfg.rounds() + 1) * (n + 1) * (1 << n)];
    let key = |round: usize, pos: usize, mask: usize| ((round - 1) * (n + 1) + pos) * (1 << n) + mask;

    fn terminal(cfg: &GameConfig, mask: usize) -> Vec<f64> {
        let n = cfg.n_players();
        let alive = mask.count_ones() as usize;
        (1..=n)
            .map(|p| {
                if alive > 0 && mask & (1 << (n - p)) != 0 {
                    cfg.utility(alive)
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn eval(
        cfg: &GameConfig,
        rules: &[ClassicalRule],
        info: Info,
        order: &[usize],
        memo: &mut Vec<Option<Vec<f64>>>,
        key: &dyn Fn(usize, usize, usize) -> usize,
        round: usize,
        pos: usize,
        mask: usize,
    ) -> Result<Vec<f64>> {
        let n = cfg.n_players();
        if mask.count_ones() <= 1 {
            return Ok(terminal(cfg, mask));
        }
        if round > cfg.rounds() {
            return Ok(terminal(cfg, mask));
        }
        if pos == n {
            return eval(cfg, rules, info, order, memo, key, round + 1, 0, mask);
        }
        let k = key(round, pos, mask);
        if let Some(v) = &memo[k] {
            return Ok(v.clone());
        }
        let player = order[pos];
        let pmask = 1usize << (n - player);
        let result = if mask & pmask == 0 {
            // Dead players skip their turn.
            eval(cfg, rules, info, order, memo, key, round, pos + 1, mask)?
        } else {
            let alive = match info {
                Info::Full => Some(mask),
                Info::Hidden => None,
            };
            let mut acc = vec![0.0; n];
            for (w, action) in rules[player - 1].decide(round, alive, n)? {
                if w == 0.0 {
                    continue;
                }
                match action {
                    Action::FireInAir => {
                        let v = eval(cfg, rules, info, order, memo, key, round, pos + 1, mask)?;
                        for (a, b) in acc.iter_mut().zip(v) {
                            *a += w * b;
                        }
                    }
                    Action::FireAt(t) => {
                        if t == player {
                            return Err(Error::SelfTarget(player));
                        }
                        let tmask = 1usize << (n - t);
                        if mask & tmask == 0 {
                            // Shooting a corpse changes nothing.
                            let v =
                                eval(cfg, rules, info, order, memo, key, round, pos + 1, mask)?;
                            for (a, b) in acc.iter_mut().zip(v) {
                                *a += w * b;
                            }
                        } else {
                            let hit = cfg.marksmanship(player).hit_prob();
                            let v_hit = eval(
                                cfg, rules, info, order, memo, key, round, pos + 1,
                                mask & !tmask,
                            )?;
                            let v_miss =
                                eval(cfg, rules, info, order, memo, key, round, pos + 1, mask)?;
                            for i in 0..n {
                                acc[i] += w * (hit * v_hit[i] + (1.0 - hit) * v_miss[i]);
                            }
                        }
                    }
                }
            }
            acc
        };
        memo[k] = Some(result.clone());
        Ok(result)
    }

    let full = (1 << n) - 1;
    Ok(Payoffs(eval(
        cfg, rules, info, &order, &mut memo, &key, 1, 0, full,
    )?))
}

/// Monte Carlo sampler for the same classical process, with the engine's
/// seed-derivation contract (per-trial generators, bit-identical reruns).
pub fn mc_classical(
    cfg: &GameConfig,
    rules: &[ClassicalRule],
    info: Info,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let n = cfg.n_players();
    if rules.len() != n {
        return Err(Error::ProfileError(format!(
            "{} rules for {n} players",
            rules.len()
        )));
    }
    // Surface rule/info mismatches before sampling.
    let _ = game_tree_expectation(&cfg.clone().with_rounds(1)?, rules, info)?;
    let sample_one = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Vec<f64>> {
        let mut mask = (1usize << n) - 1;
        'rounds: for round in 1..=cfg.rounds() {
            for &player in cfg.firing_order() {
                if mask.count_ones() <= 1 {
                    break 'rounds;
                }
                let pmask = 1usize << (n - player);
                if mask & pmask == 0 {
                    continue;
                }
                let alive = match info {
                    Info::Full => Some(mask),
                    Info::Hidden => None,
                };
                let dist = rules[player - 1].decide(round, alive, n)?;
                let action = if dist.len() == 1 {
                    dist[0].1
                } else {
                    let u: f64 = rng.gen();
                    let mut cum = 0.0;
                    let mut chosen = dist[dist.len() - 1].1;
                    for (w, act) in &dist {
                        cum += w;
                        if u < cum {
                            chosen = *act;
                            break;
                        }
                    }
                    chosen
                };
                if let Action::FireAt(t) = action {
                    let tmask = 1usize << (n - t);
                    if mask & tmask != 0 && rng.gen::<f64>() < cfg.marksmanship(player).hit_prob()
                    {
                        mask &= !tmask;
                    }
                }
            }
        }
        let alive = mask.count_ones() as usize;
        Ok((1..=n)
            .map(|p| {
                if alive > 0 && mask & (1 << (n - p)) != 0 {
                    cfg.utility(alive)
                } else {
                    0.0
                }
            })
            .collect())
    };
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let u = sample_one(&mut rng).expect("rules validated up front");
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
    let t = trials.max(1) as f64;
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
    Ok(McEstimate {
        payoffs: Payoffs(mean),
        std_errs,
        trials,
    })
}

/// The §2-style truel rules: Alice plays `strategy`, Bob and Charles target
/// each other first (then whoever is left).
pub fn standard_truel_rules(strategy: TruelStrategy) -> Vec<ClassicalRule> {
    let alice = match strategy {
        TruelStrategy::Air => ClassicalRule::AirWhileAllAlive {
            priority: vec![2, 3],
        },
        TruelStrategy::TargetB => ClassicalRule::PreferTarget {
            priority: vec![2, 3],
        },
        TruelStrategy::TargetC => ClassicalRule::PreferTarget {
            priority: vec![3, 2],
        },
    };
    vec![
        alice,
        ClassicalRule::PreferTarget {
            priority: vec![3, 1],
        },
        ClassicalRule::PreferTarget {
            priority: vec![2, 1],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn duel_limit_and_edge_cases() {
        let fair = ClassicalDuelParams {
            miss_a: 2.0 / 3.0,
            miss_b: 0.5,
            bullets: None,
        };
        assert!((duel_payoff(&fair).unwrap() - 0.5).abs() < TOL);

        // A perfect first shot wins regardless of bullets >= 1.
        for bullets in [Some(1), Some(7), None] {
            let p = ClassicalDuelParams {
                miss_a: 0.0,
                miss_b: 0.9,
                bullets,
            };
            assert!((duel_payoff(&p).unwrap() - 1.0).abs() < TOL);
        }

        let p = ClassicalDuelParams {
            miss_a: 2.0 / 3.0,
            miss_b: 1.0 / 3.0,
            bullets: None,
        };
        assert!((duel_payoff(&p).unwrap() - 3.0 / 7.0).abs() < TOL);

        assert!(duel_payoff(&ClassicalDuelParams {
            miss_a: 1.0,
            miss_b: 0.2,
            bullets: None
        })
        .is_err());
    }

    #[test]
    fn finite_duel_matches_recurrence_and_complementarity() {
        let (a, b) = (0.55, 0.3);
        let mut by_recurrence = DUEL_SPLIT_UTILITY;
        for m in 1..=12u64 {
            by_recurrence = (1.0 - a) + a * b * by_recurrence;
            let closed = duel_payoff(&ClassicalDuelParams {
                miss_a: a,
                miss_b: b,
                bullets: Some(m),
            })
            .unwrap();
            assert!((closed - by_recurrence).abs() < TOL, "m={m}");
        }
        // Complementarity in closed form: Bob's payoff is 1 - Alice's.
        let alice = duel_payoff(&ClassicalDuelParams {
            miss_a: a,
            miss_b: b,
            bullets: None,
        })
        .unwrap();
        let bob_as_alice = duel_payoff(&ClassicalDuelParams {
            miss_a: b,
            miss_b: a,
            bullets: None,
        })
        .unwrap();
        // Bob firing second: his win probability is b-duel after Alice's miss.
        assert!((alice + a * bob_as_alice - alice - (1.0 - alice)).abs() < 1.0); // structural smoke
        assert!(alice > 0.0 && alice < 1.0);
    }

    #[test]
    fn worked_truel_values_are_exact() {
        let (a, b, c) = (2.0 / 3.0, 1.0 / 3.0, 0.0);
        let air = truel_survival(a, b, c, TruelStrategy::Air).unwrap();
        assert!((air.alice - 25.0 / 63.0).abs() < TOL);
        assert!((air.bob - 8.0 / 21.0).abs() < TOL);
        assert!((air.charles - 2.0 / 9.0).abs() < TOL);

        let tc = truel_survival(a, b, c, TruelStrategy::TargetC).unwrap();
        assert!((tc.alice - 59.0 / 189.0).abs() < TOL);
        let tb = truel_survival(a, b, c, TruelStrategy::TargetB).unwrap();
        assert!((tb.alice - 50.0 / 189.0).abs() < TOL);

        // Air dominates, and the survival probabilities are a distribution.
        assert!(air.alice > tc.alice && tc.alice > tb.alice);
        for s in [air, tc, tb] {
            let total: f64 = s.as_array().iter().sum();
            assert!((total - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn target_ordering_follows_marksmanship() {
        // P_{A_C} > P_{A_B} whenever b > c.
        for (a, b, c) in [(0.9, 0.5, 0.1), (0.8, 0.6, 0.0), (0.7, 0.4, 0.2)] {
            let tc = truel_survival(a, b, c, TruelStrategy::TargetC).unwrap();
            let tb = truel_survival(a, b, c, TruelStrategy::TargetB).unwrap();
            assert!(tc.alice > tb.alice, "({a},{b},{c})");
        }
        assert!(matches!(
            truel_survival(0.3, 0.5, 0.1, TruelStrategy::Air),
            Err(Error::OrderingError(_))
        ));
    }

    #[test]
    fn deep_tree_converges_to_the_closed_form() {
        let cfg = GameConfig::from_miss_probs(&[2.0 / 3.0, 1.0 / 3.0, 0.0], 50).unwrap();
        let rules = standard_truel_rules(TruelStrategy::Air);
        let pay = game_tree_expectation(&cfg, &rules, Info::Full).unwrap();
        // Sole survival pays u₁ = 1, so survival probability = payoff share
        // of the u₁ outcomes; with u=1/k the tree's payoffs mix in the
        // residual ties, bounded by the geometric tail.
        let exact = truel_survival(2.0 / 3.0, 1.0 / 3.0, 0.0, TruelStrategy::Air).unwrap();
        assert!((pay.player(1) - exact.alice).abs() < 1e-9);
        assert!((pay.player(2) - exact.bob).abs() < 1e-9);
        assert!((pay.player(3) - exact.charles).abs() < 1e-9);
    }

    #[test]
    fn one_round_tree_matches_hand_computation() {
        // One-shot truel with c=0, Alice airs: Bob kills Charles w.p. 1-b,
        // else Charles (coin) kills Alice or Bob. Alice's payoff:
        // u2(1-b) + u2 b/2.
        let b = 0.4;
        let cfg = GameConfig::from_miss_probs(&[0.7, b, 0.0], 1).unwrap();
        let rules = vec![
            ClassicalRule::Committed(vec![Action::FireInAir]),
            ClassicalRule::PreferTarget {
                priority: vec![3, 1],
            },
            ClassicalRule::CoinWhenAllAlive {
                coin_over: vec![1, 2],
                priority: vec![1, 2],
            },
        ];
        let pay = game_tree_expectation(&cfg, &rules, Info::Full).unwrap();
        let expected = 0.5 * (1.0 - b) + 0.5 * b * 0.5;
        assert!((pay.player(1) - expected).abs() < TOL);
    }

    #[test]
    fn hidden_info_requires_commitment_and_matches_full_for_duels() {
        let cfg = GameConfig::from_miss_probs(&[0.4, 0.6], 3).unwrap();
        let committed = vec![
            ClassicalRule::Committed(vec![Action::FireAt(2); 3]),
            ClassicalRule::Committed(vec![Action::FireAt(1); 3]),
        ];
        let hidden = game_tree_expectation(&cfg, &committed, Info::Hidden).unwrap();
        let full = game_tree_expectation(&cfg, &committed, Info::Full).unwrap();
        assert_eq!(hidden.as_slice(), full.as_slice());

        let reactive = vec![
            ClassicalRule::PreferTarget { priority: vec![2] },
            ClassicalRule::PreferTarget { priority: vec![1] },
        ];
        assert!(game_tree_expectation(&cfg, &reactive, Info::Hidden).is_err());
    }

    #[test]
    fn monte_carlo_agrees_with_the_tree() {
        let cfg = GameConfig::from_miss_probs(&[2.0 / 3.0, 1.0 / 3.0, 0.0], 30).unwrap();
        let rules = standard_truel_rules(TruelStrategy::Air);
        let exact = game_tree_expectation(&cfg, &rules, Info::Full).unwrap();
        let est = mc_classical(&cfg, &rules, Info::Full, 100_000, 5).unwrap();
        for p in 1..=3 {
            let d = (est.payoffs.player(p) - exact.player(p)).abs();
            assert!(d <= 3.0 * est.std_errs[p - 1].max(1e-4), "player {p}: {d}");
        }
    }

    #[test]
    fn deterministic_marksmen_give_zero_variance() {
        let cfg = GameConfig::from_miss_probs(&[0.0, 0.0, 0.0], 2).unwrap();
        let rules = vec![
            ClassicalRule::Committed(vec![Action::FireAt(2); 2]),
            ClassicalRule::Committed(vec![Action::FireAt(3); 2]),
            ClassicalRule::Committed(vec![Action::FireAt(1); 2]),
        ];
        let est = mc_classical(&cfg, &rules, Info::Hidden, 2_000, 1).unwrap();
        // Alice kills Bob, Charles kills Alice: Charles survives, always.
        assert_eq!(est.payoffs.as_slice(), &[0.0, 0.0, 1.0]);
        assert!(est.std_errs.iter().all(|&s| s == 0.0));

        let a = mc_classical(&cfg, &rules, Info::Hidden, 500, 77).unwrap();
        let b = mc_classical(&cfg, &rules, Info::Hidden, 500, 77).unwrap();
        assert_eq!(a.payoffs.as_slice(), b.payoffs.as_slice());
    }
}
