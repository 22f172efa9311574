//! Strategy-space search: best responses and exhaustive pure-strategy Nash
//! enumeration, plus the sweep machinery in the submodules.

pub mod grid;
pub mod phases;
pub mod regions;

use rayon::prelude::*;

use crate::engine::{expected_payoffs, play, Action, GameConfig, Payoffs, StrategyProfile};
use crate::{Error, Result};

/// Deviation tolerance: a profile is an equilibrium when no unilateral
/// deviation raises the deviator's payoff by at least this much.
pub const EQUILIBRIUM_EPSILON: f64 = 1e-9;

/// Largest number of joint profiles [`find_equilibria`] will enumerate.
pub const MAX_PROFILES: usize = 1 << 21;

/// The allowed action set per player and round. The default space allows
/// every valid target plus fire-in-air, everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySpace {
    slots: Vec<Vec<Vec<Action>>>,
}

impl StrategySpace {
    /// All valid actions in every slot, in tie-break order (air first, then
    /// ascending target).
    pub fn full(cfg: &GameConfig) -> Self {
        let n = cfg.n_players();
        let slots = (1..=n)
            .map(|player| {
                (0..cfg.rounds())
                    .map(|_| {
                        let mut acts = vec![Action::FireInAir];
                        acts.extend((1..=n).filter(|&t| t != player).map(Action::FireAt));
                        acts
                    })
                    .collect()
            })
            .collect();
        Self { slots }
    }

    /// A space from explicit per-player, per-round action sets.
    pub fn new(slots: Vec<Vec<Vec<Action>>>) -> Result<Self> {
        if slots.iter().any(|p| p.iter().any(|s| s.is_empty())) {
            return Err(Error::ConfigError("empty action slot".into()));
        }
        Ok(Self { slots })
    }

    /// Replace one player's slot sets.
    pub fn with_player_slots(mut self, player: usize, slots: Vec<Vec<Action>>) -> Result<Self> {
        if slots.iter().any(|s| s.is_empty()) {
            return Err(Error::ConfigError("empty action slot".into()));
        }
        self.slots[player - 1] = slots;
        Ok(self)
    }

    /// Pin one player's round to a single action.
    pub fn pin(self, player: usize, round: usize, action: Action) -> Self {
        let mut out = self;
        out.slots[player - 1][round - 1] = vec![action];
        out
    }

    pub fn n_players(&self) -> usize {
        self.slots.len()
    }

    /// All action lists available to `player`, in tie-break order: the later
    /// rounds vary fastest, and within a round air precedes ascending
    /// targets.
    pub fn player_lists(&self, player: usize) -> Vec<Vec<Action>> {
        let slots = &self.slots[player - 1];
        let mut lists: Vec<Vec<Action>> = vec![Vec::new()];
        for slot in slots {
            let mut sorted = slot.clone();
            sorted.sort_by_key(Action::sort_key);
            sorted.dedup();
            let mut next = Vec::with_capacity(lists.len() * sorted.len());
            for prefix in &lists {
                for &a in &sorted {
                    let mut l = prefix.clone();
                    l.push(a);
                    next.push(l);
                }
            }
            lists = next;
        }
        lists
    }

    pub fn profile_count(&self) -> usize {
        (1..=self.n_players())
            .map(|p| {
                self.slots[p - 1]
                    .iter()
                    .map(|s| s.len())
                    .product::<usize>()
            })
            .product()
    }
}

/// A certified equilibrium: the profile and its expected payoffs.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub profile: StrategyProfile,
    pub payoffs: Payoffs,
}

/// The complete list of pure-strategy Nash equilibria in a space.
#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub equilibria: Vec<Equilibrium>,
    pub epsilon: f64,
    pub profiles_checked: usize,
}

/// The action list maximising `player`'s payoff against the other rows of
/// `fixed`. Ties break to the earliest list in tie-break order (air first,
/// then ascending target index, earlier rounds more significant).
pub fn best_response(
    cfg: &GameConfig,
    space: &StrategySpace,
    fixed: &StrategyProfile,
    player: usize,
) -> Result<(Vec<Action>, f64)> {
    let lists = space.player_lists(player);
    let mut best: Option<(Vec<Action>, f64)> = None;
    for list in lists {
        let prof = fixed.with_player_actions(player, list.clone());
        let payoff = expected_payoffs(&play(cfg, &prof)?, cfg).player(player);
        match &best {
            Some((_, b)) if payoff <= *b => {}
            _ => best = Some((list, payoff)),
        }
    }
    best.ok_or_else(|| Error::ConfigError("empty strategy space".into()))
}

/// Exhaustively enumerate the space and report every pure-strategy Nash
/// equilibrium (no unilateral deviation gains [`EQUILIBRIUM_EPSILON`] or
/// more). Spaces beyond [`MAX_PROFILES`] joint profiles are refused;
/// restrict the space, or fall back to coordinate search via repeated
/// [`best_response`] passes.
pub fn find_equilibria(cfg: &GameConfig, space: &StrategySpace) -> Result<EquilibriumReport> {
    let n = cfg.n_players();
    if space.n_players() != n {
        return Err(Error::ConfigError("space does not match game".into()));
    }
    let total = space.profile_count();
    if total > MAX_PROFILES {
        return Err(Error::SizeError(format!(
            "{total} profiles exceed the enumeration cap {MAX_PROFILES}; \
             restrict the space or use best-response coordinate search"
        )));
    }
    let lists: Vec<Vec<Vec<Action>>> = (1..=n).map(|p| space.player_lists(p)).collect();
    let counts: Vec<usize> = lists.iter().map(|l| l.len()).collect();

    // Mixed-radix index: player 1 most significant.
    let index_of = |coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(&counts)
            .fold(0, |acc, (c, n)| acc * n + c)
    };
    let coords_of = |mut idx: usize| -> Vec<usize> {
        let mut coords = vec![0; n];
        for p in (0..n).rev() {
            coords[p] = idx % counts[p];
            idx /= counts[p];
        }
        coords
    };

    let payoff_table: Vec<Payoffs> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let coords = coords_of(idx);
            let profile = StrategyProfile::new(
                coords
                    .iter()
                    .enumerate()
                    .map(|(p, &c)| lists[p][c].clone())
                    .collect(),
            );
            expected_payoffs(
                &play(cfg, &profile).expect("space-generated profiles are valid"),
                cfg,
            )
        })
        .collect();

    let equilibria: Vec<Equilibrium> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let coords = coords_of(idx);
            let own = &payoff_table[idx];
            for p in 0..n {
                let here = own.0[p];
                let mut alt = coords.clone();
                for c in 0..counts[p] {
                    if c == coords[p] {
                        continue;
                    }
                    alt[p] = c;
                    if payoff_table[index_of(&alt)].0[p] >= here + EQUILIBRIUM_EPSILON {
                        return None;
                    }
                }
                alt[p] = coords[p];
            }
            let profile = StrategyProfile::new(
                coords
                    .iter()
                    .enumerate()
                    .map(|(p, &c)| lists[p][c].clone())
                    .collect(),
            );
            Some(Equilibrium {
                profile,
                payoffs: own.clone(),
            })
        })
        .collect();

    Ok(EquilibriumReport {
        equilibria,
        epsilon: EQUILIBRIUM_EPSILON,
        profiles_checked: total,
    })
}

/// Re-verify a claimed equilibrium by explicit deviation checks, independent
/// of the enumeration in [`find_equilibria`].
pub fn verify_equilibrium(
    cfg: &GameConfig,
    space: &StrategySpace,
    profile: &StrategyProfile,
    epsilon: f64,
) -> Result<bool> {
    let base = expected_payoffs(&play(cfg, profile)?, cfg);
    for player in 1..=cfg.n_players() {
        for list in space.player_lists(player) {
            if list == profile.player_actions(player) {
                continue;
            }
            let dev = profile.with_player_actions(player, list);
            let pay = expected_payoffs(&play(cfg, &dev)?, cfg).player(player);
            if pay >= base.player(player) + epsilon {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Marksmanship;

    const A: usize = 1;
    const B: usize = 2;
    const C: usize = 3;

    fn worked_truel(rounds: usize) -> GameConfig {
        GameConfig::from_miss_probs(&[2.0 / 3.0, 1.0 / 3.0, 0.0], rounds).unwrap()
    }

    /// The continuation space of the worked truel: round 1 pinned to both
    /// shooting Charles (and Charles at Bob), later rounds free.
    fn continuation_space(cfg: &GameConfig) -> StrategySpace {
        StrategySpace::full(cfg)
            .pin(A, 1, Action::FireAt(C))
            .pin(B, 1, Action::FireAt(C))
            .pin(C, 1, Action::FireAt(B))
    }

    #[test]
    fn zero_skill_player_is_indifferent_and_ties_break_to_air() {
        // One-round truel; Alice cannot hit (θ=0, α=0), opponents fixed.
        let cfg = GameConfig::new(
            vec![
                Marksmanship::from_theta(0.0).unwrap(),
                Marksmanship::from_miss_prob(0.4).unwrap(),
                Marksmanship::from_miss_prob(0.2).unwrap(),
            ],
            1,
        )
        .unwrap();
        let fixed = StrategyProfile::new(vec![
            vec![Action::FireInAir],
            vec![Action::FireAt(C)],
            vec![Action::FireAt(B)],
        ]);
        let space = StrategySpace::full(&cfg);
        let (best, payoff) = best_response(&cfg, &space, &fixed, A).unwrap();
        assert_eq!(best, vec![Action::FireInAir]);
        // Every action gives the same payoff; spot-check one alternative.
        let alt = fixed.with_player_actions(A, vec![Action::FireAt(B)]);
        let alt_pay = expected_payoffs(&play(&cfg, &alt).unwrap(), &cfg).player(A);
        assert!((payoff - alt_pay).abs() < 1e-12);
    }

    #[test]
    fn worked_truel_equilibrium_is_found_and_certified() {
        let cfg = worked_truel(4);
        let space = continuation_space(&cfg);
        let report = find_equilibria(&cfg, &space).unwrap();
        assert!(!report.equilibria.is_empty());
        for eq in &report.equilibria {
            assert!((eq.payoffs.player(A) - 0.554226).abs() < 5e-4);
            assert!(verify_equilibrium(&cfg, &space, &eq.profile, report.epsilon).unwrap());
        }
        // The narrative profile (two Alice shots to Bob's one, then air) is
        // among the equilibria.
        let narrative = StrategyProfile::new(vec![
            vec![
                Action::FireAt(C),
                Action::FireAt(B),
                Action::FireAt(B),
                Action::FireInAir,
            ],
            vec![
                Action::FireAt(C),
                Action::FireAt(A),
                Action::FireInAir,
                Action::FireInAir,
            ],
            vec![
                Action::FireAt(B),
                Action::FireInAir,
                Action::FireInAir,
                Action::FireInAir,
            ],
        ]);
        assert!(report.equilibria.iter().any(|e| e.profile == narrative));
    }

    #[test]
    fn all_profiles_are_equilibria_when_nobody_can_shoot() {
        let cfg = GameConfig::new(
            vec![
                Marksmanship::from_theta(0.0).unwrap(),
                Marksmanship::from_theta(0.0).unwrap(),
            ],
            1,
        )
        .unwrap();
        let space = StrategySpace::full(&cfg);
        let report = find_equilibria(&cfg, &space).unwrap();
        assert_eq!(report.equilibria.len(), report.profiles_checked);
        assert_eq!(report.profiles_checked, 4);
    }

    #[test]
    fn size_guard_suggests_fallback() {
        let cfg = worked_truel(10);
        let space = StrategySpace::full(&cfg);
        match find_equilibria(&cfg, &space) {
            Err(Error::SizeError(msg)) => assert!(msg.contains("best-response")),
            other => panic!("expected size error, got {other:?}"),
        }
    }

    #[test]
    fn best_response_in_the_two_round_duel() {
        // a=2/3, b=1/2, Bob always fires: firing both rounds beats airing
        // the second shot.
        let cfg = GameConfig::from_miss_probs(&[2.0 / 3.0, 0.5], 2).unwrap();
        let fixed = StrategyProfile::new(vec![
            vec![Action::FireInAir; 2],
            vec![Action::FireAt(A); 2],
        ]);
        let space = StrategySpace::full(&cfg).pin(A, 1, Action::FireAt(B));
        let (best, _) = best_response(&cfg, &space, &fixed, A).unwrap();
        assert_eq!(best, vec![Action::FireAt(B), Action::FireAt(B)]);

        // Against a rarely-hitting Bob, a sharp Alice abstains from the
        // second shot rather than undo her own work.
        let cfg = GameConfig::from_miss_probs(&[0.2, 0.9], 2).unwrap();
        let space = StrategySpace::full(&cfg).pin(A, 1, Action::FireAt(B));
        let (best, _) = best_response(&cfg, &space, &fixed, A).unwrap();
        assert_eq!(best, vec![Action::FireAt(B), Action::FireInAir]);
    }
}
