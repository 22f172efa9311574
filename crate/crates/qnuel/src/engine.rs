//! Game definition and coherent play.
//!
//! A game is a fixed number of rounds; within each round the players act in
//! firing order (alphabetic by default). Every action is either a shot, which
//! applies the corresponding firing unitary, or fire-in-air, the identity.
//! Strategies are pre-committed for the whole game — no measurement happens
//! until the end, so players gain nothing from waiting.
//!
//! A dead player's listed action is still "applied": the operator itself acts
//! as the identity on the shooter-dead branch, so no special-casing happens
//! at the engine level.


use crate::operators::{build_firing_op, fire_in_air, FiringOp, Marksmanship, PhaseParams};
use crate::qstate::{check_player, DensityMatrix, StateVector};
use crate::{Error, Result};

/// One pre-committed move: shoot at somebody or into the air.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    FireInAir,
    FireAt(usize),
}

impl Action {
    /// Tie-break ordering used throughout the analysis layer: fire-in-air
    /// first, then targets by ascending index.
    pub fn sort_key(&self) -> usize {
        match self {
            Action::FireInAir => 0,
            Action::FireAt(t) => *t,
        }
    }
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Action::FireInAir => write!(f, "air"),
            Action::FireAt(t) => write!(f, "->{t}"),
        }
    }
}

/// Per-player, per-round pre-committed actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    actions: Vec<Vec<Action>>,
}

impl StrategyProfile {
    /// `actions[player-1][round-1]` is the player's action in that round.
    pub fn new(actions: Vec<Vec<Action>>) -> Self {
        Self { actions }
    }

    /// Everybody plays the same action every round.
    pub fn uniform(n_players: usize, rounds: usize, action_of: impl Fn(usize) -> Action) -> Self {
        Self {
            actions: (1..=n_players)
                .map(|p| vec![action_of(p); rounds])
                .collect(),
        }
    }

    pub fn n_players(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&self, player: usize, round: usize) -> Action {
        self.actions[player - 1][round - 1]
    }

    pub fn player_actions(&self, player: usize) -> &[Action] {
        &self.actions[player - 1]
    }

    pub fn with_player_actions(&self, player: usize, actions: Vec<Action>) -> Self {
        let mut out = self.clone();
        out.actions[player - 1] = actions;
        out
    }

    pub fn validate(&self, cfg: &GameConfig) -> Result<()> {
        if self.actions.len() != cfg.n_players() {
            return Err(Error::ProfileError(format!(
                "profile covers {} players, game has {}",
                self.actions.len(),
                cfg.n_players()
            )));
        }
        for (pi, list) in self.actions.iter().enumerate() {
            let player = pi + 1;
            if list.len() != cfg.rounds() {
                return Err(Error::ProfileError(format!(
                    "player {player} lists {} actions, game has {} rounds",
                    list.len(),
                    cfg.rounds()
                )));
            }
            for a in list {
                if let Action::FireAt(t) = a {
                    check_player(cfg.n_players(), *t)
                        .map_err(|_| Error::ProfileError(format!("bad target {t}")))?;
                    if *t == player {
                        return Err(Error::ProfileError(format!(
                            "player {player} targets itself"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Full description of a game: marksmanship and phases per player, round
/// count, firing order and the utility schedule u₁..uₙ (uₖ = payoff for
/// surviving among k players; defaults to 1/k so every outcome pays out a
/// total of one).
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    marksmanship: Vec<Marksmanship>,
    phases: Vec<PhaseParams>,
    rounds: usize,
    firing_order: Vec<usize>,
    utilities: Vec<f64>,
    /// Optional per-round phase override (`[player-1][round-1]`); the paper
    /// fixes θ per player but is silent on whether phases may vary between
    /// rounds, so the default is fixed-per-player.
    round_phases: Option<Vec<Vec<PhaseParams>>>,
}

impl GameConfig {
    pub fn new(marksmanship: Vec<Marksmanship>, rounds: usize) -> Result<Self> {
        let n = marksmanship.len();
        if n < 2 || n > crate::qstate::MAX_PLAYERS {
            return Err(Error::InvalidPlayerCount(n));
        }
        if rounds < 1 {
            return Err(Error::ConfigError("rounds must be >= 1".into()));
        }
        Ok(Self {
            marksmanship,
            phases: vec![PhaseParams::zero(); n],
            rounds,
            firing_order: (1..=n).collect(),
            utilities: (1..=n).map(|k| 1.0 / k as f64).collect(),
            round_phases: None,
        })
    }

    /// Convenience constructor from miss probabilities, zero phases.
    pub fn from_miss_probs(miss: &[f64], rounds: usize) -> Result<Self> {
        let m = miss
            .iter()
            .map(|&a| Marksmanship::from_miss_prob(a))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, rounds)
    }

    pub fn with_phases(mut self, phases: Vec<PhaseParams>) -> Result<Self> {
        if phases.len() != self.n_players() {
            return Err(Error::ConfigError("one phase pair per player".into()));
        }
        self.phases = phases;
        Ok(self)
    }

    pub fn with_utilities(mut self, utilities: Vec<f64>) -> Result<Self> {
        if utilities.len() != self.n_players() {
            return Err(Error::ConfigError("one utility per group size".into()));
        }
        // 0 < uₙ ≤ … ≤ u₂ ≤ u₁ (the paper takes u₁ = 1).
        if utilities[self.n_players() - 1] <= 0.0 {
            return Err(Error::ConfigError("utilities must be positive".into()));
        }
        for k in 1..utilities.len() {
            if utilities[k] > utilities[k - 1] {
                return Err(Error::ConfigError(
                    "utilities must not increase with group size".into(),
                ));
            }
        }
        self.utilities = utilities;
        Ok(self)
    }

    pub fn with_firing_order(mut self, order: Vec<usize>) -> Result<Self> {
        let n = self.n_players();
        let mut seen = vec![false; n + 1];
        if order.len() != n {
            return Err(Error::ConfigError(
                "firing order must list every player".into(),
            ));
        }
        for &p in &order {
            check_player(n, p)?;
            if seen[p] {
                return Err(Error::ConfigError(format!("player {p} repeated in order")));
            }
            seen[p] = true;
        }
        self.firing_order = order;
        Ok(self)
    }

    pub fn with_round_phases(mut self, round_phases: Vec<Vec<PhaseParams>>) -> Result<Self> {
        if round_phases.len() != self.n_players()
            || round_phases.iter().any(|r| r.len() != self.rounds)
        {
            return Err(Error::ConfigError(
                "round phases must cover every player and round".into(),
            ));
        }
        self.round_phases = Some(round_phases);
        Ok(self)
    }

    pub fn with_rounds(mut self, rounds: usize) -> Result<Self> {
        if rounds < 1 {
            return Err(Error::ConfigError("rounds must be >= 1".into()));
        }
        if let Some(rp) = &self.round_phases {
            if rp.iter().any(|r| r.len() != rounds) {
                return Err(Error::ConfigError(
                    "round phases must cover every round".into(),
                ));
            }
        }
        self.rounds = rounds;
        Ok(self)
    }

    pub fn n_players(&self) -> usize {
        self.marksmanship.len()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn marksmanship(&self, player: usize) -> Marksmanship {
        self.marksmanship[player - 1]
    }

    pub fn phases(&self, player: usize) -> PhaseParams {
        self.phases[player - 1]
    }

    pub fn phases_for_round(&self, player: usize, round: usize) -> PhaseParams {
        match &self.round_phases {
            Some(rp) => rp[player - 1][round - 1],
            None => self.phases[player - 1],
        }
    }

    pub fn firing_order(&self) -> &[usize] {
        &self.firing_order
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    /// Utility of being alive among `alive_count` players.
    pub fn utility(&self, alive_count: usize) -> f64 {
        self.utilities[alive_count - 1]
    }

    /// The operator realising `player`'s action in `round`.
    pub fn op_for(&self, player: usize, round: usize, action: Action) -> Result<FiringOp> {
        match action {
            Action::FireInAir => Ok(fire_in_air(self.n_players())),
            Action::FireAt(target) => build_firing_op(
                self.n_players(),
                player,
                target,
                self.marksmanship(player),
                self.phases_for_round(player, round),
            ),
        }
    }
}

/// Expected payoff per player.
#[derive(Debug, Clone, PartialEq)]
pub struct Payoffs(pub Vec<f64>);

impl Payoffs {
    pub fn player(&self, player: usize) -> f64 {
        self.0[player - 1]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Play a pre-committed profile from the all-alive state and return the
/// final (still coherent) state.
pub fn play(cfg: &GameConfig, prof: &StrategyProfile) -> Result<StateVector> {
    prof.validate(cfg)?;
    let mut state = StateVector::all_alive(cfg.n_players())?;
    let amps = state.amplitudes_mut();
    for round in 1..=cfg.rounds() {
        for &player in cfg.firing_order() {
            let op = cfg.op_for(player, round, prof.action(player, round))?;
            op.apply_in_place(amps);
        }
    }
    Ok(state)
}

/// Expected utility per player for a final state: the sum over basis
/// outcomes, with the player collecting u_k when alive among k survivors.
pub fn expected_payoffs(s: &StateVector, cfg: &GameConfig) -> Payoffs {
    payoffs_from_probabilities(s.amplitudes().iter().map(|a| a.norm_sqr()), cfg)
}

/// Same as [`expected_payoffs`] for a mixed state.
pub fn expected_payoffs_density(r: &DensityMatrix, cfg: &GameConfig) -> Payoffs {
    payoffs_from_probabilities(r.diagonal_probabilities().into_iter(), cfg)
}

pub(crate) fn payoffs_from_probabilities(
    probs: impl Iterator<Item = f64>,
    cfg: &GameConfig,
) -> Payoffs {
    let n = cfg.n_players();
    let mut out = vec![0.0; n];
    for (idx, pr) in probs.enumerate() {
        let alive = idx.count_ones() as usize;
        if alive == 0 || pr == 0.0 {
            continue;
        }
        let u = cfg.utility(alive);
        let mut bits = idx;
        while bits != 0 {
            let bit = bits.trailing_zeros() as usize;
            // Bit position maps back to player: player = n - bit.
            out[n - 1 - bit] += pr * u;
            bits &= bits - 1;
        }
    }
    Payoffs(out)
}

/// Convert a terminal basis outcome into the utility vector it pays.
pub fn utilities_of_outcome(outcome: &crate::qstate::BasisState, cfg: &GameConfig) -> Vec<f64> {
    let n = cfg.n_players();
    let alive = outcome.count_alive();
    (1..=n)
        .map(|p| {
            if alive > 0 && outcome.alive(p) {
                cfg.utility(alive)
            } else {
                0.0
            }
        })
        .collect()
}

/// Density matrix of a randomised pre-commitment: Σ wᵢ·|play(profᵢ)⟩⟨…|.
///
/// Used when an indifferent player decides between operators with a coin
/// before any operator is applied.
pub fn play_mixture(
    cfg: &GameConfig,
    profiles: &[(f64, StrategyProfile)],
) -> Result<DensityMatrix> {
    if profiles.is_empty() {
        return Err(Error::WeightError("empty mixture".into()));
    }
    let total: f64 = profiles.iter().map(|(w, _)| w).sum();
    if profiles.iter().any(|(w, _)| *w < 0.0) {
        return Err(Error::WeightError("negative weight".into()));
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::WeightError(format!("weights sum to {total}")));
    }
    let mut out = DensityMatrix::zero(cfg.n_players())?;
    for (w, prof) in profiles {
        if *w == 0.0 {
            continue;
        }
        let pure = play(cfg, prof)?.to_density();
        out.add_scaled(&pure, *w)?;
    }
    Ok(out)
}
