//! Simulator and analysis toolkit for quantum duels, truels and *n*-uels.
//!
//! Players are modelled as qubits (|1⟩ = alive, |0⟩ = dead) and a shot is a
//! controlled rotation of the target's qubit, conditioned on the shooter
//! being alive. Coherence is maintained for the whole game: strategies are
//! pre-committed lists of per-round actions, and a single projective
//! measurement at the end decides everyone's fate. The crate provides
//!
//! - [`qstate`]: dense state vectors and density matrices over the
//!   player-liveness basis, plus the partial-decoherence channel
//!   ρ → (1−p)ρ + p·diag(ρ);
//! - [`operators`]: the parametrised firing unitaries (θ, α, β) and the
//!   fire-in-air identity;
//! - [`engine`]: game configuration, pre-committed strategy profiles,
//!   expected payoffs, and mixtures over profiles;
//! - [`trajectory`]: Monte Carlo trajectories with per-move decoherence and
//!   dynamic, measurement-record-driven policies;
//! - [`classical`]: closed-form and game-tree classical baselines used as
//!   oracles;
//! - [`analysis`]: best responses, pure Nash enumeration, phase-landscape and
//!   maximin searches, and the strategy-region sweeps.
//!
//! The `qnuel` binary exposes all of this on the command line.

pub mod analysis;
pub mod classical;
pub mod config;
pub mod engine;
pub mod operators;
pub mod qstate;
pub mod trajectory;

use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid player count {0} (need 2..={max})", max = qstate::MAX_PLAYERS)]
    InvalidPlayerCount(usize),
    #[error("invalid player index {player} for {n_players} players")]
    InvalidPlayer { player: usize, n_players: usize },
    #[error("shooter {0} cannot target itself")]
    SelfTarget(usize),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("dimension mismatch: operator on {op} players, state on {state}")]
    ShapeMismatch { op: usize, state: usize },
    #[error("invalid strategy profile: {0}")]
    ProfileError(String),
    #[error("invalid mixture weights: {0}")]
    WeightError(String),
    #[error("invalid game configuration: {0}")]
    ConfigError(String),
    #[error("marksmanship ordering violated: {0}")]
    OrderingError(String),
    #[error("search space too large: {0}")]
    SizeError(String),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),
    #[error("angle {0} outside expected range")]
    InvalidAngle(f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
