//! Parametrised firing unitaries.
//!
//! A shot by an alive shooter rotates the target's liveness qubit:
//!
//! ```text
//! |11⟩ → e^{-iα} cos(θ/2) |11⟩ + i e^{iβ}  sin(θ/2) |10⟩
//! |10⟩ → e^{iα}  cos(θ/2) |10⟩ + i e^{-iβ} sin(θ/2) |11⟩
//! ```
//!
//! (shooter bit first), while every basis state with the shooter dead is left
//! untouched, as are all spectator qubits. Firing into the air is the exact
//! identity. θ ∈ [0, π] fixes the marksmanship — the hit probability is
//! sin²(θ/2) — and α, β ∈ [-π, π] are free phases.
//!
//! Operators are stored structurally (shooter, target, parameters) and
//! applied in O(2ⁿ) by index arithmetic; [`FiringOp::dense`] materialises the
//! full matrix for validation only.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::qstate::{check_player, player_mask, DensityMatrix, StateVector};
use crate::{Error, Result};

/// A player's shooting skill, canonically the rotation angle θ ∈ [0, π].
///
/// The miss probability is a = cos²(θ/2) and the hit probability
/// ā = 1 − a = sin²(θ/2). Constructors accept either θ or a probability
/// (θ = 2·arccos(√a)). A perfect shot has θ = π; θ = 0 never hits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marksmanship {
    theta: f64,
}

impl Marksmanship {
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidAngle(theta));
        }
        Ok(Self { theta })
    }

    /// From the miss probability a = cos²(θ/2).
    pub fn from_miss_prob(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidProbability(a));
        }
        Ok(Self {
            theta: 2.0 * a.sqrt().acos(),
        })
    }

    /// From the hit probability ā = sin²(θ/2).
    pub fn from_hit_prob(hit: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&hit) {
            return Err(Error::InvalidProbability(hit));
        }
        Self::from_miss_prob(1.0 - hit)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn miss_prob(&self) -> f64 {
        let c = (self.theta / 2.0).cos();
        c * c
    }

    pub fn hit_prob(&self) -> f64 {
        let s = (self.theta / 2.0).sin();
        s * s
    }
}

/// The free phases (α, β) of a firing operator, normalised into [-π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    alpha: f64,
    beta: f64,
}

/// Wrap an angle into (-π, π]; values already in [-π, π] are kept as given.
fn wrap_angle(x: f64) -> f64 {
    if (-PI..=PI).contains(&x) {
        return x;
    }
    let y = (x + PI).rem_euclid(2.0 * PI);
    if y == 0.0 {
        PI
    } else {
        y - PI
    }
}

impl PhaseParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
        }
    }

    pub fn zero() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Shot {
    shooter: usize,
    target: usize,
    marksmanship: Marksmanship,
    phases: PhaseParams,
}

/// A firing unitary on an n-player state: either a genuine shot or the
/// fire-in-air identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiringOp {
    n_players: usize,
    shot: Option<Shot>,
}

/// Construct the controlled-flip unitary for `shooter` firing at `target`.
pub fn build_firing_op(
    n_players: usize,
    shooter: usize,
    target: usize,
    m: Marksmanship,
    ph: PhaseParams,
) -> Result<FiringOp> {
    check_player(n_players, shooter)?;
    check_player(n_players, target)?;
    if shooter == target {
        return Err(Error::SelfTarget(shooter));
    }
    Ok(FiringOp {
        n_players,
        shot: Some(Shot {
            shooter,
            target,
            marksmanship: m,
            phases: ph,
        }),
    })
}

/// The abstain action: the exact identity on the full space.
pub fn fire_in_air(n_players: usize) -> FiringOp {
    FiringOp {
        n_players,
        shot: None,
    }
}

/// Apply `op` to a state, returning the new state. Only amplitudes with the
/// shooter bit set mix, and only across the target bit.
pub fn apply(op: &FiringOp, s: &StateVector) -> Result<StateVector> {
    if op.n_players != s.n_players() {
        return Err(Error::ShapeMismatch {
            op: op.n_players,
            state: s.n_players(),
        });
    }
    let mut out = s.clone();
    op.apply_in_place(out.amplitudes_mut());
    Ok(out)
}

/// Conjugation ρ → U ρ U†; trace and Hermiticity are preserved.
pub fn apply_to_density(op: &FiringOp, r: &DensityMatrix) -> Result<DensityMatrix> {
    if op.n_players != r.n_players() {
        return Err(Error::ShapeMismatch {
            op: op.n_players,
            state: r.n_players(),
        });
    }
    let dim = r.dim();
    let mut out = r.clone();
    let entries = out.entries_mut();
    // M = U ρ: transform each column.
    let mut col = vec![Complex64::ZERO; dim];
    for j in 0..dim {
        for i in 0..dim {
            col[i] = entries[i * dim + j];
        }
        op.apply_kernel(&mut col, false);
        for i in 0..dim {
            entries[i * dim + j] = col[i];
        }
    }
    // ρ' = M U†: transform each row by the conjugated kernel.
    for i in 0..dim {
        op.apply_kernel(&mut entries[i * dim..(i + 1) * dim], true);
    }
    Ok(out)
}

impl FiringOp {
    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn is_identity(&self) -> bool {
        self.shot.is_none()
    }

    pub fn shooter(&self) -> Option<usize> {
        self.shot.map(|s| s.shooter)
    }

    pub fn target(&self) -> Option<usize> {
        self.shot.map(|s| s.target)
    }

    /// In-place application to a raw amplitude slice (length 2ⁿ). This is the
    /// O(2ⁿ) hot path used by the engine and the Monte Carlo sampler.
    pub fn apply_in_place(&self, amps: &mut [Complex64]) {
        self.apply_kernel(amps, false);
    }

    fn apply_kernel(&self, amps: &mut [Complex64], conjugate: bool) {
        let Some(shot) = self.shot else {
            return;
        };
        let c = (shot.marksmanship.theta / 2.0).cos();
        let s = (shot.marksmanship.theta / 2.0).sin();
        let i_unit = Complex64::new(0.0, 1.0);
        // Coefficients of the two-state block in the (target-alive,
        // target-dead) pair, shooter alive:
        //   alive' = u_aa·alive + u_ad·dead
        //   dead'  = u_da·alive + u_dd·dead
        let mut u_aa = Complex64::from_polar(c, -shot.phases.alpha);
        let mut u_ad = i_unit * Complex64::from_polar(s, -shot.phases.beta);
        let mut u_da = i_unit * Complex64::from_polar(s, shot.phases.beta);
        let mut u_dd = Complex64::from_polar(c, shot.phases.alpha);
        if conjugate {
            u_aa = u_aa.conj();
            u_ad = u_ad.conj();
            u_da = u_da.conj();
            u_dd = u_dd.conj();
        }
        let shooter_mask = player_mask(self.n_players, shot.shooter);
        let target_mask = player_mask(self.n_players, shot.target);
        for idx in 0..amps.len() {
            // Visit each (alive, dead) pair once, via its target-alive member.
            if idx & shooter_mask != 0 && idx & target_mask != 0 {
                let dead_idx = idx ^ target_mask;
                let alive = amps[idx];
                let dead = amps[dead_idx];
                amps[idx] = u_aa * alive + u_ad * dead;
                amps[dead_idx] = u_da * alive + u_dd * dead;
            }
        }
    }

    /// Dense 2ⁿ×2ⁿ matrix (row-major), for validation only.
    pub fn dense(&self) -> Vec<Complex64> {
        let dim = 1 << self.n_players;
        let mut m = vec![Complex64::ZERO; dim * dim];
        let mut col = vec![Complex64::ZERO; dim];
        for j in 0..dim {
            col.fill(Complex64::ZERO);
            col[j] = Complex64::ONE;
            self.apply_in_place(&mut col);
            for i in 0..dim {
                m[i * dim + j] = col[i];
            }
        }
        m
    }
}
