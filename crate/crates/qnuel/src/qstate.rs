//! State vectors and density matrices over the player-liveness basis.
//!
//! An *n*-player game lives in a 2ⁿ-dimensional Hilbert space. Basis index
//! bits are read with player 1 in the most significant position, so for
//! three players the ket |110⟩ (Alice and Bob alive, Charles dead) is index
//! `0b110 = 6`. This makes paper-style ket labels directly index-readable.
//!
//! Everything here is immutable after construction; operations are pure
//! functions returning new values, so independent states can be evaluated
//! concurrently without shared mutable state.

use num_complex::Complex64;

use crate::{Error, Result};

/// Hard cap on the dense representation. The games of interest have
/// n ∈ {2, 3}; anything above ~10 players is impractical but still allowed
/// up to this bound.
pub const MAX_PLAYERS: usize = 16;

/// Tolerance for algebraic identities (normalisation, Hermiticity, trace).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for values propagated through multi-round evolution.
pub const EVOLUTION_TOL: f64 = 1e-9;

/// Threshold on the smallest eigenvalue in positive-semidefiniteness checks.
pub const PSD_TOL: f64 = -1e-10;

/// Bit mask selecting `player` (1-based) in a basis index.
#[inline]
pub fn player_mask(n_players: usize, player: usize) -> usize {
    debug_assert!(player >= 1 && player <= n_players);
    1 << (n_players - player)
}

fn check_player_count(n: usize) -> Result<()> {
    if n < 2 || n > MAX_PLAYERS {
        return Err(Error::InvalidPlayerCount(n));
    }
    Ok(())
}

pub(crate) fn check_player(n_players: usize, player: usize) -> Result<()> {
    if player < 1 || player > n_players {
        return Err(Error::InvalidPlayer { player, n_players });
    }
    Ok(())
}

/// One liveness word: bit of player k (MSB = player 1) is 1 iff k is alive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    n_players: usize,
    index: usize,
}

impl BasisState {
    pub fn new(n_players: usize, index: usize) -> Result<Self> {
        check_player_count(n_players)?;
        if index >= 1 << n_players {
            return Err(Error::InvalidPlayer {
                player: index,
                n_players,
            });
        }
        Ok(Self { n_players, index })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn alive(&self, player: usize) -> bool {
        self.index & player_mask(self.n_players, player) != 0
    }

    pub fn count_alive(&self) -> usize {
        self.index.count_ones() as usize
    }
}

impl std::fmt::Display for BasisState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for p in 1..=self.n_players {
            write!(f, "{}", if self.alive(p) { '1' } else { '0' })?;
        }
        write!(f, "⟩")
    }
}

/// A measurement result: a liveness word together with its probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOutcome {
    pub state: BasisState,
    pub probability: f64,
}

/// Dense complex state vector over 2ⁿ liveness basis states.
///
/// Invariant: Σ|amplitude|² = 1 within [`ALGEBRAIC_TOL`] after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_players: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-alive initial state |1…1⟩.
    pub fn all_alive(n_players: usize) -> Result<Self> {
        Self::basis(n_players, (1 << n_players) - 1)
    }

    /// A single computational basis state.
    pub fn basis(n_players: usize, index: usize) -> Result<Self> {
        check_player_count(n_players)?;
        let dim = 1 << n_players;
        if index >= dim {
            return Err(Error::InvalidPlayer {
                player: index,
                n_players,
            });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { n_players, amps })
    }

    /// Build a state from raw amplitudes. The vector must be normalised to
    /// within 1e-6; it is then renormalised exactly. The game protocol only
    /// ever starts from [`StateVector::all_alive`], but arbitrary states are
    /// accepted for testing.
    pub fn from_amplitudes(n_players: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_player_count(n_players)?;
        if amps.len() != 1 << n_players {
            return Err(Error::ShapeMismatch {
                op: n_players,
                state: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::ConfigError(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_players, amps })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |⟨basis_index|ψ⟩|².
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Marginal probability that `player` is alive.
    pub fn alive_probability(&self, player: usize) -> f64 {
        let mask = player_mask(self.n_players, player);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// The full measurement distribution. Probabilities sum to 1 within
    /// [`ALGEBRAIC_TOL`] for any reachable state.
    pub fn measure_probabilities(&self) -> Vec<BasisOutcome> {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| BasisOutcome {
                state: BasisState {
                    n_players: self.n_players,
                    index: i,
                },
                probability: a.norm_sqr(),
            })
            .collect()
    }

    /// Rank-1 projector ρ = |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix {
            n_players: self.n_players,
            entries,
        }
    }
}

/// Dense 2ⁿ×2ⁿ Hermitian density operator (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_players: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(n_players: usize) -> Result<Self> {
        check_player_count(n_players)?;
        let dim = 1 << n_players;
        Ok(Self {
            n_players,
            entries: vec![Complex64::ZERO; dim * dim],
        })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn dim(&self) -> usize {
        1 << self.n_players
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// ρ += w·σ, used to accumulate mixtures of pure plays.
    pub fn add_scaled(&mut self, other: &DensityMatrix, weight: f64) -> Result<()> {
        if other.n_players != self.n_players {
            return Err(Error::ShapeMismatch {
                op: other.n_players,
                state: self.n_players,
            });
        }
        for (e, o) in self.entries.iter_mut().zip(&other.entries) {
            *e += weight * o;
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// The diagonal as real probabilities.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).collect()
    }

    /// The measurement distribution of the mixed state.
    pub fn measure_probabilities(&self) -> Vec<BasisOutcome> {
        self.diagonal_probabilities()
            .into_iter()
            .enumerate()
            .map(|(i, probability)| BasisOutcome {
                state: BasisState {
                    n_players: self.n_players,
                    index: i,
                },
                probability,
            })
            .collect()
    }

    /// Partial decoherence channel ρ → (1−p)ρ + p·diag(ρ).
    ///
    /// `p = 0` is the identity, `p = 1` the full-measurement limit; the map
    /// is affine in `p`, preserves the trace and Hermiticity.
    pub fn decohere(&self, p: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let dim = self.dim();
        let mut out = self.clone();
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    out.entries[i * dim + j] *= 1.0 - p;
                }
            }
        }
        Ok(out)
    }

    /// Debug/validation check: Hermitian and unit trace within
    /// [`ALGEBRAIC_TOL`], smallest eigenvalue above [`PSD_TOL`]. Too costly
    /// for use inside sweeps; intended for tests and assertions.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let d = self.entries[i * dim + j] - self.entries[j * dim + i].conj();
                if d.norm() > ALGEBRAIC_TOL {
                    return Err(Error::ConfigError(format!(
                        "density matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > ALGEBRAIC_TOL || tr.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::ConfigError(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&self.entries, dim)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::ConfigError(format!(
                "density matrix has eigenvalue {min_eig} below {PSD_TOL}"
            )));
        }
        Ok(())
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Only used in validation paths, so a plain O(dim³) sweep implementation is
/// enough (dim ≤ 2¹⁰ in practice, ≤ 8 in the games under study).
pub(crate) fn hermitian_eigenvalues(entries: &[Complex64], dim: usize) -> Vec<f64> {
    let mut m = entries.to_vec();
    let at = |m: &[Complex64], i: usize, j: usize| m[i * dim + j];
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                off += at(&m, i, j).norm_sqr();
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = at(&m, p, q);
                if apq.norm() < 1e-300 {
                    continue;
                }
                // Phase rotation making the pivot real, then a real Jacobi
                // rotation zeroing it.
                let phase = apq / apq.norm();
                let app = at(&m, p, p).re;
                let aqq = at(&m, q, q).re;
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // Column/row updates for the unitary R with
                // R[p,p]=c, R[p,q]=-s·phase, R[q,p]=s·conj(phase), R[q,q]=c.
                for k in 0..dim {
                    let mkp = at(&m, k, p);
                    let mkq = at(&m, k, q);
                    m[k * dim + p] = c * mkp + s * phase.conj() * mkq;
                    m[k * dim + q] = -s * phase * mkp + c * mkq;
                }
                for k in 0..dim {
                    let mpk = at(&m, p, k);
                    let mqk = at(&m, q, k);
                    m[p * dim + k] = c * mpk + s * phase * mqk;
                    m[q * dim + k] = -s * phase.conj() * mpk + c * mqk;
                }
            }
        }
    }
    (0..dim).map(|i| at(&m, i, i).re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn all_alive_places_unit_amplitude_on_all_ones() {
        let s = StateVector::all_alive(2).unwrap();
        assert_eq!(s.amplitudes(), &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);

        let s = StateVector::all_alive(3).unwrap();
        assert_eq!(s.amplitude(7), Complex64::ONE);
        assert_eq!(s.probability(7), 1.0);

        let s = StateVector::all_alive(4).unwrap();
        assert!((s.norm() - 1.0).abs() < ALGEBRAIC_TOL);
        assert_eq!(
            s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(),
            1
        );
    }

    #[test]
    fn all_alive_rejects_bad_player_counts() {
        assert!(matches!(
            StateVector::all_alive(1),
            Err(Error::InvalidPlayerCount(1))
        ));
        assert!(StateVector::all_alive(MAX_PLAYERS + 1).is_err());
    }

    #[test]
    fn measure_probabilities_on_basis_and_superposition() {
        let outcomes = StateVector::all_alive(3).unwrap().measure_probabilities();
        assert!((outcomes[7].probability - 1.0).abs() < ALGEBRAIC_TOL);
        assert_eq!(outcomes[7].state.to_string(), "|111⟩");

        let inv = 1.0 / 2.0_f64.sqrt();
        let s = StateVector::from_amplitudes(
            2,
            vec![c(0., 0.), c(inv, 0.), c(inv, 0.), c(0., 0.)],
        )
        .unwrap();
        let p = s.measure_probabilities();
        assert!((p[0b01].probability - 0.5).abs() < ALGEBRAIC_TOL);
        assert!((p[0b10].probability - 0.5).abs() < ALGEBRAIC_TOL);
        let total: f64 = p.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < ALGEBRAIC_TOL);
    }

    #[test]
    fn to_density_of_all_alive_and_bell_like_state() {
        let r = StateVector::all_alive(2).unwrap().to_density();
        assert_eq!(r.entry(3, 3), Complex64::ONE);
        assert_eq!(r.entry(0, 0), Complex64::ZERO);
        r.validate().unwrap();

        let inv = 1.0 / 2.0_f64.sqrt();
        let s = StateVector::from_amplitudes(
            2,
            vec![c(0., 0.), c(inv, 0.), c(inv, 0.), c(0., 0.)],
        )
        .unwrap();
        let r = s.to_density();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((r.entry(i, j) - c(0.5, 0.)).norm() < ALGEBRAIC_TOL);
        }
        r.validate().unwrap();
    }

    #[test]
    fn decohere_identity_and_full_limits() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let s = StateVector::from_amplitudes(
            2,
            vec![c(0., 0.), c(inv, 0.), c(0., inv), c(0., 0.)],
        )
        .unwrap();
        let r = s.to_density();

        let r0 = r.decohere(0.0).unwrap();
        assert_eq!(r0, r);

        let r1 = r.decohere(1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    assert_eq!(r1.entry(i, j), r.entry(i, j));
                } else {
                    assert_eq!(r1.entry(i, j), Complex64::ZERO);
                }
            }
        }
        r1.validate().unwrap();

        assert!(matches!(
            r.decohere(1.5),
            Err(Error::InvalidProbability(_))
        ));
        assert!(r.decohere(-0.1).is_err());
    }

    #[test]
    fn decohere_is_affine_in_p() {
        let inv = 1.0 / 3.0_f64.sqrt();
        let s = StateVector::from_amplitudes(
            2,
            vec![c(0., 0.), c(inv, 0.), c(0., inv), c(inv, 0.)],
        )
        .unwrap();
        let r = s.to_density();
        let (ra, rb, rc) = (
            r.decohere(0.2).unwrap(),
            r.decohere(0.5).unwrap(),
            r.decohere(0.8).unwrap(),
        );
        // 0.5 is the midpoint of 0.2 and 0.8.
        for i in 0..16 {
            let mid = 0.5 * (ra.entries()[i] + rc.entries()[i]);
            assert!((mid - rb.entries()[i]).norm() < ALGEBRAIC_TOL);
        }
    }

    #[test]
    fn jacobi_eigenvalues_match_known_matrix() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = vec![c(2., 0.), c(0., 1.), c(0., -1.), c(2., 0.)];
        let mut eigs = hermitian_eigenvalues(&m, 2);
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 1.0).abs() < 1e-10);
        assert!((eigs[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn basis_state_display_and_liveness() {
        let b = BasisState::new(3, 0b110).unwrap();
        assert!(b.alive(1) && b.alive(2) && !b.alive(3));
        assert_eq!(b.count_alive(), 2);
        assert_eq!(b.to_string(), "|110⟩");
    }
}
