//! Game-definition and strategy-profile files (TOML), plus the number
//! parsing shared with the CLI: every numeric field accepts either a decimal
//! or an exact rational like `"2/3"`.
//!
//! A game file names the players implicitly by position (player 1 first) and
//! must give exactly one marksmanship form:
//!
//! ```toml
//! rounds = 2
//! miss = ["2/3", "1/3", "0"]      # or hit = [...] or theta = [...]
//! alpha = [0, 0, 0]               # optional, default 0
//! beta = [0, 0, 0]                # optional, default 0
//! utilities = ["1", "1/2", "1/3"] # optional, default 1/k
//! firing_order = [1, 2, 3]        # optional, default 1..n
//! ```
//!
//! A profile file lists per-player action strings, one list per player, one
//! entry per round; actions are `"air"`, a player letter (`"A"`, `"B"`, …)
//! or a 1-based player index:
//!
//! ```toml
//! strategies = [["air", "B"], ["C", "A"], ["B", "A"]]
//! ```

use serde::Deserialize;
use std::path::Path;

use crate::engine::{Action, GameConfig, StrategyProfile};
use crate::operators::{Marksmanship, PhaseParams};
use crate::{Error, Result};

/// A TOML value that is either a number or a string holding a decimal or an
/// exact rational `p/q`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrStr {
    Num(f64),
    Str(String),
}

impl NumOrStr {
    fn value(&self) -> Result<f64> {
        match self {
            NumOrStr::Num(v) => Ok(*v),
            NumOrStr::Str(s) => parse_number(s),
        }
    }

    fn is_rational_literal(&self) -> bool {
        match self {
            NumOrStr::Num(v) => v.fract() == 0.0,
            NumOrStr::Str(s) => {
                s.contains('/') || s.trim().parse::<i64>().is_ok()
            }
        }
    }
}

/// Parse `"p/q"` (exactly, as a quotient of integers) or a decimal literal.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let p: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::ConfigError(format!("bad rational {t:?}")))?;
        let q: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::ConfigError(format!("bad rational {t:?}")))?;
        if q == 0 {
            return Err(Error::ConfigError(format!("zero denominator in {t:?}")));
        }
        return Ok(p as f64 / q as f64);
    }
    t.parse()
        .map_err(|_| Error::ConfigError(format!("bad number {t:?}")))
}

/// Best small-denominator fraction for `x` by continued-fraction convergents.
/// Returns the first convergent within `tol`, if any has denominator ≤
/// `max_denominator`.
pub fn approximate_fraction(x: f64, max_denominator: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut rem = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0u64, rem.floor() as i64, 1u64);
    for _ in 0..64 {
        let p = if negative { -p1 } else { p1 };
        if (x - p as f64 / q1 as f64).abs() <= tol {
            return Some((p, q1));
        }
        let frac = rem - rem.floor();
        if frac <= f64::EPSILON {
            break;
        }
        rem = 1.0 / frac;
        let a = rem.floor() as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as u64).checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_denominator {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameConfigFile {
    players: Option<usize>,
    rounds: usize,
    hit: Option<Vec<NumOrStr>>,
    miss: Option<Vec<NumOrStr>>,
    theta: Option<Vec<NumOrStr>>,
    alpha: Option<Vec<NumOrStr>>,
    beta: Option<Vec<NumOrStr>>,
    utilities: Option<Vec<NumOrStr>>,
    firing_order: Option<Vec<usize>>,
}

/// A parsed game file, remembering whether every numeric input was given as
/// an exact rational (which lets the CLI print fraction-form payoffs).
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub cfg: GameConfig,
    pub rational_inputs: bool,
}

pub fn parse_game_config(text: &str) -> Result<LoadedConfig> {
    let file: GameConfigFile =
        toml::from_str(text).map_err(|e| Error::ConfigError(format!("config: {e}")))?;
    let forms = [
        file.hit.is_some(),
        file.miss.is_some(),
        file.theta.is_some(),
    ];
    if forms.iter().filter(|f| **f).count() != 1 {
        return Err(Error::ConfigError(
            "give exactly one of hit, miss or theta".into(),
        ));
    }
    let mut rational = true;
    let mut nums = |list: &Option<Vec<NumOrStr>>| -> Result<Option<Vec<f64>>> {
        match list {
            None => Ok(None),
            Some(items) => {
                rational &= items.iter().all(NumOrStr::is_rational_literal);
                Ok(Some(
                    items.iter().map(NumOrStr::value).collect::<Result<_>>()?,
                ))
            }
        }
    };
    let hit = nums(&file.hit)?;
    let miss = nums(&file.miss)?;
    let theta = nums(&file.theta)?;
    let alpha = nums(&file.alpha)?;
    let beta = nums(&file.beta)?;
    let utilities = nums(&file.utilities)?;
    // Phase inputs are angles; they do not affect fraction output.
    let rational_inputs = rational;

    let marks: Vec<Marksmanship> = if let Some(h) = &hit {
        h.iter()
            .map(|&v| Marksmanship::from_hit_prob(v))
            .collect::<Result<_>>()?
    } else if let Some(m) = &miss {
        m.iter()
            .map(|&v| Marksmanship::from_miss_prob(v))
            .collect::<Result<_>>()?
    } else {
        theta
            .as_ref()
            .unwrap()
            .iter()
            .map(|&v| Marksmanship::from_theta(v))
            .collect::<Result<_>>()?
    };
    let n = marks.len();
    if let Some(p) = file.players {
        if p != n {
            return Err(Error::ConfigError(format!(
                "players = {p} but {n} marksmanship entries"
            )));
        }
    }
    let mut cfg = GameConfig::new(marks, file.rounds)?;
    let zeros = vec![0.0; n];
    let alphas = alpha.unwrap_or_else(|| zeros.clone());
    let betas = beta.unwrap_or(zeros);
    if alphas.len() != n || betas.len() != n {
        return Err(Error::ConfigError("one alpha/beta per player".into()));
    }
    cfg = cfg.with_phases(
        alphas
            .iter()
            .zip(&betas)
            .map(|(&a, &b)| PhaseParams::new(a, b))
            .collect(),
    )?;
    if let Some(u) = utilities {
        cfg = cfg.with_utilities(u)?;
    }
    if let Some(order) = file.firing_order {
        cfg = cfg.with_firing_order(order)?;
    }
    Ok(LoadedConfig {
        cfg,
        rational_inputs,
    })
}

pub fn load_game_config(path: &Path) -> Result<LoadedConfig> {
    parse_game_config(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    strategies: Vec<Vec<String>>,
}

/// Parse one action token: `air`, a letter (`A` = player 1), or an index.
pub fn parse_action(token: &str, n_players: usize) -> Result<Action> {
    let t = token.trim();
    if t.eq_ignore_ascii_case("air") || t == "-" {
        return Ok(Action::FireInAir);
    }
    let target = if t.len() == 1 && t.chars().next().unwrap().is_ascii_alphabetic() {
        let c = t.chars().next().unwrap().to_ascii_uppercase();
        (c as usize) - ('A' as usize) + 1
    } else {
        t.parse::<usize>()
            .map_err(|_| Error::ProfileError(format!("bad action {token:?}")))?
    };
    if target < 1 || target > n_players {
        return Err(Error::ProfileError(format!(
            "target {token:?} outside 1..{n_players}"
        )));
    }
    Ok(Action::FireAt(target))
}

pub fn parse_profile(text: &str, cfg: &GameConfig) -> Result<StrategyProfile> {
    let file: ProfileFile =
        toml::from_str(text).map_err(|e| Error::ProfileError(format!("profile: {e}")))?;
    let actions = file
        .strategies
        .iter()
        .map(|row| {
            row.iter()
                .map(|tok| parse_action(tok, cfg.n_players()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let prof = StrategyProfile::new(actions);
    prof.validate(cfg)?;
    Ok(prof)
}

pub fn load_profile(path: &Path, cfg: &GameConfig) -> Result<StrategyProfile> {
    parse_profile(&std::fs::read_to_string(path)?, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_and_decimal_numbers_parse() {
        assert_eq!(parse_number("2/3").unwrap(), 2.0 / 3.0);
        assert_eq!(parse_number(" 1 / 2 ").unwrap(), 0.5);
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("abc").is_err());
    }

    #[test]
    fn fractions_are_recovered_from_floats() {
        assert_eq!(approximate_fraction(52.0 / 162.0, 1_000_000, 1e-9), Some((26, 81)));
        assert_eq!(approximate_fraction(25.0 / 63.0, 1_000_000, 1e-9), Some((25, 63)));
        assert_eq!(approximate_fraction(0.5, 1_000_000, 1e-9), Some((1, 2)));
        assert_eq!(approximate_fraction(-0.75, 100, 1e-9), Some((-3, 4)));
        // Irrational values have no small-denominator representation.
        assert_eq!(
            approximate_fraction(std::f64::consts::SQRT_2 / 2.0, 1_000, 1e-12),
            None
        );
    }

    #[test]
    fn game_file_round_trips_the_worked_truel() {
        let text = r#"
            rounds = 2
            miss = ["2/3", "1/3", "0"]
            utilities = ["1", "1/2", "1/3"]
        "#;
        let loaded = parse_game_config(text).unwrap();
        assert!(loaded.rational_inputs);
        assert_eq!(loaded.cfg.n_players(), 3);
        assert!((loaded.cfg.marksmanship(1).miss_prob() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(loaded.cfg.utilities(), &[1.0, 0.5, 1.0 / 3.0]);

        let prof = parse_profile(
            r#"strategies = [["air", "B"], ["C", "A"], ["B", "A"]]"#,
            &loaded.cfg,
        )
        .unwrap();
        assert_eq!(prof.action(1, 1), Action::FireInAir);
        assert_eq!(prof.action(1, 2), Action::FireAt(2));
        assert_eq!(prof.action(3, 1), Action::FireAt(2));
    }

    #[test]
    fn marksmanship_forms_are_mutually_exclusive() {
        let both = r#"
            rounds = 1
            miss = ["0.5", "0.5"]
            hit = ["0.5", "0.5"]
        "#;
        assert!(parse_game_config(both).is_err());
        let neither = "rounds = 1";
        assert!(parse_game_config(neither).is_err());
    }

    #[test]
    fn hit_form_complements_miss_form() {
        let loaded = parse_game_config(
            r#"
            rounds = 1
            hit = ["1/3", "1/2"]
        "#,
        )
        .unwrap();
        assert!((loaded.cfg.marksmanship(1).miss_prob() - 2.0 / 3.0).abs() < 1e-12);
        assert!((loaded.cfg.marksmanship(2).hit_prob() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decimal_inputs_lose_the_rational_flag() {
        let loaded = parse_game_config(
            r#"
            rounds = 1
            miss = [0.66, 0.5]
        "#,
        )
        .unwrap();
        assert!(!loaded.rational_inputs);
    }

    #[test]
    fn profiles_are_validated_against_the_game() {
        let loaded = parse_game_config(
            r#"
            rounds = 2
            miss = ["1/2", "1/2"]
        "#,
        )
        .unwrap();
        // Wrong round count.
        assert!(parse_profile(r#"strategies = [["air"], ["A"]]"#, &loaded.cfg).is_err());
        // Self-target.
        assert!(
            parse_profile(r#"strategies = [["A", "B"], ["A", "A"]]"#, &loaded.cfg).is_err()
        );
        // Out-of-range letter.
        assert!(
            parse_profile(r#"strategies = [["C", "B"], ["A", "A"]]"#, &loaded.cfg).is_err()
        );
    }
}
