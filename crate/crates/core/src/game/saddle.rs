//! Spot check of the saddle inequalities against random opponents.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::Distribution1D;
use crate::error::Result;
use crate::rational::{to_f64, Q};

use super::payoff::{payoff_unchecked, PayoffOutcome};
use super::sampling::random_strategy;
use super::solve::RPrimeSolution;
use super::GameSpec;

#[derive(Clone, Debug, Serialize)]
pub struct SaddleReport {
    pub samples: usize,
    /// `min ρ(v1*, v2) − value` over the sampled `v2`.
    pub min_margin_player1: f64,
    /// `min value − ρ(v1, v2*)` over the sampled `v1`.
    pub min_margin_player2: f64,
    /// Samples whose payoff against the solution depends on the order of
    /// integration; they are not strategies and are skipped.
    pub order_dependent: usize,
    pub pass: bool,
}

fn margin(o: PayoffOutcome, f: impl Fn(&Q) -> Q) -> Option<Q> {
    o.value().map(f)
}

/// Draw `n_samples` opponents for each side from a ChaCha8 stream seeded by
/// `seed` and check both saddle inequalities exactly.
pub fn saddle_verify(game: &GameSpec, sol: &RPrimeSolution, n_samples: usize, seed: u64) -> Result<SaddleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m1: Option<Q> = None;
    let mut m2: Option<Q> = None;
    let mut skipped = 0;
    let keep_min = |slot: &mut Option<Q>, v: Q| {
        if slot.as_ref().is_none_or(|s| v < *s) {
            *slot = Some(v);
        }
    };
    for _ in 0..n_samples {
        let v2: Distribution1D = random_strategy(&mut rng, game.omega2(), game.x2());
        let v1: Distribution1D = random_strategy(&mut rng, game.omega1(), game.x1());
        match margin(payoff_unchecked(game, &sol.atom1, &v2)?, |p| p - &sol.value) {
            Some(m) => keep_min(&mut m1, m),
            None => skipped += 1,
        }
        match margin(payoff_unchecked(game, &v1, &sol.atom2)?, |p| &sol.value - p) {
            Some(m) => keep_min(&mut m2, m),
            None => skipped += 1,
        }
    }
    let f = |m: &Option<Q>| m.as_ref().map_or(f64::INFINITY, to_f64);
    let (min1, min2) = (f(&m1), f(&m2));
    Ok(SaddleReport {
        samples: n_samples,
        min_margin_player1: min1,
        min_margin_player2: min2,
        order_dependent: skipped,
        pass: min1 >= -1e-9 && min2 >= -1e-9,
    })
}
