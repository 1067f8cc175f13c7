//! Seeded random strategies: piecewise-constant probability densities and
//! single one-sided atoms on a strategy interval.

use num_traits::{One, Zero};
use rand::Rng;

use crate::distributions::Distribution1D;
use crate::rational::{q, qi, Q};
use crate::regulated1d::{Interval, PiecewiseFn1D};

/// Positions are drawn on a grid of this many steps across the interval.
const STEPS: i64 = 1024;

fn grid_point<R: Rng>(rng: &mut R, x: &Interval) -> Q {
    x.lo() + x.width() * q(rng.gen_range(1..STEPS), STEPS)
}

/// Density `c` on `(a, b) ⊂ X`, zero elsewhere on `omega`, with unit mass.
pub fn uniform_on(omega: &Interval, a: &Q, b: &Q) -> Distribution1D {
    let g = PiecewiseFn1D::indicator(omega.clone(), a, b).expect("interval inside omega");
    Distribution1D::regular(g.scale(&(Q::one() / (b - a))))
}

/// Random step density on `X` with up to six cells and integer weights.
pub fn random_density<R: Rng>(rng: &mut R, omega: &Interval, x: &Interval) -> Distribution1D {
    let cells = rng.gen_range(1..=6usize);
    let mut cuts: Vec<Q> = (1..cells).map(|_| grid_point(rng, x)).collect();
    cuts.push(x.lo().clone());
    cuts.push(x.hi().clone());
    cuts.sort();
    cuts.dedup();
    let mut weights: Vec<i64> = (0..cuts.len() - 1).map(|_| rng.gen_range(0..10)).collect();
    if weights.iter().all(|w| *w == 0) {
        weights[0] = 1;
    }
    let mass: Q = cuts.windows(2).zip(&weights).map(|(w, k)| (&w[1] - &w[0]) * qi(*k)).sum();
    let mut g = PiecewiseFn1D::zero(omega.clone());
    for (w, k) in cuts.windows(2).zip(&weights) {
        let cell = PiecewiseFn1D::indicator(omega.clone(), &w[0], &w[1]).expect("cell inside omega");
        g = g.add(&cell.scale(&(qi(*k) / &mass))).expect("same domain");
    }
    Distribution1D::regular(g)
}

/// Single atom at a random point of `X` with `β` in `{0, 1/8, ..., 1}`.
pub fn random_atom<R: Rng>(rng: &mut R, omega: &Interval, x: &Interval) -> Distribution1D {
    let p = grid_point(rng, x);
    let beta = q(rng.gen_range(0..=8), 8);
    Distribution1D::delta(omega.clone(), p, beta).expect("atom inside omega")
}

/// A density, an atom, or a convex mixture of both.
pub fn random_strategy<R: Rng>(rng: &mut R, omega: &Interval, x: &Interval) -> Distribution1D {
    match rng.gen_range(0..3) {
        0 => random_density(rng, omega, x),
        1 => random_atom(rng, omega, x),
        _ => {
            let lam = q(rng.gen_range(1..8), 8);
            let d = random_density(rng, omega, x);
            let a = random_atom(rng, omega, x);
            d.scale(&lam).add(&a.scale(&(Q::one() - &lam))).expect("same domain")
        }
    }
}

/// Total mass on `X`; one for every strategy drawn here.
pub fn mass_on(v: &Distribution1D, x: &Interval) -> Q {
    v.integrate(x.lo(), x.hi()).unwrap_or_else(|_| Q::zero())
}
