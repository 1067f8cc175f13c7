//! Property checks keyed by a seed. Each returns `Err` with a description
//! of the counterexample, so the same code backs the proptest suites and
//! the acceptance summary.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regudist::distributions::sequence::Scalar;
use regudist::game::sampling::random_strategy;
use regudist::game::{payoff_rprime, pure_analysis, solve_rprime, GameSpec, PayoffOutcome, SolveOutcome};
use regudist::rational::{format_rational, q};

use super::*;

pub type Check = std::result::Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(g f, φ) = (f, g φ)` on the line and in the plane.
pub fn product_identity(seed: u64) -> Check {
    let mut r = rng(seed);
    let (f, g, phi) = (dist1(&mut r), pw1(&mut r, 2), test_fn1(&mut r));
    let lhs = f.multiply(&g).unwrap().pair(&phi).unwrap();
    let rhs = f.pair(&g.mul(&phi).unwrap()).unwrap();
    if lhs != rhs {
        return Err(format!("line: {} != {}", format_rational(&lhs), format_rational(&rhs)));
    }
    let (f, g, phi) = (dist2(&mut r), pw2(&mut r), test_fn2(&mut r));
    let lhs = f.multiply(&g).unwrap().pair(&phi).unwrap();
    let rhs = f.pair(&g.mul(&phi).unwrap()).unwrap();
    if lhs != rhs {
        return Err(format!("plane: {} != {}", format_rational(&lhs), format_rational(&rhs)));
    }
    Ok(())
}

/// `(g h) f = g (h f)` as distributions.
pub fn associativity(seed: u64) -> Check {
    let mut r = rng(seed);
    let (f, g, h) = (dist1(&mut r), pw1(&mut r, 2), pw1(&mut r, 2));
    let lhs = f.multiply(&g.mul(&h).unwrap()).unwrap();
    let rhs = f.multiply(&h).unwrap().multiply(&g).unwrap();
    if lhs != rhs {
        return Err(format!("line: {lhs:?} != {rhs:?}"));
    }
    let (f, g, h) = (dist2(&mut r), pw2(&mut r), pw2(&mut r));
    let lhs = f.multiply(&g.mul(&h).unwrap()).unwrap();
    let rhs = f.multiply(&h).unwrap().multiply(&g).unwrap();
    if !lhs.equivalent(&rhs).unwrap() {
        return Err(format!("plane: {lhs:?} != {rhs:?}"));
    }
    Ok(())
}

fn solve(g: &GameSpec) -> SolveOutcome {
    solve_rprime(g, &[]).unwrap()
}

/// Adding `c ∈ [-5, 5]` moves the value by `c`; scaling by `λ > 0` scales
/// it; the atoms stay put in both cases.
pub fn equivariance(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = game(&mut r);
    let c = q(r.gen_range(-40..=40), 8);
    let lam = q(r.gen_range(1..=24), r.gen_range(1..=6));
    let base = solve(&g);
    let shifted = solve(&g.with_payoff(g.payoff().add_constant(&c)).unwrap());
    let scaled = solve(&g.with_payoff(g.payoff().scale(&lam)).unwrap());
    match (base.solution(), shifted.solution(), scaled.solution()) {
        (None, None, None) => Ok(()),
        (Some(b), Some(s), Some(l)) => {
            let same_atoms = |o: &regudist::game::RPrimeSolution| {
                o.point == b.point && o.beta1 == b.beta1 && o.beta2 == b.beta2
            };
            if !same_atoms(s) || s.value != &b.value + &c {
                return Err(format!("shift by {}: {:?} vs {:?}", format_rational(&c), s.point, b.point));
            }
            if !same_atoms(l) || l.value != &b.value * &lam {
                return Err(format!("scale by {}", format_rational(&lam)));
            }
            Ok(())
        }
        _ => Err("solvability changed under shift or scale".into()),
    }
}

/// `infsup - supinf ≥ 0` on the grid.
pub fn weak_duality(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = game(&mut r);
    let n = 2 * r.gen_range(1..=7) + 1;
    let a = pure_analysis(&g, n).map_err(|e| format!("grid {n}: {e}"))?;
    let ok = match &a.gap {
        Scalar::Exact(x) => !x.is_negative(),
        Scalar::Approx(x) => *x >= -1e-9,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("grid {n}: gap {}", a.gap))
    }
}

/// Both iterated integrals agree, except when the two atoms meet on a
/// slanted boundary line; then the pair is not a strategy pair and the
/// disagreement is the expected verdict.
pub fn order_independence(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = game(&mut r);
    let v1 = random_strategy(&mut r, g.omega1(), g.x1());
    let v2 = random_strategy(&mut r, g.omega2(), g.x2());
    match payoff_rprime(&g, &v1, &v2).unwrap() {
        PayoffOutcome::Defined { .. } => Ok(()),
        PayoffOutcome::OrderDependent { inner_x2_first, inner_x1_first } => {
            let explained = v1.atoms().iter().any(|a| {
                v2.atoms().iter().any(|b| on_slanted_line(g.payoff(), &a.p, &b.p))
            });
            if explained {
                Ok(())
            } else {
                Err(format!(
                    "{} vs {}",
                    format_rational(&inner_x2_first),
                    format_rational(&inner_x1_first)
                ))
            }
        }
    }
}

/// The closed-form pair evaluates to its reported value.
pub fn consistency(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = game(&mut r);
    let Some(s) = solve(&g).solution().cloned() else {
        return Ok(());
    };
    let v = payoff_rprime(&g, &s.atom1, &s.atom2).unwrap();
    match v.value() {
        Some(x) if *x == s.value => Ok(()),
        _ => Err(format!("{v:?} vs {}", format_rational(&s.value))),
    }
}

/// Run `check` on seeds `0..n`; the first failure wins.
pub fn sweep(n: u64, check: fn(u64) -> Check) -> std::result::Result<u64, (u64, String)> {
    for seed in 0..n {
        check(seed).map_err(|e| (seed, e))?;
    }
    Ok(n)
}
