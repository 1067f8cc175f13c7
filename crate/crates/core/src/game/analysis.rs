//! Diagnostics for the classical games: pure strategies on a grid, and
//! mixed strategies by fictitious play plus explicit witness strategies.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::sequence::Scalar;
use crate::distributions::Distribution1D;
use crate::error::{Error, Result};
use crate::rational::{q, qi, to_f64, Q};
use crate::regulated1d::{Interval, PiecewiseFn1D};
use crate::regulated2d::{Axis, PiecewiseFn2D, Side};

use super::payoff::{inner_integral, payoff_unchecked};
use super::sampling::{random_density, uniform_on};
use super::GameSpec;

#[derive(Clone, Debug, Serialize)]
pub struct PureAnalysis {
    pub grid_n: usize,
    /// `max_i inf_{x2} ρ(x1_i, x2)`.
    pub supinf: Scalar,
    /// `min_j sup_{x1} ρ(x1, x2_j)`.
    pub infsup: Scalar,
    pub gap: Scalar,
    /// Grid coordinates dropped because they lie on the discontinuity set.
    pub excluded_x1: Vec<String>,
    pub excluded_x2: Vec<String>,
}

/// Cell centres of a uniform `n`-grid on `x`.
fn centres(x: &Interval, n: usize) -> Vec<Q> {
    let n = n as i64;
    (0..n).map(|i| x.lo() + x.width() * q(2 * i + 1, 2 * n)).collect()
}

/// Coordinates along `axis` where the discontinuity set is not crossed
/// transversally by the grid line: lines parallel to the grid line and
/// vertices of the arrangement.
fn singular_coordinates(rho: &PiecewiseFn2D, axis: Axis) -> BTreeSet<Q> {
    let lines: Vec<_> = rho.lines().into_iter().collect();
    let mut out = BTreeSet::new();
    for l in &lines {
        match axis {
            Axis::X1 if l.is_vertical() => {
                out.insert(l.vertical_x().expect("vertical"));
            }
            Axis::X2 if l.is_horizontal() => {
                out.insert(&l.c / &l.b);
            }
            _ => {}
        }
    }
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if let Some(p) = lines[i].intersect(&lines[j]) {
                out.insert(if axis == Axis::X1 { p.x } else { p.y });
            }
        }
    }
    out
}

/// `sup` (or `inf`) over `(a, b)` including one-sided limits; exact when
/// every piece that meets `(a, b)` is affine.
fn slice_extremum(f: &PiecewiseFn1D, a: &Q, b: &Q, maximize: bool) -> Scalar {
    let cells: Vec<(Q, Q, &crate::poly::Poly)> = f
        .cells()
        .filter_map(|(l, r, p)| {
            let lo = l.max(a).clone();
            let hi = r.min(b).clone();
            (lo < hi).then_some((lo, hi, p))
        })
        .collect();
    if cells.iter().all(|(_, _, p)| p.degree().unwrap_or(0) <= 1) {
        let vals = cells.iter().flat_map(|(l, r, p)| [p.eval(l), p.eval(r)]);
        let v = if maximize { vals.max() } else { vals.min() };
        return Scalar::Exact(v.expect("non-empty interval"));
    }
    Scalar::Approx(if maximize { f.sup_on(a, b) } else { f.inf_on(a, b) })
}

fn combine(vals: Vec<Scalar>, maximize: bool) -> Scalar {
    if vals.iter().all(|v| matches!(v, Scalar::Exact(_))) {
        let qs = vals.into_iter().map(|v| match v {
            Scalar::Exact(x) => x,
            Scalar::Approx(_) => unreachable!(),
        });
        let v = if maximize { qs.max() } else { qs.min() };
        return Scalar::Exact(v.expect("non-empty grid"));
    }
    let fs = vals.iter().map(Scalar::to_f64);
    Scalar::Approx(if maximize {
        fs.fold(f64::NEG_INFINITY, f64::max)
    } else {
        fs.fold(f64::INFINITY, f64::min)
    })
}

fn difference(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x - y),
        _ => Scalar::Approx(a.to_f64() - b.to_f64()),
    }
}

/// Outer optimisation over grid centres, inner over the whole interval.
///
/// Grid coordinates on a line parallel to the grid line or at a vertex of
/// the discontinuity set are dropped, so every kept grid point is either a
/// continuity point or sits on one transversal line; this keeps `gap ≥ 0`.
pub fn pure_analysis(game: &GameSpec, grid_n: usize) -> Result<PureAnalysis> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument("grid_n must be at least 2".into()));
    }
    let rho = game.payoff();
    let bad1 = singular_coordinates(rho, Axis::X1);
    let bad2 = singular_coordinates(rho, Axis::X2);
    let (xs, ex1): (Vec<Q>, Vec<Q>) = centres(game.x1(), grid_n).into_iter().partition(|x| !bad1.contains(x));
    let (ys, ex2): (Vec<Q>, Vec<Q>) = centres(game.x2(), grid_n).into_iter().partition(|y| !bad2.contains(y));
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidArgument("every grid line lies on the discontinuity set".into()));
    }
    let (x2lo, x2hi) = (game.x2().lo(), game.x2().hi());
    let (x1lo, x1hi) = (game.x1().lo(), game.x1().hi());
    let infs = xs
        .iter()
        .map(|x| Ok(slice_extremum(&rho.slice_limits(Axis::X1, x, Side::Plus)?, x2lo, x2hi, false)))
        .collect::<Result<Vec<_>>>()?;
    let sups = ys
        .iter()
        .map(|y| Ok(slice_extremum(&rho.slice_limits(Axis::X2, y, Side::Plus)?, x1lo, x1hi, true)))
        .collect::<Result<Vec<_>>>()?;
    let supinf = combine(infs, true);
    let infsup = combine(sups, false);
    let fmt = |v: Vec<Q>| v.iter().map(crate::rational::format_rational).collect();
    Ok(PureAnalysis {
        grid_n,
        gap: difference(&infsup, &supinf),
        supinf,
        infsup,
        excluded_x1: fmt(ex1),
        excluded_x2: fmt(ex2),
    })
}

#[derive(Clone, Debug)]
pub struct MixedParams {
    pub grid_n: usize,
    pub eps: f64,
    pub max_iters: usize,
    /// Random densities per player for the witness check.
    pub samples: usize,
    pub seed: u64,
}

impl Default for MixedParams {
    fn default() -> Self {
        MixedParams {
            grid_n: 101,
            eps: 1e-3,
            max_iters: 1_000_000,
            samples: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FictitiousPlay {
    pub grid_n: usize,
    /// Midpoint of the best bounds found.
    pub matrix_value: f64,
    pub lower: f64,
    pub upper: f64,
    /// `upper − lower`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
}

/// One sampled opponent and the answer built against it.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSample {
    pub opponent: String,
    /// Exact best-response value against the opponent.
    pub best_response: f64,
    /// Support of the answering uniform density.
    pub answer: (String, String),
    /// Exact payoff of the answer.
    pub payoff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessBounds {
    pub eps: f64,
    /// Largest payoff player one's sampled strategies keep against player
    /// two's answers.
    pub supinf_bound: f64,
    /// Smallest payoff player one's answers reach against player two's
    /// sampled strategies.
    pub infsup_bound: f64,
    pub player1_samples: Vec<WitnessSample>,
    pub player2_samples: Vec<WitnessSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedAnalysis {
    pub fictitious_play: FictitiousPlay,
    pub witness: WitnessBounds,
}

/// Mean of the surrounding value at a grid point: the point value where the
/// payoff is continuous, an average of the adjacent values on a line.
fn matrix(rho: &PiecewiseFn2D, xs: &[Q], ys: &[Q]) -> Result<Vec<Vec<f64>>> {
    let row = |x: &Q| -> Result<Vec<f64>> {
        ys.iter()
            .map(|y| {
                let p = crate::geometry::Point::new(x.clone(), y.clone());
                Ok(to_f64(&rho.surrounding_value(&p)?.integral()))
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        xs.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        xs.iter().map(row).collect()
    }
}

fn argbest(v: &[f64], maximize: bool) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if (maximize && *x > v[best]) || (!maximize && *x < v[best]) {
            best = i;
        }
    }
    best
}

/// Simultaneous fictitious play; stops once the best upper and lower bounds
/// on the matrix value are within `eps`.
fn fictitious_play(m: &[Vec<f64>], eps: f64, max_iters: usize) -> FictitiousPlay {
    let (nr, nc) = (m.len(), m[0].len());
    let mut row_counts = vec![0usize; nr];
    let mut col_counts = vec![0usize; nc];
    // u[i]: payoff of row i against the column history; v[j] likewise
    let mut u = vec![0.0; nr];
    let mut v = vec![0.0; nc];
    let row_sums: Vec<f64> = m.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<f64> = (0..nc).map(|j| m.iter().map(|r| r[j]).sum()).collect();
    let (mut i, mut j) = (argbest(&row_sums, true), argbest(&col_sums, false));
    let (mut lower, mut upper) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut t = 0;
    while t < max_iters {
        row_counts[i] += 1;
        col_counts[j] += 1;
        for (vk, mk) in v.iter_mut().zip(&m[i]) {
            *vk += mk;
        }
        for (uk, row) in u.iter_mut().zip(m) {
            *uk += row[j];
        }
        t += 1;
        i = argbest(&u, true);
        j = argbest(&v, false);
        upper = upper.min(u[i] / t as f64);
        lower = lower.max(v[j] / t as f64);
        if upper - lower <= eps {
            break;
        }
    }
    let norm = |c: &[usize]| c.iter().map(|k| *k as f64 / t as f64).collect();
    FictitiousPlay {
        grid_n: nr,
        matrix_value: 0.5 * (lower + upper),
        lower,
        upper,
        residual: upper - lower,
        iterations: t,
        converged: upper - lower <= eps,
        row_strategy: norm(&row_counts),
        col_strategy: norm(&col_counts),
    }
}

/// Critical coordinates of `rho` along `axis` inside `x`, where opponents
/// that concentrate near a jump are placed.
fn critical_inside(rho: &PiecewiseFn2D, axis: Axis, x: &Interval) -> Vec<Q> {
    singular_coordinates(rho, axis).into_iter().filter(|c| x.contains(c)).collect()
}

/// Opponent family: uniform on `X`, uniform next to and across each
/// critical coordinate, and `samples` random step densities.
fn opponents(
    omega: &Interval,
    x: &Interval,
    critical: &[Q],
    delta: &Q,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, Distribution1D)> {
    let mut out = vec![("uniform".to_string(), uniform_on(omega, x.lo(), x.hi()))];
    for c in critical {
        let lo = (c - delta).max(x.lo().clone());
        let hi = (c + delta).min(x.hi().clone());
        let name = crate::rational::format_rational(c);
        out.push((format!("around {name}"), uniform_on(omega, &lo, &hi)));
        out.push((format!("right of {name}"), uniform_on(omega, c, &hi)));
        out.push((format!("left of {name}"), uniform_on(omega, &lo, c)));
    }
    for k in 0..samples {
        out.push((format!("random #{k}"), random_density(rng, omega, x)));
    }
    out
}

/// Uniform density on a piece of `f`'s domain next to where `f` reaches
/// its extremum over `x`, short enough that `f` moves less than `eps` on it.
fn answer(f: &PiecewiseFn1D, x: &Interval, maximize: bool, eps: &Q) -> (Q, Q) {
    let e = f.extremum_on(x.lo(), x.hi(), maximize).expect("non-empty interval");
    let (l, r) = e.cell;
    let mut h = &r - &l;
    loop {
        let (a, b) = if e.at == r {
            (&r - &h, r.clone())
        } else if e.at == l {
            (l.clone(), &l + &h)
        } else {
            let a = (&e.at - &h / qi(2)).max(l.clone());
            let b = (&a + &h).min(r.clone());
            (a, b)
        };
        let osc = e.poly.max_on(&a, &b) - e.poly.min_on(&a, &b);
        if osc < to_f64(eps) / 2.0 {
            return (a, b);
        }
        h /= qi(2);
    }
}

/// Fictitious play on the cell-centre grid, then the witness check: for
/// each sampled strategy of one player, the other player's best response
/// is located exactly and realised by a short uniform density.
pub fn mixed_analysis(game: &GameSpec, params: &MixedParams) -> Result<MixedAnalysis> {
    if params.grid_n < 2 || params.eps.is_nan() || params.eps <= 0.0 {
        return Err(Error::InvalidArgument("need grid_n >= 2 and eps > 0".into()));
    }
    let rho = game.payoff();
    let xs = centres(game.x1(), params.grid_n);
    let ys = centres(game.x2(), params.grid_n);
    let fp = fictitious_play(&matrix(rho, &xs, &ys)?, params.eps, params.max_iters);

    let eps = crate::rational::from_f64(params.eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let rho_t = rho.transpose();

    // player one's strategies against player two's answers
    let delta1 = game.x1().width() * &eps / qi(4);
    let crit1 = critical_inside(rho, Axis::X1, game.x1());
    let mut p1 = Vec::new();
    for (name, u1) in opponents(game.omega1(), game.x1(), &crit1, &delta1, params.samples, &mut rng) {
        let sigma = inner_integral(&rho_t, &u1, game.x1())?;
        let (a, b) = answer(&sigma, game.x2(), false, &eps);
        let u2 = uniform_on(game.omega2(), &a, &b);
        p1.push(witness(game, name, sigma.inf_on(game.x2().lo(), game.x2().hi()), (a, b), &u1, &u2)?);
    }
    let delta2 = game.x2().width() * &eps / qi(4);
    let crit2 = critical_inside(rho, Axis::X2, game.x2());
    let mut p2 = Vec::new();
    for (name, u2) in opponents(game.omega2(), game.x2(), &crit2, &delta2, params.samples, &mut rng) {
        let tau = inner_integral(rho, &u2, game.x2())?;
        let (a, b) = answer(&tau, game.x1(), true, &eps);
        let u1 = uniform_on(game.omega1(), &a, &b);
        p2.push(witness(game, name, tau.sup_on(game.x1().lo(), game.x1().hi()), (a, b), &u1, &u2)?);
    }
    let supinf_bound = p1.iter().map(|s| s.payoff).fold(f64::NEG_INFINITY, f64::max);
    let infsup_bound = p2.iter().map(|s| s.payoff).fold(f64::INFINITY, f64::min);
    Ok(MixedAnalysis {
        fictitious_play: fp,
        witness: WitnessBounds {
            eps: params.eps,
            supinf_bound,
            infsup_bound,
            player1_samples: p1,
            player2_samples: p2,
        },
    })
}

fn witness(
    game: &GameSpec,
    opponent: String,
    best_response: f64,
    (a, b): (Q, Q),
    u1: &Distribution1D,
    u2: &Distribution1D,
) -> Result<WitnessSample> {
    // two densities: Fubini, so both orders agree
    let value = payoff_unchecked(game, u1, u2)?
        .value()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("densities gave an order-dependent payoff".into()))?;
    Ok(WitnessSample {
        opponent,
        best_response,
        answer: (crate::rational::format_rational(&a), crate::rational::format_rational(&b)),
        payoff: to_f64(&value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures;
    use crate::geometry::Rect;
    use crate::poly2::Poly2;

    fn exact(s: &Scalar) -> Q {
        match s {
            Scalar::Exact(x) => x.clone(),
            Scalar::Approx(x) => panic!("inexact {x}"),
        }
    }

    #[test]
    fn example_pure_gap() {
        let r = pure_analysis(&fixtures::example(), 101).unwrap();
        assert_eq!(exact(&r.supinf), qi(0));
        assert_eq!(exact(&r.infsup), qi(1));
        assert_eq!(exact(&r.gap), qi(1));
        assert_eq!(r.excluded_x1, vec!["0"]);
    }

    #[test]
    fn continuous_saddle_gap_shrinks() {
        let g = fixtures::example();
        let rho = PiecewiseFn2D::from_poly(g.payoff().domain().clone(), &Poly2::x() - &Poly2::y());
        let g = g.with_payoff(rho).unwrap();
        let coarse = exact(&pure_analysis(&g, 11).unwrap().gap);
        let fine = exact(&pure_analysis(&g, 101).unwrap().gap);
        assert_eq!(coarse, q(2, 11));
        assert_eq!(fine, q(2, 101));
    }

    #[test]
    fn constant_game() {
        let g = fixtures::example();
        let g = g.with_payoff(PiecewiseFn2D::constant(g.payoff().domain().clone(), q(3, 4))).unwrap();
        assert_eq!(exact(&pure_analysis(&g, 5).unwrap().gap), qi(0));
        let m = mixed_analysis(&g, &MixedParams { grid_n: 5, samples: 2, ..Default::default() }).unwrap();
        assert_eq!(m.fictitious_play.matrix_value, 0.75);
    }

    #[test]
    fn matching_pennies() {
        let d = Interval::new(qi(-2), qi(2)).unwrap();
        let quad = |sx: i64, sy: i64| {
            crate::geometry::Region::new(vec![
                crate::geometry::HalfPlane::lt(qi(-sx), qi(0), qi(0)),
                crate::geometry::HalfPlane::lt(qi(0), qi(-sy), qi(0)),
            ])
        };
        let rho = PiecewiseFn2D::indicator(
            Rect::new(d.clone(), d),
            crate::geometry::RegionSet::new(vec![quad(1, 1), quad(-1, -1)], vec![]),
        );
        let g = GameSpec::new(fixtures::unit(), fixtures::unit(), rho).unwrap();
        let m = mixed_analysis(&g, &MixedParams { grid_n: 2, eps: 1e-3, samples: 2, ..Default::default() }).unwrap();
        assert!((m.fictitious_play.matrix_value - 0.5).abs() <= 1e-3, "{:?}", m.fictitious_play);
    }

    #[test]
    fn example_witnesses() {
        let m = mixed_analysis(
            &fixtures::example(),
            &MixedParams { grid_n: 21, eps: 0.01, samples: 8, ..Default::default() },
        )
        .unwrap();
        let w = &m.witness;
        assert!(w.supinf_bound <= 0.01, "{}", w.supinf_bound);
        // an opponent spread evenly across the jump at 0 holds player one
        // to one half
        let across = w.player2_samples.iter().find(|s| s.opponent == "around 0").unwrap();
        assert!((across.best_response - 0.5).abs() < 1e-12);
        assert!(w.infsup_bound <= 0.5 + 1e-12);
    }
}
