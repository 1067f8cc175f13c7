//! Random rational inputs shared by the integration tests. Every generator
//! draws from a caller-supplied rng so a failing case is reproduced by its
//! seed alone.

#![allow(dead_code)]

pub mod props;

use std::fs;
use std::path::PathBuf;

use rand::Rng;
use regudist::angular::ArcFn;
use regudist::distributions::{Atom1, Atom2, Distribution1D, Distribution2D};
use regudist::game::GameSpec;
use regudist::geometry::{HalfPlane, Point, Rect, Region, RegionSet};
use regudist::poly::Poly;
use regudist::poly2::Poly2;
use regudist::rational::{q, qi};
use regudist::regulated1d::{Interval, PiecewiseFn1D};
use regudist::regulated2d::{Clause, PiecewiseFn2D};
use regudist::Q;

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn example_game() -> GameSpec {
    serde_json::from_str(&fixture("example_game.json")).unwrap()
}

pub fn omega1() -> Interval {
    Interval::new(qi(-2), qi(2)).unwrap()
}

pub fn omega2() -> Rect {
    Rect::new(omega1(), omega1())
}

pub fn unit() -> Interval {
    Interval::new(qi(-1), qi(1)).unwrap()
}

/// `n / den` with `n` uniform in `lo*den ..= hi*den`.
pub fn grid<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo * den..=hi * den), den)
}

pub fn small<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

pub fn poly<R: Rng>(rng: &mut R, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    Poly::new((0..=d).map(|_| small(rng)).collect())
}

/// Up to three breakpoints on the eighths grid inside `(-2, 2)`.
pub fn pw1<R: Rng>(rng: &mut R, max_deg: usize) -> PiecewiseFn1D {
    let n = rng.gen_range(0..=3);
    let mut bps: Vec<Q> = (0..n).map(|_| grid(rng, -1, 1, 8)).collect();
    bps.sort();
    bps.dedup();
    let pieces = (0..=bps.len()).map(|_| poly(rng, max_deg)).collect();
    PiecewiseFn1D::new(omega1(), bps, pieces).unwrap()
}

/// A random function times the indicator of an interval inside `[-3/2, 3/2]`.
pub fn test_fn1<R: Rng>(rng: &mut R) -> PiecewiseFn1D {
    let a = grid(rng, -3, 0, 2) / qi(2);
    let b = &a + q(rng.gen_range(1..=12), 4);
    let b = b.min(q(3, 2));
    let chi = PiecewiseFn1D::indicator(omega1(), &a, &b).unwrap();
    pw1(rng, 2).mul(&chi).unwrap()
}

/// Regular part plus up to two atoms on the same eighths grid as the
/// breakpoints, so atoms often sit on jumps.
pub fn dist1<R: Rng>(rng: &mut R) -> Distribution1D {
    let regular = if rng.gen_bool(0.5) {
        pw1(rng, 2)
    } else {
        PiecewiseFn1D::zero(omega1())
    };
    let atoms = (0..rng.gen_range(0..=2))
        .map(|_| Atom1 {
            p: grid(rng, -1, 1, 8),
            right: small(rng),
            left: small(rng),
        })
        .collect();
    Distribution1D::new(regular, atoms).unwrap()
}

/// Angular measure with up to four arcs on the sixteenths-of-a-turn grid.
pub fn arc_fn<R: Rng>(rng: &mut R) -> ArcFn {
    let n = rng.gen_range(1..=4);
    let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(1..16)).collect();
    cuts.push(0);
    cuts.push(16);
    cuts.sort();
    cuts.dedup();
    let arcs = cuts
        .windows(2)
        .map(|w| (q(w[0], 16), q(w[1], 16), small(rng)))
        .collect();
    ArcFn::from_arcs(arcs).unwrap()
}

/// Half-plane through a quarter-grid point of `[-1, 1]²` with a small
/// integer normal.
pub fn halfplane<R: Rng>(rng: &mut R) -> HalfPlane {
    let (a, b) = loop {
        let a = rng.gen_range(-2..=2i64);
        let b = rng.gen_range(-2..=2i64);
        if (a, b) != (0, 0) {
            break (qi(a), qi(b));
        }
    };
    let p = Point::new(grid(rng, -1, 1, 4), grid(rng, -1, 1, 4));
    let c = &a * &p.x + &b * &p.y;
    if rng.gen_bool(0.8) {
        HalfPlane::lt(a, b, c)
    } else {
        HalfPlane::le(a, b, c)
    }
}

pub fn region_set<R: Rng>(rng: &mut R) -> RegionSet {
    let pos = (0..rng.gen_range(1..=2))
        .map(|_| Region::new((0..rng.gen_range(1..=2)).map(|_| halfplane(rng)).collect()))
        .collect();
    let neg = if rng.gen_bool(0.2) {
        vec![Region::new(vec![halfplane(rng)])]
    } else {
        vec![]
    };
    RegionSet::new(pos, neg)
}

pub fn affine<R: Rng>(rng: &mut R) -> Poly2 {
    match rng.gen_range(0..3) {
        0 => Poly2::constant(small(rng)),
        _ => Poly2::affine(small(rng), small(rng), small(rng)),
    }
}

/// One or two clauses with affine polynomials over random polyhedra.
pub fn pw2<R: Rng>(rng: &mut R) -> PiecewiseFn2D {
    let clauses = (0..rng.gen_range(1..=2))
        .map(|_| Clause {
            regions: region_set(rng),
            poly: affine(rng),
        })
        .collect();
    PiecewiseFn2D::new(omega2(), clauses, affine(rng))
}

/// A random function times the indicator of a box inside `[-3/2, 3/2]²`.
pub fn test_fn2<R: Rng>(rng: &mut R) -> PiecewiseFn2D {
    let x0 = grid(rng, -3, 0, 2) / qi(2);
    let y0 = grid(rng, -3, 0, 2) / qi(2);
    let x1 = (&x0 + q(rng.gen_range(1..=6), 2)).min(q(3, 2));
    let y1 = (&y0 + q(rng.gen_range(1..=6), 2)).min(q(3, 2));
    let chi = PiecewiseFn2D::indicator(omega2(), Region::open_box(x0, x1, y0, y1).into());
    pw2(rng).mul(&chi).unwrap()
}

pub fn dist2<R: Rng>(rng: &mut R) -> Distribution2D {
    let regular = if rng.gen_bool(0.3) {
        pw2(rng)
    } else {
        PiecewiseFn2D::zero(omega2())
    };
    let atoms = (0..rng.gen_range(0..=2))
        .map(|_| Atom2 {
            p: Point::new(grid(rng, -1, 1, 4), grid(rng, -1, 1, 4)),
            measure: arc_fn(rng),
        })
        .collect();
    Distribution2D::new(regular, atoms).unwrap()
}

/// Game on `(-1, 1)²` inside `(-2, 2)²`. Half the draws are the four
/// quadrants of a grid point, possibly cut by one slanted line, with
/// integer values; the rest are arbitrary piecewise-affine payoffs.
pub fn game<R: Rng>(rng: &mut R) -> GameSpec {
    let payoff = if rng.gen_bool(0.5) {
        let cx = grid(rng, -1, 1, 4).clamp(q(-3, 4), q(3, 4));
        let cy = grid(rng, -1, 1, 4).clamp(q(-3, 4), q(3, 4));
        let mut clauses = Vec::new();
        if rng.gen_bool(0.3) {
            clauses.push(Clause {
                regions: Region::new(vec![halfplane(rng)]).into(),
                poly: Poly2::constant(qi(rng.gen_range(-3..=3))),
            });
        }
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1)] {
            let hx = if sx > 0 { HalfPlane::x_gt(cx.clone()) } else { HalfPlane::x_lt(cx.clone()) };
            let hy = if sy > 0 { HalfPlane::y_gt(cy.clone()) } else { HalfPlane::y_lt(cy.clone()) };
            clauses.push(Clause {
                regions: Region::new(vec![hx, hy]).into(),
                poly: Poly2::constant(qi(rng.gen_range(-3..=3))),
            });
        }
        PiecewiseFn2D::new(omega2(), clauses, Poly2::constant(qi(rng.gen_range(-3..=3))))
    } else {
        pw2(rng)
    };
    GameSpec::new(unit(), unit(), payoff).unwrap()
}

/// Whether `(x, y)` lies on a boundary line that is neither horizontal nor
/// vertical.
pub fn on_slanted_line(g: &PiecewiseFn2D, x: &Q, y: &Q) -> bool {
    let p = Point::new(x.clone(), y.clone());
    g.lines()
        .iter()
        .any(|l| !l.is_vertical() && !l.is_horizontal() && l.passes_through(&p))
}

/// Least-squares slope of `log e` against `log k`.
pub fn loglog_slope(ks: &[f64], es: &[f64]) -> f64 {
    let xs: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Twenty fixed test functions on `(-2, 2)`, each with a jump and a nonzero
/// slope at the origin.
pub fn phi_suite_1d() -> Vec<PiecewiseFn1D> {
    use rand::SeedableRng;
    (0..20u64)
        .map(|i| {
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(1000 + i);
            let ramp = PiecewiseFn1D::new(
                omega1(),
                vec![q(-1, 2), qi(0), q(1, 2)],
                vec![
                    Poly::zero(),
                    Poly::linear(small(&mut r), qi(1 + i as i64 % 3)),
                    Poly::linear(small(&mut r), qi(-2)),
                    Poly::zero(),
                ],
            )
            .unwrap();
            ramp.add(&test_fn1(&mut r)).unwrap()
        })
        .collect()
}

/// Twenty fixed test functions on `(-2, 2)²` with a corner at the origin.
pub fn phi_suite_2d() -> Vec<PiecewiseFn2D> {
    use rand::SeedableRng;
    (0..20u64)
        .map(|i| {
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(2000 + i);
            let half = q(1, 2);
            let quadrant = Region::new(vec![
                HalfPlane::x_gt(qi(0)),
                HalfPlane::y_gt(qi(0)),
                HalfPlane::x_lt(half.clone()),
                HalfPlane::y_lt(half.clone()),
            ]);
            let wedge = Region::new(vec![
                HalfPlane::lt(qi(1), qi(-1), qi(0)),
                HalfPlane::x_gt(-half.clone()),
                HalfPlane::x_lt(half.clone()),
                HalfPlane::y_gt(-half.clone()),
                HalfPlane::y_lt(half),
            ]);
            let g = PiecewiseFn2D::new(
                omega2(),
                vec![
                    Clause { regions: quadrant.into(), poly: Poly2::affine(small(&mut r), qi(1), qi(2)) },
                    Clause { regions: wedge.into(), poly: Poly2::affine(small(&mut r), qi(-1), qi(1)) },
                ],
                Poly2::zero(),
            );
            g.add(&test_fn2(&mut r)).unwrap()
        })
        .collect()
}

/// `∫∫ ρ(x1, x2) ω_k(x1) ω_k(x2)` for the line delta sequences of the two
/// atoms, by cubature on the four squares where both factors are constant.
pub fn sequence_payoff(g: &GameSpec, p1: &Q, b1: &Q, p2: &Q, b2: &Q, k: u32) -> f64 {
    use regudist::distributions::quad::cubature_2d;
    use regudist::distributions::sequence::delta_sequence_1d;
    use regudist::rational::to_f64;
    let w1 = delta_sequence_1d(g.omega1(), p1, b1, k).unwrap();
    let w2 = delta_sequence_1d(g.omega2(), p2, b2, k).unwrap();
    let ev = g.payoff().evaluator();
    let h = 1.0 / k as f64;
    let (c1, c2) = (to_f64(p1), to_f64(p2));
    let f = |x: f64, y: f64| ev.eval(x, y) * w1.eval_f64(x) * w2.eval_f64(y);
    let mut total = 0.0;
    for sx in [(c1 - h, c1), (c1, c1 + h)] {
        for sy in [(c2 - h, c2), (c2, c2 + h)] {
            total += cubature_2d(sx, sy, 1e-10, 2_000_000, &f).0;
        }
    }
    total
}
