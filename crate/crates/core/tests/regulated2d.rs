mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regudist::geometry::{HalfPlane, Point, Region};
use regudist::poly2::Poly2;
use regudist::rational::{qi, to_f64};
use regudist::regulated2d::{Axis, Clause, PiecewiseFn2D, Side};

use common::{grid, omega2, pw2};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_point<R: Rng>(r: &mut R) -> Point {
    Point::new(grid(r, -1, 1, 4), grid(r, -1, 1, 4))
}

#[test]
fn opposite_quadrants_by_probing() {
    let quad = |sx: i64| {
        let (hx, hy) = if sx > 0 {
            (HalfPlane::x_gt(qi(0)), HalfPlane::y_gt(qi(0)))
        } else {
            (HalfPlane::x_lt(qi(0)), HalfPlane::y_lt(qi(0)))
        };
        Region::new(vec![hx, hy])
    };
    let g = PiecewiseFn2D::new(
        omega2(),
        vec![Clause {
            regions: regudist::geometry::RegionSet::new(vec![quad(1), quad(-1)], vec![]),
            poly: Poly2::constant(qi(1)),
        }],
        Poly2::zero(),
    );
    let s = g.surrounding_value(&Point::ints(0, 0)).unwrap();
    let ev = g.evaluator();
    for i in 0..360 {
        let deg = i as f64 + 0.5;
        let a = deg.to_radians();
        let probe = ev.eval(1e-6 * a.cos(), 1e-6 * a.sin());
        assert_eq!(s.value_at_f64(deg / 360.0), probe, "at {deg} degrees");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn surrounding_value_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, h) = (pw2(&mut r), pw2(&mut r));
        let p = random_point(&mut r);
        let gh = g.mul(&h).unwrap();
        let lhs = gh.surrounding_value(&p).unwrap();
        let rhs = g.surrounding_value(&p).unwrap().mul(&h.surrounding_value(&p).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_away_from_boundaries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = pw2(&mut r);
        // sixty-fourths can still land on a slanted boundary, hence the filter
        let p = Point::new(
            regudist::rational::q(2 * r.gen_range(-31..31) + 1, 64),
            regudist::rational::q(2 * r.gen_range(-31..31) + 1, 64),
        );
        if g.lines().iter().all(|l| !l.passes_through(&p)) {
            let s = g.surrounding_value(&p).unwrap();
            prop_assert!(s.is_constant());
            prop_assert_eq!(&s.values()[0], &g.eval(&p).unwrap());
        }
    }

    #[test]
    fn arc_values_match_small_probes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = pw2(&mut r);
        let p = random_point(&mut r);
        let s = g.surrounding_value(&p).unwrap();
        let ev = g.evaluator();
        let (px, py) = p.to_f64();
        let starts: Vec<f64> = s.arcs().map(|(lo, _, _)| to_f64(&lo)).collect();
        for _ in 0..100 {
            let t: f64 = r.gen_range(0.0..1.0);
            if starts.iter().any(|a| (a - t).abs() < 1e-6 || (a + 1.0 - t).abs() < 1e-6) {
                continue;
            }
            let a = t * std::f64::consts::TAU;
            let want = s.value_at_f64(t);
            for h in [1e-4, 1e-5, 1e-6] {
                let got = ev.eval(px + h * a.cos(), py + h * a.sin());
                // affine pieces drift by at most |grad| h off the apex
                prop_assert!((got - want).abs() < 100.0 * h, "t={t} h={h}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn slices_agree_off_the_boundary(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = pw2(&mut r);
        let at = grid(&mut r, -1, 1, 8);
        for axis in [Axis::X1, Axis::X2] {
            let up = g.slice_limits(axis, &at, Side::Plus).unwrap();
            let down = g.slice_limits(axis, &at, Side::Minus).unwrap();
            let on_line = |u: &regudist::Q| {
                let pt = match axis {
                    Axis::X2 => Point::new(u.clone(), at.clone()),
                    Axis::X1 => Point::new(at.clone(), u.clone()),
                };
                g.lines().iter().any(|l| l.passes_through(&pt))
            };
            for i in 1..64 {
                let u = regudist::rational::q(4 * i - 128, 64) + regudist::rational::q(1, 128);
                if !on_line(&u) {
                    prop_assert_eq!(up.limit_right(&u).unwrap(), down.limit_right(&u).unwrap());
                }
            }
        }
    }
}
