//! One line per acceptance criterion. Exits non-zero if any criterion
//! fails; every line is printed either way.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regudist::angular::ArcFn;
use regudist::distributions::sequence::{default_ks, delta_sequence_1d, delta_sequence_2d, DeltaSeqConfig, Scalar};
use regudist::distributions::{Distribution1D, Distribution2D};
use regudist::game::{mixed_analysis, pure_analysis, saddle_verify, solve_rprime, MixedParams};
use regudist::geometry::{cone, direction_near, Point, Region, RegionSet};
use regudist::rational::{format_rational, half, q, qi, to_f64};
use regudist::regulated1d::PiecewiseFn1D;
use regudist::regulated2d::PiecewiseFn2D;
use regudist::Q;

use common::{example_game, fixture, loglog_slope, omega1, omega2, phi_suite_1d, phi_suite_2d, props};

type Verdict = (bool, String);
type Named<F> = (&'static str, F);
type Prop = fn(u64) -> props::Check;

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn solve_example() -> Verdict {
    let g = example_game();
    let (out, dt) = timed(|| solve_rprime(&g, &[]).unwrap());
    let Some(s) = out.solution() else {
        return (false, "no candidate passed".into());
    };
    let oracle = common::sequence_payoff(&g, &s.point.x, &s.beta1, &s.point.y, &s.beta2, 1000);
    let ok = s.point == Point::ints(0, 0)
        && s.beta1 == half()
        && s.beta2 == half()
        && s.value == half()
        && (oracle - 0.5).abs() <= 1e-3
        && dt < Duration::from_secs(1);
    let msg = format!(
        "point {} beta1 {} beta2 {} value {} quadrature(k=1000) {oracle:.6} solve {:.1} ms",
        s.point,
        format_rational(&s.beta1),
        format_rational(&s.beta2),
        format_rational(&s.value),
        dt.as_secs_f64() * 1e3
    );
    (ok, msg)
}

fn nonexistence_gaps() -> Verdict {
    let g = example_game();
    let t = Instant::now();
    let pure = pure_analysis(&g, 101).unwrap();
    let params = MixedParams { eps: 0.01, ..MixedParams::default() };
    let mixed = mixed_analysis(&g, &params).unwrap();
    let dt = t.elapsed();
    let exact = |s: &Scalar, v: i64| matches!(s, Scalar::Exact(x) if *x == qi(v));
    let w = &mixed.witness;
    let ok = exact(&pure.supinf, 0)
        && exact(&pure.infsup, 1)
        && w.supinf_bound <= 0.01
        && w.infsup_bound >= 0.99
        && dt < Duration::from_secs(10);
    let msg = format!(
        "pure supinf {} infsup {}; witness supinf <= {:.4} (need <= 0.01), infsup >= {:.4} (need >= 0.99); \
         matrix value {:.4}; {:.2} s",
        pure.supinf,
        pure.infsup,
        w.supinf_bound,
        w.infsup_bound,
        mixed.fictitious_play.matrix_value,
        dt.as_secs_f64()
    );
    (ok, msg)
}

fn product_calculus() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    for _ in 0..20 {
        let p = q(r.gen_range(-7..=7), 8);
        let beta = q(r.gen_range(-50..=150), r.gen_range(1..=100));
        let theta = PiecewiseFn1D::heaviside(omega1(), p.clone()).unwrap();
        let lhs = Distribution1D::delta(omega1(), p.clone(), beta.clone()).unwrap().multiply(&theta).unwrap();
        let rhs = Distribution1D::delta_plus(omega1(), p).unwrap().scale(&beta);
        ok &= lhs == rhs;
    }
    let quad = |sx: i64| {
        use regudist::geometry::HalfPlane;
        if sx > 0 {
            Region::new(vec![HalfPlane::x_gt(qi(0)), HalfPlane::y_gt(qi(0))])
        } else {
            Region::new(vec![HalfPlane::x_lt(qi(0)), HalfPlane::y_lt(qi(0))])
        }
    };
    let g = PiecewiseFn2D::indicator(omega2(), RegionSet::new(vec![quad(1), quad(-1)], vec![]));
    let d = Distribution2D::delta(omega2(), Point::ints(0, 0), ArcFn::constant(Q::one())).unwrap();
    let prod = d.multiply(&g).unwrap();
    // γ = 1/π per radian on the open quadrants is 2 per turn there
    let gamma = ArcFn::from_arcs(vec![
        (qi(0), q(1, 4), qi(2)),
        (q(1, 4), q(1, 2), qi(0)),
        (q(1, 2), q(3, 4), qi(2)),
        (q(3, 4), qi(1), qi(0)),
    ])
    .unwrap();
    let atom = &prod.atoms()[0];
    let planar = prod.atoms().len() == 1 && atom.weight() == half() && atom.alpha() == Some(gamma);
    (
        ok && planar,
        format!("theta*delta == beta*delta+ for 20 beta: {ok}; quadrant product rho = 1/2, uniform gamma: {planar}"),
    )
}

fn integration_calculus() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut line = true;
    for _ in 0..20 {
        let p = q(r.gen_range(-7..=7), 8);
        let beta = q(r.gen_range(0..=16), 16);
        let d = Distribution1D::delta(omega1(), p.clone(), beta.clone()).unwrap();
        let t0 = qi(-1);
        line &= d.integrate(&t0, &(&p + q(1, 32))).unwrap() == Q::one()
            && d.integrate(&t0, &p).unwrap() == Q::one() - &beta
            && d.integrate(&t0, &(&p - q(1, 32))).unwrap() == Q::zero();
    }
    let mut sectors = 0;
    let p = Point::new(q(1, 4), q(-1, 8));
    let near = Region::open_box(q(-1, 4), q(3, 4), q(-5, 8), q(3, 8));
    for _ in 0..50 {
        let alpha = common::arc_fn(&mut r);
        let m = alpha.integral();
        let alpha = if m.is_zero() { ArcFn::constant(Q::one()) } else { alpha.scale(&(Q::one() / m)) };
        let k = r.gen_range(1..=8);
        let rr = q(k, 8);
        let d1 = direction_near(0.0);
        let d2 = direction_near(to_f64(&rr));
        let sector = cone(&p, &d1, &d2).intersect(&near.clone().into());
        let delta = Distribution2D::delta(omega2(), p.clone(), alpha.clone()).unwrap();
        if delta.integrate(&sector).unwrap() == alpha.integral_over(&qi(0), &rr).unwrap() {
            sectors += 1;
        }
    }
    (
        line && sectors == 50,
        format!("line integrals {{1, 1-beta, 0}} for 20 beta: {line}; sector integrals exact {sectors}/50"),
    )
}

fn delta_sequences() -> Verdict {
    let ks = default_ks(1000);
    let mut exact = true;
    for name in ["deltaseq_1d.json", "deltaseq_2d.json"] {
        let cfg: DeltaSeqConfig = serde_json::from_str(&fixture(name)).unwrap();
        let rep = cfg.run(&ks).unwrap();
        // r = 1/10 in both fixtures
        exact &= rep
            .rows
            .iter()
            .filter(|row| row.k > 10)
            .all(|row| matches!(row.integral, Scalar::Exact(_)) && row.abs_error == 0.0);
    }

    let fit_ks = [10u32, 20, 50, 100, 200, 500, 1000];
    let kf: Vec<f64> = fit_ks.iter().map(|&k| k as f64).collect();
    let slope_of = |errs: Vec<f64>| -> Option<f64> {
        if errs.iter().all(|e| *e == 0.0) {
            None
        } else {
            Some(loglog_slope(&kf, &errs.iter().map(|e| e.max(1e-300)).collect::<Vec<_>>()))
        }
    };

    let p = qi(0);
    let beta = q(1, 3);
    let d1 = Distribution1D::delta(omega1(), p.clone(), beta.clone()).unwrap();
    let mut worst1 = f64::NEG_INFINITY;
    for phi in phi_suite_1d() {
        let want = d1.pair(&phi).unwrap();
        let errs = fit_ks
            .iter()
            .map(|&k| {
                let w = delta_sequence_1d(&omega1(), &p, &beta, k).unwrap();
                to_f64(&(w.mul(&phi).unwrap().integral() - &want)).abs()
            })
            .collect();
        if let Some(s) = slope_of(errs) {
            worst1 = worst1.max(s);
        }
    }

    let alpha = ArcFn::from_arcs(vec![(qi(0), q(1, 4), qi(2)), (q(1, 4), qi(1), q(2, 3))]).unwrap();
    let c = Point::ints(0, 0);
    let d2 = Distribution2D::delta(omega2(), c.clone(), alpha.clone()).unwrap();
    let mut worst2 = f64::NEG_INFINITY;
    for phi in phi_suite_2d() {
        let want = to_f64(&d2.pair(&phi).unwrap());
        let errs = fit_ks
            .iter()
            .map(|&k| (delta_sequence_2d(&omega2(), &c, &alpha, k).unwrap().pair_numeric(&phi) - want).abs())
            .collect();
        if let Some(s) = slope_of(errs) {
            worst2 = worst2.max(s);
        }
    }
    let ok = exact && worst1 <= -0.9 && worst2 <= -0.9;
    (
        ok,
        format!(
            "cone-ball integrals exact for 1/k < r: {exact}; worst log-log slope over 20 test functions: \
             line {worst1:.3}, plane {worst2:.3} (need <= -0.9)"
        ),
    )
}

fn property_suites() -> Verdict {
    let checks: [Named<Prop>; 5] = [
        ("pairing product identity", props::product_identity),
        ("associativity", props::associativity),
        ("shift/scale equivariance", props::equivariance),
        ("weak duality", props::weak_duality),
        ("order independence", props::order_independence),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, check) in checks {
        match props::sweep(1000, check) {
            Ok(n) => parts.push(format!("{name} {n}/{n}")),
            Err((seed, e)) => {
                ok = false;
                parts.push(format!("{name} failed at seed {seed}: {e}"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn saddle() -> Verdict {
    let g = example_game();
    let s = solve_rprime(&g, &[]).unwrap().solution().cloned().unwrap();
    let rep = saddle_verify(&g, &s, 100, 0).unwrap();
    (
        rep.pass,
        format!(
            "100 opponents each side, value {}: min margins {:.3e} / {:.3e}",
            format_rational(&s.value),
            rep.min_margin_player1,
            rep.min_margin_player2
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Named<fn() -> Verdict>; 7] = [
        ("example solution", solve_example),
        ("nonexistence gaps", nonexistence_gaps),
        ("product calculus", product_calculus),
        ("integration calculus", integration_calculus),
        ("delta sequences", delta_sequences),
        ("property suites", property_suites),
        ("saddle verification", saddle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, msg) = run();
        if !ok {
            failed += 1;
        }
        println!("criterion {} {name}: {} | {msg}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
