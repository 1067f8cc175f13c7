//! Iterated one-sided limits of the payoff at a candidate point and the
//! hypotheses of the closed-form equilibrium.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::rational::{format_rational, Q};
use crate::regulated1d::PiecewiseFn1D;
use crate::regulated2d::{Axis, Side};

use super::GameSpec;

/// `a_±^r = lim_{x1→x1*+} ρ(x1, x2*±)`, `a_±^l` from the left, and
/// `b_±^{r,l} = lim_{x2→x2*±'} ρ(x1*±, x2)` (upper index: side in `x2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerLimits {
    pub point: Point,
    #[serde(with = "crate::rational::serde_q")]
    pub a_r_plus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub a_r_minus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub a_l_plus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub a_l_minus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b_r_plus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b_r_minus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b_l_plus: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub b_l_minus: Q,
    pub dominance: Dominance,
}

/// Whether each corner limit bounds its slice on the relevant side.
///
/// `a1_plus`: `a_+^r ≥ ρ(x1, x2*+)` for every `x1 > x1*` in `X1`, and so on;
/// the `b` flags are the reverse inequalities along `x2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub a1_plus: bool,
    pub a1_minus: bool,
    pub a2_plus: bool,
    pub a2_minus: bool,
    pub b1_plus: bool,
    pub b1_minus: bool,
    pub b2_plus: bool,
    pub b2_minus: bool,
}

/// All eight limits at `(x1s, x2s)` and the exact dominance checks.
pub fn corner_limits(game: &GameSpec, x1s: &Q, x2s: &Q) -> Result<CornerLimits> {
    if !game.x1().contains(x1s) || !game.x2().contains(x2s) {
        return Err(Error::OutsideDomain(format!(
            "({}, {}) is not inside {} x {}",
            format_rational(x1s),
            format_rational(x2s),
            game.x1(),
            game.x2()
        )));
    }
    let rho = game.payoff();
    // functions of x1 just above / below the horizontal x2 = x2*
    let row_plus = rho.slice_limits(Axis::X2, x2s, Side::Plus)?;
    let row_minus = rho.slice_limits(Axis::X2, x2s, Side::Minus)?;
    // functions of x2 just right / left of the vertical x1 = x1*
    let col_plus = rho.slice_limits(Axis::X1, x1s, Side::Plus)?;
    let col_minus = rho.slice_limits(Axis::X1, x1s, Side::Minus)?;

    let a_r_plus = row_plus.limit_right(x1s)?;
    let a_r_minus = row_minus.limit_right(x1s)?;
    let a_l_plus = row_plus.limit_left(x1s)?;
    let a_l_minus = row_minus.limit_left(x1s)?;
    let b_r_plus = col_plus.limit_right(x2s)?;
    let b_r_minus = col_minus.limit_right(x2s)?;
    let b_l_plus = col_plus.limit_left(x2s)?;
    let b_l_minus = col_minus.limit_left(x2s)?;

    let (x1lo, x1hi) = (game.x1().lo(), game.x1().hi());
    let (x2lo, x2hi) = (game.x2().lo(), game.x2().hi());
    let bounds_above = |f: &PiecewiseFn1D, c: &Q, a: &Q, b: &Q| !f.exceeds_on(c, a, b);
    let bounds_below = |f: &PiecewiseFn1D, c: &Q, a: &Q, b: &Q| !f.falls_below_on(c, a, b);
    let dominance = Dominance {
        a1_plus: bounds_above(&row_plus, &a_r_plus, x1s, x1hi),
        a1_minus: bounds_above(&row_minus, &a_r_minus, x1s, x1hi),
        a2_plus: bounds_above(&row_plus, &a_l_plus, x1lo, x1s),
        a2_minus: bounds_above(&row_minus, &a_l_minus, x1lo, x1s),
        b1_plus: bounds_below(&col_plus, &b_r_plus, x2s, x2hi),
        b1_minus: bounds_below(&col_minus, &b_r_minus, x2s, x2hi),
        b2_plus: bounds_below(&col_plus, &b_l_plus, x2lo, x2s),
        b2_minus: bounds_below(&col_minus, &b_l_minus, x2lo, x2s),
    };
    Ok(CornerLimits {
        point: Point::new(x1s.clone(), x2s.clone()),
        a_r_plus,
        a_r_minus,
        a_l_plus,
        a_l_minus,
        b_r_plus,
        b_r_minus,
        b_l_plus,
        b_l_minus,
        dominance,
    })
}

impl CornerLimits {
    /// `A = a_+^r − a_+^l − a_-^r + a_-^l`.
    pub fn determinant(&self) -> Q {
        &self.a_r_plus - &self.a_l_plus - &self.a_r_minus + &self.a_l_minus
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub checks: Vec<Check>,
    #[serde(rename = "A", with = "crate::rational::serde_q")]
    pub a: Q,
    pub pass: bool,
}

impl ConditionReport {
    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| {
                if c.name == "A != 0" {
                    "A = 0".to_string()
                } else {
                    c.name.to_string()
                }
            })
            .collect()
    }
}

/// Every hypothesis checked independently; `pass` iff all hold.
pub fn check_conditions(cl: &CornerLimits) -> ConditionReport {
    let d = &cl.dominance;
    let (arp, arm, alp, alm) = (&cl.a_r_plus, &cl.a_r_minus, &cl.a_l_plus, &cl.a_l_minus);
    let a = cl.determinant();
    let checks = vec![
        Check { name: "a1+", holds: d.a1_plus },
        Check { name: "a1-", holds: d.a1_minus },
        Check { name: "a2+", holds: d.a2_plus },
        Check { name: "a2-", holds: d.a2_minus },
        Check { name: "b1+", holds: d.b1_plus },
        Check { name: "b1-", holds: d.b1_minus },
        Check { name: "b2+", holds: d.b2_plus },
        Check { name: "b2-", holds: d.b2_minus },
        Check { name: "b+r = a+r", holds: cl.b_r_plus == *arp },
        Check { name: "b-l = a-l", holds: cl.b_l_minus == *alm },
        Check { name: "b-r = a+l", holds: cl.b_r_minus == *alp },
        Check { name: "b+l = a-r", holds: cl.b_l_plus == *arm },
        Check { name: "a+r >= a-r", holds: arp >= arm },
        Check { name: "a-l >= a+l", holds: alm >= alp },
        Check { name: "a-l >= a-r", holds: alm >= arm },
        Check { name: "a+r >= a+l", holds: arp >= alp },
        Check { name: "A != 0", holds: !a.is_zero() },
    ];
    let pass = checks.iter().all(|c| c.holds);
    ConditionReport { checks, a, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures;
    use crate::geometry::{HalfPlane, Rect, RegionSet};
    use crate::poly2::Poly2;
    use crate::rational::{q, qi};
    use crate::regulated1d::Interval;
    use crate::regulated2d::PiecewiseFn2D;

    fn limits(v: [i64; 8]) -> CornerLimits {
        let all = Dominance {
            a1_plus: true,
            a1_minus: true,
            a2_plus: true,
            a2_minus: true,
            b1_plus: true,
            b1_minus: true,
            b2_plus: true,
            b2_minus: true,
        };
        CornerLimits {
            point: Point::ints(0, 0),
            a_r_plus: qi(v[0]),
            a_l_plus: qi(v[1]),
            a_r_minus: qi(v[2]),
            a_l_minus: qi(v[3]),
            b_r_plus: qi(v[4]),
            b_l_plus: qi(v[5]),
            b_r_minus: qi(v[6]),
            b_l_minus: qi(v[7]),
            dominance: all,
        }
    }

    #[test]
    fn example_limits() {
        let cl = corner_limits(&fixtures::example(), &qi(0), &qi(0)).unwrap();
        assert_eq!(cl, CornerLimits { dominance: cl.dominance, ..limits([1, 0, 0, 1, 1, 0, 0, 1]) });
        let r = check_conditions(&cl);
        assert!(r.pass, "{:?}", r.failures());
        assert_eq!(r.a, qi(2));
    }

    #[test]
    fn continuous_point_fails_on_determinant() {
        let g = fixtures::example();
        let cl = corner_limits(&g, &q(1, 4), &q(1, 4)).unwrap();
        for v in [&cl.a_r_plus, &cl.a_l_minus, &cl.b_r_minus, &cl.b_l_plus] {
            assert_eq!(v, &qi(1));
        }
        let r = check_conditions(&cl);
        assert!(!r.pass);
        assert!(r.failures().contains(&"A = 0".to_string()));
    }

    #[test]
    fn jumps_with_zero_determinant() {
        let r = check_conditions(&limits([1, 0, 1, 0, 1, 1, 0, 0]));
        assert_eq!(r.a, qi(0));
        assert!(!r.pass);
    }

    #[test]
    fn step_in_first_coordinate() {
        let d = Interval::new(qi(-2), qi(2)).unwrap();
        let rho = PiecewiseFn2D::indicator(Rect::new(d.clone(), d), RegionSet::from(
            crate::geometry::Region::new(vec![HalfPlane::x_gt(qi(0))]),
        ));
        let g = GameSpec::new(fixtures::unit(), fixtures::unit(), rho).unwrap();
        let cl = corner_limits(&g, &qi(0), &q(1, 2)).unwrap();
        assert_eq!((&cl.a_r_plus, &cl.a_r_minus), (&qi(1), &qi(1)));
        assert_eq!((&cl.a_l_plus, &cl.a_l_minus), (&qi(0), &qi(0)));
        assert_eq!((&cl.b_r_plus, &cl.b_l_plus), (&qi(1), &qi(1)));
        assert_eq!((&cl.b_r_minus, &cl.b_l_minus), (&qi(0), &qi(0)));
        // numeric probes a little off the point agree
        let e = g.payoff().evaluator();
        assert_eq!(e.eval(1e-6, 0.5 + 1e-6), 1.0);
        assert_eq!(e.eval(-1e-6, 0.5 - 1e-6), 0.0);
    }

    #[test]
    fn dominance_is_checked_over_the_slice() {
        // a bump at x1 = 1/2 on the upper side beats the corner limit
        let g = fixtures::example();
        let bump = PiecewiseFn2D::from_poly(g.payoff().domain().clone(), Poly2::x());
        let rho = g.payoff().add(&bump).unwrap();
        let cl = corner_limits(&g.with_payoff(rho).unwrap(), &qi(0), &qi(0)).unwrap();
        assert!(!cl.dominance.a1_plus);
        assert!(cl.dominance.a2_plus);
    }

    #[test]
    fn outside_point_is_an_error() {
        assert!(corner_limits(&fixtures::example(), &qi(1), &qi(0)).is_err());
    }
}
