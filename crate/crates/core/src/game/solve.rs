//! Closed-form equilibrium in one-sided delta atoms.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::distributions::Distribution1D;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::rational::Q;

use super::corner::{check_conditions, corner_limits, ConditionReport, CornerLimits};
use super::GameSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RPrimeSolution {
    pub point: Point,
    #[serde(with = "crate::rational::serde_q")]
    pub beta1: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub beta2: Q,
    /// Value of the original (unshifted) game.
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
    /// Constant added to the payoff to make it non-negative.
    #[serde(with = "crate::rational::serde_q")]
    pub shift: Q,
    pub conditions: ConditionReport,
    pub limits: CornerLimits,
    /// Further candidates that pass, in lexicographic order.
    pub also_passing: Vec<Point>,
    #[serde(skip)]
    pub atom1: Distribution1D,
    #[serde(skip)]
    pub atom2: Distribution1D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub point: Point,
    pub conditions: ConditionReport,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoSolution {
    #[serde(with = "crate::rational::serde_q")]
    pub shift: Q,
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SolveOutcome {
    Solved(Box<RPrimeSolution>),
    NoSolution(NoSolution),
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&RPrimeSolution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::NoSolution(_) => None,
        }
    }
}

/// Intersections of boundary lines inside `X1 × X2`, sorted.
fn vertex_candidates(game: &GameSpec) -> BTreeSet<Point> {
    let lines: Vec<_> = game.payoff().lines().into_iter().collect();
    let mut out = BTreeSet::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if let Some(p) = lines[i].intersect(&lines[j]) {
                if game.x1().contains(&p.x) && game.x2().contains(&p.y) {
                    out.insert(p);
                }
            }
        }
    }
    out
}

/// Search boundary-line vertices (plus `extra` points) for a corner where
/// every hypothesis holds, and build the atom pair there.
pub fn solve_rprime(game: &GameSpec, extra: &[Point]) -> Result<SolveOutcome> {
    let mut points = vertex_candidates(game);
    for p in extra {
        if !game.x1().contains(&p.x) || !game.x2().contains(&p.y) {
            return Err(Error::OutsideDomain(format!("candidate {p} is not inside X1 x X2")));
        }
        points.insert(p.clone());
    }
    let lb = game.payoff().lower_bound();
    let shift = if lb < Q::zero() { -lb } else { Q::zero() };
    let shifted = game.with_payoff(game.payoff().add_constant(&shift))?;

    let mut passing: Vec<(CornerLimits, ConditionReport)> = Vec::new();
    let mut candidates = Vec::new();
    for p in &points {
        let cl = corner_limits(&shifted, &p.x, &p.y)?;
        let report = check_conditions(&cl);
        if report.pass {
            passing.push((cl, report));
        } else {
            candidates.push(Candidate {
                point: p.clone(),
                failures: report.failures(),
                conditions: report,
            });
        }
    }
    if passing.is_empty() {
        return Ok(SolveOutcome::NoSolution(NoSolution { shift, candidates }));
    }
    let also_passing = passing[1..].iter().map(|(cl, _)| cl.point.clone()).collect();
    let (cl, conditions) = passing.swap_remove(0);
    let a = &conditions.a;
    let beta1 = (&cl.a_l_minus - &cl.a_l_plus) / a;
    let beta2 = (&cl.a_l_minus - &cl.a_r_minus) / a;
    let value = (&cl.a_r_plus * &cl.a_l_minus - &cl.a_r_minus * &cl.a_l_plus) / a - &shift;
    let atom1 = Distribution1D::delta(game.omega1().clone(), cl.point.x.clone(), beta1.clone())?;
    let atom2 = Distribution1D::delta(game.omega2().clone(), cl.point.y.clone(), beta2.clone())?;
    Ok(SolveOutcome::Solved(Box::new(RPrimeSolution {
        point: cl.point.clone(),
        beta1,
        beta2,
        value,
        shift,
        conditions,
        limits: cl,
        also_passing,
        atom1,
        atom2,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{fixtures, payoff_rprime};
    use crate::rational::{half, q, qi};

    fn solved(g: &GameSpec) -> RPrimeSolution {
        solve_rprime(g, &[]).unwrap().solution().cloned().expect("solution")
    }

    #[test]
    fn example_solution() {
        let s = solved(&fixtures::example());
        assert_eq!(s.point, Point::ints(0, 0));
        assert_eq!((&s.beta1, &s.beta2), (&half(), &half()));
        assert_eq!(s.value, half());
        assert_eq!(s.shift, qi(0));
        assert!(s.also_passing.is_empty());
        let v = payoff_rprime(&fixtures::example(), &s.atom1, &s.atom2).unwrap();
        assert_eq!(v.value(), Some(&s.value));
    }

    #[test]
    fn scaled_and_shifted() {
        let g = fixtures::example();
        let tripled = g.with_payoff(g.payoff().scale(&qi(3))).unwrap();
        let s = solved(&tripled);
        assert_eq!((&s.beta1, &s.beta2, &s.value), (&half(), &half(), &q(3, 2)));
        let lowered = g.with_payoff(g.payoff().add_constant(&qi(-4))).unwrap();
        let s = solved(&lowered);
        assert_eq!(s.shift, qi(4));
        assert_eq!(s.value, q(-7, 2));
    }

    #[test]
    fn continuous_payoff_has_no_candidates_passing() {
        let g = fixtures::example();
        let flat = g.with_payoff(crate::regulated2d::PiecewiseFn2D::constant(g.payoff().domain().clone(), qi(2))).unwrap();
        match solve_rprime(&flat, &[Point::new(q(1, 3), q(1, 3))]).unwrap() {
            SolveOutcome::NoSolution(n) => {
                assert_eq!(n.candidates.len(), 1);
                assert!(n.candidates[0].failures.contains(&"A = 0".to_string()));
            }
            SolveOutcome::Solved(_) => panic!("constant payoff solved"),
        }
    }

    #[test]
    fn solution_json() {
        let s = solved(&fixtures::example());
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["beta1"], "1/2");
        assert_eq!(v["point"], serde_json::json!(["0", "0"]));
        assert_eq!(v["conditions"]["pass"], true);
    }
}
