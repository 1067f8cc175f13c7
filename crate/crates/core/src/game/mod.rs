//! Two-player zero-sum games on intervals with a regulated payoff.
//!
//! Player one picks `x1 ∈ X1` and receives `ρ(x1, x2)`; player two picks
//! `x2 ∈ X2`. Strategies in the extended sense are non-negative
//! distributions of unit mass, and the closed-form equilibrium is a pair of
//! one-sided delta atoms at a corner of the payoff's discontinuity set.

mod analysis;
mod corner;
mod payoff;
mod saddle;
pub mod sampling;
mod solve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::regulated1d::Interval;
use crate::regulated2d::PiecewiseFn2D;

pub use analysis::{
    mixed_analysis, pure_analysis, FictitiousPlay, MixedAnalysis, MixedParams, PureAnalysis,
    WitnessBounds, WitnessSample,
};
pub use corner::{check_conditions, corner_limits, Check, ConditionReport, CornerLimits, Dominance};
pub use payoff::{payoff_rprime, PayoffOutcome};
pub use saddle::{saddle_verify, SaddleReport};
pub use solve::{solve_rprime, Candidate, NoSolution, RPrimeSolution, SolveOutcome};

/// `G = (X1, X2, ρ)` with `cl(Xi) ⊂ Ωi` and `ρ` defined on `Ω1 × Ω2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct GameSpec {
    x1: Interval,
    x2: Interval,
    payoff: PiecewiseFn2D,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(rename = "X1")]
    x1: Interval,
    #[serde(rename = "X2")]
    x2: Interval,
    #[serde(rename = "Omega1")]
    omega1: Interval,
    #[serde(rename = "Omega2")]
    omega2: Interval,
    payoff: PiecewiseFn2D,
}

impl TryFrom<Wire> for GameSpec {
    type Error = Error;
    fn try_from(w: Wire) -> Result<Self> {
        if w.payoff.domain() != &Rect::new(w.omega1, w.omega2) {
            return Err(Error::DomainMismatch(
                "payoff domain differs from Omega1 x Omega2".into(),
            ));
        }
        GameSpec::new(w.x1, w.x2, w.payoff)
    }
}

impl From<GameSpec> for Wire {
    fn from(g: GameSpec) -> Self {
        Wire {
            omega1: g.payoff.domain().x.clone(),
            omega2: g.payoff.domain().y.clone(),
            x1: g.x1,
            x2: g.x2,
            payoff: g.payoff,
        }
    }
}

impl GameSpec {
    pub fn new(x1: Interval, x2: Interval, payoff: PiecewiseFn2D) -> Result<Self> {
        let d = payoff.domain();
        if !d.x.compactly_contains(&x1) || !d.y.compactly_contains(&x2) {
            return Err(Error::NotCompactlyContained(format!(
                "strategy sets {x1} x {x2} must have closures inside {d}"
            )));
        }
        Ok(GameSpec { x1, x2, payoff })
    }

    pub fn x1(&self) -> &Interval {
        &self.x1
    }

    pub fn x2(&self) -> &Interval {
        &self.x2
    }

    pub fn payoff(&self) -> &PiecewiseFn2D {
        &self.payoff
    }

    pub fn omega1(&self) -> &Interval {
        &self.payoff.domain().x
    }

    pub fn omega2(&self) -> &Interval {
        &self.payoff.domain().y
    }

    /// Same strategy sets, payoff replaced.
    pub fn with_payoff(&self, payoff: PiecewiseFn2D) -> Result<Self> {
        GameSpec::new(self.x1.clone(), self.x2.clone(), payoff)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::geometry::{HalfPlane, Region, RegionSet};
    use crate::poly2::Poly2;
    use crate::rational::qi;
    use crate::regulated2d::Clause;

    pub fn unit() -> Interval {
        Interval::new(qi(-1), qi(1)).unwrap()
    }

    /// The example game: 1 on the two triangles cut from the open quadrants
    /// by `|x1 + x2| < 1`, 0 elsewhere, strategies in `(-1, 1)`.
    pub fn example() -> GameSpec {
        let big = Interval::new(qi(-2), qi(2)).unwrap();
        let upper = Region::new(vec![
            HalfPlane::x_gt(qi(0)),
            HalfPlane::y_gt(qi(0)),
            HalfPlane::lt(qi(1), qi(1), qi(1)),
        ]);
        let lower = Region::new(vec![
            HalfPlane::x_lt(qi(0)),
            HalfPlane::y_lt(qi(0)),
            HalfPlane::lt(qi(-1), qi(-1), qi(1)),
        ]);
        let payoff = PiecewiseFn2D::new(
            Rect::new(big.clone(), big),
            vec![Clause {
                regions: RegionSet::new(vec![upper, lower], vec![]),
                poly: Poly2::constant(qi(1)),
            }],
            Poly2::zero(),
        );
        GameSpec::new(unit(), unit(), payoff).unwrap()
    }
}
