//! Payoff of a pair of distribution strategies as two iterated integrals.

use num_traits::One;
use serde::Serialize;

use crate::distributions::Distribution1D;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Q};
use crate::regulated1d::{Interval, PiecewiseFn1D};
use crate::regulated2d::{Axis, PiecewiseFn2D, Side};

use super::GameSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PayoffOutcome {
    Defined {
        #[serde(with = "crate::rational::serde_q")]
        value: Q,
    },
    /// The two orders of integration disagree, so the pair is not a pair of
    /// strategies in the extended game.
    OrderDependent {
        #[serde(with = "crate::rational::serde_q")]
        inner_x2_first: Q,
        #[serde(with = "crate::rational::serde_q")]
        inner_x1_first: Q,
    },
}

impl PayoffOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            PayoffOutcome::Defined { value } => Some(value),
            PayoffOutcome::OrderDependent { .. } => None,
        }
    }
}

fn check_probability(v: &Distribution1D, omega: &Interval, x: &Interval, who: &str) -> Result<()> {
    if v.domain() != omega {
        return Err(Error::DomainMismatch(format!("{who} lives on {}, expected {omega}", v.domain())));
    }
    if !v.is_nonneg() {
        return Err(Error::NotProbability(format!("{who} is not non-negative")));
    }
    let mass = v.integrate(x.lo(), x.hi())?;
    if !mass.is_one() {
        return Err(Error::NotProbability(format!(
            "{who} has mass {} on {x}",
            format_rational(&mass)
        )));
    }
    Ok(())
}

/// `x ↦ ∫_{Y} g(x, y) v(y) dy` where `g` is laid out with `x` first.
pub(crate) fn inner_integral(g: &PiecewiseFn2D, v: &Distribution1D, y: &Interval) -> Result<PiecewiseFn1D> {
    let mut acc = g.integrate_y(Some(v.regular_part()), y.lo(), y.hi())?;
    for atom in v.atoms() {
        // χ_Y seen from the atom: the right limit counts iff p ∈ [lo, hi)
        if y.lo() <= &atom.p && &atom.p < y.hi() {
            let s = g.slice_limits(Axis::X2, &atom.p, Side::Plus)?;
            acc = acc.add(&s.scale(&atom.right))?;
        }
        if y.lo() < &atom.p && &atom.p <= y.hi() {
            let s = g.slice_limits(Axis::X2, &atom.p, Side::Minus)?;
            acc = acc.add(&s.scale(&atom.left))?;
        }
    }
    Ok(acc)
}

/// `∫_X f v`, i.e. `(v, f χ_X)`.
pub(crate) fn outer_integral(f: &PiecewiseFn1D, v: &Distribution1D, x: &Interval) -> Result<Q> {
    v.multiply(f)?.integrate(x.lo(), x.hi())
}

/// `∫_{X1}(∫_{X2} ρ v2 dx2) v1 dx1` and the other order; the common value
/// when they agree.
pub fn payoff_rprime(game: &GameSpec, v1: &Distribution1D, v2: &Distribution1D) -> Result<PayoffOutcome> {
    check_probability(v1, game.omega1(), game.x1(), "v1")?;
    check_probability(v2, game.omega2(), game.x2(), "v2")?;
    payoff_unchecked(game, v1, v2)
}

pub(crate) fn payoff_unchecked(game: &GameSpec, v1: &Distribution1D, v2: &Distribution1D) -> Result<PayoffOutcome> {
    let rho = game.payoff();
    let tau = inner_integral(rho, v2, game.x2())?;
    let first = outer_integral(&tau, v1, game.x1())?;
    let sigma = inner_integral(&rho.transpose(), v1, game.x1())?;
    let second = outer_integral(&sigma, v2, game.x2())?;
    Ok(if first == second {
        PayoffOutcome::Defined { value: first }
    } else {
        PayoffOutcome::OrderDependent {
            inner_x2_first: first,
            inner_x1_first: second,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures;
    use crate::geometry::{HalfPlane, Rect, Region, RegionSet};
    use crate::rational::{half, q, qi};

    fn defined(o: PayoffOutcome) -> Q {
        o.value().cloned().expect("defined payoff")
    }

    fn big() -> Interval {
        Interval::new(qi(-2), qi(2)).unwrap()
    }

    fn uniform_on_unit() -> Distribution1D {
        Distribution1D::regular(PiecewiseFn1D::indicator(big(), &qi(-1), &qi(1)).unwrap().scale(&half()))
    }

    #[test]
    fn half_deltas_at_the_corner() {
        let g = fixtures::example();
        let d = Distribution1D::delta(big(), qi(0), half()).unwrap();
        assert_eq!(defined(payoff_rprime(&g, &d, &d).unwrap()), half());
    }

    #[test]
    fn uniform_densities() {
        let g = fixtures::example();
        let u = uniform_on_unit();
        assert_eq!(defined(payoff_rprime(&g, &u, &u).unwrap()), q(1, 4));
    }

    #[test]
    fn right_atom_against_uniform() {
        let g = fixtures::example();
        let d = Distribution1D::delta_plus(big(), half()).unwrap();
        // ρ(1/2+, x2) = 1 exactly for 0 < x2 < 1/2
        assert_eq!(defined(payoff_rprime(&g, &d, &uniform_on_unit()).unwrap()), q(1, 4));
    }

    #[test]
    fn corner_on_a_slanted_line_depends_on_order() {
        let d = big();
        let rho = PiecewiseFn2D::indicator(
            Rect::new(d.clone(), d.clone()),
            RegionSet::from(Region::new(vec![HalfPlane::lt(qi(-1), qi(1), qi(0))])),
        );
        let g = GameSpec::new(fixtures::unit(), fixtures::unit(), rho).unwrap();
        let plus = Distribution1D::delta_plus(d, qi(0)).unwrap();
        assert_eq!(
            payoff_rprime(&g, &plus, &plus).unwrap(),
            PayoffOutcome::OrderDependent {
                inner_x2_first: qi(1),
                inner_x1_first: qi(0)
            }
        );
    }

    #[test]
    fn rejects_non_probabilities() {
        let g = fixtures::example();
        let d = Distribution1D::delta(big(), qi(0), qi(2)).unwrap();
        assert!(matches!(payoff_rprime(&g, &d, &d), Err(Error::NotProbability(_))));
        let heavy = uniform_on_unit().scale(&qi(2));
        assert!(matches!(payoff_rprime(&g, &heavy, &uniform_on_unit()), Err(Error::NotProbability(_))));
    }
}
