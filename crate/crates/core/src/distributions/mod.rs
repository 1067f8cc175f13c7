//! Distributions over regulated test functions: a regular piecewise density
//! plus finitely many directional delta atoms.
//!
//! An atom is stored as an angular *measure* rather than a weight times a
//! normalised density: in one dimension the pair of masses sitting just
//! right and just left of the point, in two dimensions a piecewise-constant
//! mass per turn. Pairing, products and sums are then plain arithmetic on
//! the measure, and an atom whose total mass is zero but whose measure is
//! not (say `½δ⁺ − ½δ⁻`) is kept, since it still acts on discontinuous
//! test functions.

pub mod quad;
pub mod sequence;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::angular::ArcFn;
use crate::error::{Error, Result};
use crate::geometry::{Point, RegionSet};
use crate::rational::{format_rational, Rat, Q};
use crate::regulated1d::{Interval, PiecewiseFn1D};
use crate::regulated2d::PiecewiseFn2D;

/// Normalised angular density (total mass one).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AngularDensity {
    /// Mass `beta` on the direction `+1`, `1 - beta` on `-1`.
    Line { beta: Q },
    /// Density per turn on the circle.
    Planar(ArcFn),
}

impl AngularDensity {
    pub fn line(beta: Q) -> Self {
        AngularDensity::Line { beta }
    }

    pub fn planar(alpha: ArcFn) -> Result<Self> {
        let m = alpha.integral();
        if !m.is_one() {
            return Err(Error::InvalidArgument(format!(
                "angular density has total mass {}, not 1",
                format_rational(&m)
            )));
        }
        Ok(AngularDensity::Planar(alpha))
    }

    pub fn uniform_planar() -> Self {
        AngularDensity::Planar(ArcFn::constant(Q::one()))
    }
}

/// Atom at `p` on a line: mass `right` tested by `φ(p+)`, `left` by `φ(p-)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom1 {
    pub p: Q,
    pub right: Q,
    pub left: Q,
}

impl Atom1 {
    pub fn weight(&self) -> Q {
        &self.right + &self.left
    }

    /// Normalised right mass; `None` for a zero-weight atom.
    pub fn beta(&self) -> Option<Q> {
        let w = self.weight();
        (!w.is_zero()).then(|| &self.right / w)
    }

    fn is_null(&self) -> bool {
        self.right.is_zero() && self.left.is_zero()
    }
}

/// Atom at `p` in the plane with angular measure `measure` (mass per turn).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom2 {
    pub p: Point,
    pub measure: ArcFn,
}

impl Atom2 {
    pub fn weight(&self) -> Q {
        self.measure.integral()
    }

    /// Normalised density; `None` for a zero-weight atom.
    pub fn alpha(&self) -> Option<ArcFn> {
        let w = self.weight();
        (!w.is_zero()).then(|| self.measure.scale(&(Q::one() / w)))
    }
}

/// Element of the dual of regulated test functions on an interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire1", into = "Wire1")]
pub struct Distribution1D {
    regular: PiecewiseFn1D,
    atoms: Vec<Atom1>,
}

/// Element of the dual of regulated test functions on a rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire2", into = "Wire2")]
pub struct Distribution2D {
    regular: PiecewiseFn2D,
    atoms: Vec<Atom2>,
}

/// Either dimension, for callers that read distributions from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Distribution {
    One(Distribution1D),
    Two(Distribution2D),
}

impl Distribution1D {
    /// Atoms at equal points are merged and null atoms dropped.
    pub fn new(regular: PiecewiseFn1D, atoms: Vec<Atom1>) -> Result<Self> {
        let mut merged: BTreeMap<Q, (Q, Q)> = BTreeMap::new();
        for a in atoms {
            if !regular.domain().contains(&a.p) {
                return Err(Error::OutsideDomain(format!(
                    "atom at {} outside {}",
                    format_rational(&a.p),
                    regular.domain()
                )));
            }
            let e = merged.entry(a.p).or_insert_with(|| (Q::zero(), Q::zero()));
            e.0 += a.right;
            e.1 += a.left;
        }
        let atoms = merged
            .into_iter()
            .map(|(p, (right, left))| Atom1 { p, right, left })
            .filter(|a| !a.is_null())
            .collect();
        Ok(Distribution1D { regular, atoms })
    }

    pub fn zero(domain: Interval) -> Self {
        Distribution1D {
            regular: PiecewiseFn1D::zero(domain),
            atoms: Vec::new(),
        }
    }

    pub fn regular(g: PiecewiseFn1D) -> Self {
        Distribution1D {
            regular: g,
            atoms: Vec::new(),
        }
    }

    /// `δ_p^α` with `α(1) = beta`.
    pub fn delta(domain: Interval, p: Q, beta: Q) -> Result<Self> {
        let left = Q::one() - &beta;
        Self::new(
            PiecewiseFn1D::zero(domain),
            vec![Atom1 { p, right: beta, left }],
        )
    }

    pub fn delta_plus(domain: Interval, p: Q) -> Result<Self> {
        Self::delta(domain, p, Q::one())
    }

    pub fn delta_minus(domain: Interval, p: Q) -> Result<Self> {
        Self::delta(domain, p, Q::zero())
    }

    pub fn domain(&self) -> &Interval {
        self.regular.domain()
    }

    pub fn regular_part(&self) -> &PiecewiseFn1D {
        &self.regular
    }

    pub fn atoms(&self) -> &[Atom1] {
        &self.atoms
    }

    /// `(f, φ)` for compactly supported `φ`.
    pub fn pair(&self, phi: &PiecewiseFn1D) -> Result<Q> {
        phi.check_compact_support()?;
        self.pair_unchecked(phi)
    }

    fn pair_unchecked(&self, phi: &PiecewiseFn1D) -> Result<Q> {
        let mut total = self.regular.mul(phi)?.integral();
        for a in &self.atoms {
            total += &a.right * phi.limit_right(&a.p)? + &a.left * phi.limit_left(&a.p)?;
        }
        Ok(total)
    }

    /// `g f`, with `(g f, φ) = (f, g φ)`.
    pub fn multiply(&self, g: &PiecewiseFn1D) -> Result<Self> {
        let regular = g.mul(&self.regular)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom1 {
                    p: a.p.clone(),
                    right: &a.right * g.limit_right(&a.p)?,
                    left: &a.left * g.limit_left(&a.p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(regular, atoms)
    }

    /// `∫_{(a, b)} f = (f, χ_(a,b))`, for `[a, b]` inside the domain.
    pub fn integrate(&self, a: &Q, b: &Q) -> Result<Q> {
        let d = self.domain();
        if !(d.lo() < a && a < b && b < d.hi()) {
            return Err(Error::NotCompactlyContained(format!(
                "({}, {}) is not compactly inside {}",
                format_rational(a),
                format_rational(b),
                d
            )));
        }
        self.pair_unchecked(&PiecewiseFn1D::indicator(d.clone(), a, b)?)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(
            self.regular.scale(k),
            self.atoms
                .iter()
                .map(|a| Atom1 {
                    p: a.p.clone(),
                    right: &a.right * k,
                    left: &a.left * k,
                })
                .collect(),
        )
        .expect("same points")
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let regular = self.regular.add(&o.regular)?;
        Self::new(regular, self.atoms.iter().chain(o.atoms.iter()).cloned().collect())
    }

    /// `Σ c_i f_i`.
    pub fn linear_combine(coeffs: &[Q], fs: &[Self]) -> Result<Self> {
        if coeffs.len() != fs.len() || fs.is_empty() {
            return Err(Error::InvalidArgument("need one coefficient per distribution".into()));
        }
        let mut acc = Self::zero(fs[0].domain().clone());
        for (c, f) in coeffs.iter().zip(fs) {
            acc = acc.add(&f.scale(c))?;
        }
        Ok(acc)
    }

    /// Non-negative density and non-negative masses on both sides of every
    /// atom. For this class that is the same as `(f, φ) ≥ 0` for all `φ ≥ 0`.
    pub fn is_nonneg(&self) -> bool {
        self.regular
            .cells()
            .all(|(a, b, p)| !p.exists_negative_on(a, b))
            && self
                .atoms
                .iter()
                .all(|a| !a.right.is_negative() && !a.left.is_negative())
    }
}

impl Distribution2D {
    pub fn new(regular: PiecewiseFn2D, atoms: Vec<Atom2>) -> Result<Self> {
        let mut merged: BTreeMap<Point, ArcFn> = BTreeMap::new();
        for a in atoms {
            if !regular.domain().contains(&a.p) {
                return Err(Error::OutsideDomain(format!(
                    "atom at {} outside {}",
                    a.p,
                    regular.domain()
                )));
            }
            let e = merged.entry(a.p).or_insert_with(ArcFn::zero);
            *e = e.add(&a.measure);
        }
        let atoms = merged
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(p, measure)| Atom2 { p, measure })
            .collect();
        Ok(Distribution2D { regular, atoms })
    }

    pub fn zero(domain: crate::geometry::Rect) -> Self {
        Distribution2D {
            regular: PiecewiseFn2D::zero(domain),
            atoms: Vec::new(),
        }
    }

    pub fn regular(g: PiecewiseFn2D) -> Self {
        Distribution2D {
            regular: g,
            atoms: Vec::new(),
        }
    }

    /// `δ_p^α` for a density per turn of total mass one.
    pub fn delta(domain: crate::geometry::Rect, p: Point, alpha: ArcFn) -> Result<Self> {
        AngularDensity::planar(alpha.clone())?;
        Self::new(PiecewiseFn2D::zero(domain), vec![Atom2 { p, measure: alpha }])
    }

    pub fn domain(&self) -> &crate::geometry::Rect {
        self.regular.domain()
    }

    pub fn regular_part(&self) -> &PiecewiseFn2D {
        &self.regular
    }

    pub fn atoms(&self) -> &[Atom2] {
        &self.atoms
    }

    pub fn pair(&self, phi: &PiecewiseFn2D) -> Result<Q> {
        phi.check_compact_support()?;
        self.pair_unchecked(phi)
    }

    fn pair_unchecked(&self, phi: &PiecewiseFn2D) -> Result<Q> {
        let mut total = if self.regular.is_zero_syntactically() {
            Q::zero()
        } else {
            self.regular.mul(phi)?.integral()
        };
        for a in &self.atoms {
            total += a.measure.mul(&phi.surrounding_value(&a.p)?).integral();
        }
        Ok(total)
    }

    pub fn multiply(&self, g: &PiecewiseFn2D) -> Result<Self> {
        if g.domain() != self.domain() {
            return Err(Error::DomainMismatch(format!("{} vs {}", g.domain(), self.domain())));
        }
        let regular = if self.regular.is_zero_syntactically() {
            PiecewiseFn2D::zero(self.domain().clone())
        } else {
            g.mul(&self.regular)?
        };
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom2 {
                    p: a.p.clone(),
                    measure: a.measure.mul(&g.surrounding_value(&a.p)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(regular, atoms)
    }

    /// `∫_S f = (f, χ_S)` for `S` with closure inside the domain.
    pub fn integrate(&self, s: &RegionSet) -> Result<Q> {
        if !s.compactly_inside(self.domain()) {
            return Err(Error::NotCompactlyContained(format!(
                "region is not compactly inside {}",
                self.domain()
            )));
        }
        self.pair_unchecked(&PiecewiseFn2D::indicator(self.domain().clone(), s.clone()))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(
            self.regular.scale(k),
            self.atoms
                .iter()
                .map(|a| Atom2 {
                    p: a.p.clone(),
                    measure: a.measure.scale(k),
                })
                .collect(),
        )
        .expect("same points")
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.domain() != o.domain() {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain(), o.domain())));
        }
        let regular = if o.regular.is_zero_syntactically() {
            self.regular.clone()
        } else if self.regular.is_zero_syntactically() {
            o.regular.clone()
        } else {
            self.regular.add(&o.regular)?
        };
        Self::new(regular, self.atoms.iter().chain(o.atoms.iter()).cloned().collect())
    }

    pub fn linear_combine(coeffs: &[Q], fs: &[Self]) -> Result<Self> {
        if coeffs.len() != fs.len() || fs.is_empty() {
            return Err(Error::InvalidArgument("need one coefficient per distribution".into()));
        }
        let mut acc = Self::zero(fs[0].domain().clone());
        for (c, f) in coeffs.iter().zip(fs) {
            acc = acc.add(&f.scale(c))?;
        }
        Ok(acc)
    }

    pub fn is_nonneg(&self) -> bool {
        self.regular.is_nonneg() && self.atoms.iter().all(|a| a.measure.is_nonneg())
    }

    /// Equality as functionals: equal atoms and regular parts that agree
    /// almost everywhere.
    pub fn equivalent(&self, o: &Self) -> Result<bool> {
        if self.atoms != o.atoms {
            return Ok(false);
        }
        self.regular.equivalent(&o.regular)
    }
}

impl Distribution {
    pub fn is_nonneg(&self) -> bool {
        match self {
            Distribution::One(d) => d.is_nonneg(),
            Distribution::Two(d) => d.is_nonneg(),
        }
    }
}

// ---- wire formats -------------------------------------------------------

#[derive(Serialize, Deserialize, Default)]
struct AlphaWire {
    dim: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    beta: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    right: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    left: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    arcs: Option<ArcFn>,
}

#[derive(Serialize, Deserialize)]
struct AtomWire<P> {
    p: P,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    weight: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    alpha: Option<AlphaWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    measure: Option<AlphaWire>,
}

#[derive(Serialize, Deserialize)]
struct Wire1 {
    regular: PiecewiseFn1D,
    #[serde(default)]
    atoms: Vec<AtomWire<Rat>>,
}

#[derive(Serialize, Deserialize)]
struct Wire2 {
    regular: PiecewiseFn2D,
    #[serde(default)]
    atoms: Vec<AtomWire<Point>>,
}

fn atom_parts<P>(w: AtomWire<P>, dim: u8) -> Result<(P, AlphaWire, Q)> {
    match (w.weight, w.alpha, w.measure) {
        (Some(weight), Some(alpha), None) => Ok((w.p, alpha, weight.0)),
        (None, None, Some(m)) => Ok((w.p, m, Q::zero())),
        _ => Err(Error::Malformed(
            "an atom needs either weight and alpha, or measure".into(),
        )),
    }
    .and_then(|(p, a, wt)| {
        if a.dim != dim {
            Err(Error::Malformed(format!("expected a dim {dim} angular density, got dim {}", a.dim)))
        } else {
            Ok((p, a, wt))
        }
    })
}

impl TryFrom<Wire1> for Distribution1D {
    type Error = Error;
    fn try_from(w: Wire1) -> Result<Self> {
        let mut atoms = Vec::new();
        for aw in w.atoms {
            let normalized = aw.weight.is_some();
            let (p, a, weight) = atom_parts(aw, 1)?;
            let atom = if normalized {
                let beta = a
                    .beta
                    .ok_or_else(|| Error::Malformed("1D alpha needs beta".into()))?
                    .0;
                Atom1 {
                    p: p.0,
                    right: &weight * &beta,
                    left: &weight * (Q::one() - beta),
                }
            } else {
                let (r, l) = a
                    .right
                    .zip(a.left)
                    .ok_or_else(|| Error::Malformed("1D measure needs right and left".into()))?;
                Atom1 {
                    p: p.0,
                    right: r.0,
                    left: l.0,
                }
            };
            atoms.push(atom);
        }
        Distribution1D::new(w.regular, atoms)
    }
}

impl From<Distribution1D> for Wire1 {
    fn from(d: Distribution1D) -> Self {
        let atoms = d
            .atoms
            .into_iter()
            .map(|a| match a.beta() {
                Some(beta) => AtomWire {
                    p: Rat(a.p.clone()),
                    weight: Some(Rat(a.weight())),
                    alpha: Some(AlphaWire {
                        dim: 1,
                        beta: Some(Rat(beta)),
                        ..Default::default()
                    }),
                    measure: None,
                },
                None => AtomWire {
                    p: Rat(a.p),
                    weight: None,
                    alpha: None,
                    measure: Some(AlphaWire {
                        dim: 1,
                        right: Some(Rat(a.right)),
                        left: Some(Rat(a.left)),
                        ..Default::default()
                    }),
                },
            })
            .collect();
        Wire1 {
            regular: d.regular,
            atoms,
        }
    }
}

impl TryFrom<Wire2> for Distribution2D {
    type Error = Error;
    fn try_from(w: Wire2) -> Result<Self> {
        let mut atoms = Vec::new();
        for aw in w.atoms {
            let normalized = aw.weight.is_some();
            let (p, a, weight) = atom_parts(aw, 2)?;
            let arcs = a
                .arcs
                .ok_or_else(|| Error::Malformed("2D alpha needs arcs".into()))?;
            let measure = if normalized {
                AngularDensity::planar(arcs.clone())?;
                arcs.scale(&weight)
            } else {
                arcs
            };
            atoms.push(Atom2 { p, measure });
        }
        Distribution2D::new(w.regular, atoms)
    }
}

impl From<Distribution2D> for Wire2 {
    fn from(d: Distribution2D) -> Self {
        let atoms = d
            .atoms
            .into_iter()
            .map(|a| match a.alpha() {
                Some(alpha) => AtomWire {
                    p: a.p.clone(),
                    weight: Some(Rat(a.weight())),
                    alpha: Some(AlphaWire {
                        dim: 2,
                        arcs: Some(alpha),
                        ..Default::default()
                    }),
                    measure: None,
                },
                None => AtomWire {
                    p: a.p,
                    weight: None,
                    alpha: None,
                    measure: Some(AlphaWire {
                        dim: 2,
                        arcs: Some(a.measure),
                        ..Default::default()
                    }),
                },
            })
            .collect();
        Wire2 {
            regular: d.regular,
            atoms,
        }
    }
}
