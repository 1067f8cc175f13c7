//! Regulated functions on an open rectangle, piecewise polynomial over
//! polyhedral regions.
//!
//! A function is an ordered list of clauses `(S_k, P_k)` plus a default
//! polynomial; at a point the first clause whose region contains it wins.
//! All boundary lines together form an arrangement, and every operation
//! that needs more than point evaluation works cell by cell on it: the
//! surrounding value looks at the lines through a point, slices look at
//! where lines cross a horizontal, and integration sweeps vertical slabs.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::angular::ArcFn;
use crate::error::{Error, Result};
use crate::geometry::{cmp_angle, turns_of, HalfPlane, Line, Point, Rect, RegionSet};
use crate::poly::Poly;
use crate::poly2::Poly2;
use crate::rational::{midpoint, qi, to_f64, Q};
use crate::regulated1d::PiecewiseFn1D;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub regions: RegionSet,
    pub poly: Poly2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Fix `x2`; the slice is a function of `x1`.
    X2,
    /// Fix `x1`; the slice is a function of `x2`.
    X1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Wire", into = "Wire")]
pub struct PiecewiseFn2D {
    domain: Rect,
    clauses: Vec<Clause>,
    default: Poly2,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    domain: Rect,
    #[serde(default)]
    clauses: Vec<Clause>,
    #[serde(default)]
    default: Poly2,
}

impl From<Wire> for PiecewiseFn2D {
    fn from(w: Wire) -> Self {
        PiecewiseFn2D::new(w.domain, w.clauses, w.default)
    }
}

impl From<PiecewiseFn2D> for Wire {
    fn from(g: PiecewiseFn2D) -> Self {
        Wire {
            domain: g.domain,
            clauses: g.clauses,
            default: g.default,
        }
    }
}

/// Vertical slab `(xa, xb)` cut between two non-crossing lines, with the
/// polynomial active inside.
#[derive(Clone, Debug)]
pub struct Strip {
    pub xa: Q,
    pub xb: Q,
    /// Lower boundary `y = s x + t`.
    pub lower: (Q, Q),
    pub upper: (Q, Q),
    pub poly: Poly2,
    /// A point strictly inside.
    pub sample: Point,
}

impl Strip {
    fn y_at(line: &(Q, Q), x: &Q) -> Q {
        &line.0 * x + &line.1
    }

    /// Corners of the closure (two may coincide).
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.xa.clone(), Self::y_at(&self.lower, &self.xa)),
            Point::new(self.xb.clone(), Self::y_at(&self.lower, &self.xb)),
            Point::new(self.xb.clone(), Self::y_at(&self.upper, &self.xb)),
            Point::new(self.xa.clone(), Self::y_at(&self.upper, &self.xa)),
        ]
    }
}

impl PiecewiseFn2D {
    /// Regions are pruned to their part of positive area inside `domain`;
    /// clauses left empty are dropped.
    pub fn new(domain: Rect, clauses: Vec<Clause>, default: Poly2) -> Self {
        let clauses = clauses
            .into_iter()
            .filter_map(|c| {
                let regions = c.regions.prune(&domain);
                (!regions.is_empty_syntactically()).then_some(Clause {
                    regions,
                    poly: c.poly,
                })
            })
            .collect();
        PiecewiseFn2D {
            domain,
            clauses,
            default,
        }
    }

    pub fn from_poly(domain: Rect, p: Poly2) -> Self {
        PiecewiseFn2D {
            domain,
            clauses: Vec::new(),
            default: p,
        }
    }

    pub fn constant(domain: Rect, c: Q) -> Self {
        Self::from_poly(domain, Poly2::constant(c))
    }

    pub fn zero(domain: Rect) -> Self {
        Self::from_poly(domain, Poly2::zero())
    }

    /// Characteristic function of `s`.
    pub fn indicator(domain: Rect, s: RegionSet) -> Self {
        Self::new(
            domain,
            vec![Clause {
                regions: s,
                poly: Poly2::constant(qi(1)),
            }],
            Poly2::zero(),
        )
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn default_poly(&self) -> &Poly2 {
        &self.default
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if !self.domain.contains(p) {
            return Err(Error::OutsideDomain(format!("{p} not in {}", self.domain)));
        }
        Ok(())
    }

    /// Polynomial of the first clause containing `p`.
    pub fn poly_at(&self, p: &Point) -> &Poly2 {
        self.clauses
            .iter()
            .find(|c| c.regions.contains(p))
            .map_or(&self.default, |c| &c.poly)
    }

    /// Polynomial active at `p + t d` for small `t > 0`.
    pub fn poly_near(&self, p: &Point, d: &Point) -> &Poly2 {
        self.clauses
            .iter()
            .find(|c| c.regions.contains_near(p, d))
            .map_or(&self.default, |c| &c.poly)
    }

    /// Value of this representative at `p` (first matching clause).
    pub fn eval(&self, p: &Point) -> Result<Q> {
        self.check_point(p)?;
        Ok(self.poly_at(p).eval(&p.x, &p.y))
    }

    pub fn lines(&self) -> BTreeSet<Line> {
        self.clauses
            .iter()
            .flat_map(|c| c.regions.halfplanes())
            .map(HalfPlane::line)
            .collect()
    }

    /// Every polynomial is zero (so the function is zero).
    pub fn is_zero_syntactically(&self) -> bool {
        self.default.is_zero() && self.clauses.iter().all(|c| c.poly.is_zero())
    }

    /// Equal almost everywhere, which for this class also means equal
    /// surrounding values at every point.
    pub fn equivalent(&self, o: &Self) -> Result<bool> {
        if self.domain != o.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, o.domain)));
        }
        let mut lines = self.lines();
        lines.extend(o.lines());
        let (ylo, yhi) = (self.domain.y.lo(), self.domain.y.hi());
        Ok(self
            .cells(&lines, ylo, yhi, &[])
            .iter()
            .all(|c| self.poly_at(&c.sample) == o.poly_at(&c.sample)))
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.default.is_constant() && self.clauses.iter().all(|c| c.poly.is_constant())
    }

    pub fn map_polys(&self, f: impl Fn(&Poly2) -> Poly2) -> Self {
        PiecewiseFn2D {
            domain: self.domain.clone(),
            clauses: self
                .clauses
                .iter()
                .map(|c| Clause {
                    regions: c.regions.clone(),
                    poly: f(&c.poly),
                })
                .collect(),
            default: f(&self.default),
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        self.map_polys(|p| p.scale(k))
    }

    pub fn add_constant(&self, c: &Q) -> Self {
        let cp = Poly2::constant(c.clone());
        self.map_polys(|p| p + &cp)
    }

    /// Pointwise combination. Clause pairs are listed in lexicographic order
    /// so first-match semantics of both operands carry over.
    pub fn zip_with(&self, o: &Self, f: impl Fn(&Poly2, &Poly2) -> Poly2) -> Result<Self> {
        if self.domain != o.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, o.domain)));
        }
        let plane = RegionSet::plane();
        let left: Vec<(&RegionSet, &Poly2)> = self
            .clauses
            .iter()
            .map(|c| (&c.regions, &c.poly))
            .chain(std::iter::once((&plane, &self.default)))
            .collect();
        let right: Vec<(&RegionSet, &Poly2)> = o
            .clauses
            .iter()
            .map(|c| (&c.regions, &c.poly))
            .chain(std::iter::once((&plane, &o.default)))
            .collect();
        let mut clauses = Vec::new();
        for (i, (ga, pa)) in left.iter().enumerate() {
            for (j, (hb, pb)) in right.iter().enumerate() {
                if i == left.len() - 1 && j == right.len() - 1 {
                    continue;
                }
                let region = if i == left.len() - 1 {
                    (*hb).clone()
                } else if j == right.len() - 1 {
                    (*ga).clone()
                } else {
                    ga.intersect(hb)
                };
                clauses.push(Clause {
                    regions: region,
                    poly: f(pa, pb),
                });
            }
        }
        Ok(Self::new(self.domain.clone(), clauses, f(&self.default, &o.default)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a * b)
    }

    /// Swap the two coordinates.
    pub fn transpose(&self) -> Self {
        PiecewiseFn2D {
            domain: self.domain.transpose(),
            clauses: self
                .clauses
                .iter()
                .map(|c| Clause {
                    regions: c.regions.transpose(),
                    poly: c.poly.transpose(),
                })
                .collect(),
            default: self.default.transpose(),
        }
    }

    /// `g(p)(s)` as a function of the direction `s`, in turns. Directions
    /// along a boundary line take the value of the arc counterclockwise
    /// from them.
    pub fn surrounding_value(&self, p: &Point) -> Result<ArcFn> {
        self.check_point(p)?;
        let mut dirs: Vec<Point> = Vec::new();
        for l in self.lines() {
            if l.passes_through(p) {
                let d = l.direction();
                dirs.push(d.neg());
                dirs.push(d);
            }
        }
        if dirs.is_empty() {
            return Ok(ArcFn::constant(self.poly_at(p).eval(&p.x, &p.y)));
        }
        dirs.sort_by(cmp_angle);
        dirs.dedup_by(|a, b| cmp_angle(a, b).is_eq());
        let n = dirs.len();
        let mut pairs: Vec<(Q, Q)> = Vec::with_capacity(n);
        for i in 0..n {
            let d = &dirs[i];
            let e = &dirs[(i + 1) % n];
            let rep = if d.cross(e).is_positive() { d.add(e) } else { d.rot90() };
            let v = self.poly_near(p, &rep).eval(&p.x, &p.y);
            let t = turns_of(d);
            match pairs.last_mut() {
                Some(last) if last.0 >= t => last.1 = v,
                _ => pairs.push((t, v)),
            }
        }
        Ok(ArcFn::from_starts(pairs))
    }

    /// `x1 ↦ g(x1, at±)` (axis `X2`) or `x2 ↦ g(at±, x2)` (axis `X1`).
    pub fn slice_limits(&self, axis: Axis, at: &Q, side: Side) -> Result<PiecewiseFn1D> {
        if axis == Axis::X1 {
            return self.transpose().slice_limits(Axis::X2, at, side);
        }
        if !self.domain.y.contains(at) {
            return Err(Error::OutsideDomain(format!(
                "slice at {} outside {}",
                crate::rational::format_rational(at),
                self.domain.y
            )));
        }
        let mut xs: Vec<Q> = self
            .lines()
            .into_iter()
            .filter(|l| !l.is_horizontal())
            .map(|l| (&l.c - &l.b * at) / &l.a)
            .filter(|x| self.domain.x.contains(x))
            .collect();
        xs.sort();
        xs.dedup();
        let dir = Point::new(qi(0), qi(side.sign()));
        let mut pieces = Vec::with_capacity(xs.len() + 1);
        for i in 0..=xs.len() {
            let a = if i == 0 { self.domain.x.lo() } else { &xs[i - 1] };
            let b = if i == xs.len() { self.domain.x.hi() } else { &xs[i] };
            let xm = midpoint(a, b);
            let poly = self.poly_near(&Point::new(xm, at.clone()), &dir);
            pieces.push(poly.restrict_y(at));
        }
        PiecewiseFn1D::new(self.domain.x.clone(), xs, pieces)
    }

    /// Decompose `domain.x × (ylo, yhi)` into slabs on which the active
    /// clause is fixed; horizontal lines `y = h` for `h` in `extra_y` are
    /// added as cuts.
    pub fn strips(&self, ylo: &Q, yhi: &Q, extra_y: &[Q]) -> Vec<Strip> {
        let mut out = self.cells(&self.lines(), ylo, yhi, extra_y);
        for s in &mut out {
            s.poly = self.poly_at(&s.sample).clone();
        }
        out
    }

    /// Strips of the arrangement of `lines`, with the polynomial left zero.
    fn cells(&self, all: &BTreeSet<Line>, ylo: &Q, yhi: &Q, extra_y: &[Q]) -> Vec<Strip> {
        let (xlo, xhi) = (self.domain.x.lo(), self.domain.x.hi());
        let mut verticals: Vec<Q> = Vec::new();
        let mut lines: BTreeSet<(Q, Q)> = BTreeSet::new();
        lines.insert((Q::zero(), ylo.clone()));
        lines.insert((Q::zero(), yhi.clone()));
        for h in extra_y {
            if ylo < h && h < yhi {
                lines.insert((Q::zero(), h.clone()));
            }
        }
        for l in all {
            match l.slope_intercept() {
                None => {
                    let x = l.vertical_x().expect("vertical");
                    if xlo < &x && &x < xhi {
                        verticals.push(x);
                    }
                }
                Some((s, t)) => {
                    let ya = &s * xlo + &t;
                    let yb = &s * xhi + &t;
                    let below = &ya < ylo && &yb < ylo;
                    let above = &ya > yhi && &yb > yhi;
                    if !below && !above {
                        lines.insert((s, t));
                    }
                }
            }
        }
        let lines: Vec<(Q, Q)> = lines.into_iter().collect();
        let mut xs: Vec<Q> = vec![xlo.clone(), xhi.clone()];
        xs.extend(verticals);
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                let (s1, t1) = &lines[i];
                let (s2, t2) = &lines[j];
                if s1 != s2 {
                    let x = (t2 - t1) / (s1 - s2);
                    if xlo < &x && &x < xhi {
                        xs.push(x);
                    }
                }
            }
        }
        xs.sort();
        xs.dedup();
        let mut out = Vec::new();
        for w in xs.windows(2) {
            let xm = midpoint(&w[0], &w[1]);
            let mut here: Vec<(Q, &(Q, Q))> = lines
                .iter()
                .map(|l| (&l.0 * &xm + &l.1, l))
                .filter(|(y, _)| ylo <= y && y <= yhi)
                .collect();
            here.sort_by(|a, b| a.0.cmp(&b.0));
            for pair in here.windows(2) {
                let ym = midpoint(&pair[0].0, &pair[1].0);
                let sample = Point::new(xm.clone(), ym);
                out.push(Strip {
                    xa: w[0].clone(),
                    xb: w[1].clone(),
                    lower: pair[0].1.clone(),
                    upper: pair[1].1.clone(),
                    poly: Poly2::zero(),
                    sample,
                });
            }
        }
        out
    }

    /// `x ↦ ∫_{ylo}^{yhi} g(x, y) w(y) dy` on `domain.x`, exactly. Without a
    /// weight, `w ≡ 1`.
    pub fn integrate_y(&self, weight: Option<&PiecewiseFn1D>, ylo: &Q, yhi: &Q) -> Result<PiecewiseFn1D> {
        if ylo >= yhi || !self.domain.y.contains_closed(ylo) || !self.domain.y.contains_closed(yhi) {
            return Err(Error::InvalidArgument("integration bounds outside the domain".into()));
        }
        if let Some(w) = weight {
            if !w.domain().contains_closed(ylo) || !w.domain().contains_closed(yhi) {
                return Err(Error::DomainMismatch("weight does not cover the integration range".into()));
            }
        }
        let extra: Vec<Q> = weight.map(|w| w.breakpoints().to_vec()).unwrap_or_default();
        let strips = self.strips(ylo, yhi, &extra);
        let mut bps: Vec<Q> = Vec::new();
        let mut pieces: Vec<Poly> = Vec::new();
        let mut current: Option<(Q, Q, Poly)> = None;
        for s in strips {
            let integrand = match weight {
                None => s.poly.clone(),
                Some(w) => {
                    let wp = w.pieces()[w.breakpoints().partition_point(|b| b < &s.sample.y)].clone();
                    &s.poly * &Poly2::from_poly_y(&wp)
                }
            };
            let anti = integrand.antiderivative_y();
            let piece = &anti.substitute_y_affine(&s.upper.0, &s.upper.1)
                - &anti.substitute_y_affine(&s.lower.0, &s.lower.1);
            match &mut current {
                Some((a, _, acc)) if *a == s.xa => *acc = &*acc + &piece,
                _ => {
                    if let Some((a, _, acc)) = current.take() {
                        if a != *self.domain.x.lo() {
                            bps.push(a);
                        }
                        pieces.push(acc);
                    }
                    current = Some((s.xa.clone(), s.xb.clone(), piece));
                }
            }
        }
        if let Some((a, _, acc)) = current.take() {
            if a != *self.domain.x.lo() {
                bps.push(a);
            }
            pieces.push(acc);
        }
        PiecewiseFn1D::new(self.domain.x.clone(), bps, pieces)
    }

    /// `∫∫ g` over the domain, exactly.
    pub fn integral(&self) -> Q {
        self.integrate_y(None, self.domain.y.lo(), self.domain.y.hi())
            .expect("domain bounds")
            .integral()
    }

    /// Exact for piecewise-affine functions; for higher degree a bounded
    /// branch-and-bound that answers `false` when it cannot certify.
    pub fn is_nonneg(&self) -> bool {
        self.strips(self.domain.y.lo(), self.domain.y.hi(), &[])
            .iter()
            .all(|s| strip_nonneg(s, 0))
    }

    /// Lower bound for `g` over the domain; the exact infimum when `g` is
    /// piecewise affine.
    pub fn lower_bound(&self) -> Q {
        self.strips(self.domain.y.lo(), self.domain.y.hi(), &[])
            .iter()
            .map(|s| {
                if s.poly.is_affine() {
                    s.corners()
                        .iter()
                        .map(|c| s.poly.eval(&c.x, &c.y))
                        .min()
                        .expect("four corners")
                } else {
                    let (ya, yb) = strip_y_range(s);
                    s.poly.bounds_on_rect(&s.xa, &s.xb, &ya, &yb).0
                }
            })
            .min()
            .unwrap_or_else(Q::zero)
    }

    /// Sufficient test for compact support inside the domain.
    pub fn check_compact_support(&self) -> Result<()> {
        let ok = self.default.is_zero()
            && self
                .clauses
                .iter()
                .all(|c| c.poly.is_zero() || c.regions.compactly_inside(&self.domain));
        if ok {
            Ok(())
        } else {
            Err(Error::NonCompactSupport(format!(
                "support not certified to be compact in {}",
                self.domain
            )))
        }
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }
}

fn strip_y_range(s: &Strip) -> (Q, Q) {
    let cs = s.corners();
    let lo = cs.iter().map(|c| c.y.clone()).min().expect("corners");
    let hi = cs.iter().map(|c| c.y.clone()).max().expect("corners");
    (lo, hi)
}

fn strip_nonneg(s: &Strip, depth: u32) -> bool {
    if s.poly.is_affine() {
        return s.corners().iter().all(|c| !s.poly.eval(&c.x, &c.y).is_negative());
    }
    let (ya, yb) = strip_y_range(s);
    if !s.poly.bounds_on_rect(&s.xa, &s.xb, &ya, &yb).0.is_negative() {
        return true;
    }
    let xm = midpoint(&s.xa, &s.xb);
    let ym = midpoint(&Strip::y_at(&s.lower, &xm), &Strip::y_at(&s.upper, &xm));
    if s.poly.eval(&xm, &ym).is_negative() || depth >= 12 {
        return false;
    }
    let halves = [(s.xa.clone(), xm.clone()), (xm, s.xb.clone())];
    halves.into_iter().all(|(a, b)| {
        let sub = Strip {
            xa: a,
            xb: b,
            lower: s.lower.clone(),
            upper: s.upper.clone(),
            poly: s.poly.clone(),
            sample: s.sample.clone(),
        };
        strip_nonneg(&sub, depth + 1)
    })
}

// regions as lists of [a, b, c] with a x + b y < c; polys as (i, j, coef)
type RegionsF64 = Vec<Vec<[f64; 3]>>;
type PolyF64 = Vec<(i32, i32, f64)>;

/// Floating-point mirror of a [`PiecewiseFn2D`] for quadrature oracles.
#[derive(Clone, Debug)]
pub struct Evaluator {
    clauses: Vec<(RegionsF64, RegionsF64, PolyF64)>,
    default: PolyF64,
}

fn terms_f64(p: &Poly2) -> Vec<(i32, i32, f64)> {
    p.terms().map(|(i, j, c)| (i as i32, j as i32, to_f64(c))).collect()
}

fn region_f64(r: &crate::geometry::Region) -> Vec<[f64; 3]> {
    r.halfplanes
        .iter()
        .map(|h| [to_f64(h.a()), to_f64(h.b()), to_f64(h.c())])
        .collect()
}

impl Evaluator {
    fn new(g: &PiecewiseFn2D) -> Self {
        Evaluator {
            clauses: g
                .clauses
                .iter()
                .map(|c| {
                    (
                        c.regions.positive().iter().map(region_f64).collect(),
                        c.regions.negative().iter().map(region_f64).collect(),
                        terms_f64(&c.poly),
                    )
                })
                .collect(),
            default: terms_f64(&g.default),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let inside = |r: &Vec<[f64; 3]>| r.iter().all(|h| h[0] * x + h[1] * y < h[2]);
        let poly = |t: &[(i32, i32, f64)]| -> f64 {
            t.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
        };
        for (pos, neg, t) in &self.clauses {
            if pos.iter().any(inside) && !neg.iter().any(inside) {
                return poly(t);
            }
        }
        poly(&self.default)
    }
}

impl fmt::Display for PiecewiseFn2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "on {}:", self.domain)?;
        for c in &self.clauses {
            let hs: Vec<String> = c.regions.halfplanes().map(|h| h.to_string()).collect();
            writeln!(f, "  [{}] -> {}", hs.join(", "), c.poly)?;
        }
        write!(f, "  otherwise -> {}", self.default)
    }
}
