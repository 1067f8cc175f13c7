//! Polyhedral regions of the plane with exact rational membership.
//!
//! A [`RegionSet`] is a union of convex regions minus another union of
//! convex regions. Besides plain membership it answers *local* membership:
//! whether `p + t d` lies in the set for all small `t > 0`, which is what
//! surrounding values and one-sided slices need.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, from_f64, midpoint, qi, to_f64, Rat, Q};
use crate::regulated1d::Interval;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Rat; 2]", into = "[Rat; 2]")]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(qi(x), qi(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn rot90(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn cross(&self, o: &Point) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn transpose(&self) -> Point {
        Point::new(self.y.clone(), self.x.clone())
    }
}

impl From<[Rat; 2]> for Point {
    fn from([x, y]: [Rat; 2]) -> Self {
        Point::new(x.0, y.0)
    }
}

impl From<Point> for [Rat; 2] {
    fn from(p: Point) -> Self {
        [Rat(p.x), Rat(p.y)]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Open rectangle `x × y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x: Interval, y: Interval) -> Self {
        Rect { x, y }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.x.contains(&p.x) && self.y.contains(&p.y)
    }

    pub fn transpose(&self) -> Rect {
        Rect::new(self.y.clone(), self.x.clone())
    }

    /// Corners of the closure, counterclockwise.
    pub fn corners(&self) -> Vec<Point> {
        vec![
            Point::new(self.x.lo().clone(), self.y.lo().clone()),
            Point::new(self.x.hi().clone(), self.y.lo().clone()),
            Point::new(self.x.hi().clone(), self.y.hi().clone()),
            Point::new(self.x.lo().clone(), self.y.hi().clone()),
        ]
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.x, self.y)
    }
}

/// `a x + b y < c` (strict) or `a x + b y ≤ c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(Rat, Rat, Rat, String)", into = "(Rat, Rat, Rat, String)")]
pub struct HalfPlane {
    a: Q,
    b: Q,
    c: Q,
    strict: bool,
}

impl TryFrom<(Rat, Rat, Rat, String)> for HalfPlane {
    type Error = Error;
    fn try_from((a, b, c, s): (Rat, Rat, Rat, String)) -> Result<Self> {
        let strict = match s.as_str() {
            "lt" | "<" => true,
            "le" | "<=" => false,
            other => return Err(Error::Malformed(format!("unknown sense {other:?}"))),
        };
        HalfPlane::new(a.0, b.0, c.0, strict)
    }
}

impl From<HalfPlane> for (Rat, Rat, Rat, String) {
    fn from(h: HalfPlane) -> Self {
        let s = if h.strict { "lt" } else { "le" };
        (Rat(h.a), Rat(h.b), Rat(h.c), s.to_string())
    }
}

impl HalfPlane {
    pub fn new(a: Q, b: Q, c: Q, strict: bool) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Malformed("half-plane with zero normal".into()));
        }
        Ok(HalfPlane { a, b, c, strict })
    }

    pub fn lt(a: Q, b: Q, c: Q) -> Self {
        HalfPlane::new(a, b, c, true).expect("nonzero normal")
    }

    pub fn le(a: Q, b: Q, c: Q) -> Self {
        HalfPlane::new(a, b, c, false).expect("nonzero normal")
    }

    /// `x > v`.
    pub fn x_gt(v: Q) -> Self {
        Self::lt(qi(-1), qi(0), -v)
    }

    /// `x < v`.
    pub fn x_lt(v: Q) -> Self {
        Self::lt(qi(1), qi(0), v)
    }

    /// `y > v`.
    pub fn y_gt(v: Q) -> Self {
        Self::lt(qi(0), qi(-1), -v)
    }

    /// `y < v`.
    pub fn y_lt(v: Q) -> Self {
        Self::lt(qi(0), qi(1), v)
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    pub fn c(&self) -> &Q {
        &self.c
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `a x + b y - c`.
    pub fn value(&self, p: &Point) -> Q {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        let v = self.value(p);
        v.is_negative() || (!self.strict && v.is_zero())
    }

    /// Whether `p + t d` is inside for every small `t > 0`.
    pub fn contains_near(&self, p: &Point, d: &Point) -> bool {
        let v = self.value(p);
        if !v.is_zero() {
            return v.is_negative();
        }
        let w = &self.a * &d.x + &self.b * &d.y;
        if !w.is_zero() {
            return w.is_negative();
        }
        !self.strict
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        self.value(p).is_zero()
    }

    pub fn line(&self) -> Line {
        Line::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn transpose(&self) -> HalfPlane {
        HalfPlane {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            strict: self.strict,
        }
    }

    fn complement(&self) -> HalfPlane {
        HalfPlane {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            strict: !self.strict,
        }
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x + {}y {} {}",
            format_rational(&self.a),
            format_rational(&self.b),
            if self.strict { "<" } else { "<=" },
            format_rational(&self.c)
        )
    }
}

/// The line `a x + b y = c`, normalised so the first nonzero of `(a, b)`
/// is 1. Equal lines compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Line {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        let k = if a.is_zero() { b.clone() } else { a.clone() };
        Line {
            a: a / &k,
            b: b / &k,
            c: c / &k,
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.is_zero()
    }

    /// Direction vector `(-b, a)`.
    pub fn direction(&self) -> Point {
        Point::new(-&self.b, self.a.clone())
    }

    pub fn passes_through(&self, p: &Point) -> bool {
        (&self.a * &p.x + &self.b * &p.y - &self.c).is_zero()
    }

    /// `(s, t)` with the line written `y = s x + t`; `None` when vertical.
    pub fn slope_intercept(&self) -> Option<(Q, Q)> {
        if self.b.is_zero() {
            return None;
        }
        Some((-&self.a / &self.b, &self.c / &self.b))
    }

    /// `x` on a vertical line.
    pub fn vertical_x(&self) -> Option<Q> {
        self.b.is_zero().then(|| &self.c / &self.a)
    }

    pub fn intersect(&self, o: &Line) -> Option<Point> {
        let det = &self.a * &o.b - &self.b * &o.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.c * &o.b - &self.b * &o.c) / &det;
        let y = (&self.a * &o.c - &self.c * &o.a) / &det;
        Some(Point::new(x, y))
    }

    pub fn transpose(&self) -> Line {
        Line::new(self.b.clone(), self.a.clone(), self.c.clone())
    }
}

/// Convex region: intersection of half-planes (the plane when empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Region {
    pub halfplanes: Vec<HalfPlane>,
}

impl Region {
    pub fn new(halfplanes: Vec<HalfPlane>) -> Self {
        Region { halfplanes }
    }

    pub fn plane() -> Self {
        Region::default()
    }

    /// Open box `(x0, x1) × (y0, y1)`.
    pub fn open_box(x0: Q, x1: Q, y0: Q, y1: Q) -> Self {
        Region::new(vec![
            HalfPlane::x_gt(x0),
            HalfPlane::x_lt(x1),
            HalfPlane::y_gt(y0),
            HalfPlane::y_lt(y1),
        ])
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.halfplanes.iter().all(|h| h.contains(p))
    }

    pub fn contains_near(&self, p: &Point, d: &Point) -> bool {
        self.halfplanes.iter().all(|h| h.contains_near(p, d))
    }

    pub fn intersect(&self, o: &Region) -> Region {
        let mut hs = self.halfplanes.clone();
        for h in &o.halfplanes {
            if !hs.contains(h) {
                hs.push(h.clone());
            }
        }
        Region::new(hs)
    }

    pub fn transpose(&self) -> Region {
        Region::new(self.halfplanes.iter().map(HalfPlane::transpose).collect())
    }

    /// Closure of the region clipped to the closure of `rect`, as a
    /// counterclockwise polygon (possibly degenerate or empty).
    pub fn clip(&self, rect: &Rect) -> Vec<Point> {
        let mut poly = rect.corners();
        for h in &self.halfplanes {
            poly = clip_polygon(&poly, h);
            if poly.is_empty() {
                break;
            }
        }
        poly
    }

    /// Area of the region inside `rect` (exact).
    pub fn area_in(&self, rect: &Rect) -> Q {
        polygon_area(&self.clip(rect))
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about `c`, with
    /// vertices rounded to nearby rationals.
    pub fn polygon_around(c: &Point, r: f64, n: usize) -> Region {
        let (cx, cy) = c.to_f64();
        let verts: Vec<Point> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let round = |v: f64| from_f64((v * 1048576.0).round() / 1048576.0).expect("finite");
                Point::new(round(cx + r * t.cos()), round(cy + r * t.sin()))
            })
            .collect();
        Region::new(
            (0..n)
                .map(|i| {
                    let p = &verts[i];
                    let q = &verts[(i + 1) % n];
                    let d = q.sub(p);
                    // inside is to the left of p -> q
                    HalfPlane::lt(d.y.clone(), -&d.x, &d.y * &p.x - &d.x * &p.y)
                })
                .collect(),
        )
    }
}

/// Sutherland–Hodgman step: keep the part of `poly` in the closed half-plane.
pub fn clip_polygon(poly: &[Point], h: &HalfPlane) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let vp = h.value(p);
        let vq = h.value(q);
        if !vp.is_positive() {
            out.push(p.clone());
        }
        if (vp.is_negative() && vq.is_positive()) || (vp.is_positive() && vq.is_negative()) {
            let t = &vp / (&vp - &vq);
            out.push(p.add(&q.sub(p).scale(&t)));
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

pub fn polygon_area(poly: &[Point]) -> Q {
    let n = poly.len();
    if n < 3 {
        return Q::zero();
    }
    let twice: Q = (0..n).map(|i| poly[i].cross(&poly[(i + 1) % n])).sum();
    twice.abs() / qi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionTerm {
    pub halfplanes: Vec<HalfPlane>,
    pub sign: Sign,
}

/// `(∪ positive regions) \ (∪ negative regions)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<RegionTerm>", into = "Vec<RegionTerm>")]
pub struct RegionSet {
    positive: Vec<Region>,
    negative: Vec<Region>,
}

impl From<Vec<RegionTerm>> for RegionSet {
    fn from(terms: Vec<RegionTerm>) -> Self {
        let mut s = RegionSet::default();
        for t in terms {
            let r = Region::new(t.halfplanes);
            match t.sign {
                Sign::Plus => s.positive.push(r),
                Sign::Minus => s.negative.push(r),
            }
        }
        s
    }
}

impl From<RegionSet> for Vec<RegionTerm> {
    fn from(s: RegionSet) -> Self {
        let pos = s.positive.into_iter().map(|r| RegionTerm {
            halfplanes: r.halfplanes,
            sign: Sign::Plus,
        });
        let neg = s.negative.into_iter().map(|r| RegionTerm {
            halfplanes: r.halfplanes,
            sign: Sign::Minus,
        });
        pos.chain(neg).collect()
    }
}

impl From<Region> for RegionSet {
    fn from(r: Region) -> Self {
        RegionSet::new(vec![r], vec![])
    }
}

impl RegionSet {
    pub fn new(positive: Vec<Region>, negative: Vec<Region>) -> Self {
        RegionSet { positive, negative }
    }

    pub fn empty() -> Self {
        RegionSet::default()
    }

    pub fn plane() -> Self {
        Region::plane().into()
    }

    pub fn positive(&self) -> &[Region] {
        &self.positive
    }

    pub fn negative(&self) -> &[Region] {
        &self.negative
    }

    pub fn is_empty_syntactically(&self) -> bool {
        self.positive.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.positive.iter().any(|r| r.contains(p)) && !self.negative.iter().any(|r| r.contains(p))
    }

    pub fn contains_near(&self, p: &Point, d: &Point) -> bool {
        self.positive.iter().any(|r| r.contains_near(p, d))
            && !self.negative.iter().any(|r| r.contains_near(p, d))
    }

    pub fn halfplanes(&self) -> impl Iterator<Item = &HalfPlane> {
        self.positive
            .iter()
            .chain(self.negative.iter())
            .flat_map(|r| r.halfplanes.iter())
    }

    pub fn union(&self, o: &RegionSet) -> RegionSet {
        // (P1 \ N1) ∪ (P2 \ N2) = ∪ (Pi ∩ complement pieces); expanded by
        // splitting each negative region into disjoint complement pieces.
        let mut pos = Vec::new();
        for (p, negs) in [(&self.positive, &self.negative), (&o.positive, &o.negative)] {
            for r in p.iter() {
                let mut pieces = vec![r.clone()];
                for n in negs.iter() {
                    pieces = pieces.iter().flat_map(|piece| subtract_convex(piece, n)).collect();
                }
                pos.extend(pieces);
            }
        }
        RegionSet::new(pos, vec![])
    }

    pub fn intersect(&self, o: &RegionSet) -> RegionSet {
        let mut pos = Vec::with_capacity(self.positive.len() * o.positive.len());
        for a in &self.positive {
            for b in &o.positive {
                pos.push(a.intersect(b));
            }
        }
        let mut neg = self.negative.clone();
        neg.extend(o.negative.iter().cloned());
        RegionSet::new(pos, neg)
    }

    pub fn transpose(&self) -> RegionSet {
        RegionSet::new(
            self.positive.iter().map(Region::transpose).collect(),
            self.negative.iter().map(Region::transpose).collect(),
        )
    }

    /// Drop terms whose area inside `rect` is zero.
    pub fn prune(&self, rect: &Rect) -> RegionSet {
        let keep = |rs: &[Region]| -> Vec<Region> {
            rs.iter()
                .filter(|r| r.area_in(rect).is_positive())
                .cloned()
                .collect()
        };
        let pos = keep(&self.positive);
        if pos.is_empty() {
            return RegionSet::empty();
        }
        RegionSet::new(pos, keep(&self.negative))
    }

    /// Sufficient test for `cl(S) ⊂ rect`: every positive term of positive
    /// area is bounded and its closure avoids the boundary of `rect`.
    pub fn compactly_inside(&self, rect: &Rect) -> bool {
        let (w, h) = (rect.x.width(), rect.y.width());
        let big = Rect::new(
            Interval::new(rect.x.lo() - &w, rect.x.hi() + &w).expect("nonempty"),
            Interval::new(rect.y.lo() - &h, rect.y.hi() + &h).expect("nonempty"),
        );
        self.positive.iter().all(|r| {
            let poly = r.clip(&big);
            polygon_area(&poly).is_zero() || poly.iter().all(|v| rect.contains(v))
        })
    }
}

/// `r \ n` for convex `r`, `n` as a list of disjoint convex pieces.
fn subtract_convex(r: &Region, n: &Region) -> Vec<Region> {
    let mut out = Vec::new();
    let mut acc = r.clone();
    for h in &n.halfplanes {
        let mut piece = acc.clone();
        piece.halfplanes.push(h.complement());
        out.push(piece);
        acc.halfplanes.push(h.clone());
    }
    out
}

/// Total order on nonzero directions by angle in `[0, 1)` turn, starting at
/// the positive x-axis and going counterclockwise.
pub fn cmp_angle(u: &Point, v: &Point) -> Ordering {
    let half = |d: &Point| -> u8 {
        if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(u).cmp(&half(v)).then_with(|| {
        let c = u.cross(v);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Angle of a direction in turns. Exact for the axes and the diagonals,
/// otherwise the nearest double converted exactly.
pub fn turns_of(d: &Point) -> Q {
    let ax = d.x.abs();
    let ay = d.y.abs();
    let eighths = if d.y.is_zero() {
        Some(if d.x.is_positive() { 0 } else { 4 })
    } else if d.x.is_zero() {
        Some(if d.y.is_positive() { 2 } else { 6 })
    } else if ax == ay {
        Some(match (d.x.is_positive(), d.y.is_positive()) {
            (true, true) => 1,
            (false, true) => 3,
            (false, false) => 5,
            (true, false) => 7,
        })
    } else {
        None
    };
    if let Some(e) = eighths {
        return Q::new(e.into(), 8.into());
    }
    let (x, y) = d.to_f64();
    let mut t = y.atan2(x) / std::f64::consts::TAU;
    if t < 0.0 {
        t += 1.0;
    }
    if t >= 1.0 {
        t = 0.0;
    }
    from_f64(t).expect("finite angle")
}

/// A rational direction whose angle is close to `t` turns.
pub fn direction_near(t: f64) -> Point {
    let a = t * std::f64::consts::TAU;
    let round = |v: f64| from_f64((v * 65536.0).round() / 65536.0).expect("finite");
    Point::new(round(a.cos()), round(a.sin()))
}

/// Open cone of directions from `d1` counterclockwise to `d2` at apex `p`;
/// `d1 == d2` up to scale means the full turn (minus the line along `d1`).
pub fn cone(p: &Point, d1: &Point, d2: &Point) -> RegionSet {
    let c = d1.cross(d2);
    let same = c.is_zero() && d1.dot(d2).is_positive();
    if c.is_positive() {
        return Region::new(vec![left_of(p, d1), right_of(p, d2)]).into();
    }
    if c.is_zero() && !same {
        return Region::new(vec![left_of(p, d1)]).into();
    }
    // reflex or full: split at -d1
    let m = d1.neg();
    let second = if same {
        Region::new(vec![left_of(p, &m)])
    } else {
        Region::new(vec![left_of(p, &m), right_of(p, d2)])
    };
    RegionSet::new(vec![Region::new(vec![left_of(p, d1)]), second], vec![])
}

/// `cross(d, x - p) > 0`.
fn left_of(p: &Point, d: &Point) -> HalfPlane {
    HalfPlane::lt(d.y.clone(), -&d.x, &d.y * &p.x - &d.x * &p.y)
}

/// `cross(x - p, d) > 0`.
fn right_of(p: &Point, d: &Point) -> HalfPlane {
    HalfPlane::lt(-&d.y, d.x.clone(), -&d.y * &p.x + &d.x * &p.y)
}

/// Midpoint helper for rational points.
pub fn mid(p: &Point, q: &Point) -> Point {
    Point::new(midpoint(&p.x, &q.x), midpoint(&p.y, &q.y))
}
