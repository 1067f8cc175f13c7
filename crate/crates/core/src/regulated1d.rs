//! Regulated functions of one variable, kept as finitely many polynomial
//! pieces on an open interval.
//!
//! Point values at breakpoints are never stored: two representatives that
//! differ only there are the same element, so only one-sided limits are
//! observable. Values are canonical (adjacent equal pieces merged), which
//! makes derived equality the equality of elements.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{format_rational, midpoint, qi, to_f64, Rat, Q};

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Rat; 2]", into = "[Rat; 2]")]
pub struct Interval {
    lo: Q,
    hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "empty interval ({}, {})",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn center(&self) -> Q {
        midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_closed(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `cl(other) ⊂ self`.
    pub fn compactly_contains(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }
}

impl TryFrom<[Rat; 2]> for Interval {
    type Error = Error;
    fn try_from(v: [Rat; 2]) -> Result<Self> {
        let [a, b] = v;
        Interval::new(a.0, b.0)
    }
}

impl From<Interval> for [Rat; 2] {
    fn from(i: Interval) -> Self {
        [Rat(i.lo), Rat(i.hi)]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.lo), format_rational(&self.hi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct PiecewiseFn1D {
    domain: Interval,
    breakpoints: Vec<Q>,
    pieces: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    domain: Interval,
    breakpoints: Vec<Rat>,
    pieces: Vec<Vec<Rat>>,
}

impl TryFrom<Wire> for PiecewiseFn1D {
    type Error = Error;
    fn try_from(w: Wire) -> Result<Self> {
        PiecewiseFn1D::new(
            w.domain,
            w.breakpoints.into_iter().map(|r| r.0).collect(),
            w.pieces
                .into_iter()
                .map(|cs| Poly::new(cs.into_iter().map(|r| r.0).collect()))
                .collect(),
        )
    }
}

impl From<PiecewiseFn1D> for Wire {
    fn from(g: PiecewiseFn1D) -> Self {
        Wire {
            domain: g.domain,
            breakpoints: g.breakpoints.into_iter().map(Rat).collect(),
            pieces: g
                .pieces
                .into_iter()
                .map(|p| {
                    if p.is_zero() {
                        vec![Rat(Q::zero())]
                    } else {
                        p.coeffs().iter().cloned().map(Rat).collect()
                    }
                })
                .collect(),
        }
    }
}

impl PiecewiseFn1D {
    pub fn new(domain: Interval, breakpoints: Vec<Q>, pieces: Vec<Poly>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::Malformed(format!(
                "{} pieces for {} breakpoints",
                pieces.len(),
                breakpoints.len()
            )));
        }
        if breakpoints.iter().any(|b| !domain.contains(b)) {
            return Err(Error::Malformed(format!(
                "breakpoint outside the open domain {domain}"
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("breakpoints must be strictly increasing".into()));
        }
        Ok(PiecewiseFn1D {
            domain,
            breakpoints,
            pieces,
        }
        .canonical())
    }

    pub fn from_poly(domain: Interval, p: Poly) -> Self {
        PiecewiseFn1D {
            domain,
            breakpoints: Vec::new(),
            pieces: vec![p],
        }
    }

    pub fn constant(domain: Interval, c: Q) -> Self {
        Self::from_poly(domain, Poly::constant(c))
    }

    pub fn zero(domain: Interval) -> Self {
        Self::from_poly(domain, Poly::zero())
    }

    /// Heaviside step `θ_p`: 0 left of `p`, 1 right of it.
    pub fn heaviside(domain: Interval, p: Q) -> Result<Self> {
        Self::new(
            domain,
            vec![p],
            vec![Poly::zero(), Poly::constant(Q::from_integer(1.into()))],
        )
    }

    /// Characteristic function of `(a, b) ∩ domain`.
    pub fn indicator(domain: Interval, a: &Q, b: &Q) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidArgument("indicator of an empty interval".into()));
        }
        let one = Poly::constant(qi(1));
        let mut bps = Vec::new();
        let mut pieces = Vec::new();
        if domain.contains(a) {
            bps.push(a.clone());
            pieces.push(Poly::zero());
        }
        pieces.push(one);
        if domain.contains(b) {
            bps.push(b.clone());
            pieces.push(Poly::zero());
        }
        if b <= domain.lo() || a >= domain.hi() {
            return Ok(Self::zero(domain));
        }
        Self::new(domain, bps, pieces)
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    /// `(left end, right end, polynomial)` for every piece.
    pub fn cells(&self) -> impl Iterator<Item = (&Q, &Q, &Poly)> {
        self.pieces.iter().enumerate().map(move |(i, p)| {
            let a = if i == 0 { self.domain.lo() } else { &self.breakpoints[i - 1] };
            let b = if i == self.breakpoints.len() {
                self.domain.hi()
            } else {
                &self.breakpoints[i]
            };
            (a, b, p)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces.iter().all(Poly::is_constant)
    }

    fn canonical(mut self) -> Self {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut pieces: Vec<Poly> = Vec::with_capacity(self.pieces.len());
        let mut it = self.pieces.drain(..);
        pieces.push(it.next().expect("at least one piece"));
        for (b, p) in self.breakpoints.drain(..).zip(it) {
            if pieces.last() == Some(&p) {
                continue;
            }
            bps.push(b);
            pieces.push(p);
        }
        PiecewiseFn1D {
            domain: self.domain,
            breakpoints: bps,
            pieces,
        }
    }

    /// Piece covering `(x, x + t)` for small `t > 0`.
    fn piece_right_of(&self, x: &Q) -> &Poly {
        &self.pieces[self.breakpoints.partition_point(|b| b <= x)]
    }

    /// Piece covering `(x - t, x)` for small `t > 0`.
    fn piece_left_of(&self, x: &Q) -> &Poly {
        &self.pieces[self.breakpoints.partition_point(|b| b < x)]
    }

    /// `g(x+)`, defined for `x ∈ [lo, hi)`.
    pub fn limit_right(&self, x: &Q) -> Result<Q> {
        if x < self.domain.lo() || x >= self.domain.hi() {
            return Err(Error::OutsideDomain(format!(
                "right limit at {} on {}",
                format_rational(x),
                self.domain
            )));
        }
        Ok(self.piece_right_of(x).eval(x))
    }

    /// `g(x-)`, defined for `x ∈ (lo, hi]`.
    pub fn limit_left(&self, x: &Q) -> Result<Q> {
        if x <= self.domain.lo() || x > self.domain.hi() {
            return Err(Error::OutsideDomain(format!(
                "left limit at {} on {}",
                format_rational(x),
                self.domain
            )));
        }
        Ok(self.piece_left_of(x).eval(x))
    }

    /// Value at an interior point where both one-sided limits agree.
    pub fn value_at(&self, x: &Q) -> Result<Q> {
        let r = self.limit_right(x)?;
        let l = self.limit_left(x)?;
        if r != l {
            return Err(Error::InvalidArgument(format!(
                "{} is a jump point; only one-sided limits exist",
                format_rational(x)
            )));
        }
        Ok(r)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|b| to_f64(b) <= x);
        self.pieces[i].eval_f64(x)
    }

    /// `sup_x max(|g(x+)|, |g(x-)|)`, domain endpoints included.
    pub fn norm(&self) -> f64 {
        self.cells()
            .map(|(a, b, p)| p.max_abs_on(a, b))
            .fold(0.0, f64::max)
    }

    /// Pointwise combination on the merged breakpoint set.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.domain, other.domain
            )));
        }
        let mut bps: Vec<Q> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        bps.sort();
        bps.dedup();
        let mut pieces = Vec::with_capacity(bps.len() + 1);
        for i in 0..=bps.len() {
            let a = if i == 0 { self.domain.lo() } else { &bps[i - 1] };
            let b = if i == bps.len() { self.domain.hi() } else { &bps[i] };
            let m = midpoint(a, b);
            pieces.push(f(self.piece_right_of(&m), other.piece_right_of(&m)));
        }
        Ok(PiecewiseFn1D {
            domain: self.domain.clone(),
            breakpoints: bps,
            pieces,
        }
        .canonical())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, k: &Q) -> Self {
        self.map_pieces(|p| p.scale(k))
    }

    pub fn add_constant(&self, c: &Q) -> Self {
        self.map_pieces(|p| p + &Poly::constant(c.clone()))
    }

    pub fn map_pieces(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PiecewiseFn1D {
            domain: self.domain.clone(),
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(f).collect(),
        }
        .canonical()
    }

    /// Jump points `{x : g(x+) ≠ g(x-)}`.
    pub fn discontinuity_set(&self) -> Vec<Q> {
        self.breakpoints
            .iter()
            .enumerate()
            .filter(|(i, b)| self.pieces[*i].eval(b) != self.pieces[i + 1].eval(b))
            .map(|(_, b)| b.clone())
            .collect()
    }

    /// Piecewise-constant `h` with `norm(g - h) < eps`. Every non-constant
    /// piece is cut into uniform cells narrow enough that the slope bound
    /// keeps the oscillation below `eps`; each cell takes the value at its
    /// midpoint.
    pub fn pc_approximate(&self, eps: &Q) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        let eps_f = to_f64(eps);
        let mut bps = Vec::new();
        let mut pieces = Vec::new();
        for (i, (a, b, p)) in self.cells().enumerate() {
            if i > 0 {
                bps.push(a.clone());
            }
            if p.is_constant() {
                pieces.push(p.clone());
                continue;
            }
            let n = cells_needed(p, a, b, eps_f);
            let h = (b - a) / qi(n as i64);
            for j in 0..n {
                let l = a + &h * qi(j as i64);
                let r = &l + &h;
                if j > 0 {
                    bps.push(l.clone());
                }
                pieces.push(Poly::constant(p.eval(&midpoint(&l, &r))));
            }
        }
        Ok(PiecewiseFn1D {
            domain: self.domain.clone(),
            breakpoints: bps,
            pieces,
        }
        .canonical())
    }

    /// Exact integral over the whole domain.
    pub fn integral(&self) -> Q {
        self.cells().map(|(a, b, p)| p.integral(a, b)).sum()
    }

    /// Exact integral over `(a, b)`, clipped to the domain.
    pub fn integral_between(&self, a: &Q, b: &Q) -> Q {
        self.cells()
            .filter_map(|(l, r, p)| {
                let lo = l.max(a);
                let hi = r.min(b);
                (lo < hi).then(|| p.integral(lo, hi))
            })
            .sum()
    }

    fn overlapping<'a>(&'a self, a: &'a Q, b: &'a Q) -> impl Iterator<Item = (&'a Q, &'a Q, &'a Poly)> {
        self.cells().filter_map(move |(l, r, p)| {
            let lo = l.max(a);
            let hi = r.min(b);
            (lo < hi).then_some((lo, hi, p))
        })
    }

    /// Whether `g > c` somewhere on `(a, b)` (exact).
    pub fn exceeds_on(&self, c: &Q, a: &Q, b: &Q) -> bool {
        let cp = Poly::constant(c.clone());
        self.overlapping(a, b)
            .any(|(l, r, p)| (p - &cp).exists_positive_on(l, r))
    }

    /// Whether `g < c` somewhere on `(a, b)` (exact).
    pub fn falls_below_on(&self, c: &Q, a: &Q, b: &Q) -> bool {
        let cp = Poly::constant(c.clone());
        self.overlapping(a, b)
            .any(|(l, r, p)| (&cp - p).exists_positive_on(l, r))
    }

    /// Supremum over `(a, b)` including one-sided limits.
    pub fn sup_on(&self, a: &Q, b: &Q) -> f64 {
        self.extremum_on(a, b, true).map_or(f64::NEG_INFINITY, |e| e.value)
    }

    /// Infimum over `(a, b)` including one-sided limits.
    pub fn inf_on(&self, a: &Q, b: &Q) -> f64 {
        self.extremum_on(a, b, false).map_or(f64::INFINITY, |e| e.value)
    }

    /// Extreme value on `(a, b)`, where it is approached, and the piece
    /// (clipped to `(a, b)`) containing that location in its closure.
    pub fn extremum_on(&self, a: &Q, b: &Q, maximize: bool) -> Option<Extremum> {
        let mut best: Option<Extremum> = None;
        for (l, r, p) in self.overlapping(a, b) {
            let (value, at) = p.extremum_on(l, r, maximize);
            let wins = match &best {
                None => true,
                Some(e) => {
                    if maximize {
                        value > e.value
                    } else {
                        value < e.value
                    }
                }
            };
            if wins {
                best = Some(Extremum {
                    value,
                    at,
                    cell: (l.clone(), r.clone()),
                    poly: p.clone(),
                });
            }
        }
        best
    }

    /// Compact support inside the open domain: both end pieces vanish.
    pub fn check_compact_support(&self) -> Result<()> {
        if !self.pieces[0].is_zero() || !self.pieces[self.pieces.len() - 1].is_zero() {
            return Err(Error::NonCompactSupport(format!(
                "function does not vanish near the ends of {}",
                self.domain
            )));
        }
        Ok(())
    }
}

/// Location of an extreme value found by [`PiecewiseFn1D::extremum_on`].
#[derive(Clone, Debug)]
pub struct Extremum {
    pub value: f64,
    pub at: Q,
    pub cell: (Q, Q),
    pub poly: Poly,
}

fn cells_needed(p: &Poly, a: &Q, b: &Q, eps: f64) -> usize {
    // oscillation on a cell of width h is at most h * max|p'|
    let lip = p.derivative().max_abs_on(a, b);
    (lip * to_f64(&(b - a)) / eps).floor() as usize + 1
}

impl fmt::Display for PiecewiseFn1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cells()
            .map(|(a, b, p)| format!("({}, {}): {}", format_rational(a), format_rational(b), p))
            .collect();
        write!(f, "[{}]", parts.join("; "))
    }
}
