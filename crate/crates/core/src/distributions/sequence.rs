//! Delta sequences and the cone-ball convergence check.
//!
//! For a sequence `ω_k` converging to `δ_p^α`, the integral of `ω_k` over
//! `B_r(K)` (the part of a cone `K` with apex `p` inside the ball of radius
//! `r`) must tend to the mass `α` puts on the directions of `K`. The built-in
//! constructions make this exact once the support radius `1/k` is below
//! `r`; user sequences are checked by quadrature.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::angular::ArcFn;
use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};
use crate::poly::Poly;
use crate::rational::{format_rational, qi, to_f64, Rat, Q};
use crate::regulated1d::{Interval, PiecewiseFn1D};
use crate::regulated2d::PiecewiseFn2D;

use super::quad;
use super::AngularDensity;

/// Exact rational or floating-point result.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => to_f64(q),
            Scalar::Approx(x) => *x,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", format_rational(q)),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&format_rational(q)),
            Scalar::Approx(x) => s.serialize_f64(*x),
        }
    }
}

/// A cone of directions at the apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cone {
    /// On a line: the right half-line, the left one, or both.
    Line { right: bool, left: bool },
    /// In the plane: directions in `[lo, hi)` turns, `0 < hi - lo <= 1`.
    Planar { lo: Q, hi: Q },
}

impl Cone {
    pub fn right() -> Self {
        Cone::Line { right: true, left: false }
    }

    pub fn left() -> Self {
        Cone::Line { right: false, left: true }
    }

    pub fn arc(lo: Q, hi: Q) -> Result<Self> {
        let c = Cone::Planar { lo, hi };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Cone::Line { right, left } if !right && !left => {
                Err(Error::Malformed("empty cone".into()))
            }
            Cone::Planar { lo, hi } => {
                let w = hi - lo;
                if lo.is_negative() || lo >= &Q::one() || !w.is_positive() || w > Q::one() {
                    Err(Error::Malformed(format!(
                        "cone arc [{}, {}) must satisfy 0 <= lo < 1, 0 < hi - lo <= 1",
                        format_rational(lo),
                        format_rational(hi)
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `(cone_lo, cone_hi)` for reports. Line cones are written as ranges of
    /// directions in `{-1, +1}`: `[0, 1]` right, `[-1, 0]` left, `[-1, 1]` both.
    pub fn bounds(&self) -> (String, String) {
        match self {
            Cone::Line { right, left } => (
                if *left { "-1" } else { "0" }.to_string(),
                if *right { "1" } else { "0" }.to_string(),
            ),
            Cone::Planar { lo, hi } => (format_rational(lo), format_rational(hi)),
        }
    }

    /// Measure of the set of directions: counting on the line, arc length in
    /// radians in the plane.
    fn measure(&self) -> f64 {
        match self {
            Cone::Line { right, left } => (*right as u8 + *left as u8) as f64,
            Cone::Planar { lo, hi } => 2.0 * PI * to_f64(&(hi - lo)),
        }
    }

    /// `self ⊊ other`, for cones of the same kind.
    fn strictly_inside(&self, other: &Cone) -> bool {
        match (self, other) {
            (Cone::Line { right: r1, left: l1 }, Cone::Line { right: r2, left: l2 }) => {
                (!r1 || *r2) && (!l1 || *l2) && (r1, l1) != (r2, l2)
            }
            (Cone::Planar { lo: a1, hi: b1 }, Cone::Planar { lo: a2, hi: b2 }) => {
                // compare as arcs on the circle, unwrapping self next to other
                let shift = if a1 < a2 { Q::one() } else { Q::zero() };
                let a = a1 + &shift;
                let b = b1 + &shift;
                a >= *a2 && b <= *b2 && (&b - &a) < (b2 - a2)
            }
            _ => false,
        }
    }
}

/// `α` mass on the directions of a cone.
pub fn cone_mass(alpha: &AngularDensity, cone: &Cone) -> Result<Q> {
    match (alpha, cone) {
        (AngularDensity::Line { beta }, Cone::Line { right, left }) => {
            let mut m = Q::zero();
            if *right {
                m += beta;
            }
            if *left {
                m += Q::one() - beta;
            }
            Ok(m)
        }
        (AngularDensity::Planar(a), Cone::Planar { lo, hi }) => a.integral_over(lo, hi),
        _ => Err(Error::InvalidArgument("cone and density of different dimension".into())),
    }
}

/// The sequence `ω_k = k (β χ_(p, p+1/k) + (1-β) χ_(p-1/k, p))`.
pub fn delta_sequence_1d(domain: &Interval, p: &Q, beta: &Q, k: u32) -> Result<PiecewiseFn1D> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let h = Q::one() / qi(k as i64);
    let a = p - &h;
    let b = p + &h;
    if &a < domain.lo() || &b > domain.hi() {
        return Err(Error::OutsideDomain(format!(
            "the 1/{k}-neighbourhood of {} leaves {domain}",
            format_rational(p)
        )));
    }
    let kq = qi(k as i64);
    let mut bps = Vec::new();
    let mut pieces = Vec::new();
    if &a > domain.lo() {
        bps.push(a);
        pieces.push(Poly::zero());
    }
    pieces.push(Poly::constant(&kq * (Q::one() - beta)));
    bps.push(p.clone());
    pieces.push(Poly::constant(&kq * beta));
    if &b < domain.hi() {
        bps.push(b);
        pieces.push(Poly::zero());
    }
    PiecewiseFn1D::new(domain.clone(), bps, pieces)
}

/// Term `k` of the planar construction: `ω_k(x) = k² m(θ) / π` on the open
/// disk of radius `1/k` about the centre, `θ` the direction of `x - p` and
/// `m` the angular measure per turn; zero outside. Its mass on every cone
/// equals the mass of `m` on the cone's directions.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskTerm {
    pub center: Point,
    pub measure: ArcFn,
    pub k: u32,
}

impl DiskTerm {
    pub fn radius(&self) -> Q {
        Q::one() / qi(self.k as i64)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let (cx, cy) = self.center.to_f64();
        let (dx, dy) = (x - cx, y - cy);
        let r = 1.0 / self.k as f64;
        if dx * dx + dy * dy >= r * r {
            return 0.0;
        }
        let t = dy.atan2(dx) / (2.0 * PI);
        let k = self.k as f64;
        k * k * self.measure.value_at_f64(t) / PI
    }

    /// `∫_{B_r(K)} ω_k` in closed form.
    pub fn cone_ball(&self, lo: &Q, hi: &Q, r: &Q) -> Result<Q> {
        let m = self.measure.integral_over(lo, hi)?;
        let kr = qi(self.k as i64) * r;
        Ok(if kr >= Q::one() { m } else { &kr * &kr * m })
    }

    /// `∫ ω_k φ` by polar quadrature.
    pub fn pair_numeric(&self, phi: &PiecewiseFn2D) -> f64 {
        let ev = phi.evaluator();
        let breaks: Vec<f64> = self
            .measure
            .arcs()
            .map(|(lo, _, _)| 2.0 * PI * to_f64(&lo))
            .collect();
        let lines: Vec<(f64, f64, f64)> = phi
            .lines()
            .iter()
            .map(|l| (to_f64(&l.a), to_f64(&l.b), to_f64(&l.c)))
            .collect();
        let k = self.k as f64;
        let measure = &self.measure;
        quad::polar_disk(
            self.center.to_f64(),
            1.0 / k,
            &breaks,
            &lines,
            &|x, y, t| k * k / PI * measure.value_at_f64(t / (2.0 * PI)) * ev.eval(x, y),
        )
    }
}

/// Term `k` of the planar construction for `weight · δ_p^α` given as a
/// measure per turn.
pub fn delta_sequence_2d(domain: &Rect, p: &Point, measure: &ArcFn, k: u32) -> Result<DiskTerm> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let h = Q::one() / qi(k as i64);
    let inside = domain.x.lo() <= &(&p.x - &h)
        && &(&p.x + &h) <= domain.x.hi()
        && domain.y.lo() <= &(&p.y - &h)
        && &(&p.y + &h) <= domain.y.hi();
    if !inside || !domain.contains(p) {
        return Err(Error::OutsideDomain(format!("the 1/{k}-disk about {p} leaves {domain}")));
    }
    Ok(DiskTerm {
        center: p.clone(),
        measure: measure.clone(),
        k,
    })
}

/// Anything whose cone-ball integrals can be computed for each `k`.
pub trait ConeBallSequence: Sync {
    /// Whether term `k` is defined (its support stays inside the domain).
    fn defined(&self, k: u32) -> bool;
    fn cone_ball(&self, k: u32, cone: &Cone, r: &Q) -> Result<Scalar>;
}

/// The built-in line sequence for `δ_p^α` with `α(1) = beta`.
pub struct LineSequence {
    pub domain: Interval,
    pub p: Q,
    pub beta: Q,
}

impl ConeBallSequence for LineSequence {
    fn defined(&self, k: u32) -> bool {
        delta_sequence_1d(&self.domain, &self.p, &self.beta, k).is_ok()
    }

    fn cone_ball(&self, k: u32, cone: &Cone, r: &Q) -> Result<Scalar> {
        let w = delta_sequence_1d(&self.domain, &self.p, &self.beta, k)?;
        let Cone::Line { right, left } = cone else {
            return Err(Error::InvalidArgument("planar cone for a line sequence".into()));
        };
        let mut total = Q::zero();
        if *right {
            total += w.integral_between(&self.p, &(&self.p + r));
        }
        if *left {
            total += w.integral_between(&(&self.p - r), &self.p);
        }
        Ok(Scalar::Exact(total))
    }
}

/// The built-in planar sequence.
pub struct DiskSequence {
    pub domain: Rect,
    pub p: Point,
    pub measure: ArcFn,
}

impl ConeBallSequence for DiskSequence {
    fn defined(&self, k: u32) -> bool {
        delta_sequence_2d(&self.domain, &self.p, &self.measure, k).is_ok()
    }

    fn cone_ball(&self, k: u32, cone: &Cone, r: &Q) -> Result<Scalar> {
        let t = delta_sequence_2d(&self.domain, &self.p, &self.measure, k)?;
        let Cone::Planar { lo, hi } = cone else {
            return Err(Error::InvalidArgument("line cone for a planar sequence".into()));
        };
        Ok(Scalar::Exact(t.cone_ball(lo, hi, r)?))
    }
}

/// A user sequence on the line, `f(k, x)`, integrated adaptively.
pub struct FnSequence1D<F: Fn(u32, f64) -> f64 + Sync> {
    pub p: f64,
    /// Largest radius the support may have; term `k` is defined when the
    /// caller says so.
    pub defined: fn(u32) -> bool,
    pub f: F,
}

impl<F: Fn(u32, f64) -> f64 + Sync> ConeBallSequence for FnSequence1D<F> {
    fn defined(&self, k: u32) -> bool {
        (self.defined)(k)
    }

    fn cone_ball(&self, k: u32, cone: &Cone, r: &Q) -> Result<Scalar> {
        let Cone::Line { right, left } = cone else {
            return Err(Error::InvalidArgument("planar cone for a line sequence".into()));
        };
        let r = to_f64(r);
        let g = |x: f64| (self.f)(k, x);
        let mut total = 0.0;
        if *right {
            total += quad::adaptive(self.p, self.p + r, 1e-12, &g);
        }
        if *left {
            total += quad::adaptive(self.p - r, self.p, 1e-12, &g);
        }
        Ok(Scalar::Approx(total))
    }
}

/// A user sequence in the plane, `f(k, x, y)`, integrated by adaptive
/// midpoint cubature in polar coordinates (relative tolerance `1e-6`, at most
/// `10^7` evaluations per integral).
pub struct FnSequence2D<F: Fn(u32, f64, f64) -> f64 + Sync> {
    pub p: (f64, f64),
    pub defined: fn(u32) -> bool,
    pub f: F,
}

impl<F: Fn(u32, f64, f64) -> f64 + Sync> ConeBallSequence for FnSequence2D<F> {
    fn defined(&self, k: u32) -> bool {
        (self.defined)(k)
    }

    fn cone_ball(&self, k: u32, cone: &Cone, r: &Q) -> Result<Scalar> {
        let Cone::Planar { lo, hi } = cone else {
            return Err(Error::InvalidArgument("line cone for a planar sequence".into()));
        };
        let (t0, t1) = (2.0 * PI * to_f64(lo), 2.0 * PI * to_f64(hi));
        let (px, py) = self.p;
        let (v, _) = quad::cubature_2d((t0, t1), (0.0, to_f64(r)), 1e-6, 10_000_000, &|t, s| {
            s * (self.f)(k, px + s * t.cos(), py + s * t.sin())
        });
        Ok(Scalar::Approx(v))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub k: u32,
    pub cone_lo: String,
    pub cone_hi: String,
    pub integral: Scalar,
    pub target: Scalar,
    pub abs_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSequenceReport {
    pub rows: Vec<Row>,
    /// `k` skipped because the support left the domain.
    pub skipped: Vec<u32>,
    /// Nested cone pairs `K' ⊊ K''` examined for the bounded-mass condition.
    pub nested_pairs: usize,
    /// `sup |∫_{B_r(K'')} ω_k - ∫_{B_r(K')} ω_k| / mes(K'' \ K')`.
    pub sup_ratio: f64,
}

impl DeltaSequenceReport {
    pub fn max_error_from(&self, k_min: u32) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.k >= k_min)
            .map(|r| r.abs_error)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,cone_lo,cone_hi,integral,target,abs_error\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.k, r.cone_lo, r.cone_hi, r.integral, r.target, r.abs_error
            ));
        }
        out
    }
}

/// Tabulate `|∫_{B_r(K)} ω_k - α(K)|` for every cone and every defined `k`
/// in `ks`, and the bounded-mass ratio over nested cone pairs (the given
/// cones plus, for each, its first half).
pub fn verify_delta_sequence(
    seq: &dyn ConeBallSequence,
    alpha: &AngularDensity,
    cones: &[Cone],
    r: &Q,
    ks: &[u32],
) -> Result<DeltaSequenceReport> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    for c in cones {
        c.validate()?;
    }
    let targets: Vec<Q> = cones.iter().map(|c| cone_mass(alpha, c)).collect::<Result<_>>()?;
    let (ks_ok, skipped): (Vec<u32>, Vec<u32>) = ks.iter().partition(|&&k| seq.defined(k));

    let mut probe: Vec<Cone> = cones.to_vec();
    for c in cones {
        match c {
            Cone::Planar { lo, hi } => {
                let mid = (lo + hi) / qi(2);
                probe.push(Cone::Planar { lo: lo.clone(), hi: mid });
            }
            Cone::Line { right: true, left: true } => {
                probe.push(Cone::right());
                probe.push(Cone::left());
            }
            _ => {}
        }
    }
    probe.dedup();
    let mut pairs = Vec::new();
    for (i, a) in probe.iter().enumerate() {
        for (j, b) in probe.iter().enumerate() {
            if i != j && a.strictly_inside(b) {
                pairs.push((i, j));
            }
        }
    }

    let per_k = |k: u32| -> Result<(Vec<Row>, f64)> {
        let values: Vec<Scalar> = probe.iter().map(|c| seq.cone_ball(k, c, r)).collect::<Result<_>>()?;
        let rows = cones
            .iter()
            .zip(&targets)
            .zip(&values)
            .map(|((c, t), v)| {
                let (lo, hi) = c.bounds();
                let err = match v {
                    Scalar::Exact(x) => to_f64(&(x - t).abs()),
                    Scalar::Approx(x) => (x - to_f64(t)).abs(),
                };
                Row {
                    k,
                    cone_lo: lo,
                    cone_hi: hi,
                    integral: v.clone(),
                    target: Scalar::Exact(t.clone()),
                    abs_error: err,
                }
            })
            .collect();
        let ratio = pairs
            .iter()
            .map(|&(i, j)| {
                let gap = probe[j].measure() - probe[i].measure();
                (values[j].to_f64() - values[i].to_f64()).abs() / gap
            })
            .fold(0.0, f64::max);
        Ok((rows, ratio))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Result<(Vec<Row>, f64)>> = {
        use rayon::prelude::*;
        ks_ok.par_iter().map(|&k| per_k(k)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(Vec<Row>, f64)>> = ks_ok.iter().map(|&k| per_k(k)).collect();

    let mut rows = Vec::new();
    let mut sup_ratio: f64 = 0.0;
    for res in results {
        let (rs, ratio) = res?;
        rows.extend(rs);
        sup_ratio = sup_ratio.max(ratio);
    }
    Ok(DeltaSequenceReport {
        rows,
        skipped,
        nested_pairs: pairs.len(),
        sup_ratio,
    })
}

/// `1, 2, 5, 10, 20, 50, ...` up to and including `kmax`.
pub fn default_ks(kmax: u32) -> Vec<u32> {
    let mut ks = Vec::new();
    let mut base = 1u32;
    'outer: loop {
        for m in [1, 2, 5] {
            let k = base.saturating_mul(m);
            if k > kmax {
                break 'outer;
            }
            ks.push(k);
        }
        base = base.saturating_mul(10);
    }
    if ks.last() != Some(&kmax) {
        ks.push(kmax);
    }
    ks
}

/// Input for a convergence run of a built-in construction.
///
/// On a line, cones are `"right"`, `"left"` or `"both"`; in the plane they
/// are `[lo, hi]` arcs in turns and `alpha` is a density per turn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaSeqConfig {
    Line {
        dim: u8,
        domain: Interval,
        p: Rat,
        beta: Rat,
        cones: Vec<String>,
        r: Rat,
    },
    Planar {
        dim: u8,
        domain: Rect,
        p: Point,
        alpha: ArcFn,
        cones: Vec<(Rat, Rat)>,
        r: Rat,
    },
}

impl DeltaSeqConfig {
    pub fn run(&self, ks: &[u32]) -> Result<DeltaSequenceReport> {
        match self {
            DeltaSeqConfig::Line { dim, domain, p, beta, cones, r } => {
                if *dim != 1 {
                    return Err(Error::Malformed("a line configuration needs dim 1".into()));
                }
                let cones = cones
                    .iter()
                    .map(|c| match c.as_str() {
                        "right" => Ok(Cone::right()),
                        "left" => Ok(Cone::left()),
                        "both" => Ok(Cone::Line { right: true, left: true }),
                        other => Err(Error::Malformed(format!("unknown line cone {other:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let seq = LineSequence {
                    domain: domain.clone(),
                    p: p.0.clone(),
                    beta: beta.0.clone(),
                };
                verify_delta_sequence(&seq, &AngularDensity::line(beta.0.clone()), &cones, &r.0, ks)
            }
            DeltaSeqConfig::Planar { dim, domain, p, alpha, cones, r } => {
                if *dim != 2 {
                    return Err(Error::Malformed("a planar configuration needs dim 2".into()));
                }
                let density = AngularDensity::planar(alpha.clone())?;
                let cones = cones
                    .iter()
                    .map(|(lo, hi)| Cone::arc(lo.0.clone(), hi.0.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let seq = DiskSequence {
                    domain: domain.clone(),
                    p: p.clone(),
                    measure: alpha.clone(),
                };
                verify_delta_sequence(&seq, &density, &cones, &r.0, ks)
            }
        }
    }
}
