//! Piecewise-constant functions on the circle.
//!
//! Angles are measured in turns, so the circle is `[0, 1)` and the arc
//! lengths that enter every integral stay rational. A density of `1` per
//! turn is the uniform probability density.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rat, Q};

/// Value `values[i]` on `[starts[i], starts[i+1])`, the last arc running to
/// one turn. `starts[0] == 0`; adjacent values differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Rat, Rat, Rat)>", into = "Vec<(Rat, Rat, Rat)>")]
pub struct ArcFn {
    starts: Vec<Q>,
    values: Vec<Q>,
}

impl TryFrom<Vec<(Rat, Rat, Rat)>> for ArcFn {
    type Error = Error;
    fn try_from(v: Vec<(Rat, Rat, Rat)>) -> Result<Self> {
        ArcFn::from_arcs(v.into_iter().map(|(a, b, c)| (a.0, b.0, c.0)).collect())
    }
}

impl From<ArcFn> for Vec<(Rat, Rat, Rat)> {
    fn from(f: ArcFn) -> Self {
        f.arcs().map(|(a, b, v)| (Rat(a), Rat(b), Rat(v.clone()))).collect()
    }
}

impl ArcFn {
    pub fn constant(v: Q) -> Self {
        ArcFn {
            starts: vec![Q::zero()],
            values: vec![v],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Q::zero())
    }

    /// From `(lo, hi, value)` arcs that tile `[0, 1)` in order.
    pub fn from_arcs(arcs: Vec<(Q, Q, Q)>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Malformed("no arcs".into()));
        }
        let mut expected = Q::zero();
        let mut starts = Vec::with_capacity(arcs.len());
        let mut values = Vec::with_capacity(arcs.len());
        for (lo, hi, v) in arcs {
            if lo != expected || hi <= lo {
                return Err(Error::Malformed(format!(
                    "arcs must tile [0, 1) in order; bad arc [{}, {})",
                    format_rational(&lo),
                    format_rational(&hi)
                )));
            }
            expected = hi;
            starts.push(lo);
            values.push(v);
        }
        if !expected.is_one() {
            return Err(Error::Malformed("arcs must end at 1 turn".into()));
        }
        Ok(ArcFn { starts, values }.canonical())
    }

    /// `value` on the arc `[lo, hi)` (wrapping past 1 if `hi > 1`), `0`
    /// elsewhere.
    pub fn on_arc(lo: &Q, hi: &Q, value: Q) -> Result<Self> {
        let one = Q::one();
        if lo.is_negative() || lo >= &one || hi <= lo || hi - lo > one {
            return Err(Error::Malformed("arc must satisfy 0 <= lo < hi <= lo + 1".into()));
        }
        if hi - lo == one {
            return Ok(Self::constant(value));
        }
        let z = Q::zero();
        let pieces: Vec<(Q, Q)> = if hi <= &one {
            vec![(lo.clone(), hi.clone())]
        } else {
            vec![(z.clone(), hi - &one), (lo.clone(), one.clone())]
        };
        let mut bps = vec![z.clone(), one.clone()];
        for (a, b) in &pieces {
            bps.push(a.clone());
            bps.push(b.clone());
        }
        bps.sort();
        bps.dedup();
        let mut starts = Vec::new();
        let mut values = Vec::new();
        for w in bps.windows(2) {
            let inside = pieces.iter().any(|(a, b)| a <= &w[0] && &w[1] <= b);
            starts.push(w[0].clone());
            values.push(if inside { value.clone() } else { z.clone() });
        }
        Ok(ArcFn { starts, values }.canonical())
    }

    /// From `(start, value)` pairs sorted by strictly increasing start in
    /// `[0, 1)`; values before the first start wrap from the last pair.
    pub fn from_starts(mut pairs: Vec<(Q, Q)>) -> Self {
        if pairs.is_empty() {
            return Self::zero();
        }
        if !pairs[0].0.is_zero() {
            let last = pairs[pairs.len() - 1].1.clone();
            pairs.insert(0, (Q::zero(), last));
        }
        let (starts, values) = pairs.into_iter().unzip();
        ArcFn { starts, values }.canonical()
    }

    fn canonical(self) -> Self {
        let mut starts: Vec<Q> = Vec::with_capacity(self.starts.len());
        let mut values: Vec<Q> = Vec::with_capacity(self.values.len());
        for (s, v) in self.starts.into_iter().zip(self.values) {
            if values.last() == Some(&v) {
                continue;
            }
            starts.push(s);
            values.push(v);
        }
        ArcFn { starts, values }
    }

    /// `(lo, hi, value)` for every arc.
    pub fn arcs(&self) -> impl Iterator<Item = (Q, Q, &Q)> + '_ {
        (0..self.starts.len()).map(move |i| {
            let hi = self.starts.get(i + 1).cloned().unwrap_or_else(Q::one);
            (self.starts[i].clone(), hi, &self.values[i])
        })
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.values[0].is_zero()
    }

    /// Value at angle `t` (reduced mod 1).
    pub fn value_at(&self, t: &Q) -> &Q {
        let t = t - t.floor();
        &self.values[self.starts.partition_point(|s| s <= &t) - 1]
    }

    pub fn value_at_f64(&self, t: f64) -> f64 {
        let t = t.rem_euclid(1.0);
        let i = self.starts.partition_point(|s| to_f64(s) <= t).max(1) - 1;
        to_f64(&self.values[i])
    }

    pub fn zip_with(&self, o: &ArcFn, f: impl Fn(&Q, &Q) -> Q) -> ArcFn {
        let mut starts: Vec<Q> = self.starts.iter().chain(o.starts.iter()).cloned().collect();
        starts.sort();
        starts.dedup();
        let values = starts.iter().map(|s| f(self.value_at(s), o.value_at(s))).collect();
        ArcFn { starts, values }.canonical()
    }

    pub fn mul(&self, o: &ArcFn) -> ArcFn {
        self.zip_with(o, |a, b| a * b)
    }

    pub fn add(&self, o: &ArcFn) -> ArcFn {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn scale(&self, k: &Q) -> ArcFn {
        ArcFn {
            starts: self.starts.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
        .canonical()
    }

    /// `∫ f` over the full turn.
    pub fn integral(&self) -> Q {
        self.arcs().map(|(a, b, v)| (b - a) * v).sum()
    }

    /// `∫ f` over `[lo, hi)` with `0 <= lo < hi <= lo + 1`, wrapping.
    pub fn integral_over(&self, lo: &Q, hi: &Q) -> Result<Q> {
        let mask = ArcFn::on_arc(lo, hi, Q::one())?;
        Ok(self.mul(&mask).integral())
    }

    pub fn is_nonneg(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }
}

impl fmt::Display for ArcFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .arcs()
            .map(|(a, b, v)| {
                format!(
                    "[{}, {}): {}",
                    format_rational(&a),
                    format_rational(&b),
                    format_rational(v)
                )
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
