//! Univariate polynomials with rational coefficients.
//!
//! Besides ring arithmetic this module carries the exact sign analysis used
//! by the dominance checks: Sturm sequences isolate the real roots of the
//! square-free part, and one rational sample per sign-constant gap decides
//! whether a polynomial takes a positive value on an open interval.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{midpoint, qi, to_f64, Q};

/// Coefficients in ascending order, no trailing zeros. The zero polynomial
/// has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    /// `slope * x + intercept`.
    pub fn linear(intercept: Q, slope: Q) -> Self {
        Poly::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Constant term (zero for the zero polynomial).
    pub fn constant_term(&self) -> Q {
        self.coeffs.first().cloned().unwrap_or_else(Q::zero)
    }

    fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qi(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Q::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / qi(i as i64 + 1));
        }
        Poly::new(out)
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: &Q, b: &Q) -> Q {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// `p(slope * x + intercept)`.
    pub fn compose_linear(&self, slope: &Q, intercept: &Q) -> Poly {
        let inner = Poly::linear(intercept.clone(), slope.clone());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(Q::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        if rem.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    fn monic(&self) -> Poly {
        let l = self.leading();
        if l.is_zero() {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Square-free part: same real roots, all simple.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) < 2 {
            return self.clone();
        }
        let g = Poly::gcd(self, &self.derivative());
        if g.is_constant() {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    /// Isolated real roots of `self` strictly inside `(a, b)`.
    pub fn roots_in(&self, a: &Q, b: &Q) -> Vec<RootBracket> {
        if self.is_constant() || a >= b {
            return Vec::new();
        }
        Sturm::new(self).isolate(a, b)
    }

    /// Whether `self(x) > 0` for some `x` in the open interval `(a, b)`.
    pub fn exists_positive_on(&self, a: &Q, b: &Q) -> bool {
        if a >= b || self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return self.constant_term().is_positive();
        }
        sample_points(self, a, b)
            .iter()
            .any(|x| self.eval(x).is_positive())
    }

    /// Whether `self(x) < 0` for some `x` in `(a, b)`.
    pub fn exists_negative_on(&self, a: &Q, b: &Q) -> bool {
        (-self).exists_positive_on(a, b)
    }

    /// Maximum over the closed interval `[a, b]` (exact endpoints, interior
    /// critical points refined to double precision).
    pub fn max_on(&self, a: &Q, b: &Q) -> f64 {
        self.extremum_on(a, b, true).0
    }

    pub fn min_on(&self, a: &Q, b: &Q) -> f64 {
        self.extremum_on(a, b, false).0
    }

    /// Extreme value and a location attaining it on `[a, b]`.
    pub fn extremum_on(&self, a: &Q, b: &Q, maximize: bool) -> (f64, Q) {
        let better = |v: f64, best: f64| if maximize { v > best } else { v < best };
        let mut best = (to_f64(&self.eval(a)), a.clone());
        let vb = to_f64(&self.eval(b));
        if better(vb, best.0) {
            best = (vb, b.clone());
        }
        if self.degree() == Some(2) {
            let c = self.coeffs();
            let x = -&c[1] / (&c[2] * Q::from_integer(2.into()));
            if a < &x && &x < b {
                let v = to_f64(&self.eval(&x));
                if better(v, best.0) {
                    best = (v, x);
                }
            }
        } else if self.degree().unwrap_or(0) > 2 {
            for root in self.derivative().roots_in(a, b) {
                let x = root.refine(&self.derivative(), 64);
                let v = to_f64(&self.eval(&x));
                if better(v, best.0) {
                    best = (v, x);
                }
            }
        }
        best
    }

    pub fn max_abs_on(&self, a: &Q, b: &Q) -> f64 {
        self.max_on(a, b).abs().max(self.min_on(a, b).abs())
    }
}

/// A real root located either exactly or inside an open bracket containing
/// no other root and whose endpoints are not roots.
#[derive(Clone, Debug, PartialEq)]
pub enum RootBracket {
    Exact(Q),
    Between(Q, Q),
}

impl RootBracket {
    fn lo(&self) -> &Q {
        match self {
            RootBracket::Exact(x) => x,
            RootBracket::Between(l, _) => l,
        }
    }

    fn hi(&self) -> &Q {
        match self {
            RootBracket::Exact(x) => x,
            RootBracket::Between(_, r) => r,
        }
    }

    /// Narrow the bracket by bisection (sign changes of `p` across the
    /// bracket are guaranteed for simple roots of `p`).
    pub fn refine(&self, p: &Poly, steps: usize) -> Q {
        match self {
            RootBracket::Exact(x) => x.clone(),
            RootBracket::Between(l, r) => {
                let p = p.squarefree();
                let (mut l, mut r) = (l.clone(), r.clone());
                let sl = p.eval(&l).signum();
                for _ in 0..steps {
                    let m = midpoint(&l, &r);
                    let sm = p.eval(&m).signum();
                    if sm.is_zero() {
                        return m;
                    }
                    if sm == sl {
                        l = m;
                    } else {
                        r = m;
                    }
                }
                midpoint(&l, &r)
            }
        }
    }
}

/// One point in every sign-constant open gap of `p` inside `(a, b)`.
fn sample_points(p: &Poly, a: &Q, b: &Q) -> Vec<Q> {
    let roots = p.roots_in(a, b);
    let mut edges: Vec<(Q, Q)> = Vec::with_capacity(roots.len() + 2);
    edges.push((a.clone(), a.clone()));
    for r in &roots {
        edges.push((r.lo().clone(), r.hi().clone()));
    }
    edges.push((b.clone(), b.clone()));
    edges
        .windows(2)
        .map(|w| midpoint(&w[0].1, &w[1].0))
        .collect()
}

struct Sturm {
    square_free: Poly,
    chain: Vec<Poly>,
}

impl Sturm {
    fn new(p: &Poly) -> Self {
        let sf = p.squarefree();
        let mut chain = vec![sf.clone(), sf.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Sturm {
            square_free: sf,
            chain,
        }
    }

    /// Sign variations at `x`, zeros skipped. For a square-free chain this
    /// equals the count just to the right of `x`.
    fn variations(&self, x: &Q) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    fn is_root(&self, x: &Q) -> bool {
        self.square_free.eval(x).is_zero()
    }

    /// Number of distinct roots in the open interval `(l, r)`.
    fn count_open(&self, l: &Q, r: &Q) -> usize {
        let n = self.variations(l) - self.variations(r);
        if self.is_root(r) {
            n - 1
        } else {
            n
        }
    }

    fn isolate(&self, a: &Q, b: &Q) -> Vec<RootBracket> {
        let mut out = Vec::new();
        self.isolate_into(a, b, a, b, &mut out);
        out
    }

    fn isolate_into(&self, l: &Q, r: &Q, a: &Q, b: &Q, out: &mut Vec<RootBracket>) {
        match self.count_open(l, r) {
            0 => {}
            1 => out.push(self.tighten(l.clone(), r.clone(), a, b)),
            _ => {
                let m = midpoint(l, r);
                self.isolate_into(l, &m, a, b, out);
                if self.is_root(&m) {
                    out.push(RootBracket::Exact(m.clone()));
                }
                self.isolate_into(&m, r, a, b, out);
            }
        }
    }

    /// Shrink a one-root bracket until neither endpoint is a root nor an
    /// endpoint of the search interval.
    fn tighten(&self, mut l: Q, mut r: Q, a: &Q, b: &Q) -> RootBracket {
        while self.is_root(&l) || self.is_root(&r) || &l == a || &r == b {
            let m = midpoint(&l, &r);
            if self.is_root(&m) {
                return RootBracket::Exact(m);
            }
            if self.count_open(&l, &m) == 1 {
                r = m;
            } else {
                l = m;
            }
        }
        RootBracket::Between(l, r)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}
