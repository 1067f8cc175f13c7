//! Sparse bivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::rational::{format_rational, qi, to_f64, Rat, Q};

/// `Σ c_ij x^i y^j`, zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(Rat, u32, u32)>", into = "Vec<(Rat, u32, u32)>")]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Q>,
}

impl From<Vec<(Rat, u32, u32)>> for Poly2 {
    fn from(v: Vec<(Rat, u32, u32)>) -> Self {
        Poly2::from_terms(v.into_iter().map(|(c, i, j)| (i, j, c.0)))
    }
}

impl From<Poly2> for Vec<(Rat, u32, u32)> {
    fn from(p: Poly2) -> Self {
        p.terms.into_iter().map(|((i, j), c)| (Rat(c), i, j)).collect()
    }
}

impl Poly2 {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Q)>) -> Self {
        let mut p = Poly2::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::from_terms([(0, 0, c)])
    }

    pub fn x() -> Self {
        Self::from_terms([(1, 0, qi(1))])
    }

    pub fn y() -> Self {
        Self::from_terms([(0, 1, qi(1))])
    }

    /// `a x + b y + c`.
    pub fn affine(a: Q, b: Q, c: Q) -> Self {
        Self::from_terms([(1, 0, a), (0, 1, b), (0, 0, c)])
    }

    pub fn from_poly_x(p: &Poly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (i as u32, 0, c.clone())))
    }

    pub fn from_poly_y(p: &Poly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| (0, j as u32, c.clone())))
    }

    fn add_term(&mut self, i: u32, j: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Q)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Q::zero)
    }

    /// Total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i + j <= 1)
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * pow(x, i) * pow(y, j))
            .sum()
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn scale(&self, k: &Q) -> Poly2 {
        if k.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    /// Swap the roles of `x` and `y`.
    pub fn transpose(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// `p(x, y0)` as a polynomial in `x`.
    pub fn restrict_y(&self, y0: &Q) -> Poly {
        let mut cs: Vec<Q> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let i = i as usize;
            if cs.len() <= i {
                cs.resize(i + 1, Q::zero());
            }
            cs[i] += c * pow(y0, j);
        }
        Poly::new(cs)
    }

    /// `p(x0, y)` as a polynomial in `y`.
    pub fn restrict_x(&self, x0: &Q) -> Poly {
        self.transpose().restrict_y(x0)
    }

    /// `∫ p dy` with zero constant.
    pub fn antiderivative_y(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, j + 1), c / qi(j as i64 + 1)))
                .collect(),
        }
    }

    /// `p(x, s x + t)` as a polynomial in `x`.
    pub fn substitute_y_affine(&self, s: &Q, t: &Q) -> Poly {
        let line = Poly::linear(t.clone(), s.clone());
        let mut out = Poly::zero();
        let mut cache: BTreeMap<u32, Poly> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let yj = cache.entry(j).or_insert_with(|| line.pow(j)).clone();
            let mut xi = vec![Q::zero(); i as usize];
            xi.push(c.clone());
            out = &out + &(&Poly::new(xi) * &yj);
        }
        out
    }

    /// `p(x0 + t dx, y0 + t dy)` as a polynomial in `t`.
    pub fn along_ray(&self, x0: &Q, y0: &Q, dx: &Q, dy: &Q) -> Poly {
        let lx = Poly::linear(x0.clone(), dx.clone());
        let ly = Poly::linear(y0.clone(), dy.clone());
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            out = &out + &(&lx.pow(i) * &ly.pow(j)).scale(c);
        }
        out
    }

    /// Multiply by a polynomial in `x` alone.
    pub fn mul_poly_x(&self, p: &Poly) -> Poly2 {
        self * &Poly2::from_poly_x(p)
    }

    /// Exact lower and upper bounds over `[xa, xb] × [ya, yb]` by interval
    /// arithmetic on monomials. Tight for affine polynomials.
    pub fn bounds_on_rect(&self, xa: &Q, xb: &Q, ya: &Q, yb: &Q) -> (Q, Q) {
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        for (&(i, j), c) in &self.terms {
            let (xl, xh) = pow_range(xa, xb, i);
            let (yl, yh) = pow_range(ya, yb, j);
            let (ml, mh) = mul_range(&xl, &xh, &yl, &yh);
            let (tl, th) = mul_range(c, c, &ml, &mh);
            lo += tl;
            hi += th;
        }
        (lo, hi)
    }
}

fn pow(x: &Q, n: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..n {
        r *= x;
    }
    r
}

fn pow_range(a: &Q, b: &Q, n: u32) -> (Q, Q) {
    let pa = pow(a, n);
    let pb = pow(b, n);
    if n.is_multiple_of(2) && a < &Q::zero() && b > &Q::zero() {
        (Q::zero(), pa.max(pb))
    } else if pa <= pb {
        (pa, pb)
    } else {
        (pb, pa)
    }
}

fn mul_range(a: &Q, b: &Q, c: &Q, d: &Q) -> (Q, Q) {
    let ps = [a * c, a * d, b * c, b * d];
    let lo = ps.iter().min().unwrap().clone();
    let hi = ps.iter().max().unwrap().clone();
    (lo, hi)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, c.clone());
        }
        r
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        self + &(-o)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut r = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                r.add_term(i + k, j + l, c * d);
            }
        }
        r
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let mut s = format_rational(c);
                match i {
                    0 => {}
                    1 => s.push_str("*x"),
                    _ => s.push_str(&format!("*x^{i}")),
                }
                match j {
                    0 => {}
                    1 => s.push_str("*y"),
                    _ => s.push_str(&format!("*y^{j}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_and_eval() {
        let p = &Poly2::x() - &Poly2::y();
        let sq = &p * &p;
        assert_eq!(sq.eval(&qi(3), &qi(1)), qi(4));
        assert_eq!(sq.transpose(), sq);
        assert!((&p + &p.transpose()).is_zero());
        assert!(p.is_affine() && !sq.is_affine());
    }

    #[test]
    fn restriction_and_substitution() {
        // x^2 y + 3
        let p = Poly2::from_terms([(2, 1, qi(1)), (0, 0, qi(3))]);
        assert_eq!(p.restrict_y(&qi(2)), Poly::new(vec![qi(3), qi(0), qi(2)]));
        assert_eq!(p.restrict_x(&qi(2)), Poly::new(vec![qi(3), qi(4)]));
        // y = 2x + 1  =>  x^2 (2x + 1) + 3
        let s = p.substitute_y_affine(&qi(2), &qi(1));
        assert_eq!(s, Poly::new(vec![qi(3), qi(0), qi(1), qi(2)]));
        let r = p.along_ray(&qi(1), &qi(0), &qi(0), &qi(1));
        assert_eq!(r, Poly::new(vec![qi(3), qi(1)]));
    }

    #[test]
    fn antiderivative() {
        let p = Poly2::from_terms([(1, 2, qi(3))]);
        let a = p.antiderivative_y();
        assert_eq!(a, Poly2::from_terms([(1, 3, qi(1))]));
    }

    #[test]
    fn rect_bounds_contain_samples() {
        let p = Poly2::from_terms([(2, 0, qi(1)), (1, 1, qi(-2)), (0, 0, q(1, 3))]);
        let (lo, hi) = p.bounds_on_rect(&qi(-1), &qi(2), &qi(-1), &q(1, 2));
        for a in 0..=30 {
            for b in 0..=15 {
                let x = q(-1, 1) + q(a, 10);
                let y = q(-1, 1) + q(b, 10);
                let v = p.eval(&x, &y);
                assert!(lo <= v && v <= hi);
            }
        }
        let aff = Poly2::affine(qi(1), qi(-1), qi(0));
        assert_eq!(aff.bounds_on_rect(&qi(-1), &qi(1), &qi(-1), &qi(1)), (qi(-2), qi(2)));
    }

    #[test]
    fn json_round_trip() {
        let p = Poly2::from_terms([(1, 0, q(1, 2)), (0, 1, qi(-1))]);
        let t = serde_json::to_string(&p).unwrap();
        assert_eq!(t, r#"[["-1",0,1],["1/2",1,0]]"#);
        assert_eq!(serde_json::from_str::<Poly2>(&t).unwrap(), p);
    }
}
