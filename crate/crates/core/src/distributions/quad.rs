//! Floating-point quadrature used by oracles and by the numeric paths of
//! delta-sequence verification.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static T: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    T.get_or_init(|| gauss_legendre(16))
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static T: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    T.get_or_init(|| gauss_legendre(32))
}

/// 16-point Gauss–Legendre rule on `[a, b]`; exact for degree ≤ 31.
pub fn gl16_on(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (xs, ws) = gl16();
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    h * xs.iter().zip(ws).map(|(x, w)| w * f(m + h * x)).sum::<f64>()
}

/// Adaptive Gauss–Legendre: split until the 32-point rule agrees with the
/// sum of two 16-point halves to `tol`.
pub fn adaptive(a: f64, b: f64, tol: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    fn rule32(a: f64, b: f64, f: &dyn Fn(f64) -> f64) -> f64 {
        let (xs, ws) = gl32();
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        h * xs.iter().zip(ws).map(|(x, w)| w * f(m + h * x)).sum::<f64>()
    }
    fn go(a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &dyn Fn(f64) -> f64) -> f64 {
        let m = 0.5 * (a + b);
        let l = rule32(a, m, f);
        let r = rule32(m, b, f);
        if (l + r - whole).abs() <= tol || depth >= 40 {
            return l + r;
        }
        go(a, m, l, 0.5 * tol, depth + 1, f) + go(m, b, r, 0.5 * tol, depth + 1, f)
    }
    if b <= a {
        return 0.0;
    }
    go(a, b, rule32(a, b, f), tol, 0, f)
}

type Cell = (f64, f64, f64, f64);

struct Pending {
    err: f64,
    value: f64,
    cell: Cell,
}

impl PartialEq for Pending {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pending {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Adaptive midpoint cubature on `[x0, x1] × [y0, y1]`: a cell is accepted
/// when its 2×2, 3×3 and 4×4 midpoint estimates agree to within its share
/// of `rel_tol · |estimate|`. Stops refining once `max_evals` is
/// spent. Returns the estimate and the number of evaluations used.
pub fn cubature_2d(
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    rel_tol: f64,
    max_evals: usize,
    f: &dyn Fn(f64, f64) -> f64,
) -> (f64, usize) {
    let mid = |xa: f64, xb: f64, ya: f64, yb: f64, n: usize| -> f64 {
        let hx = (xb - xa) / n as f64;
        let hy = (yb - ya) / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += f(xa + (i as f64 + 0.5) * hx, ya + (j as f64 + 0.5) * hy);
            }
        }
        s * hx * hy
    };
    let total_area = (x1 - x0) * (y1 - y0);
    let first = mid(x0, x1, y0, y1, 32);
    let mut evals = 1024;
    let scale = first.abs().max(1e-300);
    // three non-nested midpoint grids, so a jump rarely fools all of them
    let estimate = |c: Cell| -> (f64, f64) {
        let (xa, xb, ya, yb) = c;
        let coarse = mid(xa, xb, ya, yb, 2);
        let middle = mid(xa, xb, ya, yb, 3);
        let fine = mid(xa, xb, ya, yb, 4);
        (fine, (fine - coarse).abs().max((fine - middle).abs()))
    };
    // start from a 16 x 16 grid so a jump cannot hide between the samples
    // of one large cell; then always split the worst cell, so an exhausted
    // budget still leaves a balanced refinement
    let n0 = 16;
    let (hx, hy) = ((x1 - x0) / n0 as f64, (y1 - y0) / n0 as f64);
    let mut heap = BinaryHeap::new();
    let mut acc = 0.0;
    let push = |heap: &mut BinaryHeap<Pending>, acc: &mut f64, evals: &mut usize, c: Cell| {
        let (v, err) = estimate(c);
        *evals += 29;
        let share = (c.1 - c.0) * (c.3 - c.2) / total_area;
        if err <= rel_tol * scale * share.max(1e-12) {
            *acc += v;
        } else {
            heap.push(Pending { err, value: v, cell: c });
        }
    };
    for i in 0..n0 {
        for j in 0..n0 {
            let (i, j) = (i as f64, j as f64);
            let c = (x0 + i * hx, x0 + (i + 1.0) * hx, y0 + j * hy, y0 + (j + 1.0) * hy);
            push(&mut heap, &mut acc, &mut evals, c);
        }
    }
    while evals < max_evals {
        let Some(Pending { cell: (xa, xb, ya, yb), .. }) = heap.pop() else { break };
        let xm = 0.5 * (xa + xb);
        let ym = 0.5 * (ya + yb);
        for c in [(xa, xm, ya, ym), (xm, xb, ya, ym), (xa, xm, ym, yb), (xm, xb, ym, yb)] {
            push(&mut heap, &mut acc, &mut evals, c);
        }
    }
    acc += heap.iter().map(|p| p.value).sum::<f64>();
    (acc, evals)
}

/// `∫` over the disk of radius `r` about `c` of `f(x, y, θ)`, in polar form.
///
/// `theta_breaks` (radians) are angles where the integrand may jump as a
/// function of direction; `lines` are `(a, b, c)` with `a x + b y = c`
/// across which it may jump. Both are honoured exactly so each panel is a
/// smooth integrand.
pub fn polar_disk(
    c: (f64, f64),
    r: f64,
    theta_breaks: &[f64],
    lines: &[(f64, f64, f64)],
    f: &dyn Fn(f64, f64, f64) -> f64,
) -> f64 {
    let (cx, cy) = c;
    let tau = 2.0 * PI;
    let mut breaks: Vec<f64> = theta_breaks.iter().map(|t| t.rem_euclid(tau)).collect();
    for &(a, b, cc) in lines {
        let n = (a * a + b * b).sqrt();
        let dist = (cc - a * cx - b * cy) / n;
        if dist.abs() < 1e-14 {
            let t = b.atan2(-a);
            breaks.push(t.rem_euclid(tau));
            breaks.push((t + PI).rem_euclid(tau));
        } else if dist.abs() < r {
            let phi = b.atan2(a);
            let d = (dist / r).acos();
            breaks.push((phi + d).rem_euclid(tau));
            breaks.push((phi - d).rem_euclid(tau));
            // angle of the foot of the perpendicular: the ray length is
            // smooth but has its minimum there
            breaks.push(if dist > 0.0 { phi } else { phi + PI }.rem_euclid(tau));
        }
    }
    breaks.push(0.0);
    breaks.push(tau);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let radial = |t: f64| -> f64 {
        let (ct, st) = (t.cos(), t.sin());
        let mut cuts = vec![0.0, r];
        for &(a, b, cc) in lines {
            let den = a * ct + b * st;
            if den.abs() > 1e-300 {
                let s = (cc - a * cx - b * cy) / den;
                if s > 0.0 && s < r {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        cuts.windows(2)
            .map(|w| gl16_on(w[0], w[1], |s| s * f(cx + s * ct, cy + s * st, t)))
            .sum()
    };
    breaks
        .windows(2)
        .filter(|w| w[1] - w[0] > 1e-15)
        .map(|w| adaptive(w[0], w[1], 1e-13, &radial))
        .sum()
}
