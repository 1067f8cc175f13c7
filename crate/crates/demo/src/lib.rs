//! WebAssembly entry points for the static page in `www/`. Every export
//! takes and returns strings; the plain functions in [`ops`] do the work and
//! are what the native tests call.

use wasm_bindgen::prelude::*;

pub mod ops {
    use regudist::distributions::sequence::{default_ks, DeltaSeqConfig};
    use regudist::distributions::Distribution1D;
    use regudist::game::{solve_rprime, GameSpec, SolveOutcome};
    use regudist::rational::{format_rational, parse_rational, q, qi, to_f64, Rat};
    use regudist::Q;
    use regudist::regulated1d::Interval;
    use serde_json::{json, Value};

    fn err(e: impl std::fmt::Display) -> String {
        e.to_string()
    }

    fn rat(name: &str, s: &str) -> Result<Q, String> {
        parse_rational(s).map_err(|e| format!("{name}: {e}"))
    }

    pub fn example_game() -> String {
        include_str!("../../../fixtures/example_game.json").to_string()
    }

    /// Solve a game given as JSON; the result names the point, the
    /// atom weights and the value, or lists why each candidate failed.
    pub fn solve(game_json: &str) -> Result<String, String> {
        let game: GameSpec = serde_json::from_str(game_json).map_err(err)?;
        let out = match solve_rprime(&game, &[]).map_err(err)? {
            SolveOutcome::Solved(s) => json!({
                "solved": true,
                "point": s.point,
                "beta1": format_rational(&s.beta1),
                "beta2": format_rational(&s.beta2),
                "value": format_rational(&s.value),
                "value_approx": to_f64(&s.value),
                "A": format_rational(&s.conditions.a),
                "limits": s.limits,
            }),
            SolveOutcome::NoSolution(n) => json!({
                "solved": false,
                "candidates": n.candidates.iter().map(|c| json!({ "point": c.point, "failures": c.failures })).collect::<Vec<_>>(),
            }),
        };
        Ok(out.to_string())
    }

    /// `∫_{-1}^t` of the line delta with right weight `beta` at `p`, for
    /// `p` in `(-1, 1)` and `t` in `[-1, 1]`, and the same integral just
    /// below, at and just above `p`.
    pub fn line_delta(p: &str, beta: &str, t: &str) -> Result<String, String> {
        let (p, beta, t) = (rat("p", p)?, rat("beta", beta)?, rat("t", t)?);
        let (lo, hi) = (qi(-1), qi(1));
        if p <= lo || p >= hi {
            return Err("p must lie in (-1, 1)".into());
        }
        if t < lo || t > hi {
            return Err("t must lie in [-1, 1]".into());
        }
        // a wider domain keeps (-1, t) compactly inside it
        let domain = Interval::new(qi(-2), qi(2)).map_err(err)?;
        let d = Distribution1D::delta(domain, p.clone(), beta).map_err(err)?;
        let upto = |x: &Q| d.integrate(&lo, x).map(|v| format_rational(&v)).map_err(err);
        let h = q(1, 1_000_000);
        let v: Value = json!({
            "integral": upto(&t)?,
            "below": upto(&(&p - &h).max(lo.clone()))?,
            "at": upto(&p)?,
            "above": upto(&(&p + &h).min(hi.clone()))?,
        });
        Ok(v.to_string())
    }

    /// Convergence table of the built-in line sequence at 0 on `(-1, 1)`:
    /// cone-ball integrals against their limits for `k` up to `kmax`.
    pub fn delta_table(beta: &str, r: &str, kmax: u32) -> Result<String, String> {
        let cfg = DeltaSeqConfig::Line {
            dim: 1,
            domain: Interval::new(qi(-1), qi(1)).map_err(err)?,
            p: Rat(qi(0)),
            beta: Rat(rat("beta", beta)?),
            cones: vec!["right".into(), "left".into(), "both".into()],
            r: Rat(rat("r", r)?),
        };
        if kmax == 0 || kmax > 100_000 {
            return Err("kmax must be between 1 and 100000".into());
        }
        let rep = cfg.run(&default_ks(kmax)).map_err(err)?;
        serde_json::to_string(&rep.rows).map_err(err)
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = exampleGame)]
pub fn example_game() -> String {
    ops::example_game()
}

#[wasm_bindgen]
pub fn solve(game_json: &str) -> Result<String, JsError> {
    js(ops::solve(game_json))
}

#[wasm_bindgen(js_name = lineDelta)]
pub fn line_delta(p: &str, beta: &str, t: &str) -> Result<String, JsError> {
    js(ops::line_delta(p, beta, t))
}

#[wasm_bindgen(js_name = deltaTable)]
pub fn delta_table(beta: &str, r: &str, kmax: u32) -> Result<String, JsError> {
    js(ops::delta_table(beta, r, kmax))
}
