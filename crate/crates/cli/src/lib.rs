//! Command implementations behind the `regudist` binary. Each command reads
//! one JSON document and produces one JSON or CSV report.

use std::fmt;

use regudist::distributions::sequence::{default_ks, DeltaSeqConfig};
use regudist::distributions::{Distribution, Distribution1D, Distribution2D};
use regudist::game::{mixed_analysis, pure_analysis, saddle_verify, solve_rprime, GameSpec, MixedParams, SolveOutcome};
use regudist::geometry::RegionSet;
use regudist::rational::{format_rational, to_f64, Rat};
use regudist::regulated1d::PiecewiseFn1D;
use regudist::regulated2d::PiecewiseFn2D;
use regudist::Q;
use serde::Deserialize;
use serde_json::{json, Value};

/// Opponents drawn per side when a solution is checked.
pub const SADDLE_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Solve,
    Analyze,
    Deltaseq,
    Pair,
    Integrate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub grid_n: usize,
    pub eps: f64,
    pub kmax: u32,
    pub seed: u64,
    /// `None` picks CSV for `deltaseq` and JSON otherwise.
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { command: Command::Solve, grid_n: 101, eps: 1e-3, kmax: 1000, seed: 0, format: None }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_n < 2 {
            return Err(CliError::Schema("--grid must be at least 2".into()));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(CliError::Schema("--eps must be positive".into()));
        }
        if self.kmax < 1 {
            return Err(CliError::Schema("--kmax must be at least 1".into()));
        }
        Ok(())
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Deltaseq => Format::Csv,
            _ => Format::Json,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<regudist::Error> for CliError {
    fn from(e: regudist::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

/// A finished command: the rendered report and whether a solution verdict
/// was negative.
#[derive(Debug)]
pub struct Report {
    pub body: String,
    pub no_solution: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.no_solution {
            3
        } else {
            0
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.body)
    }
}

pub fn run(cfg: &RunConfig, input: &str) -> Result<Report, CliError> {
    cfg.validate()?;
    let (value, no_solution) = match cfg.command {
        Command::Solve => solve(input, cfg)?,
        Command::Analyze => (analyze(input, cfg)?, false),
        Command::Deltaseq => return deltaseq(input, cfg),
        Command::Pair => (pair(input)?, false),
        Command::Integrate => (integrate(input)?, false),
    };
    let body = match cfg.format() {
        Format::Json => to_json(&value)?,
        Format::Csv => flat_csv(&value)?,
    };
    Ok(Report { body, no_solution })
}

fn to_json(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn to_value<T: serde::Serialize>(t: &T) -> Result<Value, CliError> {
    serde_json::to_value(t).map_err(|e| CliError::Internal(e.to_string()))
}

fn solve(input: &str, cfg: &RunConfig) -> Result<(Value, bool), CliError> {
    let game: GameSpec = serde_json::from_str(input)?;
    match solve_rprime(&game, &[])? {
        SolveOutcome::Solved(s) => {
            let saddle = saddle_verify(&game, &s, SADDLE_SAMPLES, cfg.seed)?;
            if !saddle.pass {
                return Err(CliError::Internal(format!(
                    "solution at {} failed its saddle check: margins {} and {}",
                    s.point, saddle.min_margin_player1, saddle.min_margin_player2
                )));
            }
            Ok((json!({ "solution": to_value(&s)?, "saddle": to_value(&saddle)? }), false))
        }
        SolveOutcome::NoSolution(n) => Ok((json!({ "no_solution": to_value(&n)? }), true)),
    }
}

fn analyze(input: &str, cfg: &RunConfig) -> Result<Value, CliError> {
    let game: GameSpec = serde_json::from_str(input)?;
    let pure = pure_analysis(&game, cfg.grid_n)?;
    let params = MixedParams { grid_n: cfg.grid_n, eps: cfg.eps, seed: cfg.seed, ..MixedParams::default() };
    let mixed = mixed_analysis(&game, &params)?;
    Ok(json!({ "pure": to_value(&pure)?, "mixed": to_value(&mixed)? }))
}

fn deltaseq(input: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let seq: DeltaSeqConfig = serde_json::from_str(input)?;
    let rep = seq.run(&default_ks(cfg.kmax))?;
    let body = match cfg.format() {
        Format::Csv => rep.to_csv(),
        Format::Json => to_json(&to_value(&rep)?)?,
    };
    Ok(Report { body, no_solution: false })
}

fn scalar(q: &Q) -> Value {
    json!({ "exact": format_rational(q), "approx": to_f64(q) })
}

#[derive(Deserialize)]
struct PairInput {
    distribution: Value,
    test: Value,
}

/// Read a distribution, choosing the dimension from the shape of its
/// domain so that errors name the actual problem.
fn distribution(v: Value) -> Result<Distribution, CliError> {
    let planar = v.pointer("/regular/domain").is_some_and(Value::is_object);
    Ok(if planar {
        Distribution::Two(serde_json::from_value(v)?)
    } else {
        Distribution::One(serde_json::from_value(v)?)
    })
}

/// The pairing and the share of it coming from the regular part and from
/// each atom.
fn pair(input: &str) -> Result<Value, CliError> {
    let PairInput { distribution: d, test } = serde_json::from_str(input)?;
    let (total, terms) = match distribution(d)? {
        Distribution::One(d) => {
            let phi: PiecewiseFn1D = serde_json::from_value(test)?;
            let mut terms = vec![json!({ "source": "regular", "value": scalar(&Distribution1D::regular(d.regular_part().clone()).pair(&phi)?) })];
            for a in d.atoms() {
                let single = Distribution1D::new(PiecewiseFn1D::zero(d.domain().clone()), vec![a.clone()])?;
                terms.push(json!({ "source": "atom", "p": format_rational(&a.p), "value": scalar(&single.pair(&phi)?) }));
            }
            (d.pair(&phi)?, terms)
        }
        Distribution::Two(d) => {
            let phi: PiecewiseFn2D = serde_json::from_value(test)?;
            let mut terms = vec![json!({ "source": "regular", "value": scalar(&Distribution2D::regular(d.regular_part().clone()).pair(&phi)?) })];
            for a in d.atoms() {
                let single = Distribution2D::new(PiecewiseFn2D::zero(d.domain().clone()), vec![a.clone()])?;
                terms.push(json!({ "source": "atom", "p": to_value(&a.p)?, "value": scalar(&single.pair(&phi)?) }));
            }
            (d.pair(&phi)?, terms)
        }
    };
    Ok(json!({ "value": scalar(&total), "terms": terms }))
}

#[derive(Deserialize)]
struct IntegrateInput {
    distribution: Value,
    #[serde(default)]
    from: Option<Rat>,
    #[serde(default)]
    to: Option<Rat>,
    #[serde(default)]
    set: Option<RegionSet>,
}

/// `∫_a^b` on a line, or the integral over a region set in the plane.
fn integrate(input: &str) -> Result<Value, CliError> {
    let inp: IntegrateInput = serde_json::from_str(input)?;
    let (total, terms) = match (&distribution(inp.distribution)?, inp.from, inp.to, inp.set) {
        (Distribution::One(d), Some(a), Some(b), None) => {
            let mut terms = vec![json!({ "source": "regular", "value": scalar(&Distribution1D::regular(d.regular_part().clone()).integrate(&a.0, &b.0)?) })];
            for at in d.atoms() {
                let single = Distribution1D::new(PiecewiseFn1D::zero(d.domain().clone()), vec![at.clone()])?;
                terms.push(json!({ "source": "atom", "p": format_rational(&at.p), "value": scalar(&single.integrate(&a.0, &b.0)?) }));
            }
            (d.integrate(&a.0, &b.0)?, terms)
        }
        (Distribution::Two(d), None, None, Some(s)) => {
            let mut terms = vec![json!({ "source": "regular", "value": scalar(&Distribution2D::regular(d.regular_part().clone()).integrate(&s)?) })];
            for at in d.atoms() {
                let single = Distribution2D::new(PiecewiseFn2D::zero(d.domain().clone()), vec![at.clone()])?;
                terms.push(json!({ "source": "atom", "p": to_value(&at.p)?, "value": scalar(&single.integrate(&s)?) }));
            }
            (d.integrate(&s)?, terms)
        }
        (Distribution::One(_), ..) => return Err(CliError::Schema("a line distribution needs `from` and `to` only".into())),
        (Distribution::Two(_), ..) => return Err(CliError::Schema("a planar distribution needs `set` only".into())),
    };
    Ok(json!({ "value": scalar(&total), "terms": terms }))
}

/// Flatten a JSON report into `path,value` rows in document order.
fn flat_csv(v: &Value) -> Result<String, CliError> {
    fn walk(path: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            Value::String(s) => out.push((path.to_string(), s.clone())),
            Value::Null => out.push((path.to_string(), String::new())),
            other => out.push((path.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["key", "value"]).map_err(err)?;
    for (k, x) in rows {
        w.write_record([k, x]).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}
