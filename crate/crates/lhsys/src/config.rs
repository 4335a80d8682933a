//! Run configuration: a TOML document with an explicit `schema_version`.
//!
//! ```toml
//! schema_version = 1
//! algebra = "b2"          # b2 | h4 | h6
//! chart = "epidemic"      # cartesian | epidemic
//!
//! [coefficients]          # number, expression string, or sample table
//! rho0 = "1 + 0.5*sin(t)"
//! b = 1.0                 # alias for b2, valid in the b2 algebra
//! # b4 = { times = [0.0, 1.0], values = [1.0, 2.0], interpolation = 1 }
//!
//! [run]
//! t0 = 0.0
//! t1 = 5.0
//! # samples = 200         # default 200
//! # a = 0.0               # default t0
//! # tol = 1e-10           # default 1e-10
//! # seed = 12648430       # default fixed for reproducible verification
//!
//! [[initial]]             # epidemic {q, p} or cartesian {x, y}
//! q = 0.66667
//! p = 3.0
//!
//! # [constants]           # optional, used by `exact` instead of [[initial]]
//! # c1 = 1.0
//! # c2 = 2.0
//!
//! # [output]
//! # dir = "out"
//! ```

use std::path::PathBuf;

use serde::Deserialize;

use crate::algebra::AlgebraId;
use crate::coeffs::{Interpolation, QuadratureConfig, TimeFunction};
use crate::dynamics::{CoefficientSet, IntegrationConstants, SystemSpec};
use crate::error::{Error, Result};
use crate::transform::{ChartId, PhaseState};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 12_648_430;

/// A validated run configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: SystemSpec,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub initial: Vec<PhaseState>,
    pub constants: Option<IntegrationConstants>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn algebra(&self) -> AlgebraId {
        self.spec.algebra()
    }

    pub fn chart(&self) -> ChartId {
        self.spec.chart()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    algebra: String,
    chart: String,
    coefficients: toml::Table,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    initial: Vec<RawState>,
    constants: Option<RawConstants>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    t0: Option<f64>,
    t1: Option<f64>,
    samples: Option<i64>,
    a: Option<f64>,
    tol: Option<f64>,
    seed: Option<u64>,
    quad_abs_tol: Option<f64>,
    quad_rel_tol: Option<f64>,
    quad_max_depth: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    q: Option<f64>,
    p: Option<f64>,
    x: Option<f64>,
    y: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    c1: f64,
    c2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| config_err("<document>", e.message().to_string()))?;

    if raw.schema_version != SCHEMA_VERSION {
        return Err(config_err(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", raw.schema_version),
        ));
    }
    let algebra = match raw.algebra.as_str() {
        "b2" => AlgebraId::B2,
        "h4" => AlgebraId::H4,
        "h6" => AlgebraId::H6,
        other => {
            return Err(config_err(
                "algebra",
                format!("`{other}` is not one of b2, h4, h6"),
            ))
        }
    };
    let chart = match raw.chart.as_str() {
        "cartesian" => ChartId::Cartesian,
        "epidemic" => ChartId::Epidemic,
        other => {
            return Err(config_err(
                "chart",
                format!("`{other}` is not one of cartesian, epidemic"),
            ))
        }
    };

    let coeffs = parse_coefficients(algebra, &raw.coefficients)?;

    let t0 = raw.run.t0.unwrap_or(0.0);
    let t1 = raw.run.t1.unwrap_or(t0);
    if !t0.is_finite() || !t1.is_finite() || t1 < t0 {
        return Err(config_err("run.t1", "need finite t1 >= t0"));
    }
    let samples = match raw.run.samples {
        None => DEFAULT_SAMPLES,
        Some(n) if n >= 2 => n as usize,
        Some(n) => {
            return Err(config_err("run.samples", format!("need at least 2, got {n}")));
        }
    };
    let tol = raw.run.tol.unwrap_or(DEFAULT_TOL);
    if tol.is_nan() || tol <= 0.0 {
        return Err(config_err("run.tol", "tolerance must be positive"));
    }
    let a = raw.run.a.unwrap_or(t0);
    let quad = QuadratureConfig::new(
        raw.run.quad_abs_tol.unwrap_or(1e-12),
        raw.run.quad_rel_tol.unwrap_or(1e-12),
        raw.run.quad_max_depth.unwrap_or(48),
    )
    .map_err(|e| config_err("run.quad_abs_tol", e.to_string()))?;

    let spec = SystemSpec::new(algebra, chart, coeffs, a, quad).map_err(|e| match e {
        Error::ForbiddenCoefficient { name, .. } => config_err(
            &format!("coefficients.{name}"),
            format!("forbidden for algebra {}", algebra.name()),
        ),
        other => other,
    })?;

    let mut initial = Vec::with_capacity(raw.initial.len());
    for (i, s) in raw.initial.iter().enumerate() {
        let path = format!("initial[{i}]");
        let state = match (s.q, s.p, s.x, s.y) {
            (Some(q), Some(p), None, None) => PhaseState::epidemic(q, p),
            (None, None, Some(x), Some(y)) => PhaseState::cartesian(x, y),
            _ => {
                return Err(config_err(
                    &path,
                    "give exactly {q, p} (epidemic) or {x, y} (cartesian)",
                ))
            }
        };
        state.require_regular().map_err(|e| config_err(&path, e.to_string()))?;
        initial.push(state);
    }

    let constants = raw
        .constants
        .map(|c| IntegrationConstants::new(c.c1, c.c2));

    let out_dir = PathBuf::from(
        raw.output
            .and_then(|o| o.dir)
            .unwrap_or_else(|| ".".to_string()),
    );

    Ok(RunConfig {
        spec,
        t0,
        t1,
        samples,
        tol,
        seed: raw.run.seed.unwrap_or(DEFAULT_SEED),
        initial,
        constants,
        out_dir,
    })
}

const COEFFICIENT_NAMES: [&str; 6] = ["rho0", "b", "b1", "b2", "b4", "b5"];

fn parse_coefficients(algebra: AlgebraId, table: &toml::Table) -> Result<CoefficientSet> {
    for key in table.keys() {
        if !COEFFICIENT_NAMES.contains(&key.as_str()) {
            return Err(config_err(
                &format!("coefficients.{key}"),
                "unknown coefficient (expected rho0, b, b1, b2, b4, b5)",
            ));
        }
    }
    if table.contains_key("b") && algebra != AlgebraId::B2 {
        return Err(config_err(
            "coefficients.b",
            "`b` is the b2-algebra alias for b2; name the coefficient b2 here",
        ));
    }
    if table.contains_key("b") && table.contains_key("b2") {
        return Err(config_err(
            "coefficients.b",
            "give either `b` or `b2`, not both",
        ));
    }
    let get = |name: &str| -> Result<TimeFunction> {
        let value = match table.get(name) {
            Some(v) => v,
            None if name == "b2" => match table.get("b") {
                Some(v) => v,
                None => return Ok(TimeFunction::zero()),
            },
            None => return Ok(TimeFunction::zero()),
        };
        parse_time_function(&format!("coefficients.{name}"), value)
    };
    Ok(CoefficientSet {
        rho0: get("rho0")?,
        b1: get("b1")?,
        b2: get("b2")?,
        b4: get("b4")?,
        b5: get("b5")?,
    })
}

fn parse_time_function(path: &str, value: &toml::Value) -> Result<TimeFunction> {
    match value {
        toml::Value::Integer(n) => Ok(TimeFunction::constant(*n as f64)),
        toml::Value::Float(x) => Ok(TimeFunction::constant(*x)),
        toml::Value::String(s) => {
            TimeFunction::parse(s).map_err(|e| config_err(path, e.to_string()))
        }
        toml::Value::Table(t) => parse_table_function(path, t),
        other => Err(config_err(
            path,
            format!("expected number, expression string or table, got {}", other.type_str()),
        )),
    }
}

fn parse_table_function(path: &str, t: &toml::Table) -> Result<TimeFunction> {
    let floats = |key: &str| -> Result<Vec<f64>> {
        let v = t
            .get(key)
            .ok_or_else(|| config_err(path, format!("table needs `{key}`")))?;
        v.as_array()
            .ok_or_else(|| config_err(path, format!("`{key}` must be an array")))?
            .iter()
            .map(|x| match x {
                toml::Value::Integer(n) => Ok(*n as f64),
                toml::Value::Float(f) => Ok(*f),
                _ => Err(config_err(path, format!("`{key}` must contain numbers"))),
            })
            .collect()
    };
    for key in t.keys() {
        if !["times", "values", "interpolation"].contains(&key.as_str()) {
            return Err(config_err(
                path,
                format!("unknown table key `{key}` (expected times, values, interpolation)"),
            ));
        }
    }
    let times = floats("times")?;
    let values = floats("values")?;
    let order = match t.get("interpolation") {
        None => 1,
        Some(toml::Value::Integer(n)) => *n as u32,
        Some(_) => return Err(config_err(path, "`interpolation` must be 1 or 3")),
    };
    let interpolation =
        Interpolation::from_order(order).map_err(|e| config_err(path, e.to_string()))?;
    TimeFunction::table(times, values, interpolation).map_err(|e| config_err(path, e.to_string()))
}
