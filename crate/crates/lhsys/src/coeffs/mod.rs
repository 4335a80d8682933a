//! Time-dependent coefficients and their integrals.
//!
//! A [`TimeFunction`] is one of the scalar coefficients driving a system:
//! a constant, a parsed expression of `t`, or a table of samples. The module
//! also computes the running integral `theta(t) = ∫_a^t rho0(s) ds` and the
//! exponentially weighted integrals `∫_a^t e^{±theta(u)} f(u) du` on which
//! every closed-form solution is built.

mod expr;
mod quad;
mod table;

pub use expr::Expr;
pub use quad::{integrate as quad_integrate, QuadratureConfig};
pub use table::{Interpolation, Table};

use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};

/// A scalar coefficient of time.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeFunction {
    Constant(f64),
    Expression(Expr),
    Table(Table),
}

impl TimeFunction {
    pub fn constant(value: f64) -> Self {
        TimeFunction::Constant(value)
    }

    pub fn zero() -> Self {
        TimeFunction::Constant(0.0)
    }

    /// Parse an expression over `t` into a coefficient.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        Ok(TimeFunction::Expression(expr::parse(text)?))
    }

    pub fn table(times: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        Ok(TimeFunction::Table(Table::new(times, values, interpolation)?))
    }

    /// Evaluate the coefficient at time `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            TimeFunction::Constant(c) => *c,
            TimeFunction::Expression(e) => e.eval(t),
            TimeFunction::Table(tab) => tab.eval(t)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteValue { t })
        }
    }

    /// True when the coefficient is the literal constant zero.
    pub fn is_zero(&self) -> bool {
        match self {
            TimeFunction::Constant(c) => *c == 0.0,
            TimeFunction::Expression(e) => matches!(e, Expr::Num(v) if *v == 0.0),
            TimeFunction::Table(_) => false,
        }
    }

    /// Central-difference derivative with a magnitude-scaled step.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        if let TimeFunction::Constant(_) = self {
            return Ok(0.0);
        }
        let h = f64::EPSILON.cbrt() * t.abs().max(1.0);
        Ok((self.eval(t + h)? - self.eval(t - h)?) / (2.0 * h))
    }

    /// Canonical textual form; stable under re-parsing for expressions.
    pub fn canonical_string(&self) -> String {
        match self {
            TimeFunction::Constant(c) => format!("const:{c}"),
            TimeFunction::Expression(e) => format!("expr:{e}"),
            TimeFunction::Table(tab) => {
                let kind = match tab.interpolation() {
                    Interpolation::Linear => 1,
                    Interpolation::Cubic => 3,
                };
                format!("table{kind}:{:?}|{:?}", tab.times(), tab.values())
            }
        }
    }
}

impl fmt::Display for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFunction::Constant(c) => write!(f, "{c}"),
            TimeFunction::Expression(e) => write!(f, "{e}"),
            TimeFunction::Table(tab) => write!(
                f,
                "table({} samples on [{}, {}])",
                tab.times().len(),
                tab.span().0,
                tab.span().1
            ),
        }
    }
}

/// Sign of the exponential weight in [`weighted_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Running integral `theta(t) = ∫_a^t rho0(s) ds`, antisymmetric in `a <-> t`.
pub fn theta(rho0: &TimeFunction, a: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    quad::integrate(&|s| rho0.eval(s), a, t, cfg)
}

/// `∫_a^t e^{sign * theta(u)} f(u) du`, with `theta` taken from the same `a`.
pub fn weighted_integral(
    f: &TimeFunction,
    rho0: &TimeFunction,
    sign: Sign,
    a: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let s = sign.factor();
    let integrand = |u: f64| Ok((s * theta(rho0, a, u, cfg)?).exp() * f.eval(u)?);
    quad::integrate(&integrand, a, t, cfg)
}

/// Memoized running integral of `rho0` from a fixed lower limit.
///
/// Checkpoints accumulate as queries arrive, so sweeping a trajectory costs
/// one short quadrature per new time instead of one integral from `a` each
/// call. Internally synchronized; shared references may be used from many
/// threads.
pub struct ThetaCache {
    rho0: TimeFunction,
    a: f64,
    cfg: QuadratureConfig,
    checkpoints: Mutex<Vec<(f64, f64)>>,
}

impl ThetaCache {
    pub fn new(rho0: TimeFunction, a: f64, cfg: QuadratureConfig) -> Self {
        ThetaCache {
            rho0,
            a,
            cfg,
            checkpoints: Mutex::new(vec![(a, 0.0)]),
        }
    }

    pub fn lower_limit(&self) -> f64 {
        self.a
    }

    /// `theta(t)`, reusing the nearest previously computed checkpoint.
    pub fn value(&self, t: f64) -> Result<f64> {
        let mut points = self.checkpoints.lock().expect("theta cache poisoned");
        let idx = match points.binary_search_by(|(u, _)| u.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(points[i].1),
            Err(i) => i,
        };
        // nearest neighbor among points[idx-1] and points[idx]
        let (u0, th0) = if idx == 0 {
            points[0]
        } else if idx == points.len() {
            points[idx - 1]
        } else {
            let (lo, hi) = (points[idx - 1], points[idx]);
            if t - lo.0 <= hi.0 - t {
                lo
            } else {
                hi
            }
        };
        let th = th0 + theta(&self.rho0, u0, t, &self.cfg)?;
        let slot = match points.binary_search_by(|(u, _)| u.partial_cmp(&t).unwrap()) {
            Ok(i) | Err(i) => i,
        };
        points.insert(slot, (t, th));
        Ok(th)
    }
}
