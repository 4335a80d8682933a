//! The canonical transformation between the Cartesian chart `(x, y)` and the
//! epidemic chart `(q, p) = (<rho>, 1/sigma)`:
//!
//! ```text
//! x = (q^2 p^2 - 1)/p        q = x^2 y/(x^2 y^2 - 1)
//! y = q p^2/(q^2 p^2 - 1)    p = (x^2 y^2 - 1)/x
//! ```
//!
//! The map preserves the symplectic form, `dq ∧ dp = dx ∧ dy`; both facts are
//! checked numerically by [`jacobian_det`] and the round-trip tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rejection radius around the genuine poles of the chart change.
pub const SINGULARITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartId {
    Cartesian,
    Epidemic,
}

impl ChartId {
    pub fn name(self) -> &'static str {
        match self {
            ChartId::Cartesian => "cartesian",
            ChartId::Epidemic => "epidemic",
        }
    }

    pub fn other(self) -> ChartId {
        match self {
            ChartId::Cartesian => ChartId::Epidemic,
            ChartId::Epidemic => ChartId::Cartesian,
        }
    }
}

/// A point of the plane tagged with the chart its coordinates live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseState {
    Cartesian { x: f64, y: f64 },
    Epidemic { q: f64, p: f64 },
}

impl PhaseState {
    pub fn cartesian(x: f64, y: f64) -> Self {
        PhaseState::Cartesian { x, y }
    }

    pub fn epidemic(q: f64, p: f64) -> Self {
        PhaseState::Epidemic { q, p }
    }

    pub fn from_coords(chart: ChartId, c1: f64, c2: f64) -> Self {
        match chart {
            ChartId::Cartesian => PhaseState::Cartesian { x: c1, y: c2 },
            ChartId::Epidemic => PhaseState::Epidemic { q: c1, p: c2 },
        }
    }

    pub fn chart(&self) -> ChartId {
        match self {
            PhaseState::Cartesian { .. } => ChartId::Cartesian,
            PhaseState::Epidemic { .. } => ChartId::Epidemic,
        }
    }

    pub fn coords(&self) -> (f64, f64) {
        match *self {
            PhaseState::Cartesian { x, y } => (x, y),
            PhaseState::Epidemic { q, p } => (q, p),
        }
    }

    /// Regularity of the state for the operations defined on its own chart:
    /// the epidemic realizations and the inverse map have genuine poles,
    /// while Cartesian realizations are polynomial (always regular).
    pub fn is_regular(&self) -> bool {
        match *self {
            PhaseState::Cartesian { x, y } => x.is_finite() && y.is_finite(),
            PhaseState::Epidemic { q, p } => {
                q.is_finite()
                    && p.is_finite()
                    && p.abs() >= SINGULARITY_GUARD
                    && (q * q * p * p - 1.0).abs() >= SINGULARITY_GUARD
            }
        }
    }

    pub fn require_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            let (c1, c2) = self.coords();
            Err(Error::SingularState {
                chart: self.chart().name(),
                c1,
                c2,
                reason: "state on the singular set of its chart",
            })
        }
    }

    /// Whether the inverse of the chart change is defined at this state.
    pub fn is_invertible(&self) -> bool {
        match *self {
            PhaseState::Cartesian { x, y } => {
                x.is_finite()
                    && y.is_finite()
                    && x.abs() >= SINGULARITY_GUARD
                    && (x * x * y * y - 1.0).abs() >= SINGULARITY_GUARD
            }
            PhaseState::Epidemic { .. } => self.is_regular(),
        }
    }

    /// Express this state in `chart`, applying the canonical transformation
    /// when the charts differ.
    pub fn to_chart(&self, chart: ChartId) -> Result<PhaseState> {
        match (*self, chart) {
            (s @ PhaseState::Cartesian { .. }, ChartId::Cartesian) => Ok(s),
            (s @ PhaseState::Epidemic { .. }, ChartId::Epidemic) => Ok(s),
            (PhaseState::Cartesian { x, y }, ChartId::Epidemic) => {
                let (q, p) = cart_to_epi(x, y)?;
                Ok(PhaseState::Epidemic { q, p })
            }
            (PhaseState::Epidemic { q, p }, ChartId::Cartesian) => {
                let (x, y) = epi_to_cart(q, p)?;
                Ok(PhaseState::Cartesian { x, y })
            }
        }
    }
}

/// Mean infected density and variance read off an epidemic-chart state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpidemicObservables {
    pub mean_density: f64,
    pub variance: f64,
}

/// `(q, p) -> (x, y)`.
pub fn epi_to_cart(q: f64, p: f64) -> Result<(f64, f64)> {
    let d = q * q * p * p - 1.0;
    if p.abs() < SINGULARITY_GUARD || d.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "epidemic",
            c1: q,
            c2: p,
            reason: "requires p != 0 and q^2 p^2 != 1",
        });
    }
    Ok((d / p, q * p * p / d))
}

/// `(x, y) -> (q, p)`, the left inverse of [`epi_to_cart`] on regular points.
pub fn cart_to_epi(x: f64, y: f64) -> Result<(f64, f64)> {
    let d = x * x * y * y - 1.0;
    if x.abs() < SINGULARITY_GUARD || d.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "cartesian",
            c1: x,
            c2: y,
            reason: "inversion requires x != 0 and x^2 y^2 != 1",
        });
    }
    Ok((x * x * y / d, d / x))
}

/// `<rho> = q`, `sigma^2 = 1/p^2`.
pub fn observables(q: f64, p: f64) -> Result<EpidemicObservables> {
    if p.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "epidemic",
            c1: q,
            c2: p,
            reason: "variance is undefined at p = 0",
        });
    }
    Ok(EpidemicObservables {
        mean_density: q,
        variance: 1.0 / (p * p),
    })
}

/// Determinant of the finite-difference Jacobian of the chart change at
/// `point`, mapping towards the opposite chart. Equals 1 for a canonical
/// transformation, up to discretization error.
pub fn jacobian_det(point: PhaseState) -> Result<f64> {
    point.require_regular()?;
    if !point.is_invertible() {
        let (c1, c2) = point.coords();
        return Err(Error::SingularState {
            chart: point.chart().name(),
            c1,
            c2,
            reason: "chart change undefined at this point",
        });
    }
    let (u, v) = point.coords();
    let chart = point.chart();
    let map = |a: f64, b: f64| -> Result<(f64, f64)> {
        match chart {
            ChartId::Epidemic => epi_to_cart(a, b),
            ChartId::Cartesian => cart_to_epi(a, b),
        }
    };
    // fourth-order central differences: the rational map has large third
    // derivatives towards the poles, and the determinant is wanted to 1e-8
    let column = |h: f64, f: &dyn Fn(f64) -> Result<(f64, f64)>| -> Result<(f64, f64)> {
        let (p1, p2) = f(h)?;
        let (m1, m2) = f(-h)?;
        let (p21, p22) = f(2.0 * h)?;
        let (m21, m22) = f(-2.0 * h)?;
        Ok((
            (8.0 * (p1 - m1) - (p21 - m21)) / (12.0 * h),
            (8.0 * (p2 - m2) - (p22 - m22)) / (12.0 * h),
        ))
    };
    let hu = fd_step(u);
    let hv = fd_step(v);
    let (j11, j21) = column(hu, &|h| map(u + h, v))?;
    let (j12, j22) = column(hv, &|h| map(u, v + h))?;
    Ok(j11 * j22 - j12 * j21)
}

/// Step for second-order central differences, scaled to the coordinate.
pub(crate) fn fd_step(coord: f64) -> f64 {
    f64::EPSILON.cbrt() * coord.abs().max(1.0)
}
