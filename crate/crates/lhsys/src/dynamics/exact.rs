//! Closed-form solutions of the book and oscillator systems.
//!
//! In the Cartesian chart both systems are linear and integrate by
//! quadrature, with `Theta(t) = ∫_a^t rho0`:
//!
//! ```text
//! book:        x = c1 e^Theta                          y = (c2 + ∫_a^t e^{Theta} b)  e^{-Theta}
//! oscillator:  x = (c1 + ∫_a^t e^{-Theta} b1) e^Theta  y = (c2 + ∫_a^t e^{Theta} b2) e^{-Theta}
//! ```
//!
//! Epidemic-chart values are produced by mapping the Cartesian value through
//! the canonical transformation. The direct rational expressions of the
//! epidemic solution are kept as an independent cross-check path.

use crate::algebra::AlgebraId;
use crate::coeffs::{theta, weighted_integral, QuadratureConfig, Sign, ThetaCache, TimeFunction};
use crate::error::{Error, Result};
use crate::transform::{cart_to_epi, ChartId, PhaseState, SINGULARITY_GUARD};

use super::{IntegrationConstants, SystemSpec, Trajectory};

/// Exact solution of the book system at time `t`, in the spec's chart.
pub fn exact_book(spec: &SystemSpec, c: IntegrationConstants, t: f64) -> Result<PhaseState> {
    require_algebra(spec, AlgebraId::B2)?;
    let (th, w2) = book_integrals(spec, t)?;
    state_from_cartesian(spec.chart(), t, c.c1 * th.exp(), (c.c2 + w2) * (-th).exp())
}

/// Exact solution of the oscillator system at time `t`, in the spec's chart.
pub fn exact_oscillator(spec: &SystemSpec, c: IntegrationConstants, t: f64) -> Result<PhaseState> {
    require_algebra(spec, AlgebraId::H4)?;
    let (th, w1, w2) = oscillator_integrals(spec, t)?;
    state_from_cartesian(
        spec.chart(),
        t,
        (c.c1 + w1) * th.exp(),
        (c.c2 + w2) * (-th).exp(),
    )
}

/// Book solution in the epidemic chart through the direct rational
/// expressions, bypassing the chart-change functions. Cross-check path.
pub fn exact_book_epidemic_direct(
    spec: &SystemSpec,
    c: IntegrationConstants,
    t: f64,
) -> Result<(f64, f64)> {
    require_algebra(spec, AlgebraId::B2)?;
    if c.c1.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "cartesian",
            c1: c.c1,
            c2: c.c2,
            reason: "c1 = 0 collapses the solution onto the pole x = 0",
        });
    }
    let (th, w2) = book_integrals(spec, t)?;
    let y = c.c2 + w2;
    let q = y * th.exp() / (y * y - 1.0 / (c.c1 * c.c1));
    let p = (c.c1 * y * y - 1.0 / c.c1) * (-th).exp();
    finite_pair(q, p)
}

/// Oscillator solution in the epidemic chart through the direct rational
/// expressions. Cross-check path.
pub fn exact_oscillator_epidemic_direct(
    spec: &SystemSpec,
    c: IntegrationConstants,
    t: f64,
) -> Result<(f64, f64)> {
    require_algebra(spec, AlgebraId::H4)?;
    let (th, w1, w2) = oscillator_integrals(spec, t)?;
    let u = c.c1 + w1;
    let v = c.c2 + w2;
    let uv2 = u * u * v * v;
    let q = u * u * v * th.exp() / (uv2 - 1.0);
    let p = (uv2 - 1.0) * (-th).exp() / u;
    finite_pair(q, p)
}

/// Constant-rate book solution with `a = 0` and `b ≡ 1`:
///
/// ```text
/// q = rho0 (E + c2 rho0 - 1) E / ((E + c2 rho0 - 1)^2 - rho0^2/c1^2)
/// p = (c1 (E + c2 rho0 - 1)^2 / rho0^2 - 1/c1) e^{-rho0 t},  E = e^{rho0 t}
/// ```
pub fn exact_constant_book(rho0: f64, c: IntegrationConstants, t: f64) -> Result<(f64, f64)> {
    if rho0 == 0.0 {
        return Err(Error::ZeroRate);
    }
    if c.c1.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "cartesian",
            c1: c.c1,
            c2: c.c2,
            reason: "c1 = 0 collapses the solution onto the pole x = 0",
        });
    }
    let e = (rho0 * t).exp();
    let g = e + c.c2 * rho0 - 1.0;
    let q = rho0 * g * e / (g * g - rho0 * rho0 / (c.c1 * c.c1));
    let p = (c.c1 * g * g / (rho0 * rho0) - 1.0 / c.c1) * (-rho0 * t).exp();
    finite_pair(q, p)
}

/// Map the constants `(tc1, tc2)` of the classical constant-rate solution to
/// the integration constants of [`exact_constant_book`]:
/// `c1 = rho0 / sqrt(tc1^2 - tc2)`, `c2 = (tc1 + 1) / rho0`.
pub fn nm_constants(rho0: f64, tc1: f64, tc2: f64) -> Result<IntegrationConstants> {
    if rho0 == 0.0 {
        return Err(Error::ZeroRate);
    }
    let radicand = tc1 * tc1 - tc2;
    if radicand <= 0.0 {
        return Err(Error::NonpositiveRadicand { tc1, tc2 });
    }
    Ok(IntegrationConstants {
        c1: rho0 / radicand.sqrt(),
        c2: (tc1 + 1.0) / rho0,
    })
}

/// Invert the closed forms at `(t0, state0)`: `c1 = x0 e^{-Theta(t0)} - W1`,
/// `c2 = y0 e^{Theta(t0)} - W2`, with the oscillator's `W1 = ∫ e^{-Theta} b1`
/// vanishing in the book case.
pub fn constants_from_initial(
    spec: &SystemSpec,
    state0: PhaseState,
    t0: f64,
) -> Result<IntegrationConstants> {
    if spec.algebra() == AlgebraId::H6 {
        return Err(Error::Unsupported(
            "no closed-form constants for the two-photon system".into(),
        ));
    }
    let (x0, y0) = state0.to_chart(ChartId::Cartesian)?.coords();
    let c = spec.coefficients();
    let th = theta(&c.rho0, spec.lower_limit(), t0, spec.quadrature())?;
    let w1 = weighted_integral(
        &c.b1,
        &c.rho0,
        Sign::Minus,
        spec.lower_limit(),
        t0,
        spec.quadrature(),
    )?;
    let w2 = weighted_integral(
        &c.b2,
        &c.rho0,
        Sign::Plus,
        spec.lower_limit(),
        t0,
        spec.quadrature(),
    )?;
    Ok(IntegrationConstants {
        c1: x0 * (-th).exp() - w1,
        c2: y0 * th.exp() - w2,
    })
}

/// Closed-form trajectory sampled at strictly increasing `times`.
///
/// The running integrals accumulate across samples (one short quadrature per
/// panel instead of one integral from `a` per sample), which keeps dense
/// sweeps cheap.
pub fn exact_trajectory(
    spec: &SystemSpec,
    c: IntegrationConstants,
    times: &[f64],
) -> Result<Trajectory> {
    let algebra = spec.algebra();
    if algebra == AlgebraId::H6 {
        return Err(Error::Unsupported(
            "no closed-form solution for the two-photon system; use the integrator".into(),
        ));
    }
    if !times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Unsupported(
            "sample times must be strictly increasing".into(),
        ));
    }
    let cf = spec.coefficients();
    let quad = spec.quadrature();
    let a = spec.lower_limit();
    let cache = ThetaCache::new(cf.rho0.clone(), a, *quad);

    let mut states = Vec::with_capacity(times.len());
    let mut prev_t = a;
    let mut w1 = 0.0;
    let mut w2 = 0.0;
    for &t in times {
        w1 += piece_weighted(&cf.b1, &cache, Sign::Minus, prev_t, t, quad)?;
        w2 += piece_weighted(&cf.b2, &cache, Sign::Plus, prev_t, t, quad)?;
        let th = cache.value(t)?;
        let state = state_from_cartesian(
            spec.chart(),
            t,
            (c.c1 + w1) * th.exp(),
            (c.c2 + w2) * (-th).exp(),
        )?;
        states.push(state);
        prev_t = t;
    }
    Trajectory::new(
        times.to_vec(),
        states,
        spec.hash(),
        quad.abs_tol(),
    )
}

fn piece_weighted(
    f: &TimeFunction,
    cache: &ThetaCache,
    sign: Sign,
    from: f64,
    to: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if f.is_zero() || from == to {
        return Ok(0.0);
    }
    let s = sign.factor();
    let integrand = |u: f64| Ok((s * cache.value(u)?).exp() * f.eval(u)?);
    crate::coeffs::quad_integrate(&integrand, from, to, quad)
}

fn book_integrals(spec: &SystemSpec, t: f64) -> Result<(f64, f64)> {
    let c = spec.coefficients();
    let th = theta(&c.rho0, spec.lower_limit(), t, spec.quadrature())?;
    let w2 = weighted_integral(
        &c.b2,
        &c.rho0,
        Sign::Plus,
        spec.lower_limit(),
        t,
        spec.quadrature(),
    )?;
    Ok((th, w2))
}

fn oscillator_integrals(spec: &SystemSpec, t: f64) -> Result<(f64, f64, f64)> {
    let c = spec.coefficients();
    let th = theta(&c.rho0, spec.lower_limit(), t, spec.quadrature())?;
    let w1 = weighted_integral(
        &c.b1,
        &c.rho0,
        Sign::Minus,
        spec.lower_limit(),
        t,
        spec.quadrature(),
    )?;
    let w2 = weighted_integral(
        &c.b2,
        &c.rho0,
        Sign::Plus,
        spec.lower_limit(),
        t,
        spec.quadrature(),
    )?;
    Ok((th, w1, w2))
}

fn state_from_cartesian(chart: ChartId, t: f64, x: f64, y: f64) -> Result<PhaseState> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::NonFiniteValue { t });
    }
    match chart {
        ChartId::Cartesian => Ok(PhaseState::cartesian(x, y)),
        ChartId::Epidemic => {
            let (q, p) = cart_to_epi(x, y)?;
            Ok(PhaseState::epidemic(q, p))
        }
    }
}

fn finite_pair(q: f64, p: f64) -> Result<(f64, f64)> {
    let s = PhaseState::epidemic(q, p);
    s.require_regular()?;
    Ok((q, p))
}

fn require_algebra(spec: &SystemSpec, want: AlgebraId) -> Result<()> {
    if spec.algebra() != want {
        return Err(Error::Unsupported(format!(
            "this closed form applies to {}, got {}",
            want.name(),
            spec.algebra().name()
        )));
    }
    Ok(())
}
