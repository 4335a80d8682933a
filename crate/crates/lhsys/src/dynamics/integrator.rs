//! Adaptive embedded Runge-Kutta pair of orders 5(4) with PI step control
//! and fourth-order dense output. Serves as the independent oracle for all
//! closed-form solutions and superposition rules.

use crate::error::{Error, Result};
use crate::transform::PhaseState;

use super::{rhs, SystemSpec, Trajectory};

type Vec2 = [f64; 2];

// Butcher tableau of the Dormand-Prince 5(4) pair.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Weights of the quartic interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

/// Integrate `spec` from `state0` at `t0` to `t1`, returning `n` uniformly
/// spaced samples produced by dense output. `t1 == t0` yields the single
/// sample `state0`.
pub fn integrate(
    spec: &SystemSpec,
    state0: PhaseState,
    t0: f64,
    t1: f64,
    tol: f64,
    n: usize,
) -> Result<Trajectory> {
    if t1 < t0 {
        return Err(Error::InvalidTimeSpan { t0, t1 });
    }
    integrate_at(spec, state0, &super::sample_times(t0, t1, n.max(2)), tol)
}

/// Integrate `spec` from `state0` at `times[0]`, sampling the solution at
/// every requested time. Times must be strictly increasing.
pub fn integrate_at(
    spec: &SystemSpec,
    state0: PhaseState,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::Unsupported("no sample times requested".into()));
    }
    state0.require_regular()?;
    if state0.chart() != spec.chart() {
        let (c1, c2) = state0.coords();
        return Err(Error::SingularState {
            chart: state0.chart().name(),
            c1,
            c2,
            reason: "initial state chart does not match the system chart",
        });
    }
    let f = |t: f64, y: Vec2| -> Result<Vec2> {
        let d = rhs(spec, t, PhaseState::from_coords(spec.chart(), y[0], y[1]))?;
        Ok([d.0, d.1])
    };
    let y0: Vec2 = {
        let (a, b) = state0.coords();
        [a, b]
    };
    let samples = solve(&f, times, y0, tol)?;
    let states = samples
        .into_iter()
        .map(|y| PhaseState::from_coords(spec.chart(), y[0], y[1]))
        .collect();
    Trajectory::new(times.to_vec(), states, spec.hash(), tol)
}

/// Driver on raw 2-vectors; also used by the test suites to integrate
/// arbitrary planar fields.
pub(crate) fn solve<F>(f: &F, times: &[f64], y0: Vec2, tol: f64) -> Result<Vec<Vec2>>
where
    F: Fn(f64, Vec2) -> Result<Vec2>,
{
    if !times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Unsupported(
            "sample times must be strictly increasing".into(),
        ));
    }
    let (atol, rtol) = (tol, tol);
    let t0 = times[0];
    let t_end = *times.last().expect("nonempty");
    let mut out = Vec::with_capacity(times.len());
    out.push(y0);
    let mut next_sample = 1;
    if next_sample == times.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y)?;
    let mut h = initial_step(f, t, y, &k1, atol, rtol, t_end - t0)?;
    let mut fac_old: f64 = 1e-4;

    for _ in 0..MAX_STEPS {
        // a clamped final step may be arbitrarily short; only unforced
        // shrinkage counts as underflow
        let mut final_step = false;
        if t + h >= t_end {
            h = t_end - t;
            final_step = true;
        }
        if !final_step && h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        let mut stage_failed = false;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            match f(t + C[s] * h, ys) {
                Ok(v) => k[s] = v,
                Err(_) => {
                    stage_failed = true;
                    break;
                }
            }
        }
        if stage_failed {
            // trial point left the regular domain; retry with a shorter step
            h *= 0.25;
            continue;
        }
        // the 7th stage already evaluates f at the 5th-order solution (FSAL)
        let y_new = {
            let mut v = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                v[0] += h * A[6][j] * kj[0];
                v[1] += h * A[6][j] * kj[1];
            }
            v
        };

        let mut err = 0.0;
        for i in 0..2 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            // accept: emit dense output for samples inside (t, t_new]
            let t_new = if final_step { t_end } else { t + h };
            let k7 = f(t_new, y_new)?;
            let rcont = dense_coefficients(&k, k7, y, y_new, h);
            while next_sample < times.len() && times[next_sample] <= t_new {
                let ts = times[next_sample];
                let theta = ((ts - t) / h).clamp(0.0, 1.0);
                out.push(if ts == t_new {
                    y_new
                } else {
                    dense_eval(&rcont, theta)
                });
                next_sample += 1;
            }
            if next_sample == times.len() {
                return Ok(out);
            }

            let fac11 = err.max(1e-10).powf(EXPO1);
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            fac_old = err.max(1e-4);
            t = t_new;
            y = y_new;
            k1 = k7;
            h /= fac;
        } else {
            let fac11 = err.powf(EXPO1);
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    Err(Error::Unsupported(format!(
        "integration exceeded {MAX_STEPS} steps at t = {t}"
    )))
}

fn dense_coefficients(k: &[Vec2; 7], k7: Vec2, y: Vec2, y_new: Vec2, h: f64) -> [Vec2; 5] {
    let mut rcont = [[0.0; 2]; 5];
    for i in 0..2 {
        let dy = y_new[i] - y[i];
        let bspl = h * k[0][i] - dy;
        rcont[0][i] = y[i];
        rcont[1][i] = dy;
        rcont[2][i] = bspl;
        rcont[3][i] = dy - h * k7[i] - bspl;
        rcont[4][i] = h
            * (D[0] * k[0][i]
                + D[2] * k[2][i]
                + D[3] * k[3][i]
                + D[4] * k[4][i]
                + D[5] * k[5][i]
                + D[6] * k7[i]);
    }
    rcont
}

fn dense_eval(rcont: &[Vec2; 5], theta: f64) -> Vec2 {
    let s1 = 1.0 - theta;
    let mut out = [0.0; 2];
    for i in 0..2 {
        out[i] = rcont[0][i]
            + theta
                * (rcont[1][i] + s1 * (rcont[2][i] + theta * (rcont[3][i] + s1 * rcont[4][i])));
    }
    out
}

fn initial_step<F>(f: &F, t0: f64, y0: Vec2, f0: &Vec2, atol: f64, rtol: f64, span: f64) -> Result<f64>
where
    F: Fn(f64, Vec2) -> Result<Vec2>,
{
    let sc = |i: usize| atol + rtol * y0[i].abs();
    let d0 = ((y0[0] / sc(0)).powi(2) + (y0[1] / sc(1)).powi(2)).sqrt();
    let d1 = ((f0[0] / sc(0)).powi(2) + (f0[1] / sc(1)).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span.abs().max(1e-12));
    let y1 = [y0[0] + h0 * f0[0], y0[1] + h0 * f0[1]];
    let f1 = match f(t0 + h0, y1) {
        Ok(v) => v,
        Err(_) => return Ok((h0 * 1e-2).max(1e-10)),
    };
    let d2 = (((f1[0] - f0[0]) / sc(0)).powi(2) + ((f1[1] - f0[1]) / sc(1)).powi(2)).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span.abs().max(1e-12)))
}
