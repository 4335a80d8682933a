//! Tabulated coefficients with linear or natural-cubic-spline interpolation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    Cubic,
}

impl Interpolation {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Interpolation::Linear),
            3 => Ok(Interpolation::Cubic),
            other => Err(Error::InvalidTable(format!(
                "interpolation order must be 1 (linear) or 3 (cubic), got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    times: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
    /// Second derivatives at the nodes; empty for linear interpolation.
    second_derivatives: Vec<f64>,
}

impl Table {
    pub fn new(times: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidTable(format!(
                "{} sample times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidTable("need at least two samples".into()));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidTable(
                "sample times must be strictly increasing".into(),
            ));
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("samples must be finite".into()));
        }
        let second_derivatives = match interpolation {
            Interpolation::Linear => Vec::new(),
            Interpolation::Cubic => natural_spline_second_derivatives(&times, &values),
        };
        Ok(Table {
            times,
            values,
            interpolation,
            second_derivatives,
        })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().expect("nonempty"))
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.span();
        if !(lo..=hi).contains(&t) {
            return Err(Error::OutOfSpan { t, lo, hi });
        }
        // segment index such that times[i] <= t <= times[i+1]
        let i = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.times.len() - 2),
            Err(i) => i - 1,
        };
        let h = self.times[i + 1] - self.times[i];
        let a = (self.times[i + 1] - t) / h;
        let b = 1.0 - a;
        match self.interpolation {
            Interpolation::Linear => Ok(a * self.values[i] + b * self.values[i + 1]),
            Interpolation::Cubic => {
                let (d2i, d2j) = (self.second_derivatives[i], self.second_derivatives[i + 1]);
                Ok(a * self.values[i]
                    + b * self.values[i + 1]
                    + ((a * a * a - a) * d2i + (b * b * b - b) * d2j) * h * h / 6.0)
            }
        }
    }
}

/// Tridiagonal solve for natural spline conditions (zero curvature at the ends).
fn natural_spline_second_derivatives(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut d2 = vec![0.0; n];
    if n == 2 {
        return d2;
    }
    let mut u = vec![0.0; n - 1];
    for i in 1..n - 1 {
        let sig = (times[i] - times[i - 1]) / (times[i + 1] - times[i - 1]);
        let p = sig * d2[i - 1] + 2.0;
        d2[i] = (sig - 1.0) / p;
        let slope_r = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
        let slope_l = (values[i] - values[i - 1]) / (times[i] - times[i - 1]);
        u[i] = (6.0 * (slope_r - slope_l) / (times[i + 1] - times[i - 1]) - sig * u[i - 1]) / p;
    }
    for i in (0..n - 1).rev() {
        d2[i] = d2[i] * d2[i + 1] + u[i];
    }
    d2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_midpoint() {
        let t = Table::new(vec![0.0, 1.0], vec![0.0, 2.0], Interpolation::Linear).unwrap();
        assert_eq!(t.eval(0.5).unwrap(), 1.0);
        assert_eq!(t.eval(0.0).unwrap(), 0.0);
        assert_eq!(t.eval(1.0).unwrap(), 2.0);
    }

    #[test]
    fn out_of_span_is_error() {
        let t = Table::new(vec![0.0, 1.0], vec![0.0, 2.0], Interpolation::Linear).unwrap();
        assert!(matches!(t.eval(1.5), Err(Error::OutOfSpan { .. })));
        assert!(matches!(t.eval(-0.1), Err(Error::OutOfSpan { .. })));
    }

    #[test]
    fn rejects_non_increasing_times() {
        assert!(Table::new(vec![0.0, 0.0, 1.0], vec![1.0; 3], Interpolation::Linear).is_err());
        assert!(Table::new(vec![1.0, 0.0], vec![1.0; 2], Interpolation::Linear).is_err());
        assert!(Table::new(vec![0.0], vec![1.0], Interpolation::Linear).is_err());
    }

    #[test]
    fn cubic_reproduces_nodes_exactly() {
        let times: Vec<f64> = (0..7).map(|i| 0.3 * i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| (2.0 * t).sin() + 0.5 * t).collect();
        let tab = Table::new(times.clone(), values.clone(), Interpolation::Cubic).unwrap();
        for (t, v) in times.iter().zip(&values) {
            assert_eq!(tab.eval(*t).unwrap(), *v);
        }
    }

    #[test]
    fn cubic_tracks_smooth_function_between_nodes() {
        let times: Vec<f64> = (0..41).map(|i| 0.1 * i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| t.sin()).collect();
        let tab = Table::new(times, values, Interpolation::Cubic).unwrap();
        // interior samples: the natural end conditions perturb only the
        // outermost segments
        for i in 0..300 {
            let t = 0.505 + 0.01 * i as f64;
            assert!((tab.eval(t).unwrap() - t.sin()).abs() < 2e-5);
        }
    }
}
