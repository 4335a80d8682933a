//! The six time-dependent systems (three algebras, two charts): right-hand
//! sides assembled from the algebra realizations, an adaptive Runge-Kutta
//! oracle, and the closed-form exact solutions of the book and oscillator
//! systems.

mod exact;
mod integrator;

pub use exact::{
    constants_from_initial, exact_book, exact_book_epidemic_direct, exact_constant_book,
    exact_oscillator, exact_oscillator_epidemic_direct, exact_trajectory, nm_constants,
};
pub use integrator::{integrate, integrate_at};

use crate::algebra::{self, AlgebraId};
use crate::coeffs::{QuadratureConfig, TimeFunction};
use crate::error::{Error, Result};
use crate::transform::{ChartId, PhaseState};

/// The five coefficient slots, indexed by the global generator order:
/// `b1 X_1 + b2 X_2 + rho0 X_3 + b4 X_4 + b5 X_5`. The book system uses
/// `rho0` and `b2` (its `b`), the oscillator adds `b1`, the two-photon
/// system adds `b4` and `b5`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub rho0: TimeFunction,
    pub b1: TimeFunction,
    pub b2: TimeFunction,
    pub b4: TimeFunction,
    pub b5: TimeFunction,
}

impl CoefficientSet {
    pub fn get(&self, index: usize) -> &TimeFunction {
        match index {
            1 => &self.b1,
            2 => &self.b2,
            3 => &self.rho0,
            4 => &self.b4,
            5 => &self.b5,
            _ => panic!("coefficient index {index} out of range"),
        }
    }
}

/// A fully specified system: algebra, chart, coefficients, the lower limit
/// `a` of the running integrals, and the quadrature tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    algebra: AlgebraId,
    chart: ChartId,
    coeffs: CoefficientSet,
    a: f64,
    quad: QuadratureConfig,
}

impl SystemSpec {
    /// Coefficients not carried by the algebra must be identically zero.
    pub fn new(
        algebra: AlgebraId,
        chart: ChartId,
        coeffs: CoefficientSet,
        a: f64,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        let forbidden: &[(&'static str, &TimeFunction)] = match algebra {
            AlgebraId::B2 => &[("b1", &coeffs.b1), ("b4", &coeffs.b4), ("b5", &coeffs.b5)],
            AlgebraId::H4 => &[("b4", &coeffs.b4), ("b5", &coeffs.b5)],
            AlgebraId::H6 => &[],
        };
        for (name, f) in forbidden {
            if !f.is_zero() {
                return Err(Error::ForbiddenCoefficient {
                    algebra: algebra.name(),
                    name,
                });
            }
        }
        Ok(SystemSpec {
            algebra,
            chart,
            coeffs,
            a,
            quad,
        })
    }

    pub fn book(
        chart: ChartId,
        rho0: TimeFunction,
        b: TimeFunction,
        a: f64,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        SystemSpec::new(
            AlgebraId::B2,
            chart,
            CoefficientSet {
                rho0,
                b1: TimeFunction::zero(),
                b2: b,
                b4: TimeFunction::zero(),
                b5: TimeFunction::zero(),
            },
            a,
            quad,
        )
    }

    pub fn oscillator(
        chart: ChartId,
        rho0: TimeFunction,
        b1: TimeFunction,
        b2: TimeFunction,
        a: f64,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        SystemSpec::new(
            AlgebraId::H4,
            chart,
            CoefficientSet {
                rho0,
                b1,
                b2,
                b4: TimeFunction::zero(),
                b5: TimeFunction::zero(),
            },
            a,
            quad,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn two_photon(
        chart: ChartId,
        rho0: TimeFunction,
        b1: TimeFunction,
        b2: TimeFunction,
        b4: TimeFunction,
        b5: TimeFunction,
        a: f64,
        quad: QuadratureConfig,
    ) -> Result<Self> {
        SystemSpec::new(
            AlgebraId::H6,
            chart,
            CoefficientSet {
                rho0,
                b1,
                b2,
                b4,
                b5,
            },
            a,
            quad,
        )
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn lower_limit(&self) -> f64 {
        self.a
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    /// The same system expressed in the other chart.
    pub fn with_chart(&self, chart: ChartId) -> SystemSpec {
        let mut s = self.clone();
        s.chart = chart;
        s
    }

    /// Stable content hash used as trajectory metadata.
    pub fn hash(&self) -> u64 {
        let mut text = String::new();
        text.push_str(self.algebra.name());
        text.push('|');
        text.push_str(self.chart.name());
        for i in [1, 2, 3, 4, 5] {
            text.push('|');
            text.push_str(&self.coeffs.get(i).canonical_string());
        }
        text.push_str(&format!(
            "|a={:x}|q={:x}/{:x}/{}",
            self.a.to_bits(),
            self.quad.abs_tol().to_bits(),
            self.quad.rel_tol().to_bits(),
            self.quad.max_depth()
        ));
        fnv1a(text.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Time derivative of the state under the system's t-dependent vector field
/// `sum_i b_i(t) X_i`.
pub fn rhs(spec: &SystemSpec, t: f64, state: PhaseState) -> Result<(f64, f64)> {
    state.require_regular()?;
    let mut out = (0.0, 0.0);
    for &i in spec.algebra.generators() {
        let coeff = spec.coeffs.get(i);
        if coeff.is_zero() {
            continue;
        }
        let b = coeff.eval(t)?;
        let x = algebra::basis_vector_field(spec.algebra, i, state)?;
        out.0 += b * x.0;
        out.1 += b * x.1;
    }
    Ok(out)
}

/// Value of the t-dependent Hamiltonian `sum_i b_i(t) h_i` at the state.
pub fn hamiltonian(spec: &SystemSpec, t: f64, state: PhaseState) -> Result<f64> {
    state.require_regular()?;
    let mut h = 0.0;
    for &i in spec.algebra.generators() {
        let coeff = spec.coeffs.get(i);
        if coeff.is_zero() {
            continue;
        }
        h += coeff.eval(t)? * algebra::basis_hamiltonian(spec.algebra, i, state)?;
    }
    Ok(h)
}

/// Coefficients `(A, B, (log b4)')` of the second-order reduction of the
/// two-photon Cartesian system, `x'' - (log b4)' x' + A x = B`:
///
/// ```text
/// A = rho0 (log b4)' - rho0^2 - b4 b5 - rho0'
/// B = -b1 (log b4)' + rho0 b1 + b2 b4 + b1'
/// ```
///
/// Coefficient derivatives are taken by central finite differences.
pub fn h6_second_order_coeffs(spec: &SystemSpec, t: f64) -> Result<(f64, f64, f64)> {
    if spec.algebra != AlgebraId::H6 {
        return Err(Error::Unsupported(format!(
            "second-order reduction requires the two-photon algebra, got {}",
            spec.algebra.name()
        )));
    }
    let c = &spec.coeffs;
    let b4 = c.b4.eval(t)?;
    if b4.abs() < 1e-12 {
        return Err(Error::VanishingB4 { t });
    }
    let log_deriv = c.b4.derivative(t)? / b4;
    let rho0 = c.rho0.eval(t)?;
    let b1 = c.b1.eval(t)?;
    let big_a =
        rho0 * log_deriv - rho0 * rho0 - b4 * c.b5.eval(t)? - c.rho0.derivative(t)?;
    let big_b = -b1 * log_deriv + rho0 * b1 + c.b2.eval(t)? * b4 + c.b1.derivative(t)?;
    Ok((big_a, big_b, log_deriv))
}

/// Constants of integration of the closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConstants {
    pub c1: f64,
    pub c2: f64,
}

impl IntegrationConstants {
    pub fn new(c1: f64, c2: f64) -> Self {
        IntegrationConstants { c1, c2 }
    }
}

/// Time-ordered samples of a single solution, all in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<PhaseState>,
    spec_hash: u64,
    tol: f64,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<PhaseState>, spec_hash: u64, tol: f64) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::Unsupported(format!(
                "trajectory with {} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Unsupported(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if states.windows(2).any(|w| w[0].chart() != w[1].chart()) {
            return Err(Error::Unsupported(
                "trajectory states must share one chart".into(),
            ));
        }
        for (t, s) in times.iter().zip(&states) {
            if !s.is_regular() {
                let (c1, c2) = s.coords();
                return Err(Error::SingularState {
                    chart: s.chart().name(),
                    c1,
                    c2,
                    reason: if *t == 0.0 {
                        "singular sample in trajectory"
                    } else {
                        "singular sample in trajectory (see time)"
                    },
                });
            }
        }
        Ok(Trajectory {
            times,
            states,
            spec_hash,
            tol,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[PhaseState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn spec_hash(&self) -> u64 {
        self.spec_hash
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, PhaseState)> + '_ {
        self.times.iter().copied().zip(self.states.iter().copied())
    }
}

/// Uniform grid of `n >= 1` sample times on `[t0, t1]`.
pub fn sample_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    if n <= 1 || t0 == t1 {
        return vec![t0];
    }
    let step = (t1 - t0) / (n - 1) as f64;
    let mut times: Vec<f64> = (0..n).map(|i| t0 + step * i as f64).collect();
    times[n - 1] = t1;
    times
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn forbidden_coefficients_rejected_at_construction() {
        let c = CoefficientSet {
            rho0: TimeFunction::constant(1.0),
            b1: TimeFunction::constant(0.5),
            b2: TimeFunction::constant(1.0),
            b4: TimeFunction::zero(),
            b5: TimeFunction::zero(),
        };
        match SystemSpec::new(AlgebraId::B2, ChartId::Cartesian, c.clone(), 0.0, quad()) {
            Err(Error::ForbiddenCoefficient { algebra, name }) => {
                assert_eq!(algebra, "b2");
                assert_eq!(name, "b1");
            }
            other => panic!("expected forbidden coefficient, got {other:?}"),
        }
        assert!(SystemSpec::new(AlgebraId::H4, ChartId::Cartesian, c.clone(), 0.0, quad()).is_ok());
        let mut with_b4 = c;
        with_b4.b4 = TimeFunction::constant(2.0);
        assert!(SystemSpec::new(AlgebraId::H4, ChartId::Cartesian, with_b4, 0.0, quad()).is_err());
    }

    #[test]
    fn book_rhs_examples() {
        let spec = SystemSpec::book(
            ChartId::Cartesian,
            TimeFunction::constant(1.0),
            TimeFunction::constant(1.0),
            0.0,
            quad(),
        )
        .unwrap();
        // dx = rho0 x, dy = -rho0 y + b
        let d = rhs(&spec, 0.3, PhaseState::cartesian(3.0, 2.0)).unwrap();
        assert_eq!(d, (3.0, -1.0));
        let spec = spec.with_chart(ChartId::Epidemic);
        let d = rhs(&spec, 0.3, PhaseState::epidemic(2.0, 1.0)).unwrap();
        assert!((d.0 - -3.0).abs() < 1e-14 && (d.1 - 3.0).abs() < 1e-14);
        assert!(rhs(&spec, 0.0, PhaseState::epidemic(1.0, 1.0)).is_err());
    }

    #[test]
    fn circle_configuration_rhs() {
        let spec = SystemSpec::two_photon(
            ChartId::Cartesian,
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::constant(1.0),
            TimeFunction::constant(-1.0),
            0.0,
            quad(),
        )
        .unwrap();
        let d = rhs(&spec, 0.0, PhaseState::cartesian(1.0, 0.0)).unwrap();
        assert_eq!(d, (0.0, -1.0));
    }

    #[test]
    fn degeneration_chain_is_exact() {
        let rho0 = TimeFunction::parse("1+0.5*sin(t)").unwrap();
        let b1 = TimeFunction::parse("0.3*exp(-t)").unwrap();
        let b2 = TimeFunction::parse("cos(t)").unwrap();
        let h6 = SystemSpec::two_photon(
            ChartId::Epidemic,
            rho0.clone(),
            b1.clone(),
            b2.clone(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            0.0,
            quad(),
        )
        .unwrap();
        let h4 = SystemSpec::oscillator(ChartId::Epidemic, rho0.clone(), b1, b2.clone(), 0.0, quad())
            .unwrap();
        let h4_no_b1 = SystemSpec::oscillator(
            ChartId::Epidemic,
            rho0.clone(),
            TimeFunction::zero(),
            b2.clone(),
            0.0,
            quad(),
        )
        .unwrap();
        let b2_spec = SystemSpec::book(ChartId::Epidemic, rho0, b2, 0.0, quad()).unwrap();
        let s = PhaseState::epidemic(0.7, 1.9);
        for t in [0.0, 0.8, 2.3] {
            assert_eq!(rhs(&h6, t, s).unwrap(), rhs(&h4, t, s).unwrap());
            assert_eq!(rhs(&h4_no_b1, t, s).unwrap(), rhs(&b2_spec, t, s).unwrap());
        }
    }

    #[test]
    fn hamiltonian_chart_invariance_example() {
        let spec = SystemSpec::book(
            ChartId::Cartesian,
            TimeFunction::constant(1.0),
            TimeFunction::constant(1.0),
            0.0,
            quad(),
        )
        .unwrap();
        let h_cart = hamiltonian(&spec, 0.0, PhaseState::cartesian(1.0, 2.0)).unwrap();
        assert!((h_cart - 1.0).abs() < 1e-14);
        let h_epi = hamiltonian(
            &spec.with_chart(ChartId::Epidemic),
            0.0,
            PhaseState::epidemic(2.0 / 3.0, 3.0),
        )
        .unwrap();
        assert!((h_epi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_hamiltonian() {
        let spec = SystemSpec::two_photon(
            ChartId::Cartesian,
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            0.0,
            quad(),
        )
        .unwrap();
        assert_eq!(
            hamiltonian(&spec, 1.0, PhaseState::cartesian(4.0, -7.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn second_order_coefficients() {
        let circle = SystemSpec::two_photon(
            ChartId::Cartesian,
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::constant(1.0),
            TimeFunction::constant(-1.0),
            0.0,
            quad(),
        )
        .unwrap();
        let (a, b, l) = h6_second_order_coeffs(&circle, 0.7).unwrap();
        assert_eq!((a, b, l), (1.0, 0.0, 0.0));

        let c = 0.8;
        let dilation = SystemSpec::two_photon(
            ChartId::Cartesian,
            TimeFunction::constant(c),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::constant(1.0),
            TimeFunction::zero(),
            0.0,
            quad(),
        )
        .unwrap();
        let (a, b, _) = h6_second_order_coeffs(&dilation, 1.3).unwrap();
        assert!((a - -c * c).abs() < 1e-14);
        assert_eq!(b, 0.0);

        let no_b4 = SystemSpec::two_photon(
            ChartId::Cartesian,
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::zero(),
            TimeFunction::constant(-1.0),
            0.0,
            quad(),
        )
        .unwrap();
        assert!(matches!(
            h6_second_order_coeffs(&no_b4, 0.0),
            Err(Error::VanishingB4 { .. })
        ));
    }

    #[test]
    fn trajectory_invariants() {
        let s = PhaseState::cartesian(1.0, 2.0);
        assert!(Trajectory::new(vec![0.0, 1.0], vec![s, s], 0, 1e-10).is_ok());
        assert!(Trajectory::new(vec![0.0, 0.0], vec![s, s], 0, 1e-10).is_err());
        let singular = PhaseState::epidemic(1.0, 1.0);
        assert!(Trajectory::new(vec![0.0], vec![singular], 0, 1e-10).is_err());
    }

    #[test]
    fn core_types_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SystemSpec>();
        assert_send_sync::<Trajectory>();
        assert_send_sync::<TimeFunction>();
        assert_send_sync::<PhaseState>();
        assert_send_sync::<crate::coeffs::ThetaCache>();
    }

    #[test]
    fn spec_hash_distinguishes_content() {
        let mk = |rho: &str| {
            SystemSpec::book(
                ChartId::Cartesian,
                TimeFunction::parse(rho).unwrap(),
                TimeFunction::constant(1.0),
                0.0,
                quad(),
            )
            .unwrap()
        };
        assert_eq!(mk("1+t").hash(), mk("1+t").hash());
        assert_ne!(mk("1+t").hash(), mk("1-t").hash());
    }
}
