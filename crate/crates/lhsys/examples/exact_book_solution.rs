//! The book system integrates by quadrature for arbitrary time-dependent
//! coefficients. This example evaluates the closed form and pits it against
//! the adaptive Runge-Kutta integrator.

use lhsys::dynamics::{
    constants_from_initial, exact_trajectory, integrate, sample_times, SystemSpec,
};
use lhsys::{ChartId, PhaseState, QuadratureConfig, TimeFunction};

fn main() -> lhsys::Result<()> {
    let spec = SystemSpec::book(
        ChartId::Epidemic,
        TimeFunction::parse("1 + 0.5*sin(t)")?,
        TimeFunction::parse("cos(t)")?,
        0.0,
        QuadratureConfig::default(),
    )?;

    // pick constants from an initial state rather than guessing (c1, c2)
    let start = PhaseState::cartesian(1.0, -6.0).to_chart(ChartId::Epidemic)?;
    let constants = constants_from_initial(&spec, start, 0.0)?;
    println!("integration constants: c1 = {}, c2 = {}", constants.c1, constants.c2);

    let times = sample_times(0.0, 5.0, 51);
    let closed = exact_trajectory(&spec, constants, &times)?;
    let oracle = integrate(&spec, start, 0.0, 5.0, 1e-12, times.len())?;

    let mut worst = 0.0f64;
    for (c, o) in closed.states().iter().zip(oracle.states()) {
        let (cq, cp) = c.coords();
        let (oq, op) = o.coords();
        worst = worst.max((cq - oq).abs().max((cp - op).abs()));
    }
    println!("closed form vs integrator, max deviation over [0, 5]: {worst:.3e}");

    let (q, p) = closed.states().last().unwrap().coords();
    println!("state at t = 5: q = {q:.6}, p = {p:.6}");
    Ok(())
}
