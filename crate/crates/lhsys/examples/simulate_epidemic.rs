//! Integrate the variable-infection-rate book system in epidemic
//! coordinates and print the mean density and variance over time.

use lhsys::dynamics::{integrate, SystemSpec};
use lhsys::transform::observables;
use lhsys::{ChartId, PhaseState, QuadratureConfig, TimeFunction};

fn main() -> lhsys::Result<()> {
    // seasonal infection rate around the constant-rate baseline
    let spec = SystemSpec::book(
        ChartId::Epidemic,
        TimeFunction::parse("1 + 0.5*sin(t)")?,
        TimeFunction::constant(1.0),
        0.0,
        QuadratureConfig::default(),
    )?;

    let start = PhaseState::epidemic(0.66667, 3.0);
    let traj = integrate(&spec, start, 0.0, 10.0, 1e-10, 101)?;

    println!("{:>6} {:>12} {:>12}", "t", "mean_rho", "variance");
    for (t, state) in traj.iter() {
        let (q, p) = state.coords();
        let obs = observables(q, p)?;
        println!("{t:>6.2} {:>12.6} {:>12.3e}", obs.mean_density, obs.variance);
    }
    Ok(())
}
