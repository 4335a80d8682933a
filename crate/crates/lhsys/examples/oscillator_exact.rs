//! Exact solution of the oscillator (h4) system and its degeneration to the
//! book system when the extra coefficient vanishes.

use lhsys::dynamics::{exact_book, exact_oscillator, integrate, IntegrationConstants, SystemSpec};
use lhsys::{ChartId, QuadratureConfig, TimeFunction};

fn main() -> lhsys::Result<()> {
    let rho0 = TimeFunction::parse("1 + 0.5*sin(t)")?;
    let spec = SystemSpec::oscillator(
        ChartId::Cartesian,
        rho0.clone(),
        TimeFunction::parse("0.3*exp(-t)")?,
        TimeFunction::constant(1.0),
        0.0,
        QuadratureConfig::default(),
    )?;
    let c = IntegrationConstants::new(1.0, 2.0);

    // closed form against the integrator
    let s0 = exact_oscillator(&spec, c, 0.0)?;
    let traj = integrate(&spec, s0, 0.0, 5.0, 1e-12, 26)?;
    let mut worst = 0.0f64;
    for (t, s) in traj.iter() {
        let e = exact_oscillator(&spec, c, t)?;
        let d = (s.coords().0 - e.coords().0)
            .abs()
            .max((s.coords().1 - e.coords().1).abs());
        worst = worst.max(d);
    }
    println!("oscillator closed form vs integrator: max deviation {worst:.3e}");

    // with b1 = 0 the oscillator solution is the book solution, bit for bit
    let osc0 = SystemSpec::oscillator(
        ChartId::Cartesian,
        rho0.clone(),
        TimeFunction::zero(),
        TimeFunction::parse("cos(t)")?,
        0.0,
        QuadratureConfig::default(),
    )?;
    let book = SystemSpec::book(
        ChartId::Cartesian,
        rho0,
        TimeFunction::parse("cos(t)")?,
        0.0,
        QuadratureConfig::default(),
    )?;
    let mut max_gap = 0.0f64;
    for i in 0..=20 {
        let t = 0.25 * i as f64;
        let a = exact_oscillator(&osc0, c, t)?.coords();
        let b = exact_book(&book, c, t)?.coords();
        max_gap = max_gap.max((a.0 - b.0).abs().max((a.1 - b.1).abs()));
    }
    println!("b1 = 0 degeneration gap vs book closed form: {max_gap:.3e}");
    Ok(())
}
