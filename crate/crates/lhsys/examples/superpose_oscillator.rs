//! Reconstruct a withheld oscillator solution from two particular solutions
//! and two constants of motion: the nonlinear superposition rule at work.

use lhsys::dynamics::{integrate, SystemSpec};
use lhsys::superposition::{extract_constants, resolve_branch_h4, superpose_h4};
use lhsys::{AlgebraId, ChartId, PhaseState, QuadratureConfig, TimeFunction};

fn main() -> lhsys::Result<()> {
    let spec = SystemSpec::oscillator(
        ChartId::Cartesian,
        TimeFunction::parse("0.2*sin(t)")?,
        TimeFunction::parse("0.3*cos(t)")?,
        TimeFunction::constant(0.4),
        0.0,
        QuadratureConfig::default(),
    )?;

    let n = 41;
    let general = integrate(&spec, PhaseState::cartesian(1.1, -0.4), 0.0, 4.0, 1e-11, n)?;
    let p2 = integrate(&spec, PhaseState::cartesian(0.3, 0.8), 0.0, 4.0, 1e-11, n)?;
    let p3 = integrate(&spec, PhaseState::cartesian(-0.7, -1.2), 0.0, 4.0, 1e-11, n)?;

    // measure (k1, k) once, at the initial time, and resolve the branch sign
    let g0 = general.states()[0].coords();
    let constants = extract_constants(
        AlgebraId::H4,
        g0,
        &[p2.states()[0].coords(), p3.states()[0].coords()],
        ChartId::Cartesian,
    )?;
    let branch = resolve_branch_h4(
        g0,
        p2.states()[0].coords(),
        p3.states()[0].coords(),
        constants.k1,
        constants.k,
        ChartId::Cartesian,
    )?;
    println!(
        "constants: k1 = {:.6}, k = {:.6}, discriminant root B = {:.6}, branch {:?}",
        constants.k1, constants.k, constants.b, branch
    );

    let mut worst = 0.0f64;
    for i in 0..n {
        let rec = superpose_h4(
            p2.states()[i].coords(),
            p3.states()[i].coords(),
            constants.k1,
            constants.k,
            branch,
            ChartId::Cartesian,
        )?;
        let truth = general.states()[i].coords();
        worst = worst.max((rec.0 - truth.0).abs().max((rec.1 - truth.1).abs()));
    }
    println!("withheld solution reconstructed at {n} samples, max error {worst:.3e}");
    Ok(())
}
