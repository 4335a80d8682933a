//! The Casimir-derived constants of motion are t-independent along the flow
//! of simultaneously evolving copies. This example tracks their drift.

use lhsys::dynamics::{integrate, sample_times, SystemSpec};
use lhsys::superposition::{motion_constant, signed_k_h6, ProlongedState};
use lhsys::{AlgebraId, ChartId, PhaseState, QuadratureConfig, TimeFunction};

fn main() -> lhsys::Result<()> {
    let spec = SystemSpec::two_photon(
        ChartId::Cartesian,
        TimeFunction::parse("0.1*cos(t)")?,
        TimeFunction::parse("0.2*exp(-0.5*t)")?,
        TimeFunction::parse("0.3*sin(t)")?,
        TimeFunction::parse("1 + 0.1*sin(t)")?,
        TimeFunction::parse("-1 + 0.1*cos(t)")?,
        0.0,
        QuadratureConfig::default(),
    )?;

    let times = sample_times(0.0, 5.0, 26);
    let ics = [(1.0, 0.5), (0.2, -0.9), (-0.8, 0.3), (0.6, 1.2)];
    let trajs: Vec<_> = ics
        .iter()
        .map(|&(x, y)| integrate(&spec, PhaseState::cartesian(x, y), 0.0, 5.0, 1e-11, times.len()))
        .collect::<lhsys::Result<_>>()?;

    let snapshot = |i: usize| -> lhsys::Result<ProlongedState> {
        ProlongedState::from_states(&trajs.iter().map(|t| t.states()[i]).collect::<Vec<_>>())
    };

    // the squared invariants and the signed triple product they stem from
    let f3_0 = motion_constant(AlgebraId::H6, 3, &snapshot(0)?)?;
    let f4_0 = motion_constant(AlgebraId::H6, 4, &snapshot(0)?)?;
    let k123_0 = {
        let s = snapshot(0)?;
        let c = s.copies();
        signed_k_h6(&ProlongedState::new(s.chart(), vec![c[0], c[1], c[2]])?)?
    };
    println!("initial values: F3 = {f3_0:.9}, F4 = {f4_0:.9}, signed k123 = {k123_0:.9}");

    let mut drift3 = 0.0f64;
    let mut drift4 = 0.0f64;
    for i in 1..times.len() {
        let s = snapshot(i)?;
        drift3 = drift3.max((motion_constant(AlgebraId::H6, 3, &s)? - f3_0).abs());
        drift4 = drift4.max((motion_constant(AlgebraId::H6, 4, &s)? - f4_0).abs());
    }
    println!("max drift over [0, 5]: F3 {drift3:.3e}, F4 {drift4:.3e}");
    Ok(())
}
