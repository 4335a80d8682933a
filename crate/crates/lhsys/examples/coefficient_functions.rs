//! Time-dependent coefficients: parsed expressions, tabulated samples, and
//! the running integrals behind the closed-form solutions.

use lhsys::coeffs::{theta, weighted_integral, Interpolation, QuadratureConfig};
use lhsys::{Sign, TimeFunction};

fn main() -> lhsys::Result<()> {
    let cfg = QuadratureConfig::default();

    // expressions parse, print and evaluate
    let rho0 = TimeFunction::parse("1 + 0.5*sin(t)")?;
    println!("rho0 = {rho0}, rho0(pi) = {}", rho0.eval(std::f64::consts::PI)?);

    // Theta(t) = ∫_0^t rho0, here t + 0.5 - 0.5 cos t
    let t = 2.0;
    let th = theta(&rho0, 0.0, t, &cfg)?;
    println!("Theta({t}) = {th:.12} (closed form {:.12})", t + 0.5 - 0.5 * t.cos());

    // the exponentially weighted integral feeding the exact solutions
    let b = TimeFunction::parse("cos(t)")?;
    let w = weighted_integral(&b, &rho0, Sign::Plus, 0.0, t, &cfg)?;
    println!("∫_0^{t} e^Theta cos(u) du = {w:.12}");

    // tabulated rates interpolate, and refuse extrapolation
    let measured = TimeFunction::table(
        vec![0.0, 1.0, 2.0, 3.0],
        vec![1.0, 1.4, 1.1, 0.9],
        Interpolation::Cubic,
    )?;
    println!("tabulated rate at t = 1.5: {:.6}", measured.eval(1.5)?);
    match measured.eval(4.0) {
        Err(e) => println!("outside the samples: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
