//! The constant-rate special case: the reduced closed form, the mapping of
//! the classical integration constants, and the long-time equilibrium
//! q -> rho0, sigma^2 -> 0.

use lhsys::dynamics::{exact_constant_book, nm_constants};
use lhsys::transform::observables;

fn main() -> lhsys::Result<()> {
    let rho0 = 1.0;
    let c = nm_constants(rho0, 1.0, 0.0)?;
    println!("classical constants (tc1, tc2) = (1, 0) map to (c1, c2) = ({}, {})", c.c1, c.c2);

    println!("{:>5} {:>12} {:>12} {:>12}", "t", "q", "p", "variance");
    for i in 0..=10 {
        let t = 0.8 * i as f64;
        let (q, p) = exact_constant_book(rho0, c, t)?;
        let obs = observables(q, p)?;
        println!("{t:>5.1} {q:>12.8} {p:>12.4} {:>12.3e}", obs.variance);
    }
    println!("the mean density approaches rho0 = {rho0} as the fluctuations die out");
    Ok(())
}
