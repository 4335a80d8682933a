//! The canonical transformation between the Cartesian chart (x, y) and the
//! epidemic chart (q, p) = (<rho>, 1/sigma): round trips, the unit Jacobian
//! determinant, and the epidemic observables.

use lhsys::transform::{cart_to_epi, epi_to_cart, jacobian_det, observables};
use lhsys::PhaseState;

fn main() -> lhsys::Result<()> {
    let (q, p) = (0.66667, 3.0);
    let (x, y) = epi_to_cart(q, p)?;
    println!("(q, p) = ({q}, {p})  ->  (x, y) = ({x:.9}, {y:.9})");

    let (q2, p2) = cart_to_epi(x, y)?;
    println!("round trip error: ({:.3e}, {:.3e})", (q2 - q).abs(), (p2 - p).abs());

    let det_fwd = jacobian_det(PhaseState::epidemic(q, p))?;
    let det_bwd = jacobian_det(PhaseState::cartesian(x, y))?;
    println!("Jacobian determinant: forward {det_fwd:.12}, backward {det_bwd:.12}");

    let obs = observables(q, p)?;
    println!(
        "observables: mean density {} with variance {:.6e}",
        obs.mean_density, obs.variance
    );

    // the transformation has genuine poles
    match epi_to_cart(1.0, 1.0) {
        Err(e) => println!("pole rejected as expected: {e}"),
        Ok(_) => unreachable!("q^2 p^2 = 1 is singular"),
    }
    Ok(())
}
