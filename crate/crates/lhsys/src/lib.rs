//! Time-dependent planar Lie-Hamilton systems on the chain of algebras
//! b2 ⊂ h4 ⊂ h6, generalizing SIS-type epidemic dynamics with fluctuations.
//!
//! The library provides:
//!
//! - time-dependent coefficients with parsed expressions, tables and
//!   adaptive quadrature ([`coeffs`]);
//! - the three algebras with their vector-field and Hamiltonian
//!   realizations in the Cartesian chart `(x, y)` and the epidemic chart
//!   `(q, p) = (<rho>, 1/sigma)` ([`algebra`]);
//! - the canonical transformation between the two charts ([`transform`]);
//! - right-hand sides, an adaptive Runge-Kutta oracle, and the closed-form
//!   exact solutions of the book and oscillator systems ([`dynamics`]);
//! - Casimir-derived constants of motion and the nonlinear superposition
//!   rules for h4 and h6 ([`superposition`]);
//! - config-driven runs, CSV/JSON serialization and a verification suite
//!   ([`config`], [`cli`], [`verify`]).
//!
//! See the crate examples for runnable walkthroughs of each capability.

pub mod algebra;
pub mod cli;
pub mod coeffs;
pub mod config;
pub mod dynamics;
mod error;
pub mod report;
pub mod superposition;
pub mod transform;
pub mod verify;

pub use algebra::AlgebraId;
pub use coeffs::{QuadratureConfig, Sign, TimeFunction};
pub use error::{Error, Result};
pub use transform::{ChartId, EpidemicObservables, PhaseState};
