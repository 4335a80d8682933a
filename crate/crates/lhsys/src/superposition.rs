//! Constants of motion on diagonal prolongations and the nonlinear
//! superposition rules.
//!
//! The Casimir invariant of each algebra, composed with the prolonged
//! Hamiltonians `h_i^{(k)} = sum_s h_i(x_s, y_s)`, yields t-independent
//! constants of motion for any number of simultaneously evolving copies.
//! For the oscillator algebra these are the pair products
//!
//! ```text
//! F^(2) = (x1 - x2)(y1 - y2),   F^(3) = sum over pairs of copies 1..3,
//! ```
//!
//! and for the two-photon algebra the squared triple products
//!
//! ```text
//! F^(3) = (x1 (y2 - y3) + x2 (y3 - y1) + x3 (y1 - y2))^2,
//! F^(4) = sum of the four index-choice squares on copies 1..4.
//! ```
//!
//! Solving the constants for copy 1 gives the superposition rules: two
//! particular solutions and `(k1, k)` reconstruct the oscillator general
//! solution up to a branch sign, three particular solutions and the signed
//! `(k1, k2)` reconstruct the two-photon general solution linearly.
//!
//! Signed convention: the two-photon constants `k1`, `k2` are stored as the
//! linear triple products themselves rather than as their squares, evaluated
//! with copy 1 the general solution. The coincidence cases then land exactly
//! on `(0, 0)`, `(0, -k4)` and `(k4, 0)`.

use crate::algebra::{self, AlgebraId, GeneratorValues};
use crate::error::{Error, Result};
use crate::transform::{cart_to_epi, epi_to_cart, ChartId, PhaseState, SINGULARITY_GUARD};

/// Simultaneous copies of the phase space sharing one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlongedState {
    chart: ChartId,
    copies: Vec<(f64, f64)>,
}

impl ProlongedState {
    pub fn new(chart: ChartId, copies: Vec<(f64, f64)>) -> Result<Self> {
        if !(2..=4).contains(&copies.len()) {
            return Err(Error::CopyCountMismatch {
                expected: "2 to 4".into(),
                got: copies.len(),
            });
        }
        for &(a, b) in &copies {
            PhaseState::from_coords(chart, a, b).require_regular()?;
        }
        Ok(ProlongedState { chart, copies })
    }

    pub fn from_states(states: &[PhaseState]) -> Result<Self> {
        let chart = states
            .first()
            .ok_or(Error::CopyCountMismatch {
                expected: "2 to 4".into(),
                got: 0,
            })?
            .chart();
        let mut copies = Vec::with_capacity(states.len());
        for s in states {
            if s.chart() != chart {
                return Err(Error::Unsupported(
                    "prolonged copies must share a chart".into(),
                ));
            }
            copies.push(s.coords());
        }
        ProlongedState::new(chart, copies)
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn copies(&self) -> &[(f64, f64)] {
        &self.copies
    }

    /// Copies expressed in the Cartesian chart, where the invariants are
    /// polynomial.
    pub fn cartesian_copies(&self) -> Result<Vec<(f64, f64)>> {
        match self.chart {
            ChartId::Cartesian => Ok(self.copies.clone()),
            ChartId::Epidemic => self
                .copies
                .iter()
                .map(|&(q, p)| epi_to_cart(q, p))
                .collect(),
        }
    }
}

/// Signed triple product `x_a (y_b - y_c) + x_b (y_c - y_a) + x_c (y_a - y_b)`.
fn triple(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1)
}

fn pair_product(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0) * (a.1 - b.1)
}

/// Value of the level-`k` constant of motion `F^(k)` on the prolonged state.
///
/// Oscillator levels 2 and 3 are the pair-product sums; two-photon levels 3
/// and 4 are the squared triple products. Levels below the first nontrivial
/// one vanish identically and return 0. The book algebra has no Casimir and
/// therefore no such constants.
pub fn motion_constant(id: AlgebraId, level: usize, s: &ProlongedState) -> Result<f64> {
    let copies = s.cartesian_copies()?;
    let need = |n: usize| -> Result<()> {
        if copies.len() < n {
            Err(Error::CopyCountMismatch {
                expected: format!("at least {n}"),
                got: copies.len(),
            })
        } else {
            Ok(())
        }
    };
    match (id, level) {
        (AlgebraId::B2, _) => Err(Error::NoCasimir("b2")),
        (AlgebraId::H4, 1) | (AlgebraId::H6, 1) => Ok(0.0),
        (AlgebraId::H6, 2) => {
            need(2)?;
            Ok(0.0)
        }
        (AlgebraId::H4, 2) => {
            need(2)?;
            Ok(pair_product(copies[0], copies[1]))
        }
        (AlgebraId::H4, 3) => {
            need(3)?;
            Ok(pair_product(copies[0], copies[1])
                + pair_product(copies[0], copies[2])
                + pair_product(copies[1], copies[2]))
        }
        (AlgebraId::H6, 3) => {
            need(3)?;
            let t = triple(copies[0], copies[1], copies[2]);
            Ok(t * t)
        }
        (AlgebraId::H6, 4) => {
            need(4)?;
            let t123 = triple(copies[0], copies[1], copies[2]);
            let t124 = triple(copies[0], copies[1], copies[3]);
            let t134 = triple(copies[0], copies[2], copies[3]);
            let t234 = triple(copies[1], copies[2], copies[3]);
            Ok(t123 * t123 + t124 * t124 + t134 * t134 + t234 * t234)
        }
        (id, level) => Err(Error::Unsupported(format!(
            "no level-{level} constant for {}",
            id.name()
        ))),
    }
}

/// The same constants through the generic route: Casimir of the algebra
/// evaluated on the prolonged Hamiltonians `h_i^{(level)}`. Agrees with
/// [`motion_constant`] and serves as its independent check.
pub fn casimir_prolonged(id: AlgebraId, level: usize, s: &ProlongedState) -> Result<f64> {
    if s.copies().len() < level {
        return Err(Error::CopyCountMismatch {
            expected: format!("at least {level}"),
            got: s.copies().len(),
        });
    }
    let mut values = [0.0; 6];
    values[0] = level as f64;
    for &(a, b) in s.copies().iter().take(level) {
        let state = PhaseState::from_coords(s.chart(), a, b);
        for &i in id.generators() {
            values[i] += algebra::basis_hamiltonian(id, i, state)?;
        }
    }
    algebra::casimir_value(id, &GeneratorValues::new(values))
}

/// Oscillator pair invariant with the copy indices `1, 2` transposed by
/// `(i, j)`; `F^(3)` equals `F^(2) + F_13^(2) + F_23^(2)` exactly.
pub fn permuted_constant(i: usize, j: usize, s: &ProlongedState) -> Result<f64> {
    if s.copies().len() != 3 {
        return Err(Error::CopyCountMismatch {
            expected: "exactly 3".into(),
            got: s.copies().len(),
        });
    }
    if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::InvalidPermutation { i, j });
    }
    let swap = |k: usize| {
        if k == i {
            j
        } else if k == j {
            i
        } else {
            k
        }
    };
    let copies = s.cartesian_copies()?;
    Ok(pair_product(copies[swap(1) - 1], copies[swap(2) - 1]))
}

/// Signed two-photon triple product of three copies; its square is the
/// corresponding `F^(3)`-type invariant. Antisymmetric under copy swaps.
pub fn signed_k_h6(s: &ProlongedState) -> Result<f64> {
    if s.copies().len() != 3 {
        return Err(Error::CopyCountMismatch {
            expected: "exactly 3".into(),
            got: s.copies().len(),
        });
    }
    let c = s.cartesian_copies()?;
    Ok(triple(c[0], c[1], c[2]))
}

/// Branch choice of the oscillator rule (the sign in front of `B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Discriminant data of the oscillator rule.
fn h4_discriminant(k1: f64, k: f64, k3: f64) -> f64 {
    let s = k - 2.0 * (k1 + k3);
    s * s - 4.0 * k1 * k3
}

fn h4_rule_cartesian(
    sol2: (f64, f64),
    sol3: (f64, f64),
    k1: f64,
    k: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    let dy = sol2.1 - sol3.1;
    let dx = sol2.0 - sol3.0;
    if dy.abs() < SINGULARITY_GUARD {
        return Err(Error::DegenerateSuperposition(
            "y2 = y3 makes the rule undefined; perturb the anchor time".into(),
        ));
    }
    if dx.abs() < SINGULARITY_GUARD {
        return Err(Error::DegenerateSuperposition(
            "x2 = x3 makes the rule undefined; perturb the anchor time".into(),
        ));
    }
    let k3 = pair_product(sol3, sol2);
    let disc = h4_discriminant(k1, k, k3);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { disc });
    }
    let b = disc.sqrt() * branch.sign();
    let x1 = sol3.0 + (k - 2.0 * k1 + b) / (2.0 * dy);
    let y1 = sol3.1 + (k - 2.0 * k1 - b) / (2.0 * dx);
    Ok((x1, y1))
}

/// Reconstruct the general oscillator solution from two particular solutions
/// and the constants `(k1, k)`. Inputs and output are pairs in `chart`.
pub fn superpose_h4(
    sol2: (f64, f64),
    sol3: (f64, f64),
    k1: f64,
    k: f64,
    branch: Branch,
    chart: ChartId,
) -> Result<(f64, f64)> {
    match chart {
        ChartId::Cartesian => h4_rule_cartesian(sol2, sol3, k1, k, branch),
        ChartId::Epidemic => {
            let c2 = epi_to_cart(sol2.0, sol2.1)?;
            let c3 = epi_to_cart(sol3.0, sol3.1)?;
            let (x1, y1) = h4_rule_cartesian(c2, c3, k1, k, branch)?;
            cart_to_epi(x1, y1)
        }
    }
}

/// The oscillator rule in the epidemic chart written out as the direct
/// rational expressions. Cross-check path for [`superpose_h4`].
pub fn superpose_h4_epidemic_direct(
    sol2: (f64, f64),
    sol3: (f64, f64),
    k1: f64,
    k: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    let (q2, p2) = sol2;
    let (q3, p3) = sol3;
    for &(q, p) in [&sol2, &sol3] {
        PhaseState::epidemic(q, p).require_regular()?;
    }
    let u2 = (q2 * q2 * p2 * p2 - 1.0) / p2;
    let v2 = q2 * p2 * p2 / (q2 * q2 * p2 * p2 - 1.0);
    let u3 = (q3 * q3 * p3 * p3 - 1.0) / p3;
    let v3 = q3 * p3 * p3 / (q3 * q3 * p3 * p3 - 1.0);
    if (v2 - v3).abs() < SINGULARITY_GUARD || (u2 - u3).abs() < SINGULARITY_GUARD {
        return Err(Error::DegenerateSuperposition(
            "coincident transformed particulars".into(),
        ));
    }
    let k3 = (u3 - u2) * (v3 - v2);
    let disc = h4_discriminant(k1, k, k3);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { disc });
    }
    let b = disc.sqrt() * branch.sign();
    let xx = u3 + (k - 2.0 * k1 + b) / (2.0 * (v2 - v3));
    let yy = v3 + (k - 2.0 * k1 - b) / (2.0 * (u2 - u3));
    let d = xx * xx * yy * yy - 1.0;
    if xx.abs() < SINGULARITY_GUARD || d.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "cartesian",
            c1: xx,
            c2: yy,
            reason: "reconstruction landed on a pole of the chart change",
        });
    }
    Ok((xx * xx * yy / d, d / xx))
}

fn h6_weights(k1: f64, k2: f64, k4: f64) -> Result<(f64, f64, f64)> {
    if k4.abs() < SINGULARITY_GUARD {
        return Err(Error::DegenerateSuperposition(
            "collinear particular solutions (k4 = 0)".into(),
        ));
    }
    Ok((1.0 + (k2 - k1) / k4, -k2 / k4, k1 / k4))
}

fn h6_rule_cartesian(
    sol2: (f64, f64),
    sol3: (f64, f64),
    sol4: (f64, f64),
    k1: f64,
    k2: f64,
) -> Result<(f64, f64)> {
    let k4 = triple(sol2, sol3, sol4);
    let (w2, w3, w4) = h6_weights(k1, k2, k4)?;
    Ok((
        w2 * sol2.0 + w3 * sol3.0 + w4 * sol4.0,
        w2 * sol2.1 + w3 * sol3.1 + w4 * sol4.1,
    ))
}

/// Reconstruct the general two-photon solution from three particular
/// solutions and the signed constants `(k1, k2)`.
pub fn superpose_h6(
    sol2: (f64, f64),
    sol3: (f64, f64),
    sol4: (f64, f64),
    k1: f64,
    k2: f64,
    chart: ChartId,
) -> Result<(f64, f64)> {
    match chart {
        ChartId::Cartesian => h6_rule_cartesian(sol2, sol3, sol4, k1, k2),
        ChartId::Epidemic => {
            let c2 = epi_to_cart(sol2.0, sol2.1)?;
            let c3 = epi_to_cart(sol3.0, sol3.1)?;
            let c4 = epi_to_cart(sol4.0, sol4.1)?;
            let (x1, y1) = h6_rule_cartesian(c2, c3, c4, k1, k2)?;
            cart_to_epi(x1, y1)
        }
    }
}

/// The two-photon rule in the epidemic chart written out as the direct
/// rational expressions. Cross-check path for [`superpose_h6`].
pub fn superpose_h6_epidemic_direct(
    sol2: (f64, f64),
    sol3: (f64, f64),
    sol4: (f64, f64),
    k1: f64,
    k2: f64,
) -> Result<(f64, f64)> {
    for &(q, p) in [&sol2, &sol3, &sol4] {
        PhaseState::epidemic(q, p).require_regular()?;
    }
    let uv = |(q, p): (f64, f64)| {
        let d = q * q * p * p - 1.0;
        (d / p, q * p * p / d)
    };
    let (u2, v2) = uv(sol2);
    let (u3, v3) = uv(sol3);
    let (u4, v4) = uv(sol4);
    let k4 = u2 * (v3 - v4) + u3 * (v4 - v2) + u4 * (v2 - v3);
    let (w2, w3, w4) = h6_weights(k1, k2, k4)?;
    let xx = w2 * u2 + w3 * u3 + w4 * u4;
    let yy = w2 * v2 + w3 * v3 + w4 * v4;
    let d = xx * xx * yy * yy - 1.0;
    if xx.abs() < SINGULARITY_GUARD || d.abs() < SINGULARITY_GUARD {
        return Err(Error::SingularState {
            chart: "cartesian",
            c1: xx,
            c2: yy,
            reason: "reconstruction landed on a pole of the chart change",
        });
    }
    Ok((xx * xx * yy / d, d / xx))
}

/// Choose the oscillator branch whose reconstruction is closest to the
/// anchor (the general solution observed at the anchor time). Ties, in
/// particular `B = 0`, resolve to `Plus`.
pub fn resolve_branch_h4(
    anchor: (f64, f64),
    sol2: (f64, f64),
    sol3: (f64, f64),
    k1: f64,
    k: f64,
    chart: ChartId,
) -> Result<Branch> {
    const TOL: f64 = 1e-6;
    let dist = |branch: Branch| -> Result<f64> {
        let (a, b) = superpose_h4(sol2, sol3, k1, k, branch, chart)?;
        Ok(((a - anchor.0).powi(2) + (b - anchor.1).powi(2)).sqrt())
    };
    let d_plus = dist(Branch::Plus)?;
    let d_minus = dist(Branch::Minus)?;
    let best = d_plus.min(d_minus);
    if best > TOL {
        return Err(Error::BranchUnresolved { tol: TOL, best });
    }
    Ok(if d_plus <= d_minus {
        Branch::Plus
    } else {
        Branch::Minus
    })
}

/// The significant constants feeding the superposition rules.
///
/// For the oscillator rule: `k1`, `k2`, `k3` are the pair invariants with
/// copy 1 the general solution, `k = k1 + k2 + k3`, and `b` the square root
/// of the reconstruction discriminant. For the two-photon rule: `k1`, `k2`,
/// `k3` are the signed triple products against the general solution and
/// `k4` the particulars-only product that must not vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k: f64,
    pub b: f64,
    pub usable: bool,
}

/// Measure the constants from one simultaneous sample of the general
/// solution and the particular solutions, all in `chart`.
///
/// The book algebra is served by the oscillator rule (it embeds with
/// `b1 = 0`), so `B2` extracts oscillator-style constants.
pub fn extract_constants(
    id: AlgebraId,
    general: (f64, f64),
    particulars: &[(f64, f64)],
    chart: ChartId,
) -> Result<MotionConstants> {
    let mut states = vec![general];
    states.extend_from_slice(particulars);
    let prolonged = ProlongedState::new(chart, states)?;
    let c = prolonged.cartesian_copies()?;
    match id {
        AlgebraId::B2 | AlgebraId::H4 => {
            if particulars.len() != 2 {
                return Err(Error::CopyCountMismatch {
                    expected: "general + 2 particulars".into(),
                    got: particulars.len() + 1,
                });
            }
            let k1 = pair_product(c[0], c[1]);
            let k2 = pair_product(c[0], c[2]);
            let k3 = pair_product(c[2], c[1]);
            let k = k1 + k2 + k3;
            let disc = h4_discriminant(k1, k, k3);
            Ok(MotionConstants {
                k1,
                k2,
                k3,
                k4: 0.0,
                k,
                b: disc.max(0.0).sqrt(),
                usable: disc >= 0.0,
            })
        }
        AlgebraId::H6 => {
            if particulars.len() != 3 {
                return Err(Error::CopyCountMismatch {
                    expected: "general + 3 particulars".into(),
                    got: particulars.len() + 1,
                });
            }
            let k1 = triple(c[0], c[1], c[2]);
            let k2 = triple(c[0], c[1], c[3]);
            let k3 = triple(c[0], c[2], c[3]);
            let k4 = triple(c[1], c[2], c[3]);
            Ok(MotionConstants {
                k1,
                k2,
                k3,
                k4,
                k: 0.0,
                b: 0.0,
                usable: k4.abs() >= SINGULARITY_GUARD,
            })
        }
    }
}
