//! The chain of planar Lie-Hamilton algebras b2 ⊂ h4 ⊂ h6.
//!
//! Generators carry global indices preserved along the chain: 1, 2, 3 span
//! the oscillator algebra h4 (with 3 ≡ A the dilation and 2 ≡ B the
//! translation of the book algebra b2), and 4, 5 complete the two-photon
//! algebra h6. Index 0 is the central element adjoined on the Hamiltonian
//! side, where the Poisson brackets are minus the commutators plus the
//! central pairing {h1, h2} = h0.
//!
//! Every generator is realized as a vector field and a Hamiltonian function
//! in both the Cartesian chart (x, y) and the epidemic chart (q, p); the two
//! realizations are intertwined by the canonical transformation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{fd_step, PhaseState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraId {
    B2,
    H4,
    H6,
}

impl AlgebraId {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::B2 => "b2",
            AlgebraId::H4 => "h4",
            AlgebraId::H6 => "h6",
        }
    }

    /// Generator indices of the algebra, listed in bracket-table order.
    pub fn generators(self) -> &'static [usize] {
        match self {
            AlgebraId::B2 => &[2, 3],
            AlgebraId::H4 => &[1, 2, 3],
            AlgebraId::H6 => &[1, 2, 3, 4, 5],
        }
    }

    pub fn contains(self, index: usize) -> bool {
        self.generators().contains(&index)
    }

    /// Whether the Hamiltonian realization includes the central element h0.
    pub fn has_central(self) -> bool {
        !matches!(self, AlgebraId::B2)
    }
}

/// Nonzero commutators of the full h6 table, as `[X_a, X_b] = coeff * X_c`
/// with `a < b`; subalgebras restrict to their generator subsets.
const COMMUTATORS: &[(usize, usize, usize, f64)] = &[
    (1, 3, 1, 1.0),
    (1, 5, 2, 1.0),
    (2, 3, 2, -1.0),
    (2, 4, 1, 1.0),
    (3, 4, 4, -2.0),
    (3, 5, 5, 2.0),
    (4, 5, 3, -1.0),
];

/// Structure constants of an algebra in the chain, with the central
/// extension entries of the Poisson side.
#[derive(Debug, Clone, Copy)]
pub struct StructureTable {
    algebra: AlgebraId,
}

impl StructureTable {
    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    fn check(&self, a: usize, b: usize) -> Result<()> {
        for i in [a, b] {
            if !self.algebra.contains(i) {
                return Err(Error::InvalidGenerator {
                    algebra: self.algebra.name(),
                    index: i,
                });
            }
        }
        Ok(())
    }

    /// Coefficients of `[X_a, X_b]` on the generators `X_1..X_5`
    /// (`result[c-1]` multiplies `X_c`).
    pub fn commutator(&self, a: usize, b: usize) -> Result<[f64; 5]> {
        self.check(a, b)?;
        let mut out = [0.0; 5];
        for &(i, j, c, v) in COMMUTATORS {
            if (i, j) == (a, b) {
                out[c - 1] += v;
            } else if (i, j) == (b, a) {
                out[c - 1] -= v;
            }
        }
        Ok(out)
    }

    /// Coefficients of `{h_a, h_b}` as (generator part, central part):
    /// minus the commutator coefficients, plus `{h_1, h_2} = h_0`.
    pub fn poisson(&self, a: usize, b: usize) -> Result<([f64; 5], f64)> {
        let c = self.commutator(a, b)?;
        let mut out = [0.0; 5];
        for (o, v) in out.iter_mut().zip(c) {
            *o = -v;
        }
        let central = if self.algebra.has_central() {
            match (a, b) {
                (1, 2) => 1.0,
                (2, 1) => -1.0,
                _ => 0.0,
            }
        } else {
            0.0
        };
        Ok((out, central))
    }
}

pub fn structure_constants(id: AlgebraId) -> StructureTable {
    StructureTable { algebra: id }
}

/// Components of the basis vector field `X_i` at a state, in the state's
/// own chart.
pub fn basis_vector_field(id: AlgebraId, i: usize, state: PhaseState) -> Result<(f64, f64)> {
    if !id.contains(i) {
        return Err(Error::InvalidGenerator {
            algebra: id.name(),
            index: i,
        });
    }
    state.require_regular()?;
    Ok(match state {
        PhaseState::Cartesian { x, y } => match i {
            1 => (1.0, 0.0),
            2 => (0.0, 1.0),
            3 => (x, -y),
            4 => (y, 0.0),
            5 => (0.0, x),
            _ => unreachable!(),
        },
        PhaseState::Epidemic { q, p } => {
            let d = q * q * p * p - 1.0;
            match i {
                1 => (
                    -2.0 * q * p / (d * d),
                    p * p * (q * q * p * p + 1.0) / (d * d),
                ),
                2 => (-(q * q + 1.0 / (p * p)), 2.0 * q * p),
                3 => (q, -p),
                4 => (
                    -2.0 * q * q * p.powi(3) / d.powi(3),
                    q * p.powi(4) * (q * q * p * p + 1.0) / d.powi(3),
                ),
                5 => (
                    (1.0 - q.powi(4) * p.powi(4)) / p.powi(3),
                    2.0 * q * d,
                ),
                _ => unreachable!(),
            }
        }
    })
}

/// Value of the Hamiltonian function `h_i` at a state; `i = 0` is the
/// central element and evaluates to 1.
pub fn basis_hamiltonian(id: AlgebraId, i: usize, state: PhaseState) -> Result<f64> {
    if i == 0 {
        return Ok(1.0);
    }
    if !id.contains(i) {
        return Err(Error::InvalidGenerator {
            algebra: id.name(),
            index: i,
        });
    }
    state.require_regular()?;
    Ok(match state {
        PhaseState::Cartesian { x, y } => match i {
            1 => y,
            2 => -x,
            3 => x * y,
            4 => 0.5 * y * y,
            5 => -0.5 * x * x,
            _ => unreachable!(),
        },
        PhaseState::Epidemic { q, p } => {
            let d = q * q * p * p - 1.0;
            match i {
                1 => q * p * p / d,
                2 => -d / p,
                3 => q * p,
                4 => 0.5 * (q * p * p / d) * (q * p * p / d),
                5 => -0.5 * (d / p) * (d / p),
                _ => unreachable!(),
            }
        }
    })
}

/// Values assigned to the abstract generators `v_0..v_5`; `values[0]` is the
/// central element, `values[i]` the generator of global index `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorValues {
    pub values: [f64; 6],
}

impl GeneratorValues {
    pub fn new(values: [f64; 6]) -> Self {
        GeneratorValues { values }
    }

    /// Values taken by the Hamiltonian realization at a state.
    pub fn at_state(id: AlgebraId, state: PhaseState) -> Result<Self> {
        let mut values = [0.0; 6];
        values[0] = 1.0;
        for &i in id.generators() {
            values[i] = basis_hamiltonian(id, i, state)?;
        }
        Ok(GeneratorValues { values })
    }
}

/// Casimir invariant evaluated on generator values.
///
/// h4: `C = v1 v2 + v3 v0`. h6: `C = 2(v1^2 v5 - v2^2 v4 - v1 v2 v3)
/// - v0 (v3^2 + 4 v4 v5)`. The book algebra admits no nonconstant Casimir.
pub fn casimir_value(id: AlgebraId, gv: &GeneratorValues) -> Result<f64> {
    let v = &gv.values;
    match id {
        AlgebraId::B2 => Err(Error::NoCasimir("b2")),
        AlgebraId::H4 => Ok(v[1] * v[2] + v[3] * v[0]),
        AlgebraId::H6 => Ok(2.0 * (v[1] * v[1] * v[5] - v[2] * v[2] * v[4] - v[1] * v[2] * v[3])
            - v[0] * (v[3] * v[3] + 4.0 * v[4] * v[5])),
    }
}

/// Exact partial derivatives of the Casimir with respect to `v_0..v_5`.
fn casimir_gradient(id: AlgebraId, gv: &GeneratorValues) -> Result<[f64; 6]> {
    let v = &gv.values;
    match id {
        AlgebraId::B2 => Err(Error::NoCasimir("b2")),
        AlgebraId::H4 => Ok([v[3], v[2], v[1], v[0], 0.0, 0.0]),
        AlgebraId::H6 => Ok([
            -(v[3] * v[3] + 4.0 * v[4] * v[5]),
            2.0 * (2.0 * v[1] * v[5] - v[2] * v[3]),
            2.0 * (-2.0 * v[2] * v[4] - v[1] * v[3]),
            -2.0 * v[1] * v[2] - 2.0 * v[0] * v[3],
            -2.0 * v[2] * v[2] - 4.0 * v[0] * v[5],
            2.0 * v[1] * v[1] - 4.0 * v[0] * v[4],
        ]),
    }
}

/// Lie-Poisson bracket `{C, v_i}` evaluated through the structure table.
/// Vanishes identically: the Casimir commutes with every generator.
pub fn casimir_coadjoint_bracket(id: AlgebraId, gv: &GeneratorValues, i: usize) -> Result<f64> {
    if !id.contains(i) {
        return Err(Error::InvalidGenerator {
            algebra: id.name(),
            index: i,
        });
    }
    let grad = casimir_gradient(id, gv)?;
    let table = structure_constants(id);
    let mut sum = 0.0;
    for &a in id.generators() {
        let (coeffs, central) = table.poisson(a, i)?;
        let mut bracket = central * gv.values[0];
        for (c, w) in coeffs.iter().enumerate() {
            bracket += w * gv.values[c + 1];
        }
        sum += grad[a] * bracket;
    }
    Ok(sum)
}

/// Poisson bracket `{h_a, h_b}` at a state by central finite differences of
/// the Hamiltonian realizations, with respect to the chart's symplectic form.
pub fn poisson_bracket_numeric(
    id: AlgebraId,
    a: usize,
    b: usize,
    state: PhaseState,
) -> Result<f64> {
    let ga = hamiltonian_gradient_numeric(id, a, state)?;
    let gb = hamiltonian_gradient_numeric(id, b, state)?;
    Ok(ga.0 * gb.1 - ga.1 * gb.0)
}

/// Expected bracket value `-sum_c C_ab^c h_c + D_ab` at the state.
pub fn poisson_bracket_expected(
    id: AlgebraId,
    a: usize,
    b: usize,
    state: PhaseState,
) -> Result<f64> {
    let (coeffs, central) = structure_constants(id).poisson(a, b)?;
    let mut v = central;
    for (c, w) in coeffs.iter().enumerate() {
        if *w != 0.0 {
            v += w * basis_hamiltonian(id, c + 1, state)?;
        }
    }
    Ok(v)
}

/// Finite-difference gradient of `h_i` in the state's chart coordinates.
pub fn hamiltonian_gradient_numeric(
    id: AlgebraId,
    i: usize,
    state: PhaseState,
) -> Result<(f64, f64)> {
    let (u, v) = state.coords();
    let chart = state.chart();
    let h = |a: f64, b: f64| basis_hamiltonian(id, i, PhaseState::from_coords(chart, a, b));
    let hu = fd_step(u);
    let hv = fd_step(v);
    Ok((
        (h(u + hu, v)? - h(u - hu, v)?) / (2.0 * hu),
        (h(u, v + hv)? - h(u, v - hv)?) / (2.0 * hv),
    ))
}

/// `[X_a, X_b]` at a state via finite-difference pushforwards.
pub fn commutator_numeric(
    id: AlgebraId,
    a: usize,
    b: usize,
    state: PhaseState,
) -> Result<(f64, f64)> {
    let xa = basis_vector_field(id, a, state)?;
    let xb = basis_vector_field(id, b, state)?;
    let ja = vector_field_jacobian(id, a, state)?;
    let jb = vector_field_jacobian(id, b, state)?;
    // (D X_b) X_a - (D X_a) X_b
    Ok((
        jb[0][0] * xa.0 + jb[0][1] * xa.1 - (ja[0][0] * xb.0 + ja[0][1] * xb.1),
        jb[1][0] * xa.0 + jb[1][1] * xa.1 - (ja[1][0] * xb.0 + ja[1][1] * xb.1),
    ))
}

/// Expected commutator `sum_c C_ab^c X_c` at the state.
pub fn commutator_expected(
    id: AlgebraId,
    a: usize,
    b: usize,
    state: PhaseState,
) -> Result<(f64, f64)> {
    let coeffs = structure_constants(id).commutator(a, b)?;
    let mut out = (0.0, 0.0);
    for (c, w) in coeffs.iter().enumerate() {
        if *w != 0.0 {
            let x = basis_vector_field(id, c + 1, state)?;
            out.0 += w * x.0;
            out.1 += w * x.1;
        }
    }
    Ok(out)
}

fn vector_field_jacobian(id: AlgebraId, i: usize, state: PhaseState) -> Result<[[f64; 2]; 2]> {
    let (u, v) = state.coords();
    let chart = state.chart();
    let f = |a: f64, b: f64| basis_vector_field(id, i, PhaseState::from_coords(chart, a, b));
    let hu = fd_step(u);
    let hv = fd_step(v);
    let (fup1, fup2) = f(u + hu, v)?;
    let (fum1, fum2) = f(u - hu, v)?;
    let (fvp1, fvp2) = f(u, v + hv)?;
    let (fvm1, fvm2) = f(u, v - hv)?;
    Ok([
        [(fup1 - fum1) / (2.0 * hu), (fvp1 - fvm1) / (2.0 * hv)],
        [(fup2 - fum2) / (2.0 * hu), (fvp2 - fvm2) / (2.0 * hv)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::ChartId;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ALGEBRAS: [AlgebraId; 3] = [AlgebraId::B2, AlgebraId::H4, AlgebraId::H6];

    fn random_regular_state(rng: &mut impl Rng, chart: ChartId) -> PhaseState {
        loop {
            let sgn = |r: &mut dyn rand::RngCore| if r.gen::<bool>() { 1.0 } else { -1.0 };
            let u = sgn(rng) * rng.gen_range(0.3..1.5);
            let v = sgn(rng) * rng.gen_range(0.3..1.5);
            let s = PhaseState::from_coords(chart, u, v);
            // stay away from the epidemic poles so finite differences and the
            // rational realizations are well conditioned
            let margin_ok = match chart {
                ChartId::Cartesian => true,
                ChartId::Epidemic => (u * u * v * v - 1.0).abs() > 0.3,
            };
            if margin_ok && s.is_regular() {
                return s;
            }
        }
    }

    #[test]
    fn bracket_table_examples() {
        // [X_A, X_B] = X_B with A = 3, B = 2
        let b2 = structure_constants(AlgebraId::B2);
        assert_eq!(b2.commutator(3, 2).unwrap(), [0.0, 1.0, 0.0, 0.0, 0.0]);
        // [X_1, X_2] = 0
        let h4 = structure_constants(AlgebraId::H4);
        assert_eq!(h4.commutator(1, 2).unwrap(), [0.0; 5]);
        // [X_4, X_5] = -X_3
        let h6 = structure_constants(AlgebraId::H6);
        assert_eq!(h6.commutator(4, 5).unwrap(), [0.0, 0.0, -1.0, 0.0, 0.0]);
        // index 4 is not a b2 generator
        assert!(b2.commutator(3, 4).is_err());
    }

    #[test]
    fn table_is_antisymmetric_and_satisfies_jacobi() {
        for id in ALGEBRAS {
            let t = structure_constants(id);
            let gens = id.generators();
            for &a in gens {
                for &b in gens {
                    let ab = t.commutator(a, b).unwrap();
                    let ba = t.commutator(b, a).unwrap();
                    for c in 0..5 {
                        assert_eq!(ab[c], -ba[c], "{id:?} antisymmetry at ({a},{b},{c})");
                    }
                }
            }
            // [[a,b],c] + [[b,c],a] + [[c,a],b] = 0
            for &a in gens {
                for &b in gens {
                    for &c in gens {
                        let mut total = [0.0; 5];
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            let inner = t.commutator(x, y).unwrap();
                            for (m, w) in inner.iter().enumerate() {
                                if *w != 0.0 {
                                    let outer = t.commutator(m + 1, z).unwrap();
                                    for k in 0..5 {
                                        total[k] += w * outer[k];
                                    }
                                }
                            }
                        }
                        assert_eq!(total, [0.0; 5], "{id:?} jacobi at ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn poisson_is_minus_commutator_with_central_pairing() {
        for id in ALGEBRAS {
            let t = structure_constants(id);
            for &a in id.generators() {
                for &b in id.generators() {
                    let c = t.commutator(a, b).unwrap();
                    let (p, central) = t.poisson(a, b).unwrap();
                    for k in 0..5 {
                        assert_eq!(p[k], -c[k]);
                    }
                    let expected_central = if id.has_central() && (a, b) == (1, 2) {
                        1.0
                    } else if id.has_central() && (a, b) == (2, 1) {
                        -1.0
                    } else {
                        0.0
                    };
                    assert_eq!(central, expected_central);
                }
            }
        }
    }

    #[test]
    fn vector_field_values() {
        let v = basis_vector_field(AlgebraId::H6, 4, PhaseState::cartesian(1.0, 5.0)).unwrap();
        assert_eq!(v, (5.0, 0.0));
        let v = basis_vector_field(AlgebraId::B2, 2, PhaseState::epidemic(2.0, 1.0)).unwrap();
        assert!((v.0 - -5.0).abs() < 1e-14 && (v.1 - 4.0).abs() < 1e-14);
        let v = basis_vector_field(AlgebraId::B2, 3, PhaseState::cartesian(3.0, 2.0)).unwrap();
        assert_eq!(v, (3.0, -2.0));
        assert!(basis_vector_field(AlgebraId::B2, 1, PhaseState::cartesian(1.0, 1.0)).is_err());
        assert!(basis_vector_field(AlgebraId::H6, 4, PhaseState::epidemic(1.0, 1.0)).is_err());
    }

    #[test]
    fn hamiltonian_values() {
        assert_eq!(
            basis_hamiltonian(AlgebraId::H6, 3, PhaseState::cartesian(3.0, 2.0)).unwrap(),
            6.0
        );
        assert_eq!(
            basis_hamiltonian(AlgebraId::H6, 5, PhaseState::cartesian(2.0, 0.0)).unwrap(),
            -2.0
        );
        let h1 = basis_hamiltonian(AlgebraId::H4, 1, PhaseState::epidemic(2.0, 1.0)).unwrap();
        assert!((h1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            basis_hamiltonian(AlgebraId::H4, 0, PhaseState::cartesian(9.0, 9.0)).unwrap(),
            1.0
        );
        assert!(basis_hamiltonian(AlgebraId::H4, 4, PhaseState::cartesian(0.0, 0.0)).is_err());
    }

    #[test]
    fn casimir_values() {
        let gv = GeneratorValues::new([1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(casimir_value(AlgebraId::H4, &gv).unwrap(), 2.0);
        let gv = GeneratorValues::new([0.0; 6]);
        assert_eq!(casimir_value(AlgebraId::H6, &gv).unwrap(), 0.0);
        let mut v = [0.0; 6];
        v[1] = 1.0;
        v[5] = 1.0;
        assert_eq!(casimir_value(AlgebraId::H6, &GeneratorValues::new(v)).unwrap(), 2.0);
        assert!(matches!(
            casimir_value(AlgebraId::B2, &GeneratorValues::new(v)),
            Err(Error::NoCasimir(_))
        ));
    }

    #[test]
    fn casimir_commutes_with_generators_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for id in [AlgebraId::H4, AlgebraId::H6] {
            for _ in 0..100 {
                // small integers keep the polynomial identity exact in floats
                let mut values = [0.0; 6];
                for v in values.iter_mut() {
                    *v = rng.gen_range(-6..=6) as f64;
                }
                let gv = GeneratorValues::new(values);
                for &i in id.generators() {
                    assert_eq!(casimir_coadjoint_bracket(id, &gv, i).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn bracket_spot_values() {
        // {h_A, h_B} = -h_B; at (x, y) = (1, 2), h_B = -x = -1
        let v =
            poisson_bracket_numeric(AlgebraId::B2, 3, 2, PhaseState::cartesian(1.0, 2.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        // {h_1, h_2} = h_0 = 1 anywhere
        let v =
            poisson_bracket_numeric(AlgebraId::H4, 1, 2, PhaseState::cartesian(0.7, -0.9)).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        let v =
            poisson_bracket_numeric(AlgebraId::H4, 1, 2, PhaseState::epidemic(0.5, 0.8)).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        // {h_4, h_5} = h_3 = xy = 6
        let v =
            poisson_bracket_numeric(AlgebraId::H6, 4, 5, PhaseState::cartesian(3.0, 2.0)).unwrap();
        assert!((v - 6.0).abs() < 1e-5);
    }

    #[test]
    fn brackets_match_table_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for id in ALGEBRAS {
            for chart in [ChartId::Cartesian, ChartId::Epidemic] {
                for _ in 0..50 {
                    let s = random_regular_state(&mut rng, chart);
                    for &a in id.generators() {
                        for &b in id.generators() {
                            let numeric = poisson_bracket_numeric(id, a, b, s).unwrap();
                            let expected = poisson_bracket_expected(id, a, b, s).unwrap();
                            assert!(
                                (numeric - expected).abs() < 1e-5,
                                "{id:?} {chart:?} ({a},{b}) at {s:?}: {numeric} vs {expected}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutators_match_table_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for id in ALGEBRAS {
            for chart in [ChartId::Cartesian, ChartId::Epidemic] {
                for _ in 0..50 {
                    let s = random_regular_state(&mut rng, chart);
                    for &a in id.generators() {
                        for &b in id.generators() {
                            let numeric = commutator_numeric(id, a, b, s).unwrap();
                            let expected = commutator_expected(id, a, b, s).unwrap();
                            assert!(
                                (numeric.0 - expected.0).abs() < 1e-5
                                    && (numeric.1 - expected.1).abs() < 1e-5,
                                "{id:?} {chart:?} ({a},{b}) at {s:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contraction_identity_gradient_vs_field() {
        // iota_X omega = dh: grad h_i = (-X^(2), X^(1))
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for id in ALGEBRAS {
            for chart in [ChartId::Cartesian, ChartId::Epidemic] {
                for _ in 0..50 {
                    let s = random_regular_state(&mut rng, chart);
                    for &i in id.generators() {
                        let g = hamiltonian_gradient_numeric(id, i, s).unwrap();
                        let x = basis_vector_field(id, i, s).unwrap();
                        assert!(
                            (g.0 + x.1).abs() < 1e-5 && (g.1 - x.0).abs() < 1e-5,
                            "{id:?} {chart:?} h_{i} at {s:?}: grad {g:?} field {x:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_identity_between_charts() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for id in ALGEBRAS {
            for _ in 0..100 {
                let epi = random_regular_state(&mut rng, ChartId::Epidemic);
                let cart = epi.to_chart(ChartId::Cartesian).unwrap();
                for &i in id.generators() {
                    let he = basis_hamiltonian(id, i, epi).unwrap();
                    let hc = basis_hamiltonian(id, i, cart).unwrap();
                    assert!(
                        (he - hc).abs() < 1e-10 * he.abs().max(1.0),
                        "{id:?} h_{i}: {he} vs {hc}"
                    );
                }
            }
        }
    }
}
