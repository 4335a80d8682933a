//! Adaptive quadrature built on an embedded Gauss(7)/Kronrod(15) pair.
//!
//! The Kronrod value is the result; the Gauss/Kronrod difference drives
//! recursive bisection until the local error estimate meets the tolerance
//! budget or the subdivision depth is exhausted.

use crate::error::{Error, Result};

/// Tolerances and depth limit for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if abs_tol.is_nan() || rel_tol.is_nan() || abs_tol <= 0.0 || rel_tol <= 0.0 {
            return Err(Error::InvalidQuadratureConfig(format!(
                "tolerances must be positive, got abs {abs_tol}, rel {rel_tol}"
            )));
        }
        if max_depth < 1 {
            return Err(Error::InvalidQuadratureConfig(
                "maximum subdivision depth must be at least 1".into(),
            ));
        }
        Ok(QuadratureConfig {
            abs_tol,
            rel_tol,
            max_depth,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 48,
        }
    }
}

// Kronrod abscissae on [-1, 1]; odd entries are the embedded Gauss-7 nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss-Kronrod 15-point panel: returns (kronrod value, error estimate).
fn qk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        let sum = f1 + f2;
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrate `f` over `[a, b]`. Antisymmetric under swapping the endpoints.
pub fn integrate<F>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-integrate(f, b, a, cfg)?);
    }
    adaptive(f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_depth, cfg)
}

fn adaptive<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_budget: f64,
    rel_tol: f64,
    depth: u32,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (value, err) = qk15(f, a, b)?;
    if !value.is_finite() {
        return Err(Error::NonFiniteValue { t: 0.5 * (a + b) });
    }
    if err <= abs_budget.max(rel_tol * value.abs()) {
        return Ok(value);
    }
    if depth == 0 {
        return Err(Error::QuadratureTolerance {
            a,
            b,
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            max_depth: cfg.max_depth,
        });
    }
    let mid = 0.5 * (a + b);
    let left = adaptive(f, a, mid, 0.5 * abs_budget, rel_tol, depth - 1, cfg)?;
    let right = adaptive(f, mid, b, 0.5 * abs_budget, rel_tol, depth - 1, cfg)?;
    Ok(left + right)
}
