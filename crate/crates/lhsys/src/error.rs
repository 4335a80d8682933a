use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("time {t} outside tabulated span [{lo}, {hi}]")]
    OutOfSpan { t: f64, lo: f64, hi: f64 },

    #[error("invalid coefficient table: {0}")]
    InvalidTable(String),

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadratureConfig(String),

    #[error("quadrature tolerance not reached on [{a}, {b}] (requested abs {abs_tol}, rel {rel_tol}, depth {max_depth})")]
    QuadratureTolerance {
        a: f64,
        b: f64,
        abs_tol: f64,
        rel_tol: f64,
        max_depth: u32,
    },

    #[error("coefficient evaluated to a non-finite value at t = {t}")]
    NonFiniteValue { t: f64 },

    #[error("singular {chart} state ({c1}, {c2}): {reason}")]
    SingularState {
        chart: &'static str,
        c1: f64,
        c2: f64,
        reason: &'static str,
    },

    #[error("generator index {index} not in algebra {algebra}")]
    InvalidGenerator { algebra: &'static str, index: usize },

    #[error("algebra {0} has no nonconstant Casimir invariant")]
    NoCasimir(&'static str),

    #[error("coefficient `{name}` must be identically zero for algebra {algebra}")]
    ForbiddenCoefficient {
        algebra: &'static str,
        name: &'static str,
    },

    #[error("invalid time span: t1 = {t1} precedes t0 = {t0}")]
    InvalidTimeSpan { t0: f64, t1: f64 },

    #[error("step size underflow at t = {t} (h = {h}); the trajectory likely approaches a chart pole")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("nonpositive radicand: requires tc1^2 > tc2, got tc1 = {tc1}, tc2 = {tc2}")]
    NonpositiveRadicand { tc1: f64, tc2: f64 },

    #[error("constant rate must be nonzero")]
    ZeroRate,

    #[error("b4(t) vanishes at t = {t}; the second-order reduction requires b4 != 0")]
    VanishingB4 { t: f64 },

    #[error("prolonged state needs {expected} copies, got {got}")]
    CopyCountMismatch { expected: String, got: usize },

    #[error("invalid permutation indices ({i}, {j})")]
    InvalidPermutation { i: usize, j: usize },

    #[error("degenerate superposition input: {0}")]
    DegenerateSuperposition(String),

    #[error("negative discriminant {disc}: no real reconstruction for these constants")]
    NegativeDiscriminant { disc: f64 },

    #[error("neither branch reproduces the anchor within {tol} (best distance {best})")]
    BranchUnresolved { tol: f64, best: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{0}")]
    Unsupported(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
