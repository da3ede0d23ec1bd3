use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator {generator} out of range for {even} even / {odd} odd variables")]
    GeneratorOutOfRange {
        generator: String,
        even: usize,
        odd: usize,
    },

    #[error("operands live over different generator sets")]
    MismatchedGenerators,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("specialization value for odd slot {slot} must be zero over a purely even base")]
    OddSpecialization { slot: usize },

    #[error("expected {expected} specialization values, got {got}")]
    OmegaLength { expected: usize, got: usize },

    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("position {position} needs neighbours inside the materialized window [{lo}, {hi}]")]
    WindowViolation { position: i64, lo: i64, hi: i64 },

    #[error("entry ({row}, {col}) has the wrong parity for an even supermatrix")]
    ParityViolation { row: usize, col: usize },

    #[error("matrix is not invertible (a diagonal block has a non-unit determinant)")]
    NotInvertible,

    #[error("element has zero body and cannot be inverted")]
    ZeroBody,

    #[error("the two Berezinian closed forms disagree: {0} vs {1}")]
    BerezinianMismatch(String, String),

    #[error("formula and direct computation disagree at (m={m}, n={n}, p={p}, r={r}, i={i}): {formula} vs {direct}")]
    MethodDisagreement {
        m: usize,
        n: usize,
        p: usize,
        r: i64,
        i: usize,
        formula: String,
        direct: String,
    },

    #[error("unsupported base ring for this operation: {0}")]
    UnsupportedBase(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
