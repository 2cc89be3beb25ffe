use thiserror::Error;

/// Unified error type for input validation across the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: expected 2 or 3")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector not normalized: squared norm {norm_sqr} is off by more than {tol}")]
    NotNormalized { norm_sqr: f64, tol: f64 },
    #[error("kets {i} and {j} violate orthonormality by {deviation} (tolerance {tol})")]
    NotOrthonormal {
        i: usize,
        j: usize,
        deviation: f64,
        tol: f64,
    },
    #[error("non-finite amplitude at index {0}")]
    NonFiniteAmplitude(usize),
    #[error("truth-table entry {value} at index {index} is not a bit")]
    InvalidBit { index: usize, value: u8 },
    #[error("truth-table encoding {0} out of range")]
    InvalidEncoding(u16),
    #[error("cannot parse truth table from `{0}`")]
    ParseTruthTable(String),
    #[error("constant truth table not permitted here")]
    ConstantTable,
    #[error("grid index {0} out of range (must be < 64)")]
    GridIndexOutOfRange(usize),
    #[error(
        "cannot parse `{0}` as a grid angle: expected 0 or a multiple of pi/32 written like `pi/8`, `15pi/8`, `pi`"
    )]
    ParseAngle(String),
    #[error("threshold {0} must lie in [0, 1]")]
    InvalidThreshold(f64),
    #[error("gap {0} must lie in (0, 1]")]
    InvalidGap(f64),
    #[error("error probability {0} must lie in (0, 1)")]
    InvalidErrorProb(f64),
    #[error("round count must be at least 1")]
    InvalidRounds,
    #[error(
        "expected statistics {expected_d2} and {expected_d3} are too close to distinguish dimensions"
    )]
    DegenerateConfiguration { expected_d2: f64, expected_d3: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
