//! Error type shared by the whole kernel.

/// Everything that can go wrong in the kernel.
///
/// Variants mirror the contracts of the public operations; `AssertionFailure`
/// is reserved for internal cross-checks (two routes to the same number
/// disagreeing), which indicates a kernel bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("classes belong to different models")]
    ModelMismatch,
    #[error("element is not invertible")]
    NonUnit,
    #[error("constant term must be zero for a truncated exponential")]
    NonNilpotentConstant,
    #[error("constant term must be one for a truncated logarithm")]
    NonUnitConstant,
    #[error("leading series coefficient is not a unit")]
    NonUnitLeadingCoefficient,
    #[error("inversion needs exponent {needed} but the window floor is {lo}")]
    WindowTooNarrow { needed: i64, lo: i64 },
    #[error("pole at the evaluation point: lowest populated exponent is {order}")]
    PoleAtZero { order: i64 },
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("partition has weighted degree {got}, expected {expected}")]
    PartitionDegreeMismatch { expected: u32, got: u32 },
    #[error("moving part contains a weight-0 block")]
    MovingPartHasFixedWeight,
    #[error("s-denominator does not clear at q^{q_power}")]
    DenominatorNotClearing { q_power: usize },
    #[error("shift identity ({law}) fails at q-half-power {p_exponent}, s-exponent {s_exponent}")]
    IdentityViolation {
        law: &'static str,
        p_exponent: i64,
        s_exponent: i64,
    },
    #[error("internal consistency check failed: {0}")]
    AssertionFailure(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
