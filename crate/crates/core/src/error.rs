use thiserror::Error;

use crate::field::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(Field, Field),
    #[error("invalid modulus {0}: expected a prime p with 3 <= p < 2^32")]
    InvalidModulus(u64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable x{index} (polynomial ring has {nvars} variables)")]
    UnknownVariable { index: usize, nvars: usize },
    #[error("coefficient `{coeff}` is not an element of {field}")]
    CoefficientNotInField { coeff: String, field: Field },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected a form of degree {expected}, got degree {got}")]
    WrongDegree { expected: u32, got: u32 },
    #[error("coordinate change is not invertible")]
    InvalidTransform,
    #[error("zero vector does not define a projective point")]
    ZeroPoint,
    #[error("invalid point configuration: {0}")]
    InvalidConfig(String),
    #[error("no hyperplane over {0} avoids every point")]
    HyperplaneNotFound(Field),
    #[error("linear system is empty")]
    EmptySystem,
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("point {0} does not lie on the required locus")]
    NotOnVariety(String),
    #[error("variety is singular at {point}: Jacobian rank {rank}, expected {expected}")]
    SingularVariety {
        point: String,
        rank: usize,
        expected: usize,
    },
    #[error("characteristic {p} divides the degree {degree}")]
    CharacteristicDividesDegree { p: u64, degree: u32 },
    #[error("enumerating {points} points exceeds the cap of {cap}")]
    EnumerationCap { points: u128, cap: u128 },
    #[error("prime {p} divides a cleared denominator")]
    BadReduction { p: u64 },
    #[error("lifted form {0} is not a member of the lifted system")]
    ContainmentViolated(String),
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
