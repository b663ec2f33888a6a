use std::fmt;

use thiserror::Error;

/// A single unmet family constraint, e.g. `(3,k)=1`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub constraint: String,
    pub detail: String,
}

impl Violation {
    pub fn new(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.constraint, self.detail)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree {0} is outside the supported range 2..=24")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#X} does not have degree {n}")]
    DegreeMismatch { poly: u64, n: u32 },
    #[error("polynomial {0:#X} is reducible over GF(2)")]
    ReduciblePolynomial(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{k} does not divide the field degree {n}")]
    InvalidSubfield { k: u32, n: u32 },
    #[error("value {value:#X} does not fit in GF(2^{n})")]
    ElementOutOfRange { value: u64, n: u32 },
    #[error("component b must be nonzero")]
    ZeroComponent,
    #[error("function is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("invalid family parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),
    #[error("n = {n} exceeds the cap {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("polynomial is not of the form sum r_i x^(2^(s i)): {0}")]
    InvalidShape(String),
    #[error("gcd({s}, {n}) != 1")]
    GcdViolation { s: u32, n: u32 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("table line {line}: {msg}")]
    TableFormat { line: usize, msg: String },
    #[error("{roots} roots exceed the bound {bound}")]
    BoundExceeded { roots: u64, bound: u64 },
    #[error("check failed for b = {b:#X}: {check}")]
    CheckFailure { b: u32, check: String },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
