//! Crate-wide error type.

use std::fmt;

use num_bigint::BigInt;

/// Errors surfaced by the exact kernel. Algorithm-level "cannot decide"
/// outcomes are not errors; they travel through verdict types instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Division by the zero scalar / polynomial / rational function.
    DivisionByZero,
    /// An operation would need a second independent radical beyond the
    /// active quadratic extension.
    FieldTowerExceeded { active: Option<BigInt>, wanted: BigInt },
    /// Exact division requested but the divisor does not divide.
    NotDivisible,
    /// Resultant called with an operand of degree zero in the variable.
    DegreeZeroOperand,
    /// Bivariate factorization asked for a polynomial beyond the degree budget.
    FactorBudgetExceeded { degree: u32, budget: u32 },
    /// A polynomial operation was asked for in more variables than supported.
    TooManyVariables,
    /// Substitution collapsed a denominator to zero.
    DenominatorVanished(String),
    /// Structural contract violation (input not of the shape an operation requires).
    Structural(String),
    /// Parse error with 1-based line/column.
    Parse { line: usize, col: usize, msg: String },
    /// Rejection sampling or retry budget ran out.
    BudgetExhausted(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::FieldTowerExceeded { active, wanted } => match active {
                Some(d) => write!(
                    f,
                    "field tower exceeded: sqrt({wanted}) requested while sqrt({d}) is active"
                ),
                None => write!(f, "field tower exceeded: sqrt({wanted}) requested"),
            },
            Error::NotDivisible => write!(f, "exact division failed: not divisible"),
            Error::DegreeZeroOperand => {
                write!(f, "resultant operand has degree zero in the elimination variable")
            }
            Error::FactorBudgetExceeded { degree, budget } => {
                write!(f, "factorization budget exceeded: degree {degree} > {budget}")
            }
            Error::TooManyVariables => write!(f, "operation restricted to at most two variables"),
            Error::DenominatorVanished(what) => {
                write!(f, "substitution collapsed a denominator to zero: {what}")
            }
            Error::Structural(msg) => write!(f, "{msg}"),
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            Error::BudgetExhausted(what) => write!(f, "budget exhausted: {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
