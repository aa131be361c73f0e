use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// The first group is domain/validation trouble (bad parameters, functions
/// outside the space, degenerate quotient inputs); the second group is
/// numerical failure (an algorithm that ran but could not deliver).  The CLI
/// maps the groups to exit codes 2 and 3 respectively.
#[derive(Debug, Error)]
pub enum MorreyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// `RadialFunction::add` only has a closed form when both operands use a
    /// single shared exponent per radius; callers fall back to quadrature.
    #[error("cannot add functions with mismatched exponents on overlapping pieces")]
    MismatchedExponents,

    #[error("function is not in the space: {0}")]
    NotInSpace(String),

    #[error("local integral diverges at the origin: {0}")]
    DivergentAtOrigin(String),

    #[error("quotient undefined for the zero vector")]
    ZeroVector,

    #[error("Dunkl-Williams quotient undefined for (numerically) identical inputs")]
    IdenticalInputs,

    #[error("requested tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("numerical overflow while evaluating {0}")]
    NumericalOverflow(String),
}

impl MorreyError {
    /// True for errors meaning "the computation itself failed", as opposed to
    /// "the request was malformed".
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            MorreyError::ToleranceNotMet(_) | MorreyError::NumericalOverflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, MorreyError>;
