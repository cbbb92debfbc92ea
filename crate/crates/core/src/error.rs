use core::fmt;

/// Errors produced by construction and matching operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point set was empty where a non-empty one is required.
    EmptySet,
    /// A coordinate or angle was NaN or infinite.
    NonFinite { x: f64, y: f64, a: f64 },
    /// A scale factor was zero, negative, or non-finite.
    InvalidScale(f64),
    /// A refinement or matcher parameter was out of range.
    InvalidParameter(&'static str),
    /// The pattern has zero positional diameter but the requested matcher
    /// needs a diametric pair (dispatch to the small-diameter variant).
    DegenerateDiameter,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySet => write!(f, "point set must be non-empty"),
            Error::NonFinite { x, y, a } => {
                write!(f, "non-finite oriented point ({x}, {y}, {a})")
            }
            Error::InvalidScale(s) => write!(f, "scale factor must be positive, got {s}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DegenerateDiameter => {
                write!(f, "pattern diameter is zero; use a small-diameter matcher")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
