use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at t = {point}{}", composition_suffix(.composition))]
    PoleAtEvaluationPoint {
        point: String,
        composition: Option<Vec<u32>>,
    },

    #[error("not a Laurent polynomial: denominator {denominator} is not of the form c*t^m")]
    NotLaurent { denominator: String },

    #[error("size {requested} exceeds the composition cap {cap}")]
    SizeCapExceeded { requested: u32, cap: u32 },

    #[error("element is not homogeneous (levels {first} and {second} both occur)")]
    Inhomogeneous { first: u32, second: u32 },

    #[error("cannot normalize: the pure e1 coefficient is zero")]
    NormalizationFailure,

    #[error("no closed form for S_{{{p},{q}}}: min(p, q) must be at most 2")]
    UnsupportedLabel { p: u32, q: u32 },

    #[error("invalid rational literal {0:?}: expected \"a/b\" or an integer")]
    ParseRational(String),

    #[error("cochain property fails: D_{next} * D_{k} != 0 at s = {s}", next = .k + 1)]
    CochainViolation { k: u32, s: i64 },
}

fn composition_suffix(composition: &Option<Vec<u32>>) -> String {
    match composition {
        Some(parts) => format!(" in the coefficient of composition {parts:?}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
