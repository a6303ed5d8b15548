use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid lamination data: {0}")]
    Shape(String),
}
