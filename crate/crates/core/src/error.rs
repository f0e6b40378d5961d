use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A field of a spec/config struct is out of its admissible range.
    #[error("validation error: {0}")]
    Validation(String),
    /// The operation is not defined for the given input.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
