use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The argument sits on (or numerically too close to) a pole.
    #[error("pole at s = {at}: {what}")]
    Pole { what: &'static str, at: String },

    #[error("argument outside domain: {0}")]
    Domain(String),

    /// A numerical procedure could not certify the requested digits.
    #[error("precision not reached: {0}")]
    Precision(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
