use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("speed c = {c} collides with discrete velocity v[{index}] = {velocity}")]
    Collision { c: f64, index: usize, velocity: f64 },

    #[error("speed c = {c} lies outside the admissible window ({lo}, {hi})")]
    OutsideWindow { c: f64, lo: f64, hi: f64 },

    #[error("root not bracketed: {0}")]
    NotBracketed(String),

    #[error("evaluation at a pole of the dispersion function (lambda = {0})")]
    Pole(f64),

    #[error("inadmissible mode profile: {0}")]
    BadProfile(String),

    #[error("transfer matrix null space has dimension {0}, expected 1")]
    NullSpace(usize),

    #[error("ansatz failure: {0}")]
    Ansatz(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("CFL condition violated: dt = {dt} exceeds the stable step {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
