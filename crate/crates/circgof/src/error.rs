use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("invalid shape parameter: {0}")]
    InvalidShape(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("Mobius map singular at x = {x} (r = {r}, theta1 = {theta1})")]
    SingularMap { x: f64, r: f64, theta1: f64 },
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error("parse error at row {row}, column {col}: {msg}")]
    ParseError { row: usize, col: String, msg: String },
    #[error("unit error at row {row}: {msg}")]
    UnitError { row: usize, msg: String },
    #[error("format error: {0}")]
    FormatError(String),
    #[error("selection is empty: {0}")]
    EmptySelection(String),
    #[error("unknown dataset id: {0}")]
    UnknownDataset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
