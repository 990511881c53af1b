use thiserror::Error;

use crate::geom::Pos;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell {0} is already occupied")]
    OccupiedCell(Pos),
    #[error("placement is not in the frontier: {0}")]
    IllegalStep(String),
    #[error("scale factor must be positive")]
    InvalidScale,
    #[error("duple ({a},{b}) internal glues do not match with strength >= {tau}")]
    InvalidDuple { a: String, b: String, tau: u32 },
    #[error("unknown tile type {0:?}")]
    UnknownTile(String),
    #[error("duplicate tile type name {0:?}")]
    DuplicateTile(String),
    #[error("seed assembly is invalid: {0}")]
    InvalidSeed(String),
    #[error("system is not a pure aTAM system (duples present)")]
    NotPureAtam,
    #[error("compiler precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported temperature {0} (expected 2)")]
    UnsupportedTemperature(u32),
    #[error("window has no closed-rectangle descriptor")]
    UnsupportedWindow,
    #[error("window movies do not match")]
    MovieMismatch,
    #[error("spliced step {step} failed frontier validation: {detail}")]
    SpliceInvalid { step: usize, detail: String },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
