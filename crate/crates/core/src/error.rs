use std::path::PathBuf;

use thiserror::Error;

use crate::order::Cell;

/// Two grid cells whose distances are too close to order reliably.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Collision {
    pub first: Cell,
    pub second: Cell,
    /// Absolute gap between the two squared distances.
    pub gap: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid rank table: {0}")]
    InvalidTable(String),

    #[error("malformed construction choice: {0}")]
    MalformedChoice(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("distance ties within tolerance: {}", format_collisions(.0))]
    Ties(Vec<Collision>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("corrupt record at line {line}: {message}")]
    CorruptRecord { line: usize, message: String },

    #[error("store {path} was written by a different campaign: {message}")]
    StoreMismatch { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_collisions(c: &[Collision]) -> String {
    c.iter()
        .map(|c| {
            format!(
                "({},{})~({},{}) gap {:.3e}",
                c.first.0, c.first.1, c.second.0, c.second.1, c.gap
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
