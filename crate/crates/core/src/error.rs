use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// A search gave up. `best` holds the best solution members seen so
    /// far, which are not known to be optimal.
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: String, limit: u64, best: Vec<usize> },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("undecidable at precision {bits} bits: {what}")]
    Undecidable { what: String, bits: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::Budget { what: what.into(), limit, best: Vec::new() }
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
