use thiserror::Error;

/// Errors raised by window analyses.
///
/// Everything here is an *input* problem: a malformed file, an unknown vertex,
/// a path that is not what the caller claimed. Negative analysis outcomes
/// (no certificate, a violated inequality) are ordinary return values.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),

    #[error("not a directed path: missing edge {0} -> {1}")]
    NotAPath(String, String),

    #[error("path is not a geodesic: {0}")]
    NotGeodesic(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("rewrite system is not known to be confluent (limits hit: {limits_hit})")]
    NotConfluent { limits_hit: bool },

    #[error("incompatible windows: {0}")]
    IncompatibleWindows(String),

    #[error("digraph has no root")]
    NoRoot,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
