use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("self-loop on vertex {0}")]
    SelfLoop(i64),

    #[error("edge ({0}, {1}) refers to unknown vertex {2}")]
    DanglingEdge(i64, i64, i64),

    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("scalar graph is disconnected ({0} components); reduce to the largest component first")]
    Disconnected(usize),

    #[error("adjacent vertices {0} and {1} share the value {2}; collapse equal neighbours first")]
    EqualAdjacentValues(i64, i64, f64),

    #[error("invalid merge tree: {0}")]
    InvalidTree(String),

    #[error("tree has {leaves} leaves, above the limit of {limit} for {engine}")]
    SizeGuard {
        engine: &'static str,
        leaves: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
