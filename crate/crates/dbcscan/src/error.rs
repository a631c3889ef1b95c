use std::path::PathBuf;
use thiserror::Error;

/// Errors surfaced by the library. Per-file parse trouble is *not* an error:
/// it is recorded on the `SourceUnit` or as a scan diagnostic so a corpus run
/// never aborts because of one bad file.
#[derive(Debug, Error)]
pub enum Error {
    #[error("catalog error at {path}:{line}: {message}")]
    Catalog {
        path: String,
        line: usize,
        message: String,
    },

    #[error("duplicate construct id `{id}` (seen again at {path}:{line})")]
    DuplicateConstruct {
        id: String,
        path: String,
        line: usize,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid record file {path}: {message}")]
    RecordFile { path: String, message: String },

    #[error("gini coefficient is undefined for an empty distribution")]
    EmptyDistribution,

    #[error("project id mismatch: `{left}` vs `{right}`")]
    ProjectMismatch { left: String, right: String },

    #[error("manifest error in {path}: {message}")]
    Manifest { path: String, message: String },

    #[error("git command failed for {repo}: {detail}")]
    Git { repo: String, detail: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
