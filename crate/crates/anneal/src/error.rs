use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] anneal_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{}: invalid metadata: {source}", path.display())]
    Meta {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{} already exists; pass -overwrite to replace it", .0.display())]
    Exists(PathBuf),
    #[error("{} is not a complete run (no COMPLETE marker)", .0.display())]
    Incomplete(PathBuf),
    #[error("unsupported run format version {found} (reader supports {supported})")]
    Version { found: String, supported: String },
    #[error("{}: digest mismatch", .0.display())]
    Digest(PathBuf),
    #[error("{}: expected {expected} bytes, found {found}", path.display())]
    Size { path: PathBuf, expected: u64, found: u64 },
    #[error("{}: bad eigenvector file: {message}", path.display())]
    Eigvec { path: PathBuf, message: String },
    #[error("run has no {0}")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait IoContext<T> {
    fn at(self, path: impl Into<PathBuf>) -> Result<T>;
}

impl<T> IoContext<T> for std::io::Result<T> {
    fn at(self, path: impl Into<PathBuf>) -> Result<T> {
        self.map_err(|source| Error::Io { path: path.into(), source })
    }
}
