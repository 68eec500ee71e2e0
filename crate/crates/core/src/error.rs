use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed header: {0}")]
    Header(String),

    /// A cell that could not be parsed. `row` is the 1-based data row
    /// (the header is row 0).
    #[error("unparseable cell at row {row}, column '{column}': {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },

    #[error("single-class labels: {0}")]
    SingleClass(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("cleaning step '{step}' left unusable data: {message}")]
    Cleaning { step: &'static str, message: String },

    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("class {class} has {count} members, fewer than the {k} folds requested")]
    FoldConstruction { class: i8, count: usize, k: usize },

    #[error("invalid classifier specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("incomplete result store: {0}")]
    IncompleteStore(String),

    #[error("store directory {0} already exists")]
    Clobber(PathBuf),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
