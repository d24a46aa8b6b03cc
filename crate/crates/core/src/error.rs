use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed play: {0}")]
    MalformedPlay(String),
    #[error("invalid play: {0}")]
    InvalidPlay(String),
    #[error("depth must be odd and at least 1, got {0}")]
    InvalidDepth(usize),
    #[error("cell ({row}, {col}) is off a {size}x{size} board")]
    OffBoard { row: usize, col: usize, size: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("position {value} does not fit in {width} bits")]
    BitWidth { value: usize, width: usize },
    #[error("refusing to evaluate: {what} is {actual}, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("shape {name} needs {cells} black moves but depth {depth} gives only {available}")]
    ShapeTooLarge {
        name: String,
        cells: usize,
        depth: usize,
        available: usize,
    },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects even or zero depths.
pub fn check_depth(d: usize) -> Result<()> {
    if d % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidDepth(d))
    }
}
