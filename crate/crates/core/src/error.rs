use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate eye geometry: {0}")]
    DegenerateGeometry(String),

    #[error("implausible geometry: scale factor {scale} outside [{min}, {max}]")]
    ImplausibleGeometry { scale: f64, min: f64, max: f64 },

    #[error("cannot partition {width}x{height} image into {block_size}px blocks")]
    Partition {
        width: usize,
        height: usize,
        block_size: usize,
    },

    #[error("block of {width}x{height} is smaller than the required {min}x{min}")]
    BlockTooSmall { width: usize, height: usize, min: usize },

    #[error("filter frequency {f_max} cycles/px exceeds the Nyquist limit 0.5")]
    Aliasing { f_max: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Internal,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) => ErrorKind::Config,
            Error::Io { .. }
            | Error::Format { .. }
            | Error::Decode { .. }
            | Error::InvalidImage(_)
            | Error::DegenerateGeometry(_)
            | Error::ImplausibleGeometry { .. }
            | Error::DegenerateTraining(_) => ErrorKind::Data,
            Error::Context { source, .. } => source.kind(),
            _ => ErrorKind::Internal,
        }
    }
}

/// Attach context to the error side of a result.
pub trait ResultExt<T> {
    fn context<C: Into<String>>(self, context: impl FnOnce() -> C) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context<C: Into<String>>(self, context: impl FnOnce() -> C) -> Result<T> {
        self.map_err(|e| e.context(context()))
    }
}
