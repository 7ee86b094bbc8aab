use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {neurons} neurons per layer, {layers} layers (need n >= 1, L >= 2)")]
    InvalidShape { neurons: usize, layers: usize },

    #[error("cannot rewire {requested} connections in a graph with {edges} edges")]
    RewireOutOfRange { requested: usize, edges: usize },

    #[error("no legal replacement edge found after {attempts} attempts")]
    Saturated { attempts: usize },

    #[error("rewiring expects an unrewired baseline graph (got n_rewire={0})")]
    NotBaseline(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
