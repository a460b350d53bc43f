use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] masm_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if is_nonconvergence(e) => EXIT_NOT_CONVERGED,
            _ => EXIT_FAILURE,
        }
    }
}

fn is_nonconvergence(e: &masm_core::Error) -> bool {
    use masm_core::Error as E;
    match e {
        E::NewtonNotConverged { .. } | E::LineSearch { .. } | E::GmresStagnation { .. } => true,
        E::PowerIteration { source, .. } => is_nonconvergence(source),
        _ => false,
    }
}
