use std::fmt::Display;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad arguments, unreadable or malformed input.
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Validation(_) => 2,
            AppError::Computation(_) => 1,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;

pub fn invalid(msg: impl Display) -> AppError {
    AppError::Validation(msg.to_string())
}

/// Attaches context to core errors raised while computing.
pub trait Context<T> {
    fn computing(self, what: &str) -> AppResult<T>;
    fn validating(self, what: &str) -> AppResult<T>;
}

impl<T, E: Display> Context<T> for Result<T, E> {
    fn computing(self, what: &str) -> AppResult<T> {
        self.map_err(|e| AppError::Computation(format!("{what}: {e}")))
    }

    fn validating(self, what: &str) -> AppResult<T> {
        self.map_err(|e| AppError::Validation(format!("{what}: {e}")))
    }
}
