//! File formats, verification suites and the `robloc` command line.

pub mod checks;
pub mod cli;
pub mod commands;
pub mod io;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error in {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => EXIT_BUDGET,
            Error::Parse(_) | Error::Invalid(_) | Error::Io(_) => EXIT_INVALID,
        }
    }
}
