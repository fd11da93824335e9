use std::io;
use std::path::{Path, PathBuf};

use modmvnf_core::encoding::EncodingError;
use modmvnf_core::generator::GeneratorError;
use modmvnf_core::model::ModelError;
use modmvnf_core::problem::SolveError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

impl BenchError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        BenchError::Io { path: path.to_path_buf(), source }
    }

    /// Process exit code: 2 invalid input, 3 I/O, 4 no feasible solution,
    /// 5 search space too large.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Io { .. } | BenchError::Model(ModelError::Io(_)) => 3,
            BenchError::Solve(SolveError::NoFeasibleSolution)
            | BenchError::Solve(SolveError::Encoding(EncodingError::InitExhausted { .. })) => 4,
            BenchError::Solve(SolveError::SearchSpaceTooLarge { .. }) => 5,
            _ => 2,
        }
    }
}
