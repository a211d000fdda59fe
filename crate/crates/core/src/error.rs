// Copyright 2026 The relplace Authors.
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("state space has {size} states, above the configured cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },
    #[error("value iteration did not converge after {iterations} iterations (last sup-norm diff {last_diff})")]
    NonConvergence { iterations: usize, last_diff: f64, trace: Vec<f64> },
    #[error("resource ledger inconsistency: {0}")]
    LedgerInconsistency(String),
    #[error("instance too large for exhaustive search: {0}")]
    EnumerationBound(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_index(what: &'static str, index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, len })
    }
}
