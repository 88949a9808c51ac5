//! Shared error taxonomy.

use thiserror::Error;

/// Errors raised across the library.
///
/// The taxonomy is deliberately small. `Range` marks inputs outside a
/// documented guard, `Domain` marks inputs violating a mathematical
/// precondition, `Resource` marks aborted searches or exceeded work
/// guards, `Overflow` marks fixed-width arithmetic that would wrap, and
/// `Invariant` marks a violated internal invariant (always a bug, never
/// silently swallowed).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("i128 overflow in {0}")]
    Overflow(&'static str),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
