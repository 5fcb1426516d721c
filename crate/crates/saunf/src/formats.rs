//! Text formats: QDIMACS input for CNF specifications, a line-based
//! circuit/witness document format, and Skolem-vector documents.
//!
//! All formats are UTF-8 with LF newlines. Readers take complete
//! strings and report errors with 1-based line numbers; writers
//! produce canonical text — parsing a written document and writing it
//! again reproduces the bytes.

pub mod circuit_text;
pub mod qdimacs;
pub mod skolem_text;

use crate::circuit::{CircuitError, SpecError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Malformed input, reported at a 1-based line number.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl FormatError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, message: message.into() }
    }
}

/// The line with everything from the comment marker on removed.
pub(crate) fn strip_comment(line: &str, marker: char) -> &str {
    match line.find(marker) {
        Some(pos) => &line[..pos],
        None => line,
    }
}
