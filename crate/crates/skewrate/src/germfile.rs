//! Germ files: one `p = ...` line, one `q = ...` line, `#` comment lines.
//!
//! ```text
//! # Case 2 with gamma = 3, d = 1
//! p = z^2
//! q = z^3*w + z*w^2
//! ```

use skewrate_core::{GermError, SkewGerm};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GermFileError {
    #[error("line {line}: expected `p = <expr>` or `q = <expr>`")]
    BadLine { line: usize },
    #[error("line {line}: second assignment to {name}")]
    Duplicate { line: usize, name: char },
    #[error("missing assignment to {0}")]
    Missing(char),
    #[error(transparent)]
    Germ(#[from] GermError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermFile {
    pub p_line: String,
    pub q_line: String,
}

impl GermFile {
    pub fn parse(text: &str) -> Result<Self, GermFileError> {
        let mut p = None;
        let mut q = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (name, expr) = trimmed.split_once('=').ok_or(GermFileError::BadLine { line })?;
            let slot = match name.trim() {
                "p" => &mut p,
                "q" => &mut q,
                _ => return Err(GermFileError::BadLine { line }),
            };
            if slot.is_some() {
                let name = name.trim().chars().next().expect("matched p or q");
                return Err(GermFileError::Duplicate { line, name });
            }
            *slot = Some(expr.trim().to_string());
        }
        Ok(GermFile {
            p_line: p.ok_or(GermFileError::Missing('p'))?,
            q_line: q.ok_or(GermFileError::Missing('q'))?,
        })
    }

    pub fn germ(&self) -> Result<SkewGerm, GermFileError> {
        Ok(SkewGerm::parse(&self.p_line, &self.q_line)?)
    }

    pub fn render(germ: &SkewGerm) -> String {
        format!("p = {}\nq = {}\n", germ.p(), germ.q())
    }
}

/// Reads and validates a germ in one step.
pub fn parse_germ(text: &str) -> Result<SkewGerm, GermFileError> {
    GermFile::parse(text)?.germ()
}
