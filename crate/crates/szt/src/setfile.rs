//! Plain-text set files: one integer or `p/q` per line, `#` starts a
//! comment line, blank lines and duplicates are ignored.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use szt_core::{FiniteRealSet, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SetFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("set file contains no elements")]
    Empty,
}

pub fn parse_set(text: &str) -> Result<FiniteRealSet, SetFileError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Rational = line.parse().map_err(|e: szt_core::Error| SetFileError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        values.push(v);
    }
    FiniteRealSet::new(values).map_err(|_| SetFileError::Empty)
}

pub fn read_set(path: &Path) -> Result<FiniteRealSet, SetFileError> {
    let text = fs::read_to_string(path).map_err(|source| SetFileError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_set(&text)
}

/// Sorted elements, one per line.
pub fn render_set(set: &FiniteRealSet) -> String {
    let mut out = String::new();
    for x in set {
        out += &x.to_string();
        out.push('\n');
    }
    out
}

pub fn write_set(path: &Path, set: &FiniteRealSet) -> Result<(), SetFileError> {
    fs::write(path, render_set(set)).map_err(|source| SetFileError::Io {
        path: path.to_owned(),
        source,
    })
}
