//! Dataset ingestion, splitting and export.

mod export;
mod manifest;
mod parse;
mod split;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use export::{
    decode_pgm, decode_png, encode_image_bytes, read_counts_csv, read_image, read_pgm, read_png, write_image,
    ImageFormat,
};
pub use manifest::{DatasetManifest, ManifestRow, MANIFEST_HEADER};
pub use parse::{parse_fasta, parse_labeled_csv, parse_plain, CsvColumns};
pub use split::{split_dataset, DatasetSplit, Split, SplitConfig, SplitSizes, MIN_RECORDS, MIN_STRATUM};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot split dataset: {0}")]
    Split(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("image: {0}")]
    Image(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

impl DataError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DataError::Io { path: path.to_path_buf(), source }
    }

    /// Whether the error comes from malformed input rather than the
    /// environment.
    pub fn is_schema(&self) -> bool {
        matches!(
            self,
            DataError::Parse { .. } | DataError::MissingColumn(_) | DataError::Row { .. } | DataError::Csv(_)
        )
    }
}

/// File-name-safe form of a record id: anything outside `[A-Za-z0-9._-]`
/// becomes `_`.
pub fn sanitize_id(id: &str) -> String {
    let s: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') { c } else { '_' })
        .collect();
    if s.chars().all(|c| c == '.') {
        format!("_{s}")
    } else {
        s
    }
}
