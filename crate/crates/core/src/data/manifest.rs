use std::fs;
use std::path::{Path, PathBuf};

use super::export::read_image;
use super::split::{DatasetSplit, Split, SplitSizes};
use super::DataError;
use crate::record::SequenceRecord;

pub const MANIFEST_HEADER: &str = "image_path\tlabel\tsplit\tsequence_id";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    /// Relative to the manifest's directory unless absolute.
    pub image_path: String,
    pub label: Option<String>,
    pub split: Split,
    pub sequence_id: String,
}

/// Tab-separated index of exported images. The first line is `# seed=<n>`,
/// then the [`MANIFEST_HEADER`] row, then one row per record, e.g.
/// `images/0.pgm`, `very active`, `train`, `0` joined by tabs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub seed: u64,
    pub rows: Vec<ManifestRow>,
}

impl DatasetManifest {
    /// Binds records to their split, naming each image with `path_for`.
    pub fn from_split(
        records: &[SequenceRecord],
        split: &DatasetSplit,
        mut path_for: impl FnMut(&SequenceRecord) -> String,
    ) -> Self {
        let rows = records
            .iter()
            .zip(&split.assignments)
            .map(|(r, &s)| ManifestRow {
                image_path: path_for(r),
                label: r.label.clone(),
                split: s,
                sequence_id: r.id.clone(),
            })
            .collect();
        Self { seed: split.seed, rows }
    }

    pub fn sizes(&self) -> SplitSizes {
        let mut s = SplitSizes::default();
        for row in &self.rows {
            match row.split {
                Split::Train => s.train += 1,
                Split::Val => s.val += 1,
                Split::Test => s.test += 1,
            }
        }
        s
    }

    pub fn to_tsv(&self) -> Result<String, DataError> {
        let mut out = format!("# seed={}\n{MANIFEST_HEADER}\n", self.seed);
        for row in &self.rows {
            let label = row.label.as_deref().unwrap_or("");
            for field in [row.image_path.as_str(), label, row.sequence_id.as_str()] {
                if field.contains(['\t', '\n', '\r']) {
                    return Err(DataError::Manifest(format!("field {field:?} contains a tab or newline")));
                }
            }
            out.push_str(&format!("{}\t{}\t{}\t{}\n", row.image_path, label, row.split, row.sequence_id));
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, DataError> {
        let mut lines = text.lines();
        let seed = lines
            .next()
            .and_then(|l| l.strip_prefix("# seed="))
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| DataError::Manifest("first line must be `# seed=<n>`".into()))?;
        if lines.next() != Some(MANIFEST_HEADER) {
            return Err(DataError::Manifest(format!("second line must be the header {MANIFEST_HEADER:?}")));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [path, label, split, id] = fields[..] else {
                return Err(DataError::Manifest(format!("line {}: expected 4 fields", i + 3)));
            };
            rows.push(ManifestRow {
                image_path: path.to_string(),
                label: (!label.is_empty()).then(|| label.to_string()),
                split: split.parse().map_err(|e| DataError::Manifest(format!("line {}: {e}", i + 3)))?,
                sequence_id: id.to_string(),
            });
        }
        Ok(Self { seed, rows })
    }

    pub fn write(&self, path: &Path) -> Result<(), DataError> {
        let text = self.to_tsv()?;
        fs::write(path, text).map_err(|e| DataError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn resolve(&self, base: &Path, row: &ManifestRow) -> PathBuf {
        base.join(&row.image_path)
    }

    /// Checks that every row's image exists and decodes to a `side`-square
    /// image.
    pub fn verify_exports(&self, base: &Path, side: usize) -> Result<(), DataError> {
        for row in &self.rows {
            let path = self.resolve(base, row);
            let img = read_image(&path)?;
            if img.side() != side {
                return Err(DataError::Manifest(format!(
                    "{} is {}x{}, expected {side}x{side}",
                    path.display(),
                    img.side(),
                    img.side()
                )));
            }
        }
        Ok(())
    }
}
