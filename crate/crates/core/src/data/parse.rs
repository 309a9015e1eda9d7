use std::collections::HashSet;
use std::io::{BufRead, Read};

use super::DataError;
use crate::record::SequenceRecord;

/// Reads FASTA records. Headers start with `>`; the id is the first
/// whitespace-delimited token. Wrapped sequence lines are concatenated and
/// blank lines are ignored.
pub fn parse_fasta<R: BufRead>(reader: R) -> Result<Vec<SequenceRecord>, DataError> {
    let mut records: Vec<SequenceRecord> = Vec::new();
    let mut seen = HashSet::new();
    let mut header_line = 0usize;

    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            close_record(&records, header_line)?;
            let id = header.split_whitespace().next().unwrap_or("");
            if id.is_empty() {
                return Err(DataError::Parse { line: line_no, message: "header has no id".into() });
            }
            if !seen.insert(id.to_string()) {
                return Err(DataError::Parse {
                    line: line_no,
                    message: format!("duplicate record id {id:?}"),
                });
            }
            records.push(SequenceRecord::new(id, String::new()));
            header_line = line_no;
        } else {
            let Some(current) = records.last_mut() else {
                return Err(DataError::Parse {
                    line: line_no,
                    message: "sequence data before the first header".into(),
                });
            };
            current.residues.extend(line.chars().filter(|c| !c.is_whitespace()));
        }
    }
    close_record(&records, header_line)?;
    Ok(records)
}

fn close_record(records: &[SequenceRecord], header_line: usize) -> Result<(), DataError> {
    match records.last() {
        Some(r) if r.residues.is_empty() => Err(DataError::Parse {
            line: header_line,
            message: format!("record {:?} has an empty sequence", r.id),
        }),
        _ => Ok(()),
    }
}

/// Reads one sequence per non-blank line, naming them `seq1`, `seq2`, ...
pub fn parse_plain<R: BufRead>(reader: R) -> Result<Vec<SequenceRecord>, DataError> {
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() {
            records.push(SequenceRecord::new(format!("seq{}", records.len() + 1), line));
        }
    }
    Ok(records)
}

/// Column names for labeled CSV ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvColumns {
    pub sequence: String,
    pub label: String,
    /// Id column. When `None`, a column literally named `id` (any case) is
    /// used if present, otherwise the zero-based data row index.
    pub id: Option<String>,
}

impl CsvColumns {
    pub fn new(sequence: impl Into<String>, label: impl Into<String>) -> Self {
        Self { sequence: sequence.into(), label: label.into(), id: None }
    }
}

/// Reads labeled sequences from CSV. Labels are trimmed and lowercased; an
/// empty label cell yields an unlabeled record.
pub fn parse_labeled_csv<R: Read>(reader: R, columns: &CsvColumns) -> Result<Vec<SequenceRecord>, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let seq_col = find(&columns.sequence).ok_or_else(|| DataError::MissingColumn(columns.sequence.clone()))?;
    let label_col = find(&columns.label).ok_or_else(|| DataError::MissingColumn(columns.label.clone()))?;
    let id_col = match &columns.id {
        Some(name) => Some(find(name).ok_or_else(|| DataError::MissingColumn(name.clone()))?),
        None => headers.iter().position(|h| h.eq_ignore_ascii_case("id")),
    };

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (index, row) in rdr.records().enumerate() {
        let row = row?;
        // header is line 1
        let row_no = index + 2;
        let residues = row.get(seq_col).unwrap_or("");
        if residues.is_empty() {
            return Err(DataError::Row { row: row_no, message: "empty sequence cell".into() });
        }
        let id = match id_col {
            Some(c) => row.get(c).unwrap_or("").to_string(),
            None => index.to_string(),
        };
        if id.is_empty() {
            return Err(DataError::Row { row: row_no, message: "empty id cell".into() });
        }
        if !seen.insert(id.clone()) {
            return Err(DataError::Row { row: row_no, message: format!("duplicate id {id:?}") });
        }
        let label = row.get(label_col).unwrap_or("").to_lowercase();
        records.push(SequenceRecord {
            id,
            residues: residues.to_string(),
            label: (!label.is_empty()).then_some(label),
        });
    }
    Ok(records)
}
