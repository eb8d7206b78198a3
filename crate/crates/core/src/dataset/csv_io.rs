use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dataset, RawDataset};
use crate::error::{Error, Result};

/// Which column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelColumn {
    #[default]
    Last,
    Name(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvOptions {
    #[serde(default = "default_true")]
    pub has_header: bool,
    #[serde(default)]
    pub label_column: LabelColumn,
    /// Header names of text columns to ignore, such as `provenance`.
    #[serde(default)]
    pub skip_columns: Vec<String>,
}

fn default_true() -> bool {
    true
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            has_header: true,
            label_column: LabelColumn::Last,
            skip_columns: Vec::new(),
        }
    }
}

/// Read a comma-separated file. Every non-label cell must parse as a finite
/// real number; empty cells count as missing values and are rejected.
/// Row numbers in errors are 1-based file lines.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<RawDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Csv {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    };

    let mut records = reader.records();
    let mut line = 0usize;
    let header: Option<Vec<String>> = if opts.has_header {
        match records.next() {
            Some(r) => {
                line += 1;
                Some(r.map_err(csv_err)?.iter().map(str::to_string).collect())
            }
            None => return Err(Error::EmptyDataset),
        }
    } else {
        None
    };

    let mut width = header.as_ref().map(Vec::len);
    let skip: Vec<usize> = header
        .iter()
        .flatten()
        .enumerate()
        .filter(|(_, n)| opts.skip_columns.contains(n))
        .map(|(c, _)| c)
        .collect();
    let mut label_idx: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    let mut labels = Vec::new();

    for rec in records {
        line += 1;
        let rec = rec.map_err(csv_err)?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        let w = *width.get_or_insert(rec.len());
        if rec.len() != w {
            return Err(Error::RaggedRow {
                row: line,
                expected: w,
                found: rec.len(),
            });
        }
        let li = match label_idx {
            Some(li) => li,
            None => {
                let li = resolve_label(&opts.label_column, header.as_deref(), w, &skip)?;
                names = match &header {
                    Some(h) => h.clone(),
                    None => (0..w).map(|c| format!("f{}", c + 1)).collect(),
                };
                *label_idx.insert(li)
            }
        };

        let mut row = Vec::with_capacity(w - 1);
        for (c, cell) in rec.iter().enumerate() {
            if c == li || skip.contains(&c) {
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(Error::NonNumeric {
                        row: line,
                        column: names[c].clone(),
                        value: cell.to_string(),
                    })
                }
            }
        }
        let label = rec.get(li).unwrap_or_default();
        if label.is_empty() {
            return Err(Error::NonNumeric {
                row: line,
                column: names[li].clone(),
                value: String::new(),
            });
        }
        rows.push(row);
        labels.push(label.to_string());
    }

    let Some(li) = label_idx else {
        return Err(Error::EmptyDataset);
    };
    if names.len() < 2 + skip.len() {
        return Err(Error::InvalidDataset(
            "need at least one feature column besides the label".into(),
        ));
    }
    let label_name = if header.is_some() {
        names[li].clone()
    } else {
        "class".to_string()
    };
    let feature_names = names
        .into_iter()
        .enumerate()
        .filter(|(c, _)| *c != li && !skip.contains(c))
        .map(|(_, n)| n)
        .collect();
    RawDataset::new(rows, labels, feature_names, label_name)
}

fn resolve_label(
    col: &LabelColumn,
    header: Option<&[String]>,
    width: usize,
    skip: &[usize],
) -> Result<usize> {
    match col {
        LabelColumn::Last => (0..width)
            .rev()
            .find(|c| !skip.contains(c))
            .ok_or_else(|| Error::MissingLabelColumn("last".into())),
        LabelColumn::Index(i) if *i < width => Ok(*i),
        LabelColumn::Index(i) => Err(Error::MissingLabelColumn(i.to_string())),
        LabelColumn::Name(n) => header
            .and_then(|h| h.iter().position(|c| c == n))
            .ok_or_else(|| Error::MissingLabelColumn(n.clone())),
    }
}

/// Write `ds` as CSV with a header row. Labels are written with their original
/// class names. When `provenance` is given it must have one entry per row and
/// becomes a trailing `provenance` column (empty for original rows).
pub fn write_csv<W: Write>(
    ds: &Dataset,
    out: W,
    provenance: Option<&[Option<String>]>,
) -> Result<()> {
    if let Some(p) = provenance {
        if p.len() != ds.n_instances() {
            return Err(Error::DimensionMismatch {
                expected: ds.n_instances(),
                found: p.len(),
            });
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::Csv {
        path: "<output>".into(),
        message: e.to_string(),
    };

    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push(ds.label_name());
    if provenance.is_some() {
        header.push("provenance");
    }
    w.write_record(&header).map_err(to_err)?;

    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for (i, row) in ds.rows().enumerate() {
        record.clear();
        record.extend(row.iter().map(|v| v.to_string()));
        record.push(ds.class_names().name(ds.label(i)).to_string());
        if let Some(p) = provenance {
            record.push(p[i].clone().unwrap_or_default());
        }
        w.write_record(&record).map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(())
}
