use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numcore::Dataset;

/// Environment variable naming the default dataset directory.
pub const DATA_DIR_ENV: &str = "STAGEWISE_DATA_DIR";

/// File names tried, in order, when looking for the prostate data.
pub const PROSTATE_FILES: [&str; 3] = ["prostate.data", "prostate.csv", "prostate.tsv"];

/// Which rows of a file with a train-flag column to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Split {
    #[default]
    All,
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvOptions {
    pub response: String,
    /// Column holding `T`/`F` (or `true`/`false`, `1`/`0`) split labels.
    pub train_flag: Option<String>,
    pub split: Split,
    /// Further columns to ignore.
    pub exclude: Vec<String>,
}

impl CsvOptions {
    pub fn new(response: &str) -> Self {
        Self {
            response: response.to_string(),
            ..Self::default()
        }
    }
}

/// Reads a delimited file with a header row; every column other than the
/// response becomes a predictor.
pub fn load_csv(path: impl AsRef<Path>, response_column: &str) -> Result<Dataset> {
    load_csv_with(path, &CsvOptions::new(response_column))
}

/// Like [`load_csv`] with a train-flag split and excluded columns.
///
/// The delimiter is a tab when the header line contains one, a comma
/// otherwise. A column with an empty header name is treated as row labels
/// and skipped.
pub fn load_csv_with(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_csv(&text, opts)
}

pub fn parse_csv(text: &str, opts: &CsvOptions) -> Result<Dataset> {
    let header_line = text.lines().next().unwrap_or("");
    let delimiter = if header_line.contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            column: String::new(),
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();

    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let response_idx = find(&opts.response)?;
    let flag_idx = opts.train_flag.as_deref().map(find).transpose()?;
    if opts.split != Split::All && flag_idx.is_none() {
        return Err(Error::InvalidConfig("a train/test split needs a train-flag column".into()));
    }
    for name in &opts.exclude {
        find(name)?;
    }
    let predictors: Vec<usize> = (0..headers.len())
        .filter(|&j| j != response_idx && Some(j) != flag_idx)
        .filter(|&j| !headers[j].is_empty() && !opts.exclude.contains(&headers[j]))
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            column: String::new(),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if let Some(fi) = flag_idx {
            let is_train = parse_flag(&record[fi]).ok_or_else(|| Error::Parse {
                line,
                column: headers[fi].clone(),
                message: format!("`{}` is not a train flag", &record[fi]),
            })?;
            match opts.split {
                Split::Train if !is_train => continue,
                Split::Test if is_train => continue,
                _ => {}
            }
        }
        let cell = |j: usize| -> Result<f64> {
            record[j].parse::<f64>().map_err(|_| Error::Parse {
                line,
                column: headers[j].clone(),
                message: format!("`{}` is not numeric", &record[j]),
            })
        };
        y.push(cell(response_idx)?);
        rows.push(predictors.iter().map(|&j| cell(j)).collect::<Result<_>>()?);
    }

    let n = rows.len();
    let p = predictors.len();
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let names = predictors.iter().map(|&j| headers[j].clone()).collect();
    Dataset::new(x, DVector::from_vec(y), names)
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "t" | "true" | "1" | "yes" => Some(true),
        "f" | "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// Directory from `STAGEWISE_DATA_DIR`, if set.
pub fn default_data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}

/// Locates the prostate file in `dir`, or in `STAGEWISE_DATA_DIR` when `dir` is `None`.
pub fn find_prostate(dir: Option<&Path>) -> Result<PathBuf> {
    let dir = match dir {
        Some(d) => d.to_path_buf(),
        None => default_data_dir().ok_or_else(|| {
            Error::Io(format!("prostate data not found: set {DATA_DIR_ENV} or pass a directory"))
        })?,
    };
    if dir.is_file() {
        return Ok(dir);
    }
    PROSTATE_FILES
        .iter()
        .map(|f| dir.join(f))
        .find(|p| p.is_file())
        .ok_or_else(|| {
            Error::Io(format!(
                "none of {PROSTATE_FILES:?} found in {}",
                dir.display()
            ))
        })
}

/// Loads the training split (67 rows, 8 predictors, response `lpsa`) of the
/// canonical 97-row prostate cancer file.
pub fn load_prostate(path: impl AsRef<Path>) -> Result<Dataset> {
    let opts = CsvOptions {
        response: "lpsa".into(),
        train_flag: Some("train".into()),
        split: Split::Train,
        exclude: Vec::new(),
    };
    load_csv_with(path, &opts)
}
