//! Dataset container, CSV I/O, and the preparation operations applied before
//! model fitting: merge/rename, profiling, cleaning, scaling, Yeo-Johnson
//! power transform, z-score outlier removal, and weighted train/validation
//! splits.

mod clean;
mod pipeline;
mod power;
mod profile;
mod scale;
mod split;

pub use clean::{clean, correlated_columns, zscore_filter, CleanOp, RowPredicate};
pub use pipeline::{
    default_ops, prepare, FittedTransforms, PrepConfig, PrepOutput, ZScoreStep, COLLINEAR_THRESHOLD,
};
pub use power::{yeo_johnson, yeo_johnson_inverse, yeo_johnson_log_likelihood, PowerTransform};
pub use profile::{
    correlation, profile, skewness, ColumnProfile, CorrelationAlert, ProfileReport, SkewAlert,
    DEFAULT_CORR_THRESHOLD, DEFAULT_SKEW_THRESHOLD,
};
pub use scale::StandardScaler;
pub use split::{decile_weights, split_and_weight, Weighting};

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Rectangular table of finite `f64` cells with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    data: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = columns.len();
        let mut data = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} cells, expected {width}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_flat(columns, data)
    }

    /// Row-major cells; `data.len()` must be a multiple of the column count.
    pub fn from_flat(columns: Vec<String>, data: Vec<f64>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Csv(format!("duplicate column `{c}`")));
            }
        }
        if columns.is_empty() && !data.is_empty() {
            return Err(Error::DimensionMismatch("cells without columns".into()));
        }
        if !columns.is_empty() && !data.len().is_multiple_of(columns.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} cells do not fill {} columns",
                data.len(),
                columns.len()
            )));
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            let w = columns.len();
            return Err(Error::Csv(format!(
                "non-finite value in row {}, column `{}`",
                k / w,
                columns[k % w]
            )));
        }
        Ok(Self {
            columns,
            data,
            weights: None,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        if self.columns.is_empty() {
            0
        } else {
            self.data.len() / self.columns.len()
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n_rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} rows",
                weights.len(),
                self.n_rows()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::DimensionMismatch(
                "weights must be finite and >= 0".into(),
            ));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn without_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c == name)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_cols();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.n_cols().max(1))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n_cols() + col]
    }

    pub fn column_at(&self, col: usize) -> Vec<f64> {
        self.rows().map(|r| r[col]).collect()
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self.column_at(self.column_index(name)?))
    }

    /// Overwrite column `col` with `values` (one per row).
    pub fn set_column_at(&mut self, col: usize, values: &[f64]) -> Result<()> {
        if values.len() != self.n_rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} rows",
                values.len(),
                self.n_rows()
            )));
        }
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::Csv(format!(
                "non-finite value {bad} in `{}`",
                self.columns[col]
            )));
        }
        let w = self.n_cols();
        for (i, v) in values.iter().enumerate() {
            self.data[i * w + col] = *v;
        }
        Ok(())
    }

    /// Rows at `indices`, in that order, carrying weights along.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.n_cols());
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            columns: self.columns.clone(),
            data,
            weights: self
                .weights
                .as_ref()
                .map(|w| indices.iter().map(|&i| w[i]).collect()),
        }
    }

    pub fn filter_rows(&self, mut keep: impl FnMut(usize, &[f64]) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.n_rows())
            .filter(|&i| keep(i, self.row(i)))
            .collect();
        self.select_rows(&idx)
    }

    pub fn select_columns(&self, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>>>()?;
        let mut data = Vec::with_capacity(self.n_rows() * idx.len());
        for r in self.rows() {
            data.extend(idx.iter().map(|&j| r[j]));
        }
        let mut out = Self::from_flat(names.iter().map(|s| s.to_string()).collect(), data)?;
        out.weights = self.weights.clone();
        Ok(out)
    }

    pub fn drop_columns(&self, names: &[&str]) -> Result<Self> {
        for n in names {
            self.column_index(n)?;
        }
        let keep: Vec<&str> = self
            .columns
            .iter()
            .map(String::as_str)
            .filter(|c| !names.contains(c))
            .collect();
        self.select_columns(&keep)
    }

    pub fn rename(&mut self, renames: &BTreeMap<String, String>) -> Result<()> {
        let mut cols = self.columns.clone();
        for c in cols.iter_mut() {
            if let Some(new) = renames.get(c) {
                *c = new.clone();
            }
        }
        let mut seen = HashSet::new();
        if let Some(dup) = cols.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(Error::Csv(format!(
                "rename produces duplicate column `{dup}`"
            )));
        }
        self.columns = cols;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut data = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
            for (j, cell) in rec.iter().enumerate() {
                let v: f64 = cell.parse().map_err(|_| {
                    Error::Csv(format!(
                        "row {}, column `{}`: cannot parse `{cell}`",
                        i + 1,
                        columns[j]
                    ))
                })?;
                data.push(v);
            }
        }
        Self::from_flat(columns, data)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for r in self.rows() {
            line.clear();
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&v.to_string());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(f))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(f);
        self.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }
}

/// Renames applied to the raw first-model output so every sheet shares the
/// `infected`/`recovered` vocabulary.
pub fn default_renames() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("sick".to_string(), "infected".to_string()),
        ("immune".to_string(), "recovered".to_string()),
    ])
}

/// Apply `renames` to every sheet, then concatenate rows in sheet order.
/// Column order follows the first sheet; later sheets are reordered to match.
pub fn merge_and_rename(sheets: &[Dataset], renames: &BTreeMap<String, String>) -> Result<Dataset> {
    let mut renamed = Vec::with_capacity(sheets.len());
    for s in sheets {
        let mut s = s.clone();
        s.rename(renames)?;
        renamed.push(s);
    }
    let Some(first) = renamed.first() else {
        return Err(Error::TooFewRows { needed: 1, got: 0 });
    };
    let cols: Vec<&str> = first.columns.iter().map(String::as_str).collect();
    let want: HashSet<&str> = cols.iter().copied().collect();
    let mut data = Vec::new();
    let mut weights: Option<Vec<f64>> = first.weights.as_ref().map(|_| Vec::new());
    for s in &renamed {
        let have: HashSet<&str> = s.columns.iter().map(String::as_str).collect();
        if have != want {
            let mut missing: Vec<String> = want.difference(&have).map(|s| s.to_string()).collect();
            let mut unexpected: Vec<String> =
                have.difference(&want).map(|s| s.to_string()).collect();
            missing.sort();
            unexpected.sort();
            return Err(Error::SchemaMismatch {
                missing,
                unexpected,
            });
        }
        let aligned = s.select_columns(&cols)?;
        data.extend_from_slice(&aligned.data);
        match (&mut weights, &s.weights) {
            (Some(w), Some(sw)) => w.extend_from_slice(sw),
            (Some(w), None) => w.extend(std::iter::repeat_n(1.0, s.n_rows())),
            _ => {}
        }
    }
    let mut out = Dataset::from_flat(first.columns.clone(), data)?;
    out.weights = weights;
    Ok(out)
}
