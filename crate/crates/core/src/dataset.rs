//! Tabular defect datasets: loading, validation, cleaning and scaling.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of rows a usable dataset may have.
pub const MIN_ROWS: usize = 10;

/// Binary class label. `Positive` is the faulty class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(i8)]
pub enum Label {
    Negative = -1,
    Positive = 1,
}

impl Label {
    pub fn from_sign(v: i8) -> Option<Self> {
        match v {
            1 => Some(Label::Positive),
            -1 => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn sign(self) -> i8 {
        self as i8
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    pub fn other(self) -> Self {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

/// A named feature matrix with binary labels.
///
/// Rows appended by oversampling carry a `synthetic` flag so that later
/// stages can prove no synthetic row reaches a test partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    features: Array2<f64>,
    feature_names: Vec<String>,
    labels: Vec<Label>,
    synthetic: Vec<bool>,
    provenance: String,
}

impl Dataset {
    /// Builds a dataset and checks every invariant: finite values, both
    /// classes present, at least [`MIN_ROWS`] rows and one feature, unique
    /// feature names.
    pub fn new(
        name: impl Into<String>,
        features: Array2<f64>,
        feature_names: Vec<String>,
        labels: Vec<Label>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let d = Self::unchecked(name, features, feature_names, labels, provenance)?;
        d.validate()?;
        Ok(d)
    }

    /// Shape and name checks only; used for freshly loaded data that may still
    /// hold missing values (NaN) and for small subsets.
    pub(crate) fn unchecked(
        name: impl Into<String>,
        features: Array2<f64>,
        feature_names: Vec<String>,
        labels: Vec<Label>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let (n, p) = features.dim();
        if labels.len() != n {
            return Err(Error::InvalidDataset(format!(
                "{} label(s) for {} row(s)",
                labels.len(),
                n
            )));
        }
        if feature_names.len() != p {
            return Err(Error::InvalidDataset(format!(
                "{} feature name(s) for {} column(s)",
                feature_names.len(),
                p
            )));
        }
        let mut seen = HashSet::new();
        for f in &feature_names {
            if !seen.insert(f.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate feature name '{f}'")));
            }
        }
        Ok(Self {
            name: name.into(),
            features,
            feature_names,
            synthetic: vec![false; labels.len()],
            labels,
            provenance: provenance.into(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let (n, p) = self.features.dim();
        if p == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if n < MIN_ROWS {
            return Err(Error::InvalidDataset(format!(
                "{n} row(s), at least {MIN_ROWS} required"
            )));
        }
        if let Some(((r, c), _)) = self.features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {r}, feature '{}'",
                self.feature_names[c]
            )));
        }
        let (pos, neg) = self.class_counts();
        if pos == 0 || neg == 0 {
            return Err(Error::SingleClass(format!(
                "dataset '{}' has {pos} positive and {neg} negative row(s)",
                self.name
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn synthetic(&self) -> &[bool] {
        &self.synthetic
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    /// `(positives, negatives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|l| l.is_positive()).count();
        (pos, self.labels.len() - pos)
    }

    /// The less frequent label; ties resolve to the faulty class.
    pub fn minority_label(&self) -> Label {
        let (pos, neg) = self.class_counts();
        if pos <= neg {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn positive_fraction(&self) -> f64 {
        self.class_counts().0 as f64 / self.n_rows() as f64
    }

    /// Rows in the given order; duplicates allowed.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            features: self.features.select(Axis(0), rows),
            feature_names: self.feature_names.clone(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            synthetic: rows.iter().map(|&r| self.synthetic[r]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn renamed(&self, name: &str) -> Dataset {
        Dataset {
            name: name.to_string(),
            ..self.clone()
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            features: self.features.select(Axis(1), cols),
            feature_names: cols.iter().map(|&c| self.feature_names[c].clone()).collect(),
            labels: self.labels.clone(),
            synthetic: self.synthetic.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// Appends rows flagged as synthetic, all carrying `label`.
    pub(crate) fn with_synthetic_rows(&self, rows: &Array2<f64>, label: Label) -> Dataset {
        let mut out = self.clone();
        if rows.nrows() == 0 {
            return out;
        }
        out.features = ndarray::concatenate(Axis(0), &[self.features.view(), rows.view()])
            .expect("synthetic rows share the feature width");
        out.labels.extend(std::iter::repeat_n(label, rows.nrows()));
        out.synthetic.extend(std::iter::repeat_n(true, rows.nrows()));
        out
    }
}

/// What [`clean_dataset`] changed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub rows_dropped_missing: usize,
    pub duplicate_rows_found: usize,
    pub duplicates_removed: usize,
    pub constant_features_removed: Vec<String>,
    pub linear_combination_features_removed: Vec<String>,
}

impl CleaningReport {
    pub fn is_noop(&self) -> bool {
        self.rows_dropped_missing == 0
            && self.duplicates_removed == 0
            && self.constant_features_removed.is_empty()
            && self.linear_combination_features_removed.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleaningPolicy {
    pub drop_missing_rows: bool,
    pub dedup: bool,
    pub lincomb_tol: f64,
}

impl Default for CleaningPolicy {
    fn default() -> Self {
        Self {
            drop_missing_rows: true,
            dedup: false,
            lincomb_tol: 1e-8,
        }
    }
}

/// Whether a raw CSV cell denotes a missing value.
fn is_missing_marker(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// Reads a defect dataset from a CSV file. See [`parse_csv_dataset`].
pub fn load_csv_dataset(path: &Path, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let mut d = parse_csv_dataset(&text, label_column, positive_label)?;
    d.name = name;
    d.provenance = format!("csv:{}", path.display());
    Ok(d)
}

/// Parses comma-separated text with a header row. Rows whose label equals
/// `positive_label` become [`Label::Positive`], every other row
/// [`Label::Negative`]. Missing feature cells (`?` or empty) are stored as
/// NaN and must be dealt with by [`clean_dataset`].
pub fn parse_csv_dataset(text: &str, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Header(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(Error::Header("empty header row".into()));
    }
    let mut seen = HashSet::new();
    for h in &headers {
        if h.is_empty() {
            return Err(Error::Header("blank column name".into()));
        }
        if !seen.insert(h.as_str()) {
            return Err(Error::Header(format!("duplicate column name '{h}'")));
        }
    }
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Header(format!("label column '{label_column}' not found")))?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if feature_names.is_empty() {
        return Err(Error::Header("no feature columns besides the label".into()));
    }

    let p = feature_names.len();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut raw_labels = HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Cell {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(Error::Cell {
                row,
                column: String::new(),
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            if c == label_idx {
                if is_missing_marker(cell) {
                    return Err(Error::Cell {
                        row,
                        column: label_column.to_string(),
                        message: "missing label".into(),
                    });
                }
                raw_labels.insert(cell.to_string());
                labels.push(if cell == positive_label {
                    Label::Positive
                } else {
                    Label::Negative
                });
            } else if is_missing_marker(cell) {
                values.push(f64::NAN);
            } else {
                let v: f64 = cell.parse().map_err(|_| Error::Cell {
                    row,
                    column: headers[c].clone(),
                    message: format!("'{cell}' is not a number"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Cell {
                        row,
                        column: headers[c].clone(),
                        message: format!("'{cell}' is not finite"),
                    });
                }
                values.push(v);
            }
        }
    }
    if raw_labels.len() < 2 {
        return Err(Error::SingleClass(format!(
            "label column '{label_column}' has {} distinct value(s)",
            raw_labels.len()
        )));
    }
    let n = labels.len();
    let pos = labels.iter().filter(|l| l.is_positive()).count();
    if pos == 0 || pos == n {
        return Err(Error::SingleClass(format!(
            "positive label '{positive_label}' maps {pos} of {n} row(s)"
        )));
    }
    let features = Array2::from_shape_vec((n, p), values).expect("row width checked");
    Dataset::unchecked("dataset", features, feature_names, labels, "csv")
}

/// Applies the cleaning policy: missing rows, zero-variance features,
/// linearly dependent features, then exact duplicate rows (counted always,
/// removed only when `policy.dedup`). Cleaning only deletes rows and
/// columns; surviving cells keep their values.
pub fn clean_dataset(d: &Dataset, policy: &CleaningPolicy) -> Result<(Dataset, CleaningReport)> {
    if policy.lincomb_tol.is_nan() || policy.lincomb_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lincomb_tol must be positive, got {}",
            policy.lincomb_tol
        )));
    }
    let mut report = CleaningReport::default();
    let check = |d: &Dataset, step: &'static str| -> Result<()> {
        let (pos, neg) = d.class_counts();
        if d.n_rows() < MIN_ROWS || pos == 0 || neg == 0 {
            return Err(Error::Cleaning {
                step,
                message: format!("{} row(s) remain ({pos} positive, {neg} negative)", d.n_rows()),
            });
        }
        if d.n_features() == 0 {
            return Err(Error::Cleaning {
                step,
                message: "no feature columns remain".into(),
            });
        }
        Ok(())
    };

    // missing values
    let complete: Vec<usize> = (0..d.n_rows())
        .filter(|&r| d.features.row(r).iter().all(|v| v.is_finite()))
        .collect();
    let mut cur = if complete.len() < d.n_rows() {
        if !policy.drop_missing_rows {
            return Err(Error::Cleaning {
                step: "missing",
                message: format!(
                    "{} row(s) have missing values and drop_missing_rows is off",
                    d.n_rows() - complete.len()
                ),
            });
        }
        report.rows_dropped_missing = d.n_rows() - complete.len();
        d.select_rows(&complete)
    } else {
        d.clone()
    };
    check(&cur, "missing")?;

    // zero-variance features
    let keep: Vec<usize> = (0..cur.n_features())
        .filter(|&c| {
            let col = cur.features.column(c);
            let first = col[0];
            if col.iter().all(|&v| v == first) {
                report.constant_features_removed.push(cur.feature_names[c].clone());
                false
            } else {
                true
            }
        })
        .collect();
    if keep.len() < cur.n_features() {
        cur = cur.select_columns(&keep);
    }
    check(&cur, "constant_features")?;

    // linear combinations
    let keep = remove_linear_combinations(cur.features.view(), policy.lincomb_tol);
    if keep.len() < cur.n_features() {
        let kept: HashSet<usize> = keep.iter().copied().collect();
        report.linear_combination_features_removed = (0..cur.n_features())
            .filter(|c| !kept.contains(c))
            .map(|c| cur.feature_names[c].clone())
            .collect();
        cur = cur.select_columns(&keep);
    }
    check(&cur, "linear_combinations")?;

    // duplicates: identical features and label
    let mut first_seen: HashMap<(Vec<u64>, Label), usize> = HashMap::new();
    let mut unique = Vec::with_capacity(cur.n_rows());
    for r in 0..cur.n_rows() {
        let key: Vec<u64> = cur
            .features
            .row(r)
            .iter()
            // -0.0 and 0.0 are the same value
            .map(|v| if *v == 0.0 { 0u64 } else { v.to_bits() })
            .collect();
        if first_seen.insert((key, cur.labels[r]), r).is_none() {
            unique.push(r);
        }
    }
    report.duplicate_rows_found = cur.n_rows() - unique.len();
    if policy.dedup && report.duplicate_rows_found > 0 {
        report.duplicates_removed = report.duplicate_rows_found;
        cur = cur.select_rows(&unique);
    }
    check(&cur, "duplicates")?;

    cur.validate()?;
    Ok((cur, report))
}

/// Returns the indices of a maximal set of linearly independent columns.
///
/// Columns are visited left to right and orthogonalised against the columns
/// already kept (modified Gram-Schmidt with one re-orthogonalisation pass).
/// A column is redundant when the norm of its residual is at most
/// `tol * ||column||`, so earlier columns always win. All-zero columns are
/// redundant.
pub fn remove_linear_combinations(m: ArrayView2<'_, f64>, tol: f64) -> Vec<usize> {
    let mut basis: Vec<Array1<f64>> = Vec::new();
    let mut kept = Vec::new();
    for (j, col) in m.axis_iter(Axis(1)).enumerate() {
        let norm = col.dot(&col).sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut v = col.to_owned();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&v);
                v.scaled_add(-proj, q);
            }
        }
        let resid = v.dot(&v).sqrt();
        if resid > tol * norm {
            v /= resid;
            basis.push(v);
            kept.push(j);
        }
    }
    kept
}

/// Per-feature location and scale estimated on a training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    /// Population standard deviations; 1 where the training column is constant.
    pub stds: Vec<f64>,
}

impl ScalerParams {
    pub fn fit(x: ArrayView2<'_, f64>) -> Result<Self> {
        let n = x.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("cannot fit a scaler on zero rows".into()));
        }
        let mut means = Vec::with_capacity(x.ncols());
        let mut stds = Vec::with_capacity(x.ncols());
        for col in x.axis_iter(Axis(1)) {
            let mean = col.sum() / n as f64;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            let std = var.sqrt();
            means.push(mean);
            // a constant column can leave rounding noise in the variance
            stds.push(if std > 1e-12 * mean.abs() && std > 0.0 { std } else { 1.0 });
        }
        Ok(Self { means, stds })
    }

    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: x.ncols(),
            });
        }
        let mut out = x.to_owned();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (m, s) = (self.means[j], self.stds[j]);
            col.mapv_inplace(|v| (v - m) / s);
        }
        Ok(out)
    }
}

/// Fits a scaler on the training features and returns it together with the
/// standardised training matrix.
pub fn standardize(train: &Dataset) -> Result<(ScalerParams, Array2<f64>)> {
    let params = ScalerParams::fit(train.features())?;
    let x = params.transform(train.features())?;
    Ok((params, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn toy(features: Array2<f64>, labels: &[i8]) -> Dataset {
        let names = (0..features.ncols()).map(|i| format!("f{}", i + 1)).collect();
        let labels = labels.iter().map(|&l| Label::from_sign(l).unwrap()).collect();
        Dataset::unchecked("toy", features, names, labels, "test").unwrap()
    }

    fn alternating(n: usize) -> Vec<i8> {
        (0..n).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect()
    }

    #[test]
    fn parse_maps_labels_in_row_order() {
        let text = "a,b,label\n1,2,bug\n3,4,bug\n5,6,ok\n7,8,ok\n";
        let d = parse_csv_dataset(text, "label", "bug").unwrap();
        let signs: Vec<i8> = d.labels().iter().map(|l| l.sign()).collect();
        assert_eq!(signs, vec![1, 1, -1, -1]);
        assert_eq!(d.feature_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.features()[[2, 1]], 6.0);
    }

    #[test]
    fn parse_rejects_single_class() {
        let text = "a,label\n1,ok\n2,ok\n";
        assert!(matches!(
            parse_csv_dataset(text, "label", "bug"),
            Err(Error::SingleClass(_))
        ));
        // two raw values but the positive one never occurs
        let text = "a,label\n1,ok\n2,fine\n";
        assert!(matches!(
            parse_csv_dataset(text, "label", "bug"),
            Err(Error::SingleClass(_))
        ));
    }

    #[test]
    fn parse_reports_cell_location() {
        let text = "a,b,label\n1,2,bug\n3,x,ok\n";
        match parse_csv_dataset(text, "label", "bug") {
            Err(Error::Cell { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_header_errors() {
        assert!(matches!(
            parse_csv_dataset("a,a,label\n1,2,x\n", "label", "x"),
            Err(Error::Header(_))
        ));
        assert!(matches!(
            parse_csv_dataset("a,b\n1,2\n", "label", "x"),
            Err(Error::Header(_))
        ));
    }

    #[test]
    fn parse_missing_markers_become_nan() {
        let text = "a,b,label\n1,?,bug\n,4,ok\n";
        let d = parse_csv_dataset(text, "label", "bug").unwrap();
        assert!(d.features()[[0, 1]].is_nan());
        assert!(d.features()[[1, 0]].is_nan());
    }

    #[test]
    fn load_reports_missing_file() {
        let err = load_csv_dataset(Path::new("/nonexistent/x.csv"), "y", "1").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn lincomb_keeps_independent_identity() {
        let m = array![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0]
        ];
        assert_eq!(remove_linear_combinations(m.view(), 1e-8), vec![0, 1, 2]);
    }

    #[test]
    fn lincomb_drops_sum_column() {
        let a = [1.0, 2.0, 0.5, -1.0, 3.0, 4.0];
        let b = [0.3, -2.0, 1.0, 2.0, 0.0, 1.5];
        let m = Array2::from_shape_fn((6, 3), |(i, j)| match j {
            0 => a[i],
            1 => b[i],
            _ => a[i] + b[i],
        });
        assert_eq!(remove_linear_combinations(m.view(), 1e-8), vec![0, 1]);
    }

    #[test]
    fn clean_removes_constant_and_dependent_columns() {
        let n = 12;
        let f1: Vec<f64> = (0..n).map(|i| (i as f64).sin() * 3.0).collect();
        let f2: Vec<f64> = (0..n).map(|i| (i * i) as f64 / 7.0).collect();
        let x = Array2::from_shape_fn((n, 4), |(i, j)| match j {
            0 => f1[i],
            1 => f2[i],
            2 => f1[i] + f2[i],
            _ => 0.0,
        });
        let d = toy(x, &alternating(n));
        let (c, rep) = clean_dataset(&d, &CleaningPolicy::default()).unwrap();
        assert_eq!(rep.constant_features_removed, vec!["f4".to_string()]);
        assert_eq!(rep.linear_combination_features_removed, vec!["f3".to_string()]);
        assert_eq!(c.feature_names(), &["f1".to_string(), "f2".to_string()]);
    }

    #[test]
    fn clean_counts_but_keeps_duplicates_without_dedup() {
        let n = 12;
        let mut x = Array2::from_shape_fn((n, 2), |(i, j)| (i * 3 + j * 7) as f64 + (i as f64).cos());
        let row0 = x.row(0).to_owned();
        x.row_mut(5).assign(&row0);
        let mut labels = alternating(n);
        labels[5] = labels[0];
        let d = toy(x, &labels);
        let (c, rep) = clean_dataset(&d, &CleaningPolicy::default()).unwrap();
        assert_eq!(rep.duplicate_rows_found, 1);
        assert_eq!(rep.duplicates_removed, 0);
        assert_eq!(c.n_rows(), n);

        let policy = CleaningPolicy {
            dedup: true,
            ..Default::default()
        };
        let (c, rep) = clean_dataset(&d, &policy).unwrap();
        assert_eq!(rep.duplicates_removed, 1);
        assert_eq!(c.n_rows(), n - 1);
    }

    #[test]
    fn clean_drops_missing_rows_or_fails() {
        let n = 14;
        let mut x = Array2::from_shape_fn((n, 2), |(i, j)| (i as f64 + 1.0) * (j as f64 + 0.5) + (i % 4) as f64);
        x[[3, 1]] = f64::NAN;
        let d = toy(x, &alternating(n));
        let (c, rep) = clean_dataset(&d, &CleaningPolicy::default()).unwrap();
        assert_eq!(rep.rows_dropped_missing, 1);
        assert_eq!(c.n_rows(), n - 1);
        let keep = CleaningPolicy {
            drop_missing_rows: false,
            ..Default::default()
        };
        assert!(matches!(
            clean_dataset(&d, &keep),
            Err(Error::Cleaning { step: "missing", .. })
        ));
    }

    #[test]
    fn clean_names_the_step_that_emptied_the_data() {
        let n = 12;
        let mut x = Array2::from_shape_fn((n, 2), |(i, j)| (i + j) as f64 * 1.5 + (j as f64) * (i as f64).sin());
        for r in 0..4 {
            x[[r, 0]] = f64::NAN;
        }
        let d = toy(x, &alternating(n));
        assert!(matches!(
            clean_dataset(&d, &CleaningPolicy::default()),
            Err(Error::Cleaning { step: "missing", .. })
        ));
    }

    #[test]
    fn standardize_analytic_column() {
        let d = toy(
            array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]],
            &[1, -1, -1],
        );
        let (params, x) = standardize(&d).unwrap();
        let expect = [-1.224_744_871, 0.0, 1.224_744_871];
        for i in 0..3 {
            assert!((x[[i, 0]] - expect[i]).abs() < 1e-6);
            assert_eq!(x[[i, 1]], 0.0);
        }
        assert_eq!(params.stds[1], 1.0);
    }

    #[test]
    fn scaler_reuses_training_moments() {
        let train = array![[0.0], [2.0], [4.0]];
        let p = ScalerParams::fit(train.view()).unwrap();
        let test = array![[100.0], [102.0]];
        let t = p.transform(test.view()).unwrap();
        let s = (8.0f64 / 3.0).sqrt();
        assert!((t[[0, 0]] - 98.0 / s).abs() < 1e-12);
        assert!((t[[1, 0]] - 100.0 / s).abs() < 1e-12);
        assert!(matches!(
            p.transform(array![[1.0, 2.0]].view()),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }
}
