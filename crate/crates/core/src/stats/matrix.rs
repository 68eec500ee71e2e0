use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::midranks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Auc,
    H,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Auc => "auc",
            MetricKind::H => "h",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auc" => Ok(MetricKind::Auc),
            "h" | "hmeasure" | "h_measure" => Ok(MetricKind::H),
            other => Err(Error::InvalidArgument(format!("unknown metric '{other}'"))),
        }
    }
}

/// Classifiers × datasets table of one metric, higher is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricMatrix {
    pub metric: MetricKind,
    pub classifiers: Vec<String>,
    pub datasets: Vec<String>,
    /// `values[i][j]`: classifier `i` on dataset `j`.
    pub values: Vec<Vec<f64>>,
}

impl MetricMatrix {
    pub fn new(
        metric: MetricKind,
        classifiers: Vec<String>,
        datasets: Vec<String>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let m = Self {
            metric,
            classifiers,
            datasets,
            values,
        };
        m.validate()?;
        Ok(m)
    }

    /// Shape, name uniqueness and finiteness.
    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.classifiers.len(), self.datasets.len());
        if k == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("empty metric matrix ({k}×{n})")));
        }
        unique("classifier", &self.classifiers)?;
        unique("dataset", &self.datasets)?;
        if self.values.len() != k {
            return Err(Error::InvalidArgument(format!("{} row(s) for {k} classifier(s)", self.values.len())));
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row '{}' has {} value(s) for {n} dataset(s)",
                    self.classifiers[i],
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value for '{}' on '{}'",
                    self.classifiers[i], self.datasets[j]
                )));
            }
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus the `k >= 2`, `N >= 2` minimum of
    /// the cross-dataset tests.
    pub fn check_comparable(&self) -> Result<()> {
        self.validate()?;
        let (k, n) = (self.k(), self.n());
        if k < 2 || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "comparison needs at least 2 classifiers and 2 datasets, got {k}×{n}"
            )));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.classifiers.len()
    }

    pub fn n(&self) -> usize {
        self.datasets.len()
    }

    pub fn row(&self, classifier: &str) -> Option<&[f64]> {
        self.classifiers
            .iter()
            .position(|c| c == classifier)
            .map(|i| self.values[i].as_slice())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }

    /// Restricts the matrix to the named classifiers, in the given order.
    pub fn subset(&self, names: &[String]) -> Result<MetricMatrix> {
        let missing: Vec<&str> = names
            .iter()
            .filter(|n| !self.classifiers.contains(n))
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "classifier(s) not found: {}",
                missing.join(", ")
            )));
        }
        let values = names.iter().map(|n| self.row(n).unwrap().to_vec()).collect();
        MetricMatrix::new(self.metric, names.to_vec(), self.datasets.clone(), values)
    }

    /// Mean of each classifier's row.
    pub fn row_means(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|r| r.iter().sum::<f64>() / r.len() as f64)
            .collect()
    }

    /// CSV in the ingestion layout.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("classifier").chain(self.datasets.iter().map(String::as_str));
        w.write_record(header).expect("in-memory write");
        for (name, row) in self.classifiers.iter().zip(&self.values) {
            let cells = std::iter::once(name.clone()).chain(row.iter().map(|v| format_float(*v)));
            w.write_record(cells).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// 17 significant digits.
pub(crate) fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if n.is_empty() {
            return Err(Error::InvalidArgument(format!("blank {what} name")));
        }
        if !seen.insert(n) {
            return Err(Error::InvalidArgument(format!("duplicate {what} name '{n}'")));
        }
    }
    Ok(())
}

pub fn ingest_metric_matrix(path: &Path, metric: MetricKind) -> Result<MetricMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_metric_matrix(&text, metric)
}

/// Parses the matrix CSV layout: header `classifier,<dataset>,...`, then one
/// row per classifier with a numeric cell per dataset.
pub fn parse_metric_matrix(text: &str, metric: MetricKind) -> Result<MetricMatrix> {
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
    if headers.first().map(String::as_str) != Some("classifier") {
        return Err(Error::Header("first column must be 'classifier'".into()));
    }
    let datasets = headers[1..].to_vec();
    unique("dataset", &datasets).map_err(|e| Error::Header(e.to_string()))?;
    let mut classifiers = Vec::new();
    let mut values = Vec::new();
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
        let name = record[0].to_string();
        let mut cells = Vec::with_capacity(datasets.len());
        for (j, cell) in record.iter().enumerate().skip(1) {
            let column = headers[j].clone();
            if cell.is_empty() {
                return Err(Error::Cell {
                    row,
                    column,
                    message: format!("missing value for classifier '{name}'"),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Cell {
                row,
                column: column.clone(),
                message: format!("'{cell}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Cell {
                    row,
                    column,
                    message: format!("'{cell}' is not finite"),
                });
            }
            cells.push(v);
        }
        classifiers.push(name);
        values.push(cells);
    }
    MetricMatrix::new(metric, classifiers, datasets, values)
}

/// Average rank per classifier; rank 1 is the best value on a dataset and
/// ties share midranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub classifiers: Vec<String>,
    pub average_ranks: Vec<f64>,
    /// `per_dataset[j][i]`: rank of classifier `i` on dataset `j`.
    pub per_dataset: Vec<Vec<f64>>,
}

impl RankTable {
    pub fn rank_of(&self, classifier: &str) -> Option<f64> {
        self.classifiers
            .iter()
            .position(|c| c == classifier)
            .map(|i| self.average_ranks[i])
    }

    /// Classifier with the lowest average rank (first on ties).
    pub fn best(&self) -> &str {
        let mut best = 0;
        for i in 1..self.average_ranks.len() {
            if self.average_ranks[i] < self.average_ranks[best] {
                best = i;
            }
        }
        &self.classifiers[best]
    }

    pub fn k(&self) -> usize {
        self.classifiers.len()
    }
}

/// Per-dataset descending midranks, averaged over datasets.
pub fn average_ranks(m: &MetricMatrix) -> RankTable {
    let k = m.k();
    let per_dataset: Vec<Vec<f64>> = (0..m.n())
        .map(|j| {
            let negated: Vec<f64> = m.column(j).iter().map(|v| -v).collect();
            midranks(&negated)
        })
        .collect();
    let average_ranks = (0..k)
        .map(|i| per_dataset.iter().map(|r| r[i]).sum::<f64>() / m.n() as f64)
        .collect();
    RankTable {
        classifiers: m.classifiers.clone(),
        average_ranks,
        per_dataset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_two_classifiers() {
        let m = MetricMatrix::new(
            MetricKind::Auc,
            vec!["a".into(), "b".into()],
            vec!["d1".into(), "d2".into(), "d3".into()],
            vec![vec![0.9; 3], vec![0.8; 3]],
        )
        .unwrap();
        let r = average_ranks(&m);
        assert_eq!(r.average_ranks, vec![1.0, 2.0]);
        assert_eq!(r.best(), "a");
    }

    #[test]
    fn ranks_midrank_ties() {
        let m = MetricMatrix::new(
            MetricKind::H,
            vec!["a".into(), "b".into(), "c".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![0.5, 0.1], vec![0.5, 0.2], vec![0.1, 0.3]],
        )
        .unwrap();
        let r = average_ranks(&m);
        assert_eq!(r.per_dataset[0], vec![1.5, 1.5, 3.0]);
        for col in &r.per_dataset {
            assert_eq!(col.iter().sum::<f64>(), 6.0);
        }
    }

    #[test]
    fn parse_blank_cell_names_location() {
        let text = "classifier,d1,d2\na,0.5,0.6\nb,,0.7\n";
        match parse_metric_matrix(text, MetricKind::Auc) {
            Err(Error::Cell { row, column, .. }) => assert_eq!((row, column.as_str()), (2, "d1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicates_and_bad_header() {
        assert!(parse_metric_matrix("classifier,d1,d2\na,1,2\na,3,4\n", MetricKind::Auc).is_err());
        assert!(matches!(
            parse_metric_matrix("model,d1,d2\na,1,2\nb,3,4\n", MetricKind::Auc),
            Err(Error::Header(_))
        ));
        assert!(matches!(
            parse_metric_matrix("classifier,d1,d2\na,1,x\nb,3,4\n", MetricKind::Auc),
            Err(Error::Cell { .. })
        ));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = MetricMatrix::new(
            MetricKind::Auc,
            vec!["a".into(), "b".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![0.1 + 0.2, 1.0 / 3.0], vec![0.7, 2.0f64.sqrt() / 2.0]],
        )
        .unwrap();
        assert_eq!(parse_metric_matrix(&m.to_csv(), MetricKind::Auc).unwrap(), m);
    }

    #[test]
    fn csv_quotes_awkward_names() {
        let m = MetricMatrix::new(
            MetricKind::H,
            vec!["svm, linear".into(), "say \"hi\"".into()],
            vec!["d1".into(), "d,2".into()],
            vec![vec![0.1, 0.2], vec![0.3, 0.4]],
        )
        .unwrap();
        assert_eq!(parse_metric_matrix(&m.to_csv(), MetricKind::H).unwrap(), m);
    }

    #[test]
    fn subset_unknown_name() {
        let m = MetricMatrix::new(
            MetricKind::Auc,
            vec!["a".into(), "b".into(), "c".into()],
            vec!["d1".into(), "d2".into()],
            vec![vec![0.1, 0.2], vec![0.3, 0.4], vec![0.5, 0.6]],
        )
        .unwrap();
        assert_eq!(m.subset(&["c".into(), "a".into()]).unwrap().values[0], vec![0.5, 0.6]);
        assert!(m.subset(&["zz".into(), "a".into()]).is_err());
        assert!(m.subset(&["a".into()]).unwrap().check_comparable().is_err());
    }
}
