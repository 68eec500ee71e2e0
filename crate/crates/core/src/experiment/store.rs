use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::dataset::{CleaningReport, Label};
use crate::error::{Error, Result};
use crate::learners::ConvergenceIssue;
use crate::stats::{MetricKind, MetricMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub n_rows: usize,
    pub n_features: usize,
    pub n_positive: usize,
    pub cleaning: CleaningReport,
}

/// Outcome of one (dataset, classifier, outer fold) task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    /// Display form of the selected candidate.
    pub selected: String,
    pub selected_index: usize,
    /// Row indices into the evaluated dataset (the cleaned dataset, or the
    /// resampled one in whole-dataset mode).
    pub test_rows: Vec<usize>,
    pub scores: Vec<f64>,
    pub labels: Vec<Label>,
    pub metrics: BTreeMap<MetricKind, f64>,
    pub n_train: usize,
    pub n_synthetic_train: usize,
    pub n_synthetic_test: usize,
    pub convergence: Option<ConvergenceIssue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub dataset: String,
    pub classifier: String,
    pub fold: usize,
    pub outcome: std::result::Result<FoldResult, String>,
}

/// Every fold record of a run plus the resolved configuration. Records are
/// ordered by (dataset, classifier) in configuration order, then fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultStore {
    pub config: ExperimentConfig,
    pub config_hash: u64,
    pub datasets: Vec<DatasetSummary>,
    pub classifiers: Vec<String>,
    pub records: Vec<FoldRecord>,
}

fn fmt17(v: f64) -> String {
    crate::stats::format_float(v)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ResultStore {
    pub fn records_for<'a>(&'a self, dataset: &'a str, classifier: &'a str) -> impl Iterator<Item = &'a FoldRecord> + 'a {
        self.records
            .iter()
            .filter(move |r| r.dataset == dataset && r.classifier == classifier)
    }

    pub fn failures(&self) -> Vec<&FoldRecord> {
        self.records.iter().filter(|r| r.outcome.is_err()).collect()
    }

    /// A store with any failed task must not feed published tables.
    pub fn is_publishable(&self) -> bool {
        self.failures().is_empty()
    }

    fn folds_csv(&self) -> String {
        let mut out = String::from(
            "dataset,classifier,fold,status,selected,n_train,n_synthetic_train,n_test,n_synthetic_test,auc,h,converged,message\n",
        );
        for r in &self.records {
            let _ = write!(out, "{},{},{},", r.dataset, r.classifier, r.fold);
            match &r.outcome {
                Ok(f) => {
                    let metric = |m| f.metrics.get(&m).map(|&v| fmt17(v)).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "ok,{},{},{},{},{},{},{},{},",
                        csv_field(&f.selected),
                        f.n_train,
                        f.n_synthetic_train,
                        f.test_rows.len(),
                        f.n_synthetic_test,
                        metric(MetricKind::Auc),
                        metric(MetricKind::H),
                        f.convergence.is_none(),
                    );
                }
                Err(msg) => {
                    let _ = writeln!(out, "failed,,,,,,,,,{}", csv_field(msg));
                }
            }
        }
        out
    }

    fn scores_csv(&self, dataset: &str, classifier: &str) -> String {
        let mut out = String::from("fold,row,label,score\n");
        for r in self.records_for(dataset, classifier) {
            if let Ok(f) = &r.outcome {
                for ((row, label), score) in f.test_rows.iter().zip(&f.labels).zip(&f.scores) {
                    let _ = writeln!(out, "{},{},{},{}", r.fold, row, label.sign(), fmt17(*score));
                }
            }
        }
        out
    }

    fn datasets_csv(&self) -> String {
        let mut out = String::from(
            "dataset,n_rows,n_features,n_positive,rows_dropped_missing,duplicate_rows_found,duplicates_removed,constant_features_removed,linear_combination_features_removed\n",
        );
        for d in &self.datasets {
            let c = &d.cleaning;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                d.name,
                d.n_rows,
                d.n_features,
                d.n_positive,
                c.rows_dropped_missing,
                c.duplicate_rows_found,
                c.duplicates_removed,
                csv_field(&c.constant_features_removed.join(";")),
                csv_field(&c.linear_combination_features_removed.join(";")),
            );
        }
        out
    }

    /// Writes the store as a directory of CSV files. An existing non-empty
    /// directory is an error unless `force` is set, in which case it is
    /// replaced.
    pub fn write_dir(&self, dir: &Path, force: bool) -> Result<()> {
        if dir.exists() {
            let occupied = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?.next().is_some();
            if occupied && !force {
                return Err(Error::Clobber(dir.to_path_buf()));
            }
            if occupied {
                fs::remove_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
        }
        let write = |rel: &str, body: &str| -> Result<()> {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(&path, body).map_err(|e| Error::io(&path, e))
        };
        write("config.toml", &self.config.to_toml())?;
        write(
            "provenance.txt",
            &format!(
                "version={}\nconfig_hash={:016x}\nmaster_seed={}\nseed_derivation={}\npublishable={}\n",
                crate::VERSION,
                self.config_hash,
                self.config.master_seed,
                crate::seed::DERIVATION,
                self.is_publishable()
            ),
        )?;
        write("datasets.csv", &self.datasets_csv())?;
        write("folds.csv", &self.folds_csv())?;
        for d in &self.datasets {
            for c in &self.classifiers {
                write(&format!("scores/{}/{}.csv", d.name, c), &self.scores_csv(&d.name, c))?;
            }
        }
        if self.is_publishable() {
            for &m in &self.config.metrics {
                write(&format!("matrix_{m}.csv"), &aggregate(self, m)?.to_csv())?;
            }
        }
        Ok(())
    }
}

/// Classifier × dataset table of fold-mean metric values.
pub fn aggregate(store: &ResultStore, metric: MetricKind) -> Result<MetricMatrix> {
    if !store.config.metrics.contains(&metric) {
        return Err(Error::InvalidArgument(format!("metric {metric} was not computed in this run")));
    }
    let gaps: Vec<String> = store
        .failures()
        .iter()
        .map(|r| {
            format!(
                "{}/{}/fold {}: {}",
                r.dataset,
                r.classifier,
                r.fold,
                r.outcome.as_ref().err().map(String::as_str).unwrap_or("")
            )
        })
        .collect();
    if !gaps.is_empty() {
        return Err(Error::IncompleteStore(gaps.join("; ")));
    }
    let mut values = Vec::with_capacity(store.classifiers.len());
    for c in &store.classifiers {
        let mut row = Vec::with_capacity(store.datasets.len());
        for d in &store.datasets {
            let fold_values: Vec<f64> = store
                .records_for(&d.name, c)
                .filter_map(|r| r.outcome.as_ref().ok())
                .map(|f| f.metrics[&metric])
                .collect();
            if fold_values.len() != store.config.outer_folds {
                return Err(Error::IncompleteStore(format!(
                    "{}/{c}: {} of {} folds present",
                    d.name,
                    fold_values.len(),
                    store.config.outer_folds
                )));
            }
            row.push(fold_values.iter().sum::<f64>() / fold_values.len() as f64);
        }
        values.push(row);
    }
    MetricMatrix::new(
        metric,
        store.classifiers.clone(),
        store.datasets.iter().map(|d| d.name.clone()).collect(),
        values,
    )
}
