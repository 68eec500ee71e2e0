use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::CleaningPolicy;
use crate::error::{Error, Result};
use crate::learners::{Algorithm, CandidateGrid};
use crate::metrics::CostWeighting;
use crate::seed::fnv1a64;
use crate::stats::{MetricKind, RopeBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMode {
    /// Oversample each outer training split only; test splits stay original.
    #[default]
    TrainFoldsOnly,
    /// Oversample the cleaned dataset once, then fold it. Synthetic rows can
    /// reach test splits.
    WholeDataset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    #[default]
    Adasyn,
    Smote,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub path: PathBuf,
    pub label_column: String,
    pub positive_label: String,
    /// Defaults to the file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl DatasetEntry {
    pub fn resolved_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".to_string())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValues {
    One(f64),
    Many(Vec<f64>),
}

impl GridValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridValues::One(v) => vec![*v],
            GridValues::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierEntry {
    pub name: String,
    pub algorithm: Algorithm,
    /// Hyperparameter name → candidate values. Empty means the default grid.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grid: BTreeMap<String, GridValues>,
}

impl ClassifierEntry {
    /// Candidate grid for a training split of `n_train` rows.
    pub fn candidate_grid(&self, n_train: usize) -> Result<CandidateGrid> {
        if self.grid.is_empty() {
            return Ok(CandidateGrid::default_for(self.algorithm, n_train));
        }
        let lists: BTreeMap<String, Vec<f64>> = self.grid.iter().map(|(k, v)| (k.clone(), v.values())).collect();
        CandidateGrid::from_lists(self.algorithm, &lists)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RopeConfig {
    pub auc: RopeBounds,
    pub h: RopeBounds,
}

impl Default for RopeConfig {
    fn default() -> Self {
        Self {
            auc: RopeBounds::default_for(MetricKind::Auc),
            h: RopeBounds::default_for(MetricKind::H),
        }
    }
}

impl RopeConfig {
    pub fn for_metric(&self, m: MetricKind) -> RopeBounds {
        match m {
            MetricKind::Auc => self.auc,
            MetricKind::H => self.h,
        }
    }
}

fn default_ratio() -> f64 {
    0.20
}

fn default_folds() -> usize {
    5
}

fn default_neighbours() -> usize {
    5
}

fn default_metrics() -> Vec<MetricKind> {
    vec![MetricKind::Auc, MetricKind::H]
}

/// Full description of one benchmarking run, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    #[serde(default = "default_ratio")]
    pub target_minority_ratio: f64,
    #[serde(default)]
    pub sampler: SamplerKind,
    #[serde(default = "default_neighbours")]
    pub neighbours: usize,
    #[serde(default)]
    pub resample_mode: ResampleMode,
    #[serde(default = "default_folds")]
    pub outer_folds: usize,
    #[serde(default = "default_folds")]
    pub inner_folds: usize,
    /// The first entry drives inner model selection.
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricKind>,
    #[serde(default)]
    pub weighting: CostWeighting,
    #[serde(default)]
    pub rope: RopeConfig,
    #[serde(default)]
    pub cleaning: CleaningPolicy,
    #[serde(default)]
    pub datasets: Vec<DatasetEntry>,
    pub classifiers: Vec<ClassifierEntry>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl ExperimentConfig {
    /// Parses TOML. Relative dataset paths are resolved against `base_dir`
    /// when given.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        if let Some(base) = base_dir {
            for d in &mut cfg.datasets {
                if d.path.is_relative() {
                    d.path = base.join(&d.path);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Stable 64-bit hash of the canonical TOML form.
    pub fn hash(&self) -> u64 {
        fnv1a64(self.to_toml().as_bytes())
    }

    /// Checks every invariant except dataset presence, which only
    /// [`super::run_experiment`] needs (in-memory runs supply their own).
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.classifiers.is_empty() {
            return err("classifiers: at least one classifier is required".into());
        }
        if self.metrics.is_empty() {
            return err("metrics: at least one metric is required".into());
        }
        let uniq: HashSet<_> = self.metrics.iter().collect();
        if uniq.len() != self.metrics.len() {
            return err("metrics: duplicate entries".into());
        }
        if self.outer_folds < 2 {
            return err(format!("outer_folds: must be at least 2, got {}", self.outer_folds));
        }
        if self.inner_folds < 2 {
            return err(format!("inner_folds: must be at least 2, got {}", self.inner_folds));
        }
        if !(self.target_minority_ratio > 0.0 && self.target_minority_ratio <= 0.5) {
            return err(format!(
                "target_minority_ratio: must lie in (0, 0.5], got {}",
                self.target_minority_ratio
            ));
        }
        if self.neighbours == 0 {
            return err("neighbours: must be at least 1".into());
        }
        self.weighting
            .validate()
            .map_err(|e| Error::Config(format!("weighting: {e}")))?;
        self.rope
            .auc
            .validate()
            .map_err(|e| Error::Config(format!("rope.auc: {e}")))?;
        self.rope.h.validate().map_err(|e| Error::Config(format!("rope.h: {e}")))?;
        let mut names = HashSet::new();
        for c in &self.classifiers {
            if !valid_name(&c.name) {
                return err(format!(
                    "classifiers.name: '{}' must be non-empty ASCII letters, digits, '_', '-' or '.'",
                    c.name
                ));
            }
            if !names.insert(c.name.as_str()) {
                return err(format!("classifiers.name: duplicate '{}'", c.name));
            }
            c.candidate_grid(100)
                .map_err(|e| Error::Config(format!("classifiers.{}.grid: {e}", c.name)))?;
        }
        let mut names = HashSet::new();
        for d in &self.datasets {
            let n = d.resolved_name();
            if !valid_name(&n) {
                return err(format!("datasets.name: '{n}' is not a usable name"));
            }
            if !names.insert(n.clone()) {
                return err(format!("datasets.name: duplicate '{n}'"));
            }
        }
        Ok(())
    }
}
