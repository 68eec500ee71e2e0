//! Nested cross-validation runs, result persistence and cross-dataset
//! comparison.

mod config;
mod store;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{ClassifierEntry, DatasetEntry, ExperimentConfig, GridValues, ResampleMode, RopeConfig, SamplerKind};
pub use store::{aggregate, DatasetSummary, FoldRecord, FoldResult, ResultStore};

use crate::dataset::{clean_dataset, load_csv_dataset, Dataset};
use crate::error::{Error, Result};
use crate::learners::{evaluate, fit, select_candidate};
use crate::sampling::{adasyn, smote, stratified_folds, FoldPlan, SamplingConfig};
use crate::seed::derive_seed;
use crate::stats::{
    average_ranks, bayesian_rope_test, critical_distance, friedman_test, nemenyi_pairwise, nemenyi_q, BayesOptions,
    FriedmanResult, MetricMatrix, PairwiseGap, PosteriorTriple, RankTable, RopeBounds,
};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "DEFECTBENCH_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("{THREADS_ENV}: expected a positive integer, got '{v}'")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("{THREADS_ENV}: {e}")))
}

/// Loads and cleans every configured dataset, then runs
/// [`run_on_datasets`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultStore> {
    cfg.validate()?;
    if cfg.datasets.is_empty() {
        return Err(Error::Config("datasets: at least one dataset is required".into()));
    }
    let mut loaded = Vec::with_capacity(cfg.datasets.len());
    for entry in &cfg.datasets {
        let d = load_csv_dataset(&entry.path, &entry.label_column, &entry.positive_label)?;
        let d = match &entry.name {
            Some(n) => d.renamed(n),
            None => d,
        };
        loaded.push(d);
    }
    run_on_datasets(cfg, loaded)
}

fn resample(cfg: &ExperimentConfig, d: &Dataset, seed: u64) -> Result<Dataset> {
    let sc = SamplingConfig {
        target_minority_ratio: cfg.target_minority_ratio,
        k: cfg.neighbours,
        rng_seed: seed,
    };
    match cfg.sampler {
        SamplerKind::Adasyn => adasyn(d, &sc),
        SamplerKind::Smote => smote(d, &sc),
        SamplerKind::None => Ok(d.clone()),
    }
}

struct Prepared {
    /// Dataset whose rows the fold plan indexes.
    evaluated: Dataset,
    plan: FoldPlan,
    /// Training split per outer fold, already resampled when configured.
    train: Vec<Dataset>,
}

fn prepare(cfg: &ExperimentConfig, d: &Dataset) -> Result<Prepared> {
    let name = d.name();
    let evaluated = match cfg.resample_mode {
        ResampleMode::TrainFoldsOnly => d.clone(),
        ResampleMode::WholeDataset => resample(cfg, d, derive_seed(cfg.master_seed, &[name, "resample"]))?,
    };
    let plan = stratified_folds(
        evaluated.labels(),
        cfg.outer_folds,
        derive_seed(cfg.master_seed, &[name, "outer-folds"]),
    )?;
    let train = (0..cfg.outer_folds)
        .into_par_iter()
        .map(|f| {
            let part = evaluated.select_rows(&plan.train_indices(f));
            match cfg.resample_mode {
                ResampleMode::TrainFoldsOnly => resample(
                    cfg,
                    &part,
                    derive_seed(cfg.master_seed, &[name, "resample", &f.to_string()]),
                ),
                ResampleMode::WholeDataset => Ok(part),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared { evaluated, plan, train })
}

fn run_task(cfg: &ExperimentConfig, prep: &Prepared, classifier: &ClassifierEntry, fold: usize) -> Result<FoldResult> {
    let name = prep.evaluated.name();
    let fold_s = fold.to_string();
    let train = &prep.train[fold];
    let test_rows = prep.plan.test_indices(fold);
    let test = prep.evaluated.select_rows(&test_rows);
    let grid = classifier.candidate_grid(train.n_rows())?;
    let selection = select_candidate(
        &grid,
        train,
        cfg.inner_folds,
        cfg.metrics[0],
        cfg.weighting,
        derive_seed(cfg.master_seed, &[name, &classifier.name, &fold_s, "select"]),
    )?;
    let model = fit(
        &selection.spec,
        train,
        derive_seed(cfg.master_seed, &[name, &classifier.name, &fold_s, "fit"]),
    )?;
    let scores = model.predict_scores(test.features())?;
    let mut metrics = BTreeMap::new();
    for &m in &cfg.metrics {
        metrics.insert(m, evaluate(m, &scores, test.labels(), cfg.weighting)?);
    }
    Ok(FoldResult {
        selected: selection.spec.to_string(),
        selected_index: selection.index,
        test_rows,
        scores,
        labels: test.labels().to_vec(),
        metrics,
        n_train: train.n_rows(),
        n_synthetic_train: train.synthetic().iter().filter(|&&s| s).count(),
        n_synthetic_test: test.synthetic().iter().filter(|&&s| s).count(),
        convergence: model.convergence,
    })
}

/// Runs the full protocol on already loaded datasets: clean, fold, resample
/// the training splits, select a candidate by inner CV, refit, score the
/// test split.
///
/// Every random choice draws from a seed derived from `master_seed` and the
/// task's names, so the store does not depend on thread count or
/// scheduling. A failing task is recorded and the others still run.
pub fn run_on_datasets(cfg: &ExperimentConfig, datasets: Vec<Dataset>) -> Result<ResultStore> {
    cfg.validate()?;
    if datasets.is_empty() {
        return Err(Error::Config("datasets: at least one dataset is required".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for d in &datasets {
        if !seen.insert(d.name().to_string()) {
            return Err(Error::Config(format!("datasets.name: duplicate '{}'", d.name())));
        }
    }
    let pool = thread_pool()?;
    pool.install(|| {
        let mut cleaned = Vec::with_capacity(datasets.len());
        let mut summaries = Vec::with_capacity(datasets.len());
        for d in &datasets {
            let (c, report) = clean_dataset(d, &cfg.cleaning)?;
            summaries.push(DatasetSummary {
                name: c.name().to_string(),
                n_rows: c.n_rows(),
                n_features: c.n_features(),
                n_positive: c.class_counts().0,
                cleaning: report,
            });
            cleaned.push(c);
        }
        let prepared = cleaned
            .par_iter()
            .map(|d| prepare(cfg, d))
            .collect::<Result<Vec<_>>>()?;
        let tasks: Vec<(usize, usize, usize)> = (0..prepared.len())
            .flat_map(|di| {
                (0..cfg.classifiers.len()).flat_map(move |ci| (0..cfg.outer_folds).map(move |f| (di, ci, f)))
            })
            .collect();
        let records = tasks
            .par_iter()
            .map(|&(di, ci, f)| {
                let prep = &prepared[di];
                let classifier = &cfg.classifiers[ci];
                FoldRecord {
                    dataset: prep.evaluated.name().to_string(),
                    classifier: classifier.name.clone(),
                    fold: f,
                    outcome: run_task(cfg, prep, classifier, f).map_err(|e| e.to_string()),
                }
            })
            .collect();
        Ok(ResultStore {
            config: cfg.clone(),
            config_hash: cfg.hash(),
            datasets: summaries,
            classifiers: cfg.classifiers.iter().map(|c| c.name.clone()).collect(),
            records,
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Restrict to these classifiers, in this order.
    pub subset: Option<Vec<String>>,
    /// Defaults to the metric's standard rope.
    pub rope: Option<RopeBounds>,
    pub alpha: f64,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            subset: None,
            rope: None,
            alpha: 0.05,
            mc_samples: 50_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub first: String,
    pub second: String,
    /// Posterior for `first - second`.
    pub posterior: PosteriorTriple,
}

impl PairVerdict {
    /// Winner's name, or "pe" when neither side wins.
    pub fn collapsed(&self) -> &str {
        use crate::stats::Verdict;
        match self.posterior.verdict {
            Verdict::RightWins => &self.first,
            Verdict::LeftWins => &self.second,
            Verdict::PracticallyEquivalent | Verdict::Inconclusive => "pe",
        }
    }

    pub fn verdict_label(&self) -> String {
        use crate::stats::Verdict;
        match self.posterior.verdict {
            Verdict::RightWins => format!("{} better", self.first),
            Verdict::LeftWins => format!("{} better", self.second),
            Verdict::PracticallyEquivalent => "practically equivalent".to_string(),
            Verdict::Inconclusive => "inconclusive".to_string(),
        }
    }
}

/// Everything computed for one metric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub matrix: MetricMatrix,
    pub ranks: RankTable,
    /// `None` for two classifiers, where the test is not defined here.
    pub friedman: Option<FriedmanResult>,
    pub alpha: f64,
    pub q_alpha: f64,
    pub cd: f64,
    pub nemenyi: Vec<PairwiseGap>,
    pub bayes: Vec<PairVerdict>,
    pub rope: RopeBounds,
    pub mc_samples: usize,
    pub seed: u64,
}

/// Ranks, Friedman test, Nemenyi critical distance and pairwise Bayesian
/// posteriors for one matrix, optionally restricted to a classifier subset.
pub fn compare(label: &str, m: &MetricMatrix, opts: &CompareOptions) -> Result<Comparison> {
    let matrix = match &opts.subset {
        Some(names) => m.subset(names)?,
        None => m.clone(),
    };
    matrix.check_comparable()?;
    let k = matrix.k();
    let ranks = average_ranks(&matrix);
    let friedman = if k > 2 { Some(friedman_test(&matrix)?) } else { None };
    let q_alpha = nemenyi_q(k, opts.alpha)?;
    let cd = critical_distance(k, matrix.n(), q_alpha);
    let nemenyi = nemenyi_pairwise(&ranks, cd);
    let rope = opts.rope.unwrap_or_else(|| RopeBounds::default_for(matrix.metric));
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let bayes = pairs
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (&matrix.classifiers[i], &matrix.classifiers[j]);
            let bo = BayesOptions {
                mc_samples: opts.mc_samples,
                seed: derive_seed(opts.seed, &["pair", matrix.metric.as_str(), a, b]),
                ..BayesOptions::default()
            };
            Ok(PairVerdict {
                first: a.clone(),
                second: b.clone(),
                posterior: bayesian_rope_test(&matrix.values[i], &matrix.values[j], rope, &bo)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison {
        label: label.to_string(),
        matrix,
        ranks,
        friedman,
        alpha: opts.alpha,
        q_alpha,
        cd,
        nemenyi,
        bayes,
        rope,
        mc_samples: opts.mc_samples,
        seed: opts.seed,
    })
}
