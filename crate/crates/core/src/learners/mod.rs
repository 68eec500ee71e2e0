//! Classifiers behind a uniform fit / score interface, their candidate grids
//! and inner cross-validation model selection.
//!
//! Every learner is fitted on standardised features; the scaler estimated at
//! fit time is stored in the [`TrainedModel`] and reapplied at prediction.

mod boost;
mod forest;
mod knn;
mod linear;
mod mlp;
mod naive_bayes;
mod svm;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, ScalerParams};
use crate::error::{Error, Result};
use crate::metrics::{self, CostWeighting};
use crate::sampling::stratified_folds;
use crate::seed::derive_seed;
use crate::stats::MetricKind;

pub use boost::{AdaBoostModel, Stump};
pub use forest::{bootstrap_sample, tree_seed, RandomForestModel};
pub use knn::KnnModel;
pub use linear::{LogisticModel, RidgeModel};
pub use mlp::MlpModel;
pub use naive_bayes::NaiveBayesModel;
pub use svm::LinearSvmModel;
pub use tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LogisticRegression,
    RidgeRegression,
    GaussianNaiveBayes,
    Knn,
    Cart,
    RandomForest,
    LinearSvm,
    Mlp,
    Adaboost,
    /// Scores every instance 0; a no-information baseline.
    Constant,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::LogisticRegression,
        Algorithm::RidgeRegression,
        Algorithm::GaussianNaiveBayes,
        Algorithm::Knn,
        Algorithm::Cart,
        Algorithm::RandomForest,
        Algorithm::LinearSvm,
        Algorithm::Mlp,
        Algorithm::Adaboost,
        Algorithm::Constant,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::LogisticRegression => "logistic_regression",
            Algorithm::RidgeRegression => "ridge_regression",
            Algorithm::GaussianNaiveBayes => "gaussian_naive_bayes",
            Algorithm::Knn => "knn",
            Algorithm::Cart => "cart",
            Algorithm::RandomForest => "random_forest",
            Algorithm::LinearSvm => "linear_svm",
            Algorithm::Mlp => "mlp",
            Algorithm::Adaboost => "adaboost",
            Algorithm::Constant => "constant",
        }
    }

    /// Hyperparameter names accepted by [`ClassifierSpec::from_params`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Algorithm::RidgeRegression => &["lambda"],
            Algorithm::Knn => &["k"],
            Algorithm::Cart => &["min_leaf", "max_depth"],
            Algorithm::RandomForest => &["n_trees", "feature_fraction"],
            Algorithm::LinearSvm => &["c"],
            Algorithm::Mlp => &["hidden", "learning_rate", "epochs"],
            Algorithm::Adaboost => &["rounds"],
            Algorithm::LogisticRegression | Algorithm::GaussianNaiveBayes | Algorithm::Constant => &[],
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown algorithm '{s}'")))
    }
}

/// One candidate model: an algorithm with a full hyperparameter assignment.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    LogisticRegression,
    RidgeRegression { lambda: f64 },
    GaussianNaiveBayes,
    Knn { k: usize },
    /// `max_depth = None` grows until purity or `min_leaf`.
    Cart { min_leaf: usize, max_depth: Option<usize> },
    RandomForest { n_trees: usize, feature_fraction: f64 },
    LinearSvm { c: f64 },
    Mlp { hidden: usize, learning_rate: f64, epochs: usize },
    Adaboost { rounds: usize },
    Constant,
}

pub const DEFAULT_MLP_EPOCHS: usize = 300;

fn as_count(name: &str, v: f64) -> Result<usize> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidSpec(format!("{name} must be a non-negative integer, got {v}")))
    }
}

impl ClassifierSpec {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            ClassifierSpec::LogisticRegression => Algorithm::LogisticRegression,
            ClassifierSpec::RidgeRegression { .. } => Algorithm::RidgeRegression,
            ClassifierSpec::GaussianNaiveBayes => Algorithm::GaussianNaiveBayes,
            ClassifierSpec::Knn { .. } => Algorithm::Knn,
            ClassifierSpec::Cart { .. } => Algorithm::Cart,
            ClassifierSpec::RandomForest { .. } => Algorithm::RandomForest,
            ClassifierSpec::LinearSvm { .. } => Algorithm::LinearSvm,
            ClassifierSpec::Mlp { .. } => Algorithm::Mlp,
            ClassifierSpec::Adaboost { .. } => Algorithm::Adaboost,
            ClassifierSpec::Constant => Algorithm::Constant,
        }
    }

    /// Builds a spec from a name → value map. Missing optional values take
    /// their defaults (`cart.max_depth` unlimited, `mlp.epochs` 300); unknown
    /// names are rejected.
    pub fn from_params(algorithm: Algorithm, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed = algorithm.param_names();
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidSpec(format!(
                "{algorithm} has no hyperparameter '{bad}' (allowed: {})",
                allowed.join(", ")
            )));
        }
        let req = |name: &str| {
            params
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidSpec(format!("{algorithm} requires '{name}'")))
        };
        let spec = match algorithm {
            Algorithm::LogisticRegression => ClassifierSpec::LogisticRegression,
            Algorithm::RidgeRegression => ClassifierSpec::RidgeRegression {
                lambda: req("lambda")?,
            },
            Algorithm::GaussianNaiveBayes => ClassifierSpec::GaussianNaiveBayes,
            Algorithm::Knn => ClassifierSpec::Knn {
                k: as_count("knn.k", req("k")?)?,
            },
            Algorithm::Cart => ClassifierSpec::Cart {
                min_leaf: as_count("cart.min_leaf", req("min_leaf")?)?,
                max_depth: params
                    .get("max_depth")
                    .map(|&v| as_count("cart.max_depth", v))
                    .transpose()?,
            },
            Algorithm::RandomForest => ClassifierSpec::RandomForest {
                n_trees: as_count("random_forest.n_trees", req("n_trees")?)?,
                feature_fraction: req("feature_fraction")?,
            },
            Algorithm::LinearSvm => ClassifierSpec::LinearSvm { c: req("c")? },
            Algorithm::Mlp => ClassifierSpec::Mlp {
                hidden: as_count("mlp.hidden", req("hidden")?)?,
                learning_rate: req("learning_rate")?,
                epochs: params
                    .get("epochs")
                    .map(|&v| as_count("mlp.epochs", v))
                    .transpose()?
                    .unwrap_or(DEFAULT_MLP_EPOCHS),
            },
            Algorithm::Adaboost => ClassifierSpec::Adaboost {
                rounds: as_count("adaboost.rounds", req("rounds")?)?,
            },
            Algorithm::Constant => ClassifierSpec::Constant,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            m.insert(k.to_string(), v);
        };
        match *self {
            ClassifierSpec::RidgeRegression { lambda } => put("lambda", lambda),
            ClassifierSpec::Knn { k } => put("k", k as f64),
            ClassifierSpec::Cart { min_leaf, max_depth } => {
                put("min_leaf", min_leaf as f64);
                if let Some(d) = max_depth {
                    put("max_depth", d as f64);
                }
            }
            ClassifierSpec::RandomForest {
                n_trees,
                feature_fraction,
            } => {
                put("n_trees", n_trees as f64);
                put("feature_fraction", feature_fraction);
            }
            ClassifierSpec::LinearSvm { c } => put("c", c),
            ClassifierSpec::Mlp {
                hidden,
                learning_rate,
                epochs,
            } => {
                put("hidden", hidden as f64);
                put("learning_rate", learning_rate);
                put("epochs", epochs as f64);
            }
            ClassifierSpec::Adaboost { rounds } => put("rounds", rounds as f64),
            ClassifierSpec::LogisticRegression
            | ClassifierSpec::GaussianNaiveBayes
            | ClassifierSpec::Constant => {}
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            ClassifierSpec::RidgeRegression { lambda } if !(lambda >= 0.0 && lambda.is_finite()) => {
                bad(format!("ridge_regression.lambda must be >= 0, got {lambda}"))
            }
            ClassifierSpec::Knn { k: 0 } => bad("knn.k must be >= 1".into()),
            ClassifierSpec::Cart { min_leaf, max_depth } if min_leaf == 0 || max_depth == Some(0) => {
                bad("cart.min_leaf and cart.max_depth must be >= 1".into())
            }
            ClassifierSpec::RandomForest {
                n_trees,
                feature_fraction,
            } if n_trees == 0 || !(feature_fraction > 0.0 && feature_fraction <= 1.0) => bad(format!(
                "random_forest needs n_trees >= 1 and feature_fraction in (0, 1], got {n_trees}, {feature_fraction}"
            )),
            ClassifierSpec::LinearSvm { c } if !(c > 0.0 && c.is_finite()) => {
                bad(format!("linear_svm.c must be > 0, got {c}"))
            }
            ClassifierSpec::Mlp {
                hidden,
                learning_rate,
                epochs,
            } if hidden == 0 || epochs == 0 || !(learning_rate > 0.0 && learning_rate.is_finite()) => {
                bad("mlp needs hidden >= 1, epochs >= 1 and learning_rate > 0".into())
            }
            ClassifierSpec::Adaboost { rounds: 0 } => bad("adaboost.rounds must be >= 1".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algorithm())?;
        let params = self.params();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", body.join(";"))?;
        }
        Ok(())
    }
}

/// The candidate models of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGrid {
    pub algorithm: Algorithm,
    pub candidates: Vec<ClassifierSpec>,
}

impl CandidateGrid {
    pub fn new(candidates: Vec<ClassifierSpec>) -> Result<Self> {
        let first = candidates
            .first()
            .ok_or_else(|| Error::InvalidSpec("empty candidate grid".into()))?;
        let algorithm = first.algorithm();
        for c in &candidates {
            if c.algorithm() != algorithm {
                return Err(Error::InvalidSpec(format!(
                    "grid mixes {algorithm} and {}",
                    c.algorithm()
                )));
            }
            c.validate()?;
        }
        Ok(Self {
            algorithm,
            candidates,
        })
    }

    /// Cartesian product of per-parameter value lists, in lexicographic
    /// order of parameter names (last name varies fastest).
    pub fn from_lists(algorithm: Algorithm, lists: &BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let mut combos: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new()];
        for (name, values) in lists {
            if values.is_empty() {
                return Err(Error::InvalidSpec(format!("no values for '{name}'")));
            }
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |&v| {
                        let mut c = c.clone();
                        c.insert(name.clone(), v);
                        c
                    })
                })
                .collect();
        }
        let candidates = combos
            .iter()
            .map(|p| ClassifierSpec::from_params(algorithm, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(candidates)
    }

    /// Default candidates. `n_train` sizes the CART leaf grid.
    pub fn default_for(algorithm: Algorithm, n_train: usize) -> Self {
        let log_spaced = |lo: f64, hi: f64, count: usize| -> Vec<f64> {
            (0..count)
                .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
                .collect()
        };
        let candidates = match algorithm {
            Algorithm::LogisticRegression => vec![ClassifierSpec::LogisticRegression],
            Algorithm::GaussianNaiveBayes => vec![ClassifierSpec::GaussianNaiveBayes],
            Algorithm::Constant => vec![ClassifierSpec::Constant],
            Algorithm::RidgeRegression => log_spaced(-4.0, 2.0, 10)
                .into_iter()
                .map(|lambda| ClassifierSpec::RidgeRegression { lambda })
                .collect(),
            Algorithm::Knn => [1, 3, 5, 7, 9, 11, 15, 21]
                .into_iter()
                .map(|k| ClassifierSpec::Knn { k })
                .collect(),
            Algorithm::Cart => {
                let top = (n_train as f64 / 10.0).max(1.0);
                let mut leaves: Vec<usize> = log_spaced(0.0, top.log10().max(0.0), 12)
                    .into_iter()
                    .map(|v| v.round().max(1.0) as usize)
                    .collect();
                leaves.dedup();
                leaves
                    .into_iter()
                    .map(|min_leaf| ClassifierSpec::Cart {
                        min_leaf,
                        max_depth: None,
                    })
                    .collect()
            }
            Algorithm::RandomForest => [50, 100, 250, 500]
                .into_iter()
                .flat_map(|n_trees| {
                    [0.3, 0.6].into_iter().map(move |feature_fraction| ClassifierSpec::RandomForest {
                        n_trees,
                        feature_fraction,
                    })
                })
                .collect(),
            Algorithm::LinearSvm => log_spaced(-3.0, 3.0, 7)
                .into_iter()
                .map(|c| ClassifierSpec::LinearSvm { c })
                .collect(),
            Algorithm::Mlp => [2, 5, 10]
                .into_iter()
                .flat_map(|hidden| {
                    [0.1, 0.5].into_iter().map(move |learning_rate| ClassifierSpec::Mlp {
                        hidden,
                        learning_rate,
                        epochs: DEFAULT_MLP_EPOCHS,
                    })
                })
                .collect(),
            Algorithm::Adaboost => [50, 100, 200]
                .into_iter()
                .map(|rounds| ClassifierSpec::Adaboost { rounds })
                .collect(),
        };
        Self {
            algorithm,
            candidates,
        }
    }
}

/// Raised when an iterative fit stops before meeting its tolerance. The
/// model at the last iterate is still usable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceIssue {
    pub algorithm: Algorithm,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Logistic(LogisticModel),
    Ridge(RidgeModel),
    NaiveBayes(NaiveBayesModel),
    Knn(KnnModel),
    Tree(DecisionTree),
    Forest(RandomForestModel),
    Svm(LinearSvmModel),
    Mlp(MlpModel),
    AdaBoost(AdaBoostModel),
    Constant,
}

/// A fitted classifier. Immutable; scoring is a pure function of the model
/// and the input matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub spec: ClassifierSpec,
    pub scaler: ScalerParams,
    pub model: FittedModel,
    pub convergence: Option<ConvergenceIssue>,
}

fn check_training(train: &Dataset) -> Result<()> {
    let (pos, neg) = train.class_counts();
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass(format!(
            "training data has {pos} positive and {neg} negative row(s)"
        )));
    }
    if train.n_features() == 0 {
        return Err(Error::InvalidDataset("no feature columns".into()));
    }
    if train.features().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidDataset("training data contains non-finite values".into()));
    }
    Ok(())
}

/// Fits `spec` on `train`. Deterministic given `(spec, train, rng_seed)`.
pub fn fit(spec: &ClassifierSpec, train: &Dataset, rng_seed: u64) -> Result<TrainedModel> {
    spec.validate()?;
    check_training(train)?;
    let scaler = ScalerParams::fit(train.features())?;
    let x = scaler.transform(train.features())?;
    let y = train.labels();
    let mut convergence = None;
    let mut flag = |converged: bool, iterations: usize| {
        if !converged {
            convergence = Some(ConvergenceIssue {
                algorithm: spec.algorithm(),
                iterations,
            });
        }
    };
    let model = match *spec {
        ClassifierSpec::LogisticRegression => {
            let (m, converged, iters) = linear::fit_logistic(x.view(), y);
            flag(converged, iters);
            FittedModel::Logistic(m)
        }
        ClassifierSpec::RidgeRegression { lambda } => FittedModel::Ridge(linear::fit_ridge(x.view(), y, lambda)?),
        ClassifierSpec::GaussianNaiveBayes => FittedModel::NaiveBayes(naive_bayes::fit(x.view(), y)),
        ClassifierSpec::Knn { k } => FittedModel::Knn(KnnModel::fit(x, y, k)),
        ClassifierSpec::Cart { min_leaf, max_depth } => {
            let params = TreeParams {
                min_leaf,
                max_depth,
                max_features: None,
            };
            let rows: Vec<usize> = (0..x.nrows()).collect();
            FittedModel::Tree(DecisionTree::fit(x.view(), y, &rows, &params, rng_seed))
        }
        ClassifierSpec::RandomForest {
            n_trees,
            feature_fraction,
        } => FittedModel::Forest(forest::fit(x.view(), y, n_trees, feature_fraction, rng_seed)),
        ClassifierSpec::LinearSvm { c } => {
            let (m, converged, iters) = svm::fit(x.view(), y, c, rng_seed);
            flag(converged, iters);
            FittedModel::Svm(m)
        }
        ClassifierSpec::Mlp {
            hidden,
            learning_rate,
            epochs,
        } => FittedModel::Mlp(mlp::fit(x.view(), y, hidden, learning_rate, epochs, rng_seed)),
        ClassifierSpec::Adaboost { rounds } => FittedModel::AdaBoost(boost::fit(x.view(), y, rounds)),
        ClassifierSpec::Constant => FittedModel::Constant,
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        scaler,
        model,
        convergence,
    })
}

impl TrainedModel {
    pub fn n_features(&self) -> usize {
        self.scaler.n_features()
    }

    /// Higher scores mean "more likely faulty".
    pub fn predict_scores(&self, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        let z: Array2<f64> = self.scaler.transform(x)?;
        let z = z.view();
        let scores = match &self.model {
            FittedModel::Logistic(m) => m.scores(z),
            FittedModel::Ridge(m) => m.scores(z),
            FittedModel::NaiveBayes(m) => m.scores(z),
            FittedModel::Knn(m) => m.scores(z),
            FittedModel::Tree(m) => m.scores(z),
            FittedModel::Forest(m) => m.scores(z),
            FittedModel::Svm(m) => m.scores(z),
            FittedModel::Mlp(m) => m.scores(z),
            FittedModel::AdaBoost(m) => m.scores(z),
            FittedModel::Constant => vec![0.0; z.nrows()],
        };
        debug_assert!(scores.iter().all(|s| s.is_finite()));
        Ok(scores)
    }
}

/// Convenience wrapper over [`TrainedModel::predict_scores`].
pub fn predict_scores(model: &TrainedModel, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
    model.predict_scores(x)
}

pub fn evaluate(metric: MetricKind, scores: &[f64], labels: &[Label], weighting: CostWeighting) -> Result<f64> {
    match metric {
        MetricKind::Auc => metrics::auc(scores, labels),
        MetricKind::H => metrics::h_measure(scores, labels, weighting),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub spec: ClassifierSpec,
    /// Position of the winner in the grid.
    pub index: usize,
    /// Mean inner-CV metric per candidate; empty when the grid has a single
    /// candidate and no inner CV was run.
    pub inner_means: Vec<f64>,
}

/// Picks the candidate with the highest mean metric over `inner_k`
/// stratified folds of `train` (earliest grid position wins ties). The
/// caller refits the winner on the whole training split.
pub fn select_candidate(
    grid: &CandidateGrid,
    train: &Dataset,
    inner_k: usize,
    metric: MetricKind,
    weighting: CostWeighting,
    rng_seed: u64,
) -> Result<Selection> {
    if grid.candidates.is_empty() {
        return Err(Error::InvalidSpec("empty candidate grid".into()));
    }
    if grid.candidates.len() == 1 {
        return Ok(Selection {
            spec: grid.candidates[0].clone(),
            index: 0,
            inner_means: Vec::new(),
        });
    }
    let plan = stratified_folds(train.labels(), inner_k, derive_seed(rng_seed, &["inner-folds"]))?;
    let splits: Vec<(Dataset, Dataset)> = (0..inner_k)
        .map(|f| (train.select_rows(&plan.train_indices(f)), train.select_rows(&plan.test_indices(f))))
        .collect();
    let mut inner_means = Vec::with_capacity(grid.candidates.len());
    for (ci, spec) in grid.candidates.iter().enumerate() {
        let mut total = 0.0;
        for (f, (fit_part, eval_part)) in splits.iter().enumerate() {
            let seed = derive_seed(rng_seed, &["inner", &ci.to_string(), &f.to_string()]);
            let model = fit(spec, fit_part, seed)?;
            let scores = model.predict_scores(eval_part.features())?;
            total += evaluate(metric, &scores, eval_part.labels(), weighting)?;
        }
        inner_means.push(total / inner_k as f64);
    }
    let mut best = 0;
    for i in 1..inner_means.len() {
        if inner_means[i] > inner_means[best] {
            best = i;
        }
    }
    Ok(Selection {
        spec: grid.candidates[best].clone(),
        index: best,
        inner_means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_round_trip() {
        for alg in Algorithm::ALL {
            for spec in CandidateGrid::default_for(alg, 500).candidates {
                assert_eq!(ClassifierSpec::from_params(alg, &spec.params()).unwrap(), spec);
            }
        }
    }

    #[test]
    fn invalid_hyperparameters() {
        let p = |pairs: &[(&str, f64)]| -> BTreeMap<String, f64> {
            pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
        };
        assert!(ClassifierSpec::from_params(Algorithm::Knn, &p(&[("k", 0.0)])).is_err());
        assert!(ClassifierSpec::from_params(Algorithm::Cart, &p(&[("min_leaf", 0.0)])).is_err());
        assert!(ClassifierSpec::from_params(Algorithm::RidgeRegression, &p(&[("lambda", -1.0)])).is_err());
        assert!(ClassifierSpec::from_params(Algorithm::Knn, &p(&[("k", 2.5)])).is_err());
        assert!(ClassifierSpec::from_params(Algorithm::Knn, &p(&[("k", 3.0), ("depth", 1.0)])).is_err());
        assert!(ClassifierSpec::from_params(Algorithm::Knn, &p(&[])).is_err());
    }

    #[test]
    fn default_grid_sizes() {
        assert_eq!(CandidateGrid::default_for(Algorithm::Knn, 100).candidates.len(), 8);
        assert_eq!(CandidateGrid::default_for(Algorithm::RidgeRegression, 100).candidates.len(), 10);
        assert_eq!(CandidateGrid::default_for(Algorithm::LogisticRegression, 100).candidates.len(), 1);
        assert_eq!(CandidateGrid::default_for(Algorithm::Cart, 5000).candidates.len(), 12);
        // tiny training sets collapse the leaf grid to distinct values
        let small = CandidateGrid::default_for(Algorithm::Cart, 20).candidates;
        assert!(!small.is_empty() && small.len() <= 2);
    }

    #[test]
    fn grid_from_lists_is_cartesian() {
        let mut lists = BTreeMap::new();
        lists.insert("n_trees".to_string(), vec![10.0, 20.0]);
        lists.insert("feature_fraction".to_string(), vec![0.5, 1.0, 0.25]);
        let g = CandidateGrid::from_lists(Algorithm::RandomForest, &lists).unwrap();
        assert_eq!(g.candidates.len(), 6);
        assert_eq!(
            g.candidates[0],
            ClassifierSpec::RandomForest {
                n_trees: 10,
                feature_fraction: 0.5
            }
        );
        assert!(CandidateGrid::new(vec![]).is_err());
        assert!(CandidateGrid::new(vec![ClassifierSpec::Constant, ClassifierSpec::GaussianNaiveBayes]).is_err());
    }

    #[test]
    fn spec_display() {
        assert_eq!(ClassifierSpec::Knn { k: 3 }.to_string(), "knn(k=3)");
        assert_eq!(ClassifierSpec::Constant.to_string(), "constant");
    }
}
