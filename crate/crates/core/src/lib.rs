//! Benchmarking harness for software defect classifiers.
//!
//! The crate covers the whole evaluation pipeline: loading and cleaning
//! tabular defect data, oversampling the faulty class, nested
//! cross-validation with model selection over candidate grids, scoring with
//! AUC and the H-measure, and comparing classifiers across datasets with
//! average ranks, the Friedman test, Nemenyi critical distances, Wilcoxon
//! signed-rank tests and a Bayesian signed-rank test with a region of
//! practical equivalence.
//!
//! Labels follow the usual convention: [`Label::Positive`] (+1) marks a
//! faulty unit, [`Label::Negative`] (-1) a clean one. Every score produced by
//! a learner is "higher means more likely faulty".

pub mod dataset;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod metrics;
pub mod report;
pub mod sampling;
pub mod seed;
pub mod stats;
pub mod synthetic;

pub use dataset::{CleaningPolicy, CleaningReport, Dataset, Label, ScalerParams};
pub use error::{Error, Result};
pub use learners::{CandidateGrid, ClassifierSpec, TrainedModel};
pub use metrics::{CostWeighting, RocCurve};
pub use stats::{MetricKind, MetricMatrix, PosteriorTriple, RankTable, RopeBounds};

/// Version string embedded into report provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
