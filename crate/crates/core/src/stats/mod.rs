//! Statistical comparison of classifiers across datasets.

mod bayes;
mod friedman;
mod matrix;
mod nemenyi;
mod wilcoxon;

pub use bayes::{bayesian_rope_test, BayesOptions, PosteriorTriple, RopeBounds, Verdict};
pub use friedman::{friedman_test, FriedmanResult};
pub use matrix::{
    average_ranks, ingest_metric_matrix, parse_metric_matrix, MetricKind, MetricMatrix, RankTable,
};
pub use nemenyi::{critical_distance, nemenyi_pairwise, nemenyi_q, PairwiseGap, Q_ALPHA_05};
pub(crate) use matrix::format_float;
pub use wilcoxon::{
    wilcoxon_exact_p, wilcoxon_normal_p, wilcoxon_signed_rank, WilcoxonMethod, WilcoxonResult,
    EXACT_LIMIT,
};
