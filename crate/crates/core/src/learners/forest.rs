use ndarray::ArrayView2;
use rand::Rng;
use rayon::prelude::*;

use super::tree::{DecisionTree, TreeParams};
use crate::dataset::Label;
use crate::seed;

/// Bagged CART trees with per-split feature subsampling. The score is the
/// fraction of trees voting positive (leaf fraction above one half).
#[derive(Debug, Clone, PartialEq)]
pub struct RandomForestModel {
    pub trees: Vec<DecisionTree>,
    pub max_features: usize,
}

/// Seed of tree `t` in a forest fitted with `rng_seed`.
pub fn tree_seed(rng_seed: u64, t: usize) -> u64 {
    seed::derive_seed(rng_seed, &["tree", &t.to_string()])
}

/// `n` row indices drawn uniformly with replacement from the tree seed's
/// stream.
pub fn bootstrap_sample(n: usize, tree_seed: u64) -> Vec<usize> {
    let mut rng = seed::rng(tree_seed);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

pub(super) fn fit(
    x: ArrayView2<'_, f64>,
    labels: &[Label],
    n_trees: usize,
    feature_fraction: f64,
    rng_seed: u64,
) -> RandomForestModel {
    let p = x.ncols();
    let max_features = ((feature_fraction * p as f64).round() as usize).clamp(1, p);
    let params = TreeParams {
        min_leaf: 1,
        max_depth: None,
        max_features: Some(max_features),
    };
    let trees = (0..n_trees)
        .into_par_iter()
        .map(|t| {
            let s = tree_seed(rng_seed, t);
            let rows = bootstrap_sample(x.nrows(), s);
            DecisionTree::fit(x, labels, &rows, &params, seed::derive_seed(s, &["features"]))
        })
        .collect();
    RandomForestModel { trees, max_features }
}

impl RandomForestModel {
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        let n = self.trees.len() as f64;
        x.rows()
            .into_iter()
            .map(|r| {
                let row = r.to_vec();
                let votes = self.trees.iter().filter(|t| t.leaf_value(&row) > 0.5).count();
                votes as f64 / n
            })
            .collect()
    }
}
