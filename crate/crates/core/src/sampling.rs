//! Minority oversampling (ADASYN, SMOTE) and stratified fold assignment.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, ScalerParams};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Minority share to reach, in (0, 0.5].
    pub target_minority_ratio: f64,
    /// Neighbour count.
    pub k: usize,
    pub rng_seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            target_minority_ratio: 0.20,
            k: 5,
            rng_seed: 0,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_minority_ratio > 0.0 && self.target_minority_ratio <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "target_minority_ratio must lie in (0, 0.5], got {}",
                self.target_minority_ratio
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("neighbour count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Number of synthetic minority rows needed so that the minority share
/// reaches `target_ratio`: `max(0, round((r*n - m) / (1 - r)))`.
pub fn required_synthetic_count(n_minority: usize, n_total: usize, target_ratio: f64) -> usize {
    let m = n_minority as f64;
    let n = n_total as f64;
    if m / n >= target_ratio {
        return 0;
    }
    let g = ((target_ratio * n - m) / (1.0 - target_ratio)).round();
    if g > 0.0 {
        g as usize
    } else {
        0
    }
}

/// Splits `total` into integer parts proportional to `weights`, handing the
/// remainder to the largest fractional parts (earliest index on ties).
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn squared_distance(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Indices of the `k` nearest candidates to `x[query]`, excluding `query`
/// itself. Ties break on the lower index.
fn nearest(x: ArrayView2<'_, f64>, query: usize, candidates: &[usize], k: usize) -> Vec<usize> {
    let q = x.row(query);
    let mut d: Vec<(f64, usize)> = candidates
        .iter()
        .filter(|&&c| c != query)
        .map(|&c| (squared_distance(q, x.row(c)), c))
        .collect();
    let k = k.min(d.len());
    if k == 0 {
        return Vec::new();
    }
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < d.len() {
        d.select_nth_unstable_by(k - 1, cmp);
        d.truncate(k);
    }
    d.sort_by(cmp);
    d.into_iter().map(|(_, i)| i).collect()
}

enum Allocation {
    Adaptive,
    Uniform,
}

fn oversample(d: &Dataset, cfg: &SamplingConfig, allocation: Allocation) -> Result<Dataset> {
    cfg.validate()?;
    let (pos, neg) = d.class_counts();
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass(format!(
            "cannot oversample '{}' with {pos} positive and {neg} negative row(s)",
            d.name()
        )));
    }
    let minority = d.minority_label();
    let minority_rows: Vec<usize> = (0..d.n_rows()).filter(|&r| d.labels()[r] == minority).collect();
    let m = minority_rows.len();
    let g = required_synthetic_count(m, d.n_rows(), cfg.target_minority_ratio);
    if g == 0 {
        return Ok(d.clone());
    }

    let raw = d.features();
    let scaled = ScalerParams::fit(raw)?.transform(raw)?;
    let mut rng = seed::rng(cfg.rng_seed);
    let p = d.n_features();

    if m == 1 {
        let src = raw.row(minority_rows[0]);
        let rows = Array2::from_shape_fn((g, p), |(_, j)| src[j]);
        return Ok(d.with_synthetic_rows(&rows, minority));
    }

    let budget = match allocation {
        Allocation::Adaptive => {
            let all: Vec<usize> = (0..d.n_rows()).collect();
            let hardness: Vec<f64> = minority_rows
                .iter()
                .map(|&i| {
                    let nn = nearest(scaled.view(), i, &all, cfg.k);
                    let majority = nn.iter().filter(|&&j| d.labels()[j] != minority).count();
                    majority as f64 / cfg.k as f64
                })
                .collect();
            if hardness.iter().all(|&r| r == 0.0) {
                uniform_budget(m, g)
            } else {
                largest_remainder(&hardness, g)
            }
        }
        Allocation::Uniform => uniform_budget(m, g),
    };

    let k_minority = cfg.k.min(m - 1);
    let mut rows = Array2::<f64>::zeros((g, p));
    let mut out = 0;
    for (slot, &i) in minority_rows.iter().enumerate() {
        if budget[slot] == 0 {
            continue;
        }
        let nn = nearest(scaled.view(), i, &minority_rows, k_minority);
        let xi = raw.row(i);
        for _ in 0..budget[slot] {
            let z = nn[rng.random_range(0..nn.len())];
            let lambda: f64 = rng.random();
            let xz = raw.row(z);
            for j in 0..p {
                rows[[out, j]] = xi[j] + lambda * (xz[j] - xi[j]);
            }
            out += 1;
        }
    }
    debug_assert_eq!(out, g);
    Ok(d.with_synthetic_rows(&rows, minority))
}

fn uniform_budget(m: usize, g: usize) -> Vec<usize> {
    (0..m).map(|i| g / m + usize::from(i < g % m)).collect()
}

/// Adaptive synthetic oversampling.
///
/// Minority points whose `k` nearest neighbours (standardised features,
/// Euclidean, whole dataset) are mostly majority receive proportionally more
/// synthetic points. Each synthetic point interpolates between a minority
/// point and one of its `k` nearest minority neighbours, in the original
/// feature space. Original rows are left untouched and come first; synthetic
/// rows follow, grouped by donor in row order.
pub fn adasyn(d: &Dataset, cfg: &SamplingConfig) -> Result<Dataset> {
    oversample(d, cfg, Allocation::Adaptive)
}

/// SMOTE: like [`adasyn`] but every minority point donates the same number
/// of synthetic rows (remainder handed out round-robin).
pub fn smote(d: &Dataset, cfg: &SamplingConfig) -> Result<Dataset> {
    oversample(d, cfg, Allocation::Uniform)
}

/// Assignment of every row to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }
}

/// Stratified assignment: each class is shuffled with `rng_seed` and dealt
/// round-robin, negatives continuing where positives stopped so fold sizes
/// also balance.
pub fn stratified_folds(labels: &[Label], k: usize, rng_seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = seed::rng(rng_seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [Label::Positive, Label::Negative] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(Error::FoldConstruction {
                class: class.sign(),
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldPlan { k, assignment })
}
