//! Gaussian blob datasets for smoke tests and examples.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub name: String,
    pub n_rows: usize,
    pub n_features: usize,
    pub positive_fraction: f64,
    /// Distance between the class means along every axis, in units of the
    /// per-feature standard deviation.
    pub separation: f64,
    pub seed: u64,
}

/// Two isotropic unit-variance Gaussian classes whose means differ by
/// `separation` on each feature. Rows are shuffled.
pub fn gaussian_blobs(spec: &BlobSpec) -> Result<Dataset> {
    if !(spec.positive_fraction > 0.0 && spec.positive_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "positive_fraction must lie in (0, 1), got {}",
            spec.positive_fraction
        )));
    }
    let n_pos = ((spec.n_rows as f64 * spec.positive_fraction).round() as usize).clamp(1, spec.n_rows.saturating_sub(1));
    let mut labels: Vec<Label> = (0..spec.n_rows)
        .map(|i| if i < n_pos { Label::Positive } else { Label::Negative })
        .collect();
    let mut rng = seed::rng(spec.seed);
    labels.shuffle(&mut rng);
    let half = spec.separation / 2.0;
    let features = Array2::from_shape_fn((spec.n_rows, spec.n_features), |(i, _)| {
        let z: f64 = StandardNormal.sample(&mut rng);
        z + if labels[i].is_positive() { half } else { -half }
    });
    let names = (0..spec.n_features).map(|j| format!("x{j}")).collect();
    Dataset::new(spec.name.clone(), features, names, labels, format!("blobs:seed={}", spec.seed))
}
