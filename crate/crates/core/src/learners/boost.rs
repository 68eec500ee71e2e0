use ndarray::ArrayView2;

use crate::dataset::Label;

/// Decision stump: predicts `polarity` when `x[feature] > threshold`, else
/// `-polarity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: f64,
    pub alpha: f64,
    /// Weighted training error when the stump was chosen.
    pub error: f64,
}

impl Stump {
    pub fn predict(&self, row: &[f64]) -> f64 {
        if row[self.feature] > self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// AdaBoost.M1 over decision stumps. The score is `sum alpha_m h_m(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaBoostModel {
    pub stages: Vec<Stump>,
}

impl AdaBoostModel {
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|r| {
                let row = r.to_vec();
                self.stages.iter().map(|s| s.alpha * s.predict(&row)).sum()
            })
            .collect()
    }
}

const MIN_ERROR: f64 = 1e-10;

/// Weighted-error-minimising stump. Ties keep the first feature, the
/// smallest threshold and positive polarity. The all-on-one-side threshold
/// below the smallest value is a candidate too.
pub fn best_stump(x: ArrayView2<'_, f64>, y: &[f64], w: &[f64]) -> (usize, f64, f64, f64) {
    let n = x.nrows();
    let total_pos: f64 = y.iter().zip(w).filter(|(t, _)| **t > 0.0).map(|(_, v)| v).sum();
    let total: f64 = w.iter().sum();
    let mut best = (0usize, f64::NEG_INFINITY, 1.0, f64::INFINITY);
    let mut order: Vec<usize> = (0..n).collect();
    for j in 0..x.ncols() {
        order.sort_by(|&a, &b| x[[a, j]].total_cmp(&x[[b, j]]));
        let mut below_pos = 0.0;
        let mut below_neg = 0.0;
        let consider = |thr: f64, below_pos: f64, below_neg: f64, best: &mut (usize, f64, f64, f64)| {
            let err_plus = below_pos + (total - total_pos - below_neg);
            let err_minus = total - err_plus;
            for (pol, err) in [(1.0, err_plus), (-1.0, err_minus)] {
                if err < best.3 - 1e-15 {
                    *best = (j, thr, pol, err);
                }
            }
        };
        consider(x[[order[0], j]] - 1.0, 0.0, 0.0, &mut best);
        for k in 0..n - 1 {
            let i = order[k];
            if y[i] > 0.0 {
                below_pos += w[i];
            } else {
                below_neg += w[i];
            }
            let (a, b) = (x[[i, j]], x[[order[k + 1], j]]);
            if a == b {
                continue;
            }
            let mut t = a + (b - a) / 2.0;
            if t >= b {
                t = a;
            }
            consider(t, below_pos, below_neg, &mut best);
        }
    }
    (best.0, best.1, best.2, best.3 / total)
}

pub(super) fn fit(x: ArrayView2<'_, f64>, labels: &[Label], rounds: usize) -> AdaBoostModel {
    let n = x.nrows();
    let y: Vec<f64> = labels.iter().map(|l| f64::from(l.sign())).collect();
    let mut w = vec![1.0 / n as f64; n];
    let mut stages = Vec::new();
    for _ in 0..rounds {
        let (feature, threshold, polarity, error) = best_stump(x, &y, &w);
        if error >= 0.5 {
            break;
        }
        let eps = error.max(MIN_ERROR);
        let alpha = ((1.0 - eps) / eps).ln();
        let stump = Stump {
            feature,
            threshold,
            polarity,
            alpha,
            error,
        };
        stages.push(stump);
        if error <= MIN_ERROR {
            break;
        }
        for (i, wi) in w.iter_mut().enumerate() {
            let row: Vec<f64> = x.row(i).to_vec();
            if stump.predict(&row) != y[i] {
                *wi *= alpha.exp();
            }
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= s);
    }
    AdaBoostModel { stages }
}
