use ndarray::ArrayView2;

use crate::dataset::Label;

/// Gaussian naive Bayes. The score is the posterior log-odds of the
/// positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    pub log_prior_odds: f64,
    /// Per-class feature means, `[negative, positive]`.
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
}

pub(super) fn fit(x: ArrayView2<'_, f64>, labels: &[Label]) -> NaiveBayesModel {
    let p = x.ncols();
    let mut means = [vec![0.0; p], vec![0.0; p]];
    let mut variances = [vec![0.0; p], vec![0.0; p]];
    let mut counts = [0usize; 2];
    for (row, l) in x.rows().into_iter().zip(labels) {
        let c = usize::from(l.is_positive());
        counts[c] += 1;
        for (m, v) in means[c].iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for c in 0..2 {
        means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
    }
    for (row, l) in x.rows().into_iter().zip(labels) {
        let c = usize::from(l.is_positive());
        for j in 0..p {
            variances[c][j] += (row[j] - means[c][j]).powi(2);
        }
    }
    let mut largest = 0.0f64;
    for c in 0..2 {
        variances[c].iter_mut().for_each(|v| *v /= counts[c] as f64);
        largest = variances[c].iter().fold(largest, |a, &b| a.max(b));
    }
    let floor = 1e-9 * largest.max(1.0);
    for v in variances.iter_mut().flatten() {
        *v += floor;
    }
    NaiveBayesModel {
        log_prior_odds: (counts[1] as f64).ln() - (counts[0] as f64).ln(),
        means,
        variances,
    }
}

impl NaiveBayesModel {
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|row| {
                let mut s = self.log_prior_odds;
                for (j, &v) in row.iter().enumerate() {
                    for (c, sign) in [(1usize, 1.0), (0usize, -1.0)] {
                        let var = self.variances[c][j];
                        let ll = -0.5 * (var.ln() + (v - self.means[c][j]).powi(2) / var);
                        s += sign * ll;
                    }
                }
                s
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn symmetric_classes_score_zero_at_midpoint() {
        let x = array![[-2.0, 1.0], [-1.0, -1.0], [-3.0, 0.0], [2.0, 1.0], [1.0, -1.0], [3.0, 0.0]];
        let y: Vec<Label> = [-1, -1, -1, 1, 1, 1].iter().map(|&s| Label::from_sign(s).unwrap()).collect();
        let m = fit(x.view(), &y);
        let s = m.scores(array![[0.0, 0.0], [0.0, 5.0]].view());
        assert!(s[0].abs() < 1e-9);
        assert!(s[1].abs() < 1e-9);
        let s = m.scores(array![[1.5, 0.0], [-1.5, 0.0]].view());
        assert!(s[0] > 0.0 && s[1] < 0.0);
        assert!((s[0] + s[1]).abs() < 1e-9);
    }
}
