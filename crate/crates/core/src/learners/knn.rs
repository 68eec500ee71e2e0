use ndarray::{Array2, ArrayView2};

use crate::dataset::Label;

/// k-nearest neighbours on standardised features. The score is the fraction
/// of positive labels among the `k` nearest training rows (ties on distance
/// go to the earlier row).
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub k: usize,
    train: Array2<f64>,
    positive: Vec<bool>,
}

impl KnnModel {
    pub(super) fn fit(train: Array2<f64>, labels: &[Label], k: usize) -> Self {
        Self {
            k: k.min(train.nrows()),
            positive: labels.iter().map(|l| l.is_positive()).collect(),
            train,
        }
    }

    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        let mut d: Vec<(f64, usize)> = Vec::with_capacity(self.train.nrows());
        x.rows()
            .into_iter()
            .map(|q| {
                d.clear();
                d.extend(self.train.rows().into_iter().enumerate().map(|(i, r)| {
                    let dist: f64 = r.iter().zip(q.iter()).map(|(a, b)| (a - b).powi(2)).sum();
                    (dist, i)
                }));
                let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
                if self.k < d.len() {
                    d.select_nth_unstable_by(self.k - 1, cmp);
                }
                let hits = d[..self.k].iter().filter(|(_, i)| self.positive[*i]).count();
                hits as f64 / self.k as f64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn fraction_of_positive_neighbours() {
        let x = array![[0.0], [1.0], [2.0], [10.0], [11.0]];
        let y: Vec<Label> = [-1, 1, 1, 1, -1].iter().map(|&s| Label::from_sign(s).unwrap()).collect();
        let m = KnnModel::fit(x, &y, 3);
        let s = m.scores(array![[0.9], [10.4]].view());
        assert_eq!(s[0], 2.0 / 3.0);
        // neighbours 10, 11 and then 2 (distance 8.4)
        assert_eq!(s[1], 2.0 / 3.0);
    }
}
