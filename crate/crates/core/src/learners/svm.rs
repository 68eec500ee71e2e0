use ndarray::ArrayView2;
use rand::seq::SliceRandom;

use crate::dataset::Label;
use crate::seed;

const MAX_EPOCHS: usize = 1000;
const EPS: f64 = 1e-3;

/// Linear SVM with hinge loss, bias folded in as a constant feature.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearSvmModel {
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|r| self.bias + r.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }
}

/// Dual coordinate descent on `min 1/2 |w|^2 + C sum max(0, 1 - y w.x)`.
/// Stops when the projected-gradient spread of an epoch falls below `EPS`.
pub(super) fn fit(x: ArrayView2<'_, f64>, labels: &[Label], c: f64, rng_seed: u64) -> (LinearSvmModel, bool, usize) {
    let (n, p) = x.dim();
    let y: Vec<f64> = labels.iter().map(|l| f64::from(l.sign())).collect();
    let q: Vec<f64> = x.rows().into_iter().map(|r| r.dot(&r) + 1.0).collect();
    let mut w = vec![0.0; p + 1];
    let mut alpha = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seed::rng(rng_seed);
    let mut converged = false;
    let mut epochs = 0;
    for epoch in 1..=MAX_EPOCHS {
        epochs = epoch;
        order.shuffle(&mut rng);
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &i in &order {
            let row = x.row(i);
            let wx = w[p] + row.iter().zip(&w[..p]).map(|(a, b)| a * b).sum::<f64>();
            let g = y[i] * wx - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / q[i]).clamp(0.0, c);
                let delta = (alpha[i] - old) * y[i];
                for (wj, xj) in w[..p].iter_mut().zip(row.iter()) {
                    *wj += delta * xj;
                }
                w[p] += delta;
            }
        }
        if pg_max - pg_min < EPS {
            converged = true;
            break;
        }
    }
    let bias = w[p];
    w.truncate(p);
    (LinearSvmModel { weights: w, bias }, converged, epochs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn separates_linearly_separable_data() {
        let x = array![[-2.0, 0.1], [-1.5, -0.3], [-1.0, 0.2], [1.0, 0.0], [1.4, -0.2], [2.2, 0.3]];
        let y: Vec<Label> = [-1, -1, -1, 1, 1, 1].iter().map(|&s| Label::from_sign(s).unwrap()).collect();
        let (m, converged, _) = fit(x.view(), &y, 10.0, 4);
        assert!(converged);
        let s = m.scores(x.view());
        for (v, l) in s.iter().zip(&y) {
            assert!(v * f64::from(l.sign()) > 0.0);
        }
    }
}
