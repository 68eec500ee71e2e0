use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use crate::dataset::Label;
use crate::seed;

/// One hidden layer of logistic units and a logistic output, trained by
/// full-batch gradient descent on cross-entropy. The score is the output
/// logit.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// `hidden x p`
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array1<f64>,
    pub b2: f64,
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl MlpModel {
    fn hidden(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut h = x.dot(&self.w1.t());
        h += &self.b1;
        h.mapv_inplace(sigmoid);
        h
    }

    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        (self.hidden(x).dot(&self.w2) + self.b2).to_vec()
    }
}

pub(super) fn fit(
    x: ArrayView2<'_, f64>,
    labels: &[Label],
    hidden: usize,
    learning_rate: f64,
    epochs: usize,
    rng_seed: u64,
) -> MlpModel {
    let (n, p) = x.dim();
    let mut rng = seed::rng(rng_seed);
    let a1 = 1.0 / (p as f64).sqrt();
    let a2 = 1.0 / (hidden as f64).sqrt();
    let mut m = MlpModel {
        w1: Array2::from_shape_fn((hidden, p), |_| rng.random_range(-a1..a1)),
        b1: Array1::zeros(hidden),
        w2: Array1::from_shape_fn(hidden, |_| rng.random_range(-a2..a2)),
        b2: 0.0,
    };
    let y = Array1::from_iter(labels.iter().map(|l| f64::from(u8::from(l.is_positive()))));
    let scale = learning_rate / n as f64;
    for _ in 0..epochs {
        let h = m.hidden(x);
        let out = (h.dot(&m.w2) + m.b2).mapv(sigmoid);
        let delta_out = &out - &y;
        let grad_w2 = h.t().dot(&delta_out);
        let grad_b2 = delta_out.sum();
        // back through the hidden sigmoid
        let mut delta_h = Array2::from_shape_fn((n, hidden), |(i, j)| delta_out[i] * m.w2[j]);
        delta_h.zip_mut_with(&h, |d, &hv| *d *= hv * (1.0 - hv));
        let grad_w1 = delta_h.t().dot(&x);
        let grad_b1 = delta_h.sum_axis(Axis(0));
        m.w2.scaled_add(-scale, &grad_w2);
        m.b2 -= scale * grad_b2;
        m.w1.scaled_add(-scale, &grad_w1);
        m.b1.scaled_add(-scale, &grad_b1);
    }
    m
}
