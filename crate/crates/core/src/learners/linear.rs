use nalgebra::{DMatrix, DVector};
use ndarray::ArrayView2;

use crate::dataset::Label;
use crate::error::{Error, Result};

const JITTER: f64 = 1e-8;
const MAX_ITER: usize = 100;
const TOL: f64 = 1e-8;

/// Logistic regression fitted by iteratively reweighted least squares.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub intercept: f64,
    /// Coefficients on the standardised scale.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
}

impl LogisticModel {
    /// Linear predictor (log-odds).
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        linear_scores(x, self.intercept, &self.coefficients)
    }
}

fn linear_scores(x: ArrayView2<'_, f64>, intercept: f64, w: &[f64]) -> Vec<f64> {
    x.rows()
        .into_iter()
        .map(|r| intercept + r.iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

fn design(x: ArrayView2<'_, f64>) -> DMatrix<f64> {
    let (n, p) = x.dim();
    DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { x[[i, j - 1]] })
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(t))` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn deviance(eta: &DVector<f64>, y: &[f64]) -> f64 {
    2.0 * eta
        .iter()
        .zip(y)
        .map(|(&e, &t)| softplus(e) - t * e)
        .sum::<f64>()
}

fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Some(ch.solve(b));
    }
    a.svd(true, true).solve(b, 1e-12).ok()
}

/// Newton / IRLS on the binomial deviance with a small ridge jitter on the
/// normal equations. Step halving guards against divergence on separable
/// data. Returns `(model, converged, iterations)`.
pub(super) fn fit_logistic(x: ArrayView2<'_, f64>, labels: &[Label]) -> (LogisticModel, bool, usize) {
    let xd = design(x);
    let q = xd.ncols();
    let y: Vec<f64> = labels.iter().map(|l| f64::from(u8::from(l.is_positive()))).collect();
    let mut beta = DVector::<f64>::zeros(q);
    let mut eta = &xd * &beta;
    let mut dev = deviance(&eta, &y);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let p: Vec<f64> = eta.iter().map(|&e| sigmoid(e)).collect();
        let w: Vec<f64> = p.iter().map(|&v| (v * (1.0 - v)).max(1e-12)).collect();
        let mut xtwx = DMatrix::<f64>::zeros(q, q);
        let mut grad = DVector::<f64>::zeros(q);
        for i in 0..xd.nrows() {
            let row = xd.row(i);
            for a in 0..q {
                grad[a] += row[a] * (y[i] - p[i]);
                let wa = w[i] * row[a];
                for b in a..q {
                    xtwx[(a, b)] += wa * row[b];
                }
            }
        }
        for a in 0..q {
            xtwx[(a, a)] += JITTER;
            for b in 0..a {
                xtwx[(a, b)] = xtwx[(b, a)];
            }
        }
        let Some(step) = solve_spd(xtwx, &grad) else {
            break;
        };
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = &beta + &step * scale;
            let cand_eta = &xd * &cand;
            let cand_dev = deviance(&cand_eta, &y);
            if cand_dev.is_finite() && cand_dev <= dev + 1e-12 * dev.abs() {
                accepted = Some((cand, cand_eta, cand_dev));
                break;
            }
            scale *= 0.5;
        }
        let Some((b, e, d)) = accepted else {
            break;
        };
        let change = (dev - d).abs() / (d.abs() + 0.1);
        beta = b;
        eta = e;
        dev = d;
        if change < TOL {
            converged = true;
            break;
        }
    }
    let model = LogisticModel {
        intercept: beta[0],
        coefficients: beta.iter().skip(1).copied().collect(),
        iterations,
    };
    (model, converged, iterations)
}

/// Least-squares regression on ±1 targets with an L2 penalty on the slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeModel {
    pub lambda: f64,
    pub intercept: f64,
    /// Coefficients on the standardised scale.
    pub coefficients: Vec<f64>,
}

impl RidgeModel {
    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        linear_scores(x, self.intercept, &self.coefficients)
    }

    /// Coefficients and intercept mapped back to raw feature units given the
    /// scaler that produced the standardised inputs.
    pub fn original_scale(&self, means: &[f64], stds: &[f64]) -> (f64, Vec<f64>) {
        let w: Vec<f64> = self.coefficients.iter().zip(stds).map(|(c, s)| c / s).collect();
        let b = self.intercept - w.iter().zip(means).map(|(a, m)| a * m).sum::<f64>();
        (b, w)
    }
}

/// Closed form `(Xc'Xc + lambda I) w = Xc'(y - ybar)` on centred inputs; the
/// intercept is not penalised.
pub(super) fn fit_ridge(x: ArrayView2<'_, f64>, labels: &[Label], lambda: f64) -> Result<RidgeModel> {
    let (n, p) = x.dim();
    let y: Vec<f64> = labels.iter().map(|l| f64::from(l.sign())).collect();
    let ybar = y.iter().sum::<f64>() / n as f64;
    let means: Vec<f64> = (0..p).map(|j| x.column(j).sum() / n as f64).collect();
    let xc = DMatrix::from_fn(n, p, |i, j| x[[i, j]] - means[j]);
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - ybar));
    let mut gram = xc.transpose() * &xc;
    for j in 0..p {
        gram[(j, j)] += lambda;
    }
    let rhs = xc.transpose() * yc;
    let w = solve_spd(gram, &rhs).ok_or_else(|| Error::InvalidSpec("ridge normal equations are singular".into()))?;
    let intercept = ybar - w.iter().zip(&means).map(|(a, m)| a * m).sum::<f64>();
    Ok(RidgeModel {
        lambda,
        intercept,
        coefficients: w.iter().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    fn lab(v: &[i8]) -> Vec<Label> {
        v.iter().map(|&s| Label::from_sign(s).unwrap()).collect()
    }

    #[test]
    fn logistic_matches_known_fit() {
        // overlapping classes so the MLE exists
        let x = array![[0.0], [1.0], [2.0], [3.0], [4.0], [5.0], [6.0], [7.0]];
        let y = lab(&[-1, -1, -1, 1, -1, 1, 1, 1]);
        let (m, converged, _) = fit_logistic(x.view(), &y);
        assert!(converged);
        // score equation: sum (y - p) x = 0 and sum (y - p) = 0
        let s = m.scores(x.view());
        let r: Vec<f64> = s
            .iter()
            .zip(&y)
            .map(|(e, l)| f64::from(u8::from(l.is_positive())) - sigmoid(*e))
            .collect();
        assert!(r.iter().sum::<f64>().abs() < 1e-6);
        assert!(r.iter().zip(x.column(0)).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-6);
    }

    #[test]
    fn logistic_separable_stays_finite() {
        let x = array![[-2.0], [-1.0], [-0.5], [0.5], [1.0], [2.0]];
        let y = lab(&[-1, -1, -1, 1, 1, 1]);
        let (m, _, iters) = fit_logistic(x.view(), &y);
        assert!(iters <= MAX_ITER);
        assert!(m.coefficients[0].is_finite() && m.coefficients[0] > 0.0);
    }

    #[test]
    fn ridge_zero_lambda_is_ols() {
        let x = array![[1.0, 0.0], [2.0, 1.0], [3.0, 0.0], [4.0, 1.0], [5.0, 3.0]];
        let y = lab(&[-1, -1, 1, 1, 1]);
        let m = fit_ridge(x.view(), &y, 0.0).unwrap();
        // normal equations of the full design must hold
        let s = m.scores(x.view());
        let r: Vec<f64> = s.iter().zip(&y).map(|(a, l)| f64::from(l.sign()) - a).collect();
        let xa: Array2<f64> = x.clone();
        assert!(r.iter().sum::<f64>().abs() < 1e-9);
        for j in 0..2 {
            assert!(r.iter().zip(xa.column(j)).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-9);
        }
    }
}
