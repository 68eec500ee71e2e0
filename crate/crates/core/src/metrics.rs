//! Ranking metrics over `(score, label)` pairs: ROC curve, AUC, ROC convex
//! hull and the H-measure.

use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores `>= threshold` are predicted faulty; `+inf` for the origin.
    pub threshold: f64,
}

/// ROC curve with one point per distinct score, from (0,0) to (1,1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    pub fn coordinates(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.fpr, p.tpr)).collect()
    }

    /// Trapezoidal area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
            .sum()
    }
}

fn check_inputs(scores: &[f64], labels: &[Label]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} score(s) for {} label(s)",
            scores.len(),
            labels.len()
        )));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite score {s}")));
    }
    let pos = labels.iter().filter(|l| l.is_positive()).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass(format!(
            "{pos} positive and {neg} negative label(s)"
        )));
    }
    Ok((pos, neg))
}

/// Sweeps the threshold down through the distinct scores; tied scores form a
/// single step.
pub fn roc_points(scores: &[f64], labels: &[Label]) -> Result<RocCurve> {
    let (pos, neg) = check_inputs(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
            threshold: s,
        });
    }
    Ok(RocCurve { points })
}

/// Probability that a random faulty instance outscores a random clean one,
/// ties counting one half (Mann-Whitney statistic via midranks).
pub fn auc(scores: &[f64], labels: &[Label]) -> Result<f64> {
    let (pos, neg) = check_inputs(scores, labels)?;
    let ranks = midranks(scores);
    let pos_rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, l)| l.is_positive())
        .map(|(r, _)| r)
        .sum();
    let (p, n) = (pos as f64, neg as f64);
    let value = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
    debug_assert!((value - roc_points(scores, labels)?.area()).abs() < 1e-9);
    Ok(value)
}

/// Ascending midranks (1-based); tied values share the average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = r;
        }
        i = j + 1;
    }
    ranks
}

fn cross(o: &RocPoint, a: &RocPoint, b: &RocPoint) -> f64 {
    (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr)
}

/// Upper-left convex hull of a ROC curve. Keeps (0,0) and (1,1), drops points
/// that lie on or below a hull edge (collinear within 1e-12).
pub fn roc_convex_hull(curve: &RocCurve) -> RocCurve {
    let mut pts = curve.points.clone();
    pts.sort_by(|a, b| a.fpr.total_cmp(&b.fpr).then(a.tpr.total_cmp(&b.tpr)));
    pts.dedup_by(|a, b| a.fpr == b.fpr && a.tpr == b.tpr);
    let mut hull: Vec<RocPoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) >= -1e-12 {
            hull.pop();
        }
        hull.push(p);
    }
    RocCurve { points: hull }
}

/// Beta cost-weighting for the H-measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostWeighting {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for CostWeighting {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 2.0,
        }
    }
}

impl CostWeighting {
    pub fn validate(&self) -> Result<()> {
        if self.alpha > 0.0 && self.beta > 0.0 && self.alpha.is_finite() && self.beta.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "Beta shapes must be positive, got ({}, {})",
                self.alpha, self.beta
            )))
        }
    }

    pub fn pdf(&self, c: f64) -> f64 {
        if c <= 0.0 || c >= 1.0 {
            return 0.0;
        }
        ((self.alpha - 1.0) * c.ln() + (self.beta - 1.0) * (1.0 - c).ln()
            - ln_beta(self.alpha, self.beta))
        .exp()
    }
}

/// `∫_lo^hi c·u(c) dc` and `∫_lo^hi (1-c)·u(c) dc` for the Beta density `u`.
struct BetaMoments {
    w: CostWeighting,
    mean: f64,
}

impl BetaMoments {
    fn new(w: CostWeighting) -> Self {
        Self {
            w,
            mean: w.alpha / (w.alpha + w.beta),
        }
    }

    fn upper_cdf(&self, x: f64) -> f64 {
        clamp_reg(self.w.alpha + 1.0, self.w.beta, x)
    }

    fn lower_cdf(&self, x: f64) -> f64 {
        clamp_reg(self.w.alpha, self.w.beta + 1.0, x)
    }

    fn first(&self, lo: f64, hi: f64) -> f64 {
        self.mean * (self.upper_cdf(hi) - self.upper_cdf(lo))
    }

    fn complement(&self, lo: f64, hi: f64) -> f64 {
        (1.0 - self.mean) * (self.lower_cdf(hi) - self.lower_cdf(lo))
    }
}

fn clamp_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        beta_reg(a, b, x)
    }
}

/// Expected minimum loss `∫ Q(c) u(c) dc` over the vertices of a concave
/// ROC hull, where `Q(c) = min_v [c·π1·(1 - tpr_v) + (1 - c)·π0·fpr_v]`.
///
/// Consecutive hull vertices `v_i`, `v_{i+1}` swap optimality at
/// `c = π0·Δfpr / (π0·Δfpr + π1·Δtpr)`, so the integral splits into one
/// incomplete-Beta term pair per vertex.
fn expected_min_loss(hull: &[(f64, f64)], pi1: f64, w: CostWeighting) -> f64 {
    let pi0 = 1.0 - pi1;
    let mom = BetaMoments::new(w);
    let mut lo = 0.0;
    let mut total = 0.0;
    for (i, &(fpr, tpr)) in hull.iter().enumerate() {
        let hi = match hull.get(i + 1) {
            Some(&(f2, t2)) => {
                let (df, dt) = (pi0 * (f2 - fpr), pi1 * (t2 - tpr));
                if df + dt > 0.0 {
                    (df / (df + dt)).max(lo)
                } else {
                    lo
                }
            }
            None => 1.0,
        };
        if hi > lo {
            total += pi1 * (1.0 - tpr) * mom.first(lo, hi) + pi0 * fpr * mom.complement(lo, hi);
        }
        lo = hi;
    }
    total
}

/// H-measure: `1 - L / L_ref`, with `L` the Beta-weighted expected minimum
/// misclassification loss of the scores' ROC hull and `L_ref` the same for
/// a classifier with no information (operating points (0,0) and (1,1) only).
/// Class priors are the empirical frequencies of `labels`; `c` weights the
/// cost of missing a faulty unit.
pub fn h_measure(scores: &[f64], labels: &[Label], w: CostWeighting) -> Result<f64> {
    w.validate()?;
    let curve = roc_points(scores, labels)?;
    let hull = roc_convex_hull(&curve).coordinates();
    let pi1 = labels.iter().filter(|l| l.is_positive()).count() as f64 / labels.len() as f64;
    let loss = expected_min_loss(&hull, pi1, w);
    let reference = expected_min_loss(&[(0.0, 0.0), (1.0, 1.0)], pi1, w);
    Ok((1.0 - loss / reference).clamp(0.0, 1.0))
}

/// Pearson product-moment correlation.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need two vectors of equal length >= 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::InvalidArgument("correlation of a constant vector".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(v: &[i8]) -> Vec<Label> {
        v.iter().map(|&s| Label::from_sign(s).unwrap()).collect()
    }

    #[test]
    fn roc_two_point_perfect() {
        let c = roc_points(&[0.9, 0.1], &lab(&[1, -1])).unwrap();
        assert_eq!(c.coordinates(), vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn roc_single_tie_group() {
        let c = roc_points(&[0.3; 6], &lab(&[1, -1, 1, -1, -1, -1])).unwrap();
        assert_eq!(c.coordinates(), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn roc_requires_both_classes() {
        assert!(matches!(roc_points(&[0.1, 0.2], &lab(&[1, 1])), Err(Error::SingleClass(_))));
        assert!(matches!(auc(&[0.1, 0.2], &lab(&[-1, -1])), Err(Error::SingleClass(_))));
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.9, 0.8, 0.2, 0.1], &lab(&[1, 1, -1, -1])).unwrap(), 1.0);
        assert_eq!(auc(&[0.5; 4], &lab(&[1, -1, 1, -1])).unwrap(), 0.5);
        assert_eq!(auc(&[0.9, 0.8, 0.7, 0.6], &lab(&[1, -1, 1, -1])).unwrap(), 0.75);
    }

    #[test]
    fn auc_below_half_is_kept() {
        assert_eq!(auc(&[0.1, 0.9], &lab(&[1, -1])).unwrap(), 0.0);
    }

    #[test]
    fn hull_of_convex_curve_is_identity() {
        let c = roc_points(&[0.9, 0.8, 0.7, 0.6, 0.5], &lab(&[1, 1, -1, 1, -1])).unwrap();
        let hull = roc_convex_hull(&c);
        let again = roc_convex_hull(&hull);
        assert_eq!(hull, again);
        let diag = RocCurve {
            points: vec![
                RocPoint { fpr: 0.0, tpr: 0.0, threshold: f64::INFINITY },
                RocPoint { fpr: 0.5, tpr: 0.5, threshold: 1.0 },
                RocPoint { fpr: 1.0, tpr: 1.0, threshold: 0.0 },
            ],
        };
        assert_eq!(roc_convex_hull(&diag).coordinates(), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn h_measure_extremes() {
        let y = lab(&[1, -1, -1, 1, -1, -1, -1]);
        assert!(h_measure(&[0.2; 7], &y, CostWeighting::default()).unwrap().abs() < 1e-12);
        let s: Vec<f64> = y.iter().map(|l| if l.is_positive() { 1.0 } else { 0.0 }).collect();
        assert!((h_measure(&s, &y, CostWeighting::default()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_pdf_normalised() {
        let w = CostWeighting::default();
        // Beta(2,2) density is 6c(1-c)
        assert!((w.pdf(0.3) - 6.0 * 0.3 * 0.7).abs() < 1e-12);
        assert!(CostWeighting { alpha: 0.0, beta: 2.0 }.validate().is_err());
    }

    #[test]
    fn pearson_examples() {
        let a = [1.0, 2.0, 4.0, 7.0];
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson_correlation(&a, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!(pearson_correlation(&a, &[3.0; 4]).is_err());
    }
}
