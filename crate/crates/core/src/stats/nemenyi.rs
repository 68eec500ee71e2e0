use serde::{Deserialize, Serialize};

use super::matrix::RankTable;
use crate::error::{Error, Result};

/// Two-tailed Nemenyi critical values at α = 0.05 for k = 2..=20: the
/// 0.95 quantile of the studentized range with infinite degrees of freedom,
/// divided by √2.
pub const Q_ALPHA_05: [f64; 19] = [
    1.960, 2.344, 2.569, 2.728, 2.850, 2.948, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];

pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if (alpha - 0.05).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "only alpha = 0.05 is tabulated, got {alpha}"
        )));
    }
    if !(2..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "q_alpha is tabulated for 2 <= k <= 20, got k = {k}"
        )));
    }
    Ok(Q_ALPHA_05[k - 2])
}

/// `q_alpha · sqrt(k(k+1) / (6N))`.
pub fn critical_distance(k: usize, n: usize, q_alpha: f64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    q_alpha * (k * (k + 1.0) / (6.0 * n)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseGap {
    pub i: usize,
    pub j: usize,
    pub rank_gap: f64,
    /// `|R_i - R_j| >= cd`.
    pub significant: bool,
}

pub fn nemenyi_pairwise(ranks: &RankTable, cd: f64) -> Vec<PairwiseGap> {
    let k = ranks.k();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let gap = (ranks.average_ranks[i] - ranks.average_ranks[j]).abs();
            out.push(PairwiseGap {
                i,
                j,
                rank_gap: gap,
                significant: gap >= cd,
            });
        }
    }
    out
}
