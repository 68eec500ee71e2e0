use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use super::matrix::{average_ranks, MetricMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Tie-corrected Friedman chi-square test over within-dataset ranks.
///
/// `chi2 = (12 ΣR_j² - 3N²k(k+1)²) / (Nk(k+1) - Σ(t³ - t)/(k - 1))`, with
/// `R_j` the rank sums and `t` the tie-group sizes. The p-value is the
/// chi-square upper tail with `k - 1` degrees of freedom.
pub fn friedman_test(m: &MetricMatrix) -> Result<FriedmanResult> {
    m.check_comparable()?;
    let k = m.k();
    if k < 3 {
        return Err(Error::InvalidArgument(
            "Friedman test needs at least 3 classifiers; compare two with the Wilcoxon signed-rank test"
                .into(),
        ));
    }
    let ranks = average_ranks(m);
    let (kf, nf) = (k as f64, m.n() as f64);
    let rank_sums: Vec<f64> = (0..k)
        .map(|i| ranks.per_dataset.iter().map(|col| col[i]).sum())
        .collect();
    let ties: f64 = ranks.per_dataset.iter().map(|col| tie_term(col)).sum();
    let num = 12.0 * rank_sums.iter().map(|r| r * r).sum::<f64>() - 3.0 * nf * nf * kf * (kf + 1.0).powi(2);
    let den = nf * kf * (kf + 1.0) - ties / (kf - 1.0);
    let df = k - 1;
    if den <= 1e-12 * nf * kf * (kf + 1.0) {
        return Ok(FriedmanResult {
            statistic: 0.0,
            df,
            p_value: 1.0,
        });
    }
    let statistic = (num / den).max(0.0);
    Ok(FriedmanResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
    })
}

/// `Σ (t³ - t)` over groups of equal ranks.
fn tie_term(ranks: &[f64]) -> f64 {
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        total += t * t * t - t;
        i = j + 1;
    }
    total
}

pub(crate) fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(df as f64 / 2.0, x / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::MetricKind;

    fn matrix(values: Vec<Vec<f64>>) -> MetricMatrix {
        let k = values.len();
        let n = values[0].len();
        MetricMatrix::new(
            MetricKind::Auc,
            (0..k).map(|i| format!("c{i}")).collect(),
            (0..n).map(|j| format!("d{j}")).collect(),
            values,
        )
        .unwrap()
    }

    #[test]
    fn identical_rows_give_no_evidence() {
        let r = friedman_test(&matrix(vec![vec![0.7, 0.8, 0.9]; 4])).unwrap();
        assert_eq!((r.statistic, r.p_value, r.df), (0.0, 1.0, 3));
    }

    #[test]
    fn two_classifiers_rejected() {
        assert!(friedman_test(&matrix(vec![vec![0.7, 0.8], vec![0.6, 0.9]])).is_err());
    }

    #[test]
    fn untied_statistic_matches_textbook_form() {
        // rank sums (5, 7, 12) over N=4, k=3: 12/(4·3·4)·218 - 3·4·4 = 6.5
        let m = matrix(vec![
            vec![0.9, 0.9, 0.9, 0.5],
            vec![0.5, 0.5, 0.5, 0.9],
            vec![0.1, 0.1, 0.1, 0.1],
        ]);
        let r = friedman_test(&m).unwrap();
        assert!((r.statistic - 6.5).abs() < 1e-12);
        assert!((r.p_value - (-3.25f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn chi_square_tail_reference() {
        // df = 2 tail is exp(-x/2)
        assert!((chi_square_sf(3.0, 2) - (-1.5f64).exp()).abs() < 1e-14);
        assert_eq!(chi_square_sf(0.0, 4), 1.0);
    }
}
