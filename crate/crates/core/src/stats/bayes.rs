use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::MetricKind;
use crate::error::{Error, Result};
use crate::seed;

/// Region of practical equivalence for a difference of metric values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RopeBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RopeBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let r = Self { lower, upper };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.is_finite() && self.upper.is_finite() && self.lower < 0.0 && 0.0 < self.upper {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "rope [{}, {}] must be finite and straddle zero",
                self.lower, self.upper
            )))
        }
    }

    /// `[-0.01, 0.01]` for AUC, `[-0.05, 0.05]` for the H-measure.
    pub fn default_for(metric: MetricKind) -> Self {
        match metric {
            MetricKind::Auc => Self {
                lower: -0.01,
                upper: 0.01,
            },
            MetricKind::H => Self {
                lower: -0.05,
                upper: 0.05,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The second sample is practically better.
    LeftWins,
    /// The first sample is practically better.
    RightWins,
    PracticallyEquivalent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LeftWins => "left_wins",
            Verdict::RightWins => "right_wins",
            Verdict::PracticallyEquivalent => "practically_equivalent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Posterior probabilities for `d = a - b`: below the rope (`p_left`, `b`
/// better), inside it, above it (`p_right`, `a` better).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorTriple {
    pub p_left: f64,
    pub p_rope: f64,
    pub p_right: f64,
    pub verdict: Verdict,
    pub mc_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayesOptions {
    pub mc_samples: usize,
    pub seed: u64,
    /// Dirichlet weight of the pseudo-observation placed at zero.
    pub prior_strength: f64,
    /// Posterior mass needed for a decisive verdict.
    pub threshold: f64,
}

impl Default for BayesOptions {
    fn default() -> Self {
        Self {
            mc_samples: 50_000,
            seed: 0,
            prior_strength: 0.5,
            threshold: 0.95,
        }
    }
}

const BATCH: usize = 4096;

/// Bayesian signed-rank test with a Dirichlet-process prior.
///
/// The observations are the differences `d_i = a_i - b_i` plus one
/// pseudo-observation at 0 with weight `prior_strength`. Each Monte Carlo
/// draw samples Dirichlet weights `w` over these points and evaluates the
/// weighted mass of the pairwise Walsh averages `(z_i + z_j) / 2` lying below,
/// inside and above the rope. The draw is credited to whichever region has
/// the most mass; the returned probabilities are those frequencies.
///
/// Draws are split into fixed-size batches whose seeds derive from `seed` and
/// the batch index, so the result does not depend on thread scheduling.
pub fn bayesian_rope_test(
    a: &[f64],
    b: &[f64],
    rope: RopeBounds,
    opts: &BayesOptions,
) -> Result<PosteriorTriple> {
    rope.validate()?;
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need paired samples of length >= 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if opts.mc_samples < 1000 {
        return Err(Error::InvalidArgument(format!(
            "mc_samples = {} is too small (minimum 1000)",
            opts.mc_samples
        )));
    }
    if opts.prior_strength.is_nan() || opts.prior_strength <= 0.0 {
        return Err(Error::InvalidArgument("prior strength must be positive".into()));
    }

    let mut z = Vec::with_capacity(a.len() + 1);
    z.push(0.0);
    z.extend(a.iter().zip(b).map(|(x, y)| x - y));
    let m = z.len();
    // region of each pairwise sum: 0 left, 1 rope, 2 right
    let mut region = vec![1u8; m * m];
    for i in 0..m {
        for j in 0..m {
            let s = z[i] + z[j];
            region[i * m + j] = if s < 2.0 * rope.lower {
                0
            } else if s > 2.0 * rope.upper {
                2
            } else {
                1
            };
        }
    }

    let batches = opts.mc_samples.div_ceil(BATCH);
    let wins = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let draws = BATCH.min(opts.mc_samples - batch * BATCH);
            let mut rng = seed::rng(seed::derive_seed(opts.seed, &["bayes", &batch.to_string()]));
            let prior = Gamma::new(opts.prior_strength, 1.0).expect("positive shape");
            let unit = Gamma::new(1.0, 1.0).expect("positive shape");
            let mut w = vec![0.0; m];
            let mut counts = [0usize; 3];
            for _ in 0..draws {
                w[0] = prior.sample(&mut rng);
                for wi in w.iter_mut().skip(1) {
                    *wi = unit.sample(&mut rng);
                }
                let total: f64 = w.iter().sum();
                if total <= 0.0 {
                    // every gamma variate underflowed; fall back to uniform weights
                    w.iter_mut().for_each(|v| *v = 1.0);
                }
                let mut mass = [0.0f64; 3];
                for i in 0..m {
                    let mut row = [0.0f64; 3];
                    for j in 0..m {
                        row[region[i * m + j] as usize] += w[j];
                    }
                    for r in 0..3 {
                        mass[r] += w[i] * row[r];
                    }
                }
                let mut winner = 0;
                for r in 1..3 {
                    if mass[r] > mass[winner] {
                        winner = r;
                    }
                }
                counts[winner] += 1;
            }
            counts
        })
        .reduce(|| [0usize; 3], |x, y| [x[0] + y[0], x[1] + y[1], x[2] + y[2]]);

    let total = opts.mc_samples as f64;
    let p_left = wins[0] as f64 / total;
    let p_right = wins[2] as f64 / total;
    let p_rope = 1.0 - p_left - p_right;
    let verdict = if p_right > opts.threshold {
        Verdict::RightWins
    } else if p_left > opts.threshold {
        Verdict::LeftWins
    } else if p_rope > opts.threshold {
        Verdict::PracticallyEquivalent
    } else {
        Verdict::Inconclusive
    };
    Ok(PosteriorTriple {
        p_left,
        p_rope,
        p_right,
        verdict,
        mc_samples: opts.mc_samples,
        seed: opts.seed,
    })
}
