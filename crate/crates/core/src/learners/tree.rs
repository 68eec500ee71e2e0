use ndarray::ArrayView2;
use rand::seq::index::sample;

use crate::dataset::Label;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// Features tried per split; `None` tries all of them.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        /// Fraction of positive training rows reaching the leaf.
        value: f64,
        n: usize,
    },
    Split {
        feature: usize,
        /// Rows with `x[feature] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Binary classification tree grown by Gini impurity.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

struct Builder<'a> {
    x: ArrayView2<'a, f64>,
    pos: Vec<bool>,
    params: TreeParams,
    rng: rand_chacha::ChaCha8Rng,
    nodes: Vec<Node>,
}

fn weighted_gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    2.0 * pos as f64 * (n - pos) as f64 / n as f64
}

impl Builder<'_> {
    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let n = rows.len();
        let n_pos = rows.iter().filter(|&&r| self.pos[r]).count();
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            value: n_pos as f64 / n as f64,
            n,
        });
        let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
        if n_pos == 0 || n_pos == n || n < 2 * self.params.min_leaf || !depth_ok {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows, n_pos) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.into_iter().partition(|&i| self.x[[i, feature]] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize], n_pos: usize) -> Option<(usize, f64)> {
        let p = self.x.ncols();
        let features: Vec<usize> = match self.params.max_features {
            Some(m) if m < p => {
                let mut f = sample(&mut self.rng, p, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..p).collect(),
        };
        let n = rows.len();
        let parent = weighted_gini(n_pos, n);
        let min_leaf = self.params.min_leaf;
        let mut best: Option<(f64, usize, f64)> = None;
        let mut vals: Vec<(f64, bool)> = Vec::with_capacity(n);
        for &j in &features {
            vals.clear();
            vals.extend(rows.iter().map(|&r| (self.x[[r, j]], self.pos[r])));
            vals.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_pos = 0;
            for i in 0..n - 1 {
                left_pos += usize::from(vals[i].1);
                let nl = i + 1;
                if nl < min_leaf || n - nl < min_leaf || vals[i].0 == vals[i + 1].0 {
                    continue;
                }
                let gain = parent - weighted_gini(left_pos, nl) - weighted_gini(n_pos - left_pos, n - nl);
                if gain > 1e-12 && best.is_none_or(|(g, _, _)| gain > g) {
                    let (a, b) = (vals[i].0, vals[i + 1].0);
                    let mut t = a + (b - a) / 2.0;
                    if t >= b {
                        t = a;
                    }
                    best = Some((gain, j, t));
                }
            }
        }
        best.map(|(_, j, t)| (j, t))
    }
}

impl DecisionTree {
    /// Grows a tree on the given rows of `x` (repeats allowed, as in a
    /// bootstrap sample). `rng_seed` drives feature subsampling only.
    pub fn fit(x: ArrayView2<'_, f64>, labels: &[Label], rows: &[usize], params: &TreeParams, rng_seed: u64) -> Self {
        let mut b = Builder {
            x,
            pos: labels.iter().map(|l| l.is_positive()).collect(),
            params: *params,
            rng: seed::rng(rng_seed),
            nodes: Vec::new(),
        };
        b.grow(rows.to_vec(), 0);
        DecisionTree { nodes: b.nodes }
    }

    pub fn leaf_value(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { value, .. } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn scores(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        x.rows().into_iter().map(|r| self.leaf_value(&r.to_vec())).collect()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, at: usize) -> usize {
            match t.nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    pub fn leaf_sizes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { n, .. } => Some(*n),
                Node::Split { .. } => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn lab(v: &[i8]) -> Vec<Label> {
        v.iter().map(|&s| Label::from_sign(s).unwrap()).collect()
    }

    #[test]
    fn splits_at_midpoint() {
        let x = array![[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0]];
        let y = lab(&[-1, -1, 1, 1]);
        let params = TreeParams {
            min_leaf: 1,
            max_depth: None,
            max_features: None,
        };
        let t = DecisionTree::fit(x.view(), &y, &[0, 1, 2, 3], &params, 0);
        assert!(matches!(t.nodes[0], Node::Split { feature: 0, threshold, .. } if threshold == 2.5));
        assert_eq!(t.scores(array![[2.4, 9.0], [2.6, 9.0]].view()), vec![0.0, 1.0]);
    }

    #[test]
    fn min_leaf_and_depth_respected() {
        let x = ndarray::Array2::from_shape_fn((40, 1), |(i, _)| i as f64);
        let y: Vec<Label> = (0..40).map(|i| Label::from_sign(if (i / 3) % 2 == 0 { 1 } else { -1 }).unwrap()).collect();
        let rows: Vec<usize> = (0..40).collect();
        let t = DecisionTree::fit(
            x.view(),
            &y,
            &rows,
            &TreeParams {
                min_leaf: 5,
                max_depth: None,
                max_features: None,
            },
            0,
        );
        assert!(t.leaf_sizes().iter().all(|&n| n >= 5));
        let t = DecisionTree::fit(
            x.view(),
            &y,
            &rows,
            &TreeParams {
                min_leaf: 1,
                max_depth: Some(2),
                max_features: None,
            },
            0,
        );
        assert!(t.depth() <= 2);
    }
}
