use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Flat CART node. Children are indices into the owning tree's node list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        /// A leaf votes POSITIVE when at least half of its rows are positive.
        positive: bool,
        n_positive: usize,
        n_total: usize,
    },
    Split {
        feature: usize,
        /// Rows with `x[feature] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn vote(&self, x: &[f64]) -> bool {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { positive, .. } => return positive,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

/// Bagged CART ensemble with Gini impurity and `max(1, floor(sqrt(d)))`
/// candidate features per split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub n_features: usize,
    pub max_depth: usize,
    pub max_features: usize,
    pub trees: Vec<Tree>,
}

impl ForestModel {
    /// Tree `t` draws from its own ChaCha stream `t` of `seed`, so the result
    /// does not depend on how trees are scheduled across threads.
    pub fn fit(ds: &Dataset, n_tree: usize, max_depth: usize, seed: u64) -> Result<Self> {
        if n_tree == 0 || max_depth == 0 {
            return Err(Error::InvalidParameter("n_tree and max_depth must be >= 1".into()));
        }
        ds.require_both_classes()?;
        let d = ds.n_features();
        let max_features = ((d as f64).sqrt().floor() as usize).max(1);
        let trees = (0..n_tree)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                let n = ds.n_instances();
                let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                grow(ds, sample, max_depth, max_features, &mut rng)
            })
            .collect();
        Ok(ForestModel {
            n_features: d,
            max_depth,
            max_features,
            trees,
        })
    }

    /// Fraction of trees voting POSITIVE.
    pub fn score(&self, x: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.vote(x)).count();
        votes as f64 / self.trees.len() as f64
    }
}

struct Builder<'a> {
    ds: &'a Dataset,
    max_depth: usize,
    max_features: usize,
    nodes: Vec<Node>,
}

fn grow(ds: &Dataset, rows: Vec<usize>, max_depth: usize, max_features: usize, rng: &mut ChaCha8Rng) -> Tree {
    let mut b = Builder {
        ds,
        max_depth,
        max_features,
        nodes: Vec::new(),
    };
    b.build(rows, 0, rng);
    Tree { nodes: b.nodes }
}

impl Builder<'_> {
    fn build(&mut self, rows: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let n_pos = rows.iter().filter(|&&i| self.ds.label(i).is_positive()).count();
        let id = self.nodes.len();
        let leaf = Node::Leaf {
            positive: 2 * n_pos >= rows.len(),
            n_positive: n_pos,
            n_total: rows.len(),
        };
        self.nodes.push(leaf.clone());
        if depth >= self.max_depth || n_pos == 0 || n_pos == rows.len() {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows, n_pos, rng) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| self.ds.row(i)[feature] <= threshold);
        let left = self.build(l, depth + 1, rng);
        let right = self.build(r, depth + 1, rng);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    /// Lowest weighted Gini over `max_features` random features. When none of
    /// them can separate any rows, the remaining features are tried in order.
    fn best_split(&self, rows: &[usize], n_pos: usize, rng: &mut ChaCha8Rng) -> Option<(usize, f64)> {
        let mut features: Vec<usize> = (0..self.ds.n_features()).collect();
        features.shuffle(rng);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut values: Vec<(f64, bool)> = Vec::with_capacity(rows.len());
        for (tried, &f) in features.iter().enumerate() {
            if tried >= self.max_features && best.is_some() {
                break;
            }
            values.clear();
            values.extend(rows.iter().map(|&i| (self.ds.row(i)[f], self.ds.label(i).is_positive())));
            values.sort_by(|a, b| a.0.total_cmp(&b.0));
            let n = values.len() as f64;
            let mut left_pos = 0usize;
            for s in 1..values.len() {
                left_pos += values[s - 1].1 as usize;
                if values[s].0 == values[s - 1].0 {
                    continue;
                }
                let nl = s as f64;
                let nr = n - nl;
                let impurity = nl * gini(left_pos as f64 / nl) + nr * gini((n_pos - left_pos) as f64 / nr);
                if best.is_none_or(|(b, _, _)| impurity < b) {
                    let (lo, hi) = (values[s - 1].0, values[s].0);
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((impurity, f, threshold));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

fn gini(p: f64) -> f64 {
    2.0 * p * (1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Label;

    fn xor() -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..5 {
            for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
                rows.push(vec![a, b]);
                labels.push(if (a == 1.0) != (b == 1.0) {
                    Label::Positive
                } else {
                    Label::Negative
                });
            }
        }
        Dataset::from_rows(rows, labels).unwrap()
    }

    fn accuracy(m: &ForestModel, ds: &Dataset) -> f64 {
        let ok = (0..ds.n_instances())
            .filter(|&i| (m.score(ds.row(i)) >= 0.5) == ds.label(i).is_positive())
            .count();
        ok as f64 / ds.n_instances() as f64
    }

    #[test]
    fn a_stump_cannot_solve_xor() {
        let ds = xor();
        for seed in 0..20 {
            let m = ForestModel::fit(&ds, 1, 1, seed).unwrap();
            assert!(m.trees[0].depth() <= 1);
            assert!(accuracy(&m, &ds) <= 0.75);
        }
    }

    #[test]
    fn deep_forest_fits_xor_and_axis_aligned_data() {
        let ds = xor();
        let m = ForestModel::fit(&ds, 25, 8, 3).unwrap();
        assert_eq!(accuracy(&m, &ds), 1.0);

        let rows: Vec<Vec<f64>> = (0..60).map(|i| vec![i as f64, ((i * 7) % 13) as f64]).collect();
        let labels = (0..60)
            .map(|i| if i >= 45 { Label::Positive } else { Label::Negative })
            .collect();
        let ds = Dataset::from_rows(rows, labels).unwrap();
        let m = ForestModel::fit(&ds, 200, 20, 1).unwrap();
        assert_eq!(accuracy(&m, &ds), 1.0);
    }

    #[test]
    fn scores_are_vote_fractions_and_reproducible() {
        let ds = xor();
        let a = ForestModel::fit(&ds, 7, 3, 11).unwrap();
        let b = ForestModel::fit(&ds, 7, 3, 11).unwrap();
        assert_eq!(a, b);
        for i in 0..ds.n_instances() {
            let s = a.score(ds.row(i)) * 7.0;
            assert_eq!(s, s.round());
        }
    }
}
