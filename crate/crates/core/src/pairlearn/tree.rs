//! Binary CART classifier.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LearnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    /// Impurity of a node holding `pos` positives out of `n`.
    pub fn impurity(self, pos: usize, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let p = pos as f64 / n as f64;
        let q = 1.0 - p;
        match self {
            Criterion::Gini => 1.0 - p * p - q * q,
            Criterion::Entropy => {
                let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
                h(p) + h(q)
            }
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Gini => "gini",
            Criterion::Entropy => "entropy",
        })
    }
}

impl FromStr for Criterion {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gini" => Ok(Criterion::Gini),
            "entropy" => Ok(Criterion::Entropy),
            _ => Err(LearnError::InvalidGrid(format!("unknown criterion {s:?}"))),
        }
    }
}

/// Hyper-parameters. Field order is the tie-breaking order of grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub criterion: Criterion,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 5,
            criterion: Criterion::Gini,
            min_samples_leaf: 1,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Split {
        feature_index: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        class: bool,
        /// Fraction of positive training samples at the leaf.
        probability: f64,
        samples: usize,
    },
}

/// A trained tree stored as an arena; node 0 is the root. Samples with
/// `x[feature_index] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub n_features: usize,
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    /// A single leaf predicting `class`.
    pub fn constant(class: bool, n_features: usize) -> Self {
        DecisionTree {
            n_features,
            nodes: vec![Node::Leaf {
                class,
                probability: if class { 1.0 } else { 0.0 },
                samples: 0,
            }],
        }
    }

    fn leaf_for(&self, x: &[f64]) -> &Node {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if x[*feature_index] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
                leaf => return leaf,
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        match self.leaf_for(x) {
            Node::Leaf { class, .. } => *class,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        match self.leaf_for(x) {
            Node::Leaf { probability, .. } => *probability,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
                Node::Leaf { .. } => 0,
            }
        }
        go(&self.nodes, 0)
    }

    /// The root split as `(feature_index, threshold)`, if the root splits.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match &self.nodes[0] {
            Node::Split {
                feature_index,
                threshold,
                ..
            } => Some((*feature_index, *threshold)),
            Node::Leaf { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Distinct sorted values of every feature and each sample's rank among them.
struct Binned {
    values: Vec<Vec<f64>>,
    bins: Vec<Vec<u32>>,
}

impl Binned {
    fn new(x: &[Vec<f64>], n_features: usize) -> Self {
        let mut values = Vec::with_capacity(n_features);
        let mut bins = Vec::with_capacity(n_features);
        for f in 0..n_features {
            let mut vs: Vec<f64> = x.iter().map(|r| r[f]).collect();
            vs.sort_by(f64::total_cmp);
            vs.dedup();
            let b = x
                .iter()
                .map(|r| {
                    vs.binary_search_by(|v| v.total_cmp(&r[f]))
                        .expect("value present") as u32
                })
                .collect();
            values.push(vs);
            bins.push(b);
        }
        Binned { values, bins }
    }
}

struct Split {
    feature: usize,
    threshold: f64,
    bin: u32,
}

/// Fits a CART tree by greedy impurity minimisation.
///
/// Candidate thresholds are midpoints between consecutive distinct values of
/// a feature within the node. The best split minimises the weighted child
/// impurity; ties go to the lowest feature index, then the lowest threshold.
/// Growth stops at `max_depth`, below `min_samples_split`, when no split
/// leaves `min_samples_leaf` on both sides, or when the node is pure.
pub fn train_tree(x: &[Vec<f64>], y: &[bool], params: &TreeParams) -> Result<DecisionTree, LearnError> {
    if x.is_empty() {
        return Err(LearnError::EmptyData);
    }
    if x.len() != y.len() {
        return Err(LearnError::ShapeMismatch(format!(
            "{} rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    let n_features = x[0].len();
    if let Some(bad) = x.iter().position(|r| r.len() != n_features) {
        return Err(LearnError::ShapeMismatch(format!(
            "row {bad} has {} features, expected {n_features}",
            x[bad].len()
        )));
    }
    if x.iter().flatten().any(|v| v.is_nan()) {
        return Err(LearnError::ShapeMismatch("NaN feature value; impute first".into()));
    }
    let binned = Binned::new(x, n_features);
    let min_leaf = params.min_samples_leaf.max(1);

    let mut nodes: Vec<Node> = Vec::new();
    // (node slot, samples, depth)
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, (0..x.len()).collect(), 0)];
    nodes.push(Node::Leaf {
        class: false,
        probability: 0.0,
        samples: 0,
    });
    let mut counts: Vec<(usize, usize)> = Vec::new();

    while let Some((slot, samples, depth)) = stack.pop() {
        let n = samples.len();
        let pos = samples.iter().filter(|&&i| y[i]).count();
        let leaf = Node::Leaf {
            class: pos * 2 > n,
            probability: pos as f64 / n as f64,
            samples: n,
        };
        let stop = depth >= params.max_depth
            || n < params.min_samples_split.max(2)
            || n < 2 * min_leaf
            || pos == 0
            || pos == n;
        let split = if stop {
            None
        } else {
            best_split(&binned, y, &samples, params.criterion, min_leaf, &mut counts)
        };
        let Some(split) = split else {
            nodes[slot] = leaf;
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| binned.bins[split.feature][i] <= split.bin);
        let li = nodes.len();
        let ri = li + 1;
        nodes.push(Node::Leaf {
            class: false,
            probability: 0.0,
            samples: 0,
        });
        nodes.push(Node::Leaf {
            class: false,
            probability: 0.0,
            samples: 0,
        });
        nodes[slot] = Node::Split {
            feature_index: split.feature,
            threshold: split.threshold,
            left: li,
            right: ri,
        };
        stack.push((ri, right, depth + 1));
        stack.push((li, left, depth + 1));
    }
    Ok(DecisionTree { n_features, nodes })
}

fn best_split(
    binned: &Binned,
    y: &[bool],
    samples: &[usize],
    criterion: Criterion,
    min_leaf: usize,
    counts: &mut Vec<(usize, usize)>,
) -> Option<Split> {
    let n = samples.len();
    let total_pos = samples.iter().filter(|&&i| y[i]).count();
    let mut best: Option<(f64, Split)> = None;
    for (f, values) in binned.values.iter().enumerate() {
        if values.len() < 2 {
            continue;
        }
        counts.clear();
        counts.resize(values.len(), (0, 0));
        for &i in samples {
            let c = &mut counts[binned.bins[f][i] as usize];
            c.0 += 1;
            if y[i] {
                c.1 += 1;
            }
        }
        let mut left_n = 0;
        let mut left_pos = 0;
        let mut prev: Option<usize> = None;
        for (b, &(cn, cp)) in counts.iter().enumerate() {
            if cn == 0 {
                continue;
            }
            if let Some(pb) = prev {
                let right_n = n - left_n;
                if left_n >= min_leaf && right_n >= min_leaf {
                    let w = (left_n as f64 * criterion.impurity(left_pos, left_n)
                        + right_n as f64 * criterion.impurity(total_pos - left_pos, right_n))
                        / n as f64;
                    if best.as_ref().is_none_or(|(bw, _)| w < *bw - 1e-12) {
                        best = Some((
                            w,
                            Split {
                                feature: f,
                                threshold: (values[pb] + values[b]) / 2.0,
                                bin: pb as u32,
                            },
                        ));
                    }
                }
            }
            left_n += cn;
            left_pos += cp;
            prev = Some(b);
        }
    }
    best.map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(depth: usize) -> TreeParams {
        TreeParams {
            max_depth: depth,
            ..TreeParams::default()
        }
    }

    #[test]
    fn pure_data_gives_single_leaf() {
        let x = vec![vec![0.1], vec![0.7], vec![0.3]];
        let t = train_tree(&x, &[true, true, true], &params(5)).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!(t.predict(&[0.0]));
    }

    #[test]
    fn one_dimensional_split_at_midpoint() {
        let x = vec![vec![0.0], vec![1.0]];
        let t = train_tree(&x, &[false, true], &params(3)).unwrap();
        assert_eq!(t.root_split(), Some((0, 0.5)));
        assert!(!t.predict(&[0.0]));
        assert!(t.predict(&[1.0]));
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn depth_zero_is_majority_leaf() {
        let x = vec![vec![0.0], vec![0.1], vec![0.2], vec![0.3]];
        let t = train_tree(&x, &[false, false, false, true], &params(0)).unwrap();
        assert!(!t.predict(&[0.3]));
        assert_eq!(t.predict_proba(&[0.3]), 0.25);
    }

    #[test]
    fn tie_goes_to_negative_class() {
        let x = vec![vec![0.0], vec![0.0]];
        let t = train_tree(&x, &[false, true], &params(3)).unwrap();
        assert!(!t.predict(&[0.0]));
    }

    #[test]
    fn min_samples_leaf_blocks_split() {
        let x = vec![vec![0.0], vec![1.0], vec![1.0]];
        let p = TreeParams {
            min_samples_leaf: 2,
            ..params(3)
        };
        let t = train_tree(&x, &[false, true, true], &p).unwrap();
        assert_eq!(t.nodes.len(), 1);
    }

    #[test]
    fn empty_data_rejected() {
        assert!(matches!(train_tree(&[], &[], &params(1)), Err(LearnError::EmptyData)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let x: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 7.0, (i % 3) as f64 * 0.1]).collect();
        let y: Vec<bool> = (0..20).map(|i| i % 4 == 0 || i > 14).collect();
        let t = train_tree(&x, &y, &params(4)).unwrap();
        let back = DecisionTree::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), t.to_json());
    }

    #[test]
    fn xor_needs_depth_two() {
        let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let y = [false, true, true, false];
        let t = train_tree(&x, &y, &params(2)).unwrap();
        for (r, l) in x.iter().zip(y) {
            assert_eq!(t.predict(r), l);
        }
    }

    #[test]
    fn entropy_impurity_values() {
        assert_eq!(Criterion::Entropy.impurity(2, 4), 1.0);
        assert_eq!(Criterion::Gini.impurity(2, 4), 0.5);
        assert_eq!(Criterion::Entropy.impurity(0, 4), 0.0);
    }
}
