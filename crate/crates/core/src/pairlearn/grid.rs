use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{train_tree, Criterion, TreeParams};
use super::LearnError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSearchSpec {
    pub max_depth: Vec<usize>,
    pub criterion: Vec<Criterion>,
    pub min_samples_leaf: Vec<usize>,
    pub min_samples_split: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
}

impl Default for GridSearchSpec {
    fn default() -> Self {
        GridSearchSpec {
            max_depth: vec![3, 5, 8],
            criterion: vec![Criterion::Gini, Criterion::Entropy],
            min_samples_leaf: vec![1, 10],
            min_samples_split: vec![2, 20],
            folds: 10,
            seed: 0,
        }
    }
}

impl GridSearchSpec {
    /// A grid with one candidate.
    pub fn single(params: TreeParams) -> Self {
        GridSearchSpec {
            max_depth: vec![params.max_depth],
            criterion: vec![params.criterion],
            min_samples_leaf: vec![params.min_samples_leaf],
            min_samples_split: vec![params.min_samples_split],
            ..GridSearchSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if self.folds < 2 {
            return Err(LearnError::InvalidGrid(format!("folds must be at least 2, got {}", self.folds)));
        }
        if self.max_depth.is_empty()
            || self.criterion.is_empty()
            || self.min_samples_leaf.is_empty()
            || self.min_samples_split.is_empty()
        {
            return Err(LearnError::InvalidGrid("every parameter list must be non-empty".into()));
        }
        Ok(())
    }

    /// All parameter tuples in ascending order, without duplicates.
    pub fn candidates(&self) -> Vec<TreeParams> {
        let mut out = Vec::new();
        for &max_depth in &self.max_depth {
            for &criterion in &self.criterion {
                for &min_samples_leaf in &self.min_samples_leaf {
                    for &min_samples_split in &self.min_samples_split {
                        out.push(TreeParams {
                            max_depth,
                            criterion,
                            min_samples_leaf,
                            min_samples_split,
                        });
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Fold of every example: a seeded shuffle of the indices dealt out
    /// round-robin, so fold sizes differ by at most one.
    pub fn fold_assignment(&self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(self.seed));
        let mut fold = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            fold[i] = k % self.folds;
        }
        fold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: TreeParams,
    pub best_f1: f64,
    /// Mean positive-class F1 of every candidate, in candidate order.
    pub scores: Vec<(TreeParams, f64)>,
}

/// F1 of the positive class.
pub fn positive_f1(gold: &[bool], predicted: &[bool]) -> f64 {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fneg = 0usize;
    for (&g, &p) in gold.iter().zip(predicted) {
        match (g, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fneg += 1,
            _ => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fneg) as f64
}

/// Mean positive-class F1 of one parameter tuple over the folds.
pub fn cross_validate(
    x: &[Vec<f64>],
    y: &[bool],
    params: &TreeParams,
    fold: &[usize],
    folds: usize,
) -> Result<f64, LearnError> {
    let mut total = 0.0;
    for k in 0..folds {
        let (mut tx, mut ty, mut vx, mut vy) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for i in 0..x.len() {
            if fold[i] == k {
                vx.push(&x[i]);
                vy.push(y[i]);
            } else {
                tx.push(x[i].clone());
                ty.push(y[i]);
            }
        }
        let tree = train_tree(&tx, &ty, params)?;
        let pred: Vec<bool> = vx.iter().map(|r| tree.predict(r)).collect();
        total += positive_f1(&vy, &pred);
    }
    Ok(total / folds as f64)
}

/// Selects the parameters with the best mean positive-class F1. Ties keep
/// the first candidate in ascending tuple order.
pub fn grid_search_cv(x: &[Vec<f64>], y: &[bool], spec: &GridSearchSpec) -> Result<GridResult, LearnError> {
    spec.validate()?;
    if x.len() < spec.folds {
        return Err(LearnError::TooFewExamples {
            n: x.len(),
            folds: spec.folds,
        });
    }
    let fold = spec.fold_assignment(x.len());
    let candidates = spec.candidates();
    let scores: Vec<(TreeParams, f64)> = candidates
        .par_iter()
        .map(|p| cross_validate(x, y, p, &fold, spec.folds).map(|f| (*p, f)))
        .collect::<Result<_, _>>()?;
    let mut best = 0;
    for (i, (_, f)) in scores.iter().enumerate() {
        if *f > scores[best].1 + 1e-12 {
            best = i;
        }
    }
    Ok(GridResult {
        best: scores[best].0,
        best_f1: scores[best].1,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn depth_grid(depths: &[usize]) -> GridSearchSpec {
        GridSearchSpec {
            max_depth: depths.to_vec(),
            criterion: vec![Criterion::Gini],
            min_samples_leaf: vec![1],
            min_samples_split: vec![2],
            folds: 2,
            seed: 7,
        }
    }

    #[test]
    fn folds_are_balanced() {
        let spec = GridSearchSpec::default();
        let f = spec.fold_assignment(25);
        for k in 0..10 {
            let c = f.iter().filter(|&&x| x == k).count();
            assert!(c == 2 || c == 3);
        }
        assert_eq!(f, spec.fold_assignment(25));
    }

    #[test]
    fn single_candidate_selected() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..10).map(|i| i >= 5).collect();
        let p = TreeParams {
            max_depth: 4,
            ..TreeParams::default()
        };
        let r = grid_search_cv(&x, &y, &GridSearchSpec { folds: 5, ..GridSearchSpec::single(p) }).unwrap();
        assert_eq!(r.best, p);
    }

    #[test]
    fn tie_goes_to_shallower_tree() {
        let x: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..12).map(|i| i >= 6).collect();
        let r = grid_search_cv(&x, &y, &depth_grid(&[5, 1])).unwrap();
        assert_eq!(r.scores[0].1, r.scores[1].1);
        assert_eq!(r.best.max_depth, 1);
    }

    #[test]
    fn too_few_examples() {
        let x = vec![vec![0.0]];
        assert!(matches!(
            grid_search_cv(&x, &[true], &GridSearchSpec::default()),
            Err(LearnError::TooFewExamples { n: 1, folds: 10 })
        ));
    }

    #[test]
    fn invalid_grid() {
        let spec = GridSearchSpec {
            folds: 1,
            ..GridSearchSpec::default()
        };
        assert!(spec.validate().is_err());
        let spec = GridSearchSpec {
            criterion: vec![],
            ..GridSearchSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn positive_f1_counts() {
        assert_eq!(positive_f1(&[true, true, false], &[true, false, true]), 0.5);
        assert_eq!(positive_f1(&[false], &[false]), 0.0);
    }
}
