//! Pairwise decision-tree classification and chaining.

mod grid;
mod impute;
mod pipeline;
mod tree;

use std::collections::HashMap;

use thiserror::Error;

use crate::cluster::UnionFind;
use crate::scorer::ChainSet;

pub use grid::{cross_validate, grid_search_cv, positive_f1, GridResult, GridSearchSpec};
pub use impute::Imputer;
pub use pipeline::{
    resolve_one_step, resolve_two_step, run_one_step, run_two_step, train_document_model,
    train_mention_model, BagOfEventsRun, BagOfEventsSpec, Featurizer, TrainedModel,
};
pub use tree::{train_tree, Criterion, DecisionTree, Node, TreeParams};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("no training data")]
    EmptyData,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{n} examples cannot fill {folds} folds")]
    TooFewExamples { n: usize, folds: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("the training topics contain no documents")]
    EmptyTrainingSet,
    #[error("the test topics contain no action mentions")]
    EmptyTestSet,
}

/// Transitive closure of positive pairs over `universe`. Ids in no pair
/// become singletons; pairs naming an id outside the universe are ignored.
pub fn chain_pairs<P, U, S>(positive_pairs: P, universe: U) -> ChainSet
where
    P: IntoIterator<Item = (S, S)>,
    U: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let ids: Vec<String> = universe.into_iter().map(|s| s.as_ref().to_string()).collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for (a, b) in positive_pairs {
        if let (Some(&i), Some(&j)) = (index.get(a.as_ref()), index.get(b.as_ref())) {
            uf.union(i, j);
        }
    }
    let chains: Vec<Vec<&str>> = uf
        .components()
        .into_iter()
        .map(|c| c.into_iter().map(|i| ids[i].as_str()).collect())
        .collect();
    ChainSet::new(chains).expect("components are disjoint and non-empty")
}
