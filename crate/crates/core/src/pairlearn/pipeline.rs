//! One-step and two-step bag-of-events resolution.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{grid_search_cv, GridSearchSpec};
use super::impute::Imputer;
use super::tree::{train_tree, DecisionTree, TreeParams};
use super::{chain_pairs, LearnError};
use crate::corpus::{Corpus, Document, Mention};
use crate::scorer::ChainSet;
use crate::taxonomy::Taxonomy;
use crate::templates::{
    build_document_template, build_sentence_template, feature_names_for, pair_features, FeatureSet,
    Level, SlotMode, Template, TemplateConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BagOfEventsSpec {
    pub train_topics: Vec<String>,
    pub test_topics: Vec<String>,
    pub slot_mode: SlotMode,
    /// Sentence-level feature set of the mention classifier.
    pub feature_set: FeatureSet,
    pub grid: GridSearchSpec,
}

impl BagOfEventsSpec {
    pub fn label_two_step(&self) -> String {
        let n = self.slot_mode.slot_count();
        format!("DT/{n}/docL + DT/{n}/{}", self.feature_set)
    }

    pub fn label_one_step(&self) -> String {
        format!("DT/{}/{}+docL", self.slot_mode.slot_count(), self.feature_set)
    }
}

/// Imputer and tree trained on one feature layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    pub params: TreeParams,
    pub cv_f1: Option<f64>,
    pub imputer: Imputer,
    pub tree: DecisionTree,
}

impl TrainedModel {
    /// Fits the imputer, selects parameters by grid search and refits on all rows.
    pub fn fit(
        feature_names: Vec<String>,
        rows: &[Vec<Option<f64>>],
        labels: &[bool],
        grid: &GridSearchSpec,
    ) -> Result<Self, LearnError> {
        if rows.is_empty() {
            return Err(LearnError::EmptyTrainingSet);
        }
        grid.validate()?;
        let imputer = Imputer::fit(rows);
        let x = imputer.transform_all(rows);
        let (params, cv_f1) = match grid.candidates().as_slice() {
            [only] => (*only, None),
            _ => {
                let r = grid_search_cv(&x, labels, grid)?;
                (r.best, Some(r.best_f1))
            }
        };
        let tree = train_tree(&x, labels, &params)?;
        Ok(TrainedModel {
            feature_names,
            params,
            cv_f1,
            imputer,
            tree,
        })
    }

    /// A model answering `class` for every pair.
    pub fn constant(class: bool, feature_names: Vec<String>) -> Self {
        let n = feature_names.len();
        TrainedModel {
            feature_names,
            params: TreeParams::default(),
            cv_f1: None,
            imputer: Imputer { means: vec![0.0; n] },
            tree: DecisionTree::constant(class, n),
        }
    }

    pub fn predict(&self, row: &[Option<f64>]) -> bool {
        self.tree.predict(&self.imputer.transform(row))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BagOfEventsRun {
    pub label: String,
    pub chains: ChainSet,
    /// Document clusters of the first step; empty for one-step runs.
    pub document_clusters: Vec<Vec<String>>,
    /// Number of mention pairs sent to the mention classifier.
    pub compared_pairs: usize,
}

/// Cached templates and feature extraction for a set of documents.
pub struct Featurizer<'a> {
    corpus: &'a Corpus,
    taxonomy: Option<&'a Taxonomy>,
    slot_mode: SlotMode,
    feature_set: FeatureSet,
    sentence: HashMap<&'a str, Template>,
    document: HashMap<&'a str, Template>,
}

impl<'a> Featurizer<'a> {
    pub fn new(
        corpus: &'a Corpus,
        taxonomy: Option<&'a Taxonomy>,
        slot_mode: SlotMode,
        feature_set: FeatureSet,
        docs: &[&'a Document],
    ) -> Self {
        let mut sentence = HashMap::new();
        let mut document = HashMap::new();
        for d in docs {
            document.insert(d.doc_id.as_str(), build_document_template(d));
            for m in d.action_mentions() {
                sentence.insert(m.mention_id.as_str(), build_sentence_template(m, corpus));
            }
        }
        Featurizer {
            corpus,
            taxonomy,
            slot_mode,
            feature_set,
            sentence,
            document,
        }
    }

    fn config(&self, level: Level, feature_set: FeatureSet) -> TemplateConfig {
        TemplateConfig {
            slot_mode: self.slot_mode,
            level,
            feature_set,
        }
    }

    pub fn document_names(&self) -> Vec<String> {
        feature_names_for(self.slot_mode, FeatureSet::DocL)
            .into_iter()
            .map(|n| format!("doc_{n}"))
            .collect()
    }

    pub fn mention_names(&self) -> Vec<String> {
        feature_names_for(self.slot_mode, self.feature_set)
    }

    pub fn one_step_names(&self) -> Vec<String> {
        let mut names = self.mention_names();
        names.extend(self.document_names());
        names
    }

    pub fn document_row(&self, a: &str, b: &str) -> Vec<Option<f64>> {
        let cfg = self.config(Level::Document, FeatureSet::DocL);
        pair_features(&self.document[a], &self.document[b], &cfg, None)
            .expect("document templates")
            .select(FeatureSet::DocL)
    }

    pub fn mention_row(&self, a: &str, b: &str) -> Vec<Option<f64>> {
        let cfg = self.config(Level::Sentence, self.feature_set);
        pair_features(&self.sentence[a], &self.sentence[b], &cfg, self.taxonomy)
            .expect("sentence templates")
            .select(self.feature_set)
    }

    pub fn one_step_row(&self, a: &str, b: &str) -> Vec<Option<f64>> {
        let mut row = self.mention_row(a, b);
        let (ma, mb) = (self.mention(a), self.mention(b));
        row.extend(self.document_row(&ma.doc_id, &mb.doc_id));
        row
    }

    fn mention(&self, id: &str) -> &'a Mention {
        self.corpus.mention(id).expect("mention in corpus")
    }
}

fn docs_in<'a>(corpus: &'a Corpus, topics: &[String]) -> Vec<&'a Document> {
    let topics: BTreeSet<&str> = topics.iter().map(String::as_str).collect();
    let mut docs: Vec<&Document> = corpus
        .documents()
        .iter()
        .filter(|d| topics.contains(d.topic_id.as_str()))
        .collect();
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    docs
}

fn action_ids<'a>(docs: &[&'a Document]) -> Vec<&'a str> {
    let mut ids: Vec<&str> = docs
        .iter()
        .flat_map(|d| d.action_mentions().map(|m| m.mention_id.as_str()))
        .collect();
    ids.sort_unstable();
    ids
}

fn unique_pairs<'a>(ids: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    let mut out = Vec::with_capacity(ids.len() * ids.len().saturating_sub(1) / 2);
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            out.push((*a, *b));
        }
    }
    out
}

fn documents_share_chain(corpus: &Corpus, a: &Document, b: &Document) -> bool {
    let chains: BTreeSet<&str> = a
        .action_mentions()
        .filter_map(|m| corpus.gold_chain_of(&m.mention_id))
        .collect();
    b.action_mentions()
        .filter_map(|m| corpus.gold_chain_of(&m.mention_id))
        .any(|c| chains.contains(c))
}

/// Training pairs are all unique pairs within each training topic.
fn training_docs<'a>(corpus: &'a Corpus, spec: &BagOfEventsSpec) -> Result<Vec<Vec<&'a Document>>, LearnError> {
    let mut topics: Vec<&String> = spec.train_topics.iter().collect();
    topics.sort();
    topics.dedup();
    let groups: Vec<Vec<&Document>> = topics
        .into_iter()
        .map(|t| docs_in(corpus, std::slice::from_ref(t)))
        .filter(|g| !g.is_empty())
        .collect();
    if groups.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    Ok(groups)
}

pub fn train_document_model(
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    spec: &BagOfEventsSpec,
) -> Result<TrainedModel, LearnError> {
    let groups = training_docs(corpus, spec)?;
    let all: Vec<&Document> = groups.iter().flatten().copied().collect();
    let fz = Featurizer::new(corpus, taxonomy, spec.slot_mode, spec.feature_set, &all);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for g in &groups {
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                rows.push(fz.document_row(&a.doc_id, &b.doc_id));
                labels.push(documents_share_chain(corpus, a, b));
            }
        }
    }
    TrainedModel::fit(fz.document_names(), &rows, &labels, &spec.grid)
}

pub fn train_mention_model(
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    spec: &BagOfEventsSpec,
    one_step: bool,
) -> Result<TrainedModel, LearnError> {
    let groups = training_docs(corpus, spec)?;
    let all: Vec<&Document> = groups.iter().flatten().copied().collect();
    let fz = Featurizer::new(corpus, taxonomy, spec.slot_mode, spec.feature_set, &all);
    let pairs: Vec<(&str, &str)> = groups
        .iter()
        .flat_map(|g| unique_pairs(&action_ids(g)))
        .collect();
    let rows: Vec<Vec<Option<f64>>> = pairs
        .par_iter()
        .map(|(a, b)| if one_step { fz.one_step_row(a, b) } else { fz.mention_row(a, b) })
        .collect();
    let labels: Vec<bool> = pairs.iter().map(|(a, b)| corpus.coreferent(a, b)).collect();
    let names = if one_step { fz.one_step_names() } else { fz.mention_names() };
    TrainedModel::fit(names, &rows, &labels, &spec.grid)
}

fn test_docs<'a>(corpus: &'a Corpus, spec: &BagOfEventsSpec) -> Result<Vec<&'a Document>, LearnError> {
    let docs = docs_in(corpus, &spec.test_topics);
    if action_ids(&docs).is_empty() {
        return Err(LearnError::EmptyTestSet);
    }
    Ok(docs)
}

fn classify<'a, F>(pairs: &[(&'a str, &'a str)], accept: F) -> Vec<(&'a str, &'a str)>
where
    F: Fn(&str, &str) -> bool + Sync,
{
    let keep: Vec<bool> = pairs.par_iter().map(|(a, b)| accept(a, b)).collect();
    pairs
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(*p))
        .collect()
}

/// Two-step resolution with already trained models.
pub fn resolve_two_step(
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    spec: &BagOfEventsSpec,
    document_model: &TrainedModel,
    mention_model: &TrainedModel,
) -> Result<BagOfEventsRun, LearnError> {
    let docs = test_docs(corpus, spec)?;
    let fz = Featurizer::new(corpus, taxonomy, spec.slot_mode, spec.feature_set, &docs);
    let doc_ids: Vec<&str> = docs.iter().map(|d| d.doc_id.as_str()).collect();
    let doc_pairs = unique_pairs(&doc_ids);
    let linked = classify(&doc_pairs, |a, b| document_model.predict(&fz.document_row(a, b)));
    let clusters = chain_pairs(linked, doc_ids.iter().copied());

    let mut positive = Vec::new();
    let mut compared = 0;
    for cluster in clusters.chains() {
        let members: Vec<&Document> = docs
            .iter()
            .filter(|d| cluster.contains(&d.doc_id))
            .copied()
            .collect();
        let pairs = unique_pairs(&action_ids(&members));
        compared += pairs.len();
        positive.extend(classify(&pairs, |a, b| mention_model.predict(&fz.mention_row(a, b))));
    }
    Ok(BagOfEventsRun {
        label: spec.label_two_step(),
        chains: chain_pairs(positive, action_ids(&docs)),
        document_clusters: clusters.chains().iter().map(|c| c.iter().cloned().collect()).collect(),
        compared_pairs: compared,
    })
}

/// One-step resolution with an already trained model on concatenated features.
pub fn resolve_one_step(
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    spec: &BagOfEventsSpec,
    model: &TrainedModel,
) -> Result<BagOfEventsRun, LearnError> {
    let docs = test_docs(corpus, spec)?;
    let fz = Featurizer::new(corpus, taxonomy, spec.slot_mode, spec.feature_set, &docs);
    let ids = action_ids(&docs);
    let pairs = unique_pairs(&ids);
    let positive = classify(&pairs, |a, b| model.predict(&fz.one_step_row(a, b)));
    Ok(BagOfEventsRun {
        label: spec.label_one_step(),
        chains: chain_pairs(positive, ids),
        document_clusters: Vec::new(),
        compared_pairs: pairs.len(),
    })
}

pub fn run_two_step(corpus: &Corpus, taxonomy: Option<&Taxonomy>, spec: &BagOfEventsSpec) -> Result<BagOfEventsRun, LearnError> {
    test_docs(corpus, spec)?;
    let doc_model = train_document_model(corpus, taxonomy, spec)?;
    let mention_model = train_mention_model(corpus, taxonomy, spec, false)?;
    resolve_two_step(corpus, taxonomy, spec, &doc_model, &mention_model)
}

pub fn run_one_step(corpus: &Corpus, taxonomy: Option<&Taxonomy>, spec: &BagOfEventsSpec) -> Result<BagOfEventsRun, LearnError> {
    test_docs(corpus, spec)?;
    let model = train_mention_model(corpus, taxonomy, spec, true)?;
    resolve_one_step(corpus, taxonomy, spec, &model)
}
