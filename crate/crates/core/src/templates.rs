//! Sentence and document templates ("bag of events") and the pairwise
//! feature vectors computed from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Document, Mention, SlotType};
use crate::taxonomy::Taxonomy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template level mismatch: expected {expected:?}, got {found:?}")]
    LevelMismatch { expected: Level, found: Level },
    #[error("unknown {what} {value:?}")]
    Unknown { what: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Sentence,
    Document,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotMode {
    FiveSlot,
    /// Location, time and both participant slots fused into one entity slot.
    TwoSlot,
}

impl SlotMode {
    pub fn slot_count(self) -> usize {
        match self {
            SlotMode::FiveSlot => 5,
            SlotMode::TwoSlot => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    L,
    #[serde(rename = "LDES")]
    Ldes,
    #[serde(rename = "LADES")]
    Lades,
    #[serde(rename = "docL")]
    DocL,
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureSet::L => "L",
            FeatureSet::Ldes => "LDES",
            FeatureSet::Lades => "LADES",
            FeatureSet::DocL => "docL",
        })
    }
}

impl FromStr for FeatureSet {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" => Ok(FeatureSet::L),
            "LDES" => Ok(FeatureSet::Ldes),
            "LADES" => Ok(FeatureSet::Lades),
            "docL" => Ok(FeatureSet::DocL),
            _ => Err(TemplateError::Unknown {
                what: "feature set",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemplateConfig {
    pub slot_mode: SlotMode,
    pub level: Level,
    pub feature_set: FeatureSet,
}

/// The focus action of a sentence template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Focus {
    pub mention_id: String,
    pub lemmas: BTreeSet<String>,
    pub synsets: BTreeSet<String>,
}

/// Per-slot unique lemmas, synsets and entity keys.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotFill {
    pub lemmas: BTreeSet<String>,
    pub synsets: BTreeSet<String>,
    pub entities: BTreeSet<String>,
}

impl SlotFill {
    fn add(&mut self, m: &Mention) {
        self.lemmas.extend(m.folded_lemmas());
        self.synsets
            .extend(m.top_synsets(0.0).into_iter().map(String::from));
        self.entities.insert(m.entity_key());
    }

    fn union(fills: &[&SlotFill]) -> SlotFill {
        let mut out = SlotFill::default();
        for f in fills {
            out.lemmas.extend(f.lemmas.iter().cloned());
            out.synsets.extend(f.synsets.iter().cloned());
            out.entities.extend(f.entities.iter().cloned());
        }
        out
    }
}

/// A filled event template. Sentence templates carry the focus action and
/// its sentence; document templates pool every mention of the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub level: Level,
    pub doc_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focus: Option<Focus>,
    pub slots: BTreeMap<SlotType, SlotFill>,
}

impl Template {
    fn empty(level: Level, doc_id: &str) -> Self {
        Template {
            level,
            doc_id: doc_id.to_string(),
            sentence_index: None,
            focus: None,
            slots: SlotType::ALL
                .into_iter()
                .map(|s| (s, SlotFill::default()))
                .collect(),
        }
    }

    pub fn slot(&self, slot: SlotType) -> &SlotFill {
        &self.slots[&slot]
    }

    fn slot_mut(&mut self, slot: SlotType) -> &mut SlotFill {
        self.slots.get_mut(&slot).expect("all slots present")
    }

    /// The fused entity slot of the two-slot layout.
    pub fn entity_slot(&self) -> SlotFill {
        SlotFill::union(&[
            self.slot(SlotType::Location),
            self.slot(SlotType::Time),
            self.slot(SlotType::HumanParticipant),
            self.slot(SlotType::NonHumanParticipant),
        ])
    }
}

/// Sentence template for an action mention: its own lemmas, the other
/// actions of the sentence, and its participants grouped by slot.
pub fn build_sentence_template(action: &Mention, corpus: &Corpus) -> Template {
    let mut t = Template::empty(Level::Sentence, &action.doc_id);
    t.sentence_index = Some(action.sentence_index);
    t.focus = Some(Focus {
        mention_id: action.mention_id.clone(),
        lemmas: action.folded_lemmas(),
        synsets: action
            .top_synsets(0.0)
            .into_iter()
            .map(String::from)
            .collect(),
    });
    t.slot_mut(SlotType::Action).add(action);
    if let Some(doc) = corpus.document(&action.doc_id) {
        for other in doc.action_mentions() {
            if other.sentence_index == action.sentence_index {
                t.slot_mut(SlotType::Action).add(other);
            }
        }
    }
    for p in corpus.participants_of(action) {
        t.slot_mut(p.slot).add(p);
    }
    t
}

/// Document template: per-slot union over all mentions of the document.
pub fn build_document_template(doc: &Document) -> Template {
    let mut t = Template::empty(Level::Document, &doc.doc_id);
    for m in &doc.mentions {
        t.slot_mut(m.slot).add(m);
    }
    t
}

/// `|a ∩ b| / |a ∪ b|`; `None` when both sets are empty.
pub fn jaccard_overlap<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> Option<f64> {
    let common = a.intersection(b).count();
    let union = a.len() + b.len() - common;
    (union > 0).then(|| common as f64 / union as f64)
}

/// Cosine between binary indicator vectors; `None` when either set is empty.
pub fn entity_cosine<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let common = a.intersection(b).count() as f64;
    Some(common / ((a.len() as f64).sqrt() * (b.len() as f64).sqrt()))
}

/// Leacock-Chodorow similarity between two action mentions' top senses.
pub fn action_similarity(a: &Mention, b: &Mention, taxonomy: &Taxonomy) -> Option<f64> {
    taxonomy.max_similarity(&a.top_synsets(0.0), &b.top_synsets(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    L,
    A,
    D,
    E,
    S,
}

const HEAD: [(&str, Kind); 5] = [
    ("action_lemma_overlap", Kind::L),
    ("action_synset_overlap", Kind::S),
    ("action_similarity", Kind::A),
    ("same_document", Kind::D),
    ("same_sentence", Kind::D),
];

const FIVE_SLOT_GROUPS: [&str; 5] = ["action_context", "location", "time", "human", "non_human"];
const TWO_SLOT_GROUPS: [&str; 2] = ["action_context", "entity"];

fn groups(mode: SlotMode) -> &'static [&'static str] {
    match mode {
        SlotMode::FiveSlot => &FIVE_SLOT_GROUPS,
        SlotMode::TwoSlot => &TWO_SLOT_GROUPS,
    }
}

/// A fixed-order feature vector; `None` marks a missing value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub slot_mode: SlotMode,
    pub values: Vec<Option<f64>>,
}

impl FeatureVector {
    pub fn names(&self) -> Vec<String> {
        feature_names(self.slot_mode)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let idx = self.names().iter().position(|n| n == name)?;
        self.values[idx]
    }

    /// Values restricted to a feature set, in vector order.
    pub fn select(&self, set: FeatureSet) -> Vec<Option<f64>> {
        feature_indices(self.slot_mode, set)
            .into_iter()
            .map(|i| self.values[i])
            .collect()
    }
}

pub fn feature_names(mode: SlotMode) -> Vec<String> {
    let mut names: Vec<String> = HEAD.iter().map(|(n, _)| n.to_string()).collect();
    for g in groups(mode) {
        for suffix in ["lemma_overlap", "entity_coreference", "synset_overlap"] {
            names.push(format!("{g}_{suffix}"));
        }
    }
    names
}

fn feature_kinds(mode: SlotMode) -> Vec<Kind> {
    let mut kinds: Vec<Kind> = HEAD.iter().map(|(_, k)| *k).collect();
    for _ in groups(mode) {
        kinds.extend([Kind::L, Kind::E, Kind::S]);
    }
    kinds
}

/// Indices of the features a set uses. `docL` keeps the per-slot lemma
/// overlaps, since active-action features do not exist between documents.
pub fn feature_indices(mode: SlotMode, set: FeatureSet) -> Vec<usize> {
    let keep = |i: usize, k: Kind| match set {
        FeatureSet::L => k == Kind::L,
        FeatureSet::DocL => k == Kind::L && i >= HEAD.len(),
        FeatureSet::Ldes => k != Kind::A,
        FeatureSet::Lades => true,
    };
    feature_kinds(mode)
        .into_iter()
        .enumerate()
        .filter(|&(i, k)| keep(i, k))
        .map(|(i, _)| i)
        .collect()
}

pub fn feature_names_for(mode: SlotMode, set: FeatureSet) -> Vec<String> {
    let names = feature_names(mode);
    feature_indices(mode, set)
        .into_iter()
        .map(|i| names[i].clone())
        .collect()
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn flag(b: bool) -> Option<f64> {
    Some(if b { 1.0 } else { 0.0 })
}

/// Pairwise features between two templates of the configured level.
///
/// All values are rounded to one decimal. Document-level vectors have no
/// active-action features and no same-sentence flag. The action-context
/// slot has no entity feature.
pub fn pair_features(
    a: &Template,
    b: &Template,
    config: &TemplateConfig,
    taxonomy: Option<&Taxonomy>,
) -> Result<FeatureVector, TemplateError> {
    for t in [a, b] {
        if t.level != config.level {
            return Err(TemplateError::LevelMismatch {
                expected: config.level,
                found: t.level,
            });
        }
    }
    let mut values: Vec<Option<f64>> = Vec::with_capacity(5 + 3 * config.slot_mode.slot_count());
    let same_doc = a.doc_id == b.doc_id;
    match (&a.focus, &b.focus, config.level) {
        (Some(fa), Some(fb), Level::Sentence) => {
            values.push(jaccard_overlap(&fa.lemmas, &fb.lemmas));
            values.push(jaccard_overlap(&fa.synsets, &fb.synsets));
            values.push(taxonomy.and_then(|t| {
                let xs: Vec<&String> = fa.synsets.iter().collect();
                let ys: Vec<&String> = fb.synsets.iter().collect();
                t.max_similarity(&xs, &ys)
            }));
            values.push(flag(same_doc));
            values.push(flag(same_doc && a.sentence_index == b.sentence_index));
        }
        _ => {
            values.extend([None, None, None]);
            values.push(flag(same_doc));
            values.push(None);
        }
    }

    let action = (a.slot(SlotType::Action), b.slot(SlotType::Action));
    values.push(jaccard_overlap(&action.0.lemmas, &action.1.lemmas));
    values.push(None);
    values.push(jaccard_overlap(&action.0.synsets, &action.1.synsets));

    let mut push_entity = |x: &SlotFill, y: &SlotFill| {
        values.push(jaccard_overlap(&x.lemmas, &y.lemmas));
        values.push(entity_cosine(&x.entities, &y.entities));
        values.push(jaccard_overlap(&x.synsets, &y.synsets));
    };
    match config.slot_mode {
        SlotMode::FiveSlot => {
            for slot in [
                SlotType::Location,
                SlotType::Time,
                SlotType::HumanParticipant,
                SlotType::NonHumanParticipant,
            ] {
                push_entity(a.slot(slot), b.slot(slot));
            }
        }
        SlotMode::TwoSlot => push_entity(&a.entity_slot(), &b.entity_slot()),
    }

    Ok(FeatureVector {
        slot_mode: config.slot_mode,
        values: values.into_iter().map(|v| v.map(round1)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ACTRESS_SENTENCES;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn sentence_config() -> TemplateConfig {
        TemplateConfig {
            slot_mode: SlotMode::FiveSlot,
            level: Level::Sentence,
            feature_set: FeatureSet::Lades,
        }
    }

    #[test]
    fn sentence_templates_of_actress_sentences() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let t1 = build_sentence_template(c.mention("m1").unwrap(), &c);
        assert_eq!(t1.slot(SlotType::Action).lemmas, set(&["enter"]));
        assert_eq!(t1.slot(SlotType::Location).lemmas, set(&["promises"]));
        assert_eq!(t1.slot(SlotType::HumanParticipant).lemmas, set(&["actress"]));
        assert!(t1.slot(SlotType::Time).lemmas.is_empty());
        assert!(t1.slot(SlotType::NonHumanParticipant).lemmas.is_empty());

        let t2 = build_sentence_template(c.mention("m4").unwrap(), &c);
        assert_eq!(t2.slot(SlotType::Action).lemmas, set(&["head"]));
        assert_eq!(t2.slot(SlotType::Time).lemmas, set(&["tuesday"]));
        assert_eq!(
            t2.slot(SlotType::Location).lemmas,
            set(&["malibu", "treatment", "facility"])
        );
        assert_eq!(t2.slot(SlotType::HumanParticipant).lemmas, set(&["actress"]));
    }

    #[test]
    fn document_template_of_actress_sentences() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let t = build_document_template(&c.documents()[0]);
        assert_eq!(t.slot(SlotType::Action).lemmas, set(&["enter", "head"]));
        assert_eq!(t.slot(SlotType::Time).lemmas, set(&["tuesday"]));
        assert_eq!(
            t.slot(SlotType::Location).lemmas,
            set(&["promises", "malibu", "treatment", "facility"])
        );
        // "actress" occurs in both sentences but is stored once.
        assert_eq!(t.slot(SlotType::HumanParticipant).lemmas, set(&["actress"]));
        assert!(t.slot(SlotType::NonHumanParticipant).lemmas.is_empty());
    }

    #[test]
    fn lone_action_fills_only_action_slot() {
        let c = Corpus::from_json_str(
            r#"{"documents":[{"doc_id":"d","topic_id":"1","subcollection":"other",
            "sentences":[[{"t":"Run","c0":0,"c1":3}]],
            "mentions":[{"id":"a","sent":0,"t0":0,"t1":1,"c0":0,"c1":3,"slot":"action","surface":"Run","lemmas":["run"]}]}]}"#,
        )
        .unwrap();
        let t = build_sentence_template(c.mention("a").unwrap(), &c);
        for slot in SlotType::ALL {
            assert_eq!(t.slot(slot).lemmas.is_empty(), slot != SlotType::Action);
        }
        let d = build_document_template(&c.documents()[0]);
        assert_eq!(d.slot(SlotType::Action).lemmas, set(&["run"]));
    }

    #[test]
    fn jaccard_cases() {
        assert_eq!(jaccard_overlap(&set(&["enter", "head"]), &set(&["enter"])), Some(0.5));
        assert_eq!(jaccard_overlap(&set(&["a", "b"]), &set(&["a", "b"])), Some(1.0));
        assert_eq!(jaccard_overlap(&set(&["a"]), &set(&["b"])), Some(0.0));
        assert_eq!(jaccard_overlap(&set(&[]), &set(&[])), None);
    }

    #[test]
    fn cosine_cases() {
        assert_eq!(entity_cosine(&set(&["actress"]), &set(&["actress"])), Some(1.0));
        assert_eq!(entity_cosine(&set(&["actress"]), &set(&["actor"])), Some(0.0));
        let v = entity_cosine(&set(&["a", "b"]), &set(&["b", "c"])).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert_eq!(entity_cosine(&set(&[]), &set(&["a"])), None);
    }

    #[test]
    fn action_similarity_cases() {
        let tax = Taxonomy::from_tsv("r\tv\troot\t\na\tv\tenter\tr\nb\tv\thead\tr\n").unwrap();
        let c = Corpus::from_json_str(&ACTRESS_SENTENCES.replace(
            r#""lemmas":["enter"]}"#,
            r#""lemmas":["enter"],"synsets":[["a",0.9],["b",0.1]]}"#,
        ).replace(
            r#""lemmas":["head"]}"#,
            r#""lemmas":["head"],"synsets":[["b",0.8]]}"#,
        ))
        .unwrap();
        let (m1, m4) = (c.mention("m1").unwrap(), c.mention("m4").unwrap());
        assert!((action_similarity(m1, m1, &tax).unwrap() - 1.3863).abs() < 1e-4);
        assert!((action_similarity(m1, m4, &tax).unwrap() - 0.2877).abs() < 1e-4);
        assert_eq!(action_similarity(c.mention("m2").unwrap(), m1, &tax), None);
    }

    #[test]
    fn reflexive_sentence_features() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let t = build_sentence_template(c.mention("m4").unwrap(), &c);
        let f = pair_features(&t, &t, &sentence_config(), None).unwrap();
        assert_eq!(f.get("action_lemma_overlap"), Some(1.0));
        assert_eq!(f.get("same_document"), Some(1.0));
        assert_eq!(f.get("same_sentence"), Some(1.0));
        assert_eq!(f.get("location_lemma_overlap"), Some(1.0));
        assert_eq!(f.get("human_entity_coreference"), Some(1.0));
        assert_eq!(f.get("non_human_lemma_overlap"), None);
        assert_eq!(f.values.len(), 20);
    }

    #[test]
    fn actress_sentences_pair() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let t1 = build_sentence_template(c.mention("m1").unwrap(), &c);
        let t2 = build_sentence_template(c.mention("m4").unwrap(), &c);
        let f = pair_features(&t1, &t2, &sentence_config(), None).unwrap();
        assert_eq!(f.get("action_lemma_overlap"), Some(0.0));
        assert_eq!(f.get("same_document"), Some(1.0));
        assert_eq!(f.get("same_sentence"), Some(0.0));
        assert_eq!(f.get("human_lemma_overlap"), Some(1.0));
        assert_eq!(f.get("location_lemma_overlap"), Some(0.0));
        assert_eq!(f.get("time_lemma_overlap"), Some(0.0));
        assert_eq!(f.get("non_human_lemma_overlap"), None);
    }

    #[test]
    fn empty_slots_are_missing_but_flags_present() {
        let a = Template::empty(Level::Document, "x");
        let b = Template::empty(Level::Document, "y");
        let cfg = TemplateConfig {
            level: Level::Document,
            ..sentence_config()
        };
        let f = pair_features(&a, &b, &cfg, None).unwrap();
        assert_eq!(f.get("same_document"), Some(0.0));
        assert!(f.values[5..].iter().all(Option::is_none));
        assert_eq!(f.get("action_similarity"), None);
        assert_eq!(f.get("same_sentence"), None);
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let s = build_sentence_template(c.mention("m1").unwrap(), &c);
        let d = build_document_template(&c.documents()[0]);
        assert!(matches!(
            pair_features(&s, &d, &sentence_config(), None),
            Err(TemplateError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn two_slot_layout_fuses_entities() {
        let c = Corpus::from_json_str(ACTRESS_SENTENCES).unwrap();
        let d = build_document_template(&c.documents()[0]);
        let mut expected = BTreeSet::new();
        for s in [
            SlotType::Location,
            SlotType::Time,
            SlotType::HumanParticipant,
            SlotType::NonHumanParticipant,
        ] {
            expected.extend(d.slot(s).lemmas.iter().cloned());
        }
        assert_eq!(d.entity_slot().lemmas, expected);
        let cfg = TemplateConfig {
            slot_mode: SlotMode::TwoSlot,
            level: Level::Document,
            feature_set: FeatureSet::DocL,
        };
        let f = pair_features(&d, &d, &cfg, None).unwrap();
        assert_eq!(f.values.len(), 11);
        assert_eq!(f.get("entity_lemma_overlap"), Some(1.0));
    }

    #[test]
    fn feature_set_indices() {
        let names = feature_names_for(SlotMode::FiveSlot, FeatureSet::L);
        assert!(names.iter().all(|n| n.ends_with("lemma_overlap")));
        assert_eq!(names.len(), 6);
        assert_eq!(feature_names_for(SlotMode::FiveSlot, FeatureSet::DocL).len(), 5);
        let ldes = feature_names_for(SlotMode::FiveSlot, FeatureSet::Ldes);
        assert!(!ldes.contains(&"action_similarity".to_string()));
        assert_eq!(ldes.len(), 19);
        assert_eq!(feature_names_for(SlotMode::FiveSlot, FeatureSet::Lades).len(), 20);
    }

    #[test]
    fn features_are_rounded() {
        let mut a = Template::empty(Level::Document, "x");
        let mut b = Template::empty(Level::Document, "y");
        a.slot_mut(SlotType::Location).lemmas = set(&["a", "b", "c"]);
        b.slot_mut(SlotType::Location).lemmas = set(&["a"]);
        let cfg = TemplateConfig {
            level: Level::Document,
            ..sentence_config()
        };
        let f = pair_features(&a, &b, &cfg, None).unwrap();
        assert_eq!(f.get("location_lemma_overlap"), Some(0.3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn lemma_set() -> impl Strategy<Value = BTreeSet<String>> {
            proptest::collection::btree_set("[a-e]", 0..4)
        }

        fn template() -> impl Strategy<Value = Template> {
            (
                proptest::collection::vec((lemma_set(), lemma_set(), lemma_set()), 5),
                0..2usize,
            )
                .prop_map(|(fills, doc)| {
                    let mut t = Template::empty(Level::Document, &format!("d{doc}"));
                    for (slot, (l, s, e)) in SlotType::ALL.into_iter().zip(fills) {
                        *t.slot_mut(slot) = SlotFill {
                            lemmas: l,
                            synsets: s,
                            entities: e,
                        };
                    }
                    t
                })
        }

        proptest! {
            #[test]
            fn pair_features_symmetric(a in template(), b in template(), two in any::<bool>()) {
                let cfg = TemplateConfig {
                    slot_mode: if two { SlotMode::TwoSlot } else { SlotMode::FiveSlot },
                    level: Level::Document,
                    feature_set: FeatureSet::Lades,
                };
                prop_assert_eq!(
                    pair_features(&a, &b, &cfg, None).unwrap(),
                    pair_features(&b, &a, &cfg, None).unwrap()
                );
            }

            #[test]
            fn jaccard_bounded(a in lemma_set(), b in lemma_set()) {
                if let Some(v) = jaccard_overlap(&a, &b) {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
                prop_assert_eq!(jaccard_overlap(&a, &b), jaccard_overlap(&b, &a));
            }
        }
    }
}
