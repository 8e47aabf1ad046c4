//! Annotated corpus model and loader.
//!
//! A corpus is a set of tokenized documents with typed mentions (one of the
//! five event slots), optional action-participant role links and gold event
//! coreference chains. Input is the canonical JSON layout:
//!
//! ```json
//! {"topics": ["1"],
//!  "documents": [{"doc_id": "1_7ecb", "topic_id": "1", "subcollection": "ecb",
//!                 "sentences": [[{"t": "The", "c0": 0, "c1": 3}]],
//!                 "mentions": [{"id": "m1", "sent": 0, "t0": 0, "t1": 1, "c0": 0, "c1": 3,
//!                               "slot": "action", "surface": "The", "lemmas": ["the"],
//!                               "synsets": [["i1", 0.9]]}],
//!                 "role_links": [{"action": "m1", "participant": "m2", "role": "A0"}]}],
//!  "gold_chains": {"c1": ["m1"]}}
//! ```
//!
//! Everything is validated on load; a [`Corpus`] is immutable afterwards.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five slots of the event model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotType {
    Action,
    Time,
    Location,
    #[serde(alias = "human")]
    HumanParticipant,
    #[serde(alias = "non_human")]
    NonHumanParticipant,
}

impl SlotType {
    pub const ALL: [SlotType; 5] = [
        SlotType::Action,
        SlotType::Time,
        SlotType::Location,
        SlotType::HumanParticipant,
        SlotType::NonHumanParticipant,
    ];

    pub fn is_action(self) -> bool {
        self == SlotType::Action
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SlotType::Action => "action",
            SlotType::Time => "time",
            SlotType::Location => "location",
            SlotType::HumanParticipant => "human_participant",
            SlotType::NonHumanParticipant => "non_human_participant",
        }
    }
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcollection {
    Ecb,
    Ecbplus,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    #[serde(rename = "t")]
    pub text: String,
    #[serde(rename = "c0")]
    pub start: usize,
    #[serde(rename = "c1")]
    pub end: usize,
}

/// A typed annotated span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    #[serde(rename = "id")]
    pub mention_id: String,
    /// Filled in from the enclosing document on load.
    #[serde(skip)]
    pub doc_id: String,
    #[serde(rename = "sent")]
    pub sentence_index: usize,
    #[serde(rename = "t0")]
    pub token_start: usize,
    #[serde(rename = "t1")]
    pub token_end: usize,
    #[serde(rename = "c0")]
    pub char_start: usize,
    #[serde(rename = "c1")]
    pub char_end: usize,
    pub slot: SlotType,
    pub surface: String,
    pub lemmas: BTreeSet<String>,
    /// `(synset_id, wsd_score)`, highest score first.
    #[serde(default)]
    pub synsets: Vec<(String, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_uri: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pref_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_value: Option<String>,
    /// Frame labels passed through to event instances.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frames: Vec<String>,
}

impl Mention {
    /// Synsets sharing the highest WSD score at or above `floor`.
    pub fn top_synsets(&self, floor: f64) -> Vec<&str> {
        let Some(best) = self.synsets.first().map(|(_, s)| *s) else {
            return Vec::new();
        };
        if best < floor {
            return Vec::new();
        }
        self.synsets
            .iter()
            .take_while(|(_, s)| *s == best)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    /// Case-folded lemmas.
    pub fn folded_lemmas(&self) -> BTreeSet<String> {
        self.lemmas.iter().map(|l| l.to_lowercase()).collect()
    }

    /// Case-folded lemma set joined into a single key.
    pub fn lemma_key(&self) -> String {
        self.folded_lemmas().into_iter().collect::<Vec<_>>().join(" ")
    }

    /// Entity identity key: the linked URI when present, else the lemma key.
    pub fn entity_key(&self) -> String {
        self.entity_uri.clone().unwrap_or_else(|| self.lemma_key())
    }

    pub fn time_anchor(&self) -> Option<TimeAnchor> {
        self.time_value.as_deref().and_then(|v| normalize_time(v).ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleLink {
    #[serde(rename = "action")]
    pub action_mention_id: String,
    #[serde(rename = "participant")]
    pub participant_mention_id: String,
    #[serde(rename = "role", default, skip_serializing_if = "Option::is_none")]
    pub role_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub topic_id: String,
    pub subcollection: Subcollection,
    pub sentences: Vec<Vec<Token>>,
    #[serde(default)]
    pub mentions: Vec<Mention>,
    #[serde(default)]
    pub role_links: Vec<RoleLink>,
}

impl Document {
    pub fn action_mentions(&self) -> impl Iterator<Item = &Mention> {
        self.mentions.iter().filter(|m| m.slot.is_action())
    }
}

/// A calendar anchor with year, month or day precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeAnchor {
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub month: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("unparseable time value {0:?}")]
    Unparseable(String),
    #[error("month out of range: {0}")]
    MonthOutOfRange(u32),
    #[error("day out of range: {year:04}-{month:02}-{day:02}")]
    DayOutOfRange { year: i32, month: u32, day: u32 },
    #[error("day given without month")]
    DayWithoutMonth,
}

impl TimeAnchor {
    pub fn new(year: i32, month: Option<u32>, day: Option<u32>) -> Result<Self, TimeError> {
        match (month, day) {
            (None, Some(_)) => Err(TimeError::DayWithoutMonth),
            (Some(m), _) if !(1..=12).contains(&m) => Err(TimeError::MonthOutOfRange(m)),
            (Some(m), Some(d)) => {
                if NaiveDate::from_ymd_opt(year, m, d).is_none() {
                    Err(TimeError::DayOutOfRange { year, month: m, day: d })
                } else {
                    Ok(TimeAnchor { year, month, day })
                }
            }
            _ => Ok(TimeAnchor { year, month, day }),
        }
    }

    /// ISO form with exactly the anchor's precision (`2012`, `2012-11`, `2012-11-12`).
    pub fn format(&self) -> String {
        match (self.month, self.day) {
            (Some(m), Some(d)) => format!("{:04}-{:02}-{:02}", self.year, m, d),
            (Some(m), None) => format!("{:04}-{:02}", self.year, m),
            _ => format!("{:04}", self.year),
        }
    }

    /// Undelimited digits (`2012`, `201211`, `20121112`).
    pub fn compact(&self) -> String {
        self.format().replace('-', "")
    }
}

impl fmt::Display for TimeAnchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl FromStr for TimeAnchor {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize_time(s)
    }
}

/// Parses `YYYY`, `YYYY-MM`, `YYYY-MM-DD` or `YYYYMMDD`.
pub fn normalize_time(raw: &str) -> Result<TimeAnchor, TimeError> {
    let bad = || TimeError::Unparseable(raw.to_string());
    let s = raw.trim();
    let digits = |part: &str, len: usize| -> Result<u32, TimeError> {
        if part.len() == len && part.bytes().all(|b| b.is_ascii_digit()) {
            part.parse().map_err(|_| bad())
        } else {
            Err(bad())
        }
    };
    let parts: Vec<&str> = s.split('-').collect();
    let (year, month, day) = match parts.as_slice() {
        [ymd] if ymd.len() == 8 => (
            digits(&ymd[0..4], 4)?,
            Some(digits(&ymd[4..6], 2)?),
            Some(digits(&ymd[6..8], 2)?),
        ),
        [ym] if ym.len() == 6 => (digits(&ym[0..4], 4)?, Some(digits(&ym[4..6], 2)?), None),
        [y] => (digits(y, 4)?, None, None),
        [y, m] => (digits(y, 4)?, Some(digits(m, 2)?), None),
        [y, m, d] => (digits(y, 4)?, Some(digits(m, 2)?), Some(digits(d, 2)?)),
        _ => return Err(bad()),
    };
    TimeAnchor::new(year as i32, month, day)
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("dangling role link {action:?} -> {participant:?} in document {doc_id:?}")]
    DanglingRoleLink {
        doc_id: String,
        action: String,
        participant: String,
    },
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> CorpusError {
    CorpusError::Schema {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
struct CorpusFile {
    #[serde(default)]
    topics: Vec<String>,
    documents: Vec<Document>,
    #[serde(default)]
    gold_chains: BTreeMap<String, Vec<String>>,
}

/// Gold event coreference chains over action mentions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldChainSet {
    pub chains: BTreeMap<String, BTreeSet<String>>,
}

/// A validated corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    topics: Vec<String>,
    documents: Vec<Document>,
    gold: GoldChainSet,
    doc_index: HashMap<String, usize>,
    mention_index: HashMap<String, (usize, usize)>,
    role_index: HashMap<String, Vec<(String, Option<String>)>>,
    chain_of: HashMap<String, String>,
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Corpus::from_json_slice(&bytes)
}

impl Corpus {
    pub fn from_json_slice(bytes: &[u8]) -> Result<Self, CorpusError> {
        let file: CorpusFile = serde_json::from_slice(bytes).map_err(|e| {
            schema(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Self::from_parts(file.topics, file.documents, file.gold_chains)
    }

    pub fn from_json_str(s: &str) -> Result<Self, CorpusError> {
        Self::from_json_slice(s.as_bytes())
    }

    /// Builds and validates a corpus from in-memory parts. Mention `doc_id`s
    /// are overwritten with their enclosing document's id.
    pub fn from_parts(
        topics: Vec<String>,
        mut documents: Vec<Document>,
        gold_chains: BTreeMap<String, Vec<String>>,
    ) -> Result<Self, CorpusError> {
        let mut doc_index = HashMap::new();
        let mut mention_index = HashMap::new();
        let mut role_index: HashMap<String, Vec<(String, Option<String>)>> = HashMap::new();
        let known_topics: BTreeSet<&str> = topics.iter().map(String::as_str).collect();

        for (di, doc) in documents.iter_mut().enumerate() {
            let loc = format!("documents[{di}]");
            if doc.doc_id.is_empty() {
                return Err(schema(format!("{loc}.doc_id"), "empty document id"));
            }
            if doc_index.insert(doc.doc_id.clone(), di).is_some() {
                return Err(CorpusError::DuplicateId {
                    kind: "document",
                    id: doc.doc_id.clone(),
                });
            }
            if !known_topics.is_empty() && !known_topics.contains(doc.topic_id.as_str()) {
                return Err(schema(
                    format!("{loc}.topic_id"),
                    format!("topic {:?} not listed in topics", doc.topic_id),
                ));
            }
            validate_tokens(doc, &loc)?;
            let doc_id = doc.doc_id.clone();
            for (mi, m) in doc.mentions.iter_mut().enumerate() {
                m.doc_id = doc_id.clone();
                validate_mention(m, &doc.sentences, &format!("{loc}.mentions[{mi}]"))?;
                if mention_index
                    .insert(m.mention_id.clone(), (di, mi))
                    .is_some()
                {
                    return Err(CorpusError::DuplicateId {
                        kind: "mention",
                        id: m.mention_id.clone(),
                    });
                }
            }
        }

        for (di, doc) in documents.iter().enumerate() {
            for (li, link) in doc.role_links.iter().enumerate() {
                let find = |id: &str| {
                    mention_index
                        .get(id)
                        .filter(|(d, _)| *d == di)
                        .map(|&(d, m)| &documents[d].mentions[m])
                };
                let (Some(action), Some(participant)) = (
                    find(&link.action_mention_id),
                    find(&link.participant_mention_id),
                ) else {
                    return Err(CorpusError::DanglingRoleLink {
                        doc_id: doc.doc_id.clone(),
                        action: link.action_mention_id.clone(),
                        participant: link.participant_mention_id.clone(),
                    });
                };
                let loc = format!("documents[{di}].role_links[{li}]");
                if !action.slot.is_action() {
                    return Err(schema(loc, "action side of role link is not an action mention"));
                }
                if participant.slot.is_action() {
                    return Err(schema(loc, "participant side of role link is an action mention"));
                }
                role_index
                    .entry(link.action_mention_id.clone())
                    .or_default()
                    .push((link.participant_mention_id.clone(), link.role_label.clone()));
            }
        }

        let mut gold = GoldChainSet::default();
        let mut chain_of = HashMap::new();
        for (chain_id, members) in gold_chains {
            let mut set = BTreeSet::new();
            for id in members {
                let Some(&(d, m)) = mention_index.get(&id) else {
                    return Err(schema(
                        format!("gold_chains.{chain_id}"),
                        format!("unknown mention {id:?}"),
                    ));
                };
                if !documents[d].mentions[m].slot.is_action() {
                    return Err(schema(
                        format!("gold_chains.{chain_id}"),
                        format!("mention {id:?} is not an action mention"),
                    ));
                }
                if let Some(other) = chain_of.insert(id.clone(), chain_id.clone()) {
                    if other != chain_id {
                        return Err(schema(
                            format!("gold_chains.{chain_id}"),
                            format!("mention {id:?} also belongs to chain {other:?}"),
                        ));
                    }
                }
                set.insert(id);
            }
            gold.chains.insert(chain_id, set);
        }

        Ok(Corpus {
            topics,
            documents,
            gold,
            doc_index,
            mention_index,
            role_index,
            chain_of,
        })
    }

    /// Canonical JSON re-serialization.
    pub fn to_canonical_json(&self) -> String {
        let file = CorpusFile {
            topics: self.topics.clone(),
            documents: self.documents.clone(),
            gold_chains: self
                .gold
                .chains
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("corpus serializes")
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, doc_id: &str) -> Option<&Document> {
        self.doc_index.get(doc_id).map(|&i| &self.documents[i])
    }

    pub fn mention(&self, mention_id: &str) -> Option<&Mention> {
        self.mention_index
            .get(mention_id)
            .map(|&(d, m)| &self.documents[d].mentions[m])
    }

    pub fn mentions(&self) -> impl Iterator<Item = &Mention> {
        self.documents.iter().flat_map(|d| d.mentions.iter())
    }

    pub fn action_mentions(&self) -> impl Iterator<Item = &Mention> {
        self.mentions().filter(|m| m.slot.is_action())
    }

    pub fn gold(&self) -> &GoldChainSet {
        &self.gold
    }

    pub fn gold_chain_of(&self, mention_id: &str) -> Option<&str> {
        self.chain_of.get(mention_id).map(String::as_str)
    }

    /// True iff both action mentions belong to the same gold chain.
    pub fn coreferent(&self, a: &str, b: &str) -> bool {
        match (self.gold_chain_of(a), self.gold_chain_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => a == b,
        }
    }

    /// Topic ids: the declared list plus any used by documents, sorted.
    pub fn topic_ids(&self) -> Vec<String> {
        let mut set: BTreeSet<String> = self.topics.iter().cloned().collect();
        set.extend(self.documents.iter().map(|d| d.topic_id.clone()));
        set.into_iter().collect()
    }

    pub fn documents_in_topic<'a>(&'a self, topic: &'a str) -> impl Iterator<Item = &'a Document> {
        self.documents.iter().filter(move |d| d.topic_id == topic)
    }

    /// Explicit role links of an action mention as `(participant, role)`.
    pub fn role_links_of(&self, action_id: &str) -> &[(String, Option<String>)] {
        self.role_index
            .get(action_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Participants of an action mention: explicitly linked mentions when the
    /// action has role links, otherwise every non-action mention of its
    /// sentence. Returned in document order; empty for non-action mentions.
    pub fn participants_of(&self, action: &Mention) -> Vec<&Mention> {
        if !action.slot.is_action() {
            return Vec::new();
        }
        let Some(doc) = self.document(&action.doc_id) else {
            return Vec::new();
        };
        let links = self.role_links_of(&action.mention_id);
        if links.is_empty() {
            doc.mentions
                .iter()
                .filter(|m| !m.slot.is_action() && m.sentence_index == action.sentence_index)
                .collect()
        } else {
            let linked: BTreeSet<&str> = links.iter().map(|(p, _)| p.as_str()).collect();
            doc.mentions
                .iter()
                .filter(|m| linked.contains(m.mention_id.as_str()))
                .collect()
        }
    }

    /// Role labels attached to `participant` by explicit links from `action`.
    pub fn roles_between(&self, action_id: &str, participant_id: &str) -> BTreeSet<String> {
        self.role_links_of(action_id)
            .iter()
            .filter(|(p, _)| p == participant_id)
            .filter_map(|(_, r)| r.clone())
            .collect()
    }
}

fn validate_tokens(doc: &Document, loc: &str) -> Result<(), CorpusError> {
    if doc.sentences.is_empty() {
        return Err(schema(format!("{loc}.sentences"), "document has no sentences"));
    }
    let mut prev_end: Option<usize> = None;
    for (si, sentence) in doc.sentences.iter().enumerate() {
        if sentence.is_empty() {
            return Err(schema(format!("{loc}.sentences[{si}]"), "empty sentence"));
        }
        for (ti, tok) in sentence.iter().enumerate() {
            let tloc = || format!("{loc}.sentences[{si}][{ti}]");
            if tok.start >= tok.end {
                return Err(schema(tloc(), "token char range is empty or reversed"));
            }
            if prev_end.is_some_and(|p| tok.start < p) {
                return Err(schema(tloc(), "char offsets are not strictly increasing"));
            }
            prev_end = Some(tok.end);
        }
    }
    Ok(())
}

fn validate_mention(m: &Mention, sentences: &[Vec<Token>], loc: &str) -> Result<(), CorpusError> {
    if m.mention_id.is_empty() {
        return Err(schema(format!("{loc}.id"), "empty mention id"));
    }
    let Some(sentence) = sentences.get(m.sentence_index) else {
        return Err(schema(
            format!("{loc}.sent"),
            format!("sentence {} does not exist", m.sentence_index),
        ));
    };
    if m.token_start >= m.token_end || m.token_end > sentence.len() {
        return Err(schema(
            format!("{loc}.t0"),
            format!(
                "token span [{}, {}) outside sentence of {} tokens",
                m.token_start,
                m.token_end,
                sentence.len()
            ),
        ));
    }
    if m.char_start != sentence[m.token_start].start || m.char_end != sentence[m.token_end - 1].end
    {
        return Err(schema(
            format!("{loc}.c0"),
            "char span does not match token span",
        ));
    }
    if m.lemmas.is_empty() || m.lemmas.iter().any(|l| l.trim().is_empty()) {
        return Err(schema(format!("{loc}.lemmas"), "lemmas must be non-empty"));
    }
    let mut prev = f64::INFINITY;
    for (id, score) in &m.synsets {
        if id.is_empty() || !(0.0..=1.0).contains(score) {
            return Err(schema(
                format!("{loc}.synsets"),
                format!("invalid synset entry ({id:?}, {score})"),
            ));
        }
        if *score > prev {
            return Err(schema(
                format!("{loc}.synsets"),
                "wsd scores must be sorted descending",
            ));
        }
        prev = *score;
    }
    if let Some(tv) = &m.time_value {
        if m.slot != SlotType::Time {
            return Err(schema(
                format!("{loc}.time_value"),
                "time_value on a non-time mention",
            ));
        }
        normalize_time(tv).map_err(|e| schema(format!("{loc}.time_value"), e.to_string()))?;
    }
    Ok(())
}
