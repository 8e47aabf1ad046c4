//! Cross-document matching and merging of event instances.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster::UnionFind;
use crate::corpus::Corpus;
use crate::instances::{
    build_document_instances, build_entity_instances, merge_entities, most_frequent, ActorRef,
    EntityInstance, EventInstance, InstanceConfig,
};
use crate::scorer::ChainSet;
use crate::taxonomy::Taxonomy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeGranularity {
    Year,
    Month,
    Day,
    #[serde(rename = "none")]
    NoTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticipantFilter {
    #[serde(rename = "any")]
    AnyRole,
    #[serde(rename = "a1")]
    RoleA1,
    #[serde(rename = "none")]
    NoParticipant,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("malformed config code {code:?}: {message}")]
    Malformed { code: String, message: String },
    #[error("unknown {what} {value:?}")]
    Unknown { what: &'static str, value: String },
    #[error("threshold {0} outside [0, 1]")]
    ThresholdRange(f64),
}

impl FromStr for TimeGranularity {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "y" | "year" => Ok(TimeGranularity::Year),
            "m" | "month" => Ok(TimeGranularity::Month),
            "d" | "day" => Ok(TimeGranularity::Day),
            "n" | "none" => Ok(TimeGranularity::NoTime),
            _ => Err(ConfigError::Unknown {
                what: "time filter",
                value: s.to_string(),
            }),
        }
    }
}

impl FromStr for ParticipantFilter {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "any" => Ok(ParticipantFilter::AnyRole),
            "a1" => Ok(ParticipantFilter::RoleA1),
            "n" | "none" => Ok(ParticipantFilter::NoParticipant),
            _ => Err(ConfigError::Unknown {
                what: "participant filter",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub time_granularity: TimeGranularity,
    pub participant_filter: ParticipantFilter,
    pub concept_threshold: f64,
    pub phrase_threshold: f64,
}

impl MatchConfig {
    pub fn new(
        time_granularity: TimeGranularity,
        participant_filter: ParticipantFilter,
        concept_threshold: f64,
        phrase_threshold: f64,
    ) -> Result<Self, ConfigError> {
        for t in [concept_threshold, phrase_threshold] {
            if !(0.0..=1.0).contains(&t) {
                return Err(ConfigError::ThresholdRange(t));
            }
        }
        Ok(MatchConfig {
            time_granularity,
            participant_filter,
            concept_threshold,
            phrase_threshold,
        })
    }

    /// The compact code, e.g. `YAc30p30`. Thresholds are printed as rounded percentages.
    pub fn code(&self) -> String {
        let t = match self.time_granularity {
            TimeGranularity::Year => "Y",
            TimeGranularity::Month => "M",
            TimeGranularity::Day => "D",
            TimeGranularity::NoTime => "N",
        };
        let p = match self.participant_filter {
            ParticipantFilter::AnyRole => "A",
            ParticipantFilter::RoleA1 => "A1",
            ParticipantFilter::NoParticipant => "N",
        };
        format!(
            "{t}{p}c{}p{}",
            (self.concept_threshold * 100.0).round(),
            (self.phrase_threshold * 100.0).round()
        )
    }
}

impl fmt::Display for MatchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl FromStr for MatchConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_config_code(s)
    }
}

/// Parses `[YMDN](A1|A|N)c<int>p<int>`.
pub fn parse_config_code(code: &str) -> Result<MatchConfig, ConfigError> {
    let malformed = |message: &str| ConfigError::Malformed {
        code: code.to_string(),
        message: message.to_string(),
    };
    let mut rest = code;
    let time = match rest.chars().next() {
        Some(c @ ('Y' | 'M' | 'D' | 'N')) => c.to_string().parse()?,
        Some(c) => {
            return Err(ConfigError::Unknown {
                what: "time filter",
                value: c.to_string(),
            })
        }
        None => return Err(malformed("empty code")),
    };
    rest = &rest[1..];
    let participant = if let Some(r) = rest.strip_prefix("A1") {
        rest = r;
        ParticipantFilter::RoleA1
    } else if let Some(r) = rest.strip_prefix('A') {
        rest = r;
        ParticipantFilter::AnyRole
    } else if let Some(r) = rest.strip_prefix('N') {
        rest = r;
        ParticipantFilter::NoParticipant
    } else {
        return Err(malformed("expected participant filter A, A1 or N"));
    };
    let rest = rest
        .strip_prefix('c')
        .ok_or_else(|| malformed("expected 'c' before the concept threshold"))?;
    let (c, p) = rest
        .split_once('p')
        .ok_or_else(|| malformed("expected 'p' before the phrase threshold"))?;
    let pct = |digits: &str| -> Result<f64, ConfigError> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed("thresholds must be integers"));
        }
        let v: u32 = digits.parse().map_err(|_| malformed("threshold too large"))?;
        Ok(f64::from(v) / 100.0)
    };
    MatchConfig::new(time, participant, pct(c)?, pct(p)?)
}

/// Overlap that is at least `threshold` relative to both sets; the sets must intersect.
fn mutual_overlap(a: &BTreeSet<String>, b: &BTreeSet<String>, threshold: f64) -> bool {
    let shared = a.intersection(b).count();
    if shared == 0 {
        return false;
    }
    let s = shared as f64;
    s >= threshold * a.len() as f64 - 1e-9 && s >= threshold * b.len() as f64 - 1e-9
}

fn folded(labels: &BTreeSet<String>) -> BTreeSet<String> {
    labels.iter().map(|l| l.to_lowercase()).collect()
}

/// Mutual synset overlap at `c`; instances lacking synsets on either side
/// fall back to mutual overlap of case-folded labels at `p`.
pub fn match_actions(a: &EventInstance, b: &EventInstance, config: &MatchConfig) -> bool {
    if !a.synset_ids.is_empty() && !b.synset_ids.is_empty() {
        mutual_overlap(&a.synset_ids, &b.synset_ids, config.concept_threshold)
    } else {
        mutual_overlap(&folded(&a.labels), &folded(&b.labels), config.phrase_threshold)
    }
}

/// Same URI, or either preferred label among the other's labels (case-folded).
pub fn actors_match(x: &ActorRef, y: &ActorRef) -> bool {
    if x.uri == y.uri {
        return true;
    }
    let in_labels = |p: &str, labels: &BTreeSet<String>| {
        let p = p.to_lowercase();
        labels.iter().any(|l| l.to_lowercase() == p)
    };
    in_labels(&x.pref_label, &y.labels) || in_labels(&y.pref_label, &x.labels)
}

pub fn match_participants(a: &EventInstance, b: &EventInstance, config: &MatchConfig) -> bool {
    let keep: fn(&ActorRef) -> bool = match config.participant_filter {
        ParticipantFilter::NoParticipant => return true,
        ParticipantFilter::AnyRole => |_| true,
        ParticipantFilter::RoleA1 => |x| x.role_labels.contains("A1"),
    };
    a.actors
        .iter()
        .filter(|x| keep(x))
        .any(|x| b.actors.iter().filter(|y| keep(y)).any(|y| actors_match(x, y)))
}

pub fn match_time(a: &EventInstance, b: &EventInstance, config: &MatchConfig) -> bool {
    if config.time_granularity == TimeGranularity::NoTime {
        return true;
    }
    match (a.time_anchors.is_empty(), b.time_anchors.is_empty()) {
        (true, true) => return true,
        (true, false) | (false, true) => return false,
        _ => {}
    }
    let agree = |x: &crate::corpus::TimeAnchor, y: &crate::corpus::TimeAnchor| {
        let month = || x.month.is_some() && x.month == y.month;
        let day = || x.day.is_some() && x.day == y.day;
        x.year == y.year
            && match config.time_granularity {
                TimeGranularity::Year | TimeGranularity::NoTime => true,
                TimeGranularity::Month => month(),
                TimeGranularity::Day => month() && day(),
            }
    };
    a.time_anchors
        .iter()
        .any(|x| b.time_anchors.iter().any(|y| agree(x, y)))
}

/// Actions, then participants, then time.
pub fn match_events(a: &EventInstance, b: &EventInstance, config: &MatchConfig) -> bool {
    match_actions(a, b, config) && match_participants(a, b, config) && match_time(a, b, config)
}

/// Clusters of instance indices under the closure of pairwise matches,
/// ordered by smallest member.
pub fn match_clusters(instances: &[EventInstance], config: &MatchConfig) -> Vec<Vec<usize>> {
    let n = instances.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let matched: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| match_events(&instances[i], &instances[j], config))
        .collect();
    let mut uf = UnionFind::new(n);
    for (&(i, j), m) in pairs.iter().zip(matched) {
        if m {
            uf.union(i, j);
        }
    }
    uf.components()
}

fn merge_actors<'a, I: IntoIterator<Item = &'a ActorRef>>(actors: I) -> BTreeSet<ActorRef> {
    let mut by_uri: BTreeMap<&str, Vec<&ActorRef>> = BTreeMap::new();
    for a in actors {
        by_uri.entry(&a.uri).or_default().push(a);
    }
    by_uri
        .into_iter()
        .map(|(uri, xs)| ActorRef {
            uri: uri.to_string(),
            labels: xs.iter().flat_map(|x| x.labels.iter().cloned()).collect(),
            pref_label: most_frequent(xs.iter().map(|x| x.pref_label.as_str())).expect("non-empty"),
            role_labels: xs.iter().flat_map(|x| x.role_labels.iter().cloned()).collect(),
        })
        .collect()
}

/// Merges a cluster into one instance with the smallest member uri.
pub fn merge_instances(members: &[&EventInstance]) -> EventInstance {
    if let [only] = members {
        return (*only).clone();
    }
    let mentions: BTreeSet<_> = members.iter().flat_map(|e| e.mentions.iter().cloned()).collect();
    EventInstance {
        uri: members.iter().map(|e| e.uri.as_str()).min().expect("non-empty cluster").to_string(),
        labels: members.iter().flat_map(|e| e.labels.iter().cloned()).collect(),
        pref_label: most_frequent(mentions.iter().map(|m| m.surface.as_str())).expect("mentions"),
        synset_ids: members.iter().flat_map(|e| e.synset_ids.iter().cloned()).collect(),
        frame_labels: members.iter().flat_map(|e| e.frame_labels.iter().cloned()).collect(),
        actors: merge_actors(members.iter().flat_map(|e| e.actors.iter())),
        time_anchors: members.iter().flat_map(|e| e.time_anchors.iter().copied()).collect(),
        mentions,
    }
}

/// Matches every pair of document-level instances of one topic, closes the
/// matches transitively and merges each cluster. Unmatched instances are
/// returned unchanged, in input order of their first member.
pub fn resolve_topic(instances: &[EventInstance], config: &MatchConfig) -> Vec<EventInstance> {
    match_clusters(instances, config)
        .into_iter()
        .map(|c| merge_instances(&c.iter().map(|&i| &instances[i]).collect::<Vec<_>>()))
        .collect()
}

/// Result of resolving a set of topics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoorToDoorRun {
    pub config: MatchConfig,
    /// Merged instances per topic, topics in ascending order.
    pub topics: Vec<(String, Vec<EventInstance>)>,
    pub entities: Vec<EntityInstance>,
}

impl DoorToDoorRun {
    pub fn events(&self) -> impl Iterator<Item = &EventInstance> {
        self.topics.iter().flat_map(|(_, evs)| evs.iter())
    }

    /// Mention-level chains of one topic, or of all topics.
    pub fn chains(&self, corpus: &Corpus, topic: Option<&str>) -> ChainSet {
        let mut by_span: HashMap<(&str, usize, usize), Vec<&str>> = HashMap::new();
        for m in corpus.action_mentions() {
            by_span
                .entry((m.doc_id.as_str(), m.char_start, m.char_end))
                .or_default()
                .push(&m.mention_id);
        }
        let chains: Vec<Vec<&str>> = self
            .topics
            .iter()
            .filter(|(t, _)| topic.is_none_or(|x| x == t))
            .flat_map(|(_, evs)| evs.iter())
            .map(|e| {
                let mut ids: Vec<&str> = e
                    .mentions
                    .iter()
                    .flat_map(|r| by_span.get(&r.span()).into_iter().flatten().copied())
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .filter(|c| !c.is_empty())
            .collect();
        ChainSet::new(chains).expect("instances partition the action mentions")
    }
}

/// Builds document instances and resolves them topic by topic. Actor labels
/// are aligned with the merged entity table.
pub fn run_door_to_door(
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    topics: &[String],
    instance_config: &InstanceConfig,
    config: &MatchConfig,
) -> DoorToDoorRun {
    let mut topics: Vec<&String> = topics.iter().collect();
    topics.sort();
    topics.dedup();
    let per_topic: Vec<(String, Vec<EventInstance>, Vec<EntityInstance>)> = topics
        .par_iter()
        .map(|t| {
            let docs: Vec<_> = corpus.documents_in_topic(t).collect();
            let events: Vec<EventInstance> = docs
                .iter()
                .flat_map(|d| build_document_instances(d, corpus, taxonomy, instance_config))
                .collect();
            let entities: Vec<EntityInstance> = docs.iter().flat_map(|d| build_entity_instances(d)).collect();
            ((*t).clone(), resolve_topic(&events, config), entities)
        })
        .collect();

    let entities = merge_entities(per_topic.iter().flat_map(|(_, _, e)| e.iter().cloned()));
    let table: HashMap<&str, &EntityInstance> = entities.iter().map(|e| (e.uri.as_str(), e)).collect();
    let topics = per_topic
        .into_iter()
        .map(|(t, evs, _)| {
            let evs = evs
                .into_iter()
                .map(|mut e| {
                    e.actors = e
                        .actors
                        .into_iter()
                        .map(|a| table[a.uri.as_str()].actor_ref(a.role_labels))
                        .collect();
                    e
                })
                .collect();
            (t, evs)
        })
        .collect();
    DoorToDoorRun {
        config: *config,
        topics,
        entities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TimeAnchor;
    use crate::instances::MentionRef;

    fn ids(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn event(uri: &str, synsets: &[&str], labels: &[&str]) -> EventInstance {
        EventInstance {
            uri: uri.into(),
            labels: ids(labels),
            pref_label: labels[0].into(),
            mentions: [MentionRef {
                doc_id: uri.into(),
                char_start: 0,
                char_end: 4,
                surface: labels[0].into(),
            }]
            .into(),
            synset_ids: ids(synsets),
            frame_labels: BTreeSet::new(),
            actors: BTreeSet::new(),
            time_anchors: BTreeSet::new(),
        }
    }

    fn actor(uri: &str, labels: &[&str], roles: &[&str]) -> ActorRef {
        ActorRef {
            uri: uri.into(),
            labels: ids(labels),
            pref_label: labels[0].into(),
            role_labels: ids(roles),
        }
    }

    fn cfg(code: &str) -> MatchConfig {
        parse_config_code(code).unwrap()
    }

    fn anchor(y: i32, m: Option<u32>, d: Option<u32>) -> TimeAnchor {
        TimeAnchor::new(y, m, d).unwrap()
    }

    #[test]
    fn parses_codes() {
        let c = cfg("YAc30p30");
        assert_eq!(c.time_granularity, TimeGranularity::Year);
        assert_eq!(c.participant_filter, ParticipantFilter::AnyRole);
        assert_eq!(c.concept_threshold, 0.3);
        assert_eq!(c.phrase_threshold, 0.3);
        assert_eq!(cfg("YA1c30p30").participant_filter, ParticipantFilter::RoleA1);
        assert_eq!(cfg("DNc70p10").code(), "DNc70p10");
        assert!(matches!(
            parse_config_code("QAc30p30"),
            Err(ConfigError::Unknown { what: "time filter", .. })
        ));
        for bad in ["", "Y", "YXc30p30", "YAc30", "YAcp30", "YAc30p", "YAc30p30x", "YAc130p30"] {
            assert!(parse_config_code(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn mutual_synset_overlap() {
        let a = event("a", &["i1", "i2", "i3", "i4"], &["x"]);
        let b = event("b", &["i1", "i2"], &["y"]);
        assert!(match_actions(&a, &b, &cfg("YAc30p30")));
        assert!(match_actions(&a, &b, &cfg("YAc50p30")));
        assert!(!match_actions(&a, &b, &cfg("YAc70p30")));
        let c = event("c", &["i9"], &["x"]);
        assert!(!match_actions(&a, &c, &cfg("YAc10p10")));
    }

    #[test]
    fn label_fallback() {
        let a = event("a", &[], &["shoot"]);
        let b = event("b", &[], &["Shoot", "shooting"]);
        assert!(match_actions(&a, &b, &cfg("YAc30p30")));
        assert!(!match_actions(&a, &b, &cfg("YAc30p70")));
        let c = event("c", &["i1"], &["shoot"]);
        assert!(match_actions(&a, &c, &cfg("YAc30p30")));
    }

    #[test]
    fn participants_by_uri_then_label() {
        let mut a = event("a", &["i1"], &["x"]);
        let mut b = event("b", &["i1"], &["x"]);
        assert!(match_participants(&a, &b, &cfg("YNc30p30")));
        assert!(!match_participants(&a, &b, &cfg("YAc30p30")));
        a.actors.insert(actor("dbp:Christopher_Simpson", &["Simpson"], &["A0"]));
        b.actors.insert(actor("dbp:Christopher_Simpson", &["Christopher Simpson"], &["A1"]));
        assert!(match_participants(&a, &b, &cfg("YAc30p30")));
        assert!(!match_participants(&a, &b, &cfg("YA1c30p30")));

        let mut c = event("c", &["i1"], &["x"]);
        c.actors.insert(actor("nwr:non-entities/simpson", &["Christopher Simpson", "Simpson"], &["A1"]));
        let mut d = event("d", &["i1"], &["x"]);
        d.actors.insert(actor("dbp:Chris_Simpson", &["christopher simpson", "Chris"], &["A1"]));
        assert!(match_participants(&c, &d, &cfg("YA1c30p30")));
        assert!(match_participants(&d, &c, &cfg("YA1c30p30")));
    }

    #[test]
    fn time_rules() {
        let mut a = event("a", &["i1"], &["x"]);
        let mut b = event("b", &["i1"], &["x"]);
        assert!(match_time(&a, &b, &cfg("YAc30p30")));
        a.time_anchors.insert(anchor(2012, Some(11), Some(12)));
        assert!(!match_time(&a, &b, &cfg("YAc30p30")));
        assert!(match_time(&a, &b, &cfg("NAc30p30")));
        b.time_anchors.insert(anchor(2012, None, None));
        assert!(match_time(&a, &b, &cfg("YAc30p30")));
        assert!(!match_time(&a, &b, &cfg("MAc30p30")));
        assert!(!match_time(&a, &b, &cfg("DAc30p30")));
        b.time_anchors.insert(anchor(2012, Some(11), None));
        assert!(match_time(&a, &b, &cfg("MAc30p30")));
        assert!(!match_time(&a, &b, &cfg("DAc30p30")));
    }

    #[test]
    fn disjoint_synsets_block_merge() {
        let mut a = event("a", &["i28310"], &["kill"]);
        let mut b = event("b", &["i34900"], &["shooting"]);
        let simpson = actor("dbp:Christopher_Simpson", &["Christopher Simpson"], &["A0"]);
        a.actors.insert(simpson.clone());
        b.actors.insert(simpson);
        a.time_anchors.insert(anchor(2012, Some(11), Some(12)));
        b.time_anchors.insert(anchor(2012, None, None));
        assert!(match_participants(&a, &b, &cfg("YAc30p30")));
        assert!(match_time(&a, &b, &cfg("YAc30p30")));
        assert!(!match_events(&a, &b, &cfg("YAc30p30")));
    }

    #[test]
    fn missing_anchor_blocks_merge() {
        let mut a = event("a", &["i1"], &["x"]);
        let b = event("b", &["i1"], &["x"]);
        a.time_anchors.insert(anchor(2012, None, None));
        assert!(!match_events(&a, &b, &cfg("YNc30p30")));
    }

    #[test]
    fn closure_merges_chain() {
        let a = event("a", &["i1", "i2"], &["x"]);
        let b = event("b", &["i2", "i3"], &["x"]);
        let c = event("c", &["i3", "i4"], &["y"]);
        let out = resolve_topic(&[a.clone(), b, c], &cfg("NNc50p50"));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].uri, "a");
        assert_eq!(out[0].mentions.len(), 3);
        assert_eq!(out[0].synset_ids, ids(&["i1", "i2", "i3", "i4"]));
        let lone = resolve_topic(std::slice::from_ref(&a), &cfg("NNc50p50"));
        assert_eq!(lone, vec![a]);
    }

    #[test]
    fn no_matches_is_identity() {
        let xs = vec![event("a", &["i1"], &["x"]), event("b", &["i2"], &["y"])];
        assert_eq!(resolve_topic(&xs, &cfg("NNc30p30")), xs);
    }
}
