//! Within-document event and entity instances.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cluster::UnionFind;
use crate::corpus::{Corpus, Document, Mention, SlotType, TimeAnchor};
use crate::taxonomy::Taxonomy;

/// A mention located by document and character span. The surface is kept so
/// merged instances can recount their preferred label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MentionRef {
    pub doc_id: String,
    pub char_start: usize,
    pub char_end: usize,
    pub surface: String,
}

impl MentionRef {
    pub fn of(m: &Mention) -> Self {
        MentionRef {
            doc_id: m.doc_id.clone(),
            char_start: m.char_start,
            char_end: m.char_end,
            surface: m.surface.clone(),
        }
    }

    /// `(doc_id, start, end)` without the surface.
    pub fn span(&self) -> (&str, usize, usize) {
        (&self.doc_id, self.char_start, self.char_end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActorRef {
    pub uri: String,
    pub labels: BTreeSet<String>,
    pub pref_label: String,
    pub role_labels: BTreeSet<String>,
}

/// An entity with the mentions that denote it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityInstance {
    pub uri: String,
    pub labels: BTreeSet<String>,
    pub pref_label: String,
    pub mentions: BTreeSet<MentionRef>,
}

impl EntityInstance {
    pub fn actor_ref(&self, role_labels: BTreeSet<String>) -> ActorRef {
        ActorRef {
            uri: self.uri.clone(),
            labels: self.labels.clone(),
            pref_label: self.pref_label.clone(),
            role_labels,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventInstance {
    pub uri: String,
    pub labels: BTreeSet<String>,
    pub pref_label: String,
    pub mentions: BTreeSet<MentionRef>,
    pub synset_ids: BTreeSet<String>,
    pub frame_labels: BTreeSet<String>,
    pub actors: BTreeSet<ActorRef>,
    pub time_anchors: BTreeSet<TimeAnchor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    /// Minimum LCh similarity for merging two lemma groups.
    pub lemma_merge_threshold: f64,
    /// Minimum WSD score for a sense to count as a top sense.
    pub wsd_floor: f64,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            lemma_merge_threshold: 2.0,
            wsd_floor: 0.0,
        }
    }
}

/// Most frequent surface, ties to the lexicographically first.
pub fn most_frequent<'a, I>(surfaces: I) -> Option<String>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for s in surfaces {
        *counts.entry(s).or_default() += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (s, c) in counts {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((s, c));
        }
    }
    best.map(|(s, _)| s.to_string())
}

/// Grouping key of a participant mention: its URI, or a bare
/// `non-entities/<lemmas>` name built from its case-folded lemmas.
pub fn entity_uri_of(m: &Mention) -> String {
    match &m.entity_uri {
        Some(uri) => uri.clone(),
        None => format!("non-entities/{}", m.folded_lemmas().into_iter().collect::<Vec<_>>().join("+")),
    }
}

/// Entity instances of a document's participant mentions (time mentions
/// excluded), ordered by uri.
pub fn build_entity_instances(doc: &Document) -> Vec<EntityInstance> {
    let mut groups: BTreeMap<String, Vec<&Mention>> = BTreeMap::new();
    for m in &doc.mentions {
        if m.slot.is_action() || m.slot == SlotType::Time {
            continue;
        }
        groups.entry(entity_uri_of(m)).or_default().push(m);
    }
    groups
        .into_iter()
        .map(|(uri, ms)| EntityInstance {
            pref_label: most_frequent(ms.iter().map(|m| m.surface.as_str())).expect("non-empty group"),
            labels: ms.iter().map(|m| m.surface.clone()).collect(),
            mentions: ms.iter().map(|m| MentionRef::of(m)).collect(),
            uri,
        })
        .collect()
}

/// Merges entity instances sharing a uri across documents; the preferred
/// label is recounted over all mentions. Ordered by uri.
pub fn merge_entities<I: IntoIterator<Item = EntityInstance>>(entities: I) -> Vec<EntityInstance> {
    let mut by_uri: BTreeMap<String, EntityInstance> = BTreeMap::new();
    for e in entities {
        match by_uri.get_mut(&e.uri) {
            Some(acc) => {
                acc.labels.extend(e.labels);
                acc.mentions.extend(e.mentions);
            }
            None => {
                by_uri.insert(e.uri.clone(), e);
            }
        }
    }
    by_uri
        .into_values()
        .map(|mut e| {
            e.pref_label = most_frequent(e.mentions.iter().map(|m| m.surface.as_str())).unwrap_or(e.pref_label);
            e
        })
        .collect()
}

/// Event instances of one document.
///
/// Action mentions are grouped by identical lemma key, then lemma groups are
/// merged single-link when their top senses reach the LCh threshold. Actors
/// come from the participants of every member, time anchors from the time
/// mentions of the members' sentences.
pub fn build_document_instances(
    doc: &Document,
    corpus: &Corpus,
    taxonomy: Option<&Taxonomy>,
    config: &InstanceConfig,
) -> Vec<EventInstance> {
    let mut by_lemma: BTreeMap<String, Vec<&Mention>> = BTreeMap::new();
    for m in doc.action_mentions() {
        by_lemma.entry(m.lemma_key()).or_default().push(m);
    }
    let groups: Vec<Vec<&Mention>> = by_lemma.into_values().collect();
    let senses: Vec<BTreeSet<&str>> = groups
        .iter()
        .map(|g| g.iter().flat_map(|m| m.top_synsets(config.wsd_floor)).collect())
        .collect();

    let mut uf = UnionFind::new(groups.len());
    if let Some(tax) = taxonomy {
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let a: Vec<&str> = senses[i].iter().copied().collect();
                let b: Vec<&str> = senses[j].iter().copied().collect();
                if tax
                    .max_similarity(&a, &b)
                    .is_some_and(|s| s >= config.lemma_merge_threshold)
                {
                    uf.union(i, j);
                }
            }
        }
    }

    let entities = build_entity_instances(doc);
    let entity_by_uri: BTreeMap<&str, &EntityInstance> =
        entities.iter().map(|e| (e.uri.as_str(), e)).collect();

    let mut clusters: Vec<Vec<&Mention>> = uf
        .components()
        .into_iter()
        .map(|c| {
            let mut ms: Vec<&Mention> = c.into_iter().flat_map(|g| groups[g].iter().copied()).collect();
            ms.sort_by_key(|m| (m.char_start, m.char_end));
            ms
        })
        .collect();
    clusters.sort_by_key(|ms| (ms[0].char_start, ms[0].char_end));

    clusters
        .into_iter()
        .enumerate()
        .map(|(k, ms)| {
            let mut roles: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
            let mut anchors = BTreeSet::new();
            for m in &ms {
                for p in corpus.participants_of(m) {
                    if p.slot == SlotType::Time {
                        continue;
                    }
                    roles
                        .entry(entity_uri_of(p))
                        .or_default()
                        .extend(corpus.roles_between(&m.mention_id, &p.mention_id));
                }
                anchors.extend(
                    doc.mentions
                        .iter()
                        .filter(|t| t.slot == SlotType::Time && t.sentence_index == m.sentence_index)
                        .filter_map(Mention::time_anchor),
                );
            }
            EventInstance {
                uri: format!("{}#ev{}", doc.doc_id, k + 1),
                labels: ms.iter().map(|m| m.surface.clone()).collect(),
                pref_label: most_frequent(ms.iter().map(|m| m.surface.as_str())).expect("non-empty cluster"),
                mentions: ms.iter().map(|m| MentionRef::of(m)).collect(),
                synset_ids: ms
                    .iter()
                    .flat_map(|m| m.top_synsets(config.wsd_floor))
                    .map(str::to_string)
                    .collect(),
                frame_labels: ms.iter().flat_map(|m| m.frames.iter().cloned()).collect(),
                actors: roles
                    .into_iter()
                    .map(|(uri, r)| entity_by_uri[uri.as_str()].actor_ref(r))
                    .collect(),
                time_anchors: anchors,
            }
        })
        .collect()
}
