//! Generated corpora and a toy taxonomy for tests and demonstrations.
//!
//! Every topic holds two events of the same two action concepts that differ
//! in actor, object, place and year. Documents alternate between the two
//! synonyms of each concept, so the lemma baseline both splits true chains
//! and joins the two events of a topic, while concept, participant and time
//! evidence separates them exactly.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Mention, RoleLink, SlotType, Subcollection, TimeAnchor, Token};
use crate::instances::{EntityInstance, EventInstance, MentionRef};
use crate::taxonomy::Taxonomy;

/// Verb taxonomy of depth 4: identical synsets score `ln 8`, siblings `ln(8/3)`.
pub const TOY_TAXONOMY: &str = "\
# id\tpos\tlemmas\thypernyms
i100\tv\tact\t
i101\tv\tdo,perform\ti100
i110\tv\tchange\ti101
i120\tv\tinteract\ti101
i130\tv\ttransfer\ti101
i111\tv\tkill,murder\ti110
i112\tv\tinjure,wound\ti110
i113\tv\tdestroy,wreck\ti110
i121\tv\tarrest,detain\ti120
i122\tv\tattack,assault\ti120
i123\tv\tannounce,declare\ti120
i131\tv\tbuy,purchase\ti130
i132\tv\tsteal,rob\ti130
i133\tv\thire,employ\ti130
i134\tv\tleave,depart\ti130
";

struct Concept {
    synset: &'static str,
    verbs: [(&'static str, &'static str); 2],
}

const CONCEPTS: [Concept; 8] = [
    Concept { synset: "i111", verbs: [("killed", "kill"), ("murdered", "murder")] },
    Concept { synset: "i121", verbs: [("arrested", "arrest"), ("detained", "detain")] },
    Concept { synset: "i131", verbs: [("bought", "buy"), ("purchased", "purchase")] },
    Concept { synset: "i123", verbs: [("announced", "announce"), ("declared", "declare")] },
    Concept { synset: "i122", verbs: [("attacked", "attack"), ("assaulted", "assault")] },
    Concept { synset: "i134", verbs: [("left", "leave"), ("departed", "depart")] },
    Concept { synset: "i112", verbs: [("injured", "injure"), ("wounded", "wound")] },
    Concept { synset: "i133", verbs: [("hired", "hire"), ("employed", "employ")] },
];

const SURNAMES: [&str; 12] = [
    "Abbott", "Bishop", "Carver", "Dalton", "Ellison", "Fletcher", "Garrison", "Hollis", "Ingram",
    "Jarvis", "Kendall", "Lowell",
];
const CITIES: [&str; 10] = [
    "Austin", "Boston", "Denver", "Fresno", "Houston", "Memphis", "Oakland", "Phoenix", "Portland",
    "Tulsa",
];
const OBJECTS: [&str; 10] = [
    "guard", "banker", "painting", "warehouse", "ship", "studio", "clerk", "tanker", "gallery",
    "pilot",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub topics: usize,
    /// Documents per topic; document `d` reports event `d % 2`.
    pub docs_per_topic: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            topics: 2,
            docs_per_topic: 4,
            seed: 0,
        }
    }
}

pub fn toy_taxonomy() -> Taxonomy {
    Taxonomy::from_tsv(TOY_TAXONOMY).expect("toy taxonomy is valid")
}

/// Builds one document from whitespace-tokenised sentences.
#[derive(Debug, Clone)]
pub struct DocumentBuilder {
    doc: Document,
    offset: usize,
}

impl DocumentBuilder {
    pub fn new(doc_id: &str, topic_id: &str) -> Self {
        DocumentBuilder {
            doc: Document {
                doc_id: doc_id.to_string(),
                topic_id: topic_id.to_string(),
                subcollection: Subcollection::Other,
                sentences: Vec::new(),
                mentions: Vec::new(),
                role_links: Vec::new(),
            },
            offset: 0,
        }
    }

    /// Appends a sentence and returns its index. Tokens are separated by one space.
    pub fn sentence(&mut self, text: &str) -> usize {
        let mut tokens = Vec::new();
        for word in text.split_whitespace() {
            let start = self.offset;
            let end = start + word.len();
            tokens.push(Token {
                text: word.to_string(),
                start,
                end,
            });
            self.offset = end + 1;
        }
        self.doc.sentences.push(tokens);
        self.doc.sentences.len() - 1
    }

    /// Adds a mention over tokens `t0..t1` of sentence `sent`.
    pub fn mention(
        &mut self,
        id: &str,
        sent: usize,
        t0: usize,
        t1: usize,
        slot: SlotType,
        lemmas: &[&str],
    ) -> &mut Mention {
        let tokens = &self.doc.sentences[sent][t0..t1];
        let surface = tokens
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        self.doc.mentions.push(Mention {
            mention_id: id.to_string(),
            doc_id: self.doc.doc_id.clone(),
            sentence_index: sent,
            token_start: t0,
            token_end: t1,
            char_start: tokens[0].start,
            char_end: tokens[tokens.len() - 1].end,
            slot,
            surface,
            lemmas: lemmas.iter().map(|l| l.to_string()).collect(),
            synsets: Vec::new(),
            entity_uri: None,
            pref_label: None,
            time_value: None,
            frames: Vec::new(),
        });
        self.doc.mentions.last_mut().expect("just pushed")
    }

    pub fn link(&mut self, action: &str, participant: &str, role: Option<&str>) {
        self.doc.role_links.push(RoleLink {
            action_mention_id: action.to_string(),
            participant_mention_id: participant.to_string(),
            role_label: role.map(str::to_string),
        });
    }

    pub fn build(self) -> Document {
        self.doc
    }
}

struct Event {
    actor: String,
    object: &'static str,
    city: &'static str,
    year: i32,
    month: u32,
}

/// Generates a corpus with topics `"1"..=spec.topics`.
pub fn generate(spec: &SyntheticSpec) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut names: Vec<usize> = (0..SURNAMES.len()).collect();
    let mut cities: Vec<usize> = (0..CITIES.len()).collect();
    let mut objects: Vec<usize> = (0..OBJECTS.len()).collect();
    let mut topics = Vec::new();
    let mut documents = Vec::new();
    let mut gold: BTreeMap<String, Vec<String>> = BTreeMap::new();

    for t in 0..spec.topics {
        let topic = (t + 1).to_string();
        topics.push(topic.clone());
        names.shuffle(&mut rng);
        cities.shuffle(&mut rng);
        objects.shuffle(&mut rng);
        let main = &CONCEPTS[(2 * t) % CONCEPTS.len()];
        let second = &CONCEPTS[(2 * t + 1) % CONCEPTS.len()];
        let events: Vec<Event> = (0..2)
            .map(|e| Event {
                actor: SURNAMES[names[e]].to_string(),
                object: OBJECTS[objects[e]],
                city: CITIES[cities[e]],
                year: 2000 + (2 * t + e) as i32,
                month: 1 + (e as u32 * 5),
            })
            .collect();

        for d in 0..spec.docs_per_topic {
            let e = d % 2;
            let ev = &events[e];
            let doc_id = format!("{topic}_{}syn", d + 1);
            let p = |n: &str| format!("{doc_id}.{n}");
            let (v1_surface, v1_lemma) = main.verbs[(d / 2) % 2];
            let (v2_surface, v2_lemma) = second.verbs[(d / 2) % 2];
            let year = ev.year.to_string();
            let date = format!("{}-{:02}", ev.year, ev.month);
            let actor_uri = format!("dbp:{}", ev.actor);

            let mut b = DocumentBuilder::new(&doc_id, &topic);
            let s0 = b.sentence(&format!(
                "{} {} the {} in {} in {}",
                ev.actor, v1_surface, ev.object, ev.city, year
            ));
            let actor0 = b.mention(&p("a0"), s0, 0, 1, SlotType::HumanParticipant, &[&ev.actor.to_lowercase()]);
            actor0.entity_uri = Some(actor_uri.clone());
            b.mention(&p("v0"), s0, 1, 2, SlotType::Action, &[v1_lemma]).synsets =
                vec![(main.synset.to_string(), 1.0)];
            b.mention(&p("o0"), s0, 3, 4, SlotType::NonHumanParticipant, &[ev.object]);
            b.mention(&p("l0"), s0, 5, 6, SlotType::Location, &[&ev.city.to_lowercase()]).entity_uri =
                Some(format!("dbp:{}", ev.city));
            b.mention(&p("t0"), s0, 7, 8, SlotType::Time, &[&year]).time_value = Some(year.clone());
            b.link(&p("v0"), &p("a0"), Some("A0"));
            b.link(&p("v0"), &p("o0"), Some("A1"));
            b.link(&p("v0"), &p("l0"), Some("AM-LOC"));
            b.link(&p("v0"), &p("t0"), Some("AM-TMP"));

            let s1 = b.sentence(&format!(
                "Police say {} {} a {} in {}",
                ev.actor, v2_surface, ev.object, date
            ));
            b.mention(&p("a1"), s1, 2, 3, SlotType::HumanParticipant, &[&ev.actor.to_lowercase()])
                .entity_uri = Some(actor_uri);
            b.mention(&p("v1"), s1, 3, 4, SlotType::Action, &[v2_lemma]).synsets =
                vec![(second.synset.to_string(), 1.0)];
            b.mention(&p("o1"), s1, 5, 6, SlotType::NonHumanParticipant, &[ev.object]);
            b.mention(&p("t1"), s1, 7, 8, SlotType::Time, &[&date]).time_value = Some(date.clone());
            b.link(&p("v1"), &p("a1"), Some("A0"));
            b.link(&p("v1"), &p("o1"), Some("A1"));
            b.link(&p("v1"), &p("t1"), Some("AM-TMP"));
            documents.push(b.build());

            gold.entry(format!("t{topic}e{e}main")).or_default().push(p("v0"));
            gold.entry(format!("t{topic}e{e}second")).or_default().push(p("v1"));
        }
    }
    Corpus::from_parts(topics, documents, gold).expect("generated corpus is valid")
}

fn pick<R: Rng, T: Clone + Ord>(rng: &mut R, pool: &[T], max: usize) -> BTreeSet<T> {
    let k = rng.gen_range(0..=max.min(pool.len()));
    pool.iter().cloned().choose_multiple(rng, k).into_iter().collect()
}

fn random_anchor<R: Rng>(rng: &mut R) -> TimeAnchor {
    let year = rng.gen_range(2010..=2011);
    let month = rng.gen_bool(0.7).then(|| rng.gen_range(1..=2));
    let day = month.and_then(|_| rng.gen_bool(0.6).then(|| rng.gen_range(1..=2)));
    TimeAnchor::new(year, month, day).expect("valid date")
}

/// Random entity table with small label vocabularies so labels collide.
pub fn random_entities<R: Rng>(rng: &mut R, n: usize) -> Vec<EntityInstance> {
    const LABELS: [&str; 5] = ["Simpson", "Christopher Simpson", "the actress", "Lohan", "police"];
    let uris = ["dbp:Christopher_Simpson", "dbp:Lindsay_Lohan", "non-entities/police", "http://example.org/x y", "dbp:Jerome_Flynn"];
    uris.iter()
        .take(n)
        .enumerate()
        .map(|(i, uri)| {
            let mut labels = pick(rng, &LABELS.map(String::from), 3);
            if labels.is_empty() {
                labels.insert(LABELS[i].to_string());
            }
            let pref_label = labels.iter().choose(rng).expect("non-empty").clone();
            let mentions = labels
                .iter()
                .enumerate()
                .map(|(k, l)| MentionRef {
                    doc_id: format!("ent{i} doc"),
                    char_start: 10 * k,
                    char_end: 10 * k + l.len(),
                    surface: l.clone(),
                })
                .collect();
            EntityInstance {
                uri: uri.to_string(),
                labels,
                pref_label,
                mentions,
            }
        })
        .collect()
}

/// Random event instances over small vocabularies, with actors drawn from
/// `entities`. Mention spans are unique per instance index.
pub fn random_events<R: Rng>(rng: &mut R, n: usize, entities: &[EntityInstance]) -> Vec<EventInstance> {
    const SYNSETS: [&str; 5] = ["i1", "i2", "i3", "i4", "i28310"];
    const LABELS: [&str; 5] = ["shoot", "shooting", "Shoot", "kill", "say \"hi\""];
    const ROLES: [&str; 3] = ["A0", "A1", "AM-LOC"];
    const FRAMES: [&str; 2] = ["Killing", "Hit_target"];
    (0..n)
        .map(|i| {
            let mut labels = pick(rng, &LABELS.map(String::from), 3);
            if labels.is_empty() {
                labels.insert(LABELS[i % LABELS.len()].to_string());
            }
            let mentions: BTreeSet<MentionRef> = labels
                .iter()
                .enumerate()
                .map(|(k, l)| MentionRef {
                    doc_id: format!("{}_{}ecb", i % 3, i),
                    char_start: 20 * k,
                    char_end: 20 * k + l.len(),
                    surface: l.clone(),
                })
                .collect();
            let pref_label = labels.iter().choose(rng).expect("non-empty").clone();
            let mut actors = BTreeSet::new();
            for e in entities {
                if rng.gen_bool(0.4) {
                    actors.insert(e.actor_ref(pick(rng, &ROLES.map(String::from), 2)));
                }
            }
            let time_anchors = (0..rng.gen_range(0..=2)).map(|_| random_anchor(rng)).collect();
            EventInstance {
                uri: format!("{}_{}ecb#ev{}", i % 3, i, i + 1),
                labels,
                pref_label,
                mentions,
                synset_ids: pick(rng, &SYNSETS.map(String::from), 3),
                frame_labels: pick(rng, &FRAMES.map(String::from), 1),
                actors,
                time_anchors,
            }
        })
        .collect()
}

/// A random instance graph: up to `max_events` events over up to five entities.
pub fn random_graph<R: Rng>(rng: &mut R, max_events: usize) -> (Vec<EventInstance>, Vec<EntityInstance>) {
    let n_ent = rng.gen_range(0..=5);
    let entities = random_entities(rng, n_ent);
    let n_ev = rng.gen_range(0..=max_events);
    (random_events(rng, n_ev, &entities), entities)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_corpus_is_valid_and_deterministic() {
        let spec = SyntheticSpec::default();
        let a = generate(&spec);
        let b = generate(&spec);
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert_eq!(a.documents().len(), 8);
        assert_eq!(a.gold().chains.len(), 8);
        assert_eq!(a.action_mentions().count(), 16);
    }

    #[test]
    fn toy_taxonomy_depth() {
        let t = toy_taxonomy();
        assert_eq!(t.max_depth('v'), Some(4));
    }
}
