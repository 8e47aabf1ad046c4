//! SEM/GAF Turtle export and a parser for the exported subset.
//!
//! Terms are separated by whitespace, and the `,` `;` `.` separators are
//! always written as standalone tokens. This lets mention URIs such as
//! `nwr:45_5ecbplus#char=167,186` appear verbatim. Bare instance names are
//! written in the `nwr:` namespace; names with a known prefix keep it.
//! Characters that would break a term are percent-encoded.

use std::collections::{BTreeMap, BTreeSet};

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use thiserror::Error;

use crate::corpus::{normalize_time, TimeAnchor};
use crate::instances::{ActorRef, EntityInstance, EventInstance, MentionRef};

pub const DEFAULT_BASE: &str = "http://www.newsreader-project.eu/data/";

/// Prefixes other than `nwr`, in header order.
pub const PREFIXES: [(&str, &str); 9] = [
    ("sem", "http://semanticweb.cs.vu.nl/2009/11/sem/"),
    ("gaf", "http://groundedannotationframework.org/gaf#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("ili", "http://globalwordnet.org/ili/"),
    ("fn", "http://www.newsreader-project.eu/framenet/"),
    ("dbp", "http://dbpedia.org/resource/"),
    ("time", "http://www.newsreader-project.eu/time/"),
    ("pb", "http://www.newsreader-project.eu/propbank/"),
];

const TERM: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'<')
    .add(b'>')
    .add(b'\\')
    .add(b'%');

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemError {
    #[error("instance {0:?} has no mentions")]
    EmptyMentions(String),
    #[error("duplicate subject {0:?}")]
    DuplicateSubject(String),
    #[error("uri {0:?} uses the reserved nwr: prefix; give bare names instead")]
    ReservedPrefix(String),
    #[error("actor {0:?} is not in the entity list")]
    UnknownActor(String),
    #[error("actor {0:?} disagrees with its entity block")]
    InconsistentActor(String),
    #[error("mention {0:?} has conflicting surfaces")]
    ConflictingMention(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown predicate {predicate}")]
    UnknownPredicate { line: usize, predicate: String },
    #[error("line {line}: undeclared prefix {prefix:?}")]
    UnknownPrefix { line: usize, prefix: String },
    #[error("{subject}: {message}")]
    Invalid { subject: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportOptions {
    /// Namespace IRI bound to `nwr:`.
    pub base: String,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            base: DEFAULT_BASE.to_string(),
        }
    }
}

fn encode(s: &str) -> String {
    utf8_percent_encode(s, TERM).to_string()
}

fn decode(s: &str) -> String {
    percent_decode_str(s).decode_utf8_lossy().into_owned()
}

fn known_prefix(p: &str) -> bool {
    PREFIXES.iter().any(|(k, _)| *k == p)
}

/// Turtle term for a uri.
pub fn uri_term(uri: &str) -> Result<String, SemError> {
    if uri.contains("://") {
        return Ok(format!("<{}>", encode(uri)));
    }
    if uri.starts_with("nwr:") {
        return Err(SemError::ReservedPrefix(uri.to_string()));
    }
    if let Some((p, local)) = uri.split_once(':') {
        if known_prefix(p) {
            return Ok(format!("{p}:{}", encode(local)));
        }
    }
    if uri.contains("#char=") {
        return Err(invalid(uri, "#char= is reserved for mention uris"));
    }
    Ok(format!("nwr:{}", encode(uri)))
}

/// `nwr:<doc_id>#char=<start>,<end>`.
pub fn mention_uri(m: &MentionRef) -> String {
    format!("nwr:{}#char={},{}", encode(&m.doc_id), m.char_start, m.char_end)
}

fn literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn time_term(t: &TimeAnchor) -> String {
    format!("time:{}", t.compact())
}

type Block = BTreeMap<String, BTreeSet<String>>;

fn add(block: &mut Block, predicate: &str, object: String) {
    block.entry(predicate.to_string()).or_default().insert(object);
}

fn mention_objects(
    uri: &str,
    mentions: &BTreeSet<MentionRef>,
    surfaces: &mut BTreeMap<String, String>,
    block: &mut Block,
) -> Result<(), SemError> {
    if mentions.is_empty() {
        return Err(SemError::EmptyMentions(uri.to_string()));
    }
    for m in mentions {
        let term = mention_uri(m);
        if let Some(prev) = surfaces.insert(term.clone(), m.surface.clone()) {
            if prev != m.surface {
                return Err(SemError::ConflictingMention(term));
            }
        }
        add(block, "gaf:denotedBy", term);
    }
    Ok(())
}

/// Serializes events and entities. Blocks are sorted by subject, predicates
/// and objects by their written form, so equal input gives equal bytes.
pub fn export_turtle(
    events: &[EventInstance],
    entities: &[EntityInstance],
    options: &ExportOptions,
) -> Result<String, SemError> {
    let mut blocks: BTreeMap<String, Block> = BTreeMap::new();
    let mut surfaces: BTreeMap<String, String> = BTreeMap::new();
    let mut entity_table: BTreeMap<&str, &EntityInstance> = BTreeMap::new();

    for e in entities {
        let subject = uri_term(&e.uri)?;
        let mut b = Block::new();
        for l in &e.labels {
            add(&mut b, "rdfs:label", literal(l));
        }
        add(&mut b, "skos:prefLabel", literal(&e.pref_label));
        mention_objects(&e.uri, &e.mentions, &mut surfaces, &mut b)?;
        if blocks.insert(subject, b).is_some() {
            return Err(SemError::DuplicateSubject(e.uri.clone()));
        }
        entity_table.insert(&e.uri, e);
    }

    for ev in events {
        let subject = uri_term(&ev.uri)?;
        let mut b = Block::new();
        for s in &ev.synset_ids {
            add(&mut b, "a", format!("ili:{}", encode(s)));
        }
        for f in &ev.frame_labels {
            add(&mut b, "a", format!("fn:{}", encode(f)));
        }
        add(&mut b, "a", "sem:Event".into());
        for l in &ev.labels {
            add(&mut b, "rdfs:label", literal(l));
        }
        add(&mut b, "skos:prefLabel", literal(&ev.pref_label));
        mention_objects(&ev.uri, &ev.mentions, &mut surfaces, &mut b)?;
        let mut seen = BTreeSet::new();
        for a in &ev.actors {
            if !seen.insert(a.uri.as_str()) {
                return Err(SemError::InconsistentActor(a.uri.clone()));
            }
            let entity = entity_table
                .get(a.uri.as_str())
                .ok_or_else(|| SemError::UnknownActor(a.uri.clone()))?;
            if entity.labels != a.labels || entity.pref_label != a.pref_label {
                return Err(SemError::InconsistentActor(a.uri.clone()));
            }
            let term = uri_term(&a.uri)?;
            for r in &a.role_labels {
                add(&mut b, &format!("pb:{}", encode(r)), term.clone());
            }
            add(&mut b, "sem:hasActor", term);
        }
        for t in &ev.time_anchors {
            add(&mut b, "sem:hasTime", time_term(t));
        }
        if blocks.insert(subject, b).is_some() {
            return Err(SemError::DuplicateSubject(ev.uri.clone()));
        }
    }

    for (term, surface) in surfaces {
        let mut b = Block::new();
        add(&mut b, "rdfs:label", literal(&surface));
        if blocks.insert(term.clone(), b).is_some() {
            return Err(SemError::DuplicateSubject(term));
        }
    }

    let mut out = String::new();
    out.push_str(&format!("@prefix nwr: <{}> .\n", encode(&options.base)));
    for (p, iri) in PREFIXES {
        out.push_str(&format!("@prefix {p}: <{iri}> .\n"));
    }
    for (subject, block) in &blocks {
        out.push('\n');
        out.push_str(subject);
        let n = block.len();
        for (i, (pred, objects)) in block.iter().enumerate() {
            out.push_str("\n    ");
            out.push_str(pred);
            out.push(' ');
            out.push_str(&objects.iter().cloned().collect::<Vec<_>>().join(" , "));
            out.push_str(if i + 1 == n { " ." } else { " ;" });
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Iri(String),
    Str(String),
    Comma,
    Semi,
    Dot,
}

fn syntax(line: usize, message: impl Into<String>) -> SemError {
    SemError::Syntax {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, SemError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            line += 1;
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    None | Some('\n') => return Err(syntax(line, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('r') => s.push('\r'),
                        Some('t') => s.push('\t'),
                        other => return Err(syntax(line, format!("bad escape {other:?}"))),
                    },
                    Some(c) => s.push(c),
                }
            }
            out.push((line, Tok::Str(s)));
        } else if c == '<' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('>') => break,
                    Some(c) if !c.is_whitespace() => s.push(c),
                    _ => return Err(syntax(line, "unterminated IRI")),
                }
            }
            out.push((line, Tok::Iri(s)));
        } else {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                s.push(c);
                chars.next();
            }
            let tok = match s.as_str() {
                "," => Tok::Comma,
                ";" => Tok::Semi,
                "." => Tok::Dot,
                _ => Tok::Word(s),
            };
            out.push((line, tok));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    /// A uri in engine form: bare for `nwr:`, prefixed otherwise, absolute for IRIs.
    Uri(String),
    Mention(MentionRef),
    Literal(String),
    Event,
    Synset(String),
    Frame(String),
    Time(TimeAnchor),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    prefixes: BTreeSet<String>,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |(l, _)| *l)
    }

    fn next(&mut self) -> Result<Tok, SemError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(t.1)
    }

    fn word_term(&self, w: &str, line: usize) -> Result<Term, SemError> {
        let (p, local) = w
            .split_once(':')
            .ok_or_else(|| syntax(line, format!("expected a prefixed name, found {w:?}")))?;
        if !self.prefixes.contains(p) {
            return Err(SemError::UnknownPrefix {
                line,
                prefix: p.to_string(),
            });
        }
        Ok(match p {
            "nwr" => match local.rsplit_once("#char=") {
                Some((doc, span)) => {
                    let (s, e) = span
                        .split_once(',')
                        .and_then(|(s, e)| Some((s.parse().ok()?, e.parse().ok()?)))
                        .ok_or_else(|| syntax(line, format!("bad mention span in {w:?}")))?;
                    Term::Mention(MentionRef {
                        doc_id: decode(doc),
                        char_start: s,
                        char_end: e,
                        surface: String::new(),
                    })
                }
                None => Term::Uri(decode(local)),
            },
            "sem" if local == "Event" => Term::Event,
            "ili" => Term::Synset(decode(local)),
            "fn" => Term::Frame(decode(local)),
            "time" => Term::Time(
                normalize_time(local).map_err(|e| syntax(line, format!("bad time {w:?}: {e}")))?,
            ),
            _ => Term::Uri(format!("{p}:{}", decode(local))),
        })
    }

    fn term(&mut self) -> Result<Term, SemError> {
        let line = self.line();
        match self.next()? {
            Tok::Word(w) => self.word_term(&w, line),
            Tok::Iri(i) => Ok(Term::Uri(decode(&i))),
            Tok::Str(s) => Ok(Term::Literal(s)),
            t => Err(syntax(line, format!("expected a term, found {t:?}"))),
        }
    }
}

#[derive(Default)]
struct RawBlock {
    line: usize,
    statements: BTreeMap<String, Vec<Term>>,
}

fn is_predicate(p: &str) -> bool {
    matches!(
        p,
        "a" | "rdfs:label" | "skos:prefLabel" | "gaf:denotedBy" | "sem:hasActor" | "sem:hasTime"
    ) || p.starts_with("pb:")
}

fn parse_blocks(text: &str) -> Result<Vec<(Term, RawBlock)>, SemError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        prefixes: BTreeSet::new(),
    };
    let mut blocks = Vec::new();
    while p.pos < p.toks.len() {
        let line = p.line();
        if p.toks[p.pos].1 == Tok::Word("@prefix".into()) {
            p.pos += 1;
            let name = match p.next()? {
                Tok::Word(w) if w.ends_with(':') => w.trim_end_matches(':').to_string(),
                t => return Err(syntax(line, format!("bad prefix name {t:?}"))),
            };
            if !matches!(p.next()?, Tok::Iri(_)) || p.next()? != Tok::Dot {
                return Err(syntax(line, "malformed @prefix"));
            }
            p.prefixes.insert(name);
            continue;
        }
        let subject = p.term()?;
        let mut block = RawBlock {
            line,
            ..RawBlock::default()
        };
        loop {
            let pline = p.line();
            let pred = match p.next()? {
                Tok::Word(w) => w,
                t => return Err(syntax(pline, format!("expected a predicate, found {t:?}"))),
            };
            if !is_predicate(&pred) {
                return Err(SemError::UnknownPredicate {
                    line: pline,
                    predicate: pred,
                });
            }
            if let Some((pfx, _)) = pred.split_once(':') {
                if !p.prefixes.contains(pfx) {
                    return Err(SemError::UnknownPrefix {
                        line: pline,
                        prefix: pfx.to_string(),
                    });
                }
            }
            let objects = block.statements.entry(pred).or_default();
            loop {
                objects.push(p.term()?);
                match p.next()? {
                    Tok::Comma => continue,
                    Tok::Semi => break,
                    Tok::Dot => break,
                    t => return Err(syntax(p.line(), format!("expected , ; or . but found {t:?}"))),
                }
            }
            if p.toks[p.pos - 1].1 == Tok::Dot {
                break;
            }
        }
        blocks.push((subject, block));
    }
    Ok(blocks)
}

fn invalid(subject: &str, message: impl Into<String>) -> SemError {
    SemError::Invalid {
        subject: subject.to_string(),
        message: message.into(),
    }
}

fn literals(subject: &str, block: &RawBlock, pred: &str) -> Result<BTreeSet<String>, SemError> {
    block
        .statements
        .get(pred)
        .into_iter()
        .flatten()
        .map(|t| match t {
            Term::Literal(s) => Ok(s.clone()),
            _ => Err(invalid(subject, format!("{pred} needs string literals"))),
        })
        .collect()
}

fn single_literal(subject: &str, block: &RawBlock, pred: &str) -> Result<String, SemError> {
    let mut ls = literals(subject, block, pred)?;
    match (ls.pop_first(), ls.is_empty()) {
        (Some(l), true) => Ok(l),
        _ => Err(invalid(subject, format!("expected exactly one {pred}"))),
    }
}

fn uris(subject: &str, block: &RawBlock, pred: &str) -> Result<Vec<String>, SemError> {
    block
        .statements
        .get(pred)
        .into_iter()
        .flatten()
        .map(|t| match t {
            Term::Uri(u) => Ok(u.clone()),
            _ => Err(invalid(subject, format!("{pred} needs uris"))),
        })
        .collect()
}

fn denoted_by(
    subject: &str,
    block: &RawBlock,
    surfaces: &BTreeMap<(String, usize, usize), String>,
) -> Result<BTreeSet<MentionRef>, SemError> {
    block
        .statements
        .get("gaf:denotedBy")
        .into_iter()
        .flatten()
        .map(|t| match t {
            Term::Mention(m) => {
                let key = (m.doc_id.clone(), m.char_start, m.char_end);
                let surface = surfaces
                    .get(&key)
                    .ok_or_else(|| invalid(subject, "mention without a label block"))?;
                Ok(MentionRef {
                    surface: surface.clone(),
                    ..m.clone()
                })
            }
            _ => Err(invalid(subject, "gaf:denotedBy needs mention uris")),
        })
        .collect()
}

/// Reads output of [`export_turtle`]. Events and entities come back sorted by uri.
pub fn parse_turtle(text: &str) -> Result<(Vec<EventInstance>, Vec<EntityInstance>), SemError> {
    let blocks = parse_blocks(text)?;
    let mut surfaces: BTreeMap<(String, usize, usize), String> = BTreeMap::new();
    let mut resources: Vec<(String, RawBlock)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (subject, block) in blocks {
        match subject {
            Term::Mention(m) => {
                let key = (m.doc_id.clone(), m.char_start, m.char_end);
                let name = format!("{}#char={},{}", m.doc_id, m.char_start, m.char_end);
                if block.statements.keys().any(|k| k != "rdfs:label") {
                    return Err(invalid(&name, "mention blocks carry only rdfs:label"));
                }
                let label = single_literal(&name, &block, "rdfs:label")?;
                if surfaces.insert(key, label).is_some() {
                    return Err(SemError::DuplicateSubject(name));
                }
            }
            Term::Uri(u) => {
                if !seen.insert(u.clone()) {
                    return Err(SemError::DuplicateSubject(u));
                }
                resources.push((u, block));
            }
            other => {
                return Err(syntax(block.line, format!("unsupported subject {other:?}")));
            }
        }
    }

    let is_event = |b: &RawBlock| b.statements.get("a").is_some_and(|ts| ts.contains(&Term::Event));
    let mut entities = Vec::new();
    for (uri, block) in resources.iter().filter(|(_, b)| !is_event(b)) {
        if let Some(k) = block
            .statements
            .keys()
            .find(|k| !matches!(k.as_str(), "rdfs:label" | "skos:prefLabel" | "gaf:denotedBy"))
        {
            return Err(invalid(uri, format!("{k} is not allowed on an entity")));
        }
        entities.push(EntityInstance {
            uri: uri.clone(),
            labels: literals(uri, block, "rdfs:label")?,
            pref_label: single_literal(uri, block, "skos:prefLabel")?,
            mentions: denoted_by(uri, block, &surfaces)?,
        });
    }
    let entity_table: BTreeMap<&str, &EntityInstance> = entities.iter().map(|e| (e.uri.as_str(), e)).collect();

    let mut events = Vec::new();
    for (uri, block) in resources.iter().filter(|(_, b)| is_event(b)) {
        let mut synset_ids = BTreeSet::new();
        let mut frame_labels = BTreeSet::new();
        for t in &block.statements["a"] {
            match t {
                Term::Event => {}
                Term::Synset(s) => {
                    synset_ids.insert(s.clone());
                }
                Term::Frame(f) => {
                    frame_labels.insert(f.clone());
                }
                other => return Err(invalid(uri, format!("unsupported type {other:?}"))),
            }
        }
        let mut roles: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (pred, _) in block.statements.iter().filter(|(k, _)| k.starts_with("pb:")) {
            let role = decode(&pred["pb:".len()..]);
            for u in uris(uri, block, pred)? {
                roles.entry(u).or_default().insert(role.clone());
            }
        }
        let mut actors = BTreeSet::new();
        for a in uris(uri, block, "sem:hasActor")? {
            let e = entity_table
                .get(a.as_str())
                .ok_or_else(|| SemError::UnknownActor(a.clone()))?;
            actors.insert(ActorRef {
                role_labels: roles.remove(&a).unwrap_or_default(),
                ..e.actor_ref(BTreeSet::new())
            });
        }
        if let Some(stray) = roles.keys().next() {
            return Err(invalid(uri, format!("role filler {stray:?} is not an actor")));
        }
        let time_anchors = block
            .statements
            .get("sem:hasTime")
            .into_iter()
            .flatten()
            .map(|t| match t {
                Term::Time(a) => Ok(*a),
                _ => Err(invalid(uri, "sem:hasTime needs time: terms")),
            })
            .collect::<Result<_, _>>()?;
        events.push(EventInstance {
            uri: uri.clone(),
            labels: literals(uri, block, "rdfs:label")?,
            pref_label: single_literal(uri, block, "skos:prefLabel")?,
            mentions: denoted_by(uri, block, &surfaces)?,
            synset_ids,
            frame_labels,
            actors,
            time_anchors,
        });
    }
    events.sort_by(|a, b| a.uri.cmp(&b.uri));
    entities.sort_by(|a, b| a.uri.cmp(&b.uri));
    Ok((events, entities))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mref(doc: &str, s: usize, e: usize, surface: &str) -> MentionRef {
        MentionRef {
            doc_id: doc.into(),
            char_start: s,
            char_end: e,
            surface: surface.into(),
        }
    }

    fn minimal() -> EventInstance {
        EventInstance {
            uri: "45_5ecbplus#ev1".into(),
            labels: ["shooting".to_string()].into(),
            pref_label: "shooting".into(),
            mentions: [mref("45_5ecbplus", 167, 186, "shooting")].into(),
            synset_ids: BTreeSet::new(),
            frame_labels: BTreeSet::new(),
            actors: BTreeSet::new(),
            time_anchors: BTreeSet::new(),
        }
    }

    #[test]
    fn mention_uri_form() {
        assert_eq!(mention_uri(&mref("45_5ecbplus", 167, 186, "x")), "nwr:45_5ecbplus#char=167,186");
        let ttl = export_turtle(&[minimal()], &[], &ExportOptions::default()).unwrap();
        assert!(ttl.contains("\n    gaf:denotedBy nwr:45_5ecbplus#char=167,186 ;\n"));
    }

    #[test]
    fn synset_type_line() {
        let mut ev = minimal();
        ev.synset_ids.insert("i28310".into());
        let ttl = export_turtle(&[ev], &[], &ExportOptions::default()).unwrap();
        assert!(ttl.contains("    a ili:i28310 , sem:Event ;\n"), "{ttl}");
    }

    #[test]
    fn minimal_block() {
        let ttl = export_turtle(&[minimal()], &[], &ExportOptions::default()).unwrap();
        let block = "\nnwr:45_5ecbplus#ev1\n    a sem:Event ;\n    gaf:denotedBy nwr:45_5ecbplus#char=167,186 ;\n    rdfs:label \"shooting\" ;\n    skos:prefLabel \"shooting\" .\n";
        assert!(ttl.contains(block), "{ttl}");
        assert!(!ttl.contains("sem:hasActor"));
        assert!(!ttl.contains("sem:hasTime"));
    }

    #[test]
    fn round_trip_with_actor_and_time() {
        let simpson = EntityInstance {
            uri: "dbp:Christopher_Simpson".into(),
            labels: ["Christopher Simpson".to_string(), "Simpson".to_string()].into(),
            pref_label: "Christopher Simpson".into(),
            mentions: [mref("45_5ecbplus", 10, 29, "Christopher Simpson"), mref("45_6ecbplus", 0, 7, "Simpson")].into(),
        };
        let mut ev = minimal();
        ev.actors.insert(simpson.actor_ref(["A0".to_string()].into()));
        ev.time_anchors.insert(TimeAnchor::new(2012, Some(11), Some(12)).unwrap());
        ev.frame_labels.insert("Hit_target".into());
        let ttl = export_turtle(&[ev.clone()], std::slice::from_ref(&simpson), &ExportOptions::default()).unwrap();
        assert!(ttl.contains("sem:hasActor dbp:Christopher_Simpson"));
        assert!(ttl.contains("sem:hasTime time:20121112"));
        assert!(ttl.contains("pb:A0 dbp:Christopher_Simpson"));
        let (evs, ents) = parse_turtle(&ttl).unwrap();
        assert_eq!(evs, vec![ev]);
        assert_eq!(ents, vec![simpson]);
    }

    #[test]
    fn unknown_predicate_named() {
        let ttl = "@prefix nwr: <http://x/> .\n@prefix foo: <http://y/> .\nnwr:a foo:bar \"x\" .\n";
        let err = parse_turtle(ttl).unwrap_err();
        assert!(matches!(&err, SemError::UnknownPredicate { predicate, .. } if predicate == "foo:bar"));
        assert!(err.to_string().contains("foo:bar"));
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse_turtle("").unwrap(), (vec![], vec![]));
        let header = export_turtle(&[], &[], &ExportOptions::default()).unwrap();
        assert_eq!(parse_turtle(&header).unwrap(), (vec![], vec![]));
    }

    #[test]
    fn export_errors() {
        let mut ev = minimal();
        ev.mentions.clear();
        assert_eq!(
            export_turtle(&[ev], &[], &ExportOptions::default()),
            Err(SemError::EmptyMentions("45_5ecbplus#ev1".into()))
        );
        let mut ev = minimal();
        ev.actors.insert(ActorRef {
            uri: "dbp:X".into(),
            labels: ["X".to_string()].into(),
            pref_label: "X".into(),
            role_labels: BTreeSet::new(),
        });
        assert_eq!(
            export_turtle(&[ev], &[], &ExportOptions::default()),
            Err(SemError::UnknownActor("dbp:X".into()))
        );
    }

    #[test]
    fn awkward_names_survive() {
        let mut ev = minimal();
        ev.uri = "doc 1#ev\"2%".into();
        ev.labels = ["say \"hi\"\\\n".to_string()].into();
        ev.pref_label = "say \"hi\"\\\n".into();
        ev.mentions = [mref("doc 1", 0, 3, "é,;.")].into();
        ev.synset_ids.insert("i 1".into());
        let ttl = export_turtle(&[ev.clone()], &[], &ExportOptions::default()).unwrap();
        assert_eq!(parse_turtle(&ttl).unwrap().0, vec![ev]);
    }

    #[test]
    fn absolute_iris() {
        let e = EntityInstance {
            uri: "http://example.org/a b".into(),
            labels: ["a".to_string()].into(),
            pref_label: "a".into(),
            mentions: [mref("d", 0, 1, "a")].into(),
        };
        let ttl = export_turtle(&[], std::slice::from_ref(&e), &ExportOptions::default()).unwrap();
        assert!(ttl.contains("<http://example.org/a%20b>"));
        assert_eq!(parse_turtle(&ttl).unwrap().1, vec![e]);
    }
}
