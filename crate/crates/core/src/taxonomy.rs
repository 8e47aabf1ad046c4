//! Hypernym taxonomy with Leacock-Chodorow similarity.
//!
//! Rows are tab-separated: `synset_id  pos  lemma1,lemma2  hypernym1,hypernym2`.
//! An empty hypernym field marks a root.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: String,
    pub pos: char,
    pub lemmas: BTreeSet<String>,
    pub hypernyms: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed row at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("duplicate synset {0:?}")]
    Duplicate(String),
    #[error("synset {synset:?} names undefined hypernym {hypernym:?}")]
    DanglingHypernym { synset: String, hypernym: String },
    #[error("hypernym cycle through {0:?}")]
    Cycle(String),
    #[error("part of speech mismatch between {0:?} and {1:?}")]
    PosMismatch(String, String),
    #[error("unknown synset {0:?}")]
    UnknownSynset(String),
    #[error("no common subsumer for {0:?} and {1:?}: similarity undefined")]
    NoCommonSubsumer(String, String),
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    synsets: BTreeMap<String, Synset>,
    max_depth: BTreeMap<char, usize>,
    lemma_index: HashMap<(String, char), Vec<String>>,
}

pub fn load_taxonomy(path: impl AsRef<Path>) -> Result<Taxonomy, TaxonomyError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TaxonomyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Taxonomy::from_tsv(&text)
}

fn split_list(field: &str) -> impl Iterator<Item = &str> {
    field.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl Taxonomy {
    pub fn from_tsv(text: &str) -> Result<Self, TaxonomyError> {
        let mut synsets = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(TaxonomyError::Malformed {
                    line,
                    message: format!("expected 4 tab-separated fields, found {}", fields.len()),
                });
            }
            let id = fields[0].trim();
            if id.is_empty() {
                return Err(TaxonomyError::Malformed {
                    line,
                    message: "empty synset id".into(),
                });
            }
            let mut pos_chars = fields[1].trim().chars();
            let (Some(pos), None) = (pos_chars.next(), pos_chars.next()) else {
                return Err(TaxonomyError::Malformed {
                    line,
                    message: format!("pos must be one character, got {:?}", fields[1]),
                });
            };
            let lemmas: BTreeSet<String> = split_list(fields[2]).map(str::to_lowercase).collect();
            let hypernyms: BTreeSet<String> = fields
                .get(3)
                .map(|f| split_list(f).map(String::from).collect())
                .unwrap_or_default();
            let synset = Synset {
                id: id.to_string(),
                pos,
                lemmas,
                hypernyms,
            };
            if synsets.insert(id.to_string(), synset).is_some() {
                return Err(TaxonomyError::Duplicate(id.to_string()));
            }
        }
        Self::from_synsets(synsets)
    }

    pub fn from_synsets(synsets: BTreeMap<String, Synset>) -> Result<Self, TaxonomyError> {
        for s in synsets.values() {
            for h in &s.hypernyms {
                let Some(parent) = synsets.get(h) else {
                    return Err(TaxonomyError::DanglingHypernym {
                        synset: s.id.clone(),
                        hypernym: h.clone(),
                    });
                };
                if parent.pos != s.pos {
                    return Err(TaxonomyError::PosMismatch(s.id.clone(), h.clone()));
                }
            }
        }
        let depths = node_depths(&synsets)?;
        let mut max_depth = BTreeMap::new();
        for (id, depth) in &depths {
            let e = max_depth.entry(synsets[*id].pos).or_insert(0);
            *e = (*e).max(*depth);
        }
        let mut lemma_index: HashMap<(String, char), Vec<String>> = HashMap::new();
        for s in synsets.values() {
            for l in &s.lemmas {
                lemma_index
                    .entry((l.clone(), s.pos))
                    .or_default()
                    .push(s.id.clone());
            }
        }
        // BTreeMap iteration already yields ids in order.
        Ok(Taxonomy {
            synsets,
            max_depth,
            lemma_index,
        })
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: &str) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Maximum node depth (root = 1) among synsets of `pos`.
    pub fn max_depth(&self, pos: char) -> Option<usize> {
        self.max_depth.get(&pos).copied()
    }

    /// Synsets listing `lemma` (case-folded), ordered by id.
    pub fn synsets_of(&self, lemma: &str, pos: char) -> Vec<&str> {
        self.lemma_index
            .get(&(lemma.to_lowercase(), pos))
            .map(|ids| ids.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    /// Minimum upward distance from `id` to each of its subsumers, itself included.
    fn subsumer_distances(&self, id: &str) -> HashMap<&str, usize> {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        if let Some((key, _)) = self.synsets.get_key_value(id) {
            dist.insert(key.as_str(), 0);
            queue.push_back(key.as_str());
        }
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur];
            for h in &self.synsets[cur].hypernyms {
                if !dist.contains_key(h.as_str()) {
                    dist.insert(h.as_str(), d + 1);
                    queue.push_back(h.as_str());
                }
            }
        }
        dist
    }

    /// Shortest path in edges between two synsets through a common subsumer.
    pub fn shortest_path(&self, a: &str, b: &str) -> Result<usize, TaxonomyError> {
        let sa = self.synset(a).ok_or_else(|| TaxonomyError::UnknownSynset(a.into()))?;
        let sb = self.synset(b).ok_or_else(|| TaxonomyError::UnknownSynset(b.into()))?;
        if sa.pos != sb.pos {
            return Err(TaxonomyError::PosMismatch(a.into(), b.into()));
        }
        let da = self.subsumer_distances(a);
        let db = self.subsumer_distances(b);
        da.iter()
            .filter_map(|(k, x)| db.get(k).map(|y| x + y))
            .min()
            .ok_or_else(|| TaxonomyError::NoCommonSubsumer(a.into(), b.into()))
    }

    /// `-ln((sp + 1) / (2 D))` with `D` the maximum depth of the shared pos.
    pub fn lch_similarity(&self, a: &str, b: &str) -> Result<f64, TaxonomyError> {
        let sp = self.shortest_path(a, b)?;
        let depth = self.max_depth[&self.synsets[a].pos];
        Ok(-((sp as f64 + 1.0) / (2.0 * depth as f64)).ln())
    }

    /// Best similarity over the cross product of two synset lists; `None`
    /// when no pair has a defined similarity.
    pub fn max_similarity<A, B>(&self, a: &[A], b: &[B]) -> Option<f64>
    where
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut best: Option<f64> = None;
        for x in a {
            for y in b {
                if let Ok(s) = self.lch_similarity(x.as_ref(), y.as_ref()) {
                    best = Some(best.map_or(s, |b| b.max(s)));
                }
            }
        }
        best
    }
}

/// Longest-path depth of every synset (roots at 1); fails on cycles.
fn node_depths(synsets: &BTreeMap<String, Synset>) -> Result<HashMap<&str, usize>, TaxonomyError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();
    let mut depth: HashMap<&str, usize> = HashMap::new();
    for start in synsets.keys() {
        if marks.contains_key(start.as_str()) {
            continue;
        }
        // (node, next child index)
        let mut stack: Vec<(&str, usize)> = vec![(start.as_str(), 0)];
        marks.insert(start.as_str(), Mark::Open);
        while let Some(top) = stack.last_mut() {
            let node = top.0;
            let hypernyms = &synsets[node].hypernyms;
            if let Some(parent) = hypernyms.iter().nth(top.1) {
                top.1 += 1;
                match marks.get(parent.as_str()) {
                    Some(Mark::Open) => return Err(TaxonomyError::Cycle(parent.to_string())),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(parent.as_str(), Mark::Open);
                        stack.push((parent.as_str(), 0));
                    }
                }
            } else {
                let d = hypernyms
                    .iter()
                    .map(|p| depth[p.as_str()])
                    .max()
                    .map_or(1, |m| m + 1);
                depth.insert(node, d);
                marks.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    Ok(depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "r\tn\troot\t\na\tn\talpha,shared\tr\nb\tn\tbeta,shared\tr\n";

    #[test]
    fn depth_of_three_rows() {
        let t = Taxonomy::from_tsv(SMALL).unwrap();
        assert_eq!(t.max_depth('n'), Some(2));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn cycle_rejected() {
        let err = Taxonomy::from_tsv("a\tn\tx\tb\nb\tn\ty\ta\n").unwrap_err();
        assert!(matches!(err, TaxonomyError::Cycle(_)));
    }

    #[test]
    fn dangling_hypernym_rejected() {
        let err = Taxonomy::from_tsv("a\tn\tx\tx\n").unwrap_err();
        assert!(matches!(err, TaxonomyError::DanglingHypernym { .. }));
    }

    #[test]
    fn malformed_rows_rejected() {
        assert!(matches!(
            Taxonomy::from_tsv("a\tn\n").unwrap_err(),
            TaxonomyError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            Taxonomy::from_tsv("a\tnv\tx\t\n").unwrap_err(),
            TaxonomyError::Malformed { .. }
        ));
    }

    #[test]
    fn lemma_lookup() {
        let t = Taxonomy::from_tsv(
            "i28300\tv\tact\t\ni28310\tv\tmurder,kill,assassinate\ti28300\n",
        )
        .unwrap();
        assert_eq!(t.synsets_of("murder", 'v'), ["i28310"]);
        assert_eq!(t.synsets_of("Murder", 'v'), ["i28310"]);
        assert!(t.synsets_of("zzzz", 'v').is_empty());
        assert!(t.synsets_of("murder", 'n').is_empty());
        let t = Taxonomy::from_tsv(SMALL).unwrap();
        assert_eq!(t.synsets_of("shared", 'n'), ["a", "b"]);
    }

    #[test]
    fn lch_worked_values() {
        let t = Taxonomy::from_tsv(SMALL).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
        assert!(close(t.lch_similarity("a", "a").unwrap(), -(0.25f64).ln()));
        assert!(close(t.lch_similarity("a", "b").unwrap(), -(0.75f64).ln()));
        assert!(close(t.lch_similarity("a", "r").unwrap(), -(0.5f64).ln()));
        assert!((t.lch_similarity("a", "a").unwrap() - 1.3863).abs() < 1e-4);
        assert!((t.lch_similarity("a", "b").unwrap() - 0.2877).abs() < 1e-4);
        assert!(close(t.lch_similarity("a", "r").unwrap(), std::f64::consts::LN_2));
    }

    #[test]
    fn lch_errors() {
        let t = Taxonomy::from_tsv("r\tn\tx\t\ns\tn\ty\t\nv\tv\tz\t\n").unwrap();
        assert!(matches!(
            t.lch_similarity("r", "s").unwrap_err(),
            TaxonomyError::NoCommonSubsumer(..)
        ));
        assert!(matches!(
            t.lch_similarity("r", "v").unwrap_err(),
            TaxonomyError::PosMismatch(..)
        ));
        assert!(matches!(
            t.lch_similarity("r", "nope").unwrap_err(),
            TaxonomyError::UnknownSynset(_)
        ));
    }

    #[test]
    fn depth_uses_longest_path() {
        // c has two parents at different depths: r (1) and a (2).
        let t = Taxonomy::from_tsv("r\tn\tx\t\na\tn\ty\tr\nc\tn\tz\tr,a\n").unwrap();
        assert_eq!(t.max_depth('n'), Some(3));
        assert_eq!(t.shortest_path("c", "r").unwrap(), 1);
    }

    #[test]
    fn max_similarity_skips_undefined_pairs() {
        let t = Taxonomy::from_tsv(SMALL).unwrap();
        let s = t.max_similarity(&["a", "missing"], &["b", "a"]).unwrap();
        assert!((s - 4f64.ln()).abs() < 1e-12);
        assert_eq!(t.max_similarity(&["missing"], &["a"]), None);
        assert_eq!(t.max_similarity::<&str, &str>(&[], &["a"]), None);
    }
}
