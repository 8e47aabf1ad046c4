//! Coreference evaluation: MUC, B-cubed, CEAF (mention and entity based),
//! BLANC, the CoNLL average and mention detection.
//!
//! All metrics except mention detection expect both sides to cover the same
//! mention universe; [`align_mentions`] pads twinless mentions with singleton
//! chains and [`score_all`] applies it before scoring.

mod assignment;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assignment::max_weight_assignment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScorerError {
    #[error("empty chain")]
    EmptyChain,
    #[error("mention {0:?} appears in more than one chain")]
    Overlap(String),
    #[error("BLANC needs at least two mentions, got {0}")]
    TooFewMentions(usize),
}

/// A partition of mentions into coreference chains.
///
/// Chains are kept in canonical order: members sorted, chains ordered by
/// their smallest member.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSet {
    chains: Vec<BTreeSet<String>>,
}

impl ChainSet {
    pub fn new<I, C, S>(chains: I) -> Result<Self, ScorerError>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for chain in chains {
            let set: BTreeSet<String> = chain.into_iter().map(Into::into).collect();
            if set.is_empty() {
                return Err(ScorerError::EmptyChain);
            }
            for m in &set {
                if !seen.insert(m.clone()) {
                    return Err(ScorerError::Overlap(m.clone()));
                }
            }
            out.push(set);
        }
        out.sort();
        Ok(ChainSet { chains: out })
    }

    /// Every mention in its own chain.
    pub fn singletons<I, S>(mentions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = mentions.into_iter().map(Into::into).collect();
        ChainSet {
            chains: set.into_iter().map(|m| BTreeSet::from([m])).collect(),
        }
    }

    pub fn chains(&self) -> &[BTreeSet<String>] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn mentions(&self) -> BTreeSet<&str> {
        self.chains.iter().flatten().map(String::as_str).collect()
    }

    pub fn mention_count(&self) -> usize {
        self.chains.iter().map(BTreeSet::len).sum()
    }

    fn chain_index(&self) -> HashMap<&str, usize> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |m| (m.as_str(), i)))
            .collect()
    }

    /// Chain file layout: `{chain_id: [mention_id]}`.
    pub fn from_map(map: BTreeMap<String, Vec<String>>) -> Result<Self, ScorerError> {
        Self::new(map.into_values())
    }

    /// Chain ids are `c1`, `c2`, ... in canonical chain order, zero padded so
    /// that lexical and numeric order agree.
    pub fn to_map(&self) -> BTreeMap<String, Vec<String>> {
        let width = self.chains.len().to_string().len();
        self.chains
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("c{:0width$}", i + 1), c.iter().cloned().collect()))
            .collect()
    }

    /// Keeps only the listed mentions, dropping chains that become empty.
    pub fn restrict_to(&self, keep: &BTreeSet<&str>) -> ChainSet {
        let chains = self
            .chains
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|m| keep.contains(m.as_str()))
                    .cloned()
                    .collect::<BTreeSet<_>>()
            })
            .filter(|c| !c.is_empty());
        ChainSet::new(chains).expect("subset of a partition is a partition")
    }
}

/// Recall, precision and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prf {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl Prf {
    pub fn new(recall: f64, precision: f64) -> Self {
        let f1 = if recall + precision > 0.0 {
            2.0 * recall * precision / (recall + precision)
        } else {
            0.0
        };
        Prf {
            recall,
            precision,
            f1,
        }
    }

    fn from_ratio(r_num: f64, r_den: f64, p_num: f64, p_den: f64) -> Self {
        Prf::new(ratio(r_num, r_den), ratio(p_num, p_den))
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Pads each side with singleton chains for mentions only the other side has.
pub fn align_mentions(gold: &ChainSet, response: &ChainSet) -> (ChainSet, ChainSet) {
    let g = gold.mentions();
    let r = response.mentions();
    let pad = |base: &ChainSet, missing: Vec<&str>| {
        let mut chains = base.chains.clone();
        chains.extend(missing.into_iter().map(|m| BTreeSet::from([m.to_string()])));
        chains.sort();
        ChainSet { chains }
    };
    let gold_missing: Vec<&str> = r.difference(&g).copied().collect();
    let resp_missing: Vec<&str> = g.difference(&r).copied().collect();
    (pad(gold, gold_missing), pad(response, resp_missing))
}

/// Link-based MUC.
pub fn muc(gold: &ChainSet, response: &ChainSet) -> Prf {
    fn side(keys: &ChainSet, other: &ChainSet) -> (f64, f64) {
        let index = other.chain_index();
        let mut num = 0usize;
        let mut den = 0usize;
        for chain in keys.chains() {
            let mut parts = BTreeSet::new();
            let mut unmatched = 0usize;
            for m in chain {
                match index.get(m.as_str()) {
                    Some(&i) => {
                        parts.insert(i);
                    }
                    None => unmatched += 1,
                }
            }
            num += chain.len() - (parts.len() + unmatched);
            den += chain.len() - 1;
        }
        (num as f64, den as f64)
    }
    let (rn, rd) = side(gold, response);
    let (pn, pd) = side(response, gold);
    Prf::from_ratio(rn, rd, pn, pd)
}

/// Mention-averaged B-cubed.
pub fn b3(gold: &ChainSet, response: &ChainSet) -> Prf {
    fn side(keys: &ChainSet, other: &ChainSet) -> (f64, f64) {
        let index = other.chain_index();
        let mut sum = 0.0;
        let mut count = 0usize;
        for chain in keys.chains() {
            let mut overlap: HashMap<usize, usize> = HashMap::new();
            for m in chain {
                if let Some(&i) = index.get(m.as_str()) {
                    *overlap.entry(i).or_default() += 1;
                }
            }
            let size = chain.len() as f64;
            // Each mention of `chain` in response chain i contributes |k∩r| / |k|.
            sum += overlap
                .values()
                .map(|&n| (n * n) as f64 / size)
                .sum::<f64>();
            count += chain.len();
        }
        (sum, count as f64)
    }
    let (rn, rd) = side(gold, response);
    let (pn, pd) = side(response, gold);
    Prf::from_ratio(rn, rd, pn, pd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CeafPhi {
    /// `|g ∩ r|`
    Phi3Mention,
    /// `2|g ∩ r| / (|g| + |r|)`
    Phi4Entity,
}

impl CeafPhi {
    pub fn similarity(self, g: &BTreeSet<String>, r: &BTreeSet<String>) -> f64 {
        let common = g.intersection(r).count() as f64;
        match self {
            CeafPhi::Phi3Mention => common,
            CeafPhi::Phi4Entity => 2.0 * common / (g.len() + r.len()) as f64,
        }
    }
}

/// CEAF under the optimal one-to-one chain alignment.
pub fn ceaf(gold: &ChainSet, response: &ChainSet, phi: CeafPhi) -> Prf {
    let weights: Vec<Vec<f64>> = gold
        .chains()
        .iter()
        .map(|g| {
            response
                .chains()
                .iter()
                .map(|r| phi.similarity(g, r))
                .collect()
        })
        .collect();
    let (_, best) = max_weight_assignment(&weights);
    let self_sim = |cs: &ChainSet| cs.chains().iter().map(|c| phi.similarity(c, c)).sum::<f64>();
    Prf::from_ratio(best, self_sim(gold), best, self_sim(response))
}

/// BLANC: the mean of link-class scores over coreference and non-coreference
/// links. A link class with no instances on both sides scores zero, so
/// mutually all-singleton inputs yield 0.5 across the board.
pub fn blanc(gold: &ChainSet, response: &ChainSet) -> Result<Prf, ScorerError> {
    let mentions: BTreeSet<&str> = gold.mentions().union(&response.mentions()).copied().collect();
    let n = mentions.len();
    if n < 2 {
        return Err(ScorerError::TooFewMentions(n));
    }
    let pairs = |k: usize| (k * k.saturating_sub(1) / 2) as f64;
    let total = pairs(n);
    let coref_gold: f64 = gold.chains().iter().map(|c| pairs(c.len())).sum();
    let coref_resp: f64 = response.chains().iter().map(|c| pairs(c.len())).sum();
    let r_index = response.chain_index();
    let mut coref_both = 0.0;
    for g in gold.chains() {
        let mut overlap: HashMap<usize, usize> = HashMap::new();
        for m in g {
            if let Some(&i) = r_index.get(m.as_str()) {
                *overlap.entry(i).or_default() += 1;
            }
        }
        coref_both += overlap.values().map(|&k| pairs(k)).sum::<f64>();
    }
    let non_gold = total - coref_gold;
    let non_resp = total - coref_resp;
    let non_both = total - coref_gold - coref_resp + coref_both;

    let c = Prf::from_ratio(coref_both, coref_gold, coref_both, coref_resp);
    let nc = Prf::from_ratio(non_both, non_gold, non_both, non_resp);
    Ok(Prf {
        recall: (c.recall + nc.recall) / 2.0,
        precision: (c.precision + nc.precision) / 2.0,
        f1: (c.f1 + nc.f1) / 2.0,
    })
}

/// Mention detection over the raw (unaligned) mention sets.
pub fn mention_detection(gold: &ChainSet, response: &ChainSet) -> Prf {
    let g = gold.mentions();
    let r = response.mentions();
    let common = g.intersection(&r).count() as f64;
    Prf::from_ratio(common, g.len() as f64, common, r.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreReport {
    pub muc: Prf,
    pub b3: Prf,
    pub ceaf_m: Prf,
    pub ceaf_e: Prf,
    pub blanc: Prf,
    pub conll_f1: f64,
    pub mention: Prf,
}

impl ScoreReport {
    fn conll(muc: &Prf, b3: &Prf, ceaf_e: &Prf) -> f64 {
        (muc.f1 + b3.f1 + ceaf_e.f1) / 3.0
    }
}

/// Aligns both sides, then computes every metric. BLANC falls back to zeros
/// when fewer than two mentions exist.
pub fn score_all(gold: &ChainSet, response: &ChainSet) -> ScoreReport {
    let (g, r) = align_mentions(gold, response);
    let muc = muc(&g, &r);
    let b3 = b3(&g, &r);
    let ceaf_e = ceaf(&g, &r, CeafPhi::Phi4Entity);
    ScoreReport {
        muc,
        b3,
        ceaf_m: ceaf(&g, &r, CeafPhi::Phi3Mention),
        ceaf_e,
        blanc: blanc(&g, &r).unwrap_or_default(),
        conll_f1: ScoreReport::conll(&muc, &b3, &ceaf_e),
        mention: mention_detection(gold, response),
    }
}

/// Macro average over per-topic reports: recall and precision are averaged,
/// F1 is recomputed from them and CoNLL from the averaged F1 values.
pub fn macro_average(reports: &[ScoreReport]) -> ScoreReport {
    if reports.is_empty() {
        return ScoreReport::default();
    }
    let n = reports.len() as f64;
    let avg = |f: fn(&ScoreReport) -> Prf| {
        let (r, p) = reports.iter().map(f).fold((0.0, 0.0), |(r, p), x| {
            (r + x.recall, p + x.precision)
        });
        Prf::new(r / n, p / n)
    };
    let muc = avg(|s| s.muc);
    let b3 = avg(|s| s.b3);
    let ceaf_e = avg(|s| s.ceaf_e);
    ScoreReport {
        muc,
        b3,
        ceaf_m: avg(|s| s.ceaf_m),
        ceaf_e,
        blanc: avg(|s| s.blanc),
        conll_f1: ScoreReport::conll(&muc, &b3, &ceaf_e),
        mention: avg(|s| s.mention),
    }
}

/// Aligned text table with percentages, one row per named report.
pub fn format_table(rows: &[(String, ScoreReport)]) -> String {
    let name_width = rows
        .iter()
        .map(|(n, _)| n.chars().count())
        .chain(std::iter::once(6))
        .max()
        .unwrap_or(6);
    let mut out = String::new();
    let metrics = ["MUC", "BCUB", "CEAFm", "CEAFe", "BLANC"];
    let _ = write!(out, "{:<name_width$}", "System");
    for m in metrics {
        let _ = write!(out, " | {:^20}", m);
    }
    let _ = writeln!(out, " | {:>7} | {:>7}", "CoNLL", "Mention");
    let _ = write!(out, "{:<name_width$}", "");
    for _ in metrics {
        let _ = write!(out, " | {:>6} {:>6} {:>6}", "R", "P", "F1");
    }
    let _ = writeln!(out, " | {:>7} | {:>7}", "F1", "F1");
    for (name, s) in rows {
        let _ = write!(out, "{:<name_width$}", name);
        for prf in [s.muc, s.b3, s.ceaf_m, s.ceaf_e, s.blanc] {
            let _ = write!(
                out,
                " | {:>6.2} {:>6.2} {:>6.2}",
                prf.recall * 100.0,
                prf.precision * 100.0,
                prf.f1 * 100.0
            );
        }
        let _ = writeln!(
            out,
            " | {:>7.2} | {:>7.2}",
            s.conll_f1 * 100.0,
            s.mention.f1 * 100.0
        );
    }
    out
}
