//! Experiment orchestration for the `evcoref` binary.
//!
//! [`run_experiment`] loads a corpus, runs one pipeline over the test topics
//! and writes `chains.json`, `scores.json`, `report.txt` and, for
//! door-to-door runs, `instances.ttl` into the output directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use evcoref::crossdoc::DoorToDoorRun;
use evcoref::pairlearn::GridSearchSpec;
use evcoref::scorer::{format_table, macro_average};
use evcoref::semgraph::ExportOptions;
use evcoref::{
    export_turtle, load_corpus, load_taxonomy, run_door_to_door, run_one_step, run_two_step,
    score_all, BagOfEventsSpec, ChainSet, Corpus, FeatureSet, InstanceConfig, MatchConfig,
    ScoreReport, SlotMode, Taxonomy,
};
use serde::{Deserialize, Serialize};

pub const CHAINS_FILE: &str = "chains.json";
pub const SCORES_FILE: &str = "scores.json";
pub const REPORT_FILE: &str = "report.txt";
pub const TURTLE_FILE: &str = "instances.ttl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    BaselineSingleton,
    BaselineLemma,
    OneStep,
    TwoStep,
    DoorToDoor,
}

impl Mode {
    pub fn is_learned(self) -> bool {
        matches!(self, Mode::OneStep | Mode::TwoStep)
    }

    pub fn default_train_topics(self) -> Vec<String> {
        if self.is_learned() {
            topic_range(1, 35)
        } else {
            Vec::new()
        }
    }

    pub fn default_test_topics(self) -> Vec<String> {
        match self {
            Mode::DoorToDoor => topic_range(24, 43),
            _ => topic_range(36, 45),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::BaselineSingleton => "baseline_singleton",
            Mode::BaselineLemma => "baseline_lemma",
            Mode::OneStep => "one_step",
            Mode::TwoStep => "two_step",
            Mode::DoorToDoor => "door_to_door",
        })
    }
}

fn topic_range(lo: usize, hi: usize) -> Vec<String> {
    (lo..=hi).map(|t| t.to_string()).collect()
}

/// Parses topic lists such as `1-35,40`. Ranges are inclusive; the result
/// is deduplicated and ordered numerically where possible.
pub fn parse_topics(s: &str) -> Result<Vec<String>> {
    let mut out: BTreeSet<(u64, String)> = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let lo: u64 = a.trim().parse().with_context(|| format!("bad topic range {part:?}"))?;
                let hi: u64 = b.trim().parse().with_context(|| format!("bad topic range {part:?}"))?;
                ensure!(lo <= hi, "empty topic range {part:?}");
                out.extend((lo..=hi).map(|t| (t, t.to_string())));
            }
            None => {
                let key = part.parse().unwrap_or(u64::MAX);
                out.insert((key, part.to_string()));
            }
        }
    }
    ensure!(!out.is_empty(), "no topics in {s:?}");
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub corpus: PathBuf,
    pub taxonomy: Option<PathBuf>,
    pub mode: Mode,
    pub slot_mode: SlotMode,
    pub feature_set: FeatureSet,
    pub match_config: MatchConfig,
    pub instance_config: InstanceConfig,
    pub train_topics: Vec<String>,
    pub test_topics: Vec<String>,
    pub seed: u64,
    pub out: PathBuf,
}

impl ExperimentSpec {
    /// Defaults for `mode`: five slots, LDES, `YAc30p30` and the standard
    /// topic split of the mode.
    pub fn new(mode: Mode, corpus: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        ExperimentSpec {
            corpus: corpus.into(),
            taxonomy: None,
            mode,
            slot_mode: SlotMode::FiveSlot,
            feature_set: FeatureSet::Ldes,
            match_config: evcoref::parse_config_code("YAc30p30").expect("valid code"),
            instance_config: InstanceConfig::default(),
            train_topics: mode.default_train_topics(),
            test_topics: mode.default_test_topics(),
            seed: 0,
            out: out.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.test_topics.is_empty(), "no test topics");
        if self.mode.is_learned() {
            ensure!(!self.train_topics.is_empty(), "{} needs training topics", self.mode);
            let train: BTreeSet<&String> = self.train_topics.iter().collect();
            if let Some(t) = self.test_topics.iter().find(|t| train.contains(t)) {
                bail!("topic {t} is in both the training and the test set");
            }
        }
        Ok(())
    }

    /// Run name used in reports.
    pub fn label(&self) -> String {
        let bag = self.bag_spec();
        match self.mode {
            Mode::BaselineSingleton => "singleton".into(),
            Mode::BaselineLemma => "lemma".into(),
            Mode::OneStep => bag.label_one_step(),
            Mode::TwoStep => bag.label_two_step(),
            Mode::DoorToDoor => self.match_config.code(),
        }
    }

    fn bag_spec(&self) -> BagOfEventsSpec {
        BagOfEventsSpec {
            train_topics: self.train_topics.clone(),
            test_topics: self.test_topics.clone(),
            slot_mode: self.slot_mode,
            feature_set: self.feature_set,
            grid: GridSearchSpec {
                seed: self.seed,
                ..GridSearchSpec::default()
            },
        }
    }
}

/// Contents of `scores.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreFile {
    pub label: String,
    pub mode: Mode,
    pub test_topics: Vec<String>,
    pub scores: ScoreReport,
}

pub fn load_inputs(corpus: &Path, taxonomy: Option<&Path>) -> Result<(Corpus, Option<Taxonomy>)> {
    let c = load_corpus(corpus).with_context(|| format!("loading corpus {}", corpus.display()))?;
    let t = taxonomy
        .map(|p| load_taxonomy(p).with_context(|| format!("loading taxonomy {}", p.display())))
        .transpose()?;
    Ok((c, t))
}

/// Action mentions of the given topics, in corpus order.
pub fn test_mentions<'a>(corpus: &'a Corpus, topics: &[String]) -> Vec<&'a str> {
    corpus
        .documents()
        .iter()
        .filter(|d| topics.contains(&d.topic_id))
        .flat_map(|d| d.action_mentions().map(|m| m.mention_id.as_str()))
        .collect()
}

/// Gold chains restricted to the action mentions of `topics`.
pub fn gold_chains(corpus: &Corpus, topics: &[String]) -> ChainSet {
    let keep: BTreeSet<&str> = test_mentions(corpus, topics).into_iter().collect();
    let mut chains: Vec<Vec<&str>> = corpus
        .gold()
        .chains
        .values()
        .map(|c| c.iter().map(String::as_str).filter(|m| keep.contains(m)).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    let covered: BTreeSet<&str> = chains.iter().flatten().copied().collect();
    chains.extend(keep.difference(&covered).map(|m| vec![*m]));
    ChainSet::new(chains).expect("gold chains are disjoint")
}

/// Singleton chains, or chains of mentions with identical case-folded lemma
/// sets across all documents of the test topics.
pub fn run_baseline(corpus: &Corpus, mode: Mode, topics: &[String]) -> Result<ChainSet> {
    let ids = test_mentions(corpus, topics);
    match mode {
        Mode::BaselineSingleton => Ok(ChainSet::singletons(ids)),
        Mode::BaselineLemma => {
            let mut groups: BTreeMap<BTreeSet<String>, Vec<&str>> = BTreeMap::new();
            let mut loners = Vec::new();
            for id in ids {
                let lemmas = corpus.mention(id).expect("indexed mention").folded_lemmas();
                if lemmas.is_empty() {
                    loners.push(vec![id]);
                } else {
                    groups.entry(lemmas).or_default().push(id);
                }
            }
            Ok(ChainSet::new(groups.into_values().chain(loners)).expect("groups are disjoint"))
        }
        other => bail!("{other} is not a baseline mode"),
    }
}

fn score_per_topic(corpus: &Corpus, run: &DoorToDoorRun, topics: &[String]) -> ScoreReport {
    let reports: Vec<ScoreReport> = topics
        .iter()
        .map(|t| {
            let one = std::slice::from_ref(t);
            score_all(&gold_chains(corpus, one), &run.chains(corpus, Some(t)))
        })
        .collect();
    macro_average(&reports)
}

struct Outcome {
    chains: ChainSet,
    scores: ScoreReport,
    turtle: Option<String>,
}

fn execute(spec: &ExperimentSpec, corpus: &Corpus, taxonomy: Option<&Taxonomy>) -> Result<Outcome> {
    let known: BTreeSet<String> = corpus.topic_ids().into_iter().collect();
    for t in spec.test_topics.iter().chain(&spec.train_topics) {
        ensure!(known.contains(t), "topic {t} is not in the corpus");
    }
    let gold = gold_chains(corpus, &spec.test_topics);
    match spec.mode {
        Mode::BaselineSingleton | Mode::BaselineLemma => {
            let chains = run_baseline(corpus, spec.mode, &spec.test_topics)?;
            let scores = score_all(&gold, &chains);
            Ok(Outcome { chains, scores, turtle: None })
        }
        Mode::OneStep | Mode::TwoStep => {
            let bag = spec.bag_spec();
            let run = if spec.mode == Mode::OneStep {
                run_one_step(corpus, taxonomy, &bag)
            } else {
                run_two_step(corpus, taxonomy, &bag)
            }
            .with_context(|| format!("{} pipeline", spec.mode))?;
            let scores = score_all(&gold, &run.chains);
            Ok(Outcome { chains: run.chains, scores, turtle: None })
        }
        Mode::DoorToDoor => {
            let run = run_door_to_door(corpus, taxonomy, &spec.test_topics, &spec.instance_config, &spec.match_config);
            let events: Vec<_> = run.events().cloned().collect();
            let turtle = export_turtle(&events, &run.entities, &ExportOptions::default())
                .context("exporting instances")?;
            Ok(Outcome {
                chains: run.chains(corpus, None),
                scores: score_per_topic(corpus, &run, &spec.test_topics),
                turtle: Some(turtle),
            })
        }
    }
}

/// Chain file body: `{chain_id: [mention_id]}`.
pub fn chains_json(chains: &ChainSet) -> String {
    let mut s = serde_json::to_string_pretty(&chains.to_map()).expect("serializable");
    s.push('\n');
    s
}

pub fn read_chains(path: &Path) -> Result<ChainSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let chains: BTreeMap<String, Vec<String>> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    ChainSet::from_map(chains).with_context(|| format!("invalid chains in {}", path.display()))
}

pub fn read_scores(path: &Path) -> Result<ScoreFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes every file or none of them.
pub fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, body) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(e).with_context(|| format!("writing {}", path.display()));
        }
        written.push(path);
    }
    Ok(())
}

/// Runs one experiment end to end and writes its artifacts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ScoreFile> {
    spec.validate()?;
    let (corpus, taxonomy) = load_inputs(&spec.corpus, spec.taxonomy.as_deref())?;
    run_experiment_on(spec, &corpus, taxonomy.as_ref())
}

/// Same as [`run_experiment`] with inputs already loaded.
pub fn run_experiment_on(spec: &ExperimentSpec, corpus: &Corpus, taxonomy: Option<&Taxonomy>) -> Result<ScoreFile> {
    spec.validate()?;
    let outcome = execute(spec, corpus, taxonomy)?;
    let label = spec.label();
    let file = ScoreFile {
        label: label.clone(),
        mode: spec.mode,
        test_topics: spec.test_topics.clone(),
        scores: outcome.scores,
    };
    let mut scores = serde_json::to_string_pretty(&file)?;
    scores.push('\n');
    let mut files = vec![
        (CHAINS_FILE, chains_json(&outcome.chains)),
        (SCORES_FILE, scores),
        (REPORT_FILE, format_table(&[(label, outcome.scores)])),
    ];
    if let Some(ttl) = outcome.turtle {
        files.push((TURTLE_FILE, ttl));
    }
    write_outputs(&spec.out, &files)?;
    Ok(file)
}

impl FromStr for Mode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline_singleton" | "singleton" => Mode::BaselineSingleton,
            "baseline_lemma" | "lemma" => Mode::BaselineLemma,
            "one_step" => Mode::OneStep,
            "two_step" => Mode::TwoStep,
            "door_to_door" => Mode::DoorToDoor,
            _ => bail!("unknown mode {s:?}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use evcoref::corpus::SlotType;
    use evcoref::synthetic::DocumentBuilder;

    fn three_mentions() -> Corpus {
        let mut b = DocumentBuilder::new("1_1", "1");
        let s = b.sentence("killed killing murdered fired");
        b.mention("m1", s, 0, 1, SlotType::Action, &["kill"]);
        b.mention("m2", s, 1, 2, SlotType::Action, &["Kill"]);
        b.mention("m3", s, 2, 3, SlotType::Action, &["murder"]);
        b.mention("m4", s, 3, 4, SlotType::Action, &["shoot", "fire"]);
        let mut c = DocumentBuilder::new("1_2", "1");
        let s = c.sentence("shot");
        c.mention("m5", s, 0, 1, SlotType::Action, &["shoot"]);
        Corpus::from_parts(vec![], vec![b.build(), c.build()], BTreeMap::new()).unwrap()
    }

    #[test]
    fn lemma_baseline_needs_full_overlap() {
        let c = three_mentions();
        let chains = run_baseline(&c, Mode::BaselineLemma, &["1".into()]).unwrap();
        assert_eq!(
            chains,
            ChainSet::new(vec![vec!["m1", "m2"], vec!["m3"], vec!["m4"], vec!["m5"]]).unwrap()
        );
    }

    #[test]
    fn singleton_baseline() {
        let c = three_mentions();
        let chains = run_baseline(&c, Mode::BaselineSingleton, &["1".into()]).unwrap();
        assert_eq!(chains.len(), 5);
        assert!(run_baseline(&c, Mode::TwoStep, &["1".into()]).is_err());
    }

    #[test]
    fn topic_lists() {
        assert_eq!(parse_topics("3-5,1, 4").unwrap(), ["1", "3", "4", "5"]);
        assert_eq!(parse_topics("36-45").unwrap().len(), 10);
        assert!(parse_topics("5-3").is_err());
        assert!(parse_topics("x-3").is_err());
        assert!(parse_topics(",").is_err());
    }

    #[test]
    fn default_splits() {
        let s = ExperimentSpec::new(Mode::TwoStep, "c.json", "out");
        assert_eq!(s.train_topics, topic_range(1, 35));
        assert_eq!(s.test_topics, topic_range(36, 45));
        assert_eq!(s.label(), "DT/5/docL + DT/5/LDES");
        let d = ExperimentSpec::new(Mode::DoorToDoor, "c.json", "out");
        assert_eq!(d.test_topics, topic_range(24, 43));
        assert_eq!(d.label(), "YAc30p30");
    }

    #[test]
    fn overlapping_splits_rejected() {
        let mut s = ExperimentSpec::new(Mode::OneStep, "c.json", "out");
        s.test_topics = vec!["35".into()];
        assert!(s.validate().is_err());
        s.mode = Mode::BaselineLemma;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn gold_covers_unannotated_mentions() {
        let c = three_mentions();
        assert_eq!(gold_chains(&c, &["1".into()]).mention_count(), 5);
    }
}
