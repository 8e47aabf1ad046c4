use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use evcoref::crossdoc::{ParticipantFilter, TimeGranularity};
use evcoref::instances::{build_document_instances, build_entity_instances, merge_entities};
use evcoref::scorer::format_table;
use evcoref::semgraph::ExportOptions;
use evcoref::templates::{build_document_template, build_sentence_template};
use evcoref::{export_turtle, parse_config_code, run_door_to_door, score_all, FeatureSet, MatchConfig, SlotMode};
use evcoref_cli::{
    gold_chains, load_inputs, parse_topics, read_chains, read_scores, run_experiment, write_outputs,
    ExperimentSpec, Mode, SCORES_FILE,
};

#[derive(Parser)]
#[command(name = "evcoref", version, about = "Cross-document event coreference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Inputs {
    /// Corpus in canonical JSON.
    #[arg(long)]
    corpus: PathBuf,
    /// Hypernym taxonomy TSV.
    #[arg(long)]
    taxonomy: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Split {
    /// Training topics, e.g. `1-35`.
    #[arg(long)]
    train_topics: Option<String>,
    /// Test topics, e.g. `36-45` or `24-43`.
    #[arg(long)]
    test_topics: Option<String>,
}

#[derive(Args, Clone)]
struct Matching {
    /// Configuration code such as `YAc30p30`; overrides the individual flags.
    #[arg(long)]
    code: Option<String>,
    /// Time filter: year, month, day or none (or Y, M, D, N).
    #[arg(long, default_value = "year")]
    time: String,
    /// Participant filter: any, a1 or none.
    #[arg(long, default_value = "any")]
    participant: String,
    /// Concept (synset) overlap threshold in [0, 1].
    #[arg(long, default_value_t = 0.3)]
    concept: f64,
    /// Phrase (label) overlap threshold in [0, 1].
    #[arg(long, default_value_t = 0.3)]
    phrase: f64,
    /// Lemma merge threshold for within-document instances.
    #[arg(long, default_value_t = 2.0)]
    lemma_threshold: f64,
}

impl Matching {
    fn config(&self) -> Result<MatchConfig> {
        if let Some(code) = &self.code {
            return Ok(parse_config_code(code)?);
        }
        let t: TimeGranularity = self.time.parse()?;
        let p: ParticipantFilter = self.participant.parse()?;
        Ok(MatchConfig::new(t, p, self.concept, self.phrase)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineKind {
    Singleton,
    Lemma,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Sentence,
    Document,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and optionally write its canonical form.
    Ingest {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write event templates as JSON.
    Templates {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "sentence")]
        level: LevelArg,
        /// Topics to include; all when omitted.
        #[arg(long)]
        test_topics: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Singleton or lemma-match baseline.
    Baseline {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "lemma")]
        mode: BaselineKind,
        #[command(flatten)]
        split: Split,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decision-tree bag-of-events pipeline.
    BagOfEvents {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        steps: u8,
        #[arg(long, default_value_t = 5)]
        slots: u8,
        #[arg(long, default_value = "LDES")]
        features: String,
        #[command(flatten)]
        split: Split,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Within-document event and entity instances as JSON.
    Instances {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        test_topics: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        lemma_threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Door-to-door cross-document coreference.
    Coref {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        matching: Matching,
        #[command(flatten)]
        split: Split,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolve instances door to door and write them as Turtle.
    ExportRdf {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        matching: Matching,
        #[arg(long)]
        test_topics: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a chains file against the corpus gold.
    Score {
        #[arg(long)]
        corpus: PathBuf,
        /// Chain file: `{chain_id: [mention_id]}`.
        #[arg(long)]
        response: PathBuf,
        #[arg(long)]
        test_topics: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the scores of finished runs.
    Report {
        /// Run directories or `scores.json` files.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn topics_or(arg: &Option<String>, default: Vec<String>) -> Result<Vec<String>> {
    arg.as_deref().map(parse_topics).transpose().map(|t| t.unwrap_or(default))
}

fn spec_for(mode: Mode, inputs: &Inputs, split: &Split, out: &Path) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(mode, &inputs.corpus, out);
    spec.taxonomy = inputs.taxonomy.clone();
    spec.train_topics = topics_or(&split.train_topics, spec.train_topics)?;
    spec.test_topics = topics_or(&split.test_topics, spec.test_topics)?;
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_and_print(spec: &ExperimentSpec) -> Result<()> {
    let result = run_experiment(spec)?;
    print!("{}", format_table(&[(result.label, result.scores)]));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { inputs, out } => {
            let (corpus, taxonomy) = load_inputs(&inputs.corpus, inputs.taxonomy.as_deref())?;
            println!(
                "{} topics, {} documents, {} mentions, {} action mentions, {} gold chains",
                corpus.topic_ids().len(),
                corpus.documents().len(),
                corpus.mentions().count(),
                corpus.action_mentions().count(),
                corpus.gold().chains.len()
            );
            if let Some(t) = taxonomy {
                println!("{} synsets", t.len());
            }
            if let Some(p) = out {
                fs::write(&p, corpus.to_canonical_json()).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(())
        }
        Command::Templates { inputs, level, test_topics, out } => {
            let (corpus, _) = load_inputs(&inputs.corpus, None)?;
            let topics = topics_or(&test_topics, corpus.topic_ids())?;
            let docs = corpus.documents().iter().filter(|d| topics.contains(&d.topic_id));
            let templates: Vec<_> = match level {
                LevelArg::Document => docs.map(build_document_template).collect(),
                LevelArg::Sentence => docs
                    .flat_map(|d| d.action_mentions())
                    .map(|m| build_sentence_template(m, &corpus))
                    .collect(),
            };
            emit(Some(&out), &(serde_json::to_string_pretty(&templates)? + "\n"))
        }
        Command::Baseline { inputs, mode, split, out } => {
            let mode = match mode {
                BaselineKind::Singleton => Mode::BaselineSingleton,
                BaselineKind::Lemma => Mode::BaselineLemma,
            };
            run_and_print(&spec_for(mode, &inputs, &split, &out)?)
        }
        Command::BagOfEvents { inputs, steps, slots, features, split, seed, out } => {
            let mode = if steps == 1 { Mode::OneStep } else { Mode::TwoStep };
            let mut spec = spec_for(mode, &inputs, &split, &out)?;
            spec.slot_mode = match slots {
                5 => SlotMode::FiveSlot,
                2 => SlotMode::TwoSlot,
                n => bail!("--slots must be 5 or 2, got {n}"),
            };
            spec.feature_set = features.parse::<FeatureSet>()?;
            if spec.feature_set == FeatureSet::DocL {
                bail!("--features must be L, LDES or LADES");
            }
            spec.seed = seed;
            run_and_print(&spec)
        }
        Command::Instances { inputs, test_topics, lemma_threshold, out } => {
            let (corpus, taxonomy) = load_inputs(&inputs.corpus, inputs.taxonomy.as_deref())?;
            let topics = topics_or(&test_topics, corpus.topic_ids())?;
            let cfg = evcoref::InstanceConfig { lemma_merge_threshold: lemma_threshold, ..Default::default() };
            let docs: Vec<_> = corpus.documents().iter().filter(|d| topics.contains(&d.topic_id)).collect();
            let events: Vec<_> = docs
                .iter()
                .flat_map(|d| build_document_instances(d, &corpus, taxonomy.as_ref(), &cfg))
                .collect();
            let entities = merge_entities(docs.iter().flat_map(|d| build_entity_instances(d)));
            let body = serde_json::json!({ "events": events, "entities": entities });
            emit(Some(&out), &(serde_json::to_string_pretty(&body)? + "\n"))
        }
        Command::Coref { inputs, matching, split, out } => {
            let mut spec = spec_for(Mode::DoorToDoor, &inputs, &split, &out)?;
            spec.match_config = matching.config()?;
            spec.instance_config.lemma_merge_threshold = matching.lemma_threshold;
            run_and_print(&spec)
        }
        Command::ExportRdf { inputs, matching, test_topics, out } => {
            let (corpus, taxonomy) = load_inputs(&inputs.corpus, inputs.taxonomy.as_deref())?;
            let topics = topics_or(&test_topics, corpus.topic_ids())?;
            let cfg = evcoref::InstanceConfig {
                lemma_merge_threshold: matching.lemma_threshold,
                ..Default::default()
            };
            let run = run_door_to_door(&corpus, taxonomy.as_ref(), &topics, &cfg, &matching.config()?);
            let events: Vec<_> = run.events().cloned().collect();
            let ttl = export_turtle(&events, &run.entities, &ExportOptions::default())?;
            emit(Some(&out), &ttl)
        }
        Command::Score { corpus, response, test_topics, out } => {
            let (corpus, _) = load_inputs(&corpus, None)?;
            let topics = topics_or(&test_topics, corpus.topic_ids())?;
            let report = score_all(&gold_chains(&corpus, &topics), &read_chains(&response)?);
            let name = response.display().to_string();
            print!("{}", format_table(&[(name, report)]));
            if let Some(p) = out {
                write_outputs(
                    p.parent().unwrap_or(Path::new(".")),
                    &[(
                        p.file_name().and_then(|f| f.to_str()).context("bad output path")?,
                        serde_json::to_string_pretty(&report)? + "\n",
                    )],
                )?;
            }
            Ok(())
        }
        Command::Report { runs, out } => {
            let mut rows = Vec::new();
            for r in runs {
                let path = if r.is_dir() { r.join(SCORES_FILE) } else { r };
                let s = read_scores(&path)?;
                rows.push((s.label, s.scores));
            }
            emit(out.as_deref(), &format_table(&rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
