//! Cross-document event coreference.
//!
//! The crate covers the whole path from an annotated corpus to scored
//! coreference chains:
//!
//! * [`corpus`] loads and validates annotated documents and gold chains.
//! * [`taxonomy`] holds a hypernym taxonomy and Leacock-Chodorow similarity.
//! * [`templates`] builds sentence and document templates and pair features.
//! * [`pairlearn`] trains decision trees on template pairs and chains their decisions.
//! * [`instances`] aggregates a document's mentions into event and entity instances.
//! * [`crossdoc`] matches and merges instances across the documents of a topic.
//! * [`semgraph`] writes and reads instances as SEM/GAF Turtle.
//! * [`scorer`] implements MUC, B-cubed, CEAF, BLANC and CoNLL scoring.
//!
//! [`synthetic`] generates small corpora with a toy taxonomy.

pub mod cluster;
pub mod corpus;
pub mod crossdoc;
pub mod instances;
pub mod pairlearn;
pub mod scorer;
pub mod semgraph;
pub mod synthetic;
pub mod taxonomy;
pub mod templates;

#[cfg(test)]
mod fixtures;

pub use corpus::{load_corpus, normalize_time, Corpus, Mention, SlotType, TimeAnchor};
pub use crossdoc::{parse_config_code, resolve_topic, run_door_to_door, MatchConfig};
pub use instances::{ActorRef, EntityInstance, EventInstance, InstanceConfig, MentionRef};
pub use pairlearn::{run_one_step, run_two_step, BagOfEventsSpec, GridSearchSpec};
pub use scorer::{score_all, ChainSet, Prf, ScoreReport};
pub use semgraph::{export_turtle, parse_turtle};
pub use taxonomy::{load_taxonomy, Taxonomy};
pub use templates::{FeatureSet, SlotMode};
