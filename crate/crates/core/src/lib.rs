//! Learns the semantic model of a new tabular data source from a handful of
//! known source-to-ontology mappings, a domain ontology, and a domain
//! knowledge graph.
//!
//! The pipeline seeds a candidate model with a Steiner-tree search over an
//! alignment graph built from the known mappings, then repairs the seed:
//! ambiguous relationships are moved with a decision-tree classifier,
//! relationships unsupported by the knowledge graph are removed via exact
//! graph matching, and missing substructures are recovered by mining the
//! top-σ most frequent supergraphs of the seed from the knowledge graph.

pub mod alignment;
pub mod correction;
pub mod disambiguation;
pub mod error;
pub mod evaluation;
pub mod fixture;
pub mod kg;
pub mod labeling;
pub mod matching;
pub mod mining;
pub mod model;
pub mod ontology;
pub mod pipeline;
pub mod source;
pub mod stats;
pub mod steiner;

pub use error::{Error, Result};
