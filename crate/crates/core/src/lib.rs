//! Knowledge-graph embeddings where entities and relations are functions on
//! an interval and triples are scored by integrating their product.
//!
//! Families: polynomial ([`poly`]), complex trigonometric series ([`trig`])
//! and composed scalar tanh networks ([`neural`]), with DistMult and ComplEx
//! baselines ([`baseline`]). [`train`] fits a [`model::KgModel`] with binary
//! cross-entropy and Adam; [`eval`] reports filtered MRR and Hits@k.

pub mod baseline;
pub mod checkpoint;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod neural;
pub mod poly;
pub mod quadrature;
pub mod scoring;
pub mod train;
pub mod trig;

pub use checkpoint::Checkpoint;
pub use data::{Dataset, Split, Triple, TripleStore, Vocabulary};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalReport};
pub use model::{KgModel, ModelFamily, ModelSpec, Scorer};
pub use quadrature::Interval;
pub use scoring::TripleScorer;
pub use train::{train, train_with, TrainConfig};
pub use trig::TrigVariant;
