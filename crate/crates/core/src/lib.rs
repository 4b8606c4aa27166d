//! Sentence fairness-perception scoring from pretrained sentence embeddings.
//!
//! Five semantic axes are built from pole-sentence embedding differences.
//! Sentences are scored by cosine against the sum of those axes, or
//! classified from their per-axis cosines with PCA and logistic regression.
//! The axes can also serve as a basis for projecting and clustering
//! embeddings.

pub mod axes;
pub mod corpus;
pub mod embedding_io;
pub mod error;
pub mod evaluation;
pub mod ml;
pub mod scoring;
pub mod subspace;
pub mod vecmath;

pub use axes::{AxisSet, DimensionAxis, PolePair};
pub use corpus::{BundledCorpus, Label, LabeledCorpus, LabeledSentence};
pub use embedding_io::{EmbeddingManifest, EmbeddingRecord, EmbeddingStore};
pub use error::{Error, Result};
pub use evaluation::{ConfusionMatrix, EvalReport, Metrics};
pub use scoring::{FairnessScore, ScoreMethod};
pub use subspace::{Projection, SubspaceBasis};
pub use vecmath::RealVector;
