//! Role-aware query expansion over a WordNet-format ontology.
//!
//! The pipeline is: [`segmenter`] assigns each query concept a role from its
//! typed dependencies, [`wsd`] picks a WordNet sense per term, [`expander`]
//! pools and ranks related terms per lexical relation, and [`optimizer`]
//! searches role weights against MAP computed by the embedded [`retrieval`]
//! harness.

pub mod error;
pub mod expander;
pub mod lexicon;
pub mod num;
pub mod optimizer;
pub mod pipeline;
pub mod retrieval;
pub mod segmenter;
pub mod text;
pub mod wsd;

pub use error::{Error, Result};
pub use num::Real;

/// `f64` instantiations of the generic scoring and search types.
pub type RoleWeightsF64 = optimizer::RoleWeights<f64>;
pub type ChromosomeF64 = optimizer::Chromosome<f64>;
pub type WeightedQueryF64 = retrieval::WeightedQuery<f64>;
pub type RunEntryF64 = retrieval::RunEntry<f64>;
pub type RunF64 = retrieval::Run<f64>;
pub type EvalResultF64 = retrieval::EvalResult<f64>;
