//! Tree cut models over a thesaurus tree, their association variant, and
//! prepositional phrase attachment built on top of them.
//!
//! A taxonomy is parsed once into a [`Taxonomy`]. Co-occurrence data is
//! collected into a [`PairSample`], whose value projection yields a marginal
//! [`TreeCutModel`] through [`find_mdl`], and whose per-head slices yield
//! [`AssociationTreeCutModel`]s through [`find_assoc_mdl`]. Both searches
//! minimize description length in bits.
//!
//! Estimators are generic over [`Scalar`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`.
//!
//! ```
//! use treecut::{find_mdl, ClassCounts, Taxonomy};
//!
//! let t = Taxonomy::parse("(BIRD swallow crow robin)").unwrap();
//! let counts = [("swallow", 42), ("crow", 66), ("robin", 9)]
//!     .iter()
//!     .map(|(w, c)| (w.to_string(), *c))
//!     .collect();
//! let m: treecut::Tcm = find_mdl(&t, &ClassCounts::new(&t, &counts)).unwrap();
//! assert_eq!(m.cut().len(), 3);
//! ```

pub mod atcm;
pub mod corpus;
pub mod disambiguation;
pub mod error;
pub mod format;
pub mod oracle;
pub mod scalar;
pub mod taxonomy;
pub mod tcm;

pub use atcm::{
    assoc_description_length, assoc_mdl, extend_p_hat, find_assoc_mdl, find_assoc_mdl_with,
    fit_heads, mle_pair, AssociationTreeCutModel, HeadFit, MarginalTable, TreeCutPairModel,
};
pub use corpus::{
    ingest_triples, preprocess_word, read_quadruples, Attachment, ClassCounts, CorpusError,
    HeadKey, HeadSlice, PairSample, TestQuadruple, ValueCounts,
};
pub use disambiguation::{
    coverage_accuracy_curve, decide_attachment, evaluate, AttachmentDecision, Choice, Curve,
    EvaluationReport,
};
pub use error::EstimationError;
pub use scalar::Scalar;
pub use taxonomy::{NodeId, Taxonomy, TaxonomyError, TreeCut};
pub use tcm::{
    find_mdl, find_mdl_with, mle_tcm, tcm_description_length, SearchOptions, TreeCutModel,
};

pub type Tcm = TreeCutModel<f64>;
pub type Atcm = AssociationTreeCutModel<f64>;
pub type PairModel = TreeCutPairModel<f64>;
pub type Decision = AttachmentDecision<f64>;
pub type Planted = oracle::PlantedModel<f64>;
