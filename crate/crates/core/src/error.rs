use crate::corpus::HeadKey;
use crate::taxonomy::TaxonomyError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("sample is empty")]
    EmptySample,
    #[error("slice for {0} is empty")]
    EmptySlice(HeadKey),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error("marginal probability of {label:?} is zero but the slice observes it {count} times")]
    ZeroMarginal { label: String, count: u64 },
    #[error("{what}: expected {expected} values, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} must be nonnegative and finite, got {value}")]
    BadValue { what: &'static str, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("stochastic condition violated: sum of A*p is off by {residual:e}")]
    NotStochastic { residual: f64 },
    #[error("taxonomy has {leaves} leaves, above the enumeration cap of {cap}")]
    CapExceeded { leaves: usize, cap: usize },
    #[error("model slot {model:?} does not match the quadruple's preposition {prep:?}")]
    SlotMismatch { model: String, prep: String },
    #[error("thresholds must be listed in descending order")]
    ThresholdOrder,
}
