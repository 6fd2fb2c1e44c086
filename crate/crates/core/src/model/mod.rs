//! Regularized logistic regression, stratified cross-validation, macro
//! metrics and the trivial baselines.

mod cv;
mod importance;
mod logreg;
mod metrics;

use thiserror::Error;

pub use cv::{cross_validate, stratified_kfold, EvalReport, FoldFeatures, FoldMetrics, Precomputed, Predictor};
pub use importance::{feature_importance, FamilyRanking};
pub use logreg::{
    loss_and_gradient, predict_proba, train, LogRegModel, Standardizer, TrainConfig, TrainingMeta,
};
pub use metrics::{evaluate, Confusion, Metrics};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("training labels contain a single class")]
    DegenerateLabels,
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("class {class} has {count} members, fewer than k = {k}")]
    TooFewMinority { class: u8, count: usize, k: usize },
    #[error("unknown feature family {0:?}")]
    UnknownFamily(String),
    #[error("feature construction failed: {0}")]
    Features(String),
}
