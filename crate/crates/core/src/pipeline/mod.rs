//! End-to-end wiring: run configuration, in-memory feature assembly, the
//! evaluation report, and the on-disk stages driven by the command line.

mod config;
mod matrices;
mod report;
pub mod stages;

use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::corpus::{ConlluError, CorpusError};
use crate::features::FeatureError;
use crate::lexicons::LexiconError;
use crate::model::ModelError;
use crate::topics::TopicError;

pub use config::{RunConfig, CONFIG_KEYS};
pub use matrices::{
    account_documents, account_tweets, fit_themes, global_themes, lda_documents, network_features,
    profile_features, theme_features, tweet_vectors, AccountFeatures, BowFeatures, FeatureSet, FoldThemes,
    ThemeSource, TweetVectors,
};
pub use report::{
    eval_report_csv, evaluate_method, feature_set, method_schema, run_report, Method, Report, ReportInputs, ReportRow, Section,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("missing upstream artifact {0} (run the earlier stage first)")]
    MissingArtifact(PathBuf),
    #[error("{artifact} was produced with config hash {found}, current configuration expects {expected}; rerun the stage")]
    HashMismatch {
        artifact: PathBuf,
        expected: String,
        found: String,
    },
    #[error("malformed artifact {path}: {message}")]
    Artifact { path: PathBuf, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Conllu(#[from] ConlluError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl PipelineError {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        PipelineError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

pub(crate) fn sha256_hex(parts: &[&[u8]]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
