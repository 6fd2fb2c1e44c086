use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{sha256_hex, PipelineError};
use crate::lexicons::Family;
use crate::model::TrainConfig;
use crate::topics::LdaConfig;

/// Every setting of a run. Read from flat `key = value` TOML; any key can be
/// overridden with [`RunConfig::set`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub conllu: Option<PathBuf>,
    pub lexicon_dir: Option<PathBuf>,
    pub out: PathBuf,

    pub lda_k: usize,
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_iterations: usize,
    pub lda_seed: u64,
    pub lda_min_count: usize,
    pub lda_fold_in_iterations: usize,
    pub fit_on_train_only: bool,

    pub l2_lambda: f64,
    pub lr: f64,
    pub max_iter: usize,
    pub tol: f64,

    pub cv_k: usize,
    pub cv_seed: u64,
    pub bow_max_terms: usize,

    pub use_emotions: bool,
    pub use_sentiment: bool,
    pub use_bad_sexual: bool,
    pub use_stance: bool,
    pub use_bias: bool,
    pub use_liwc: bool,
    pub use_morality: bool,
    pub use_stylistic: bool,
    pub use_nli: bool,
    pub use_network: bool,
    pub use_bow: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let lda = LdaConfig::default();
        let train = TrainConfig::default();
        Self {
            corpus: None,
            conllu: None,
            lexicon_dir: None,
            out: PathBuf::from("out"),
            lda_k: lda.num_topics,
            lda_alpha: lda.alpha,
            lda_beta: lda.beta,
            lda_iterations: lda.iterations,
            lda_seed: lda.seed,
            lda_min_count: lda.min_count,
            lda_fold_in_iterations: 20,
            fit_on_train_only: false,
            l2_lambda: train.l2_lambda,
            lr: train.learning_rate,
            max_iter: train.max_iter,
            tol: train.tol,
            cv_k: 5,
            cv_seed: 1,
            bow_max_terms: 10_000,
            use_emotions: true,
            use_sentiment: true,
            use_bad_sexual: true,
            use_stance: true,
            use_bias: true,
            use_liwc: true,
            use_morality: true,
            use_stylistic: true,
            use_nli: true,
            use_network: true,
            use_bow: true,
        }
    }
}

/// Keys accepted in config files and by [`RunConfig::set`].
pub const CONFIG_KEYS: [&str; 30] = [
    "corpus",
    "conllu",
    "lexicon_dir",
    "out",
    "lda_k",
    "lda_alpha",
    "lda_beta",
    "lda_iterations",
    "lda_seed",
    "lda_min_count",
    "lda_fold_in_iterations",
    "fit_on_train_only",
    "l2_lambda",
    "lr",
    "max_iter",
    "tol",
    "cv_k",
    "cv_seed",
    "bow_max_terms",
    "use_emotions",
    "use_sentiment",
    "use_bad_sexual",
    "use_stance",
    "use_bias",
    "use_liwc",
    "use_morality",
    "use_stylistic",
    "use_nli",
    "use_network",
    "use_bow",
];

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.message().to_owned()))
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            PipelineError::Config(m) => PipelineError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    /// Overrides one key. The value is parsed as a TOML value, falling back
    /// to a bare string so paths need no quoting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let mut table: toml::Table = toml::from_str(&self.to_toml()).expect("round trip");
        let parsed = format!("v = {value}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_owned()));
        table.insert(key.to_owned(), parsed);
        *self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| PipelineError::Config(format!("{key}: {}", e.message())))?;
        Ok(())
    }

    /// Range checks on numeric settings.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let fail = |m: &str| Err(PipelineError::Config(m.to_owned()));
        if self.lda_k == 0 {
            return fail("lda_k must be >= 1");
        }
        if self.lda_alpha.is_some_and(|a| !(a > 0.0 && a.is_finite())) {
            return fail("lda_alpha must be positive");
        }
        if !(self.lda_beta > 0.0 && self.lda_beta.is_finite()) {
            return fail("lda_beta must be positive");
        }
        if self.cv_k < 2 {
            return fail("cv_k must be >= 2");
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return fail("l2_lambda must be >= 0");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return fail("lr must be positive");
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return fail("tol must be >= 0");
        }
        if self.max_iter == 0 {
            return fail("max_iter must be >= 1");
        }
        if self.bow_max_terms == 0 {
            return fail("bow_max_terms must be >= 1");
        }
        Ok(())
    }

    /// Every configured input path must exist.
    pub fn validate_paths(&self) -> Result<(), PipelineError> {
        for (key, path) in [
            ("corpus", &self.corpus),
            ("conllu", &self.conllu),
            ("lexicon_dir", &self.lexicon_dir),
        ] {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(PipelineError::Config(format!("{key}: {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }

    pub fn lda_config(&self) -> LdaConfig {
        LdaConfig {
            num_topics: self.lda_k,
            alpha: self.lda_alpha,
            beta: self.lda_beta,
            iterations: self.lda_iterations,
            seed: self.lda_seed,
            min_count: self.lda_min_count,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            l2_lambda: self.l2_lambda,
            learning_rate: self.lr,
            max_iter: self.max_iter,
            tol: self.tol,
            seed: self.cv_seed,
        }
    }

    pub fn family_enabled(&self, family: Family) -> bool {
        match family {
            Family::Emotions => self.use_emotions,
            Family::Sentiment => self.use_sentiment,
            Family::BadSexual => self.use_bad_sexual,
            Family::Stance => self.use_stance,
            Family::Bias => self.use_bias,
            Family::Liwc => self.use_liwc,
            Family::Morality => self.use_morality,
        }
    }

    pub fn enabled_families(&self) -> Vec<Family> {
        Family::ALL.into_iter().filter(|&f| self.family_enabled(f)).collect()
    }

    /// Hash of the topic stage: data plus LDA settings.
    pub fn topics_hash(&self, data_hash: &str) -> String {
        let lda = serde_json::to_string(&(self.lda_config(), self.lda_fold_in_iterations)).unwrap();
        sha256_hex(&[b"topics", data_hash.as_bytes(), lda.as_bytes()])
    }

    /// Hash of the feature stage: topics plus lexicons.
    pub fn features_hash(&self, topics_hash: &str, lexicon_hash: &str) -> String {
        sha256_hex(&[b"features", topics_hash.as_bytes(), lexicon_hash.as_bytes()])
    }

    /// Hash of the model stage: features plus training, CV and selection settings.
    pub fn model_hash(&self, features_hash: &str) -> String {
        let mut settings = self.clone();
        settings.corpus = None;
        settings.conllu = None;
        settings.lexicon_dir = None;
        settings.out = PathBuf::new();
        let text = serde_json::to_string(&settings).unwrap();
        sha256_hex(&[b"model", features_hash.as_bytes(), text.as_bytes()])
    }
}
