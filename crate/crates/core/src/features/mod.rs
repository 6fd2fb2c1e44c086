//! Per-tweet feature vectors and their per-account aggregations.
//!
//! Theme-based features concatenate, for every theme, the mean and the
//! population standard deviation of the account's per-tweet lexicon vectors
//! in that theme. Profiling features do the same over all tweets at once for
//! the stopword/POS/DEPREL bags and the stylistic counts.

mod baseline;
mod profile;
mod theme;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use baseline::{account_document, bow_user, network_vector, BowVocabulary, NETWORK_DIM};
pub use profile::{
    aggregate_profile_user, nli_vector, profile_schema, profile_tweet_schema, stylistic_vector,
    tweet_profile_vector, NliVector, NLI_DIM, PROFILE_TWEET_DIM, STYLISTIC_DIM, STYLISTIC_NAMES,
};
pub use theme::{aggregate_theme_user, theme_schema, theme_tweet_schema, tweet_theme_vector};

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("account {0:?} has no tweets")]
    EmptyAccount(String),
}

/// One named dimension and the family it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimension {
    pub name: String,
    pub family: String,
}

/// Ordered, uniquely named dimensions of a feature vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub dims: Vec<Dimension>,
}

impl FeatureSchema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, family: impl Into<String>) {
        self.dims.push(Dimension {
            name: name.into(),
            family: family.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.dims.iter().map(|d| d.name.as_str())
    }

    /// Indices of dimensions whose family is `family`.
    pub fn family_indices(&self, family: &str) -> Vec<usize> {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, d)| d.family == family)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_family(&self, family: &str) -> bool {
        self.dims.iter().any(|d| d.family == family)
    }

    /// Sub-schema selecting `indices` in order.
    pub fn select(&self, indices: &[usize]) -> FeatureSchema {
        FeatureSchema {
            dims: indices.iter().map(|&i| self.dims[i].clone()).collect(),
        }
    }

    /// Concatenation of two schemas.
    pub fn concat(&self, other: &FeatureSchema) -> FeatureSchema {
        FeatureSchema {
            dims: self.dims.iter().chain(&other.dims).cloned().collect(),
        }
    }

    /// The same schema aggregated by mean and std: every name prefixed
    /// with `mean:` then again with `std:`.
    pub fn mean_std(&self, prefix: &str) -> FeatureSchema {
        let mut out = FeatureSchema::new();
        for stat in ["mean", "std"] {
            for d in &self.dims {
                out.push(format!("{prefix}{stat}:{}", d.name), d.family.clone());
            }
        }
        out
    }

    /// Stable content hash used to tie models to the features they were trained on.
    pub fn hash_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for d in &self.dims {
            h.update(d.name.as_bytes());
            h.update([0]);
            h.update(d.family.as_bytes());
            h.update([1]);
        }
        hex::encode(h.finalize())
    }
}

/// A dense per-account vector and its schema.
#[derive(Debug, Clone, PartialEq)]
pub struct UserFeatureVector {
    pub account_id: String,
    pub vector: Vec<f64>,
    pub schema: FeatureSchema,
}

impl fmt::Display for UserFeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} dims)", self.account_id, self.vector.len())
    }
}

/// Running mean and population variance (Welford).
#[derive(Debug, Clone)]
pub(crate) struct MeanStd {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl MeanStd {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            n: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub(crate) fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.mean.len());
        self.n += 1;
        let n = self.n as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.n
    }

    /// Appends `[mean ; std]`; an empty accumulator yields zeros.
    pub(crate) fn write_into(&self, out: &mut Vec<f64>) {
        out.extend_from_slice(&self.mean);
        if self.n == 0 {
            out.extend(std::iter::repeat_n(0.0, self.mean.len()));
        } else {
            let n = self.n as f64;
            out.extend(self.m2.iter().map(|&s| (s / n).max(0.0).sqrt()));
        }
    }
}
