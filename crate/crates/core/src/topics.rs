//! LDA by collapsed Gibbs sampling, and per-tweet theme assignment.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TopicError {
    #[error("no tokens left to model after vocabulary pruning")]
    EmptyCorpus,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error("model file {path}: {message}")]
    Io { path: String, message: String },
}

/// A tweet's theme; `None` when the cleaned tweet has no in-vocabulary tokens.
pub type Theme = Option<usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    /// Symmetric document-topic prior; `None` means `50 / num_topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Terms seen fewer times than this across the corpus are dropped.
    pub min_count: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self {
            num_topics: 7,
            alpha: None,
            beta: 0.01,
            iterations: 500,
            seed: 1,
            min_count: 5,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.num_topics as f64)
    }

    fn validate(&self) -> Result<(), TopicError> {
        if self.num_topics == 0 {
            return Err(TopicError::InvalidHyperparameter("num_topics must be >= 1".into()));
        }
        if self.num_topics > u16::MAX as usize {
            return Err(TopicError::InvalidHyperparameter("num_topics too large".into()));
        }
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(TopicError::InvalidHyperparameter(format!("alpha = {alpha}")));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(TopicError::InvalidHyperparameter(format!("beta = {}", self.beta)));
        }
        Ok(())
    }
}

/// Builds the vocabulary in first-appearance order, keeping terms with at
/// least `min_count` occurrences.
pub fn build_vocabulary<S: AsRef<str>>(docs: &[Vec<S>], min_count: usize) -> Vec<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut order = Vec::new();
    for doc in docs {
        for term in doc {
            let c = counts.entry(term.as_ref()).or_insert_with(|| {
                order.push(term.as_ref());
                0
            });
            *c += 1;
        }
    }
    order
        .into_iter()
        .filter(|t| counts[t] >= min_count)
        .map(str::to_owned)
        .collect()
}

/// Fitted collapsed-Gibbs state.
///
/// Counts are kept word-major internally (`topic_word[w * K + k]`); the
/// accessors present them topic-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "LdaModelFile", try_from = "LdaModelFile")]
pub struct LdaModel {
    num_topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    vocab: Vec<String>,
    #[serde(skip)]
    vocab_index: HashMap<String, u32>,
    topic_word: Vec<u32>,
    topic_totals: Vec<u64>,
    doc_topic: Vec<Vec<u32>>,
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u16>>,
}

#[derive(Serialize, Deserialize)]
struct LdaModelFile {
    num_topics: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    vocab: Vec<String>,
    topic_word_counts: Vec<Vec<u32>>,
    topic_totals: Vec<u64>,
    doc_topic_counts: Vec<Vec<u32>>,
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u16>>,
}

impl From<LdaModel> for LdaModelFile {
    fn from(m: LdaModel) -> Self {
        let topic_word_counts = (0..m.num_topics)
            .map(|k| (0..m.vocab.len()).map(|w| m.topic_word[w * m.num_topics + k]).collect())
            .collect();
        LdaModelFile {
            num_topics: m.num_topics,
            alpha: m.alpha,
            beta: m.beta,
            seed: m.seed,
            iterations: m.iterations,
            vocab: m.vocab,
            topic_word_counts,
            topic_totals: m.topic_totals,
            doc_topic_counts: m.doc_topic,
            docs: m.docs,
            assignments: m.assignments,
        }
    }
}

impl TryFrom<LdaModelFile> for LdaModel {
    type Error = String;

    fn try_from(f: LdaModelFile) -> Result<Self, String> {
        let k = f.num_topics;
        let v = f.vocab.len();
        if f.topic_word_counts.len() != k || f.topic_word_counts.iter().any(|r| r.len() != v) {
            return Err("topic_word_counts must be K x V".into());
        }
        let mut topic_word = vec![0; k * v];
        for (t, row) in f.topic_word_counts.iter().enumerate() {
            for (w, &c) in row.iter().enumerate() {
                topic_word[w * k + t] = c;
            }
        }
        let model = LdaModel {
            num_topics: k,
            alpha: f.alpha,
            beta: f.beta,
            seed: f.seed,
            iterations: f.iterations,
            vocab_index: index_vocab(&f.vocab),
            vocab: f.vocab,
            topic_word,
            topic_totals: f.topic_totals,
            doc_topic: f.doc_topic_counts,
            docs: f.docs,
            assignments: f.assignments,
        };
        model.check_invariants()?;
        Ok(model)
    }
}

fn index_vocab(vocab: &[String]) -> HashMap<String, u32> {
    vocab
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as u32))
        .collect()
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn topic_word_count(&self, topic: usize, word: usize) -> u32 {
        self.topic_word[word * self.num_topics + topic]
    }

    pub fn topic_total(&self, topic: usize) -> u64 {
        self.topic_totals[topic]
    }

    pub fn doc_topic_counts(&self, doc: usize) -> &[u32] {
        &self.doc_topic[doc]
    }

    pub fn doc_tokens(&self, doc: usize) -> &[u32] {
        &self.docs[doc]
    }

    pub fn assignments(&self, doc: usize) -> &[u16] {
        &self.assignments[doc]
    }

    pub fn word_id(&self, term: &str) -> Option<u32> {
        self.vocab_index.get(term).copied()
    }

    /// Exact check of the count invariants against the per-token assignments.
    pub fn check_invariants(&self) -> Result<(), String> {
        let k = self.num_topics;
        let v = self.vocab.len();
        if self.topic_word.len() != k * v || self.topic_totals.len() != k {
            return Err("count matrix shape mismatch".into());
        }
        for t in 0..k {
            let sum: u64 = (0..v).map(|w| self.topic_word[w * k + t] as u64).sum();
            if sum != self.topic_totals[t] {
                return Err(format!("topic {t}: word counts sum {sum} != total {}", self.topic_totals[t]));
            }
        }
        let mut recount_tw = vec![0u32; k * v];
        for (d, (doc, z)) in self.docs.iter().zip(&self.assignments).enumerate() {
            if doc.len() != z.len() {
                return Err(format!("doc {d}: assignment length mismatch"));
            }
            let sum: u64 = self.doc_topic[d].iter().map(|&c| c as u64).sum();
            if sum != doc.len() as u64 {
                return Err(format!("doc {d}: topic counts sum {sum} != length {}", doc.len()));
            }
            let mut recount = vec![0u32; k];
            for (&w, &t) in doc.iter().zip(z) {
                recount[t as usize] += 1;
                recount_tw[w as usize * k + t as usize] += 1;
            }
            if recount != self.doc_topic[d] {
                return Err(format!("doc {d}: counts disagree with assignments"));
            }
        }
        if recount_tw != self.topic_word {
            return Err("topic-word counts disagree with assignments".into());
        }
        Ok(())
    }

    /// Smoothed document-topic distribution.
    pub fn theta(&self, doc: usize) -> Vec<f64> {
        let n: u32 = self.doc_topic[doc].iter().sum();
        let denom = n as f64 + self.num_topics as f64 * self.alpha;
        self.doc_topic[doc]
            .iter()
            .map(|&c| (c as f64 + self.alpha) / denom)
            .collect()
    }

    /// Smoothed topic-word distribution.
    pub fn phi(&self, topic: usize) -> Vec<f64> {
        let v = self.vocab.len();
        let denom = self.topic_totals[topic] as f64 + v as f64 * self.beta;
        (0..v)
            .map(|w| (self.topic_word_count(topic, w) as f64 + self.beta) / denom)
            .collect()
    }

    /// Joint log-likelihood log p(w, z) of the training corpus.
    pub fn log_likelihood(&self) -> f64 {
        let k = self.num_topics as f64;
        let v = self.vocab.len() as f64;
        let mut ll = 0.0;
        let lg_beta = ln_gamma(self.beta);
        for t in 0..self.num_topics {
            ll += ln_gamma(v * self.beta) - v * lg_beta;
            for w in 0..self.vocab.len() {
                let c = self.topic_word_count(t, w);
                if c > 0 {
                    ll += ln_gamma(c as f64 + self.beta) - lg_beta;
                }
            }
            ll += v * lg_beta - ln_gamma(self.topic_totals[t] as f64 + v * self.beta);
        }
        let lg_alpha = ln_gamma(self.alpha);
        for counts in &self.doc_topic {
            let n: u32 = counts.iter().sum();
            ll += ln_gamma(k * self.alpha) - ln_gamma(n as f64 + k * self.alpha);
            for &c in counts {
                ll += ln_gamma(c as f64 + self.alpha) - lg_alpha;
            }
        }
        ll
    }

    pub fn total_tokens(&self) -> u64 {
        self.topic_totals.iter().sum()
    }

    /// Terms ranked by phi, ties broken by vocabulary index. Returns at most V terms.
    pub fn topic_top_words(&self, n: usize) -> Vec<Vec<(String, f64)>> {
        (0..self.num_topics)
            .map(|t| {
                let phi = self.phi(t);
                let mut idx: Vec<usize> = (0..self.vocab.len()).collect();
                // phi is monotone in the raw count, so ranking on counts is exact.
                idx.sort_by(|&a, &b| {
                    self.topic_word_count(t, b)
                        .cmp(&self.topic_word_count(t, a))
                        .then(a.cmp(&b))
                });
                idx.into_iter()
                    .take(n)
                    .map(|w| (self.vocab[w].clone(), phi[w]))
                    .collect()
            })
            .collect()
    }

    /// Theme of a training document: argmax of its stored counts, lowest topic on ties.
    pub fn training_theme(&self, doc: usize) -> Theme {
        argmax_counts(&self.doc_topic[doc])
    }

    /// Theme of an unseen document by fold-in Gibbs sampling with frozen
    /// topic-word counts. Out-of-vocabulary terms are ignored.
    pub fn infer_theme<S: AsRef<str>>(&self, doc: &[S], fold_in_iterations: usize, seed: u64) -> Theme {
        let ids: Vec<u32> = doc.iter().filter_map(|t| self.word_id(t.as_ref())).collect();
        argmax_counts(&self.fold_in(&ids, fold_in_iterations, seed))
    }

    /// Doc-topic counts for `doc` after `iterations` fold-in sweeps.
    pub fn fold_in(&self, doc: &[u32], iterations: usize, seed: u64) -> Vec<u32> {
        let k = self.num_topics;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u32; k];
        let mut z: Vec<usize> = doc
            .iter()
            .map(|_| {
                let t = rng.random_range(0..k);
                counts[t] += 1;
                t
            })
            .collect();
        let vbeta = self.vocab.len() as f64 * self.beta;
        let mut weights = vec![0.0; k];
        for _ in 0..iterations {
            for (i, &w) in doc.iter().enumerate() {
                counts[z[i]] -= 1;
                let row = &self.topic_word[w as usize * k..(w as usize + 1) * k];
                for t in 0..k {
                    weights[t] = (counts[t] as f64 + self.alpha) * (row[t] as f64 + self.beta)
                        / (self.topic_totals[t] as f64 + vbeta);
                }
                z[i] = sample_index(&mut rng, &weights);
                counts[z[i]] += 1;
            }
        }
        counts
    }

    pub fn save_json(&self, path: &Path) -> Result<(), TopicError> {
        let text = serde_json::to_string(self).map_err(|e| TopicError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        fs::write(path, text).map_err(|e| TopicError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load_json(path: &Path) -> Result<Self, TopicError> {
        let io = |message: String| TopicError::Io {
            path: path.display().to_string(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| io(e.to_string()))
    }
}

fn argmax_counts(counts: &[u32]) -> Theme {
    let mut best: Option<(usize, u32)> = None;
    for (t, &c) in counts.iter().enumerate() {
        if c > 0 && best.is_none_or(|(_, b)| c > b) {
            best = Some((t, c));
        }
    }
    best.map(|(t, _)| t)
}

fn sample_index<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// A collapsed Gibbs chain. One chain is strictly sequential.
pub struct GibbsSampler {
    model: LdaModel,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl GibbsSampler {
    /// Randomly initializes topic assignments for pre-indexed documents.
    pub fn new(
        docs: Vec<Vec<u32>>,
        vocab: Vec<String>,
        config: &LdaConfig,
    ) -> Result<Self, TopicError> {
        config.validate()?;
        let k = config.num_topics;
        if docs.iter().all(Vec::is_empty) {
            return Err(TopicError::EmptyCorpus);
        }
        let v = vocab.len();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut topic_word = vec![0u32; k * v];
        let mut topic_totals = vec![0u64; k];
        let mut doc_topic = Vec::with_capacity(docs.len());
        let mut assignments = Vec::with_capacity(docs.len());
        for doc in &docs {
            let mut counts = vec![0u32; k];
            let z: Vec<u16> = doc
                .iter()
                .map(|&w| {
                    assert!((w as usize) < v, "word id out of range");
                    let t = rng.random_range(0..k);
                    counts[t] += 1;
                    topic_word[w as usize * k + t] += 1;
                    topic_totals[t] += 1;
                    t as u16
                })
                .collect();
            doc_topic.push(counts);
            assignments.push(z);
        }
        Ok(Self {
            model: LdaModel {
                num_topics: k,
                alpha: config.alpha(),
                beta: config.beta,
                seed: config.seed,
                iterations: 0,
                vocab_index: index_vocab(&vocab),
                vocab,
                topic_word,
                topic_totals,
                doc_topic,
                docs,
                assignments,
            },
            rng,
            weights: vec![0.0; k],
        })
    }

    pub fn model(&self) -> &LdaModel {
        &self.model
    }

    pub fn into_model(self) -> LdaModel {
        self.model
    }

    /// One full pass resampling every token's topic.
    pub fn sweep(&mut self) {
        let m = &mut self.model;
        let k = m.num_topics;
        let alpha = m.alpha;
        let beta = m.beta;
        let vbeta = m.vocab.len() as f64 * beta;
        for d in 0..m.docs.len() {
            let doc_counts = &mut m.doc_topic[d];
            for i in 0..m.docs[d].len() {
                let w = m.docs[d][i] as usize;
                let old = m.assignments[d][i] as usize;
                let row = &mut m.topic_word[w * k..(w + 1) * k];
                doc_counts[old] -= 1;
                row[old] -= 1;
                m.topic_totals[old] -= 1;
                for t in 0..k {
                    self.weights[t] = (doc_counts[t] as f64 + alpha) * (row[t] as f64 + beta)
                        / (m.topic_totals[t] as f64 + vbeta);
                }
                let new = sample_index(&mut self.rng, &self.weights);
                doc_counts[new] += 1;
                row[new] += 1;
                m.topic_totals[new] += 1;
                m.assignments[d][i] = new as u16;
            }
        }
        m.iterations += 1;
    }
}

/// Fits LDA on token lists. Documents are kept in place (indices preserved)
/// even when they become empty after vocabulary pruning.
pub fn fit_lda<S: AsRef<str>>(docs: &[Vec<S>], config: &LdaConfig) -> Result<LdaModel, TopicError> {
    fit_lda_with(docs, config, |_, _| {})
}

/// As [`fit_lda`], calling `after_sweep(model, sweep_number)` after every sweep.
pub fn fit_lda_with<S, F>(docs: &[Vec<S>], config: &LdaConfig, mut after_sweep: F) -> Result<LdaModel, TopicError>
where
    S: AsRef<str>,
    F: FnMut(&LdaModel, usize),
{
    let vocab = build_vocabulary(docs, config.min_count.max(1));
    let index = index_vocab(&vocab);
    let ids: Vec<Vec<u32>> = docs
        .iter()
        .map(|doc| doc.iter().filter_map(|t| index.get(t.as_ref()).copied()).collect())
        .collect();
    let mut sampler = GibbsSampler::new(ids, vocab, config)?;
    for s in 1..=config.iterations {
        sampler.sweep();
        after_sweep(sampler.model(), s);
    }
    Ok(sampler.into_model())
}
