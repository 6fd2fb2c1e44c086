use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::logreg::{LogRegModel, TrainConfig};
use super::metrics::{Confusion, Metrics};
use super::ModelError;

/// `k` disjoint folds, stratified by class. Within each class the indices are
/// shuffled with `seed` and dealt round-robin, continuing where the previous
/// class stopped so fold sizes also stay balanced.
pub fn stratified_kfold(y: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, ModelError> {
    assert!(k >= 2, "k-fold needs k >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in [1u8, 0u8] {
        let mut members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if members.len() < k {
            return Err(ModelError::TooFewMinority {
                class,
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        for idx in members {
            folds[next].push(idx);
            next = (next + 1) % k;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Builds train and held-out matrices from row indices alone, so feature
/// fitting (vocabularies, standardization) never sees held-out labels.
pub trait FoldFeatures: Sync {
    fn build(&self, train: &[usize], test: &[usize]) -> Result<(Array2<f64>, Array2<f64>), ModelError>;
}

/// Features that need no per-fold fitting.
pub struct Precomputed<'a>(pub &'a Array2<f64>);

impl FoldFeatures for Precomputed<'_> {
    fn build(&self, train: &[usize], test: &[usize]) -> Result<(Array2<f64>, Array2<f64>), ModelError> {
        Ok((self.0.select(Axis(0), train), self.0.select(Axis(0), test)))
    }
}

/// How held-out predictions are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Predictor {
    /// Standardize on the training fold, then logistic regression.
    LogisticRegression(TrainConfig),
    /// The training fold's most frequent class.
    Majority,
    /// A fair coin per account.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub metrics: Metrics,
    pub confusion: Confusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    pub folds: Vec<FoldMetrics>,
    /// Arithmetic mean of the per-fold metrics.
    pub mean: Metrics,
    pub confusion: Confusion,
}

impl EvalReport {
    fn from_folds(method: &str, folds: Vec<FoldMetrics>) -> Self {
        let n = folds.len() as f64;
        let mut mean = Metrics::default();
        let mut confusion = Confusion::default();
        for f in &folds {
            mean.precision_macro += f.metrics.precision_macro / n;
            mean.recall_macro += f.metrics.recall_macro / n;
            mean.f1_macro += f.metrics.f1_macro / n;
            confusion.add(f.confusion);
        }
        Self {
            method: method.to_owned(),
            folds,
            mean,
            confusion,
        }
    }
}

fn predict_fold(
    predictor: &Predictor,
    features: &dyn FoldFeatures,
    y: &[u8],
    train_idx: &[usize],
    test_idx: &[usize],
    fold: usize,
) -> Result<Vec<u8>, ModelError> {
    let y_train: Vec<u8> = train_idx.iter().map(|&i| y[i]).collect();
    match predictor {
        Predictor::LogisticRegression(config) => {
            let (x_train, x_test) = features.build(train_idx, test_idx)?;
            let model = LogRegModel::fit_standardized(x_train.view(), &y_train, config, "")?;
            model.classify(x_test.view())
        }
        Predictor::Majority => {
            let positives = y_train.iter().filter(|&&t| t == 1).count();
            let label = u8::from(2 * positives > y_train.len());
            Ok(vec![label; test_idx.len()])
        }
        Predictor::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(fold as u64));
            Ok((0..test_idx.len()).map(|_| u8::from(rng.random_bool(0.5))).collect())
        }
    }
}

/// Trains on k-1 folds and scores the held-out fold, for every fold. Folds
/// run in parallel; results are collected in fold order.
pub fn cross_validate(
    method: &str,
    predictor: &Predictor,
    features: &dyn FoldFeatures,
    y: &[u8],
    k: usize,
    seed: u64,
) -> Result<EvalReport, ModelError> {
    let folds = stratified_kfold(y, k, seed)?;
    let results: Vec<FoldMetrics> = (0..k)
        .into_par_iter()
        .map(|f| {
            let test_idx = &folds[f];
            let train_idx: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let pred = predict_fold(predictor, features, y, &train_idx, test_idx, f)?;
            let truth: Vec<u8> = test_idx.iter().map(|&i| y[i]).collect();
            let confusion = Confusion::from_labels(&truth, &pred)?;
            Ok(FoldMetrics {
                fold: f,
                metrics: confusion.macro_metrics(),
                confusion,
            })
        })
        .collect::<Result<_, ModelError>>()?;
    Ok(EvalReport::from_folds(method, results))
}
