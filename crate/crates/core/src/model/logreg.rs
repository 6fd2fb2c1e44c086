use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub l2_lambda: f64,
    pub learning_rate: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Recorded for provenance; initialization is all-zero so the result does not depend on it.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            l2_lambda: 1.0,
            learning_rate: 0.1,
            max_iter: 1000,
            tol: 1e-6,
            seed: 0,
        }
    }
}

/// Per-feature centering and scaling fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: ArrayView2<f64>) -> Self {
        let n = x.nrows().max(1) as f64;
        let mean: Vec<f64> = x.sum_axis(Axis(0)).iter().map(|s| s / n).collect();
        let std = x
            .axis_iter(Axis(1))
            .zip(&mean)
            .map(|(col, m)| (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt())
            .collect();
        Self { mean, std }
    }

    /// Constant features (std 0) map to 0.
    pub fn transform(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut out = x.as_standard_layout().into_owned();
        for mut row in out.rows_mut() {
            self.transform_row_in_place(row.as_slice_mut().expect("row-major"));
        }
        out
    }

    fn transform_row_in_place(&self, row: &mut [f64]) {
        for ((v, m), s) in row.iter_mut().zip(&self.mean).zip(&self.std) {
            *v = if *s > 0.0 { (*v - m) / s } else { 0.0 };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub iterations: usize,
    pub final_loss: f64,
    pub loss_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_lambda: f64,
    pub schema_hash: String,
    /// Applied to raw inputs before the linear score when present.
    pub standardizer: Option<Standardizer>,
    pub meta: TrainingMeta,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean cross-entropy plus `(l2 / 2)·‖w‖²`, with its gradient in `w` and `b`.
pub fn loss_and_gradient(
    weights: ArrayView1<f64>,
    bias: f64,
    x: ArrayView2<f64>,
    y: &[u8],
    l2_lambda: f64,
) -> (f64, Array1<f64>, f64) {
    let n = x.nrows() as f64;
    let scores = x.dot(&weights) + bias;
    let mut residual = Array1::zeros(x.nrows());
    let mut loss = 0.0;
    for (i, &z) in scores.iter().enumerate() {
        let t = y[i] as f64;
        loss += softplus(z) - t * z;
        residual[i] = sigmoid(z) - t;
    }
    loss = loss / n + 0.5 * l2_lambda * weights.dot(&weights);
    let grad_w = x.t().dot(&residual) / n + &weights * l2_lambda;
    let grad_b = residual.sum() / n;
    (loss, grad_w, grad_b)
}

/// Full-batch gradient descent from zero weights. The step is halved
/// whenever a step would increase the loss, so the recorded loss sequence
/// never increases.
pub fn train(x: ArrayView2<f64>, y: &[u8], config: &TrainConfig) -> Result<LogRegModel, ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::LengthMismatch {
            left: x.nrows(),
            right: y.len(),
        });
    }
    let positives = y.iter().filter(|&&t| t != 0).count();
    if positives == 0 || positives == y.len() {
        return Err(ModelError::DegenerateLabels);
    }
    if let Some(((row, col), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(ModelError::NonFiniteFeature { row, col });
    }

    let mut w = Array1::<f64>::zeros(x.ncols());
    let mut b = 0.0;
    let mut step = config.learning_rate;
    let (mut loss, mut gw, mut gb) = loss_and_gradient(w.view(), b, x, y, config.l2_lambda);
    let mut history = vec![loss];
    let mut iterations = 0;
    while iterations < config.max_iter {
        let grad_norm = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()));
        if grad_norm < config.tol {
            break;
        }
        iterations += 1;
        loop {
            let w_new = &w - &(&gw * step);
            let b_new = b - step * gb;
            let (l_new, gw_new, gb_new) = loss_and_gradient(w_new.view(), b_new, x, y, config.l2_lambda);
            if l_new <= loss || step < 1e-12 {
                if l_new <= loss {
                    w = w_new;
                    b = b_new;
                    loss = l_new;
                    gw = gw_new;
                    gb = gb_new;
                }
                break;
            }
            step *= 0.5;
        }
        history.push(loss);
        if step < 1e-12 {
            break;
        }
    }

    Ok(LogRegModel {
        weights: w.to_vec(),
        bias: b,
        l2_lambda: config.l2_lambda,
        schema_hash: String::new(),
        standardizer: None,
        meta: TrainingMeta {
            seed: config.seed,
            iterations,
            final_loss: loss,
            loss_history: history,
        },
    })
}

/// `sigmoid(w·x + b)` on one raw input vector.
pub fn predict_proba(model: &LogRegModel, x: &[f64]) -> Result<f64, ModelError> {
    if x.len() != model.weights.len() {
        return Err(ModelError::DimensionMismatch {
            expected: model.weights.len(),
            found: x.len(),
        });
    }
    let score = match &model.standardizer {
        Some(s) => {
            let mut row = x.to_vec();
            s.transform_row_in_place(&mut row);
            dot(&model.weights, &row)
        }
        None => dot(&model.weights, x),
    };
    Ok(sigmoid(score + model.bias))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LogRegModel {
    /// Standardizes `x` on itself, trains, and keeps the standardizer.
    pub fn fit_standardized(
        x: ArrayView2<f64>,
        y: &[u8],
        config: &TrainConfig,
        schema_hash: &str,
    ) -> Result<Self, ModelError> {
        let standardizer = Standardizer::fit(x);
        let xs = standardizer.transform(x);
        let mut model = train(xs.view(), y, config)?;
        model.standardizer = Some(standardizer);
        model.schema_hash = schema_hash.to_owned();
        Ok(model)
    }

    pub fn predict_proba_batch(&self, x: ArrayView2<f64>) -> Result<Vec<f64>, ModelError> {
        x.rows()
            .into_iter()
            .map(|row| predict_proba(self, &row.to_vec()))
            .collect()
    }

    /// Hard labels at threshold 0.5.
    pub fn classify(&self, x: ArrayView2<f64>) -> Result<Vec<u8>, ModelError> {
        Ok(self
            .predict_proba_batch(x)?
            .into_iter()
            .map(|p| u8::from(p >= 0.5))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn separable() -> (Array2<f64>, Vec<u8>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..50 {
            rows.push(-1.0);
            y.push(0);
            rows.push(1.0);
            y.push(1);
        }
        (Array2::from_shape_vec((100, 1), rows).unwrap(), y)
    }

    #[test]
    fn separable_one_dimension() {
        let (x, y) = separable();
        let cfg = TrainConfig { l2_lambda: 0.0, ..Default::default() };
        let m = train(x.view(), &y, &cfg).unwrap();
        assert!(m.weights[0] > 0.0);
        assert_eq!(m.classify(x.view()).unwrap(), y);
    }

    #[test]
    fn heavy_regularization_gives_base_rate() {
        let raw = array![[1.0], [2.0], [3.0], [4.0]];
        let x = Standardizer::fit(raw.view()).transform(raw.view());
        let y = [0, 0, 0, 1];
        let mut previous = f64::INFINITY;
        for l2_lambda in [1.0, 10.0, 100.0, 1000.0] {
            let cfg = TrainConfig { l2_lambda, learning_rate: 1.0 / l2_lambda, max_iter: 50_000, ..Default::default() };
            let m = train(x.view(), &y, &cfg).unwrap();
            assert!(m.weights[0].abs() < previous);
            previous = m.weights[0].abs();
        }
        assert!(previous < 1e-3);
        let cfg = TrainConfig { l2_lambda: 1000.0, learning_rate: 1e-3, max_iter: 50_000, ..Default::default() };
        let m = train(x.view(), &y, &cfg).unwrap();
        for row in x.rows() {
            let p = predict_proba(&m, &row.to_vec()).unwrap();
            assert!((p - 0.25).abs() < 1e-3, "{p}");
        }
    }

    #[test]
    fn closed_form_prediction() {
        let mut m = train(array![[0.0], [1.0]].view(), &[0, 1], &TrainConfig::default()).unwrap();
        m.weights = vec![0.0, 0.0];
        m.bias = 0.0;
        assert_eq!(predict_proba(&m, &[3.0, -7.0]).unwrap(), 0.5);
        m.bias = 10.0;
        assert!(predict_proba(&m, &[1.0, 1.0]).unwrap() > 0.9999);
        assert!(matches!(predict_proba(&m, &[1.0]), Err(ModelError::DimensionMismatch { .. })));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            m.weights = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
            m.bias = rng.random_range(-1.0..1.0);
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-2.0..2.0)).collect();
            let z = m.weights[0] * x[0] + m.weights[1] * x[1] + m.bias;
            let expected = 1.0 / (1.0 + (-z).exp());
            assert!((predict_proba(&m, &x).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn error_paths() {
        let x = array![[1.0], [2.0]];
        assert_eq!(train(x.view(), &[1, 1], &TrainConfig::default()), Err(ModelError::DegenerateLabels));
        let bad = array![[1.0], [f64::NAN]];
        assert_eq!(
            train(bad.view(), &[0, 1], &TrainConfig::default()),
            Err(ModelError::NonFiniteFeature { row: 1, col: 0 })
        );
    }

    #[test]
    fn loss_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw = Array2::from_shape_fn((80, 6), |_| rng.random_range(-5.0..5.0));
        let y: Vec<u8> = raw.rows().into_iter().map(|r| u8::from(r[0] + 0.5 * r[1] > 0.0)).collect();
        let xs = Standardizer::fit(raw.view()).transform(raw.view());
        let cfg = TrainConfig { learning_rate: 1e-2, l2_lambda: 0.1, max_iter: 300, ..Default::default() };
        let m = train(xs.view(), &y, &cfg).unwrap();
        for pair in m.meta.loss_history.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
    }

    #[test]
    fn standardizer_constant_column() {
        let x = array![[1.0, 5.0], [3.0, 5.0]];
        let s = Standardizer::fit(x.view());
        assert_eq!(s.transform(x.view()), array![[-1.0, 0.0], [1.0, 0.0]]);
    }
}
