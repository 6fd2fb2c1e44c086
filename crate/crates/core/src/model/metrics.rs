use serde::{Deserialize, Serialize};

use super::ModelError;

/// Binary confusion counts with troll (1) as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn from_labels(y_true: &[u8], y_pred: &[u8]) -> Result<Self, ModelError> {
        if y_true.len() != y_pred.len() {
            return Err(ModelError::LengthMismatch {
                left: y_true.len(),
                right: y_pred.len(),
            });
        }
        let mut c = Confusion::default();
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t != 0, p != 0) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fn_ += 1,
            }
        }
        Ok(c)
    }

    pub fn add(&mut self, other: Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }

    /// Macro precision, recall and F1 over the two classes. 0/0 counts as 0.
    pub fn macro_metrics(&self) -> Metrics {
        let ratio = |a: usize, b: usize| if a + b == 0 { 0.0 } else { a as f64 / (a + b) as f64 };
        let f1 = |p: f64, r: f64| if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        let (p1, r1) = (ratio(self.tp, self.fp), ratio(self.tp, self.fn_));
        let (p0, r0) = (ratio(self.tn, self.fn_), ratio(self.tn, self.fp));
        Metrics {
            precision_macro: (p0 + p1) / 2.0,
            recall_macro: (r0 + r1) / 2.0,
            f1_macro: (f1(p0, r0) + f1(p1, r1)) / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub f1_macro: f64,
}

/// Macro-averaged precision, recall and F1.
pub fn evaluate(y_true: &[u8], y_pred: &[u8]) -> Result<Metrics, ModelError> {
    Ok(Confusion::from_labels(y_true, y_pred)?.macro_metrics())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imbalanced(n: usize, positives: usize) -> Vec<u8> {
        (0..n).map(|i| u8::from(i < positives)).collect()
    }

    #[test]
    fn majority_on_two_percent() {
        let y = imbalanced(1000, 20);
        let m = evaluate(&y, &vec![0; 1000]).unwrap();
        let closed_form = 0.5 * (0.0 + 2.0 * 0.98 / 1.98);
        assert!((m.f1_macro - closed_form).abs() < 1e-12);
        assert!((m.precision_macro - 0.49).abs() < 1e-12);
        assert_eq!(m.recall_macro, 0.5);
    }

    #[test]
    fn expected_coin_flip_closed_form() {
        // With a fair coin, the expected confusion over n items at base rate p
        // is tp = n p / 2, fp = n (1 - p) / 2, and so on.
        let c = Confusion { tp: 10, fp: 490, tn: 490, fn_: 10 };
        let m = c.macro_metrics();
        let pos = 2.0 * 0.02 * 0.5 / 0.52;
        let neg = 2.0 * 0.98 * 0.5 / 1.48;
        assert!((m.f1_macro - 0.5 * (pos + neg)).abs() < 1e-12);
        assert!((m.f1_macro - 0.350).abs() < 0.001);
    }

    #[test]
    fn perfect_and_mismatch() {
        let y = [0, 1, 1, 0];
        let m = evaluate(&y, &y).unwrap();
        assert_eq!((m.precision_macro, m.recall_macro, m.f1_macro), (1.0, 1.0, 1.0));
        assert!(matches!(evaluate(&y, &y[..3]), Err(ModelError::LengthMismatch { .. })));
    }

    proptest! {
        #[test]
        fn symmetric_under_relabeling(pairs in proptest::collection::vec((0u8..2, 0u8..2), 1..60)) {
            let (t, p): (Vec<u8>, Vec<u8>) = pairs.into_iter().unzip();
            let flip = |v: &[u8]| v.iter().map(|x| 1 - x).collect::<Vec<_>>();
            let a = evaluate(&t, &p).unwrap();
            let b = evaluate(&flip(&t), &flip(&p)).unwrap();
            prop_assert!((a.f1_macro - b.f1_macro).abs() < 1e-12);
            prop_assert!((a.precision_macro - b.precision_macro).abs() < 1e-12);
            for x in [a.f1_macro, a.precision_macro, a.recall_macro] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }
    }
}
