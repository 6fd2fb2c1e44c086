use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trolllens::corpus::Tweet;
use trolllens::features::{aggregate_profile_user, profile_schema, tweet_profile_vector, PROFILE_TWEET_DIM};
use trolllens::model::{cross_validate, feature_importance, LogRegModel, Precomputed, Predictor, TrainConfig};

fn separable(n: usize, positives: usize, seed: u64) -> (Array2<f64>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = vec![1u8; positives];
    y.extend(vec![0u8; n - positives]);
    let x = Array2::from_shape_fn((n, 5), |(i, j)| {
        let noise: f64 = rng.random_range(-1.0..1.0);
        if j == 0 {
            if y[i] == 1 { 3.0 + noise } else { -3.0 + noise }
        } else {
            noise
        }
    });
    (x, y)
}

#[test]
fn separable_data_scores_high() {
    let (x, y) = separable(400, 200, 1);
    let r = cross_validate("lr", &Predictor::LogisticRegression(TrainConfig::default()), &Precomputed(&x), &y, 5, 1).unwrap();
    assert!(r.mean.f1_macro >= 0.95, "{}", r.mean.f1_macro);
}

#[test]
fn imbalanced_separable_data_needs_weaker_penalty() {
    let (x, y) = separable(400, 40, 1);
    let strong = cross_validate("lr", &Predictor::LogisticRegression(TrainConfig::default()), &Precomputed(&x), &y, 5, 1).unwrap();
    let weak = TrainConfig {
        l2_lambda: 1.0 / 400.0,
        ..TrainConfig::default()
    };
    let weak = cross_validate("lr", &Predictor::LogisticRegression(weak), &Precomputed(&x), &y, 5, 1).unwrap();
    assert!(weak.mean.f1_macro >= 0.95, "{}", weak.mean.f1_macro);
    assert!(strong.mean.f1_macro < weak.mean.f1_macro);
}

#[test]
fn shuffled_labels_score_at_chance() {
    let (x, mut y) = separable(400, 200, 2);
    y.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
    let config = TrainConfig {
        l2_lambda: 0.01,
        ..TrainConfig::default()
    };
    let r = cross_validate("lr", &Predictor::LogisticRegression(config), &Precomputed(&x), &y, 5, 1).unwrap();
    assert!((0.3..=0.6).contains(&r.mean.f1_macro), "{}", r.mean.f1_macro);
}

#[test]
fn separating_stopword_ranks_first() {
    let content = ["vote", "rally", "wall", "jobs", "border", "taxes", "debate", "polls"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for a in 0..60 {
        let troll = a < 20;
        let tweets: Vec<Vec<f64>> = (0..10)
            .map(|t| {
                let mut words: Vec<&str> = (0..4).map(|_| content[rng.random_range(0..content.len())]).collect();
                if troll {
                    words.push("very");
                } else {
                    words.push(content[rng.random_range(0..content.len())]);
                }
                tweet_profile_vector(&Tweet {
                    id: format!("{a}-{t}"),
                    account_id: a.to_string(),
                    text: words.join(" "),
                    timestamp: None,
                    annotations: None,
                })
            })
            .collect();
        rows.extend(aggregate_profile_user("u", tweets.iter().map(Vec::as_slice), PROFILE_TWEET_DIM).unwrap());
        y.push(u8::from(troll));
    }
    let x = Array2::from_shape_vec((60, 2 * PROFILE_TWEET_DIM), rows).unwrap();
    let model = LogRegModel::fit_standardized(x.view(), &y, &TrainConfig::default(), "").unwrap();
    let ranked = feature_importance(&model, &profile_schema(), 3, &["stopwords"]).unwrap();
    let (name, weight) = &ranked[0].1[0];
    assert_eq!(name, "mean:stop:very");
    assert!(*weight > 0.0);
}
