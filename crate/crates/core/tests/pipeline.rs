use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use trolllens::corpus::write_conllu;
use trolllens::pipeline::{stages, Method, PipelineError, RunConfig};
use trolllens::synthetic::{generate, SyntheticConfig};

fn write_inputs(dir: &Path) -> RunConfig {
    let corpus = generate(&SyntheticConfig {
        accounts: 90,
        troll_fraction: 0.1,
        tweets_per_account: 20,
        ..Default::default()
    });
    let corpus_path = dir.join("in.jsonl");
    corpus.write_jsonl(BufWriter::new(File::create(&corpus_path).unwrap())).unwrap();
    let conllu_path = dir.join("in.conllu");
    let annotations = corpus
        .tweets()
        .iter()
        .filter_map(|t| t.annotations.clone().map(|a| (t.id.clone(), a)))
        .collect();
    write_conllu(&annotations, BufWriter::new(File::create(&conllu_path).unwrap())).unwrap();
    RunConfig {
        corpus: Some(corpus_path),
        conllu: Some(conllu_path),
        out: dir.join("out"),
        lda_iterations: 60,
        cv_k: 3,
        ..RunConfig::default()
    }
}

#[test]
fn full_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_inputs(dir.path());
    let report = stages::run_all(&config).unwrap();
    for name in ["Random Selection", "Majority Class", "Network Features", "Bag-of-Words", "All Features"] {
        assert!(report.row(name).is_some(), "{name}");
    }
    assert!(report.row("All Theme-based").unwrap().minus.is_some());
    for file in [
        stages::CORPUS_FILE,
        stages::ANNOTATIONS_FILE,
        stages::TOPICS_FILE,
        stages::THEMES_FILE,
        stages::FEATURES_THEME_FILE,
        stages::FEATURES_GLOBAL_FILE,
        stages::FEATURES_PROFILE_FILE,
        stages::REPORT_FILE,
        stages::REPORT_TEXT_FILE,
    ] {
        assert!(config.out.join(file).exists(), "{file}");
    }

    let summary = stages::train(&config, Method::All).unwrap();
    assert!(summary.dims > 0);
    assert!(config.out.join(stages::MODEL_FILE).exists());
    let analysis = stages::analyze(&config, None, ("fear", "joy")).unwrap();
    assert!(!analysis.significance.is_empty());
    assert!(analysis.flipflop_user.unwrap().starts_with("troll"));
    assert!(config.out.join(stages::FLIPFLOP_SVG).exists());
}

#[test]
fn missing_upstream_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_inputs(dir.path());
    assert!(matches!(stages::topics_fit(&config), Err(PipelineError::MissingArtifact(_))));
    stages::ingest(&config).unwrap();
    assert!(matches!(stages::features_build(&config), Err(PipelineError::MissingArtifact(_))));
}

#[test]
fn stale_topics_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = write_inputs(dir.path());
    stages::ingest(&config).unwrap();
    stages::topics_fit(&config).unwrap();
    config.lda_k = 5;
    assert!(matches!(stages::features_build(&config), Err(PipelineError::HashMismatch { .. })));
    stages::topics_fit(&config).unwrap();
    stages::features_build(&config).unwrap();
    config.l2_lambda = 0.5;
    stages::report(&config).unwrap();
}

#[test]
fn per_fold_topics_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = write_inputs(dir.path());
    config.fit_on_train_only = true;
    config.lda_iterations = 30;
    stages::ingest(&config).unwrap();
    stages::topics_fit(&config).unwrap();
    stages::features_build(&config).unwrap();
    let r = stages::evaluate(&config, Method::All).unwrap();
    assert_eq!(r.folds.len(), 3);
    assert!((0.0..=1.0).contains(&r.mean.f1_macro));
}
