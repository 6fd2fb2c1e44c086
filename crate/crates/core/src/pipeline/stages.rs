//! On-disk stages. Each reads the artifacts of earlier stages from the
//! output directory, checks their config hash, and writes its own.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::matrices::{account_documents, account_tweets, lda_documents, tweet_vectors, AccountFeatures, FoldThemes};
use super::report::{eval_report_csv, evaluate_method, feature_set, method_schema, run_report, Method, Report, ReportInputs};
use super::{sha256_hex, PipelineError, RunConfig};
use crate::analysis::{
    emotion_profile_svg, flipflop_svg, flipflop_trace, significance_table, theme_emotion_profile, FlipFlopPoint,
    SignificanceRow, ThemeEmotions, UserTweets,
};
use crate::corpus::{corpus_stats, load_conllu, load_corpus, write_conllu, Corpus, CorpusFormat, CorpusStats, Label};
use crate::features::FeatureSchema;
use crate::lexicons::{Family, LexiconSet};
use crate::model::{feature_importance, EvalReport, FoldFeatures, LogRegModel};
use crate::topics::{LdaModel, Theme};

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const ANNOTATIONS_FILE: &str = "annotations.conllu";
pub const TOPICS_FILE: &str = "topics.json";
pub const THEMES_FILE: &str = "themes.csv";
pub const FEATURES_THEME_FILE: &str = "features_theme.csv";
pub const FEATURES_GLOBAL_FILE: &str = "features_theme_global.csv";
pub const FEATURES_PROFILE_FILE: &str = "features_profile.csv";
pub const MODEL_FILE: &str = "model.json";
pub const IMPORTANCE_FILE: &str = "importance.csv";
pub const REPORT_FILE: &str = "report.csv";
pub const REPORT_TEXT_FILE: &str = "report.txt";
pub const SIGNIFICANCE_FILE: &str = "significance.csv";
pub const SIGNIFICANCE_TEXT_FILE: &str = "significance.txt";
pub const EMOTION_PROFILE_FILE: &str = "emotion_profile.csv";
pub const EMOTION_PROFILE_SVG: &str = "emotion_profile.svg";
pub const FLIPFLOP_FILE: &str = "flipflop.csv";
pub const FLIPFLOP_SVG: &str = "flipflop.svg";

fn schema_path(csv: &Path) -> PathBuf {
    csv.with_extension("schema.json")
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|e| PipelineError::io(path, e))
}

fn read(path: &Path) -> Result<Vec<u8>, PipelineError> {
    if !path.exists() {
        return Err(PipelineError::MissingArtifact(path.to_owned()));
    }
    fs::read(path).map_err(|e| PipelineError::io(path, e))
}

fn ensure_out(config: &RunConfig) -> Result<(), PipelineError> {
    fs::create_dir_all(&config.out).map_err(|e| PipelineError::io(&config.out, e))
}

fn check_hash(artifact: &Path, expected: &str, found: &str) -> Result<(), PipelineError> {
    if expected != found {
        return Err(PipelineError::HashMismatch {
            artifact: artifact.to_owned(),
            expected: expected.to_owned(),
            found: found.to_owned(),
        });
    }
    Ok(())
}

/// Validates the corpus and copies it, normalized, into the output directory.
/// Any annotations from an earlier run are removed.
pub fn ingest(config: &RunConfig) -> Result<CorpusStats, PipelineError> {
    config.validate()?;
    config.validate_paths()?;
    let path = config
        .corpus
        .as_ref()
        .ok_or_else(|| PipelineError::Config("ingest needs `corpus`".into()))?;
    let corpus = load_corpus(path, CorpusFormat::Jsonl)?;
    ensure_out(config)?;
    let target = config.out.join(CORPUS_FILE);
    let file = fs::File::create(&target).map_err(|e| PipelineError::io(&target, e))?;
    corpus
        .write_jsonl(BufWriter::new(file))
        .map_err(|e| PipelineError::io(&target, e))?;
    let annotations = config.out.join(ANNOTATIONS_FILE);
    if annotations.exists() {
        fs::remove_file(&annotations).map_err(|e| PipelineError::io(&annotations, e))?;
    }
    Ok(corpus_stats(&corpus))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotateSummary {
    pub annotated: usize,
    pub total: usize,
    /// Tweet ids in the CoNLL-U file that match no corpus tweet.
    pub unmatched: Vec<String>,
}

/// Attaches tagger output (CoNLL-U) to the ingested corpus.
pub fn annotate(config: &RunConfig) -> Result<AnnotateSummary, PipelineError> {
    config.validate_paths()?;
    let path = config
        .conllu
        .as_ref()
        .ok_or_else(|| PipelineError::Config("annotate needs `conllu`".into()))?;
    let (mut corpus, _) = load_stage_corpus(config, false)?;
    let annotations = load_conllu(path)?;
    let matched: BTreeMap<_, _> = annotations
        .iter()
        .filter(|(id, _)| corpus.tweet(id).is_some())
        .map(|(id, t)| (id.clone(), t.clone()))
        .collect();
    let unmatched = corpus.attach_annotations(annotations);
    let target = config.out.join(ANNOTATIONS_FILE);
    let file = fs::File::create(&target).map_err(|e| PipelineError::io(&target, e))?;
    write_conllu(&matched, BufWriter::new(file)).map_err(|e| PipelineError::io(&target, e))?;
    Ok(AnnotateSummary {
        annotated: corpus.annotated_tweet_count(),
        total: corpus.tweets().len(),
        unmatched,
    })
}

/// The ingested corpus with any attached annotations, and its content hash.
pub fn load_stage_corpus(config: &RunConfig, with_annotations: bool) -> Result<(Corpus, String), PipelineError> {
    let path = config.out.join(CORPUS_FILE);
    let bytes = read(&path)?;
    let mut corpus = load_corpus(&path, CorpusFormat::Jsonl)?;
    let ann_path = config.out.join(ANNOTATIONS_FILE);
    let ann_bytes = if with_annotations && ann_path.exists() {
        let bytes = read(&ann_path)?;
        corpus.attach_annotations(load_conllu(&ann_path)?);
        bytes
    } else {
        Vec::new()
    };
    Ok((corpus, sha256_hex(&[&bytes, &ann_bytes])))
}

#[derive(Serialize, Deserialize)]
struct TopicsArtifact {
    config_hash: String,
    model: LdaModel,
}

/// Fits LDA on every tweet and records each tweet's theme.
pub fn topics_fit(config: &RunConfig) -> Result<LdaModel, PipelineError> {
    config.validate()?;
    let (corpus, data_hash) = load_stage_corpus(config, true)?;
    let docs = lda_documents(&corpus);
    let (model, themes) = super::fit_themes(&docs, &config.lda_config())?;
    let artifact = TopicsArtifact {
        config_hash: config.topics_hash(&data_hash),
        model,
    };
    let json = serde_json::to_string(&artifact).expect("model serializes");
    write(&config.out.join(TOPICS_FILE), json)?;
    let mut csv = String::from("tweet_id,account_id,theme\n");
    for (tweet, theme) in corpus.tweets().iter().zip(&themes) {
        let theme = theme.map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{theme}", tweet.id, tweet.account_id);
    }
    write(&config.out.join(THEMES_FILE), csv)?;
    Ok(artifact.model)
}

fn read_topics(config: &RunConfig) -> Result<TopicsArtifact, PipelineError> {
    let path = config.out.join(TOPICS_FILE);
    let bytes = read(&path)?;
    serde_json::from_slice(&bytes).map_err(|e| PipelineError::Artifact {
        path,
        message: e.to_string(),
    })
}

/// The fitted topic model, without hash checks.
pub fn load_topics(config: &RunConfig) -> Result<LdaModel, PipelineError> {
    Ok(read_topics(config)?.model)
}

/// Corpus, topic model and training themes, checked against the current configuration.
struct ThemedCorpus {
    corpus: Corpus,
    model: LdaModel,
    themes: Vec<Theme>,
    topics_hash: String,
}

fn load_themed(config: &RunConfig) -> Result<ThemedCorpus, PipelineError> {
    let (corpus, data_hash) = load_stage_corpus(config, true)?;
    let artifact = read_topics(config)?;
    let expected = config.topics_hash(&data_hash);
    check_hash(&config.out.join(TOPICS_FILE), &expected, &artifact.config_hash)?;
    let model = artifact.model;
    let themes = (0..corpus.tweets().len()).map(|d| model.training_theme(d)).collect();
    Ok(ThemedCorpus {
        corpus,
        model,
        themes,
        topics_hash: expected,
    })
}

fn load_lexicons(config: &RunConfig) -> Result<(LexiconSet, String), PipelineError> {
    match &config.lexicon_dir {
        None => Ok((LexiconSet::builtin(), "builtin".to_owned())),
        Some(dir) => {
            let set = LexiconSet::load_dir(dir)?;
            let mut entries: Vec<PathBuf> = fs::read_dir(dir)
                .map_err(|e| PipelineError::io(dir, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
                .collect();
            entries.sort();
            let mut parts = Vec::new();
            for p in &entries {
                parts.push(p.file_name().unwrap().to_string_lossy().into_owned().into_bytes());
                parts.push(fs::read(p).map_err(|e| PipelineError::io(p, e))?);
            }
            let refs: Vec<&[u8]> = parts.iter().map(Vec::as_slice).collect();
            Ok((set, sha256_hex(&refs)))
        }
    }
}

/// Checks a lexicon directory (or the built-in set) and returns term counts per family.
pub fn lexicons_validate(config: &RunConfig) -> Result<Vec<(Family, usize)>, PipelineError> {
    config.validate_paths()?;
    let (set, _) = load_lexicons(config)?;
    Ok(set.iter().map(|(f, l)| (f, l.term_count())).collect())
}

#[derive(Serialize, Deserialize)]
struct SchemaSidecar {
    config_hash: String,
    rows: usize,
    schema: FeatureSchema,
}

fn write_matrix(path: &Path, corpus: &Corpus, m: &Array2<f64>, schema: &FeatureSchema, hash: &str) -> Result<(), PipelineError> {
    let mut out = String::from("account_id,label");
    for name in schema.names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (account, row) in corpus.accounts().iter().zip(m.rows()) {
        out.push_str(&account.id);
        out.push(',');
        out.push_str(account.label.as_str());
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    write(path, out)?;
    let sidecar = SchemaSidecar {
        config_hash: hash.to_owned(),
        rows: m.nrows(),
        schema: schema.clone(),
    };
    write(&schema_path(path), serde_json::to_string_pretty(&sidecar).unwrap())
}

fn read_matrix(path: &Path, corpus: &Corpus, expected_hash: &str) -> Result<(Array2<f64>, FeatureSchema), PipelineError> {
    let sidecar_path = schema_path(path);
    let sidecar: SchemaSidecar = serde_json::from_slice(&read(&sidecar_path)?).map_err(|e| PipelineError::Artifact {
        path: sidecar_path.clone(),
        message: e.to_string(),
    })?;
    check_hash(&sidecar_path, expected_hash, &sidecar.config_hash)?;
    let text = String::from_utf8(read(path)?).map_err(|e| PipelineError::io(path, e))?;
    let bad = |message: String| PipelineError::Artifact {
        path: path.to_owned(),
        message,
    };
    let dim = sidecar.schema.len();
    let mut values = Vec::with_capacity(sidecar.rows * dim);
    let mut lines = text.lines();
    lines.next();
    let mut rows = 0;
    for (line, account) in lines.zip(corpus.accounts()) {
        let mut fields = line.split(',');
        if fields.next() != Some(account.id.as_str()) {
            return Err(bad(format!("row {} is not account {}", rows + 1, account.id)));
        }
        fields.next();
        let before = values.len();
        for f in fields {
            values.push(f.parse::<f64>().map_err(|e| bad(format!("row {}: {e}", rows + 1)))?);
        }
        if values.len() - before != dim {
            return Err(bad(format!("row {} has {} values, schema has {dim}", rows + 1, values.len() - before)));
        }
        rows += 1;
    }
    if rows != corpus.accounts().len() {
        return Err(bad(format!("{rows} rows for {} accounts", corpus.accounts().len())));
    }
    let m = Array2::from_shape_vec((rows, dim), values).expect("shape checked");
    Ok((m, sidecar.schema))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSummary {
    pub accounts: usize,
    pub theme_dims: usize,
    pub profile_dims: usize,
}

/// Builds the per-account theme-based (per theme and global) and profiling matrices.
pub fn features_build(config: &RunConfig) -> Result<FeatureSummary, PipelineError> {
    config.validate()?;
    config.validate_paths()?;
    let themed = load_themed(config)?;
    let (lexicons, lexicon_hash) = load_lexicons(config)?;
    let hash = config.features_hash(&themed.topics_hash, &lexicon_hash);
    let corpus = &themed.corpus;
    let groups = account_tweets(corpus);
    let vectors = tweet_vectors(corpus, &lexicons);
    let f = AccountFeatures::build(corpus, &groups, &vectors, &themed.themes, themed.model.num_topics())?;
    write_matrix(&config.out.join(FEATURES_THEME_FILE), corpus, &f.themed, &f.themed_schema, &hash)?;
    write_matrix(&config.out.join(FEATURES_GLOBAL_FILE), corpus, &f.global, &f.global_schema, &hash)?;
    write_matrix(&config.out.join(FEATURES_PROFILE_FILE), corpus, &f.profile, &f.profile_schema, &hash)?;
    Ok(FeatureSummary {
        accounts: corpus.accounts().len(),
        theme_dims: f.themed.ncols(),
        profile_dims: f.profile.ncols(),
    })
}

struct Loaded {
    themed: ThemedCorpus,
    features: AccountFeatures,
    features_hash: String,
    lexicons: LexiconSet,
}

fn load_features(config: &RunConfig) -> Result<Loaded, PipelineError> {
    let themed = load_themed(config)?;
    let (lexicons, lexicon_hash) = load_lexicons(config)?;
    let hash = config.features_hash(&themed.topics_hash, &lexicon_hash);
    let corpus = &themed.corpus;
    let (t, ts) = read_matrix(&config.out.join(FEATURES_THEME_FILE), corpus, &hash)?;
    let (g, gs) = read_matrix(&config.out.join(FEATURES_GLOBAL_FILE), corpus, &hash)?;
    let (p, ps) = read_matrix(&config.out.join(FEATURES_PROFILE_FILE), corpus, &hash)?;
    let features = AccountFeatures {
        num_themes: themed.model.num_topics(),
        themed: t,
        themed_schema: ts,
        global: g,
        global_schema: gs,
        profile: p,
        profile_schema: ps,
        network: super::network_features(corpus),
    };
    Ok(Loaded {
        themed,
        features,
        features_hash: hash,
        lexicons,
    })
}

/// Runs `f` with the cross-validation inputs of the loaded artifacts.
fn with_inputs<T>(
    config: &RunConfig,
    loaded: &Loaded,
    f: impl FnOnce(&ReportInputs<'_>) -> Result<T, PipelineError>,
) -> Result<T, PipelineError> {
    let corpus = &loaded.themed.corpus;
    let y = corpus.targets();
    let groups = account_tweets(corpus);
    let bow = if config.use_bow { account_documents(corpus, &groups) } else { Vec::new() };
    if config.fit_on_train_only {
        let docs = lda_documents(corpus);
        let vectors = tweet_vectors(corpus, &loaded.lexicons);
        let fold_themes = FoldThemes::new(&groups, &docs, &vectors.theme, config.lda_config(), config.lda_fold_in_iterations);
        f(&ReportInputs {
            y: &y,
            features: &loaded.features,
            bow_documents: &bow,
            fold_themes: Some(&fold_themes),
        })
    } else {
        f(&ReportInputs {
            y: &y,
            features: &loaded.features,
            bow_documents: &bow,
            fold_themes: None,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelArtifact {
    config_hash: String,
    method: String,
    schema: FeatureSchema,
    model: LogRegModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub method: String,
    pub dims: usize,
    pub final_loss: f64,
    pub iterations: usize,
    /// Top weights per NLI family, when the method includes them.
    pub importance: Vec<(String, Vec<(String, f64)>)>,
}

/// Trains the final model of `method` on every account.
pub fn train(config: &RunConfig, method: Method) -> Result<TrainSummary, PipelineError> {
    config.validate()?;
    let loaded = load_features(config)?;
    let key = method.key();
    let schema = method_schema(method, &loaded.features, config)
        .ok_or_else(|| PipelineError::Config(format!("method {key} has no fixed feature schema to train")))?;
    let y = loaded.themed.corpus.targets();
    let all: Vec<usize> = (0..y.len()).collect();
    let (x, _) = with_inputs(config, &loaded, |inputs| {
        let no_folds = ReportInputs {
            fold_themes: None,
            ..*inputs
        };
        let set = feature_set(method, &no_folds, config).expect("schema implies a feature set");
        Ok(set.build(&all, &[])?)
    })?;
    let model = LogRegModel::fit_standardized(x.view(), &y, &config.train_config(), &schema.hash_hex())?;
    let families: Vec<&str> = ["stopwords", "pos", "deprel"]
        .into_iter()
        .filter(|f| schema.has_family(f))
        .collect();
    let importance = feature_importance(&model, &schema, 10, &families)?;
    let mut csv = String::from("family,rank,dimension,weight\n");
    for (family, ranked) in &importance {
        for (i, (name, w)) in ranked.iter().enumerate() {
            let _ = writeln!(csv, "{family},{},{name},{w}", i + 1);
        }
    }
    write(&config.out.join(IMPORTANCE_FILE), csv)?;
    let summary = TrainSummary {
        method: key.clone(),
        dims: schema.len(),
        final_loss: model.meta.final_loss,
        iterations: model.meta.iterations,
        importance,
    };
    let artifact = ModelArtifact {
        config_hash: config.model_hash(&loaded.features_hash),
        method: key,
        schema,
        model,
    };
    write(&config.out.join(MODEL_FILE), serde_json::to_string(&artifact).unwrap())?;
    Ok(summary)
}

/// Cross-validates one method and writes `eval_<method>.csv`.
pub fn evaluate(config: &RunConfig, method: Method) -> Result<EvalReport, PipelineError> {
    config.validate()?;
    let loaded = load_features(config)?;
    let report = with_inputs(config, &loaded, |inputs| Ok(evaluate_method(method, inputs, config)?))?;
    write(&config.out.join(format!("eval_{}.csv", method.key())), eval_report_csv(&report))?;
    Ok(report)
}

/// Cross-validates every enabled method and writes the comparison table.
pub fn report(config: &RunConfig) -> Result<Report, PipelineError> {
    config.validate()?;
    let loaded = load_features(config)?;
    let report = with_inputs(config, &loaded, |inputs| Ok(run_report(inputs, config)?))?;
    write(&config.out.join(REPORT_FILE), report.to_csv())?;
    write(&config.out.join(REPORT_TEXT_FILE), report.to_text())?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSummary {
    pub significance: Vec<SignificanceRow>,
    pub emotions: Vec<ThemeEmotions>,
    pub flipflop_user: Option<String>,
    pub flipflop: Vec<FlipFlopPoint>,
}

fn theme_labels(model: &LdaModel) -> Vec<String> {
    model
        .topic_top_words(3)
        .into_iter()
        .map(|words| words.into_iter().map(|(w, _)| w).collect::<Vec<_>>().join(" "))
        .collect()
}

/// Significance table, per-theme emotion profile of trolls, and a flip-flop
/// trace for `user` (by default the troll whose fear/joy balance swings most).
pub fn analyze(config: &RunConfig, user: Option<&str>, emotions: (&str, &str)) -> Result<AnalysisSummary, PipelineError> {
    config.validate()?;
    let themed = load_themed(config)?;
    let (lexicons, _) = load_lexicons(config)?;
    let corpus = &themed.corpus;
    let k = themed.model.num_topics();
    let vectors = tweet_vectors(corpus, &lexicons);
    let groups = account_tweets(corpus);
    let users: Vec<UserTweets> = corpus
        .accounts()
        .iter()
        .zip(&groups)
        .map(|(a, idx)| UserTweets {
            account_id: a.id.clone(),
            label: a.label,
            tweets: idx
                .iter()
                .map(|&i| (themed.themes[i], vectors.theme.row(i).to_vec()))
                .collect(),
        })
        .collect();
    let trolls: Vec<&UserTweets> = users.iter().filter(|u| u.label == Label::Troll).collect();
    let regulars: Vec<&UserTweets> = users.iter().filter(|u| u.label == Label::Regular).collect();

    let significance = significance_table(&trolls, &regulars, &config.enabled_families(), k);
    let mut csv = String::from("family,category,troll_mean,regular_mean,direction,p_value,significance,cell\n");
    let mut text = String::new();
    let _ = writeln!(text, "{:<12} {:<14} {:>18}", "family", "category", "troll/regular");
    for row in &significance {
        let direction = if row.direction == crate::analysis::Direction::Up { "up" } else { "down" };
        let _ = writeln!(
            csv,
            "{},{},{:.4},{:.4},{direction},{:.6e},{},{}",
            row.family,
            row.category,
            row.troll_mean,
            row.regular_mean,
            row.p_value,
            row.stars.label(),
            row.cell()
        );
        let _ = writeln!(text, "{:<12} {:<14} {:>18}", row.family.as_str(), row.category, row.cell());
    }
    write(&config.out.join(SIGNIFICANCE_FILE), csv)?;
    write(&config.out.join(SIGNIFICANCE_TEXT_FILE), text)?;

    let labels = theme_labels(&themed.model);
    let profile = theme_emotion_profile(&trolls, k);
    let mut csv = String::from("theme,top_words,tweets");
    for e in Family::Emotions.categories() {
        let _ = write!(csv, ",{e}");
    }
    csv.push('\n');
    for t in &profile {
        let _ = write!(csv, "{},{},{}", t.theme, labels[t.theme], t.tweet_count);
        for e in 0..Family::Emotions.dim() {
            match &t.shares {
                Some(s) => {
                    let _ = write!(csv, ",{:.6}", s[e]);
                }
                None => csv.push(','),
            }
        }
        csv.push('\n');
    }
    write(&config.out.join(EMOTION_PROFILE_FILE), csv)?;
    write(&config.out.join(EMOTION_PROFILE_SVG), emotion_profile_svg(&profile, &labels))?;

    let chosen: Option<&UserTweets> = match user {
        Some(id) => Some(
            users
                .iter()
                .find(|u| u.account_id == id)
                .ok_or_else(|| PipelineError::Config(format!("unknown user {id:?}")))?,
        ),
        None => {
            let mut best: Option<(&UserTweets, f64)> = None;
            for u in &trolls {
                if let Ok(trace) = flipflop_trace(u, emotions, k) {
                    let diffs = trace.iter().map(|p| p.first - p.second);
                    let swing = diffs.clone().fold(f64::MIN, f64::max) - diffs.fold(f64::MAX, f64::min);
                    if best.is_none_or(|(_, s)| swing > s) {
                        best = Some((u, swing));
                    }
                }
            }
            best.map(|(u, _)| u)
        }
    };
    let mut flipflop = Vec::new();
    if let Some(u) = chosen {
        flipflop = flipflop_trace(u, emotions, k)?;
        let mut csv = format!("theme,top_words,{},{}\n", emotions.0, emotions.1);
        for p in &flipflop {
            let _ = writeln!(csv, "{},{},{:.6},{:.6}", p.theme, labels[p.theme], p.first, p.second);
        }
        write(&config.out.join(FLIPFLOP_FILE), csv)?;
        write(&config.out.join(FLIPFLOP_SVG), flipflop_svg(&flipflop, emotions))?;
    }
    Ok(AnalysisSummary {
        significance,
        emotions: profile,
        flipflop_user: chosen.map(|u| u.account_id.clone()),
        flipflop,
    })
}

/// ingest, annotate (when `conllu` is set), topics-fit, features-build and report.
pub fn run_all(config: &RunConfig) -> Result<Report, PipelineError> {
    ingest(config)?;
    if config.conllu.is_some() {
        annotate(config)?;
    }
    topics_fit(config)?;
    features_build(config)?;
    report(config)
}
