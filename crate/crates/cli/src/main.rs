//! `trolllens` command line: runs the detection pipeline stage by stage.

use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trolllens::corpus::write_conllu;
use trolllens::pipeline::stages;
use trolllens::pipeline::{Method, PipelineError, RunConfig};
use trolllens::synthetic::{generate, SyntheticConfig};

#[derive(Parser)]
#[command(name = "trolllens", version, about = "Theme-aware troll account detection from tweet text")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat key = value TOML run configuration.
    #[arg(long, global = true, env = "TROLLLENS_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory for every artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Corpus JSONL file.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// CoNLL-U tagger output.
    #[arg(long, global = true)]
    conllu: Option<PathBuf>,
    /// Directory of lexicon TSV files (built-in lexicons when omitted).
    #[arg(long, global = true)]
    lexicons: Option<PathBuf>,
    /// Number of LDA themes.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// LDA seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Refit LDA on each training fold during cross-validation.
    #[arg(long, global = true)]
    fit_on_train_only: bool,
    /// Override any configuration key, e.g. `--set l2_lambda=0.01`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the corpus and copy it into the output directory.
    Ingest,
    /// Attach CoNLL-U annotations to the ingested corpus.
    Annotate,
    /// Check lexicon files and print term counts per family.
    LexiconsValidate,
    /// Fit the topic model and assign a theme to every tweet.
    TopicsFit,
    /// Print the top words of every theme.
    TopicsShow {
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Build per-account feature matrices.
    FeaturesBuild,
    /// Train the final model on all accounts.
    Train {
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Cross-validate one method.
    Evaluate {
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Significance table, emotion profile per theme, flip-flop trace.
    Analyze {
        /// Account for the flip-flop trace; defaults to the troll with the largest swing.
        #[arg(long)]
        user: Option<String>,
        /// Emotion pair for the flip-flop trace.
        #[arg(long, default_value = "fear,joy")]
        emotions: String,
    },
    /// Cross-validate every method and write the comparison table.
    Report,
    /// Write a synthetic corpus (JSONL) and its annotations (CoNLL-U).
    Generate {
        #[arg(long, default_value_t = 1000)]
        accounts: usize,
        #[arg(long, default_value_t = 50)]
        tweets: usize,
        #[arg(long, default_value_t = 0.02)]
        troll_fraction: f64,
        #[arg(long = "data-seed", default_value_t = 1)]
        data_seed: u64,
        #[arg(long)]
        corpus_out: PathBuf,
        #[arg(long)]
        conllu_out: Option<PathBuf>,
    },
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig, PipelineError> {
    let mut config = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &g.out {
        config.out = v.clone();
    }
    if let Some(v) = &g.corpus {
        config.corpus = Some(v.clone());
    }
    if let Some(v) = &g.conllu {
        config.conllu = Some(v.clone());
    }
    if let Some(v) = &g.lexicons {
        config.lexicon_dir = Some(v.clone());
    }
    if let Some(v) = g.k {
        config.lda_k = v;
    }
    if let Some(v) = g.seed {
        config.lda_seed = v;
    }
    if g.fit_on_train_only {
        config.fit_on_train_only = true;
    }
    for o in &g.overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| PipelineError::Config(format!("--set expects KEY=VALUE, got {o:?}")))?;
        config.set(key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

fn parse_method(s: &str) -> Result<Method, PipelineError> {
    s.parse().map_err(PipelineError::Config)
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let config = build_config(&cli.global)?;
    match cli.command {
        Command::Ingest => {
            let s = stages::ingest(&config)?;
            println!(
                "accounts: {} ({} troll, {} regular)\ntweets: {} ({} troll, {} regular)",
                s.total_accounts, s.troll_accounts, s.regular_accounts, s.total_tweets, s.troll_tweets, s.regular_tweets
            );
        }
        Command::Annotate => {
            let s = stages::annotate(&config)?;
            println!("annotated {} of {} tweets", s.annotated, s.total);
            if !s.unmatched.is_empty() {
                eprintln!("warning: {} annotated tweet ids not in corpus (first: {})", s.unmatched.len(), s.unmatched[0]);
            }
        }
        Command::LexiconsValidate => {
            for (family, terms) in stages::lexicons_validate(&config)? {
                println!("{:<12} {terms} terms", family.as_str());
            }
        }
        Command::TopicsFit => {
            let model = stages::topics_fit(&config)?;
            println!(
                "fitted {} themes over {} tweets, vocabulary {}",
                model.num_topics(),
                model.num_docs(),
                model.vocab().len()
            );
        }
        Command::TopicsShow { top } => {
            let model = stages::load_topics(&config)?;
            for (k, words) in model.topic_top_words(top).iter().enumerate() {
                let words: Vec<&str> = words.iter().map(|(w, _)| w.as_str()).collect();
                println!("theme {k}: {}", words.join(" "));
            }
        }
        Command::FeaturesBuild => {
            let s = stages::features_build(&config)?;
            println!(
                "{} accounts: {} theme-based dims, {} profiling dims",
                s.accounts, s.theme_dims, s.profile_dims
            );
        }
        Command::Train { method } => {
            let s = stages::train(&config, parse_method(&method)?)?;
            println!("{}: {} dims, {} iterations, final loss {:.6}", s.method, s.dims, s.iterations, s.final_loss);
            for (family, ranked) in &s.importance {
                let names: Vec<&str> = ranked.iter().map(|(n, _)| n.as_str()).collect();
                println!("top {family}: {}", names.join(" "));
            }
        }
        Command::Evaluate { method } => {
            let r = stages::evaluate(&config, parse_method(&method)?)?;
            println!("method,precision_macro,recall_macro,f1_macro");
            println!(
                "{},{:.4},{:.4},{:.4}",
                r.method, r.mean.precision_macro, r.mean.recall_macro, r.mean.f1_macro
            );
        }
        Command::Analyze { user, emotions } => {
            let (e1, e2) = emotions
                .split_once(',')
                .ok_or_else(|| PipelineError::Config("--emotions expects two names, e.g. fear,joy".into()))?;
            let s = stages::analyze(&config, user.as_deref(), (e1.trim(), e2.trim()))?;
            let significant = s
                .significance
                .iter()
                .filter(|r| r.stars != trolllens::analysis::Stars::NotSignificant)
                .count();
            println!("{significant} of {} categories differ significantly", s.significance.len());
            if let Some(u) = s.flipflop_user {
                println!("flip-flop trace for {u} over {} themes", s.flipflop.len());
            }
        }
        Command::Report => {
            let r = stages::report(&config)?;
            print!("{}", r.to_text());
        }
        Command::Generate {
            accounts,
            tweets,
            troll_fraction,
            data_seed,
            corpus_out,
            conllu_out,
        } => {
            let corpus = generate(&SyntheticConfig {
                accounts,
                tweets_per_account: tweets,
                troll_fraction,
                seed: data_seed,
                ..Default::default()
            });
            let io = |p: &PathBuf, e: std::io::Error| PipelineError::Io {
                path: p.clone(),
                message: e.to_string(),
            };
            let file = fs::File::create(&corpus_out).map_err(|e| io(&corpus_out, e))?;
            corpus.write_jsonl(BufWriter::new(file)).map_err(|e| io(&corpus_out, e))?;
            if let Some(path) = &conllu_out {
                let annotations = corpus
                    .tweets()
                    .iter()
                    .filter_map(|t| t.annotations.clone().map(|a| (t.id.clone(), a)))
                    .collect();
                let file = fs::File::create(path).map_err(|e| io(path, e))?;
                write_conllu(&annotations, BufWriter::new(file)).map_err(|e| io(path, e))?;
            }
            println!("wrote {} accounts, {} tweets", corpus.accounts().len(), corpus.tweets().len());
        }
    }
    Ok(())
}

fn init_threads() -> Result<(), PipelineError> {
    if let Ok(raw) = std::env::var("TROLLLENS_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| PipelineError::Config(format!("TROLLLENS_THREADS must be a positive integer, got {raw:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PipelineError::MissingArtifact(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
