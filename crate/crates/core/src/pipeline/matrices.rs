use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::{concatenate, Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::features::{
    account_document, aggregate_profile_user, aggregate_theme_user, bow_user, network_vector, profile_schema,
    theme_schema, tweet_profile_vector, tweet_theme_vector, BowVocabulary, FeatureError, FeatureSchema,
    NETWORK_DIM, PROFILE_TWEET_DIM,
};
use crate::lexicons::{LexiconSet, THEME_DIM};
use crate::model::{FoldFeatures, ModelError};
use crate::preprocess::clean_for_lda;
use crate::topics::{fit_lda, LdaConfig, LdaModel, Theme, TopicError};

/// Per-tweet vectors, one row per tweet in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct TweetVectors {
    /// 48 lexicon proportions.
    pub theme: Array2<f64>,
    /// Stopword, POS and DEPREL frequencies followed by the stylistic counts.
    pub profile: Array2<f64>,
}

fn rows_to_array(rows: Vec<Vec<f64>>, dim: usize) -> Array2<f64> {
    let n = rows.len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((n, dim), flat).expect("rows have the schema width")
}

pub fn tweet_vectors(corpus: &Corpus, lexicons: &LexiconSet) -> TweetVectors {
    let (theme, profile): (Vec<Vec<f64>>, Vec<Vec<f64>>) = corpus
        .tweets()
        .par_iter()
        .map(|t| (tweet_theme_vector(t, lexicons), tweet_profile_vector(t)))
        .unzip();
    TweetVectors {
        theme: rows_to_array(theme, THEME_DIM),
        profile: rows_to_array(profile, PROFILE_TWEET_DIM),
    }
}

/// Topic-model input per tweet, in corpus order.
pub fn lda_documents(corpus: &Corpus) -> Vec<Vec<String>> {
    corpus
        .tweets()
        .par_iter()
        .map(|t| clean_for_lda(t, corpus.collection_hashtags()).tokens)
        .collect()
}

/// Fits LDA on every tweet and assigns each its training theme.
pub fn fit_themes(docs: &[Vec<String>], config: &LdaConfig) -> Result<(LdaModel, Vec<Theme>), TopicError> {
    let model = fit_lda(docs, config)?;
    let themes = (0..docs.len()).map(|d| model.training_theme(d)).collect();
    Ok((model, themes))
}

/// Every tweet in one pseudo-theme.
pub fn global_themes(num_tweets: usize) -> Vec<Theme> {
    vec![Some(0); num_tweets]
}

/// Tweet row indices of each account, accounts in corpus order.
pub fn account_tweets(corpus: &Corpus) -> Vec<Vec<usize>> {
    corpus
        .accounts()
        .iter()
        .map(|a| {
            a.tweet_ids
                .iter()
                .map(|id| corpus.tweet_position(id).expect("account tweets exist"))
                .collect()
        })
        .collect()
}

fn row(m: &Array2<f64>, i: usize) -> &[f64] {
    m.row(i).to_slice().expect("standard layout")
}

/// Theme-based account matrix for the given accounts (rows of `groups`).
pub fn theme_features(groups: &[&[usize]], themes: &[Theme], vectors: &Array2<f64>, num_themes: usize) -> Array2<f64> {
    let rows: Vec<Vec<f64>> = groups
        .par_iter()
        .map(|idx| aggregate_theme_user(idx.iter().map(|&i| (themes[i], row(vectors, i))), num_themes, THEME_DIM))
        .collect();
    rows_to_array(rows, num_themes * 2 * THEME_DIM)
}

pub fn profile_features(corpus: &Corpus, groups: &[Vec<usize>], vectors: &Array2<f64>) -> Result<Array2<f64>, FeatureError> {
    let rows: Vec<Vec<f64>> = corpus
        .accounts()
        .par_iter()
        .zip(groups)
        .map(|(a, idx)| aggregate_profile_user(&a.id, idx.iter().map(|&i| row(vectors, i)), PROFILE_TWEET_DIM))
        .collect::<Result<_, _>>()?;
    Ok(rows_to_array(rows, 2 * PROFILE_TWEET_DIM))
}

pub fn network_features(corpus: &Corpus) -> Array2<f64> {
    let rows = corpus.accounts().iter().map(|a| network_vector(a).to_vec()).collect();
    rows_to_array(rows, NETWORK_DIM)
}

/// One bag-of-words document per account.
pub fn account_documents(corpus: &Corpus, groups: &[Vec<usize>]) -> Vec<Vec<String>> {
    groups
        .par_iter()
        .map(|idx| account_document(idx.iter().map(|&i| corpus.tweets()[i].text.as_str())))
        .collect()
}

/// Account-level matrices shared by every report row.
#[derive(Debug, Clone, PartialEq)]
pub struct AccountFeatures {
    pub num_themes: usize,
    /// Per-theme aggregation over the LDA themes.
    pub themed: Array2<f64>,
    pub themed_schema: FeatureSchema,
    /// The same aggregation with every tweet in one pseudo-theme.
    pub global: Array2<f64>,
    pub global_schema: FeatureSchema,
    pub profile: Array2<f64>,
    pub profile_schema: FeatureSchema,
    pub network: Array2<f64>,
}

impl AccountFeatures {
    pub fn build(
        corpus: &Corpus,
        groups: &[Vec<usize>],
        vectors: &TweetVectors,
        themes: &[Theme],
        num_themes: usize,
    ) -> Result<Self, FeatureError> {
        let refs: Vec<&[usize]> = groups.iter().map(Vec::as_slice).collect();
        Ok(Self {
            num_themes,
            themed: theme_features(&refs, themes, &vectors.theme, num_themes),
            themed_schema: theme_schema(num_themes),
            global: theme_features(&refs, &global_themes(themes.len()), &vectors.theme, 1),
            global_schema: theme_schema(1),
            profile: profile_features(corpus, groups, &vectors.profile)?,
            profile_schema: profile_schema(),
            network: network_features(corpus),
        })
    }
}

/// Bag-of-words counts with the vocabulary fitted on the training accounts only.
pub struct BowFeatures<'a> {
    pub documents: &'a [Vec<String>],
    pub max_terms: usize,
}

impl BowFeatures<'_> {
    fn matrix(&self, rows: &[usize], vocab: &BowVocabulary) -> Array2<f64> {
        let mut m = Array2::zeros((rows.len(), vocab.len()));
        for (r, &i) in rows.iter().enumerate() {
            for (j, c) in bow_user(&self.documents[i], vocab) {
                m[[r, j]] = c as f64;
            }
        }
        m
    }
}

impl FoldFeatures for BowFeatures<'_> {
    fn build(&self, train: &[usize], test: &[usize]) -> Result<(Array2<f64>, Array2<f64>), ModelError> {
        let vocab = BowVocabulary::fit(train.iter().map(|&i| self.documents[i].as_slice()), self.max_terms);
        Ok((self.matrix(train, &vocab), self.matrix(test, &vocab)))
    }
}

type FoldPair = Arc<(Array2<f64>, Array2<f64>)>;

/// Theme-based features with LDA refitted on each training fold; held-out
/// tweets get their themes by fold-in. Results are cached per fold.
pub struct FoldThemes<'a> {
    pub groups: &'a [Vec<usize>],
    pub documents: &'a [Vec<String>],
    pub vectors: &'a Array2<f64>,
    pub lda: LdaConfig,
    pub fold_in_iterations: usize,
    cache: Mutex<HashMap<Vec<usize>, FoldPair>>,
}

impl<'a> FoldThemes<'a> {
    pub fn new(
        groups: &'a [Vec<usize>],
        documents: &'a [Vec<String>],
        vectors: &'a Array2<f64>,
        lda: LdaConfig,
        fold_in_iterations: usize,
    ) -> Self {
        Self {
            groups,
            documents,
            vectors,
            lda,
            fold_in_iterations,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn matrices(&self, train: &[usize], test: &[usize]) -> Result<FoldPair, ModelError> {
        if let Some(hit) = self.cache.lock().unwrap().get(test) {
            return Ok(Arc::clone(hit));
        }
        let train_tweets: Vec<usize> = train.iter().flat_map(|&a| self.groups[a].iter().copied()).collect();
        let docs: Vec<Vec<&str>> = train_tweets
            .iter()
            .map(|&i| self.documents[i].iter().map(String::as_str).collect())
            .collect();
        let model = fit_lda(&docs, &self.lda).map_err(|e| ModelError::Features(e.to_string()))?;
        let mut themes: Vec<Theme> = vec![None; self.documents.len()];
        for (d, &i) in train_tweets.iter().enumerate() {
            themes[i] = model.training_theme(d);
        }
        let test_tweets: Vec<usize> = test.iter().flat_map(|&a| self.groups[a].iter().copied()).collect();
        let inferred: Vec<Theme> = test_tweets
            .par_iter()
            .map(|&i| {
                let seed = self.lda.seed.wrapping_add(i as u64);
                model.infer_theme(&self.documents[i], self.fold_in_iterations, seed)
            })
            .collect();
        for (&i, theme) in test_tweets.iter().zip(inferred) {
            themes[i] = theme;
        }
        let k = self.lda.num_topics;
        let refs = |rows: &[usize]| rows.iter().map(|&a| self.groups[a].as_slice()).collect::<Vec<_>>();
        let pair = Arc::new((
            theme_features(&refs(train), &themes, self.vectors, k),
            theme_features(&refs(test), &themes, self.vectors, k),
        ));
        self.cache.lock().unwrap().insert(test.to_vec(), Arc::clone(&pair));
        Ok(pair)
    }
}

/// Where the theme-based block of a feature set comes from.
pub enum ThemeSource<'a> {
    Fixed(&'a Array2<f64>),
    PerFold(&'a FoldThemes<'a>),
}

/// Selected theme-based columns followed by fixed extra columns.
pub struct FeatureSet<'a> {
    pub theme: Option<(ThemeSource<'a>, Vec<usize>)>,
    pub extra: Option<Array2<f64>>,
}

impl FoldFeatures for FeatureSet<'_> {
    fn build(&self, train: &[usize], test: &[usize]) -> Result<(Array2<f64>, Array2<f64>), ModelError> {
        let mut train_parts: Vec<Array2<f64>> = Vec::new();
        let mut test_parts: Vec<Array2<f64>> = Vec::new();
        if let Some((source, cols)) = &self.theme {
            match source {
                ThemeSource::Fixed(m) => {
                    train_parts.push(m.select(Axis(0), train).select(Axis(1), cols));
                    test_parts.push(m.select(Axis(0), test).select(Axis(1), cols));
                }
                ThemeSource::PerFold(ft) => {
                    let pair = ft.matrices(train, test)?;
                    train_parts.push(pair.0.select(Axis(1), cols));
                    test_parts.push(pair.1.select(Axis(1), cols));
                }
            }
        }
        if let Some(extra) = &self.extra {
            train_parts.push(extra.select(Axis(0), train));
            test_parts.push(extra.select(Axis(0), test));
        }
        let join = |parts: &[Array2<f64>], rows: usize| -> Array2<f64> {
            if parts.is_empty() {
                return Array2::zeros((rows, 0));
            }
            let views: Vec<ArrayView2<f64>> = parts.iter().map(|p| p.view()).collect();
            concatenate(Axis(1), &views).expect("row counts agree")
        };
        Ok((join(&train_parts, train.len()), join(&test_parts, test.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Precomputed;
    use ndarray::array;

    #[test]
    fn feature_set_matches_manual_selection() {
        let theme = array![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]];
        let extra = array![[10.0], [20.0], [30.0]];
        let set = FeatureSet {
            theme: Some((ThemeSource::Fixed(&theme), vec![2, 0])),
            extra: Some(extra),
        };
        let (tr, te) = set.build(&[0, 2], &[1]).unwrap();
        assert_eq!(tr, array![[3.0, 1.0, 10.0], [9.0, 7.0, 30.0]]);
        assert_eq!(te, array![[6.0, 4.0, 20.0]]);
        let (tr2, _) = Precomputed(&theme).build(&[0, 2], &[1]).unwrap();
        assert_eq!(tr2.column(0), tr.column(1));
    }

    #[test]
    fn bow_vocabulary_ignores_held_out_terms() {
        let docs = vec![
            vec!["a".to_owned(), "b".to_owned()],
            vec!["b".to_owned(), "b".to_owned()],
            vec!["zzz".to_owned()],
        ];
        let bow = BowFeatures {
            documents: &docs,
            max_terms: 10,
        };
        let (tr, te) = bow.build(&[0, 1], &[2]).unwrap();
        assert_eq!(tr.ncols(), 2);
        assert_eq!(tr, array![[1.0, 1.0], [0.0, 2.0]].select(Axis(1), &[1, 0]));
        assert_eq!(te, array![[0.0, 0.0]]);
    }
}
