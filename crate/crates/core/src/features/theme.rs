use crate::corpus::Tweet;
use crate::lexicons::{Family, LexiconSet, THEME_DIM};
use crate::preprocess::tokenize;
use crate::topics::Theme;

use super::{FeatureSchema, MeanStd};

/// Per-category lexicon proportions for one tweet, families in fixed order.
pub fn tweet_theme_vector(tweet: &Tweet, lexicons: &LexiconSet) -> Vec<f64> {
    let forms = tokenize(&tweet.text).lexical_forms();
    let mut out = Vec::with_capacity(THEME_DIM);
    for (_, lexicon) in lexicons.iter() {
        out.extend(lexicon.match_forms(&forms).proportions());
    }
    out
}

/// Names of the 48 per-tweet theme dimensions.
pub fn theme_tweet_schema() -> FeatureSchema {
    let mut schema = FeatureSchema::new();
    for fam in Family::ALL {
        for cat in fam.categories() {
            schema.push(format!("{}:{cat}", fam.as_str()), fam.as_str());
        }
    }
    schema
}

/// Account-level schema: `num_themes` blocks of `[mean ; std]`.
pub fn theme_schema(num_themes: usize) -> FeatureSchema {
    let tweet = theme_tweet_schema();
    let mut schema = FeatureSchema::new();
    for j in 0..num_themes {
        schema.dims.extend(tweet.mean_std(&format!("theme{j}:")).dims);
    }
    schema
}

/// Concatenates, for each theme, the mean and population std of the vectors
/// of tweets in that theme. Themes without tweets give zero blocks; tweets
/// without a theme are ignored.
pub fn aggregate_theme_user<'a, I>(tweets: I, num_themes: usize, dim: usize) -> Vec<f64>
where
    I: IntoIterator<Item = (Theme, &'a [f64])>,
{
    let mut blocks = vec![MeanStd::new(dim); num_themes];
    for (theme, v) in tweets {
        if let Some(j) = theme {
            blocks[j].push(v);
        }
    }
    let mut out = Vec::with_capacity(num_themes * 2 * dim);
    for block in &blocks {
        block.write_into(&mut out);
    }
    out
}
