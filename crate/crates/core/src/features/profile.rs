use crate::corpus::{Deprel, Tweet, Upos};
use crate::preprocess::{clean_for_nli, tokenize, TokenKind, STOPWORDS};

use super::{FeatureError, FeatureSchema, MeanStd};

pub const NLI_DIM: usize = STOPWORDS.len() + 17 + 37;
pub const STYLISTIC_DIM: usize = 7;
pub const PROFILE_TWEET_DIM: usize = NLI_DIM + STYLISTIC_DIM;

pub const STYLISTIC_NAMES: [&str; STYLISTIC_DIM] = [
    "special_chars",
    "char_runs",
    "urls",
    "hashtags",
    "mentions",
    "uppercase_ratio",
    "length",
];

#[derive(Debug, Clone, PartialEq)]
pub struct NliVector {
    pub values: Vec<f64>,
    /// False when the tweet had no annotations; the POS and DEPREL blocks are then zero.
    pub annotated: bool,
}

/// Relative frequencies of stopwords (over word tokens of the cleaned text),
/// UPOS tags and dependency relations (over annotated tokens).
pub fn nli_vector(tweet: &Tweet, stopwords: &[&str]) -> NliVector {
    let mut values = vec![0.0; stopwords.len() + Upos::ALL.len() + Deprel::ALL.len()];
    let cleaned = clean_for_nli(&tweet.text);
    let words: Vec<String> = tokenize(&cleaned)
        .tokens
        .into_iter()
        .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Number))
        .map(|t| t.surface.to_lowercase())
        .collect();
    if !words.is_empty() {
        let n = words.len() as f64;
        for w in &words {
            if let Some(i) = stopwords.iter().position(|s| s == w) {
                values[i] += 1.0 / n;
            }
        }
    }
    let annotated = tweet.annotations.is_some();
    if let Some(tokens) = tweet.annotations.as_deref().filter(|t| !t.is_empty()) {
        let n = tokens.len() as f64;
        let pos_base = stopwords.len();
        let dep_base = pos_base + Upos::ALL.len();
        for tok in tokens {
            values[pos_base + tok.upos.index()] += 1.0 / n;
            values[dep_base + tok.deprel.index()] += 1.0 / n;
        }
    }
    NliVector { values, annotated }
}

/// Special characters, character runs, URL/hashtag/mention counts,
/// uppercase ratio and character length of the raw text.
pub fn stylistic_vector(text: &str) -> [f64; STYLISTIC_DIM] {
    let chars: Vec<char> = text.chars().collect();
    let special = chars
        .iter()
        .filter(|c| !c.is_alphanumeric() && !c.is_whitespace())
        .count();

    let mut runs = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let len = j - i;
        if !c.is_whitespace() && ((c.is_alphabetic() && len >= 3) || (!c.is_alphabetic() && len >= 2)) {
            runs += 1;
        }
        i = j;
    }

    let letters = chars.iter().filter(|c| c.is_alphabetic()).count();
    let upper = chars.iter().filter(|c| c.is_uppercase()).count();
    let uppercase_ratio = if letters == 0 { 0.0 } else { upper as f64 / letters as f64 };

    let tokens = tokenize(text);
    [
        special as f64,
        runs as f64,
        tokens.count(TokenKind::Url) as f64,
        tokens.count(TokenKind::Hashtag) as f64,
        tokens.count(TokenKind::Mention) as f64,
        uppercase_ratio,
        chars.len() as f64,
    ]
}

/// `[nli_vector ; stylistic_vector]` for one tweet.
pub fn tweet_profile_vector(tweet: &Tweet) -> Vec<f64> {
    let mut v = nli_vector(tweet, STOPWORDS).values;
    v.extend_from_slice(&stylistic_vector(&tweet.text));
    v
}

pub fn profile_tweet_schema() -> FeatureSchema {
    let mut schema = FeatureSchema::new();
    for w in STOPWORDS {
        schema.push(format!("stop:{w}"), "stopwords");
    }
    for tag in Upos::ALL {
        schema.push(format!("pos:{tag}"), "pos");
    }
    for rel in Deprel::ALL {
        schema.push(format!("deprel:{rel}"), "deprel");
    }
    for name in STYLISTIC_NAMES {
        schema.push(format!("style:{name}"), "stylistic");
    }
    schema
}

pub fn profile_schema() -> FeatureSchema {
    profile_tweet_schema().mean_std("")
}

/// `[mean ; population std]` over all of an account's per-tweet vectors.
pub fn aggregate_profile_user<'a, I>(account_id: &str, tweets: I, dim: usize) -> Result<Vec<f64>, FeatureError>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut acc = MeanStd::new(dim);
    for v in tweets {
        acc.push(v);
    }
    if acc.count() == 0 {
        return Err(FeatureError::EmptyAccount(account_id.to_owned()));
    }
    let mut out = Vec::with_capacity(2 * dim);
    acc.write_into(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenAnnotation;

    fn tweet(text: &str, ann: Option<Vec<TokenAnnotation>>) -> Tweet {
        Tweet {
            id: "t".into(),
            account_id: "u".into(),
            text: text.into(),
            timestamp: None,
            annotations: ann,
        }
    }

    #[test]
    fn nli_hand_count() {
        let t = tweet(
            "He runs.",
            Some(vec![
                TokenAnnotation::new("He", Upos::Pron, Deprel::Nsubj),
                TokenAnnotation::new("runs", Upos::Verb, Deprel::Root),
            ]),
        );
        let v = nli_vector(&t, STOPWORDS);
        assert!(v.annotated);
        let schema = profile_tweet_schema();
        let at = |name: &str| v.values[schema.names().position(|n| n == name).unwrap()];
        for name in ["stop:he", "pos:PRON", "pos:VERB", "deprel:nsubj", "deprel:root"] {
            assert_eq!(at(name), 0.5, "{name}");
        }
        let nonzero = v.values.iter().filter(|&&x| x != 0.0).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn nli_empty_and_no_stopwords() {
        let v = nli_vector(&tweet("", None), STOPWORDS);
        assert!(v.values.iter().all(|&x| x == 0.0));
        assert!(!v.annotated);

        let t = tweet(
            "Police shot",
            Some(vec![
                TokenAnnotation::new("Police", Upos::Noun, Deprel::Nsubj),
                TokenAnnotation::new("shot", Upos::Verb, Deprel::Root),
            ]),
        );
        let v = nli_vector(&t, STOPWORDS);
        assert!(v.values[..STOPWORDS.len()].iter().all(|&x| x == 0.0));
        assert!(v.values[STOPWORDS.len()..].iter().any(|&x| x > 0.0));
    }

    #[test]
    fn stylistic_shouting() {
        let v = stylistic_vector("MAKE AMERICA GREAT AGAIN!");
        assert_eq!(v, [1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 25.0]);
        assert_eq!(stylistic_vector(""), [0.0; 7]);
    }

    #[test]
    fn stylistic_runs() {
        assert_eq!(stylistic_vector("sooo !! x")[1], 2.0);
        // Two identical letters are not a run; two identical symbols are.
        assert_eq!(stylistic_vector("too ..")[1], 1.0);
        let v = stylistic_vector("@a #b http://x.co/y ok");
        assert_eq!(&v[2..5], &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn profile_dims() {
        assert_eq!(NLI_DIM, 233);
        assert_eq!(profile_schema().len(), 2 * (179 + 17 + 37 + 7));
        assert_eq!(tweet_profile_vector(&tweet("x", None)).len(), PROFILE_TWEET_DIM);
    }

    #[test]
    fn profile_aggregation() {
        let one = [1.0];
        let three = [3.0];
        let out = aggregate_profile_user("u", [&one[..], &three[..]], 1).unwrap();
        assert_eq!(out, [2.0, 1.0]);
        let single = aggregate_profile_user("u", [&one[..]], 1).unwrap();
        assert_eq!(single, [1.0, 0.0]);
        assert_eq!(
            aggregate_profile_user("u", std::iter::empty(), 1),
            Err(FeatureError::EmptyAccount("u".into()))
        );
    }
}
