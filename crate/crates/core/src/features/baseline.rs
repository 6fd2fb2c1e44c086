use std::collections::{BTreeMap, HashMap, HashSet};

use crate::corpus::Account;
use crate::preprocess::tokenize;

pub const NETWORK_DIM: usize = 2;

/// Terms kept for the bag-of-words baseline, ranked by document frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowVocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl BowVocabulary {
    /// Keeps the `max_terms` terms with the highest document frequency over
    /// `docs` (one document per account); ties go to the lexicographically smaller term.
    pub fn fit<'a, I>(docs: I, max_terms: usize) -> Self
    where
        I: IntoIterator<Item = &'a [String]>,
    {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let unique: HashSet<&str> = doc.iter().map(String::as_str).collect();
            for term in unique {
                *df.entry(term).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = df.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let terms: Vec<String> = ranked
            .into_iter()
            .take(max_terms)
            .map(|(t, _)| t.to_owned())
            .collect();
        Self::from_terms(terms)
    }

    pub fn from_terms(terms: Vec<String>) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms, index }
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }
}

/// Lowercased lexical tokens of all of an account's tweets, as one document.
pub fn account_document<'a, I>(texts: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a str>,
{
    texts
        .into_iter()
        .flat_map(|t| {
            tokenize(t)
                .tokens
                .into_iter()
                .filter(|tok| tok.is_lexical())
                .map(|tok| tok.surface.to_lowercase())
        })
        .collect()
}

/// Sparse term counts over the concatenated document; out-of-vocabulary
/// terms are ignored. Entries are sorted by term index.
pub fn bow_user(document: &[String], vocab: &BowVocabulary) -> Vec<(usize, u32)> {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for term in document {
        if let Some(i) = vocab.get(term) {
            *counts.entry(i).or_default() += 1;
        }
    }
    counts.into_iter().collect()
}

/// Log-scaled follower and followee counts.
pub fn network_vector(account: &Account) -> [f64; NETWORK_DIM] {
    [
        (account.followers as f64).ln_1p(),
        (account.followees as f64).ln_1p(),
    ]
}
