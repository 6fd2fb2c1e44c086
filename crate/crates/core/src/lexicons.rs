//! Category lexicons in a uniform TSV format, and greedy longest-match lookup.
//!
//! File format: one `term<TAB>category` pair per line, with an optional third
//! association column (NRC style, `0` lines are skipped). An optional header
//! `# name: <lexicon> categories: <c1,c2,...>` fixes the category order and
//! closes the category set. Terms are at most two tokens; a trailing `*` on a
//! single-token term matches any word with that prefix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::preprocess::TokenStream;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{lexicon} line {line}: category {category:?} not declared in header")]
    UndeclaredCategory {
        lexicon: String,
        line: usize,
        category: String,
    },
    #[error("{lexicon} line {line}: empty term")]
    EmptyTerm { lexicon: String, line: usize },
    #[error("{lexicon} line {line}: term {term:?} has more than two tokens")]
    MaxNgramExceeded {
        lexicon: String,
        line: usize,
        term: String,
    },
    #[error("{lexicon} line {line}: wildcard only allowed on single-token terms ({term:?})")]
    WildcardInBigram {
        lexicon: String,
        line: usize,
        term: String,
    },
    #[error("{lexicon} line {line}: expected `term<TAB>category`")]
    MalformedLine { lexicon: String, line: usize },
    #[error("lexicon {lexicon} lacks required category {category:?}")]
    MissingCategory { lexicon: String, category: String },
    #[error("no lexicon file for family {family} in {dir}")]
    MissingFamily { family: Family, dir: PathBuf },
}

/// Term-to-category mapping with a fixed category order.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    name: String,
    categories: Vec<String>,
    unigrams: HashMap<String, Vec<usize>>,
    bigrams: HashMap<(String, String), Vec<usize>>,
    prefixes: BTreeMap<String, Vec<usize>>,
}

impl Lexicon {
    pub fn new(name: impl Into<String>, categories: Vec<String>) -> Self {
        Self {
            name: name.into(),
            categories,
            unigrams: HashMap::new(),
            bigrams: HashMap::new(),
            prefixes: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn category_index(&self, category: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == category)
    }

    /// Number of distinct terms, wildcard stems included.
    pub fn term_count(&self) -> usize {
        self.unigrams.len() + self.bigrams.len() + self.prefixes.len()
    }

    /// Every `(term, category)` entry, wildcards rendered with their `*`.
    pub fn entries(&self) -> Vec<(String, &str)> {
        let mut out = Vec::new();
        for (term, cats) in &self.unigrams {
            out.extend(cats.iter().map(|&c| (term.clone(), self.categories[c].as_str())));
        }
        for ((a, b), cats) in &self.bigrams {
            out.extend(cats.iter().map(|&c| (format!("{a} {b}"), self.categories[c].as_str())));
        }
        for (stem, cats) in &self.prefixes {
            out.extend(cats.iter().map(|&c| (format!("{stem}*"), self.categories[c].as_str())));
        }
        out.sort();
        out
    }

    /// Adds one entry, declaring the category if it is new.
    pub fn insert(&mut self, term: &str, category: &str) -> Result<(), LexiconError> {
        let idx = match self.category_index(category) {
            Some(i) => i,
            None => {
                self.categories.push(category.to_owned());
                self.categories.len() - 1
            }
        };
        self.insert_indexed(term, idx, 0)
    }

    fn insert_indexed(&mut self, term: &str, category: usize, line: usize) -> Result<(), LexiconError> {
        let term = term.trim().to_lowercase();
        let parts: Vec<&str> = term.split_whitespace().collect();
        let slot = match parts.as_slice() {
            [] => {
                return Err(LexiconError::EmptyTerm {
                    lexicon: self.name.clone(),
                    line,
                })
            }
            [single] => match single.strip_suffix('*') {
                Some("") => {
                    return Err(LexiconError::EmptyTerm {
                        lexicon: self.name.clone(),
                        line,
                    })
                }
                Some(stem) => self.prefixes.entry(stem.to_owned()).or_default(),
                None => self.unigrams.entry((*single).to_owned()).or_default(),
            },
            [first, second] => {
                if first.ends_with('*') || second.ends_with('*') {
                    return Err(LexiconError::WildcardInBigram {
                        lexicon: self.name.clone(),
                        line,
                        term,
                    });
                }
                self.bigrams
                    .entry(((*first).to_owned(), (*second).to_owned()))
                    .or_default()
            }
            _ => {
                return Err(LexiconError::MaxNgramExceeded {
                    lexicon: self.name.clone(),
                    line,
                    term,
                })
            }
        };
        if let Err(pos) = slot.binary_search(&category) {
            slot.insert(pos, category);
        }
        Ok(())
    }

    /// Parses the TSV format. `default_name` is used when there is no header.
    pub fn parse(text: &str, default_name: &str) -> Result<Self, LexiconError> {
        let mut lexicon = Lexicon::new(default_name, Vec::new());
        let mut closed = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((name, categories)) = parse_header(comment) {
                    lexicon.name = name;
                    lexicon.categories = categories;
                    closed = true;
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 || cols.len() > 3 {
                return Err(LexiconError::MalformedLine {
                    lexicon: lexicon.name.clone(),
                    line: line_no,
                });
            }
            if cols.len() == 3 && cols[2].trim() == "0" {
                continue;
            }
            let category = cols[1].trim();
            let idx = match lexicon.category_index(category) {
                Some(i) => i,
                None if closed => {
                    return Err(LexiconError::UndeclaredCategory {
                        lexicon: lexicon.name.clone(),
                        line: line_no,
                        category: category.to_owned(),
                    })
                }
                None => {
                    lexicon.categories.push(category.to_owned());
                    lexicon.categories.len() - 1
                }
            };
            lexicon.insert_indexed(cols[0], idx, line_no)?;
        }
        Ok(lexicon)
    }

    /// Restricts to `categories`, in that order. Extra categories are dropped.
    pub fn project(&self, categories: &[&str]) -> Result<Lexicon, LexiconError> {
        let mut remap = vec![None; self.categories.len()];
        for (new, name) in categories.iter().enumerate() {
            let old = self.category_index(name).ok_or_else(|| LexiconError::MissingCategory {
                lexicon: self.name.clone(),
                category: (*name).to_owned(),
            })?;
            remap[old] = Some(new);
        }
        let map_cats = |cats: &Vec<usize>| -> Vec<usize> {
            let mut v: Vec<usize> = cats.iter().filter_map(|&c| remap[c]).collect();
            v.sort_unstable();
            v
        };
        let mut out = Lexicon::new(
            self.name.clone(),
            categories.iter().map(|c| (*c).to_owned()).collect(),
        );
        for (k, v) in &self.unigrams {
            let cats = map_cats(v);
            if !cats.is_empty() {
                out.unigrams.insert(k.clone(), cats);
            }
        }
        for (k, v) in &self.bigrams {
            let cats = map_cats(v);
            if !cats.is_empty() {
                out.bigrams.insert(k.clone(), cats);
            }
        }
        for (k, v) in &self.prefixes {
            let cats = map_cats(v);
            if !cats.is_empty() {
                out.prefixes.insert(k.clone(), cats);
            }
        }
        Ok(out)
    }

    fn unigram_categories(&self, word: &str, into: &mut Vec<usize>) -> bool {
        let start = into.len();
        if let Some(cats) = self.unigrams.get(word) {
            into.extend_from_slice(cats);
        }
        if !self.prefixes.is_empty() {
            for (end, _) in word.char_indices().skip(1).chain([(word.len(), ' ')]) {
                if let Some(cats) = self.prefixes.get(&word[..end]) {
                    into.extend_from_slice(cats);
                }
            }
        }
        into.len() > start
    }

    /// Greedy left-to-right longest match over already-normalized forms
    /// (lowercase, `#`/`@` stripped). Each token is consumed by at most one match.
    pub fn match_forms<S: AsRef<str>>(&self, forms: &[S]) -> CategoryHits {
        let mut counts = vec![0usize; self.categories.len()];
        let mut cats = Vec::new();
        let mut i = 0;
        while i < forms.len() {
            cats.clear();
            let word = forms[i].as_ref();
            let step = match forms.get(i + 1) {
                Some(next) if !self.bigrams.is_empty() => {
                    match self.bigrams.get(&(word.to_owned(), next.as_ref().to_owned())) {
                        Some(bc) => {
                            cats.extend_from_slice(bc);
                            2
                        }
                        None => {
                            self.unigram_categories(word, &mut cats);
                            1
                        }
                    }
                }
                _ => {
                    self.unigram_categories(word, &mut cats);
                    1
                }
            };
            cats.sort_unstable();
            cats.dedup();
            for &c in &cats {
                counts[c] += 1;
            }
            i += step;
        }
        CategoryHits {
            counts,
            token_count: forms.len(),
        }
    }

    /// Matches the lexical tokens of a stream. Case-insensitive.
    pub fn match_stream(&self, tokens: &TokenStream) -> CategoryHits {
        self.match_forms(&tokens.lexical_forms())
    }
}

fn parse_header(comment: &str) -> Option<(String, Vec<String>)> {
    let rest = comment.trim().strip_prefix("name:")?;
    let (name, cats) = rest.split_once("categories:")?;
    let categories = cats
        .split(',')
        .map(|c| c.trim().to_owned())
        .filter(|c| !c.is_empty())
        .collect();
    Some((name.trim().to_owned(), categories))
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_owned(),
        source,
    })?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("lexicon");
    Lexicon::parse(&text, stem)
}

/// Per-category match counts for one token sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryHits {
    pub counts: Vec<usize>,
    pub token_count: usize,
}

impl CategoryHits {
    pub fn proportion(&self, category: usize) -> f64 {
        if self.token_count == 0 {
            0.0
        } else {
            self.counts[category] as f64 / self.token_count as f64
        }
    }

    pub fn present(&self, category: usize) -> bool {
        self.counts[category] >= 1
    }

    pub fn proportions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.counts.len()).map(|c| self.proportion(c))
    }
}

/// The seven lexicon families, in feature-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Emotions,
    Sentiment,
    BadSexual,
    Stance,
    Bias,
    Liwc,
    Morality,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Emotions,
        Family::Sentiment,
        Family::BadSexual,
        Family::Stance,
        Family::Bias,
        Family::Liwc,
        Family::Morality,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Emotions => "emotions",
            Family::Sentiment => "sentiment",
            Family::BadSexual => "bad_sexual",
            Family::Stance => "stance",
            Family::Bias => "bias",
            Family::Liwc => "liwc",
            Family::Morality => "morality",
        }
    }

    /// Row label used in reports.
    pub fn display_name(self) -> &'static str {
        match self {
            Family::Emotions => "Emotions",
            Family::Sentiment => "Sentiment",
            Family::BadSexual => "Bad & Sexual Cues",
            Family::Stance => "Stance cues",
            Family::Bias => "Bias Cues",
            Family::Liwc => "LIWC",
            Family::Morality => "Morality",
        }
    }

    pub fn categories(self) -> &'static [&'static str] {
        match self {
            Family::Emotions => &[
                "anger",
                "anticipation",
                "disgust",
                "fear",
                "joy",
                "sadness",
                "surprise",
                "trust",
            ],
            Family::Sentiment => &["positive", "negative"],
            Family::BadSexual => &["bad", "sexual"],
            Family::Stance => &[
                "belief",
                "denial",
                "doubt",
                "fake",
                "knowledge",
                "negation",
                "question",
                "report",
            ],
            Family::Bias => &[
                "assertive",
                "bias",
                "factive",
                "implicative",
                "hedge",
                "report",
                "strong_subj",
                "weak_subj",
            ],
            Family::Liwc => &[
                "pronoun", "anx", "cogmech", "insight", "cause", "discrep", "tentat", "certain",
                "inhib", "incl",
            ],
            Family::Morality => &[
                "care",
                "harm",
                "fairness",
                "cheating",
                "loyalty",
                "betrayal",
                "authority",
                "subversion",
                "sanctity",
                "degradation",
            ],
        }
    }

    pub fn dim(self) -> usize {
        self.categories().len()
    }

    /// Offset of this family's block inside the per-tweet theme vector.
    pub fn offset(self) -> usize {
        Family::ALL
            .iter()
            .take_while(|&&f| f != self)
            .map(|f| f.dim())
            .sum()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown lexicon family {s:?}"))
    }
}

/// Total per-tweet theme vector dimension.
pub const THEME_DIM: usize = 48;

/// One lexicon per family, each projected onto the family's canonical categories.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    lexicons: Vec<Lexicon>,
}

const BUILTIN: [(Family, &str); 7] = [
    (Family::Emotions, include_str!("../data/lexicons/emotions.tsv")),
    (Family::Sentiment, include_str!("../data/lexicons/sentiment.tsv")),
    (Family::BadSexual, include_str!("../data/lexicons/bad_sexual.tsv")),
    (Family::Stance, include_str!("../data/lexicons/stance.tsv")),
    (Family::Bias, include_str!("../data/lexicons/bias.tsv")),
    (Family::Liwc, include_str!("../data/lexicons/liwc.tsv")),
    (Family::Morality, include_str!("../data/lexicons/morality.tsv")),
];

impl LexiconSet {
    /// Builds a set from one lexicon per family, in [`Family::ALL`] order.
    pub fn from_lexicons(lexicons: Vec<Lexicon>) -> Result<Self, LexiconError> {
        assert_eq!(lexicons.len(), Family::ALL.len(), "one lexicon per family");
        let lexicons = lexicons
            .iter()
            .zip(Family::ALL)
            .map(|(lex, fam)| lex.project(fam.categories()))
            .collect::<Result<_, _>>()?;
        Ok(Self { lexicons })
    }

    /// The small English lexicons shipped with the crate.
    pub fn builtin() -> Self {
        let lexicons = BUILTIN
            .iter()
            .map(|(fam, text)| Lexicon::parse(text, fam.as_str()).expect("builtin lexicon"))
            .collect();
        Self::from_lexicons(lexicons).expect("builtin lexicons cover every category")
    }

    /// Loads `<family>.tsv` for each family from `dir`. Emotions and sentiment
    /// may instead both come from a single `nrc.tsv`.
    pub fn load_dir(dir: &Path) -> Result<Self, LexiconError> {
        let nrc_path = dir.join("nrc.tsv");
        let nrc = if nrc_path.exists() {
            Some(load_lexicon(&nrc_path)?)
        } else {
            None
        };
        let mut lexicons = Vec::with_capacity(7);
        for fam in Family::ALL {
            let path = dir.join(format!("{}.tsv", fam.as_str()));
            let lex = if path.exists() {
                load_lexicon(&path)?
            } else {
                match (&nrc, fam) {
                    (Some(nrc), Family::Emotions | Family::Sentiment) => nrc.clone(),
                    _ => {
                        return Err(LexiconError::MissingFamily {
                            family: fam,
                            dir: dir.to_owned(),
                        })
                    }
                }
            };
            lexicons.push(lex);
        }
        Self::from_lexicons(lexicons)
    }

    pub fn get(&self, family: Family) -> &Lexicon {
        &self.lexicons[family as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Family, &Lexicon)> {
        Family::ALL.into_iter().zip(&self.lexicons)
    }
}
