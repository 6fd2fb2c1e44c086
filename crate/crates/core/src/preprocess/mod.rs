//! Tweet tokenization and the two cleaning procedures: one feeding the topic
//! model, one feeding the writing-style features.

mod stopwords;

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{Tweet, Upos};

pub use stopwords::{is_stopword, STOPWORDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Number,
    Punct,
    EmojiOrSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
}

impl Token {
    /// Word-like tokens are the ones lexicons and bag-of-words counts see.
    pub fn is_lexical(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Word | TokenKind::Hashtag | TokenKind::Mention | TokenKind::Number
        )
    }

    /// Lowercased lookup form with any leading `#` or `@` stripped.
    pub fn lookup_form(&self) -> String {
        let s = match self.kind {
            TokenKind::Hashtag | TokenKind::Mention => &self.surface[1..],
            _ => self.surface.as_str(),
        };
        s.to_lowercase()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn count(&self, kind: TokenKind) -> usize {
        self.tokens.iter().filter(|t| t.kind == kind).count()
    }

    pub fn lexical(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_lexical())
    }

    /// Lowercased lookup forms of the lexical tokens.
    pub fn lexical_forms(&self) -> Vec<String> {
        self.lexical().map(Token::lookup_form).collect()
    }
}

const WORD_CHARS: &str = r"\p{L}\p{M}\p{N}_";

static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| {
    let pattern = format!(
        concat!(
            r"(?P<url>(?i:https?://|www\.)[^\s]+)",
            r"|(?P<mention>@[{w}]+)",
            r"|(?P<hashtag>#[{w}]+)",
            r"|(?P<number>\p{{N}}+(?:[.,:]\p{{N}}+)*(?:[{w}]*))",
            r"|(?P<word>[\p{{L}}\p{{M}}_][{w}]*(?:['’][\p{{L}}\p{{M}}]+)*)",
            r"|(?P<punct>\p{{P}})",
            r"|(?P<other>[^\s])",
        ),
        w = WORD_CHARS
    );
    Regex::new(&pattern).expect("token pattern")
});

/// Splits raw tweet text into typed tokens. URLs, hashtags and mentions stay whole.
pub fn tokenize(text: &str) -> TokenStream {
    let tokens = TOKEN_RE
        .captures_iter(text)
        .map(|caps| {
            let (kind, m) = [
                ("url", TokenKind::Url),
                ("mention", TokenKind::Mention),
                ("hashtag", TokenKind::Hashtag),
                ("number", TokenKind::Number),
                ("word", TokenKind::Word),
                ("punct", TokenKind::Punct),
                ("other", TokenKind::EmojiOrSymbol),
            ]
            .into_iter()
            .find_map(|(name, kind)| caps.name(name).map(|m| (kind, m)))
            .expect("one alternative always matches");
            Token {
                surface: m.as_str().to_owned(),
                kind,
            }
        })
        .collect();
    TokenStream { tokens }
}

/// Topic-model input for one tweet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LdaTokens {
    pub tokens: Vec<String>,
    /// True when the tweet had no annotations and the stopword fallback was used.
    pub used_fallback: bool,
}

fn clean_lda_term(surface: &str) -> String {
    surface
        .to_lowercase()
        .chars()
        .filter(|&c| c.is_alphabetic() || c.is_ascii_digit() || c == '_' || c == '#')
        .collect()
}

/// Keeps nouns, proper nouns and hashtags, lowercased and stripped of special
/// characters other than `#`. Collection hashtags are dropped.
///
/// Without annotations, falls back to every non-stopword word plus hashtags.
pub fn clean_for_lda(tweet: &Tweet, collection_hashtags: &BTreeSet<String>) -> LdaTokens {
    let mut out = Vec::new();
    let keep = |term: String, out: &mut Vec<String>| {
        let is_collection_tag = term.starts_with('#') && collection_hashtags.contains(&term);
        if !term.is_empty() && term != "#" && !is_collection_tag {
            out.push(term);
        }
    };
    let used_fallback = match &tweet.annotations {
        Some(annotations) => {
            let mut pending_hash = false;
            for tok in annotations {
                if tok.surface == "#" {
                    pending_hash = true;
                    continue;
                }
                let mut term = clean_lda_term(&tok.surface);
                let hashtag = pending_hash || tok.surface.starts_with('#');
                if pending_hash && !term.starts_with('#') {
                    term.insert(0, '#');
                }
                pending_hash = false;
                if hashtag || matches!(tok.upos, Upos::Noun | Upos::Propn) {
                    keep(term, &mut out);
                }
            }
            false
        }
        None => {
            for tok in tokenize(&tweet.text).tokens {
                match tok.kind {
                    TokenKind::Hashtag => keep(clean_lda_term(&tok.surface), &mut out),
                    TokenKind::Word => {
                        let lower = tok.surface.to_lowercase();
                        if !is_stopword(&lower) {
                            keep(clean_lda_term(&lower), &mut out);
                        }
                    }
                    _ => {}
                }
            }
            true
        }
    };
    LdaTokens {
        tokens: out,
        used_fallback,
    }
}

/// Strips everything but letters, digits, spaces, dots and commas, keeping
/// case. Dot runs become one dot, runs of three or more identical characters
/// become one, whitespace runs become one space.
pub fn clean_for_nli(text: &str) -> String {
    let kept: Vec<char> = text
        .chars()
        .filter_map(|c| {
            if c.is_whitespace() {
                Some(' ')
            } else if c.is_alphanumeric() || c == '.' || c == ',' {
                Some(c)
            } else {
                None
            }
        })
        .collect();

    let mut out = String::with_capacity(kept.len());
    let mut i = 0;
    while i < kept.len() {
        let c = kept[i];
        let mut j = i + 1;
        while j < kept.len() && kept[j] == c {
            j += 1;
        }
        let run = j - i;
        let emit = if c == '.' || c == ' ' || run >= 3 { 1 } else { run };
        out.extend(std::iter::repeat_n(c, emit));
        i = j;
    }
    out.trim_matches(' ').to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Deprel, TokenAnnotation};
    use proptest::prelude::*;

    fn kinds(text: &str) -> Vec<(String, TokenKind)> {
        tokenize(text)
            .tokens
            .into_iter()
            .map(|t| (t.surface, t.kind))
            .collect()
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \n").is_empty());
    }

    #[test]
    fn tokenize_mention_and_punct() {
        use TokenKind::*;
        let got = kinds("@RickMad: Questions are a joke");
        let want: Vec<(String, TokenKind)> = [
            ("@RickMad", Mention),
            (":", Punct),
            ("Questions", Word),
            ("are", Word),
            ("a", Word),
            ("joke", Word),
        ]
        .into_iter()
        .map(|(s, k)| (s.to_owned(), k))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn tokenize_hashtag_game() {
        let ts = tokenize("#OffendEveryoneIn4Words undocumented immigrants are ILLEGALS");
        assert_eq!(ts.tokens[0].kind, TokenKind::Hashtag);
        assert_eq!(ts.tokens[0].surface, "#OffendEveryoneIn4Words");
        assert_eq!(ts.count(TokenKind::Word), 4);
    }

    #[test]
    fn tokenize_urls_numbers_symbols() {
        use TokenKind::*;
        let got = kinds("see http://t.co/GGpZMvnEAj cat vs trashcan 3.5 ❤");
        assert_eq!(got[1], ("http://t.co/GGpZMvnEAj".to_owned(), Url));
        assert_eq!(got[5], ("3.5".to_owned(), Number));
        assert_eq!(got[6].1, EmojiOrSymbol);
        assert_eq!(kinds("don't")[0], ("don't".to_owned(), Word));
    }

    fn annotated(text: &str, tags: &[(&str, Upos)]) -> Tweet {
        Tweet {
            id: "t".into(),
            account_id: "u".into(),
            text: text.into(),
            timestamp: None,
            annotations: Some(
                tags.iter()
                    .map(|&(s, u)| TokenAnnotation::new(s, u, Deprel::Dep))
                    .collect(),
            ),
        }
    }

    #[test]
    fn lda_keeps_nouns() {
        let t = annotated(
            "Police shot a man",
            &[("Police", Upos::Noun), ("shot", Upos::Verb), ("a", Upos::Det), ("man", Upos::Noun)],
        );
        let out = clean_for_lda(&t, &BTreeSet::new());
        assert_eq!(out.tokens, ["police", "man"]);
        assert!(!out.used_fallback);
    }

    #[test]
    fn lda_drops_collection_hashtags() {
        let t = annotated(
            "#trump rally tonight",
            &[("#trump", Upos::Propn), ("rally", Upos::Noun), ("tonight", Upos::Noun)],
        );
        let tags: BTreeSet<String> = ["#trump".to_owned()].into();
        assert_eq!(clean_for_lda(&t, &tags).tokens, ["rally", "tonight"]);

        // A tagger that splits the hash sign off still yields one hashtag.
        let split = annotated(
            "#maga now",
            &[("#", Upos::Sym), ("MAGA", Upos::Propn), ("now", Upos::Adv)],
        );
        assert_eq!(clean_for_lda(&split, &tags).tokens, ["#maga"]);
    }

    #[test]
    fn lda_empty_and_fallback() {
        let empty = annotated("", &[]);
        assert!(clean_for_lda(&empty, &BTreeSet::new()).tokens.is_empty());

        let raw = Tweet {
            annotations: None,
            ..annotated("The Police shot #BLM!", &[])
        };
        let out = clean_for_lda(&raw, &BTreeSet::new());
        assert_eq!(out.tokens, ["police", "shot", "#blm"]);
        assert!(out.used_fallback);
    }

    #[test]
    fn nli_cleaning_examples() {
        assert_eq!(clean_for_nli("Sooo coool....right???"), "So col.right");
        assert_eq!(clean_for_nli("Hello, World."), "Hello, World.");
        assert_eq!(clean_for_nli("a....b"), "a.b");
        assert_eq!(clean_for_nli("#tag @user  RT!"), "tag user RT");
        assert_eq!(clean_for_nli(""), "");
    }

    proptest! {
        #[test]
        fn nli_cleaning_is_idempotent(s in "[a-cA-C .,!?#@\\t\\n😀é]{0,40}") {
            let once = clean_for_nli(&s);
            prop_assert_eq!(clean_for_nli(&once), once);
        }

        #[test]
        fn lda_vocabulary_charset(words in proptest::collection::vec("[a-zA-Z0-9#@!?.,'é_-]{1,8}", 0..8)) {
            let tags: Vec<(&str, Upos)> = words.iter().map(|w| (w.as_str(), Upos::Noun)).collect();
            let t = annotated(&words.join(" "), &tags);
            for tok in clean_for_lda(&t, &BTreeSet::new()).tokens {
                prop_assert!(tok.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()
                    || c == '#' || c == '_' || (c.is_alphabetic() && !c.is_ascii())));
            }
        }

        #[test]
        fn hashtag_count_matches_regex(s in "[a-z #@!.]{0,40}") {
            let naive = Regex::new(r"#[\p{L}\p{M}\p{N}_]+").unwrap().find_iter(&s).count();
            prop_assert_eq!(tokenize(&s).count(TokenKind::Hashtag), naive);
        }

        #[test]
        fn no_word_is_lost(s in "\\PC{0,40}") {
            let ts = tokenize(&s);
            let joined = ts.tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
            for tok in ts.tokens.iter().filter(|t| t.kind == TokenKind::Word) {
                prop_assert!(joined.contains(&tok.surface));
            }
            let non_space: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            let rebuilt: String = ts.tokens.iter().map(|t| t.surface.as_str()).collect();
            prop_assert_eq!(rebuilt.chars().filter(|c| !c.is_whitespace()).collect::<String>(), non_space);
        }
    }
}
