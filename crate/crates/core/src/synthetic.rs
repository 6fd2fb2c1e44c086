//! Generated corpora with a known troll signal, for tests, benches and demos.
//!
//! Every tweet belongs to one of seven themes with disjoint noun
//! vocabularies. Trolls flip between fear (first four themes) and joy (the
//! rest) and rarely use articles; regular users mix both emotions evenly
//! across themes. Tweets come with UD annotations.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, CorpusBuilder, Deprel, Label, TokenAnnotation, Upos};

pub const THEME_NOUNS: [[&str; 12]; 7] = [
    ["police", "officer", "cop", "shooting", "gun", "badge", "patrol", "precinct", "sheriff", "squad", "arrest", "siren"],
    ["islam", "war", "mosque", "soldier", "army", "missile", "border", "refugee", "bomb", "troop", "drone", "embassy"],
    ["trump", "rally", "wall", "campaign", "voter", "maga", "podium", "ballot", "senate", "governor", "congress", "poll"],
    ["community", "neighborhood", "church", "pastor", "choir", "school", "teacher", "family", "parent", "youth", "mural", "street"],
    ["rights", "protest", "march", "court", "judge", "petition", "activist", "union", "justice", "statute", "amendment", "law"],
    ["hillary", "email", "server", "foundation", "scandal", "speech", "donor", "banker", "wallstreet", "pantsuit", "benghazi", "clinton"],
    ["crime", "victim", "child", "woman", "prison", "suspect", "trial", "robbery", "jail", "gang", "lawyer", "verdict"],
];

pub const THEME_HASHTAGS: [[&str; 2]; 7] = [
    ["#bluelives", "#copwatch"],
    ["#warzone", "#refugees"],
    ["#maga", "#trumptrain"],
    ["#blacklivesmatter", "#blacktwitter"],
    ["#civilrights", "#equality"],
    ["#crookedhillary", "#lockherup"],
    ["#crimewatch", "#justiceforvictims"],
];

pub const COLLECTION_HASHTAGS: [&str; 5] = ["#trump", "#clinton", "#election", "#debate", "#vote"];

const FEAR: [&str; 5] = ["afraid", "scared", "terror", "panic", "horror"];
const JOY: [&str; 5] = ["happy", "wonderful", "celebrate", "excited", "delight"];
const PRONOUNS: [&str; 5] = ["i", "we", "they", "he", "she"];
const VERBS: [&str; 6] = ["see", "want", "know", "need", "hear", "say"];
const PREPOSITIONS: [&str; 3] = ["of", "in", "with"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub accounts: usize,
    pub troll_fraction: f64,
    pub tweets_per_account: usize,
    pub seed: u64,
    /// Probability that a troll tweet carries its theme's emotion.
    pub troll_emotion_rate: f64,
    /// Probability that a troll uses an article before a noun (regular users: 0.7).
    pub troll_article_rate: f64,
    pub annotate: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            accounts: 1000,
            troll_fraction: 0.02,
            tweets_per_account: 50,
            seed: 1,
            troll_emotion_rate: 0.8,
            troll_article_rate: 0.15,
            annotate: true,
        }
    }
}

impl SyntheticConfig {
    pub fn troll_count(&self) -> usize {
        ((self.accounts as f64 * self.troll_fraction).round() as usize).min(self.accounts)
    }
}

/// Trolls come first (`troll0000`, ...), then regular users (`user0000`, ...).
pub fn generate(config: &SyntheticConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut builder = CorpusBuilder::new();
    builder.collection_hashtags(COLLECTION_HASHTAGS);
    let trolls = config.troll_count();
    for a in 0..config.accounts {
        let troll = a < trolls;
        let (id, label) = if troll {
            (format!("troll{a:04}"), Label::Troll)
        } else {
            (format!("user{:04}", a - trolls), Label::Regular)
        };
        let followers = rng.random_range(0..5000);
        let followees = rng.random_range(0..5000);
        builder
            .add_account(id.clone(), label, followers, followees)
            .expect("generated ids are unique");
        for t in 0..config.tweets_per_account {
            let theme = rng.random_range(0..THEME_NOUNS.len());
            let tokens = synth_tweet(&mut rng, theme, troll, config);
            let text = tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
            builder
                .add_tweet(format!("{id}-{t:03}"), id.clone(), text, config.annotate.then_some(tokens))
                .expect("generated ids are unique");
        }
    }
    builder.build().expect("generated corpus is consistent")
}

fn tok(surface: &str, upos: Upos, deprel: Deprel) -> TokenAnnotation {
    TokenAnnotation::new(surface, upos, deprel)
}

fn synth_tweet(rng: &mut ChaCha8Rng, theme: usize, troll: bool, config: &SyntheticConfig) -> Vec<TokenAnnotation> {
    let article_rate = if troll { config.troll_article_rate } else { 0.7 };
    let mut out = vec![
        tok(PRONOUNS.choose(rng).unwrap(), Upos::Pron, Deprel::Nsubj),
        tok(VERBS.choose(rng).unwrap(), Upos::Verb, Deprel::Root),
    ];
    let nouns = rng.random_range(3..=5);
    for n in 0..nouns {
        if n > 0 {
            if rng.random_bool(0.5) {
                out.push(tok(PREPOSITIONS.choose(rng).unwrap(), Upos::Adp, Deprel::Case));
            } else {
                out.push(tok("and", Upos::Cconj, Deprel::Cc));
            }
        }
        if rng.random_bool(article_rate) {
            let article = if rng.random_bool(0.6) { "the" } else { "a" };
            out.push(tok(article, Upos::Det, Deprel::Det));
        }
        let noun = THEME_NOUNS[theme].choose(rng).unwrap();
        let deprel = if n == 0 { Deprel::Obj } else { Deprel::Conj };
        out.push(tok(noun, Upos::Noun, deprel));
    }
    let emotion = if troll {
        rng.random_bool(config.troll_emotion_rate)
            .then_some(if theme < 4 { &FEAR } else { &JOY })
    } else {
        match rng.random_range(0..10) {
            0..=3 => Some(&FEAR),
            4..=6 => Some(&JOY),
            _ => None,
        }
    };
    if let Some(words) = emotion {
        let very = if troll { 0.6 } else { 0.1 };
        if rng.random_bool(very) {
            out.push(tok("very", Upos::Adv, Deprel::Advmod));
        }
        out.push(tok(words.choose(rng).unwrap(), Upos::Adj, Deprel::Amod));
    }
    if rng.random_bool(0.3) {
        out.push(tok(THEME_HASHTAGS[theme].choose(rng).unwrap(), Upos::Propn, Deprel::Dep));
    }
    if rng.random_bool(0.15) {
        out.push(tok(COLLECTION_HASHTAGS.choose(rng).unwrap(), Upos::Propn, Deprel::Dep));
    }
    if rng.random_bool(0.1) {
        let mention = format!("@user{}", rng.random_range(0..500));
        out.insert(0, tok(&mention, Upos::Propn, Deprel::Vocative));
    }
    if rng.random_bool(0.1) {
        let url = format!("https://t.co/{:08x}", rng.random::<u32>());
        out.push(tok(&url, Upos::X, Deprel::Dep));
    }
    let end = if rng.random_bool(0.2) { "!" } else { "." };
    out.push(tok(end, Upos::Punct, Deprel::Punct));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_stats;

    #[test]
    fn sizes_and_labels() {
        let cfg = SyntheticConfig {
            accounts: 100,
            tweets_per_account: 5,
            ..Default::default()
        };
        let corpus = generate(&cfg);
        let stats = corpus_stats(&corpus);
        assert_eq!(stats.troll_accounts, 2);
        assert_eq!(stats.regular_accounts, 98);
        assert_eq!(stats.total_tweets, 500);
        assert_eq!(corpus.annotated_tweet_count(), 500);
    }

    #[test]
    fn deterministic() {
        let cfg = SyntheticConfig {
            accounts: 20,
            tweets_per_account: 3,
            ..Default::default()
        };
        let (a, b) = (generate(&cfg), generate(&cfg));
        assert_eq!(a.tweets(), b.tweets());
    }

    #[test]
    fn theme_vocabularies_are_disjoint() {
        let mut seen = std::collections::HashSet::new();
        for theme in THEME_NOUNS {
            for noun in theme {
                assert!(seen.insert(noun), "{noun} repeated");
            }
        }
    }
}
