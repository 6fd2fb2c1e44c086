//! Labeled accounts, their tweets, and external token annotations.

mod conllu;
mod ud;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use conllu::{load_conllu, parse_conllu, write_conllu, ConlluError};
pub use ud::{Deprel, Upos};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed JSON: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: missing or mistyped field `{field}`")]
    MissingField { line: usize, field: &'static str },
    #[error("duplicate {what} id {id:?} on lines {first} and {second}")]
    DuplicateId {
        what: &'static str,
        id: String,
        first: usize,
        second: usize,
    },
    #[error("line {line}: tweet {tweet_id:?} references unknown account {account_id:?}")]
    DanglingTweetReference {
        line: usize,
        tweet_id: String,
        account_id: String,
    },
    #[error("line {line}: unknown label {label:?} (expected \"troll\" or \"regular\")")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: unknown record kind {kind:?}")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: invalid timestamp {value:?}")]
    InvalidTimestamp { line: usize, value: String },
    #[error("line {line}: empty id")]
    EmptyId { line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Troll,
    Regular,
}

impl Label {
    /// Binary target: troll is the positive class.
    pub fn as_target(self) -> u8 {
        match self {
            Label::Troll => 1,
            Label::Regular => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Troll => "troll",
            Label::Regular => "regular",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "troll" => Ok(Label::Troll),
            "regular" => Ok(Label::Regular),
            _ => Err(()),
        }
    }
}

/// One token as produced by an external tagger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenAnnotation {
    pub surface: String,
    pub upos: Upos,
    pub deprel: Deprel,
}

impl TokenAnnotation {
    pub fn new(surface: impl Into<String>, upos: Upos, deprel: Deprel) -> Self {
        Self {
            surface: surface.into(),
            upos,
            deprel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub account_id: String,
    /// Raw text exactly as ingested.
    pub text: String,
    pub timestamp: Option<DateTime<Utc>>,
    pub annotations: Option<Vec<TokenAnnotation>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Account {
    pub id: String,
    pub label: Label,
    pub followers: u64,
    pub followees: u64,
    pub tweet_ids: Vec<String>,
}

/// An immutable, validated collection of accounts and tweets.
///
/// Every tweet belongs to exactly one account, and accounts list their
/// tweets in ingestion order.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    accounts: Vec<Account>,
    account_index: HashMap<String, usize>,
    tweets: Vec<Tweet>,
    tweet_index: HashMap<String, usize>,
    collection_hashtags: BTreeSet<String>,
}

impl Corpus {
    pub fn accounts(&self) -> &[Account] {
        &self.accounts
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn collection_hashtags(&self) -> &BTreeSet<String> {
        &self.collection_hashtags
    }

    pub fn account(&self, id: &str) -> Option<&Account> {
        self.account_index.get(id).map(|&i| &self.accounts[i])
    }

    pub fn tweet(&self, id: &str) -> Option<&Tweet> {
        self.tweet_index.get(id).map(|&i| &self.tweets[i])
    }

    /// Position of a tweet in [`Corpus::tweets`].
    pub fn tweet_position(&self, id: &str) -> Option<usize> {
        self.tweet_index.get(id).copied()
    }

    /// Tweets of one account, in ingestion order.
    pub fn tweets_of<'a>(&'a self, account: &'a Account) -> impl Iterator<Item = &'a Tweet> + 'a {
        account
            .tweet_ids
            .iter()
            .map(move |id| &self.tweets[self.tweet_index[id]])
    }

    /// Binary targets (troll = 1) in account order.
    pub fn targets(&self) -> Vec<u8> {
        self.accounts.iter().map(|a| a.label.as_target()).collect()
    }

    /// Attaches tagger output to tweets. Returns the ids that matched no tweet.
    pub fn attach_annotations<I>(&mut self, annotations: I) -> Vec<String>
    where
        I: IntoIterator<Item = (String, Vec<TokenAnnotation>)>,
    {
        let mut unmatched = Vec::new();
        for (id, tokens) in annotations {
            match self.tweet_index.get(&id) {
                Some(&i) => self.tweets[i].annotations = Some(tokens),
                None => unmatched.push(id),
            }
        }
        unmatched.sort();
        unmatched
    }

    pub fn annotated_tweet_count(&self) -> usize {
        self.tweets.iter().filter(|t| t.annotations.is_some()).count()
    }

    /// Writes the corpus in the JSONL interchange format read by [`load_corpus`].
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let meta = serde_json::json!({
            "kind": "meta",
            "collection_hashtags": self.collection_hashtags,
        });
        writeln!(out, "{meta}")?;
        for account in &self.accounts {
            let line = serde_json::json!({
                "kind": "account",
                "id": account.id,
                "label": account.label.as_str(),
                "followers": account.followers,
                "followees": account.followees,
            });
            writeln!(out, "{line}")?;
        }
        for tweet in &self.tweets {
            let mut line = serde_json::json!({
                "kind": "tweet",
                "id": tweet.id,
                "account_id": tweet.account_id,
                "text": tweet.text,
            });
            if let Some(ts) = tweet.timestamp {
                line["timestamp"] = Value::String(ts.to_rfc3339());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Incrementally assembles a [`Corpus`], enforcing its invariants.
///
/// Line numbers are only used for diagnostics; programmatic callers may pass
/// a running counter.
#[derive(Debug, Default)]
pub struct CorpusBuilder {
    accounts: Vec<(usize, Account)>,
    account_lines: HashMap<String, usize>,
    tweets: Vec<(usize, Tweet)>,
    tweet_lines: HashMap<String, usize>,
    collection_hashtags: BTreeSet<String>,
    next_line: usize,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn collection_hashtags<I, S>(&mut self, tags: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for tag in tags {
            let tag = tag.as_ref().to_lowercase();
            let tag = if tag.starts_with('#') { tag } else { format!("#{tag}") };
            self.collection_hashtags.insert(tag);
        }
        self
    }

    fn line(&mut self, line: Option<usize>) -> usize {
        self.next_line += 1;
        line.unwrap_or(self.next_line)
    }

    pub fn add_account(
        &mut self,
        id: impl Into<String>,
        label: Label,
        followers: u64,
        followees: u64,
    ) -> Result<&mut Self, CorpusError> {
        self.push_account(None, id.into(), label, followers, followees)?;
        Ok(self)
    }

    pub fn add_tweet(
        &mut self,
        id: impl Into<String>,
        account_id: impl Into<String>,
        text: impl Into<String>,
        annotations: Option<Vec<TokenAnnotation>>,
    ) -> Result<&mut Self, CorpusError> {
        let tweet = Tweet {
            id: id.into(),
            account_id: account_id.into(),
            text: text.into(),
            timestamp: None,
            annotations,
        };
        self.push_tweet(None, tweet)?;
        Ok(self)
    }

    fn push_account(
        &mut self,
        line: Option<usize>,
        id: String,
        label: Label,
        followers: u64,
        followees: u64,
    ) -> Result<(), CorpusError> {
        let line = self.line(line);
        if id.is_empty() {
            return Err(CorpusError::EmptyId { line });
        }
        if let Some(&first) = self.account_lines.get(&id) {
            return Err(CorpusError::DuplicateId {
                what: "account",
                id,
                first,
                second: line,
            });
        }
        self.account_lines.insert(id.clone(), line);
        self.accounts.push((
            line,
            Account {
                id,
                label,
                followers,
                followees,
                tweet_ids: Vec::new(),
            },
        ));
        Ok(())
    }

    fn push_tweet(&mut self, line: Option<usize>, tweet: Tweet) -> Result<(), CorpusError> {
        let line = self.line(line);
        if tweet.id.is_empty() {
            return Err(CorpusError::EmptyId { line });
        }
        if let Some(&first) = self.tweet_lines.get(&tweet.id) {
            return Err(CorpusError::DuplicateId {
                what: "tweet",
                id: tweet.id,
                first,
                second: line,
            });
        }
        self.tweet_lines.insert(tweet.id.clone(), line);
        self.tweets.push((line, tweet));
        Ok(())
    }

    pub fn build(self) -> Result<Corpus, CorpusError> {
        let mut accounts: Vec<Account> = self.accounts.into_iter().map(|(_, a)| a).collect();
        let account_index: HashMap<String, usize> = accounts
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        let mut tweets = Vec::with_capacity(self.tweets.len());
        let mut tweet_index = HashMap::with_capacity(self.tweets.len());
        for (line, tweet) in self.tweets {
            let Some(&owner) = account_index.get(&tweet.account_id) else {
                return Err(CorpusError::DanglingTweetReference {
                    line,
                    tweet_id: tweet.id,
                    account_id: tweet.account_id,
                });
            };
            accounts[owner].tweet_ids.push(tweet.id.clone());
            tweet_index.insert(tweet.id.clone(), tweets.len());
            tweets.push(tweet);
        }
        Ok(Corpus {
            accounts,
            account_index,
            tweets,
            tweet_index,
            collection_hashtags: self.collection_hashtags,
        })
    }
}

/// Supported on-disk corpus encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    #[default]
    Jsonl,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })?;
    match format {
        CorpusFormat::Jsonl => read_jsonl(BufReader::new(file), path),
    }
}

fn read_jsonl<R: BufRead>(reader: R, path: &Path) -> Result<Corpus, CorpusError> {
    let mut builder = CorpusBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_owned(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Value = serde_json::from_str(&line).map_err(|e| CorpusError::Json {
            line: line_no,
            message: e.to_string(),
        })?;
        let kind = str_field(&record, "kind", line_no)?;
        match kind {
            "meta" => {
                let tags = record
                    .get("collection_hashtags")
                    .and_then(Value::as_array)
                    .ok_or(CorpusError::MissingField {
                        line: line_no,
                        field: "collection_hashtags",
                    })?;
                let mut names = Vec::with_capacity(tags.len());
                for tag in tags {
                    names.push(tag.as_str().ok_or(CorpusError::MissingField {
                        line: line_no,
                        field: "collection_hashtags",
                    })?);
                }
                builder.collection_hashtags(names);
            }
            "account" => {
                let id = str_field(&record, "id", line_no)?.to_owned();
                let label_raw = str_field(&record, "label", line_no)?;
                let label = label_raw.parse().map_err(|_| CorpusError::UnknownLabel {
                    line: line_no,
                    label: label_raw.to_owned(),
                })?;
                let followers = u64_field(&record, "followers", line_no)?;
                let followees = u64_field(&record, "followees", line_no)?;
                builder.push_account(Some(line_no), id, label, followers, followees)?;
            }
            "tweet" => {
                let timestamp = match record.get("timestamp") {
                    None | Some(Value::Null) => None,
                    Some(Value::String(s)) => Some(
                        DateTime::parse_from_rfc3339(s)
                            .map_err(|_| CorpusError::InvalidTimestamp {
                                line: line_no,
                                value: s.clone(),
                            })?
                            .with_timezone(&Utc),
                    ),
                    Some(other) => {
                        return Err(CorpusError::InvalidTimestamp {
                            line: line_no,
                            value: other.to_string(),
                        })
                    }
                };
                let tweet = Tweet {
                    id: str_field(&record, "id", line_no)?.to_owned(),
                    account_id: str_field(&record, "account_id", line_no)?.to_owned(),
                    text: str_field(&record, "text", line_no)?.to_owned(),
                    timestamp,
                    annotations: None,
                };
                builder.push_tweet(Some(line_no), tweet)?;
            }
            other => {
                return Err(CorpusError::UnknownKind {
                    line: line_no,
                    kind: other.to_owned(),
                })
            }
        }
    }
    builder.build()
}

fn str_field<'a>(record: &'a Value, field: &'static str, line: usize) -> Result<&'a str, CorpusError> {
    record
        .get(field)
        .and_then(Value::as_str)
        .ok_or(CorpusError::MissingField { line, field })
}

fn u64_field(record: &Value, field: &'static str, line: usize) -> Result<u64, CorpusError> {
    record
        .get(field)
        .and_then(Value::as_u64)
        .ok_or(CorpusError::MissingField { line, field })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub troll_accounts: usize,
    pub regular_accounts: usize,
    pub total_accounts: usize,
    pub troll_tweets: usize,
    pub regular_tweets: usize,
    pub total_tweets: usize,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for account in corpus.accounts() {
        let n = account.tweet_ids.len();
        match account.label {
            Label::Troll => {
                stats.troll_accounts += 1;
                stats.troll_tweets += n;
            }
            Label::Regular => {
                stats.regular_accounts += 1;
                stats.regular_tweets += n;
            }
        }
    }
    stats.total_accounts = stats.troll_accounts + stats.regular_accounts;
    stats.total_tweets = stats.troll_tweets + stats.regular_tweets;
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<Corpus, CorpusError> {
        read_jsonl(Cursor::new(text), Path::new("<mem>"))
    }

    #[test]
    fn minimal_file() {
        let corpus = parse(concat!(
            r#"{"kind":"account","id":"u1","label":"troll","followers":3,"followees":4}"#,
            "\n",
            r#"{"kind":"tweet","id":"t1","account_id":"u1","text":"hello  world"}"#,
        ))
        .unwrap();
        assert_eq!(corpus.accounts().len(), 1);
        assert_eq!(corpus.tweets().len(), 1);
        assert_eq!(corpus.tweet("t1").unwrap().text, "hello  world");
        assert_eq!(corpus.accounts()[0].tweet_ids, vec!["t1"]);
    }

    #[test]
    fn duplicate_tweet_names_both_lines() {
        let err = parse(concat!(
            r#"{"kind":"account","id":"u1","label":"troll","followers":0,"followees":0}"#,
            "\n",
            r#"{"kind":"tweet","id":"t1","account_id":"u1","text":"a"}"#,
            "\n",
            r#"{"kind":"tweet","id":"t1","account_id":"u1","text":"b"}"#,
        ))
        .unwrap_err();
        match err {
            CorpusError::DuplicateId { id, first, second, .. } => {
                assert_eq!((id.as_str(), first, second), ("t1", 2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_paths() {
        let dangling = parse(r#"{"kind":"tweet","id":"t1","account_id":"ghost","text":"a"}"#);
        assert!(matches!(dangling, Err(CorpusError::DanglingTweetReference { line: 1, .. })));

        let label = parse(r#"{"kind":"account","id":"u","label":"bot","followers":0,"followees":0}"#);
        assert!(matches!(label, Err(CorpusError::UnknownLabel { .. })));

        let missing = parse(r#"{"kind":"account","id":"u","label":"troll","followees":0}"#);
        assert!(matches!(
            missing,
            Err(CorpusError::MissingField { field: "followers", .. })
        ));

        let bad_json = parse("{\"kind\":\n");
        assert!(matches!(bad_json, Err(CorpusError::Json { line: 1, .. })));
    }

    #[test]
    fn meta_and_timestamps() {
        let corpus = parse(concat!(
            r##"{"kind":"meta","collection_hashtags":["#Trump","clinton"]}"##,
            "\n",
            r#"{"kind":"account","id":"u1","label":"regular","followers":0,"followees":0}"#,
            "\n",
            r#"{"kind":"tweet","id":"t1","account_id":"u1","text":"x","timestamp":"2016-10-09T20:00:00Z"}"#,
        ))
        .unwrap();
        let tags: Vec<_> = corpus.collection_hashtags().iter().cloned().collect();
        assert_eq!(tags, vec!["#clinton", "#trump"]);
        assert!(corpus.tweet("t1").unwrap().timestamp.is_some());
    }

    #[test]
    fn stats_count_by_class() {
        assert_eq!(corpus_stats(&Corpus::default()), CorpusStats::default());

        let mut b = CorpusBuilder::new();
        b.add_account("troll", Label::Troll, 0, 0).unwrap();
        b.add_account("r1", Label::Regular, 0, 0).unwrap();
        b.add_account("r2", Label::Regular, 0, 0).unwrap();
        for i in 0..3 {
            b.add_tweet(format!("t{i}"), "troll", "x", None).unwrap();
        }
        b.add_tweet("a", "r1", "x", None).unwrap();
        b.add_tweet("b", "r2", "x", None).unwrap();
        let stats = corpus_stats(&b.build().unwrap());
        assert_eq!(
            stats,
            CorpusStats {
                troll_accounts: 1,
                regular_accounts: 2,
                total_accounts: 3,
                troll_tweets: 3,
                regular_tweets: 2,
                total_tweets: 5,
            }
        );
    }

    #[test]
    fn jsonl_roundtrip() {
        let mut b = CorpusBuilder::new();
        b.collection_hashtags(["#vote"]);
        b.add_account("u", Label::Troll, 10, 20).unwrap();
        b.add_tweet("t", "u", "\"quoted\"\n text", None).unwrap();
        let corpus = b.build().unwrap();
        let mut buf = Vec::new();
        corpus.write_jsonl(&mut buf).unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.accounts(), corpus.accounts());
        assert_eq!(back.tweets(), corpus.tweets());
        assert_eq!(back.collection_hashtags(), corpus.collection_hashtags());
    }
}
