use std::collections::HashMap;
use std::fs::File;
use std::io::BufWriter;

use proptest::prelude::*;
use trolllens::corpus::{
    corpus_stats, load_conllu, load_corpus, parse_conllu, write_conllu, Corpus, CorpusBuilder, CorpusFormat,
    CorpusStats, Deprel, Label, TokenAnnotation, Upos,
};

fn build(accounts: &[(Label, usize)]) -> Corpus {
    let mut b = CorpusBuilder::new();
    for (i, &(label, tweets)) in accounts.iter().enumerate() {
        b.add_account(format!("a{i}"), label, 0, 0).unwrap();
        for t in 0..tweets {
            b.add_tweet(format!("a{i}-{t}"), format!("a{i}"), "text", None).unwrap();
        }
    }
    b.build().unwrap()
}

/// Counts by walking tweets and looking up each owner's label.
fn recount(corpus: &Corpus) -> CorpusStats {
    let mut s = CorpusStats::default();
    for a in corpus.accounts() {
        match a.label {
            Label::Troll => s.troll_accounts += 1,
            Label::Regular => s.regular_accounts += 1,
        }
    }
    for t in corpus.tweets() {
        match corpus.account(&t.account_id).unwrap().label {
            Label::Troll => s.troll_tweets += 1,
            Label::Regular => s.regular_tweets += 1,
        }
    }
    s.total_accounts = corpus.accounts().len();
    s.total_tweets = corpus.tweets().len();
    s
}

#[test]
fn full_collection_account_counts() {
    let mut accounts = vec![(Label::Troll, 1); 2023];
    accounts.extend(vec![(Label::Regular, 1); 94_643]);
    let s = corpus_stats(&build(&accounts));
    assert_eq!(s.troll_accounts, 2023);
    assert_eq!(s.regular_accounts, 94_643);
    assert_eq!(s.total_accounts, 96_666);
}

#[test]
fn small_corpus_counts() {
    let s = corpus_stats(&build(&[(Label::Troll, 3), (Label::Regular, 1), (Label::Regular, 1)]));
    assert_eq!(
        s,
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
fn empty_corpus_is_all_zero() {
    assert_eq!(corpus_stats(&build(&[])), CorpusStats::default());
}

#[test]
fn jsonl_round_trip() {
    let corpus = trolllens::synthetic::generate(&trolllens::synthetic::SyntheticConfig {
        accounts: 20,
        tweets_per_account: 4,
        troll_fraction: 0.1,
        annotate: false,
        ..Default::default()
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    corpus.write_jsonl(BufWriter::new(File::create(&path).unwrap())).unwrap();
    let back = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
    assert_eq!(back.accounts(), corpus.accounts());
    assert_eq!(back.tweets(), corpus.tweets());
    assert_eq!(back.collection_hashtags(), corpus.collection_hashtags());
}

#[test]
fn conllu_fixture() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/three_blocks.conllu");
    let ann = load_conllu(&path).unwrap();
    let t1 = vec![
        TokenAnnotation::new("Vote", Upos::Verb, Deprel::Root),
        TokenAnnotation::new("now", Upos::Adv, Deprel::Advmod),
        TokenAnnotation::new("!", Upos::Punct, Deprel::Punct),
        TokenAnnotation::new("Go", Upos::Verb, Deprel::Root),
        TokenAnnotation::new("@bob", Upos::Propn, Deprel::Obl),
    ];
    let t2 = vec![
        TokenAnnotation::new("ca", Upos::Aux, Deprel::Aux),
        TokenAnnotation::new("n't", Upos::Part, Deprel::Advmod),
        TokenAnnotation::new("wait", Upos::Verb, Deprel::Root),
    ];
    assert_eq!(ann.len(), 2);
    assert_eq!(ann["t1"], t1);
    assert_eq!(ann["t2"], t2);
}

#[test]
fn conllu_attaches_to_matching_tweets() {
    let mut b = CorpusBuilder::new();
    b.add_account("u", Label::Troll, 0, 0).unwrap();
    b.add_tweet("t1", "u", "Vote now! Go @bob", None).unwrap();
    b.add_tweet("t3", "u", "unannotated", None).unwrap();
    let mut corpus = b.build().unwrap();
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/three_blocks.conllu");
    let unmatched = corpus.attach_annotations(load_conllu(&path).unwrap());
    assert_eq!(unmatched, ["t2"]);
    assert_eq!(corpus.annotated_tweet_count(), 1);
    assert_eq!(corpus.tweet("t1").unwrap().annotations.as_ref().unwrap().len(), 5);
    assert!(corpus.tweet("t3").unwrap().annotations.is_none());
}

fn arb_annotations() -> impl Strategy<Value = Vec<Vec<(String, usize, usize)>>> {
    proptest::collection::vec(
        proptest::collection::vec(("[A-Za-z@#!.']{1,6}", 0..Upos::ALL.len(), 0..Deprel::ALL.len()), 1..6),
        0..5,
    )
}

proptest! {
    #[test]
    fn stats_match_recount(labels in proptest::collection::vec((any::<bool>(), 0usize..6), 0..40)) {
        let accounts: Vec<(Label, usize)> = labels
            .iter()
            .map(|&(troll, n)| (if troll { Label::Troll } else { Label::Regular }, n))
            .collect();
        let corpus = build(&accounts);
        let s = corpus_stats(&corpus);
        prop_assert_eq!(s, recount(&corpus));
        prop_assert_eq!(s.troll_accounts + s.regular_accounts, s.total_accounts);
        prop_assert_eq!(s.troll_tweets + s.regular_tweets, s.total_tweets);
    }

    #[test]
    fn stats_ignore_account_order(mut labels in proptest::collection::vec((any::<bool>(), 0usize..6), 0..30)) {
        let to_accounts = |l: &[(bool, usize)]| -> Vec<(Label, usize)> {
            l.iter().map(|&(t, n)| (if t { Label::Troll } else { Label::Regular }, n)).collect()
        };
        let a = corpus_stats(&build(&to_accounts(&labels)));
        labels.reverse();
        prop_assert_eq!(a, corpus_stats(&build(&to_accounts(&labels))));
    }

    #[test]
    fn conllu_write_then_read(blocks in arb_annotations()) {
        let ann: std::collections::BTreeMap<String, Vec<TokenAnnotation>> = blocks
            .into_iter()
            .enumerate()
            .map(|(i, toks)| {
                let toks = toks
                    .into_iter()
                    .map(|(s, u, d)| TokenAnnotation::new(s, Upos::ALL[u], Deprel::ALL[d]))
                    .collect();
                (format!("tw{i}"), toks)
            })
            .collect();
        let mut buf = Vec::new();
        write_conllu(&ann, &mut buf).unwrap();
        let back = parse_conllu(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &ann);
        let mut again = Vec::new();
        write_conllu(&back, &mut again).unwrap();
        prop_assert_eq!(again, buf);
    }
}

#[test]
fn tweet_owner_lookup_is_consistent() {
    let corpus = build(&[(Label::Troll, 2), (Label::Regular, 3)]);
    let mut owned: HashMap<&str, usize> = HashMap::new();
    for a in corpus.accounts() {
        for id in &a.tweet_ids {
            assert_eq!(corpus.tweet(id).unwrap().account_id, a.id);
            *owned.entry(id.as_str()).or_default() += 1;
        }
    }
    assert_eq!(owned.len(), corpus.tweets().len());
    assert!(owned.values().all(|&n| n == 1));
}
