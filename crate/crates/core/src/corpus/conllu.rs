//! Reader and writer for tagger output in CoNLL-U form.
//!
//! Each sentence block must carry a `# tweet_id = <id>` comment. Blocks that
//! share a tweet id (multi-sentence tweets) are concatenated.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{Deprel, TokenAnnotation, Upos};

#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: sentence block has no `# tweet_id = ...` comment")]
    MissingTweetIdComment { line: usize },
    #[error("line {line}: unknown UPOS tag {tag:?}")]
    UnknownUposTag { line: usize, tag: String },
    #[error("line {line}: unknown dependency relation {label:?}")]
    UnknownDeprel { line: usize, label: String },
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    MalformedLine { line: usize, found: usize },
}

pub type Annotations = BTreeMap<String, Vec<TokenAnnotation>>;

pub fn load_conllu(path: &Path) -> Result<Annotations, ConlluError> {
    let file = File::open(path).map_err(|source| ConlluError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_conllu(BufReader::new(file)).map_err(|e| match e {
        ConlluError::Io { source, .. } => ConlluError::Io {
            path: path.to_owned(),
            source,
        },
        other => other,
    })
}

pub fn parse_conllu<R: BufRead>(reader: R) -> Result<Annotations, ConlluError> {
    let mut out = Annotations::new();
    let mut current_id: Option<String> = None;
    let mut current: Vec<TokenAnnotation> = Vec::new();
    let mut block_start: Option<usize> = None;

    let mut flush = |id: &mut Option<String>, tokens: &mut Vec<TokenAnnotation>, start: Option<usize>| {
        if let Some(start) = start {
            let Some(id) = id.take() else {
                return Err(ConlluError::MissingTweetIdComment { line: start });
            };
            out.entry(id).or_default().append(tokens);
        }
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| ConlluError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut current_id, &mut current, block_start.take())?;
            current_id = None;
            continue;
        }
        block_start.get_or_insert(line_no);
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "tweet_id" {
                    current_id = Some(value.trim().to_owned());
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::MalformedLine {
                line: line_no,
                found: cols.len(),
            });
        }
        // Multiword ranges (`1-2`) and empty nodes (`1.1`) carry no tag of their own.
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let upos: Upos = cols[3].parse().map_err(|_| ConlluError::UnknownUposTag {
            line: line_no,
            tag: cols[3].to_owned(),
        })?;
        let deprel = Deprel::parse_with_subtype(cols[7]).map_err(|_| ConlluError::UnknownDeprel {
            line: line_no,
            label: cols[7].to_owned(),
        })?;
        current.push(TokenAnnotation::new(cols[1], upos, deprel));
    }
    flush(&mut current_id, &mut current, block_start)?;
    Ok(out)
}

/// Writes one block per tweet. Columns other than FORM, UPOS and DEPREL are
/// placeholders; HEAD is 0 for `root` and 1 otherwise.
pub fn write_conllu<W: Write>(annotations: &Annotations, mut out: W) -> std::io::Result<()> {
    for (id, tokens) in annotations {
        writeln!(out, "# tweet_id = {id}")?;
        for (i, tok) in tokens.iter().enumerate() {
            let head = if tok.deprel == Deprel::Root { 0 } else { 1 };
            writeln!(
                out,
                "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
                i + 1,
                tok.surface,
                tok.upos,
                head,
                tok.deprel
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
