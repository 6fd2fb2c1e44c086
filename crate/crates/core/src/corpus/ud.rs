//! Closed Universal Dependencies label sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! closed_label_set {
    ($(#[$meta:meta])* $name:ident, $err:literal, [$($variant:ident => $label:literal),+ $(,)?]) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(
                #[serde(rename = $label)]
                $variant,
            )+
        }

        impl $name {
            /// Every label in canonical order. This order defines feature dimensions.
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label,)+
                }
            }

            /// Position in [`Self::ALL`].
            pub fn index(self) -> usize {
                self as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($label => Ok($name::$variant),)+
                    other => Err(format!(concat!($err, " {:?}"), other)),
                }
            }
        }
    };
}

closed_label_set!(
    /// The 17 universal part-of-speech tags.
    Upos, "unknown UPOS tag", [
        Adj => "ADJ",
        Adp => "ADP",
        Adv => "ADV",
        Aux => "AUX",
        Cconj => "CCONJ",
        Det => "DET",
        Intj => "INTJ",
        Noun => "NOUN",
        Num => "NUM",
        Part => "PART",
        Pron => "PRON",
        Propn => "PROPN",
        Punct => "PUNCT",
        Sconj => "SCONJ",
        Sym => "SYM",
        Verb => "VERB",
        X => "X",
    ]
);

closed_label_set!(
    /// The 37 primary universal dependency relations.
    Deprel, "unknown dependency relation", [
        Acl => "acl",
        Advcl => "advcl",
        Advmod => "advmod",
        Amod => "amod",
        Appos => "appos",
        Aux => "aux",
        Case => "case",
        Cc => "cc",
        Ccomp => "ccomp",
        Clf => "clf",
        Compound => "compound",
        Conj => "conj",
        Cop => "cop",
        Csubj => "csubj",
        Dep => "dep",
        Det => "det",
        Discourse => "discourse",
        Dislocated => "dislocated",
        Expl => "expl",
        Fixed => "fixed",
        Flat => "flat",
        Goeswith => "goeswith",
        Iobj => "iobj",
        List => "list",
        Mark => "mark",
        Nmod => "nmod",
        Nsubj => "nsubj",
        Nummod => "nummod",
        Obj => "obj",
        Obl => "obl",
        Orphan => "orphan",
        Parataxis => "parataxis",
        Punct => "punct",
        Reparandum => "reparandum",
        Root => "root",
        Vocative => "vocative",
        Xcomp => "xcomp",
    ]
);

impl Deprel {
    /// Parses a relation, truncating language-specific subtypes (`nmod:poss` -> `nmod`).
    pub fn parse_with_subtype(label: &str) -> Result<Self, String> {
        let primary = label.split(':').next().unwrap_or(label);
        primary.parse()
    }
}
