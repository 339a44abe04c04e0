use crate::lexicon::Pos;

/// Coarse class of a part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagClass {
    Open(Pos),
    Closed,
    /// The tag is not a recognised Penn Treebank or WordNet tag.
    Invalid,
}

impl TagClass {
    pub fn open_pos(self) -> Option<Pos> {
        match self {
            TagClass::Open(p) => Some(p),
            _ => None,
        }
    }
}

const CLOSED_TAGS: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "LS", "MD", "PDT", "POS", "PRP", "PRP$", "RP", "SYM",
    "TO", "UH", "WDT", "WP", "WP$", "WRB", ",", ".", ":", "``", "''", "-LRB-", "-RRB-", "#", "$",
];

/// Reduces a Penn Treebank tag (or a bare WordNet `n`/`v`/`a`/`r`) to noun,
/// verb, adjective, adverb or closed class.
pub fn reduce_tag(tag: &str) -> TagClass {
    match tag {
        "NN" | "NNS" | "NNP" | "NNPS" | "n" => TagClass::Open(Pos::Noun),
        "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" | "v" => TagClass::Open(Pos::Verb),
        "JJ" | "JJR" | "JJS" | "a" => TagClass::Open(Pos::Adjective),
        "RB" | "RBR" | "RBS" | "r" => TagClass::Open(Pos::Adverb),
        t if CLOSED_TAGS.contains(&t) => TagClass::Closed,
        _ => TagClass::Invalid,
    }
}
