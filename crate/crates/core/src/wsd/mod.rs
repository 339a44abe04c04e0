//! Knowledge-based all-words sense disambiguation.

mod lesk;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lexicon::{Pos, SynsetId};
use crate::segmenter::{reduce_tag, RoleTaggedQuery, TagClass};
use crate::text::is_stop_word;

pub use lesk::{adapted_lesk, GlossSource, LeskScorer, RelatednessConfig};

/// Outcome of disambiguating one token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SenseStatus {
    #[serde(rename = "disambiguated")]
    Disambiguated,
    /// No context sense was related; the most frequent sense was assumed.
    #[serde(rename = "first_sense_fallback")]
    FirstSenseFallback,
    /// Not in the lexical graph.
    ND,
    /// Not related to its context and fallback disabled.
    NR,
    /// Closed-class word.
    #[serde(rename = "o")]
    O,
    /// Invalid part-of-speech tag.
    IT,
    /// Missing (empty) token.
    MW,
}

impl SenseStatus {
    pub fn has_sense(self) -> bool {
        matches!(self, SenseStatus::Disambiguated | SenseStatus::FirstSenseFallback)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseAnnotation {
    pub token_index: usize,
    pub lemma: Option<String>,
    pub pos: Option<Pos>,
    pub synset_id: Option<SynsetId>,
    pub status: SenseStatus,
    /// Summed relatedness of the chosen sense to its window.
    pub score: f64,
}

impl SenseAnnotation {
    fn bare(token_index: usize, status: SenseStatus) -> Self {
        SenseAnnotation {
            token_index,
            lemma: None,
            pos: None,
            synset_id: None,
            status,
            score: 0.0,
        }
    }
}

/// Line of the sense output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseRecord {
    pub qid: String,
    pub index: usize,
    pub lemma: Option<String>,
    pub pos: Option<Pos>,
    pub synset: Option<SynsetId>,
    pub status: SenseStatus,
    pub score: f64,
}

impl SenseRecord {
    pub fn new(qid: &str, a: &SenseAnnotation) -> Self {
        SenseRecord {
            qid: qid.to_string(),
            index: a.token_index,
            lemma: a.lemma.clone(),
            pos: a.pos,
            synset: a.synset_id.clone(),
            status: a.status,
            score: a.score,
        }
    }

    pub fn annotation(&self) -> SenseAnnotation {
        SenseAnnotation {
            token_index: self.index,
            lemma: self.lemma.clone(),
            pos: self.pos,
            synset_id: self.synset.clone(),
            status: self.status,
            score: self.score,
        }
    }
}

struct Candidate {
    slot: usize,
    lemma: String,
    pos: Pos,
    senses: Vec<SynsetId>,
}

/// One annotation per concept, in concept order.
///
/// Each sense of a target is scored by summing, over the other tokens in its
/// window, the best relatedness to any of that token's senses. The window
/// slides over tokens that have senses; function words, unknown words and
/// bad tags take no slot. Ties go to the more frequent sense.
pub fn disambiguate_all_words(query: &RoleTaggedQuery, scorer: &LeskScorer<'_>) -> Result<Vec<SenseAnnotation>> {
    let graph = scorer.graph();
    let mut out: Vec<SenseAnnotation> = Vec::with_capacity(query.concepts.len());
    let mut open: Vec<Candidate> = Vec::new();

    for (slot, c) in query.concepts.iter().enumerate() {
        let surface = c.surface.trim();
        if surface.is_empty() {
            out.push(SenseAnnotation::bare(c.index, SenseStatus::MW));
            continue;
        }
        let pos = match reduce_tag(&c.pos_tag) {
            TagClass::Invalid => {
                out.push(SenseAnnotation::bare(c.index, SenseStatus::IT));
                continue;
            }
            TagClass::Closed => {
                out.push(SenseAnnotation::bare(c.index, SenseStatus::O));
                continue;
            }
            TagClass::Open(p) => p,
        };
        if is_stop_word(&surface.to_lowercase()) {
            out.push(SenseAnnotation::bare(c.index, SenseStatus::O));
            continue;
        }
        let Some(lemma) = graph.lemmatize(surface, pos) else {
            out.push(SenseAnnotation {
                pos: Some(pos),
                ..SenseAnnotation::bare(c.index, SenseStatus::ND)
            });
            continue;
        };
        let senses = graph.senses(&lemma, pos).to_vec();
        out.push(SenseAnnotation {
            lemma: Some(lemma.clone()),
            pos: Some(pos),
            ..SenseAnnotation::bare(c.index, SenseStatus::NR)
        });
        open.push(Candidate {
            slot,
            lemma,
            pos,
            senses,
        });
    }

    let half = scorer.config().window_size / 2;
    for (p, target) in open.iter().enumerate() {
        let lo = p.saturating_sub(half);
        let hi = (p + half).min(open.len() - 1);
        let mut best: Option<(usize, u64)> = None;
        for (k, sense) in target.senses.iter().enumerate() {
            let mut total = 0u64;
            for (q, ctx) in open.iter().enumerate().take(hi + 1).skip(lo) {
                if q == p {
                    continue;
                }
                let mut m = 0;
                for other in &ctx.senses {
                    m = m.max(scorer.score(sense, other)?);
                }
                total += m;
            }
            if best.is_none_or(|(_, s)| total > s) {
                best = Some((k, total));
            }
        }
        let (k, score) = best.expect("lemma index entries are non-empty");
        let ann = &mut out[target.slot];
        debug_assert_eq!(ann.lemma.as_deref(), Some(target.lemma.as_str()));
        debug_assert_eq!(ann.pos, Some(target.pos));
        ann.score = score as f64;
        if target.senses.len() == 1 || score > 0 {
            ann.status = SenseStatus::Disambiguated;
            ann.synset_id = Some(target.senses[k].clone());
        } else if scorer.config().first_sense_fallback {
            ann.status = SenseStatus::FirstSenseFallback;
            ann.synset_id = Some(target.senses[0].clone());
        }
    }
    Ok(out)
}
