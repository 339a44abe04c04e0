//! Adapted Lesk relatedness: squared lengths of maximal shared word runs
//! between two extended glosses.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{LexicalGraph, Pos, SynsetId};
use crate::text::content_words;

/// Which texts make up a synset's extended gloss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlossSource {
    Gloss,
    Examples,
    HypernymGlosses,
    HyponymGlosses,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatednessConfig {
    /// Odd number of open-class tokens considered around each target.
    pub window_size: usize,
    pub gloss_extension: BTreeSet<GlossSource>,
    /// Assume the first sense when no context sense is related (otherwise
    /// the token is reported as not related, without a sense).
    pub first_sense_fallback: bool,
}

impl Default for RelatednessConfig {
    fn default() -> Self {
        RelatednessConfig {
            window_size: 3,
            gloss_extension: [
                GlossSource::Gloss,
                GlossSource::Examples,
                GlossSource::HypernymGlosses,
                GlossSource::HyponymGlosses,
            ]
            .into(),
            first_sense_fallback: true,
        }
    }
}

impl RelatednessConfig {
    pub fn with_window(window_size: usize) -> Self {
        RelatednessConfig {
            window_size,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 || self.window_size.is_multiple_of(2) {
            return Err(Error::Config(format!("window size {} must be odd and positive", self.window_size)));
        }
        if self.gloss_extension.is_empty() {
            return Err(Error::Config("gloss extension set is empty".into()));
        }
        Ok(())
    }
}

/// Separates gloss segments so overlaps never span two of them.
const SEP: u32 = u32::MAX;
const SEP_A: u32 = u32::MAX - 1;
const SEP_B: u32 = u32::MAX - 2;

#[derive(Default)]
struct Cache {
    vocab: HashMap<String, u32>,
    glosses: HashMap<SynsetId, Arc<[u32]>>,
}

/// Scores synset pairs, memoizing each synset's tokenized extended gloss.
///
/// Safe to share between threads; the cache never changes results.
pub struct LeskScorer<'g> {
    graph: &'g LexicalGraph,
    cfg: RelatednessConfig,
    cache: Mutex<Cache>,
}

impl<'g> LeskScorer<'g> {
    pub fn new(graph: &'g LexicalGraph, cfg: RelatednessConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(LeskScorer {
            graph,
            cfg,
            cache: Mutex::new(Cache::default()),
        })
    }

    pub fn graph(&self) -> &'g LexicalGraph {
        self.graph
    }

    pub fn config(&self) -> &RelatednessConfig {
        &self.cfg
    }

    /// The texts of the extended gloss, in order.
    pub fn extended_gloss(&self, id: &SynsetId) -> Result<Vec<String>> {
        let s = self.graph.synset(id)?;
        let src = &self.cfg.gloss_extension;
        let mut parts = Vec::new();
        if src.contains(&GlossSource::Gloss) {
            parts.push(s.gloss.clone());
        }
        if src.contains(&GlossSource::Examples) {
            parts.extend(s.examples.iter().cloned());
        }
        // adjectives and adverbs have no hierarchy to extend through
        if matches!(s.pos, Pos::Noun | Pos::Verb) {
            if src.contains(&GlossSource::HypernymGlosses) {
                for h in self.graph.hypernyms(id) {
                    parts.push(self.graph.synset(h)?.gloss.clone());
                }
            }
            if src.contains(&GlossSource::HyponymGlosses) {
                for h in self.graph.hyponyms(id) {
                    parts.push(self.graph.synset(h)?.gloss.clone());
                }
            }
        }
        Ok(parts)
    }

    fn tokens(&self, id: &SynsetId) -> Result<Arc<[u32]>> {
        if let Some(t) = self.cache.lock().expect("cache lock").glosses.get(id) {
            return Ok(t.clone());
        }
        let parts = self.extended_gloss(id)?;
        let mut cache = self.cache.lock().expect("cache lock");
        let mut seq = Vec::new();
        for part in parts {
            for word in content_words(&part) {
                let next = cache.vocab.len() as u32;
                seq.push(*cache.vocab.entry(word).or_insert(next));
            }
            seq.push(SEP);
        }
        let seq: Arc<[u32]> = seq.into();
        cache.glosses.insert(id.clone(), seq.clone());
        Ok(seq)
    }

    /// Relatedness of two synsets. Symmetric.
    pub fn score(&self, a: &SynsetId, b: &SynsetId) -> Result<u64> {
        // canonical argument order keeps tie-breaking symmetric
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let ta = self.tokens(a)?;
        let tb = self.tokens(b)?;
        Ok(overlap_score(&ta, &tb))
    }
}

/// One-off relatedness of two synsets.
pub fn adapted_lesk(g: &LexicalGraph, a: &SynsetId, b: &SynsetId, cfg: &RelatednessConfig) -> Result<u64> {
    LeskScorer::new(g, cfg.clone())?.score(a, b)
}

/// Squared-length overlap score of two token sequences in which
/// [`SEP`] marks segment boundaries.
///
/// Repeatedly takes the longest common run (earliest in `a`, then earliest
/// in `b`), adds its squared length and blanks it out of both sides.
fn overlap_score(a: &[u32], b: &[u32]) -> u64 {
    let in_a: HashSet<u32> = a.iter().copied().filter(|&t| t != SEP).collect();
    let in_b: HashSet<u32> = b.iter().copied().filter(|&t| t != SEP).collect();
    let mut a = compress(a, &in_b, SEP_A);
    let mut b = compress(b, &in_a, SEP_B);

    let mut total = 0u64;
    let mut row = vec![0usize; b.len() + 1];
    loop {
        let (mut best, mut end_a, mut end_b) = (0usize, 0usize, 0usize);
        row.iter_mut().for_each(|x| *x = 0);
        for i in 1..=a.len() {
            let mut diag = 0;
            for j in 1..=b.len() {
                let up = row[j];
                row[j] = if a[i - 1] == b[j - 1] { diag + 1 } else { 0 };
                if row[j] > best {
                    best = row[j];
                    end_a = i;
                    end_b = j;
                }
                diag = up;
            }
        }
        if best == 0 {
            return total;
        }
        total += (best * best) as u64;
        a[end_a - best..end_a].fill(SEP_A);
        b[end_b - best..end_b].fill(SEP_B);
    }
}

/// Replaces tokens absent from the other side with `sep` and collapses
/// separator runs. Positions keep their relative order.
fn compress(seq: &[u32], other: &HashSet<u32>, sep: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for &t in seq {
        let t = if t == SEP || !other.contains(&t) { sep } else { t };
        if t == sep && out.last() == Some(&sep) {
            continue;
        }
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str, vocab: &mut HashMap<String, u32>) -> Vec<u32> {
        let mut out = Vec::new();
        for part in text.split('|') {
            for w in content_words(part) {
                let n = vocab.len() as u32;
                out.push(*vocab.entry(w).or_insert(n));
            }
            out.push(SEP);
        }
        out
    }

    fn score(a: &str, b: &str) -> u64 {
        let mut v = HashMap::new();
        let (a, b) = (seq(a, &mut v), seq(b, &mut v));
        overlap_score(&a, &b)
    }

    #[test]
    fn squared_runs() {
        assert_eq!(score("motor vehicle", "motor vehicle"), 4);
        assert_eq!(score("red vehicle", "blue vehicle"), 1);
        assert_eq!(score("red car", "blue truck"), 0);
        // function words are invisible
        assert_eq!(score("a vehicle of the road", "vehicle road"), 4);
    }

    #[test]
    fn runs_do_not_cross_segments() {
        assert_eq!(score("motor | vehicle", "motor vehicle"), 2);
        assert_eq!(score("big motor vehicle | motor", "motor vehicle | motor"), 5);
    }

    #[test]
    fn window_must_be_odd() {
        assert!(RelatednessConfig::with_window(2).validate().is_err());
        assert!(RelatednessConfig::with_window(0).validate().is_err());
        assert!(RelatednessConfig::with_window(5).validate().is_ok());
        let cfg = RelatednessConfig { gloss_extension: BTreeSet::new(), ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
