//! Expansion-term extraction: base-term selection, per-relation candidate
//! pools, relatedness ranking and top-k cut.

mod porter;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{LexicalGraph, SynsetId};
use crate::segmenter::{RoleTaggedQuery, RoleType};
use crate::text::normalize_term;
use crate::wsd::{LeskScorer, SenseAnnotation};

pub use porter::{porter_stem, stem_term};

/// Default number of expansion terms kept per query.
pub const DEFAULT_TOP_K: usize = 5;

/// Lexical relation feeding one candidate pool. Pools are never mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "syn")]
    Synonym,
    #[serde(rename = "hyper")]
    Hypernym,
    #[serde(rename = "hypo")]
    Hyponym,
    #[serde(rename = "coord")]
    Coordinate,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::Synonym, Relation::Hypernym, Relation::Hyponym, Relation::Coordinate];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Synonym => "syn",
            Relation::Hypernym => "hyper",
            Relation::Hyponym => "hypo",
            Relation::Coordinate => "coord",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown pool `{s}` (expected syn, hyper, hypo or coord)")))
    }
}

/// A CoI/DC concept with a usable sense.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseTerm {
    pub index: usize,
    pub surface: String,
    pub role: RoleType,
    pub synset: SynsetId,
}

/// Candidates sharing one stem, before ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolEntry {
    pub term: String,
    pub stem: String,
    pub sources: BTreeSet<SynsetId>,
    pub base_terms: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCandidate {
    pub term: String,
    pub stem: String,
    pub source_relation: Relation,
    pub source_base_terms: BTreeSet<String>,
    /// Best-scoring source synset.
    pub synset: SynsetId,
    pub avg_relatedness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginalTerm {
    pub term: String,
    pub role: RoleType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub term: String,
    pub role: RoleType,
    pub score: f64,
}

/// A query together with the expansion terms drawn from a single pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandedQuery {
    pub qid: String,
    pub pool: Relation,
    pub original: Vec<OriginalTerm>,
    pub expansion: Vec<ExpansionTerm>,
}

impl ExpandedQuery {
    /// The query with no expansion terms.
    pub fn unexpanded(rtq: &RoleTaggedQuery, pool: Relation) -> Self {
        ExpandedQuery {
            qid: rtq.qid.clone(),
            pool,
            original: rtq
                .concepts
                .iter()
                .map(|c| OriginalTerm {
                    term: c.surface.clone(),
                    role: c.role,
                })
                .collect(),
            expansion: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolOptions {
    /// Bound on hierarchy levels walked for hypernym and hyponym pools.
    /// `None` walks the whole hierarchy.
    pub max_depth: Option<usize>,
}

/// CoI and DC concepts whose sense was resolved. Unknown words are left out.
pub fn select_base_terms(rtq: &RoleTaggedQuery, senses: &[SenseAnnotation]) -> Vec<BaseTerm> {
    rtq.concepts
        .iter()
        .filter(|c| c.role.is_base_role())
        .filter_map(|c| {
            let ann = senses.iter().find(|a| a.token_index == c.index)?;
            if !ann.status.has_sense() {
                return None;
            }
            Some(BaseTerm {
                index: c.index,
                surface: c.surface.clone(),
                role: c.role,
                synset: ann.synset_id.clone()?,
            })
        })
        .collect()
}

/// Surface forms and stems of every original concept; expansions may not echo them.
fn original_keys(rtq: &RoleTaggedQuery, senses: &[SenseAnnotation]) -> (HashSet<String>, HashSet<String>) {
    let mut words: HashSet<String> = rtq.concepts.iter().map(|c| normalize_term(&c.surface)).collect();
    words.extend(senses.iter().filter_map(|a| a.lemma.clone()));
    let stems = words.iter().map(|w| stem_term(w)).collect();
    (words, stems)
}

/// Synsets whose lemmas feed `relation`'s pool for one base synset.
fn harvest(g: &LexicalGraph, base: &SynsetId, relation: Relation, opts: PoolOptions) -> Result<Vec<SynsetId>> {
    match relation {
        Relation::Synonym => {
            g.synset(base)?;
            Ok(vec![base.clone()])
        }
        Relation::Hypernym => g.hypernym_closure(base, opts.max_depth),
        Relation::Hyponym => g.hyponym_closure(base, opts.max_depth),
        Relation::Coordinate => g.coordinate_terms(base),
    }
}

/// Candidate terms for one relation, deduplicated by stem across base terms
/// and stripped of anything echoing the original query. Sorted by term.
pub fn build_pool(
    base_terms: &[BaseTerm],
    rtq: &RoleTaggedQuery,
    senses: &[SenseAnnotation],
    g: &LexicalGraph,
    relation: Relation,
    opts: PoolOptions,
) -> Result<Vec<PoolEntry>> {
    let (orig_words, orig_stems) = original_keys(rtq, senses);
    let mut by_stem: BTreeMap<String, PoolEntry> = BTreeMap::new();
    for base in base_terms {
        for sid in harvest(g, &base.synset, relation, opts)? {
            for lemma in &g.synset(&sid)?.lemmas {
                let stem = stem_term(lemma);
                if orig_words.contains(lemma) || orig_stems.contains(&stem) {
                    continue;
                }
                let entry = by_stem.entry(stem.clone()).or_insert_with(|| PoolEntry {
                    term: lemma.clone(),
                    stem,
                    sources: BTreeSet::new(),
                    base_terms: BTreeSet::new(),
                });
                if *lemma < entry.term {
                    entry.term = lemma.clone();
                }
                entry.sources.insert(sid.clone());
                entry.base_terms.insert(base.surface.clone());
            }
        }
    }
    let mut entries: Vec<PoolEntry> = by_stem.into_values().collect();
    entries.sort_by(|a, b| a.term.cmp(&b.term));
    Ok(entries)
}

/// Scores every candidate by its mean relatedness to the base terms and
/// sorts descending (ties by term). A candidate reachable through several
/// synsets keeps its best-scoring one.
pub fn rank_pool(
    pool: &[PoolEntry],
    relation: Relation,
    base_terms: &[BaseTerm],
    scorer: &LeskScorer<'_>,
) -> Result<Vec<ExpansionCandidate>> {
    let mut ranked = pool
        .par_iter()
        .map(|entry| {
            let mut best: Option<(&SynsetId, f64)> = None;
            for sid in &entry.sources {
                let avg = if base_terms.is_empty() {
                    0.0
                } else {
                    let mut sum = 0u64;
                    for b in base_terms {
                        sum += scorer.score(sid, &b.synset)?;
                    }
                    sum as f64 / base_terms.len() as f64
                };
                if best.is_none_or(|(_, s)| avg > s) {
                    best = Some((sid, avg));
                }
            }
            let (sid, avg) = best.ok_or_else(|| Error::Invariant(format!("pool entry `{}` has no source", entry.term)))?;
            Ok(ExpansionCandidate {
                term: entry.term.clone(),
                stem: entry.stem.clone(),
                source_relation: relation,
                source_base_terms: entry.base_terms.clone(),
                synset: sid.clone(),
                avg_relatedness: avg,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        b.avg_relatedness
            .total_cmp(&a.avg_relatedness)
            .then_with(|| a.term.cmp(&b.term))
    });
    Ok(ranked)
}

/// The first `k` ranked candidates, tagged EC.
pub fn take_top_k(ranked: &[ExpansionCandidate], k: usize) -> Result<Vec<ExpansionTerm>> {
    if k < 1 {
        return Err(Error::Config("top-k must be at least 1".into()));
    }
    Ok(ranked
        .iter()
        .take(k)
        .map(|c| ExpansionTerm {
            term: c.term.clone(),
            role: RoleType::EC,
            score: c.avg_relatedness,
        })
        .collect())
}

/// Expansion settings shared by every query in a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandOptions {
    pub relation: Relation,
    pub top_k: usize,
    pub pool: PoolOptions,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            relation: Relation::Synonym,
            top_k: DEFAULT_TOP_K,
            pool: PoolOptions::default(),
        }
    }
}

/// Full extraction for one query and one pool.
pub fn expand_query(
    rtq: &RoleTaggedQuery,
    senses: &[SenseAnnotation],
    scorer: &LeskScorer<'_>,
    opts: ExpandOptions,
) -> Result<(ExpandedQuery, Vec<ExpansionCandidate>)> {
    let base = select_base_terms(rtq, senses);
    let pool = build_pool(&base, rtq, senses, scorer.graph(), opts.relation, opts.pool)?;
    let ranked = rank_pool(&pool, opts.relation, &base, scorer)?;
    let mut q = ExpandedQuery::unexpanded(rtq, opts.relation);
    q.expansion = take_top_k(&ranked, opts.top_k)?;
    Ok((q, ranked))
}
