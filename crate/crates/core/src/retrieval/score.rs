use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::{porter_stem, stem_term};
use crate::num::Real;
use crate::text::{is_stop_word, normalize_term};

use super::index::Index;

pub const DEFAULT_MU: f64 = 2000.0;
pub const DEFAULT_TOP_N: usize = 1000;

/// Query terms as index stems with a weight each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedQuery<S> {
    pub qid: String,
    pub terms: Vec<(String, S)>,
}

impl<S: Real> WeightedQuery<S> {
    pub fn new(qid: impl Into<String>) -> Self {
        WeightedQuery {
            qid: qid.into(),
            terms: Vec::new(),
        }
    }

    /// Adds a surface term. A multiword term is matched as one underscore-joined
    /// stem when the index has it, otherwise as its content words, each
    /// carrying the full weight. Stop words are dropped.
    pub fn push_term(&mut self, term: &str, weight: S, idx: &Index) {
        let norm = normalize_term(term);
        if norm.contains('_') {
            let joined = stem_term(&norm);
            if idx.contains_term(&joined) {
                self.terms.push((joined, weight));
                return;
            }
        }
        for word in norm.split('_').filter(|w| !w.is_empty() && !is_stop_word(w)) {
            self.terms.push((porter_stem(word), weight));
        }
    }

    /// Multiplies every weight by `c`.
    pub fn scaled(&self, c: S) -> Self {
        WeightedQuery {
            qid: self.qid.clone(),
            terms: self.terms.iter().map(|(t, w)| (t.clone(), *w * c)).collect(),
        }
    }
}

/// One line of a ranked run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry<S> {
    pub qid: String,
    pub doc_id: String,
    pub rank: usize,
    pub score: S,
}

fn check_mu<S: Real>(mu: S) -> Result<()> {
    if mu > S::zero() && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("mu must be positive, got {mu}")))
    }
}

/// Postings, collection frequency and weight of a contributing term.
type ActiveTerm<'a, S> = (&'a [(u32, u32)], u64, S);

/// Dirichlet-smoothed log p(t|D).
#[inline]
fn log_p<S: Real>(tf: u32, doc_len: u64, cf: u64, total: u64, mu: S) -> S {
    let tf = S::from_u32(tf).unwrap();
    let cf = S::from_u64(cf).unwrap();
    let total = S::from_u64(total).unwrap();
    let len = S::from_u64(doc_len).unwrap();
    ((tf + mu * cf / total) / (len + mu)).ln()
}

fn tf_in(postings: &[(u32, u32)], doc: u32) -> u32 {
    postings
        .binary_search_by_key(&doc, |&(d, _)| d)
        .map_or(0, |i| postings[i].1)
}

/// Documents containing at least one of the given stems.
fn candidates<'a>(idx: &Index, lists: impl Iterator<Item = &'a [(u32, u32)]>) -> Vec<u32> {
    let mut docs: Vec<u32> = lists.flat_map(|l| l.iter().map(|&(d, _)| d)).collect();
    docs.sort_unstable();
    docs.dedup();
    debug_assert!(docs.iter().all(|&d| (d as usize) < idx.doc_count()));
    docs
}

fn rank<S: Real>(idx: &Index, qid: &str, mut scored: Vec<(u32, S)>, top_n: usize) -> Vec<RunEntry<S>> {
    // doc ids follow docno order, so the id tie-break is the docno tie-break
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    scored
        .into_iter()
        .take(top_n)
        .enumerate()
        .map(|(i, (d, score))| RunEntry {
            qid: qid.to_string(),
            doc_id: idx.docno(d).to_string(),
            rank: i + 1,
            score,
        })
        .collect()
}

/// Weighted query likelihood: score(Q,D) = Σ w(t) · log p(t|D), Dirichlet
/// smoothing with parameter `mu`. Terms with zero weight or absent from the
/// collection contribute nothing; only documents matching a contributing
/// term are ranked. A query with no contributing term yields an empty run.
pub fn score_weighted_lm<S: Real>(idx: &Index, q: &WeightedQuery<S>, mu: S, top_n: usize) -> Result<Vec<RunEntry<S>>> {
    check_mu(mu)?;
    if let Some((t, w)) = q.terms.iter().find(|(_, w)| !(*w >= S::zero() && w.is_finite())) {
        return Err(Error::Config(format!("query {}: weight {w} for `{t}` is not a non-negative number", q.qid)));
    }
    let active: Vec<ActiveTerm<'_, S>> = q
        .terms
        .iter()
        .filter(|(_, w)| *w > S::zero())
        .map(|(t, w)| (idx.postings(t), idx.collection_frequency(t), *w))
        .filter(|&(_, cf, _)| cf > 0)
        .collect();
    if active.is_empty() {
        info!("query {}: no weighted term occurs in the collection, empty run", q.qid);
        return Ok(Vec::new());
    }
    let total = idx.total_tokens();
    let scored = candidates(idx, active.iter().map(|a| a.0))
        .into_iter()
        .map(|d| {
            let len = idx.doc_length(d);
            let mut s = S::zero();
            for &(list, cf, w) in &active {
                s = s + w * log_p(tf_in(list, d), len, cf, total, mu);
            }
            (d, s)
        })
        .collect();
    Ok(rank(idx, &q.qid, scored, top_n))
}

/// Plain query likelihood over a bag of stems (duplicates count twice).
pub fn score_lm<S: Real>(idx: &Index, qid: &str, stems: &[String], mu: S, top_n: usize) -> Result<Vec<RunEntry<S>>> {
    check_mu(mu)?;
    let active: Vec<(&[(u32, u32)], u64)> = stems
        .iter()
        .map(|t| (idx.postings(t), idx.collection_frequency(t)))
        .filter(|&(_, cf)| cf > 0)
        .collect();
    if active.is_empty() {
        warn!("query {qid}: no term occurs in the collection, empty run");
        return Ok(Vec::new());
    }
    let total = idx.total_tokens();
    let scored = candidates(idx, active.iter().map(|a| a.0))
        .into_iter()
        .map(|d| {
            let len = idx.doc_length(d);
            let mut s = S::zero();
            for &(list, cf) in &active {
                s = s + log_p(tf_in(list, d), len, cf, total, mu);
            }
            (d, s)
        })
        .collect();
    Ok(rank(idx, qid, scored, top_n))
}
