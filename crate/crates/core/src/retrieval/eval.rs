use std::collections::{BTreeMap, BTreeSet};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::num::Real;

use super::score::RunEntry;

/// Ranked results per qid.
pub type Run<S> = BTreeMap<String, Vec<RunEntry<S>>>;

/// Binary relevance judgments; any positive grade counts as relevant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, i32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, qid: impl Into<String>, doc_id: impl Into<String>, grade: i32) {
        self.judgments.entry(qid.into()).or_default().insert(doc_id.into(), grade);
    }

    pub fn contains_query(&self, qid: &str) -> bool {
        self.judgments.contains_key(qid)
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn relevant(&self, qid: &str) -> BTreeSet<&str> {
        self.judgments
            .get(qid)
            .into_iter()
            .flatten()
            .filter(|(_, &g)| g > 0)
            .map(|(d, _)| d.as_str())
            .collect()
    }

    pub fn is_relevant(&self, qid: &str, doc_id: &str) -> bool {
        self.judgments
            .get(qid)
            .and_then(|j| j.get(doc_id))
            .is_some_and(|&g| g > 0)
    }

    /// Judged (qid, doc, grade) triples in qid, doc order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, i32)> {
        self.judgments
            .iter()
            .flat_map(|(q, j)| j.iter().map(move |(d, &g)| (q.as_str(), d.as_str(), g)))
    }
}

/// Average precision of one ranked list; `None` when the query has no
/// relevant documents. Entries are taken in list order.
pub fn average_precision<S: Real>(ranked: &[RunEntry<S>], qrels: &Qrels, qid: &str) -> Option<S> {
    let relevant = qrels.relevant(qid);
    if relevant.is_empty() {
        return None;
    }
    let mut hits = 0usize;
    let mut sum = S::zero();
    let mut seen = BTreeSet::new();
    for (i, e) in ranked.iter().enumerate() {
        if relevant.contains(e.doc_id.as_str()) && seen.insert(e.doc_id.as_str()) {
            hits += 1;
            sum = sum + S::from_count(hits) / S::from_count(i + 1);
        }
    }
    Some(sum / S::from_count(relevant.len()))
}

/// Per-query AP and their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<S> {
    pub per_query: BTreeMap<String, S>,
    pub map: S,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_test: Option<TTest>,
}

/// Scores every qid of `run` that has relevant documents in `qrels`. Qids
/// missing from the judgments, or judged with nothing relevant, are left
/// out of the mean. An empty list for a judged qid scores 0.
pub fn evaluate<S: Real>(run: &Run<S>, qrels: &Qrels) -> EvalResult<S> {
    let mut per_query = BTreeMap::new();
    for (qid, ranked) in run {
        if !qrels.contains_query(qid) {
            warn!("query {qid} has no relevance judgments, excluded from MAP");
            continue;
        }
        match average_precision(ranked, qrels, qid) {
            Some(ap) => {
                per_query.insert(qid.clone(), ap);
            }
            None => info!("query {qid} has no relevant documents, excluded from MAP"),
        }
    }
    let map = if per_query.is_empty() {
        S::zero()
    } else {
        per_query.values().copied().sum::<S>() / S::from_count(per_query.len())
    };
    EvalResult {
        per_query,
        map,
        t_test: None,
    }
}

pub fn mean_average_precision<S: Real>(run: &Run<S>, qrels: &Qrels) -> S {
    evaluate(run, qrels).map
}

/// Two-tailed paired t-test outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
    pub significant: bool,
}

/// Significance level for [`paired_t_test`].
pub const ALPHA: f64 = 0.05;

/// Paired t-test on per-query differences `b - a`. When every difference is
/// identical the statistic is undefined: a zero mean gives t = 0 (not
/// significant), a non-zero mean gives an infinite t and p = 0.
pub fn paired_t_test<S: Real>(a: &[S], b: &[S]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::Config(format!("paired samples differ in length ({} vs {})", a.len(), b.len())));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Config("paired t-test needs at least two pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y.as_f64() - x.as_f64()).collect();
    let nf = n as f64;
    let mean = d.iter().sum::<f64>() / nf;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    if var == 0.0 {
        if mean == 0.0 {
            return Ok(TTest {
                t: 0.0,
                p: 1.0,
                significant: false,
            });
        }
        warn!("paired differences have zero variance and mean {mean}, treating as significant");
        return Ok(TTest {
            t: mean.signum() * f64::INFINITY,
            p: 0.0,
            significant: true,
        });
    }
    let t = mean / (var.sqrt() / nf.sqrt());
    let dist = StudentsT::new(0.0, 1.0, nf - 1.0).map_err(|e| Error::Invariant(e.to_string()))?;
    let p = (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0);
    Ok(TTest {
        t,
        p,
        significant: p < ALPHA,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(docs: &[&str]) -> Vec<RunEntry<f64>> {
        docs.iter()
            .enumerate()
            .map(|(i, d)| RunEntry {
                qid: "q".into(),
                doc_id: d.to_string(),
                rank: i + 1,
                score: -(i as f64),
            })
            .collect()
    }

    #[test]
    fn ap_ranks_one_and_three() {
        let mut qrels = Qrels::new();
        qrels.insert("q", "a", 1);
        qrels.insert("q", "c", 1);
        qrels.insert("q", "b", 0);
        let ap = average_precision(&entries(&["a", "b", "c"]), &qrels, "q").unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        assert_eq!(average_precision(&entries(&["b"]), &qrels, "q"), Some(0.0));
        assert_eq!(average_precision(&entries(&["c", "a"]), &qrels, "q"), Some(1.0));
    }

    #[test]
    fn unjudged_queries_excluded() {
        let mut qrels = Qrels::new();
        qrels.insert("q", "a", 1);
        qrels.insert("z", "a", 0);
        let mut run = Run::new();
        run.insert("q".to_string(), entries(&["a"]));
        run.insert("x".to_string(), entries(&["a"]));
        run.insert("z".to_string(), entries(&["a"]));
        let r = evaluate(&run, &qrels);
        assert_eq!(r.per_query.len(), 1);
        assert_eq!(r.map, 1.0);
    }

    #[test]
    fn t_test_conventions() {
        let a = [0.1, 0.2, 0.3];
        let same = paired_t_test(&a, &a).unwrap();
        assert_eq!((same.t, same.significant), (0.0, false));
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.1).collect();
        assert!(paired_t_test(&a, &shifted).unwrap().significant);
        assert!(paired_t_test(&a[..1], &a[..1]).is_err());
        assert!(paired_t_test(&a, &a[..2]).is_err());
    }
}
