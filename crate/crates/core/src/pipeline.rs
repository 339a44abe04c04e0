//! Batch drivers chaining the stages over whole query sets, plus JSON-lines I/O.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::{expand_query, ExpandOptions, ExpandedQuery, Relation};
use crate::lexicon::{load_jsonl, load_wordnet, FrequencyProvider, LexicalGraph};
use crate::num::Real;
use crate::optimizer::{RoleTerms, RoleWeights};
use crate::retrieval::{score_lm, score_weighted_lm, Index, Run, TTest};
use crate::segmenter::{map_roles, ParsedQuery, RoleMappingTable, RoleTaggedQuery, RoleType};
use crate::wsd::{disambiguate_all_words, LeskScorer, SenseAnnotation, SenseRecord};

/// Loads a WordNet database directory, or a `.jsonl` interchange file.
pub fn load_graph(path: &Path) -> Result<LexicalGraph> {
    if path.is_dir() {
        load_wordnet(path)
    } else {
        load_jsonl(path)
    }
}

/// Orders qids numerically when both are numbers, textually otherwise.
pub fn qid_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

pub fn write_jsonl<T: Serialize>(items: impl IntoIterator<Item = T>, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(&item).map_err(|e| Error::Invariant(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path.display().to_string();
    let mut items = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        items.push(serde_json::from_str(&line).map_err(|e| Error::parse(&name, i + 1, e.to_string()))?);
    }
    Ok(items)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.line(), e.to_string()))
}

/// Role-tags every parse; output is sorted by qid.
pub fn segment_batch(
    parses: &[ParsedQuery],
    table: &RoleMappingTable,
    freq: &dyn FrequencyProvider,
) -> Result<Vec<RoleTaggedQuery>> {
    let mut out: Vec<RoleTaggedQuery> = parses
        .par_iter()
        .map(|pq| map_roles(pq, table, freq))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| qid_order(&a.qid, &b.qid));
    Ok(out)
}

pub fn disambiguate_batch(queries: &[RoleTaggedQuery], scorer: &LeskScorer<'_>) -> Result<Vec<Vec<SenseAnnotation>>> {
    queries.par_iter().map(|q| disambiguate_all_words(q, scorer)).collect()
}

pub fn sense_records(queries: &[RoleTaggedQuery], senses: &[Vec<SenseAnnotation>]) -> Vec<SenseRecord> {
    queries
        .iter()
        .zip(senses)
        .flat_map(|(q, anns)| anns.iter().map(|a| SenseRecord::new(&q.qid, a)))
        .collect()
}

/// Regroups sense records by query, in the order of `queries`. Queries with
/// no records get an empty list.
pub fn group_senses(queries: &[RoleTaggedQuery], records: &[SenseRecord]) -> Vec<Vec<SenseAnnotation>> {
    let mut by_qid: BTreeMap<&str, Vec<SenseAnnotation>> = BTreeMap::new();
    for r in records {
        by_qid.entry(&r.qid).or_default().push(r.annotation());
    }
    queries
        .iter()
        .map(|q| by_qid.remove(q.qid.as_str()).unwrap_or_default())
        .collect()
}

pub fn expand_batch(
    queries: &[RoleTaggedQuery],
    senses: &[Vec<SenseAnnotation>],
    scorer: &LeskScorer<'_>,
    opts: ExpandOptions,
) -> Result<Vec<ExpandedQuery>> {
    if queries.len() != senses.len() {
        return Err(Error::Config(format!(
            "{} queries but sense annotations for {}",
            queries.len(),
            senses.len()
        )));
    }
    queries
        .par_iter()
        .zip(senses)
        .map(|(q, s)| expand_query(q, s, scorer, opts).map(|(e, _)| e))
        .collect()
}

/// Unexpanded, unweighted query likelihood over each query's own terms.
pub fn baseline_run<S: Real>(queries: &[ExpandedQuery], idx: &Index, mu: S, top_n: usize) -> Result<Run<S>> {
    let runs = queries
        .par_iter()
        .map(|q| {
            let unexpanded = ExpandedQuery {
                expansion: Vec::new(),
                ..q.clone()
            };
            let stems: Vec<String> = RoleTerms::new(&unexpanded, idx).terms.into_iter().map(|(t, _)| t).collect();
            Ok((q.qid.clone(), score_lm(idx, &q.qid, &stems, mu, top_n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(runs.into_iter().collect())
}

/// Role-weighted run over expanded queries.
pub fn weighted_run<S: Real>(
    queries: &[ExpandedQuery],
    idx: &Index,
    weights: &RoleWeights<S>,
    mu: S,
    top_n: usize,
) -> Result<Run<S>> {
    let runs = queries
        .par_iter()
        .map(|q| {
            let wq = RoleTerms::new(q, idx).weighted(weights);
            Ok((q.qid.clone(), score_weighted_lm(idx, &wq, mu, top_n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(runs.into_iter().collect())
}

/// Summary of one end-to-end run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub queries: Vec<QueryReport>,
    pub baseline_map: f64,
    pub pools: Vec<PoolReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    pub qid: String,
    pub roles: Vec<(String, RoleType)>,
    pub senses: Vec<(String, Option<String>, String)>,
    pub expansions: BTreeMap<Relation, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolReport {
    pub pool: Relation,
    pub map: f64,
    pub weights: [f64; 4],
    pub t_test: Option<TTest>,
}

impl Report {
    /// Plain-text rendering for terminals.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for q in &self.queries {
            s.push_str(&format!("query {}\n  roles:", q.qid));
            for (t, r) in &q.roles {
                s.push_str(&format!(" {t}/{r}"));
            }
            s.push_str("\n  senses:");
            for (t, syn, status) in &q.senses {
                s.push_str(&format!(" {t}={}", syn.as_deref().unwrap_or(status)));
            }
            s.push('\n');
            for (pool, terms) in &q.expansions {
                s.push_str(&format!("  {pool}: {}\n", terms.join(", ")));
            }
        }
        s.push_str(&format!("\nunexpanded LM MAP  {:.4}\n", self.baseline_map));
        for p in &self.pools {
            s.push_str(&format!(
                "{:<5} MAP {:.4}  weights CoI={:.3} DC={:.3} RC={:.3} EC={:.3}",
                p.pool.as_str(),
                p.map,
                p.weights[0],
                p.weights[1],
                p.weights[2],
                p.weights[3]
            ));
            if let Some(t) = &p.t_test {
                s.push_str(&format!("  t={:.3} p={:.4}{}", t.t, t.p, if t.significant { " *" } else { "" }));
            }
            s.push('\n');
        }
        s
    }
}
