//! Static knowledge assets: the lexical graph, the NCP lexicon and term
//! frequencies. All of them are immutable once loaded.

mod frequency;
mod interchange;
mod morphy;
mod ncp;
mod wordnet;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use frequency::{FrequencyProvider, FrequencyTable};
pub use interchange::{export_jsonl, load_jsonl, parse_jsonl, SynsetRecord};
pub use ncp::{load_ncp_lexicon, NcpKind, NcpLexicon};
pub use wordnet::load_wordnet;

pub use self::frequency::load_frequencies;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    /// WordNet's single-letter code. Satellite adjectives (`s`) fold into `a`.
    pub fn code(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }

    pub fn from_code(c: &str) -> Option<Pos> {
        match c {
            "n" | "noun" => Some(Pos::Noun),
            "v" | "verb" => Some(Pos::Verb),
            "a" | "s" | "adj" | "adjective" => Some(Pos::Adjective),
            "r" | "adv" | "adverb" => Some(Pos::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
        })
    }
}

/// Opaque synset identifier. WordNet-loaded ids look like `02958343-n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SynsetId(pub String);

impl SynsetId {
    pub fn new(id: impl Into<String>) -> Self {
        SynsetId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synset {
    pub id: SynsetId,
    pub pos: Pos,
    /// Lowercase, multiword lemmas joined with `_`.
    pub lemmas: Vec<String>,
    pub gloss: String,
    pub examples: Vec<String>,
    /// Rank of this synset among each lemma's senses; 1 is the most frequent sense.
    pub first_sense_rank: BTreeMap<String, u32>,
}

/// Synsets, the sense-ordered lemma index and the hypernym hierarchy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexicalGraph {
    synsets: HashMap<SynsetId, Synset>,
    lemma_index: HashMap<(String, Pos), Vec<SynsetId>>,
    hypernyms: HashMap<SynsetId, Vec<SynsetId>>,
    hyponyms: HashMap<SynsetId, Vec<SynsetId>>,
}

impl LexicalGraph {
    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: &SynsetId) -> Result<&Synset> {
        self.synsets
            .get(id)
            .ok_or_else(|| Error::UnknownSynset(id.0.clone()))
    }

    pub fn contains(&self, id: &SynsetId) -> bool {
        self.synsets.contains_key(id)
    }

    /// All synsets, sorted by id.
    pub fn synsets(&self) -> Vec<&Synset> {
        let mut all: Vec<_> = self.synsets.values().collect();
        all.sort_by(|a, b| a.id.cmp(&b.id));
        all
    }

    /// Synsets of an exact lemma in sense order (first = most frequent).
    pub fn senses(&self, lemma: &str, pos: Pos) -> &[SynsetId] {
        self.lemma_index
            .get(&(lemma.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Base form of `word` that exists in the lemma index for `pos`, if any.
    ///
    /// Tries the word itself, then the regular inflection-stripping rules.
    /// Irregular forms are not handled.
    pub fn lemmatize(&self, word: &str, pos: Pos) -> Option<String> {
        let word = crate::text::normalize_term(word);
        let found = morphy::base_forms(&word, pos).find(|cand| !self.senses(cand, pos).is_empty());
        found
    }

    pub fn lemma_count(&self) -> usize {
        self.lemma_index.len()
    }

    /// Every `(lemma, pos)` key with its sense list, sorted by key.
    pub fn lemma_entries(&self) -> Vec<(&(String, Pos), &Vec<SynsetId>)> {
        let mut entries: Vec<_> = self.lemma_index.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries
    }

    pub fn hypernyms(&self, id: &SynsetId) -> &[SynsetId] {
        self.hypernyms.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn hyponyms(&self, id: &SynsetId) -> &[SynsetId] {
        self.hyponyms.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Synsets sharing at least one direct hypernym with `id`, excluding `id`, sorted.
    pub fn coordinate_terms(&self, id: &SynsetId) -> Result<Vec<SynsetId>> {
        self.synset(id)?;
        let siblings: BTreeSet<&SynsetId> = self
            .hypernyms(id)
            .iter()
            .flat_map(|parent| self.hyponyms(parent))
            .filter(|s| *s != id)
            .collect();
        Ok(siblings.into_iter().cloned().collect())
    }

    /// Transitive hypernyms of `id` (excluding `id`), sorted. `max_depth`
    /// bounds the number of edges followed.
    pub fn hypernym_closure(&self, id: &SynsetId, max_depth: Option<usize>) -> Result<Vec<SynsetId>> {
        self.closure(id, max_depth, |g, s| g.hypernyms(s))
    }

    pub fn hyponym_closure(&self, id: &SynsetId, max_depth: Option<usize>) -> Result<Vec<SynsetId>> {
        self.closure(id, max_depth, |g, s| g.hyponyms(s))
    }

    fn closure<'a>(
        &'a self,
        id: &SynsetId,
        max_depth: Option<usize>,
        next: impl Fn(&'a Self, &SynsetId) -> &'a [SynsetId],
    ) -> Result<Vec<SynsetId>> {
        self.synset(id)?;
        let mut seen: HashSet<&SynsetId> = HashSet::new();
        let mut queue: VecDeque<(&SynsetId, usize)> = VecDeque::from([(id, 0)]);
        while let Some((cur, depth)) = queue.pop_front() {
            if max_depth.is_some_and(|d| depth >= d) {
                continue;
            }
            for n in next(self, cur) {
                if n != id && seen.insert(n) {
                    queue.push_back((n, depth + 1));
                }
            }
        }
        let mut out: Vec<SynsetId> = seen.into_iter().cloned().collect();
        out.sort();
        Ok(out)
    }

    /// Fails if following hypernym edges can return to a synset.
    pub fn check_acyclic(&self) -> Result<()> {
        let mut ids: Vec<&SynsetId> = self.synsets.keys().collect();
        ids.sort();
        match back_edge(ids, |s| self.hypernyms(s)) {
            Some((node, p)) => Err(Error::Invariant(format!("hypernym cycle through {p} and {node}"))),
            None => Ok(()),
        }
    }
}

/// First `(child, parent)` edge that closes a hypernym cycle in a depth-first
/// walk from `roots` in order, visiting parents in slice order.
fn back_edge<'a>(
    roots: Vec<&'a SynsetId>,
    parents_of: impl Fn(&SynsetId) -> &'a [SynsetId],
) -> Option<(SynsetId, SynsetId)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&SynsetId, Mark> = HashMap::new();
    for root in roots {
        if marks.contains_key(root) {
            continue;
        }
        // (node, next child index)
        let mut stack: Vec<(&SynsetId, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some(top) = stack.last_mut() {
            let (node, child) = *top;
            let parents = parents_of(node);
            if child < parents.len() {
                top.1 += 1;
                let p = &parents[child];
                match marks.get(p) {
                    Some(Mark::Active) => return Some((node.clone(), p.clone())),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(p, Mark::Active);
                        stack.push((p, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    None
}

/// Accumulates synsets and edges, then validates them into a [`LexicalGraph`].
#[derive(Debug, Default)]
pub(crate) struct GraphBuilder {
    synsets: HashMap<SynsetId, Synset>,
    lemma_index: HashMap<(String, Pos), Vec<SynsetId>>,
    hypernyms: HashMap<SynsetId, Vec<SynsetId>>,
}

impl GraphBuilder {
    pub(crate) fn add_synset(&mut self, synset: Synset) -> Result<()> {
        if synset.lemmas.is_empty() {
            return Err(Error::Invariant(format!("synset {} has no lemmas", synset.id)));
        }
        if synset.gloss.trim().is_empty() {
            return Err(Error::Invariant(format!("synset {} has an empty gloss", synset.id)));
        }
        if self.synsets.contains_key(&synset.id) {
            return Err(Error::Invariant(format!("duplicate synset id {}", synset.id)));
        }
        self.synsets.insert(synset.id.clone(), synset);
        Ok(())
    }

    pub(crate) fn add_hypernym(&mut self, child: SynsetId, parent: SynsetId) {
        self.hypernyms.entry(child).or_default().push(parent);
    }

    pub(crate) fn set_senses(&mut self, lemma: String, pos: Pos, senses: Vec<SynsetId>) {
        self.lemma_index.insert((lemma, pos), senses);
    }

    /// Sense lists derived from each synset's `first_sense_rank`, for inputs
    /// without a separate lemma index.
    pub(crate) fn derive_senses(&mut self) {
        let mut ranked: HashMap<(String, Pos), Vec<(u32, SynsetId)>> = HashMap::new();
        for s in self.synsets.values() {
            for (lemma, rank) in &s.first_sense_rank {
                ranked
                    .entry((lemma.clone(), s.pos))
                    .or_default()
                    .push((*rank, s.id.clone()));
            }
        }
        for (key, mut list) in ranked {
            list.sort();
            self.lemma_index
                .insert(key, list.into_iter().map(|(_, id)| id).collect());
        }
    }

    /// Registers `hyponym` as a child of `parent`. Stored as the inverse hypernym edge.
    pub(crate) fn add_hyponym(&mut self, parent: SynsetId, hyponym: SynsetId) {
        self.add_hypernym(hyponym, parent);
    }

    /// Removes hypernym edges until none closes a cycle and returns them as
    /// `(child, parent)`. Deterministic: the walk visits synsets and parents
    /// in id order.
    pub(crate) fn break_cycles(&mut self) -> Vec<(SynsetId, SynsetId)> {
        for parents in self.hypernyms.values_mut() {
            parents.sort();
            parents.dedup();
        }
        let mut removed = Vec::new();
        loop {
            let hypernyms = &self.hypernyms;
            let mut ids: Vec<&SynsetId> = self.synsets.keys().chain(hypernyms.keys()).collect();
            ids.sort();
            ids.dedup();
            let empty: &[SynsetId] = &[];
            let found = back_edge(ids, |s| hypernyms.get(s).map(Vec::as_slice).unwrap_or(empty));
            let Some((child, parent)) = found else {
                return removed;
            };
            if let Some(parents) = self.hypernyms.get_mut(&child) {
                parents.retain(|p| p != &parent);
            }
            removed.push((child, parent));
        }
    }

    pub(crate) fn build(self) -> Result<LexicalGraph> {
        let GraphBuilder {
            synsets,
            mut lemma_index,
            mut hypernyms,
        } = self;

        let mut hyponyms: HashMap<SynsetId, Vec<SynsetId>> = HashMap::new();
        for (child, parents) in hypernyms.iter_mut() {
            if !synsets.contains_key(child) {
                return Err(Error::Invariant(format!("edge from unknown synset {child}")));
            }
            parents.sort();
            parents.dedup();
            for p in parents.iter() {
                if !synsets.contains_key(p) {
                    return Err(Error::Invariant(format!(
                        "{child} points to unknown hypernym {p}"
                    )));
                }
                if p == child {
                    return Err(Error::Invariant(format!("{child} is its own hypernym")));
                }
                hyponyms.entry(p.clone()).or_default().push(child.clone());
            }
        }
        hypernyms.retain(|_, v| !v.is_empty());
        for v in hyponyms.values_mut() {
            v.sort();
        }

        for ((lemma, pos), senses) in lemma_index.iter_mut() {
            let mut seen = HashSet::new();
            senses.retain(|id| seen.insert(id.clone()));
            for id in senses.iter() {
                if !synsets.contains_key(id) {
                    return Err(Error::Invariant(format!(
                        "lemma `{lemma}` ({pos}) lists unknown synset {id}"
                    )));
                }
            }
        }
        lemma_index.retain(|_, v| !v.is_empty());

        let graph = LexicalGraph {
            synsets,
            lemma_index,
            hypernyms,
            hyponyms,
        };
        graph.check_acyclic()?;
        Ok(graph)
    }
}
