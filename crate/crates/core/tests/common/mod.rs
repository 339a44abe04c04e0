#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use lexiqx::expander::{ExpandOptions, ExpandedQuery, Relation};
use lexiqx::lexicon::{parse_jsonl, FrequencyTable, LexicalGraph, Pos, SynsetId};
use lexiqx::pipeline::{disambiguate_batch, expand_batch, load_graph, segment_batch};
use lexiqx::retrieval::{load_qrels, Index, Qrels};
use lexiqx::segmenter::{load_parses, RoleMappingTable, RoleTaggedQuery};
use lexiqx::text::content_words;
use lexiqx::wsd::{LeskScorer, RelatednessConfig, SenseAnnotation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn mini_dir() -> PathBuf {
    repo_root().join("data/mini")
}

pub fn wordnet_dir() -> PathBuf {
    repo_root().join("data/wordnet")
}

pub fn sid(s: &str) -> SynsetId {
    SynsetId::new(s)
}

pub fn graph_from(lines: &[serde_json::Value]) -> LexicalGraph {
    let text: Vec<String> = lines.iter().map(|v| v.to_string()).collect();
    parse_jsonl(&text.join("\n"), "fixture").unwrap()
}

/// Hierarchy mirroring the textbook `car` example: `automobile` above, `Ford` below.
pub fn car_graph() -> LexicalGraph {
    use serde_json::json;
    graph_from(&[
        json!({"id":"vehicle","pos":"noun","lemmas":["vehicle"],"gloss":"a conveyance that transports people or objects"}),
        json!({"id":"automobile","pos":"noun","lemmas":["automobile","motorcar"],"gloss":"a motor vehicle with four wheels","hypernyms":["vehicle"]}),
        json!({"id":"car","pos":"noun","lemmas":["car"],"gloss":"a passenger automobile with four wheels","hypernyms":["automobile"]}),
        json!({"id":"ford","pos":"noun","lemmas":["Ford"],"gloss":"a car made by the Ford motor company","hypernyms":["car"]}),
        json!({"id":"model_t","pos":"noun","lemmas":["Model_T"],"gloss":"an early Ford car","hypernyms":["ford"]}),
        json!({"id":"truck","pos":"noun","lemmas":["truck"],"gloss":"a motor vehicle for hauling loads","hypernyms":["automobile"]}),
    ])
}

const WORDS: &[&str] = &[
    "apple", "river", "stone", "engine", "garden", "window", "castle", "forest", "market", "bridge",
    "candle", "harbor", "ladder", "meadow", "pocket", "saddle", "tunnel", "valley", "wagon", "anchor",
    "basket", "cellar", "desert", "feather", "glacier", "hammer", "island", "jacket", "kettle", "lantern",
];

const GLOSS_WORDS: &[&str] = &[
    "small", "round", "fruit", "water", "flowing", "hard", "mineral", "machine", "power", "place",
    "plants", "grow", "opening", "wall", "light", "large", "fortified", "building", "trees", "area",
    "the", "of", "a", "with", "for", "used", "to", "and", "in", "that",
];

/// Deterministic random graph of `n` synsets (at most 50) with a forest of
/// hypernym links, shared lemmas and overlapping glosses.
pub fn random_graph(n: usize, seed: u64) -> LexicalGraph {
    assert!(n <= 50);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    for i in 0..n {
        let pos = if i % 7 == 6 { "adjective" } else { "noun" };
        let k = rng.gen_range(1..=3);
        let lemmas: BTreeSet<&str> = (0..k).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
        let gloss: Vec<&str> = (0..rng.gen_range(3..=9)).map(|_| *GLOSS_WORDS.choose(&mut rng).unwrap()).collect();
        let examples: Vec<String> = if rng.gen_bool(0.3) {
            vec![(0..4).map(|_| *GLOSS_WORDS.choose(&mut rng).unwrap()).collect::<Vec<_>>().join(" ")]
        } else {
            Vec::new()
        };
        let mut hypernyms = Vec::new();
        if pos == "noun" && i > 0 && rng.gen_bool(0.8) {
            let parent = rng.gen_range(0..i);
            if parent % 7 != 6 {
                hypernyms.push(format!("s{parent:02}"));
            }
        }
        lines.push(serde_json::json!({
            "id": format!("s{i:02}"),
            "pos": pos,
            "lemmas": lemmas,
            "gloss": gloss.join(" "),
            "examples": examples,
            "hypernyms": hypernyms,
        }));
    }
    graph_from(&lines)
}

/// Extended gloss as word segments, assembled directly from the graph.
pub fn oracle_segments(g: &LexicalGraph, id: &SynsetId) -> Vec<Vec<String>> {
    let s = g.synset(id).unwrap();
    let mut texts = vec![s.gloss.clone()];
    texts.extend(s.examples.iter().cloned());
    if matches!(s.pos, Pos::Noun | Pos::Verb) {
        texts.extend(g.hypernyms(id).iter().map(|h| g.synset(h).unwrap().gloss.clone()));
        texts.extend(g.hyponyms(id).iter().map(|h| g.synset(h).unwrap().gloss.clone()));
    }
    texts.iter().map(|t| content_words(t).collect()).collect()
}

/// Brute-force overlap: repeatedly find the longest shared run (first
/// position in `a`, then in `b`), add its squared length, blank it out.
pub fn oracle_overlap(a: &[Vec<String>], b: &[Vec<String>]) -> u64 {
    let flat = |segs: &[Vec<String>]| {
        let mut v: Vec<Option<String>> = Vec::new();
        for s in segs {
            v.extend(s.iter().cloned().map(Some));
            v.push(None);
        }
        v
    };
    let (mut a, mut b) = (flat(a), flat(b));
    let mut total = 0;
    loop {
        let mut found = None;
        'len: for len in (1..=a.len().min(b.len())).rev() {
            for i in 0..=a.len() - len {
                for j in 0..=b.len() - len {
                    if (0..len).all(|k| a[i + k].is_some() && a[i + k] == b[j + k]) {
                        found = Some((len, i, j));
                        break 'len;
                    }
                }
            }
        }
        let Some((len, i, j)) = found else { return total };
        total += (len * len) as u64;
        for k in 0..len {
            a[i + k] = None;
            b[j + k] = None;
        }
    }
}

pub fn oracle_lesk(g: &LexicalGraph, x: &SynsetId, y: &SynsetId) -> u64 {
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    oracle_overlap(&oracle_segments(g, x), &oracle_segments(g, y))
}

/// Boolean transitive closure of the hypernym relation (Floyd-Warshall).
pub fn reachability(g: &LexicalGraph) -> BTreeMap<SynsetId, BTreeSet<SynsetId>> {
    let ids: Vec<SynsetId> = g.synsets().iter().map(|s| s.id.clone()).collect();
    let pos: BTreeMap<&SynsetId, usize> = ids.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = ids.len();
    let mut r = vec![vec![false; n]; n];
    for (i, id) in ids.iter().enumerate() {
        for h in g.hypernyms(id) {
            r[i][pos[h]] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let via = r[k].clone();
                for (dst, &reach) in r[i].iter_mut().zip(&via) {
                    *dst |= reach;
                }
            }
        }
    }
    ids.iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), (0..n).filter(|&j| r[i][j]).map(|j| ids[j].clone()).collect()))
        .collect()
}

/// Definitional AP: precision at the rank of each relevant document, summed
/// over the relevant set and divided by its size.
pub fn oracle_ap(ranked: &[&str], relevant: &BTreeSet<&str>) -> f64 {
    let mut sum = 0.0;
    for doc in relevant {
        if let Some(r) = ranked.iter().position(|d| d == doc) {
            let hits = ranked[..=r].iter().filter(|d| relevant.contains(*d)).count();
            sum += hits as f64 / (r + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

/// The shipped mini collection carried through segmentation, sense
/// selection and syn-pool expansion.
pub struct Mini {
    pub graph: LexicalGraph,
    pub tagged: Vec<RoleTaggedQuery>,
    pub senses: Vec<Vec<SenseAnnotation>>,
    pub index: Index,
    pub qrels: Qrels,
}

impl Mini {
    pub fn load() -> Self {
        let dir = mini_dir();
        let graph = load_graph(&dir.join("graph.jsonl")).unwrap();
        let parses = load_parses(&dir.join("parses.tsv")).unwrap();
        let freq = lexiqx::lexicon::load_frequencies(&dir.join("freq.tsv")).unwrap_or_else(|_| FrequencyTable::default());
        let tagged = segment_batch(&parses, &RoleMappingTable::default(), &freq).unwrap();
        let senses = {
            let scorer = LeskScorer::new(&graph, RelatednessConfig::default()).unwrap();
            disambiguate_batch(&tagged, &scorer).unwrap()
        };
        let index = Index::build(&dir.join("corpus")).unwrap();
        let qrels = load_qrels(&dir.join("qrels.txt")).unwrap();
        Mini { graph, tagged, senses, index, qrels }
    }

    pub fn expanded(&self, relation: Relation) -> Vec<ExpandedQuery> {
        let scorer = LeskScorer::new(&self.graph, RelatednessConfig::default()).unwrap();
        let opts = ExpandOptions {
            relation,
            ..ExpandOptions::default()
        };
        expand_batch(&self.tagged, &self.senses, &scorer, opts).unwrap()
    }

    pub fn unexpanded(&self) -> Vec<ExpandedQuery> {
        self.tagged
            .iter()
            .map(|q| ExpandedQuery::unexpanded(q, Relation::Synonym))
            .collect()
    }
}
