//! Compact JSON-lines graph format, one synset per line. Used for fixtures
//! and small hand-built ontologies.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, LexicalGraph, Pos, Synset, SynsetId};
use crate::error::{Error, Result};
use crate::text::normalize_term;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynsetRecord {
    pub id: SynsetId,
    pub pos: Pos,
    pub lemmas: Vec<String>,
    pub gloss: String,
    #[serde(default)]
    pub examples: Vec<String>,
    #[serde(default)]
    pub hypernyms: Vec<SynsetId>,
    /// Per-lemma sense rank. Missing lemmas are ranked after explicit ones,
    /// in file order.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sense_ranks: BTreeMap<String, u32>,
}

pub fn load_jsonl(path: &Path) -> Result<LexicalGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text, &path.display().to_string())
}

/// Parses the compact format from a string; `name` labels errors.
pub fn parse_jsonl(text: &str, name: &str) -> Result<LexicalGraph> {
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: SynsetRecord =
            serde_json::from_str(line).map_err(|e| Error::parse(name, lineno + 1, e.to_string()))?;
        records.push((lineno + 1, rec));
    }

    // implicit ranks continue after the largest explicit rank for that lemma
    let mut next_rank: BTreeMap<(String, Pos), u32> = BTreeMap::new();
    for (_, rec) in &records {
        for (lemma, rank) in &rec.sense_ranks {
            let e = next_rank.entry((normalize_term(lemma), rec.pos)).or_default();
            *e = (*e).max(*rank);
        }
    }

    let mut builder = GraphBuilder::default();
    let mut used: BTreeMap<(String, Pos), Vec<u32>> = BTreeMap::new();
    for (lineno, rec) in records {
        let lemmas: Vec<String> = rec.lemmas.iter().map(|l| normalize_term(l)).collect();
        let mut ranks = BTreeMap::new();
        for lemma in &lemmas {
            let key = (lemma.clone(), rec.pos);
            let rank = match rec.sense_ranks.get(lemma) {
                Some(&r) => r,
                None => {
                    let e = next_rank.entry(key.clone()).or_default();
                    *e += 1;
                    *e
                }
            };
            let seen = used.entry(key).or_default();
            if rank == 0 || seen.contains(&rank) {
                return Err(Error::parse(name, lineno, format!("invalid or repeated sense rank {rank} for `{lemma}`")));
            }
            seen.push(rank);
            ranks.insert(lemma.clone(), rank);
        }
        for parent in &rec.hypernyms {
            builder.add_hypernym(rec.id.clone(), parent.clone());
        }
        builder
            .add_synset(Synset {
                id: rec.id,
                pos: rec.pos,
                lemmas,
                gloss: rec.gloss,
                examples: rec.examples,
                first_sense_rank: ranks,
            })
            .map_err(|e| Error::parse(name, lineno, e.to_string()))?;
    }
    builder.derive_senses();
    builder.build()
}

/// Writes the graph in the compact format, sorted by synset id.
pub fn export_jsonl(graph: &LexicalGraph, mut out: impl Write) -> std::io::Result<()> {
    for s in graph.synsets() {
        let rec = SynsetRecord {
            id: s.id.clone(),
            pos: s.pos,
            lemmas: s.lemmas.clone(),
            gloss: s.gloss.clone(),
            examples: s.examples.clone(),
            hypernyms: graph.hypernyms(&s.id).to_vec(),
            sense_ranks: s.first_sense_rank.clone(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"
{"id":"veh","pos":"noun","lemmas":["motor vehicle"],"gloss":"a self-propelled wheeled vehicle"}
{"id":"car","pos":"noun","lemmas":["car","auto"],"gloss":"a motor vehicle","hypernyms":["veh"]}
{"id":"rail","pos":"noun","lemmas":["car"],"gloss":"a wheeled vehicle adapted to rails","sense_ranks":{"car":1}}
"#;

    #[test]
    fn ranks_and_edges() {
        let g = parse_jsonl(FIXTURE, "fixture").unwrap();
        assert_eq!(g.len(), 3);
        let car = g.senses("car", Pos::Noun);
        assert_eq!(car, [SynsetId::new("rail"), SynsetId::new("car")].as_slice());
        assert_eq!(g.senses("motor_vehicle", Pos::Noun).len(), 1);
        assert_eq!(g.hyponyms(&SynsetId::new("veh")), [SynsetId::new("car")].as_slice());
    }

    #[test]
    fn round_trip() {
        let g = parse_jsonl(FIXTURE, "fixture").unwrap();
        let mut buf = Vec::new();
        export_jsonl(&g, &mut buf).unwrap();
        let again = parse_jsonl(std::str::from_utf8(&buf).unwrap(), "export").unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn bad_record_has_line_number() {
        let err = parse_jsonl("{\"id\":\"a\",\"pos\":\"noun\",\"lemmas\":[\"a\"],\"gloss\":\"g\"}\n{oops}\n", "f").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_jsonl("{\"id\":\"a\",\"pos\":\"noun\",\"lemmas\":[],\"gloss\":\"g\"}\n", "f").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
