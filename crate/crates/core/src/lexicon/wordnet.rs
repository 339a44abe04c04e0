//! Reader for the Princeton WordNet 3.0 database files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use log::{debug, warn};

use super::{GraphBuilder, LexicalGraph, Pos, Synset, SynsetId};
use crate::error::{Error, Result};

fn file_suffix(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "noun",
        Pos::Verb => "verb",
        Pos::Adjective => "adj",
        Pos::Adverb => "adv",
    }
}

fn synset_id(offset: &str, pos: Pos) -> SynsetId {
    SynsetId(format!("{offset}-{}", pos.code()))
}

/// Loads `index.*` and `data.*` for all four parts of speech from `db_dir`.
pub fn load_wordnet(db_dir: &Path) -> Result<LexicalGraph> {
    let mut builder = GraphBuilder::default();
    let mut ranks: BTreeMap<SynsetId, BTreeMap<String, u32>> = BTreeMap::new();
    let mut synsets = Vec::new();

    for pos in Pos::ALL {
        let index_path = db_dir.join(format!("index.{}", file_suffix(pos)));
        let text = fs::read_to_string(&index_path).map_err(|e| Error::io(&index_path, e))?;
        let name = index_path.display().to_string();
        for (lineno, line) in text.lines().enumerate() {
            if line.starts_with(' ') || line.trim().is_empty() {
                continue;
            }
            let (lemma, senses) = parse_index_line(line, pos).map_err(|m| Error::parse(&name, lineno + 1, m))?;
            for (i, id) in senses.iter().enumerate() {
                ranks.entry(id.clone()).or_default().insert(lemma.clone(), i as u32 + 1);
            }
            builder.set_senses(lemma, pos, senses);
        }

        let data_path = db_dir.join(format!("data.{}", file_suffix(pos)));
        let text = fs::read_to_string(&data_path).map_err(|e| Error::io(&data_path, e))?;
        let name = data_path.display().to_string();
        for (lineno, line) in text.lines().enumerate() {
            if line.starts_with(' ') || line.trim().is_empty() {
                continue;
            }
            let rec = parse_data_line(line, pos).map_err(|m| Error::parse(&name, lineno + 1, m))?;
            for parent in rec.hypernyms {
                builder.add_hypernym(rec.synset.id.clone(), parent);
            }
            for child in rec.hyponyms {
                builder.add_hyponym(rec.synset.id.clone(), child);
            }
            synsets.push(rec.synset);
        }
    }

    for mut s in synsets {
        s.first_sense_rank = ranks.remove(&s.id).unwrap_or_default();
        builder.add_synset(s)?;
    }
    for (child, parent) in builder.break_cycles() {
        warn!("dropped hypernym edge {child} -> {parent}: it closes a cycle");
    }
    let graph = builder.build()?;
    debug!("loaded {} synsets from {}", graph.len(), db_dir.display());
    Ok(graph)
}

/// `lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt offset...`
fn parse_index_line(line: &str, pos: Pos) -> Result<(String, Vec<SynsetId>), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let num = |i: usize, what: &str| -> Result<usize, String> {
        fields
            .get(i)
            .ok_or_else(|| format!("missing {what}"))?
            .parse()
            .map_err(|_| format!("bad {what} `{}`", fields[i]))
    };
    let lemma = fields.first().ok_or("empty line")?.to_lowercase();
    let synset_cnt = num(2, "synset_cnt")?;
    let p_cnt = num(3, "p_cnt")?;
    let first_offset = 4 + p_cnt + 2;
    if fields.len() < first_offset + synset_cnt {
        return Err(format!("expected {synset_cnt} synset offsets"));
    }
    let senses = fields[first_offset..first_offset + synset_cnt]
        .iter()
        .map(|o| synset_id(o, pos))
        .collect();
    Ok((lemma, senses))
}

struct DataRecord {
    synset: Synset,
    hypernyms: Vec<SynsetId>,
    hyponyms: Vec<SynsetId>,
}

/// `offset lex_filenum ss_type w_cnt (word lex_id)+ p_cnt (ptr)* [frames] | gloss`
fn parse_data_line(line: &str, pos: Pos) -> Result<DataRecord, String> {
    let (head, gloss_text) = line.split_once(" | ").unwrap_or((line, ""));
    let fields: Vec<&str> = head.split_whitespace().collect();
    let get = |i: usize| fields.get(i).copied().ok_or_else(|| format!("truncated record at field {i}"));

    let offset = get(0)?;
    let w_cnt = usize::from_str_radix(get(3)?, 16).map_err(|_| "bad w_cnt".to_string())?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for i in 0..w_cnt {
        let word = get(4 + 2 * i)?;
        // adjective position markers: (a), (p), (ip)
        let word = match word.find('(') {
            Some(p) if word.ends_with(')') => &word[..p],
            _ => word,
        };
        let lemma = word.to_lowercase();
        if !lemmas.contains(&lemma) {
            lemmas.push(lemma);
        }
    }
    let mut at = 4 + 2 * w_cnt;
    let p_cnt: usize = get(at)?.parse().map_err(|_| "bad p_cnt".to_string())?;
    at += 1;
    let mut hypernyms = Vec::new();
    let mut hyponyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = get(at)?;
        let target = get(at + 1)?;
        let target_pos = Pos::from_code(get(at + 2)?).ok_or("bad pointer pos")?;
        at += 4;
        match symbol {
            "@" | "@i" => hypernyms.push(synset_id(target, target_pos)),
            "~" | "~i" => hyponyms.push(synset_id(target, target_pos)),
            _ => {}
        }
    }

    let (gloss, examples) = split_gloss(gloss_text.trim());
    if gloss.is_empty() && examples.is_empty() {
        return Err(format!("synset {offset} has no gloss"));
    }
    Ok(DataRecord {
        synset: Synset {
            id: synset_id(offset, pos),
            pos,
            lemmas,
            // a handful of synsets only carry an example sentence
            gloss: if gloss.is_empty() { examples.join("; ") } else { gloss },
            examples,
            first_sense_rank: BTreeMap::new(),
        },
        hypernyms,
        hyponyms,
    })
}

/// Splits `definition; "example one"; "example two"` into its parts.
fn split_gloss(text: &str) -> (String, Vec<String>) {
    let mut defs = Vec::new();
    let mut examples = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if part.starts_with('"') {
            examples.push(part.trim_matches('"').trim().to_string());
        } else {
            defs.push(part);
        }
    }
    (defs.join("; "), examples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_line() {
        let line = "02958343 06 n 02 car 0 auto 0 002 @ 03791235 n 0000 ~ 02701002 n 0000 | a motor vehicle with four wheels; \"he needs a car to get to work\"  ";
        let rec = parse_data_line(line, Pos::Noun).unwrap();
        assert_eq!(rec.synset.id.as_str(), "02958343-n");
        assert_eq!(rec.synset.lemmas, ["car", "auto"]);
        assert_eq!(rec.synset.gloss, "a motor vehicle with four wheels");
        assert_eq!(rec.synset.examples, ["he needs a car to get to work"]);
        assert_eq!(rec.hypernyms, [SynsetId::new("03791235-n")]);
        assert_eq!(rec.hyponyms, [SynsetId::new("02701002-n")]);
    }

    #[test]
    fn satellite_adjectives_and_markers() {
        let line = "00001740 00 s 01 able(a) 0 001 & 00002098 a 0000 | (usually followed by `to') having the necessary means";
        let rec = parse_data_line(line, Pos::Adjective).unwrap();
        assert_eq!(rec.synset.lemmas, ["able"]);
        assert!(rec.hypernyms.is_empty());
    }

    #[test]
    fn index_line() {
        let (lemma, senses) =
            parse_index_line("java n 3 7 @ ~ #p %m %s %p + 3 2 08908248 07929519 06901053  ", Pos::Noun).unwrap();
        assert_eq!(lemma, "java");
        assert_eq!(senses.len(), 3);
        assert_eq!(senses[2].as_str(), "06901053-n");
        assert!(parse_index_line("java n 3 0 3 2 08908248", Pos::Noun).is_err());
    }

    #[test]
    fn missing_file_names_it() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_wordnet(dir.path()).unwrap_err();
        assert!(err.to_string().contains("index.noun"), "{err}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        for suffix in ["noun", "verb", "adj", "adv"] {
            fs::write(dir.path().join(format!("index.{suffix}")), "").unwrap();
            fs::write(dir.path().join(format!("data.{suffix}")), "").unwrap();
        }
        fs::write(
            dir.path().join("data.noun"),
            "  license header\n00000001 00 n 01 car 0 000 | a motor vehicle\n00000002 00 n zz\n",
        )
        .unwrap();
        let err = load_wordnet(dir.path()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn one_synset_fixture() {
        let dir = tempfile::tempdir().unwrap();
        for suffix in ["noun", "verb", "adj", "adv"] {
            fs::write(dir.path().join(format!("index.{suffix}")), "").unwrap();
            fs::write(dir.path().join(format!("data.{suffix}")), "").unwrap();
        }
        fs::write(
            dir.path().join("index.noun"),
            "auto n 1 0 1 0 00000001\ncar n 1 0 1 0 00000001\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("data.noun"),
            "00000001 06 n 02 car 0 auto 0 000 | a motor vehicle\n",
        )
        .unwrap();
        let g = load_wordnet(dir.path()).unwrap();
        assert_eq!(g.len(), 1);
        let s = g.synset(&SynsetId::new("00000001-n")).unwrap();
        assert_eq!(s.lemmas, ["car", "auto"]);
        assert_eq!(s.gloss, "a motor vehicle");
        assert_eq!(s.first_sense_rank["car"], 1);
        assert_eq!(g.senses("auto", Pos::Noun), [s.id.clone()].as_slice());
    }
}
