use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::num::Real;

use super::eval::{Qrels, Run};
use super::score::RunEntry;

/// A topic's number and title field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub qid: String,
    pub title: String,
}

fn field<'a>(block: &'a str, tag: &str) -> Option<&'a str> {
    let start = block.find(tag)? + tag.len();
    let rest = &block[start..];
    let end = rest.find('<').unwrap_or(rest.len());
    Some(rest[..end].trim())
}

fn strip_label<'a>(value: &'a str, label: &str) -> &'a str {
    value
        .strip_prefix(label)
        .map(str::trim_start)
        .unwrap_or(value)
}

/// Parses `<top>` blocks, keeping `<num>` (minus a `Number:` label) and
/// `<title>` (minus a `Topic:` label).
pub fn parse_topics(text: &str, name: &str) -> Result<Vec<Topic>> {
    let mut topics = Vec::new();
    let mut pos = 0;
    while let Some(rel) = text[pos..].find("<top>") {
        let start = pos + rel;
        let line = text[..start].lines().count().max(1);
        let end = text[start..]
            .find("</top>")
            .map(|e| start + e)
            .ok_or_else(|| Error::parse(name, line, "missing </top>"))?;
        let block = &text[start + "<top>".len()..end];
        let num = field(block, "<num>").ok_or_else(|| Error::parse(name, line, "topic without <num>"))?;
        let title = field(block, "<title>").ok_or_else(|| Error::parse(name, line, "topic without <title>"))?;
        let qid = strip_label(num, "Number:").to_string();
        if qid.is_empty() {
            return Err(Error::parse(name, line, "empty topic number"));
        }
        let title = strip_label(title, "Topic:").split_whitespace().collect::<Vec<_>>().join(" ");
        topics.push(Topic { qid, title });
        pos = end + "</top>".len();
    }
    Ok(topics)
}

pub fn load_topics(path: &Path) -> Result<Vec<Topic>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topics(&text, &path.display().to_string())
}

/// `qid 0 docid rel` lines; blank lines are skipped.
pub fn parse_qrels(text: &str, name: &str) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (i, line) in text.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let [qid, _, doc, rel] = cols[..] else {
            return Err(Error::parse(name, i + 1, "expected `qid iter docid relevance`"));
        };
        let grade = rel
            .parse()
            .map_err(|_| Error::parse(name, i + 1, format!("relevance `{rel}` is not an integer")))?;
        qrels.insert(qid, doc, grade);
    }
    Ok(qrels)
}

pub fn load_qrels(path: &Path) -> Result<Qrels> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&text, &path.display().to_string())
}

pub fn write_qrels(qrels: &Qrels, mut out: impl Write) -> std::io::Result<()> {
    for (q, d, g) in qrels.iter() {
        writeln!(out, "{q} 0 {d} {g}")?;
    }
    Ok(())
}

/// Six-column run lines `qid Q0 docid rank score tag`, qids in order.
pub fn write_run<S: Real>(run: &Run<S>, tag: &str, mut out: impl Write) -> std::io::Result<()> {
    for entries in run.values() {
        for e in entries {
            writeln!(out, "{} Q0 {} {} {} {tag}", e.qid, e.doc_id, e.rank, e.score)?;
        }
    }
    Ok(())
}

/// Reads a six-column run. Entries are re-sorted by rank and ranks must be
/// contiguous from 1 within each qid.
pub fn parse_run<S: Real>(text: &str, name: &str) -> Result<Run<S>> {
    let mut run: BTreeMap<String, Vec<RunEntry<S>>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let [qid, _, doc, rank, score, _] = cols[..] else {
            return Err(Error::parse(name, i + 1, "expected `qid Q0 docid rank score tag`"));
        };
        let rank = rank
            .parse()
            .map_err(|_| Error::parse(name, i + 1, format!("rank `{rank}` is not an integer")))?;
        let score = score
            .parse::<f64>()
            .ok()
            .and_then(S::from_f64)
            .ok_or_else(|| Error::parse(name, i + 1, format!("score `{score}` is not a number")))?;
        run.entry(qid.to_string()).or_default().push(RunEntry {
            qid: qid.to_string(),
            doc_id: doc.to_string(),
            rank,
            score,
        });
    }
    for (qid, entries) in &mut run {
        entries.sort_by_key(|e| e.rank);
        if entries.iter().enumerate().any(|(i, e)| e.rank != i + 1) {
            return Err(Error::parse(name, 0, format!("ranks for query {qid} are not contiguous from 1")));
        }
    }
    Ok(run)
}

pub fn load_run<S: Real>(path: &Path) -> Result<Run<S>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trec_topic_block() {
        let src = "<top>\n<num> Number: 151\n<title> Topic: Coping with overcrowded prisons\n\n<desc> Description:\nThe document will ...\n</top>\n";
        let topics = parse_topics(src, "t").unwrap();
        assert_eq!(
            topics,
            [Topic {
                qid: "151".into(),
                title: "Coping with overcrowded prisons".into()
            }]
        );
    }

    #[test]
    fn run_round_trip() {
        let src = "1 Q0 B 2 -3.5 x\n1 Q0 A 1 -1.25 x\n";
        let run: Run<f64> = parse_run(src, "r").unwrap();
        assert_eq!(run["1"][0].doc_id, "A");
        let mut buf = Vec::new();
        write_run(&run, "x", &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 Q0 A 1 -1.25 x\n1 Q0 B 2 -3.5 x\n");
        assert!(parse_run::<f64>("1 Q0 A 2 0 x\n", "r").is_err());
    }

    #[test]
    fn qrels_lines() {
        let q = parse_qrels("1 0 A 1\n\n1 0 B 0\n", "q").unwrap();
        assert!(q.is_relevant("1", "A"));
        assert!(!q.is_relevant("1", "B"));
        assert!(parse_qrels("1 0 A\n", "q").unwrap_err().to_string().contains("q:1"));
    }
}
