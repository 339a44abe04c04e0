//! Dependency-parse input files.
//!
//! One TSV record per line. Token lines come first for each query:
//! `qid <TAB> #tok <TAB> index <TAB> surface <TAB> pos`; dependency lines
//! follow: `qid <TAB> relation <TAB> head <TAB> head_index <TAB> dep <TAB> dep_index`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{ParsedQuery, Token, TypedDependency};
use crate::error::{Error, Result};

pub fn load_parses(path: &Path) -> Result<Vec<ParsedQuery>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_parses(&text, &path.display().to_string())
}

pub fn parse_parses(text: &str, name: &str) -> Result<Vec<ParsedQuery>> {
    let mut queries: Vec<ParsedQuery> = Vec::new();
    let mut by_qid: HashMap<String, usize> = HashMap::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() || line.starts_with("//") {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let err = |m: String| Error::parse(name, lineno, m);
        let qid = fields[0].trim();
        if qid.is_empty() {
            return Err(err("empty qid".into()));
        }
        let slot = *by_qid.entry(qid.to_string()).or_insert_with(|| {
            queries.push(ParsedQuery {
                qid: qid.to_string(),
                raw_text: String::new(),
                tokens: Vec::new(),
                deps: Vec::new(),
            });
            queries.len() - 1
        });
        let q = &mut queries[slot];
        let index = |s: &str| s.trim().parse::<usize>().map_err(|_| err(format!("bad index `{s}`")));

        if fields.get(1) == Some(&"#tok") {
            if fields.len() != 5 {
                return Err(err(format!("token line needs 5 fields, found {}", fields.len())));
            }
            if !q.deps.is_empty() {
                return Err(err("token line after dependency lines".into()));
            }
            let idx = index(fields[2])?;
            if idx != q.tokens.len() + 1 {
                return Err(err(format!("token index {idx} out of sequence")));
            }
            q.tokens.push(Token {
                index: idx,
                surface: fields[3].to_string(),
                pos_tag: fields[4].trim().to_string(),
            });
        } else {
            if fields.len() != 6 {
                return Err(err(format!("dependency line needs 6 fields, found {}", fields.len())));
            }
            let head_index = index(fields[3])?;
            let dep_index = index(fields[5])?;
            for (surface, idx) in [(fields[2], head_index), (fields[4], dep_index)] {
                if idx == 0 {
                    continue;
                }
                match q.tokens.get(idx - 1) {
                    Some(t) if t.surface == surface => {}
                    Some(t) => return Err(err(format!("token {idx} is `{}`, not `{surface}`", t.surface))),
                    None => return Err(err(format!("no token {idx} in query {qid}"))),
                }
            }
            q.deps.push(TypedDependency {
                relation: fields[1].trim().to_string(),
                head_index,
                dep_index,
            });
        }
    }

    for q in &mut queries {
        q.raw_text = q.tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
        q.validate()
            .map_err(|e| Error::parse(name, 0, e.to_string()))?;
    }
    Ok(queries)
}

/// Inverse of [`parse_parses`].
pub fn write_parses(queries: &[ParsedQuery]) -> String {
    let mut out = String::new();
    for q in queries {
        for t in &q.tokens {
            let _ = writeln!(out, "{}\t#tok\t{}\t{}\t{}", q.qid, t.index, t.surface, t.pos_tag);
        }
        for d in &q.deps {
            let surface = |i: usize| q.token(i).map_or("ROOT", |t| t.surface.as_str());
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                q.qid,
                d.relation,
                surface(d.head_index),
                d.head_index,
                surface(d.dep_index),
                d.dep_index
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = "q1\t#tok\t1\tmild\tJJ\nq1\t#tok\t2\tyeast\tNN\nq1\t#tok\t3\tinfection\tNN\nq1\tamod\tinfection\t3\tmild\t1\nq1\tnn\tinfection\t3\tyeast\t2\n";

    #[test]
    fn reads_and_writes() {
        let qs = parse_parses(FIG2, "p").unwrap();
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].raw_text, "mild yeast infection");
        assert_eq!(qs[0].deps[1].relation, "nn");
        assert_eq!(write_parses(&qs), FIG2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "q1\t#tok\t1\tmild\tJJ\nq1\tamod\tinfection\t3\tmild\t1\n";
        assert!(matches!(parse_parses(bad, "p"), Err(Error::Parse { line: 2, .. })));
        let bad = "q1\t#tok\t2\tmild\tJJ\n";
        assert!(matches!(parse_parses(bad, "p"), Err(Error::Parse { line: 1, .. })));
        let bad = "q1\t#tok\t1\tmild\n";
        assert!(parse_parses(bad, "p").is_err());
    }
}
