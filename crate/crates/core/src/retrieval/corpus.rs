use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One `<DOC>` envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub docno: String,
    pub text: String,
    pub file: PathBuf,
    pub line: usize,
}

/// Reads every TREC-text file under `path` (a file or a directory, walked
/// recursively in name order).
pub fn read_corpus(path: &Path) -> Result<Vec<Document>> {
    let mut files = Vec::new();
    collect_files(path, &mut files)?;
    let mut docs = Vec::new();
    for file in files {
        let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        docs.extend(parse_trec_text(&text, &file)?);
    }
    if docs.is_empty() {
        return Err(Error::Config(format!("no documents found under {}", path.display())));
    }
    Ok(docs)
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_file() {
        out.push(path.to_path_buf());
        return Ok(());
    }
    let mut entries = fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    for entry in entries {
        let hidden = entry
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with('.'));
        if !hidden {
            collect_files(&entry, out)?;
        }
    }
    Ok(())
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
}

fn between<'a>(body: &'a str, open: &str, close: &str) -> Option<(&'a str, &'a str)> {
    let start = body.find(open)? + open.len();
    let len = body[start..].find(close)?;
    Some((&body[start..start + len], &body[start + len + close.len()..]))
}

/// Splits `text` into documents. Everything outside `<DOC>` envelopes is ignored;
/// all `<TEXT>` sections of a document are concatenated.
pub fn parse_trec_text(text: &str, file: &Path) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut pos = 0;
    while let Some(rel) = text[pos..].find("<DOC>") {
        let start = pos + rel;
        let line = line_of(text, start);
        let malformed = |what: &str| Error::parse(file.display().to_string(), line, format!("document at byte {start}: {what}"));
        let body_start = start + "<DOC>".len();
        let end = text[body_start..]
            .find("</DOC>")
            .map(|e| body_start + e)
            .ok_or_else(|| malformed("missing </DOC>"))?;
        let body = &text[body_start..end];
        if body.contains("<DOC>") {
            return Err(malformed("nested <DOC>"));
        }
        let (docno, _) = between(body, "<DOCNO>", "</DOCNO>").ok_or_else(|| malformed("missing <DOCNO>"))?;
        let docno = docno.trim();
        if docno.is_empty() || docno.contains(char::is_whitespace) {
            return Err(malformed("DOCNO must be a single non-empty token"));
        }
        let mut parts = Vec::new();
        let mut rest = body;
        while let Some((section, after)) = between(rest, "<TEXT>", "</TEXT>") {
            parts.push(section.trim());
            rest = after;
        }
        if parts.is_empty() && body.contains("<TEXT>") {
            return Err(malformed("unterminated <TEXT>"));
        }
        docs.push(Document {
            docno: docno.to_string(),
            text: parts.join("\n"),
            file: file.to_path_buf(),
            line,
        });
        pos = end + "</DOC>".len();
    }
    Ok(docs)
}
