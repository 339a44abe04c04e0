use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::expander::{porter_stem, stem_term};
use crate::lexicon::FrequencyProvider;
use crate::text::{is_stop_word, normalize_term};

use super::corpus::{read_corpus, Document};

const FORMAT: &str = "lexiqx-index";
const VERSION: u32 = 1;

/// Document-side analysis: lowercase, split on anything but alphanumerics and
/// `_`, drop stop words, Porter-stem. Underscore-joined tokens stay single terms.
pub fn analyze(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .map(|t| t.trim_matches('_'))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .filter(|t| !is_stop_word(t))
        .map(|t| if t.contains('_') { stem_term(&t) } else { porter_stem(&t) })
}

/// Inverted index over a document collection. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Index {
    docnos: Vec<String>,
    doc_lengths: Vec<u64>,
    postings: BTreeMap<String, Vec<(u32, u32)>>,
    collection_frequency: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl Index {
    /// Indexes every document under `corpus`.
    pub fn build(corpus: &Path) -> Result<Self> {
        Self::from_documents(read_corpus(corpus)?)
    }

    pub fn from_documents(mut docs: Vec<Document>) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::Config("no documents".into()));
        }
        docs.sort_by(|a, b| a.docno.cmp(&b.docno));
        for pair in docs.windows(2) {
            if pair[0].docno == pair[1].docno {
                return Err(Error::parse(
                    pair[1].file.display().to_string(),
                    pair[1].line,
                    format!("duplicate DOCNO `{}`", pair[1].docno),
                ));
            }
        }
        let n = u32::try_from(docs.len()).map_err(|_| Error::Config("too many documents".into()))?;
        let mut idx = Index::default();
        let mut postings: HashMap<String, Vec<(u32, u32)>> = HashMap::new();
        for (doc, d) in docs.iter().zip(0..n) {
            let mut tf: BTreeMap<String, u32> = BTreeMap::new();
            let mut len = 0u64;
            for term in analyze(&doc.text) {
                *tf.entry(term).or_default() += 1;
                len += 1;
            }
            for (term, count) in tf {
                postings.entry(term).or_default().push((d, count));
            }
            idx.docnos.push(doc.docno.clone());
            idx.doc_lengths.push(len);
            idx.total_tokens += len;
        }
        for (term, list) in postings {
            let cf = list.iter().map(|&(_, tf)| u64::from(tf)).sum();
            idx.collection_frequency.insert(term.clone(), cf);
            idx.postings.insert(term, list);
        }
        Ok(idx)
    }

    pub fn doc_count(&self) -> usize {
        self.docnos.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Document numbers in ascending order; a document's position is its internal id.
    pub fn docnos(&self) -> &[String] {
        &self.docnos
    }

    pub fn docno(&self, doc: u32) -> &str {
        &self.docnos[doc as usize]
    }

    pub fn doc_length(&self, doc: u32) -> u64 {
        self.doc_lengths[doc as usize]
    }

    pub fn doc_lengths(&self) -> &[u64] {
        &self.doc_lengths
    }

    /// `(doc, tf)` pairs sorted by doc id; empty for unseen stems.
    pub fn postings(&self, stem: &str) -> &[(u32, u32)] {
        self.postings.get(stem).map_or(&[], Vec::as_slice)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn collection_frequency(&self, stem: &str) -> u64 {
        self.collection_frequency.get(stem).copied().unwrap_or(0)
    }

    pub fn document_frequency(&self, stem: &str) -> usize {
        self.postings(stem).len()
    }

    pub fn contains_term(&self, stem: &str) -> bool {
        self.postings.contains_key(stem)
    }

    /// Writes the index as flat text files under `dir` (created if needed).
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let manifest = format!(
            "format\t{FORMAT}\nversion\t{VERSION}\ndocs\t{}\nterms\t{}\ntotal_tokens\t{}\n",
            self.docnos.len(),
            self.postings.len(),
            self.total_tokens
        );
        let mut docs = String::new();
        for (docno, len) in self.docnos.iter().zip(&self.doc_lengths) {
            writeln!(docs, "{docno}\t{len}").unwrap();
        }
        let mut post = String::new();
        for (term, list) in &self.postings {
            write!(post, "{term}\t{}\t", self.collection_frequency[term]).unwrap();
            for (i, (d, tf)) in list.iter().enumerate() {
                if i > 0 {
                    post.push(' ');
                }
                write!(post, "{d}:{tf}").unwrap();
            }
            post.push('\n');
        }
        for (name, body) in [("manifest.tsv", manifest), ("docs.tsv", docs), ("postings.tsv", post)] {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    /// Reads an index written by [`Index::save`], checking version and invariants.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path)
                .map(|s| (path.display().to_string(), s))
                .map_err(|e| Error::io(&path, e))
        };
        let (mname, manifest) = read("manifest.tsv")?;
        let mut fields = HashMap::new();
        for (i, line) in manifest.lines().enumerate() {
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(&mname, i + 1, "expected key<TAB>value"))?;
            fields.insert(k.to_string(), v.to_string());
        }
        let field = |k: &str| {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| Error::parse(&mname, 1, format!("missing `{k}`")))
        };
        let num = |k: &str| -> Result<u64> {
            field(k)?
                .parse()
                .map_err(|_| Error::parse(&mname, 1, format!("`{k}` is not a number")))
        };
        if field("format")? != FORMAT {
            return Err(Error::parse(&mname, 1, "not an index directory"));
        }
        let version = num("version")?;
        if version != u64::from(VERSION) {
            return Err(Error::parse(&mname, 2, format!("unsupported index version {version}")));
        }

        let mut idx = Index::default();
        let (dname, docs) = read("docs.tsv")?;
        for (i, line) in docs.lines().enumerate() {
            let bad = || Error::parse(&dname, i + 1, "expected docno<TAB>length");
            let (docno, len) = line.split_once('\t').ok_or_else(bad)?;
            idx.docnos.push(docno.to_string());
            idx.doc_lengths.push(len.parse().map_err(|_| bad())?);
        }
        let (pname, post) = read("postings.tsv")?;
        for (i, line) in post.lines().enumerate() {
            let bad = |m: &str| Error::parse(&pname, i + 1, m.to_string());
            let mut cols = line.split('\t');
            let (Some(term), Some(cf), Some(list), None) = (cols.next(), cols.next(), cols.next(), cols.next()) else {
                return Err(bad("expected term<TAB>cf<TAB>postings"));
            };
            let cf: u64 = cf.parse().map_err(|_| bad("bad collection frequency"))?;
            let mut entries = Vec::new();
            for pair in list.split(' ').filter(|p| !p.is_empty()) {
                let (d, tf) = pair.split_once(':').ok_or_else(|| bad("expected doc:tf"))?;
                entries.push((
                    d.parse().map_err(|_| bad("bad doc id"))?,
                    tf.parse().map_err(|_| bad("bad term frequency"))?,
                ));
            }
            idx.collection_frequency.insert(term.to_string(), cf);
            idx.postings.insert(term.to_string(), entries);
        }
        idx.total_tokens = num("total_tokens")?;
        if num("docs")? != idx.docnos.len() as u64 || num("terms")? != idx.postings.len() as u64 {
            return Err(Error::Invariant(format!("{mname}: counts disagree with index files")));
        }
        idx.validate()?;
        Ok(idx)
    }

    /// Checks the count invariants tying postings, lengths and totals together.
    pub fn validate(&self) -> Result<()> {
        if self.docnos.len() != self.doc_lengths.len() {
            return Err(Error::Invariant("doc table and length table differ in size".into()));
        }
        if self.docnos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant("document numbers not strictly ascending".into()));
        }
        if self.doc_lengths.iter().sum::<u64>() != self.total_tokens {
            return Err(Error::Invariant("document lengths do not sum to total tokens".into()));
        }
        let mut per_doc = vec![0u64; self.docnos.len()];
        for (term, list) in &self.postings {
            if list.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invariant(format!("postings for `{term}` not sorted")));
            }
            let mut cf = 0;
            for &(d, tf) in list {
                let slot = per_doc
                    .get_mut(d as usize)
                    .ok_or_else(|| Error::Invariant(format!("postings for `{term}` name unknown doc {d}")))?;
                *slot += u64::from(tf);
                cf += u64::from(tf);
            }
            if self.collection_frequency.get(term) != Some(&cf) {
                return Err(Error::Invariant(format!("collection frequency of `{term}` disagrees with postings")));
            }
        }
        if per_doc != self.doc_lengths {
            return Err(Error::Invariant("document lengths disagree with postings".into()));
        }
        Ok(())
    }
}

/// Document frequency from an index, for the untagged-concept frequency rule.
#[derive(Debug, Clone, Copy)]
pub struct IndexFrequencies<'a>(pub &'a Index);

impl FrequencyProvider for IndexFrequencies<'_> {
    fn frequency(&self, term: &str) -> u64 {
        self.0.document_frequency(&stem_term(&normalize_term(term))) as u64
    }
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::*;

    fn doc(no: &str, text: &str) -> Document {
        Document {
            docno: no.into(),
            text: text.into(),
            file: PathBuf::from("mem"),
            line: 1,
        }
    }

    #[test]
    fn two_doc_counts() {
        let idx = Index::from_documents(vec![doc("B", "yeast infection"), doc("A", "car repair")]).unwrap();
        assert_eq!(idx.postings("car"), &[(0, 1)]);
        assert_eq!(idx.docno(0), "A");
        assert_eq!(idx.total_tokens(), 4);
        assert_eq!(idx.collection_frequency("infect"), 1);
        idx.validate().unwrap();
    }

    #[test]
    fn analysis_drops_stop_words_and_stems() {
        let terms: Vec<_> = analyze("The cars of United_States, repairing").collect();
        assert_eq!(terms, ["car", "unit_state", "repair"]);
    }

    #[test]
    fn duplicate_docno_is_named() {
        let err = Index::from_documents(vec![doc("X1", "a"), doc("X1", "b")]).unwrap_err();
        assert!(err.to_string().contains("X1"));
    }

    #[test]
    fn empty_collection() {
        assert!(Index::from_documents(Vec::new()).unwrap_err().to_string().contains("no documents"));
    }

    #[test]
    fn df_provider() {
        let idx = Index::from_documents(vec![doc("A", "car car"), doc("B", "cars")]).unwrap();
        assert_eq!(IndexFrequencies(&idx).frequency("Car"), 2);
        assert_eq!(IndexFrequencies(&idx).frequency("boat"), 0);
    }
}
