use std::collections::HashMap;
use std::fs;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::text::normalize_term;

/// Term frequency source used to break untagged role assignments.
///
/// Lookups are case-insensitive and treat `_` and spaces alike; unseen
/// terms have frequency 0.
pub trait FrequencyProvider: Sync {
    fn frequency(&self, term: &str) -> u64;
}

/// Static `term<TAB>count` table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
}

impl FrequencyTable {
    pub fn insert(&mut self, term: &str, count: u64) {
        self.counts.insert(normalize_term(term), count);
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl<S: AsRef<str>> FromIterator<(S, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut t = FrequencyTable::default();
        for (term, n) in iter {
            t.insert(term.as_ref(), n);
        }
        t
    }
}

impl FrequencyProvider for FrequencyTable {
    fn frequency(&self, term: &str) -> u64 {
        self.counts.get(&normalize_term(term)).copied().unwrap_or(0)
    }
}

pub fn load_frequencies(path: &Path) -> Result<FrequencyTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_frequencies(&text, &path.display().to_string())
}

pub(crate) fn parse_frequencies(text: &str, name: &str) -> Result<FrequencyTable> {
    let mut table = FrequencyTable::default();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (term, count) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(name, lineno + 1, "expected term<TAB>count"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(name, lineno + 1, format!("bad count `{count}`")))?;
        if table.counts.contains_key(&normalize_term(term)) {
            warn!("{name}:{}: duplicate term `{term}`; keeping the last entry", lineno + 1);
        }
        table.insert(term, count);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups_normalize() {
        let t = parse_frequencies("control\t9000000\nunited states\t5000000\n", "freq").unwrap();
        assert!(t.frequency("control") > t.frequency("United_States"));
        assert_eq!(t.frequency("CONTROL"), 9_000_000);
        assert_eq!(t.frequency("unseen"), 0);
    }

    #[test]
    fn malformed() {
        assert!(matches!(
            parse_frequencies("a\t1\nb 2\n", "f"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_frequencies("a\tmany\n", "f").is_err());
    }
}
