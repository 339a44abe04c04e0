use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NcpKind {
    PhrasalVerb,
    Idiom,
    Collocation,
    ProperName,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Record {
    Phrase {
        phrase: String,
        #[serde(rename = "type", default)]
        kind: Option<NcpKind>,
    },
    Acronym {
        acronym: String,
        full: String,
    },
}

/// Known non-compositional phrases and acronyms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NcpLexicon {
    /// Lowercase, space separated, at least two words.
    pub phrases: BTreeSet<String>,
    pub acronyms: BTreeMap<String, String>,
    pub proper_names: BTreeSet<String>,
}

impl NcpLexicon {
    pub fn add_phrase(&mut self, phrase: &str, kind: Option<NcpKind>) -> Result<(), String> {
        let key = phrase
            .split_whitespace()
            .map(str::to_lowercase)
            .collect::<Vec<_>>()
            .join(" ");
        if key.split(' ').count() < 2 {
            return Err(format!("phrase `{phrase}` has fewer than two words"));
        }
        if !self.phrases.insert(key.clone()) {
            warn!("duplicate NCP phrase `{key}`; keeping the last entry");
        }
        if kind == Some(NcpKind::ProperName) {
            self.proper_names.insert(key);
        } else {
            self.proper_names.remove(&key);
        }
        Ok(())
    }

    pub fn add_acronym(&mut self, acronym: &str, full: &str) -> Result<(), String> {
        if acronym.is_empty() || acronym.chars().any(|c| c.is_lowercase()) {
            return Err(format!("acronym `{acronym}` must be upper case"));
        }
        if self
            .acronyms
            .insert(acronym.to_string(), full.trim().to_string())
            .is_some()
        {
            warn!("duplicate acronym `{acronym}`; keeping the last entry");
        }
        Ok(())
    }

    /// Longest phrase length in words.
    pub fn max_phrase_words(&self) -> usize {
        self.phrases
            .iter()
            .map(|p| p.split(' ').count())
            .max()
            .unwrap_or(0)
    }

    /// Every phrase in underscore form, for phrase-aware indexing.
    pub fn underscore_phrases(&self) -> impl Iterator<Item = String> + '_ {
        self.phrases.iter().map(|p| p.replace(' ', "_"))
    }
}

pub fn load_ncp_lexicon(path: &Path) -> Result<NcpLexicon> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ncp(&text, &path.display().to_string())
}

pub(crate) fn parse_ncp(text: &str, name: &str) -> Result<NcpLexicon> {
    let mut lex = NcpLexicon::default();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record =
            serde_json::from_str(line).map_err(|e| Error::parse(name, lineno + 1, e.to_string()))?;
        match rec {
            Record::Phrase { phrase, kind } => lex.add_phrase(&phrase, kind),
            Record::Acronym { acronym, full } => lex.add_acronym(&acronym, &full),
        }
        .map_err(|m| Error::parse(name, lineno + 1, m))?;
    }
    Ok(lex)
}
