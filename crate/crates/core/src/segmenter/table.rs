use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RoleType;
use crate::error::{Error, Result};

const DEFAULT_TABLE: &str = include_str!("../../data/role_mapping.json");

/// How strongly a relation's proposal counts when proposals conflict.
/// `Normal > Preposition > Conjunction`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorityClass {
    Conjunction,
    Preposition,
    Normal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMapping {
    pub relation: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub group: String,
    pub head: RoleType,
    pub dependent: RoleType,
    pub priority: PriorityClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TableFile {
    relations: Vec<RoleMapping>,
}

/// Grammatical relation → (head role, dependent role).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleMappingTable {
    rows: BTreeMap<String, RoleMapping>,
}

impl Default for RoleMappingTable {
    fn default() -> Self {
        Self::from_json(DEFAULT_TABLE, "built-in role table").expect("built-in role table is valid")
    }
}

impl RoleMappingTable {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn from_json(text: &str, name: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| Error::parse(name, e.line(), e.to_string()))?;
        let mut rows = BTreeMap::new();
        for row in file.relations {
            if matches!(row.head, RoleType::EC | RoleType::Untagged)
                || matches!(row.dependent, RoleType::EC | RoleType::Untagged)
            {
                return Err(Error::Config(format!("relation `{}` maps to a non-query role", row.relation)));
            }
            let key = row.relation.to_lowercase();
            if rows.insert(key.clone(), row).is_some() {
                return Err(Error::Config(format!("relation `{key}` listed twice")));
            }
        }
        Ok(RoleMappingTable { rows })
    }

    pub fn rows(&self) -> impl Iterator<Item = &RoleMapping> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row for a relation name. Collapsed prepositions (`prep_of`, `prepc_by`)
    /// resolve to `prep`, collapsed conjunctions (`conj_and`) to `conj`.
    /// `None` means the relation is handled as `undef`.
    pub fn lookup(&self, relation: &str) -> Option<&RoleMapping> {
        let rel = relation.to_lowercase();
        if let Some(row) = self.rows.get(&rel) {
            return Some(row);
        }
        let (base, _) = collapsed_parts(&rel)?;
        self.rows.get(base)
    }
}

/// Splits a collapsed relation like `prep_of` into (`prep`, `of`).
pub(crate) fn collapsed_parts(relation: &str) -> Option<(&'static str, &str)> {
    for (prefix, base) in [("prepc_", "prep"), ("prep_", "prep"), ("conj_", "conj")] {
        if let Some(word) = relation.strip_prefix(prefix) {
            if !word.is_empty() {
                return Some((base, word));
            }
        }
    }
    None
}
