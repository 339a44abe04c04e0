//! Query segmentation: NCP formatting and concept-role mapping from typed
//! dependencies.

mod format;
mod parse;
pub mod postag;
mod roles;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use format::detect_and_format;
pub use parse::{load_parses, parse_parses, write_parses};
pub use postag::{reduce_tag, TagClass};
pub use roles::{map_roles, propose_roles, resolve_ambiguous, resolve_untagged};
pub use table::{PriorityClass, RoleMapping, RoleMappingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoleType {
    CoI,
    DC,
    RC,
    SC,
    /// Reserved for expansion terms.
    EC,
    #[serde(rename = "U")]
    Untagged,
}

impl RoleType {
    /// CoI > DC > RC > SC; EC and Untagged never compete.
    pub fn significance(self) -> u8 {
        match self {
            RoleType::CoI => 4,
            RoleType::DC => 3,
            RoleType::RC => 2,
            RoleType::SC => 1,
            RoleType::EC | RoleType::Untagged => 0,
        }
    }

    pub fn is_base_role(self) -> bool {
        matches!(self, RoleType::CoI | RoleType::DC)
    }
}

impl fmt::Display for RoleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoleType::CoI => "CoI",
            RoleType::DC => "DC",
            RoleType::RC => "RC",
            RoleType::SC => "SC",
            RoleType::EC => "EC",
            RoleType::Untagged => "U",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub surface: String,
    pub pos_tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedDependency {
    pub relation: String,
    /// 0 is the artificial root.
    pub head_index: usize,
    pub dep_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedQuery {
    pub qid: String,
    pub raw_text: String,
    pub tokens: Vec<Token>,
    pub deps: Vec<TypedDependency>,
}

impl ParsedQuery {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invariant(format!("query {}: {m}", self.qid)));
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i + 1 {
                return bad(format!("token indices not contiguous at {}", t.index));
            }
        }
        let n = self.tokens.len();
        for d in &self.deps {
            if d.relation.is_empty() {
                return bad("empty relation name".into());
            }
            if d.head_index == d.dep_index {
                return bad(format!("{} links token {} to itself", d.relation, d.head_index));
            }
            if d.head_index > n || d.dep_index > n || d.dep_index == 0 {
                return bad(format!("{} refers to a missing token", d.relation));
            }
        }
        Ok(())
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Head,
    Dependent,
    /// The preposition or conjunction word folded into a collapsed relation name.
    Marker,
    /// No dependency mentions the concept; role comes from its tag.
    Unattached,
}

/// One role suggestion for a concept and where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleProposal {
    pub relation: String,
    pub position: Position,
    pub role: RoleType,
    pub priority: PriorityClass,
    /// The other endpoint of an `undef` relation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub index: usize,
    pub surface: String,
    pub stem: String,
    pub pos_tag: String,
    pub role: RoleType,
    pub ncp: bool,
    pub provenance: Vec<RoleProposal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleTaggedQuery {
    pub qid: String,
    pub concepts: Vec<Concept>,
}

impl RoleTaggedQuery {
    pub fn concept(&self, index: usize) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.index == index)
    }

    /// Role of the first concept whose surface matches case-insensitively.
    pub fn role_of(&self, surface: &str) -> Option<RoleType> {
        self.concepts
            .iter()
            .find(|c| c.surface.eq_ignore_ascii_case(surface))
            .map(|c| c.role)
    }

    pub fn roles(&self) -> Vec<RoleType> {
        self.concepts.iter().map(|c| c.role).collect()
    }
}
