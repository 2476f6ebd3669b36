//! The JSON problem format: an agenda, an optional constraint, a profile,
//! and optional named blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::agenda::{normalize_block, Agenda, JudgmentSet, Profile};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::parse_formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    /// The preagenda, one formula per issue.
    pub agenda: Vec<String>,
    /// Integrity constraint; `true` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    /// One row of `"+"`/`"-"` per individual, in agenda order.
    #[serde(default)]
    pub profile: Vec<JudgmentSet>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub blocks: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<Limits>,
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Problem {
    pub agenda: Arc<Agenda>,
    /// `None` when the document has no rows.
    pub profile: Option<Profile>,
    pub blocks: BTreeMap<String, Vec<usize>>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Builds a document from a profile and named blocks.
    pub fn from_profile(p: &Profile, blocks: BTreeMap<String, Vec<usize>>) -> Self {
        let agenda = p.agenda();
        ProblemDocument {
            agenda: agenda.issues().iter().map(|f| f.to_string()).collect(),
            constraint: (!agenda.constraint().is_true_constant()).then(|| agenda.constraint().to_string()),
            profile: p.members().to_vec(),
            blocks,
            limits: (*agenda.limits() != Limits::default()).then(|| *agenda.limits()),
        }
    }

    /// Parses every formula and checks every row and block.
    pub fn load(&self) -> Result<Problem> {
        let issues = self.agenda.iter().map(|s| parse_formula(s)).collect::<Result<Vec<_>, _>>()?;
        let constraint = parse_formula(self.constraint.as_deref().unwrap_or("true"))?;
        let agenda = Arc::new(Agenda::with_limits(issues, constraint, self.limits.unwrap_or_default())?);
        let profile = if self.profile.is_empty() {
            None
        } else {
            Some(Profile::new(agenda.clone(), self.profile.clone())?)
        };
        let mut blocks = BTreeMap::new();
        for (name, b) in &self.blocks {
            let normalized = normalize_block(b, agenda.len())
                .map_err(|e| Error::InvalidBlock(format!("block `{name}`: {e}")))?;
            blocks.insert(name.clone(), normalized);
        }
        Ok(Problem { agenda, profile, blocks })
    }
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        ProblemDocument::from_json(text)?.load()
    }

    pub fn profile(&self) -> Result<&Profile> {
        self.profile.as_ref().ok_or(Error::EmptyInput("the document has no profile rows"))
    }

    pub fn block(&self, name: &str) -> Result<&[usize]> {
        self.blocks
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidBlock(format!("no block named `{name}`")))
    }
}
