//! Fact file format v1: load, save and merge.
//!
//! A fact file is a single JSON object with the fields `schema_version`,
//! `components`, `classes`, `inheritance`, `invocations` and `calls`.
//! Output is canonical: every list is sorted, so saving the same facts
//! twice yields identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    validate_facts, CallEdge, ClassRecord, CodeFacts, ComponentRecord, InheritanceEdge,
    InvocationRecord, ValidationReport,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FactsError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema version `{0}` (expected \"{SCHEMA_VERSION}\")")]
    UnsupportedVersion(String),
    #[error("invalid facts: {0}")]
    InvalidFacts(ValidationReport),
    #[error("merge conflict: {0}")]
    MergeConflict(String),
}

impl FactsError {
    pub fn code(&self) -> &'static str {
        match self {
            FactsError::Parse { .. } => "parse_error",
            FactsError::UnsupportedVersion(_) => "unsupported_version",
            FactsError::InvalidFacts(_) => "invalid_facts",
            FactsError::MergeConflict(_) => "merge_conflict",
        }
    }

    fn from_json(err: serde_json::Error) -> Self {
        FactsError::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactsDocument {
    schema_version: String,
    #[serde(default)]
    components: Vec<ComponentRecord>,
    #[serde(default)]
    classes: Vec<ClassRecord>,
    #[serde(default)]
    inheritance: Vec<InheritanceEdge>,
    #[serde(default)]
    invocations: Vec<InvocationRecord>,
    #[serde(default)]
    calls: Vec<CallEdge>,
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<serde_json::Value>,
}

/// Check that `bytes` is well-formed JSON declaring a supported version.
pub(crate) fn check_version(bytes: &[u8]) -> Result<(), FactsError> {
    let probe: VersionProbe = serde_json::from_slice(bytes).map_err(FactsError::from_json)?;
    match probe.schema_version {
        Some(serde_json::Value::String(v)) if v == SCHEMA_VERSION => Ok(()),
        Some(serde_json::Value::String(v)) => Err(FactsError::UnsupportedVersion(v)),
        Some(other) => Err(FactsError::UnsupportedVersion(other.to_string())),
        None => Err(FactsError::Parse {
            line: 1,
            column: 1,
            message: "missing field `schema_version`".into(),
        }),
    }
}

/// Parse a fact document. Duplicate invocation and call records are merged
/// by summation before validation; any remaining violation is an error.
pub fn load_facts(bytes: &[u8]) -> Result<CodeFacts, FactsError> {
    check_version(bytes)?;
    let doc: FactsDocument = serde_json::from_slice(bytes).map_err(FactsError::from_json)?;
    let facts = CodeFacts {
        components: doc.components,
        classes: doc.classes,
        inheritance: doc.inheritance,
        invocations: doc.invocations,
        calls: doc.calls,
    }
    .normalized();
    let report = validate_facts(&facts);
    if !report.is_empty() {
        return Err(FactsError::InvalidFacts(report));
    }
    Ok(facts)
}

/// Serialize `facts` in canonical form.
pub fn save_facts(facts: &CodeFacts) -> Result<Vec<u8>, FactsError> {
    let report = validate_facts(facts);
    if !report.is_empty() {
        return Err(FactsError::InvalidFacts(report));
    }
    let facts = facts.clone().normalized();
    let doc = FactsDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        components: facts.components,
        classes: facts.classes,
        inheritance: facts.inheritance,
        invocations: facts.invocations,
        calls: facts.calls,
    };
    Ok(to_pretty_json(&doc))
}

pub(crate) fn to_pretty_json<T: Serialize>(value: &T) -> Vec<u8> {
    // Serializing plain data structs into a Vec cannot fail.
    let mut out = serde_json::to_vec_pretty(value).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}

/// Union of several fact sets. Identical duplicates collapse, invocation and
/// call counts for the same endpoints add up, and differing definitions of
/// the same component, class or child edge are a conflict.
pub fn merge_facts(parts: &[CodeFacts]) -> Result<CodeFacts, FactsError> {
    let mut components: BTreeMap<String, ComponentRecord> = BTreeMap::new();
    let mut classes: BTreeMap<String, ClassRecord> = BTreeMap::new();
    let mut parents: BTreeMap<String, String> = BTreeMap::new();
    let mut merged = CodeFacts::default();

    for part in parts {
        let part = part.clone().normalized();
        for component in part.components {
            match components.get(&component.id) {
                Some(existing) if *existing != component => {
                    return Err(FactsError::MergeConflict(format!(
                        "component `{}` defined differently",
                        component.id
                    )))
                }
                Some(_) => {}
                None => {
                    components.insert(component.id.clone(), component);
                }
            }
        }
        for class in part.classes {
            match classes.get(&class.id) {
                Some(existing) if *existing != class => {
                    return Err(FactsError::MergeConflict(format!(
                        "class `{}` defined differently",
                        class.id
                    )))
                }
                Some(_) => {}
                None => {
                    classes.insert(class.id.clone(), class);
                }
            }
        }
        for edge in part.inheritance {
            match parents.get(&edge.child) {
                Some(parent) if *parent != edge.parent => {
                    return Err(FactsError::MergeConflict(format!(
                        "class `{}` extends both `{}` and `{}`",
                        edge.child, parent, edge.parent
                    )))
                }
                Some(_) => {}
                None => {
                    parents.insert(edge.child, edge.parent);
                }
            }
        }
        merged.invocations.extend(part.invocations);
        merged.calls.extend(part.calls);
    }

    merged.components = components.into_values().collect();
    merged.classes = classes.into_values().collect();
    merged.inheritance = parents
        .into_iter()
        .map(|(child, parent)| InheritanceEdge { child, parent })
        .collect();
    merged.normalize();

    let report = validate_facts(&merged);
    if !report.is_empty() {
        return Err(FactsError::InvalidFacts(report));
    }
    Ok(merged)
}
