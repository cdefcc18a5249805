//! Reusability metrics over [`CodeFacts`].
//!
//! * method complexity `C[M] = decisions + 1`
//! * `WMC` of a class: sum of its method complexities
//! * `WCM` of a component: sum of WMC over its classes
//! * `DIT`: edges from a class up to its hierarchy root; max over a component
//! * `NOC`: immediate subclasses of a class
//! * `CBOM`: invocations whose callee method belongs to the component
//!
//! The graph form `edges - nodes + 1` is kept as a diagnostic next to the
//! canonical complexity and never replaces it.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    classes_of, validate_facts, Cfg, ClassRecord, CodeFacts, MethodRecord, ModelError,
    ValidationReport,
};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid facts: {0}")]
    InvalidFacts(ValidationReport),
}

impl MetricsError {
    pub fn code(&self) -> &'static str {
        match self {
            MetricsError::Model(e) => e.code(),
            MetricsError::InvalidFacts(_) => "invalid_facts",
        }
    }
}

pub fn method_complexity(method: &MethodRecord) -> u64 {
    method.decision_count + 1
}

/// `|E| - |V| + 1`. Zero on straight-line code.
pub fn cfg_complexity(cfg: &Cfg) -> i64 {
    cfg.edge_count() as i64 - cfg.node_count() as i64 + 1
}

pub fn class_wmc(class: &ClassRecord) -> u64 {
    class.methods.iter().map(method_complexity).sum()
}

pub fn component_wcm(facts: &CodeFacts, component: &str) -> Result<u64, ModelError> {
    Ok(classes_of(facts, component)?
        .into_iter()
        .map(class_wmc)
        .sum())
}

/// Depth of `class` in the inheritance tree. Assumes acyclic inheritance;
/// a cycle is cut when a class repeats rather than looping forever.
pub fn class_dit(facts: &CodeFacts, class: &str) -> Result<u64, ModelError> {
    if facts.class(class).is_none() {
        return Err(ModelError::UnknownClass(class.to_string()));
    }
    let parents: HashMap<&str, &str> = facts
        .inheritance
        .iter()
        .map(|e| (e.child.as_str(), e.parent.as_str()))
        .collect();
    Ok(depth(&parents, class))
}

fn depth(parents: &HashMap<&str, &str>, class: &str) -> u64 {
    let mut depth = 0;
    let mut cursor = class;
    while let Some(&parent) = parents.get(cursor) {
        depth += 1;
        cursor = parent;
        if depth as usize > parents.len() {
            break;
        }
    }
    depth
}

pub fn component_dit(facts: &CodeFacts, component: &str) -> Result<u64, ModelError> {
    let classes = classes_of(facts, component)?;
    let mut max = 0;
    for class in classes {
        max = max.max(class_dit(facts, &class.id)?);
    }
    Ok(max)
}

pub fn class_noc(facts: &CodeFacts, class: &str) -> Result<u64, ModelError> {
    if facts.class(class).is_none() {
        return Err(ModelError::UnknownClass(class.to_string()));
    }
    Ok(facts
        .inheritance
        .iter()
        .filter(|e| e.parent == class)
        .count() as u64)
}

/// Invocation count attributed to `component` on the callee side.
pub fn component_cbom(facts: &CodeFacts, component: &str) -> Result<u64, ModelError> {
    if facts.component(component).is_none() {
        return Err(ModelError::UnknownComponent(component.to_string()));
    }
    let owner = facts.class_components();
    Ok(facts
        .invocations
        .iter()
        .filter(|rec| owner.get(rec.callee_class.as_str()) == Some(&component))
        .map(|rec| rec.count)
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodMetrics {
    pub class: String,
    pub method: String,
    pub complexity: u64,
    /// `E - V + 1` when the method carries a CFG.
    pub cfg_complexity: Option<i64>,
    /// Set when `cfg_complexity` is present and differs from `complexity`.
    pub formula_mismatch: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub component: String,
    pub wmc: u64,
    pub dit: u64,
    pub noc: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentMetrics {
    pub component: String,
    pub wcm: u64,
    pub dit: u64,
    pub noc_by_class: BTreeMap<String, u64>,
    pub cbom: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub methods: Vec<MethodMetrics>,
    pub classes: Vec<ClassMetrics>,
    pub components: Vec<ComponentMetrics>,
}

impl MetricsReport {
    pub fn component(&self, id: &str) -> Option<&ComponentMetrics> {
        self.components.iter().find(|c| c.component == id)
    }

    pub fn class(&self, id: &str) -> Option<&ClassMetrics> {
        self.classes.iter().find(|c| c.class == id)
    }

    pub fn method(&self, class: &str, method: &str) -> Option<&MethodMetrics> {
        self.methods
            .iter()
            .find(|m| m.class == class && m.method == method)
    }

    pub fn is_empty(&self) -> bool {
        self.methods.is_empty() && self.classes.is_empty() && self.components.is_empty()
    }
}

/// Every metric for every method, class and component, sorted by id.
pub fn full_report(facts: &CodeFacts) -> Result<MetricsReport, MetricsError> {
    let validation = validate_facts(facts);
    if !validation.is_empty() {
        return Err(MetricsError::InvalidFacts(validation));
    }
    let facts = facts.clone().normalized();

    let parents: HashMap<&str, &str> = facts
        .inheritance
        .iter()
        .map(|e| (e.child.as_str(), e.parent.as_str()))
        .collect();
    let mut children: HashMap<&str, u64> = HashMap::new();
    for edge in &facts.inheritance {
        *children.entry(edge.parent.as_str()).or_default() += 1;
    }
    let mut cbom: HashMap<&str, u64> = HashMap::new();
    let owner = facts.class_components();
    for rec in &facts.invocations {
        if let Some(component) = owner.get(rec.callee_class.as_str()) {
            *cbom.entry(component).or_default() += rec.count;
        }
    }

    let mut report = MetricsReport::default();
    for class in &facts.classes {
        for method in &class.methods {
            let complexity = method_complexity(method);
            let graph = method.cfg.as_ref().map(cfg_complexity);
            report.methods.push(MethodMetrics {
                class: class.id.clone(),
                method: method.name.clone(),
                complexity,
                cfg_complexity: graph,
                formula_mismatch: graph.is_some_and(|g| g != complexity as i64),
            });
        }
        report.classes.push(ClassMetrics {
            class: class.id.clone(),
            component: class.component.clone(),
            wmc: class_wmc(class),
            dit: depth(&parents, &class.id),
            noc: children.get(class.id.as_str()).copied().unwrap_or(0),
        });
    }

    for component in &facts.components {
        let members = report
            .classes
            .iter()
            .filter(|c| c.component == component.id);
        let mut wcm = 0;
        let mut dit = 0;
        let mut noc_by_class = BTreeMap::new();
        for class in members {
            wcm += class.wmc;
            dit = dit.max(class.dit);
            noc_by_class.insert(class.class.clone(), class.noc);
        }
        report.components.push(ComponentMetrics {
            component: component.id.clone(),
            wcm,
            dit,
            noc_by_class,
            cbom: cbom.get(component.id.as_str()).copied().unwrap_or(0),
        });
    }
    Ok(report)
}
