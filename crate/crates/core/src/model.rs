//! Language-agnostic code model consumed by every analysis.
//!
//! A [`CodeFacts`] value describes the system under analysis: components,
//! the classes they own, single-inheritance edges, per-method invocation
//! counts (callee side) and class-to-class call edges. Methods are keyed by
//! `(class_id, method_name)`, so the same method name may appear in several
//! classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Three-way reuse category of a component. Metadata only.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    GeneralPurpose,
    DomainSpecific,
    ProductSpecific,
    #[default]
    Unspecified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub category: Category,
}

impl ComponentRecord {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Self {
            name: id.clone(),
            id,
            category: Category::Unspecified,
        }
    }
}

/// Control-flow graph of one method body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfg {
    pub nodes: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub entry: u32,
}

impl Cfg {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_degree(&self, node: u32) -> usize {
        self.edges.iter().filter(|(from, _)| *from == node).count()
    }

    fn normalize(&mut self) {
        self.nodes.sort_unstable();
        self.edges.sort_unstable();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodRecord {
    pub name: String,
    /// Count of decision elements in the body.
    pub decision_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfg: Option<Cfg>,
}

impl MethodRecord {
    pub fn new(name: impl Into<String>, decision_count: u64) -> Self {
        Self {
            name: name.into(),
            decision_count,
            cfg: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub id: String,
    pub name: String,
    pub component: String,
    #[serde(default)]
    pub methods: Vec<MethodRecord>,
}

impl ClassRecord {
    pub fn new(id: impl Into<String>, component: impl Into<String>) -> Self {
        let id = id.into();
        Self {
            name: id.clone(),
            id,
            component: component.into(),
            methods: Vec::new(),
        }
    }

    pub fn with_method(mut self, method: MethodRecord) -> Self {
        self.methods.push(method);
        self
    }

    pub fn method(&self, name: &str) -> Option<&MethodRecord> {
        self.methods.iter().find(|m| m.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InheritanceEdge {
    pub child: String,
    pub parent: String,
}

/// Number of times one method was invoked. Attributed to the callee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvocationRecord {
    pub callee_class: String,
    pub callee_method: String,
    pub count: u64,
}

/// Weighted class-to-class call relation, used as the coupling graph when
/// splitting a component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEdge {
    pub caller: String,
    pub callee: String,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFacts {
    pub components: Vec<ComponentRecord>,
    pub classes: Vec<ClassRecord>,
    pub inheritance: Vec<InheritanceEdge>,
    pub invocations: Vec<InvocationRecord>,
    pub calls: Vec<CallEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::UnknownComponent(_) => "unknown_component",
            ModelError::UnknownClass(_) => "unknown_class",
        }
    }
}

impl CodeFacts {
    pub fn component(&self, id: &str) -> Option<&ComponentRecord> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn class(&self, id: &str) -> Option<&ClassRecord> {
        self.classes.iter().find(|c| c.id == id)
    }

    pub fn parent_of(&self, class: &str) -> Option<&str> {
        self.inheritance
            .iter()
            .find(|e| e.child == class)
            .map(|e| e.parent.as_str())
    }

    /// Map from class id to owning component id.
    pub fn class_components(&self) -> HashMap<&str, &str> {
        self.classes
            .iter()
            .map(|c| (c.id.as_str(), c.component.as_str()))
            .collect()
    }

    /// Sort every list into canonical order and merge duplicate invocation
    /// and call records by summing their counts.
    pub fn normalize(&mut self) {
        self.components.sort_by(|a, b| a.id.cmp(&b.id));
        self.classes.sort_by(|a, b| a.id.cmp(&b.id));
        for class in &mut self.classes {
            class.methods.sort_by(|a, b| a.name.cmp(&b.name));
            for method in &mut class.methods {
                if let Some(cfg) = method.cfg.as_mut() {
                    cfg.normalize();
                }
            }
        }
        self.inheritance.sort();
        self.inheritance.dedup();

        let mut invocations: BTreeMap<(String, String), u64> = BTreeMap::new();
        for rec in self.invocations.drain(..) {
            *invocations
                .entry((rec.callee_class, rec.callee_method))
                .or_default() += rec.count;
        }
        self.invocations = invocations
            .into_iter()
            .map(|((callee_class, callee_method), count)| InvocationRecord {
                callee_class,
                callee_method,
                count,
            })
            .collect();

        let mut calls: BTreeMap<(String, String), u64> = BTreeMap::new();
        for edge in self.calls.drain(..) {
            *calls.entry((edge.caller, edge.callee)).or_default() += edge.count;
        }
        self.calls = calls
            .into_iter()
            .map(|((caller, callee), count)| CallEdge {
                caller,
                callee,
                count,
            })
            .collect();
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
            && self.classes.is_empty()
            && self.inheritance.is_empty()
            && self.invocations.is_empty()
            && self.calls.is_empty()
    }
}

/// Classes owned by `component`, sorted by name (then id).
pub fn classes_of<'a>(
    facts: &'a CodeFacts,
    component: &str,
) -> Result<Vec<&'a ClassRecord>, ModelError> {
    if facts.component(component).is_none() {
        return Err(ModelError::UnknownComponent(component.to_string()));
    }
    let mut classes: Vec<&ClassRecord> = facts
        .classes
        .iter()
        .filter(|c| c.component == component)
        .collect();
    classes.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.id.cmp(&b.id)));
    Ok(classes)
}

/// Stable violation kinds reported by [`validate_facts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateComponent,
    DuplicateClass,
    DanglingComponent,
    DuplicateMethod,
    DanglingInheritanceClass,
    SelfInheritance,
    MultipleParents,
    InheritanceCycle,
    DanglingCallee,
    DuplicateInvocation,
    DanglingCallClass,
    DuplicateCallEdge,
    CfgMissingEntry,
    CfgDanglingEdge,
    CfgDuplicateEdge,
    CfgDuplicateNode,
    CfgUnreachableNode,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::DuplicateComponent => "duplicate_component",
            ViolationKind::DuplicateClass => "duplicate_class",
            ViolationKind::DanglingComponent => "dangling_component",
            ViolationKind::DuplicateMethod => "duplicate_method",
            ViolationKind::DanglingInheritanceClass => "dangling_inheritance_class",
            ViolationKind::SelfInheritance => "self_inheritance",
            ViolationKind::MultipleParents => "multiple_parents",
            ViolationKind::InheritanceCycle => "inheritance_cycle",
            ViolationKind::DanglingCallee => "dangling_callee",
            ViolationKind::DuplicateInvocation => "duplicate_invocation",
            ViolationKind::DanglingCallClass => "dangling_call_class",
            ViolationKind::DuplicateCallEdge => "duplicate_call_edge",
            ViolationKind::CfgMissingEntry => "cfg_missing_entry",
            ViolationKind::CfgDanglingEdge => "cfg_dangling_edge",
            ViolationKind::CfgDuplicateEdge => "cfg_duplicate_edge",
            ViolationKind::CfgDuplicateNode => "cfg_duplicate_node",
            ViolationKind::CfgUnreachableNode => "cfg_unreachable_node",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Human-readable path to the offending entity, e.g. `class:BaseDAO`.
    pub location: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.location)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    fn push(&mut self, kind: ViolationKind, location: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            location: location.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Check every structural invariant of `facts`. Violations are returned as
/// data; an empty report means the facts are well formed.
pub fn validate_facts(facts: &CodeFacts) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut component_ids = BTreeSet::new();
    for component in &facts.components {
        if !component_ids.insert(component.id.as_str()) {
            report.push(
                ViolationKind::DuplicateComponent,
                format!("component:{}", component.id),
            );
        }
    }

    let mut class_ids = BTreeSet::new();
    let mut methods: BTreeSet<(&str, &str)> = BTreeSet::new();
    for class in &facts.classes {
        if !class_ids.insert(class.id.as_str()) {
            report.push(ViolationKind::DuplicateClass, format!("class:{}", class.id));
        }
        if !component_ids.contains(class.component.as_str()) {
            report.push(
                ViolationKind::DanglingComponent,
                format!("class:{} -> component:{}", class.id, class.component),
            );
        }
        for method in &class.methods {
            if !methods.insert((class.id.as_str(), method.name.as_str())) {
                report.push(
                    ViolationKind::DuplicateMethod,
                    format!("method:{}.{}", class.id, method.name),
                );
            }
            if let Some(cfg) = &method.cfg {
                validate_cfg(
                    cfg,
                    &format!("cfg:{}.{}", class.id, method.name),
                    &mut report,
                );
            }
        }
    }

    let mut parents: BTreeMap<&str, &str> = BTreeMap::new();
    for edge in &facts.inheritance {
        let location = format!("inheritance:{}->{}", edge.child, edge.parent);
        let mut dangling = false;
        for end in [&edge.child, &edge.parent] {
            if !class_ids.contains(end.as_str()) {
                dangling = true;
            }
        }
        if dangling {
            report.push(ViolationKind::DanglingInheritanceClass, location);
            continue;
        }
        if edge.child == edge.parent {
            report.push(ViolationKind::SelfInheritance, location);
            continue;
        }
        if parents.contains_key(edge.child.as_str()) {
            report.push(ViolationKind::MultipleParents, location);
            continue;
        }
        parents.insert(edge.child.as_str(), edge.parent.as_str());
    }
    for cycle in inheritance_cycles(&parents) {
        report.push(
            ViolationKind::InheritanceCycle,
            format!("inheritance:{}", cycle.join("->")),
        );
    }

    let mut callees = BTreeSet::new();
    for rec in &facts.invocations {
        let location = format!("invocation:{}.{}", rec.callee_class, rec.callee_method);
        if !methods.contains(&(rec.callee_class.as_str(), rec.callee_method.as_str())) {
            report.push(ViolationKind::DanglingCallee, location);
        } else if !callees.insert((rec.callee_class.as_str(), rec.callee_method.as_str())) {
            report.push(ViolationKind::DuplicateInvocation, location);
        }
    }

    let mut call_pairs = BTreeSet::new();
    for edge in &facts.calls {
        let location = format!("call:{}->{}", edge.caller, edge.callee);
        if !class_ids.contains(edge.caller.as_str()) || !class_ids.contains(edge.callee.as_str()) {
            report.push(ViolationKind::DanglingCallClass, location);
        } else if !call_pairs.insert((edge.caller.as_str(), edge.callee.as_str())) {
            report.push(ViolationKind::DuplicateCallEdge, location);
        }
    }

    report
}

/// Each cycle in the parent map, reported once with members rotated so the
/// smallest id comes first.
fn inheritance_cycles(parents: &BTreeMap<&str, &str>) -> Vec<Vec<String>> {
    let mut done: BTreeSet<&str> = BTreeSet::new();
    let mut cycles = Vec::new();
    for &start in parents.keys() {
        if done.contains(start) {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut on_path: BTreeSet<&str> = BTreeSet::new();
        let mut cursor = Some(start);
        while let Some(node) = cursor {
            if done.contains(node) {
                break;
            }
            if on_path.contains(node) {
                let begin = path.iter().position(|n| *n == node).unwrap_or(0);
                let mut cycle: Vec<String> = path[begin..].iter().map(|s| s.to_string()).collect();
                let min = cycle
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                cycle.rotate_left(min);
                cycles.push(cycle);
                break;
            }
            on_path.insert(node);
            path.push(node);
            cursor = parents.get(node).copied();
        }
        done.extend(path);
    }
    cycles
}

fn validate_cfg(cfg: &Cfg, location: &str, report: &mut ValidationReport) {
    let mut nodes = BTreeSet::new();
    for node in &cfg.nodes {
        if !nodes.insert(*node) {
            report.push(
                ViolationKind::CfgDuplicateNode,
                format!("{location}:node {node}"),
            );
        }
    }
    if !nodes.contains(&cfg.entry) {
        report.push(ViolationKind::CfgMissingEntry, location.to_string());
    }
    let mut edges = BTreeSet::new();
    let mut successors: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(from, to) in &cfg.edges {
        if !nodes.contains(&from) || !nodes.contains(&to) {
            report.push(
                ViolationKind::CfgDanglingEdge,
                format!("{location}:edge {from}->{to}"),
            );
            continue;
        }
        if !edges.insert((from, to)) {
            report.push(
                ViolationKind::CfgDuplicateEdge,
                format!("{location}:edge {from}->{to}"),
            );
            continue;
        }
        successors.entry(from).or_default().push(to);
    }
    if !nodes.contains(&cfg.entry) {
        return;
    }
    let mut seen = BTreeSet::from([cfg.entry]);
    let mut stack = vec![cfg.entry];
    while let Some(node) = stack.pop() {
        for &next in successors.get(&node).into_iter().flatten() {
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    for node in nodes.difference(&seen) {
        report.push(
            ViolationKind::CfgUnreachableNode,
            format!("{location}:node {node}"),
        );
    }
}
