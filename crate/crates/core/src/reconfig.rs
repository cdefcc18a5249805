//! Selecting components to reconfigure and splitting them in two.
//!
//! A component is selected either because it has the highest CBOM or
//! because its CBOM exceeds a domain-specific threshold `P`. The split
//! minimizes cross-coupling: the total weight of class-to-class call edges
//! whose endpoints land in different parts. Components of up to
//! [`EXACT_LIMIT`] classes are searched exhaustively; larger ones use greedy
//! move/swap refinement, which is not guaranteed optimal once a minimum part
//! size is imposed.
//!
//! Ties between equal cuts go to the plan whose first part, as a sorted list
//! of class ids, is lexicographically smallest. The first part is always the
//! one holding the smallest class id.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facts_io::{check_version, to_pretty_json, FactsError, SCHEMA_VERSION};
use crate::metrics::{class_wmc, MetricsReport};
use crate::model::{validate_facts, CodeFacts, ComponentRecord, ValidationReport};

/// Largest class count searched exhaustively (2^14 bipartitions).
pub const EXACT_LIMIT: usize = 15;

#[derive(Debug, Error)]
pub enum ReconfigError {
    #[error("report has no components")]
    EmptyReport,
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("component `{component}` has {classes} classes; a {parts}-way split with parts of at least {min_part_size} needs {needed}")]
    NotPartitionable {
        component: String,
        classes: usize,
        parts: usize,
        min_part_size: usize,
        needed: usize,
    },
    #[error("only 2-way splits are supported (asked for {0})")]
    UnsupportedParts(usize),
    #[error("stale plan: {0}")]
    StalePlan(String),
    #[error("part name `{0}` already names a component")]
    PartNameTaken(String),
    #[error("invalid facts: {0}")]
    InvalidFacts(ValidationReport),
    #[error(transparent)]
    PlanFile(#[from] FactsError),
}

impl ReconfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ReconfigError::EmptyReport => "empty_report",
            ReconfigError::UnknownComponent(_) => "unknown_component",
            ReconfigError::NotPartitionable { .. } => "not_partitionable",
            ReconfigError::UnsupportedParts(_) => "unsupported_parts",
            ReconfigError::StalePlan(_) => "stale_plan",
            ReconfigError::PartNameTaken(_) => "part_name_taken",
            ReconfigError::InvalidFacts(_) => "invalid_facts",
            ReconfigError::PlanFile(e) => e.code(),
        }
    }
}

/// Rule used to pick reconfigurable components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconfigPolicy {
    /// The single component with the highest CBOM.
    MaxCbom,
    /// Every component whose CBOM is strictly greater than `p`.
    Threshold { p: u64 },
}

/// Component with maximal CBOM; ties go to the smallest id.
pub fn select_max(report: &MetricsReport) -> Result<String, ReconfigError> {
    report
        .components
        .iter()
        .min_by(|a, b| {
            b.cbom
                .cmp(&a.cbom)
                .then_with(|| a.component.cmp(&b.component))
        })
        .map(|c| c.component.clone())
        .ok_or(ReconfigError::EmptyReport)
}

/// Components with CBOM strictly above `p`, sorted by id.
pub fn select_threshold(report: &MetricsReport, p: u64) -> Vec<String> {
    let mut selected: Vec<String> = report
        .components
        .iter()
        .filter(|c| c.cbom > p)
        .map(|c| c.component.clone())
        .collect();
    selected.sort();
    selected
}

pub fn select(
    report: &MetricsReport,
    policy: ReconfigPolicy,
) -> Result<Vec<String>, ReconfigError> {
    match policy {
        ReconfigPolicy::MaxCbom => Ok(vec![select_max(report)?]),
        ReconfigPolicy::Threshold { p } => Ok(select_threshold(report, p)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    #[default]
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanPart {
    pub name: String,
    pub classes: Vec<String>,
    /// CBOM this part would have as a component of its own.
    pub predicted_cbom: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub component: String,
    pub parts: Vec<PlanPart>,
    pub cross_coupling: u64,
    pub method: SearchMethod,
}

impl PartitionPlan {
    pub fn part_of(&self, class: &str) -> Option<&PlanPart> {
        self.parts
            .iter()
            .find(|p| p.classes.iter().any(|c| c == class))
    }
}

/// How the search is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Exact up to [`EXACT_LIMIT`] classes, heuristic above.
    #[default]
    Auto,
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionOptions {
    pub parts: usize,
    pub min_part_size: usize,
    pub mode: SearchMode,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            parts: 2,
            min_part_size: 1,
            mode: SearchMode::Auto,
        }
    }
}

/// Undirected coupling graph over a component's classes, indexed in id
/// order. Self-calls carry no coupling and are dropped.
#[derive(Debug, Clone)]
pub struct CouplingGraph {
    pub classes: Vec<String>,
    weights: Vec<Vec<u64>>,
}

impl CouplingGraph {
    pub fn of_component(facts: &CodeFacts, component: &str) -> Result<Self, ReconfigError> {
        if facts.component(component).is_none() {
            return Err(ReconfigError::UnknownComponent(component.to_string()));
        }
        let mut classes: Vec<String> = facts
            .classes
            .iter()
            .filter(|c| c.component == component)
            .map(|c| c.id.clone())
            .collect();
        classes.sort();
        let index: HashMap<&str, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let n = classes.len();
        let mut weights = vec![vec![0u64; n]; n];
        for edge in &facts.calls {
            if let (Some(&a), Some(&b)) = (
                index.get(edge.caller.as_str()),
                index.get(edge.callee.as_str()),
            ) {
                if a != b {
                    weights[a][b] += edge.count;
                    weights[b][a] += edge.count;
                }
            }
        }
        Ok(Self { classes, weights })
    }

    pub fn from_weights(classes: Vec<String>, weights: Vec<Vec<u64>>) -> Self {
        Self { classes, weights }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn weight(&self, a: usize, b: usize) -> u64 {
        self.weights[a][b]
    }

    /// Cut weight of a side assignment (`true` = second part).
    pub fn cut(&self, side: &[bool]) -> u64 {
        let n = self.len();
        let mut total = 0;
        for a in 0..n {
            for b in (a + 1)..n {
                if side[a] != side[b] {
                    total += self.weights[a][b];
                }
            }
        }
        total
    }
}

/// A bipartition as a side vector plus its cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    /// `false` for the first part, `true` for the second. Index 0 is always
    /// in the first part.
    pub side: Vec<bool>,
    pub cut: u64,
}

impl Bipartition {
    fn first_part(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&i| !self.side[i]).collect()
    }

    fn canonical(mut side: Vec<bool>, cut: u64) -> Self {
        if side.first() == Some(&true) {
            side.iter_mut().for_each(|s| *s = !*s);
        }
        Self { side, cut }
    }

    fn better_than(&self, other: &Self) -> bool {
        self.cut < other.cut || (self.cut == other.cut && self.first_part() < other.first_part())
    }
}

fn sizes_ok(side: &[bool], min_part_size: usize) -> bool {
    let second = side.iter().filter(|s| **s).count();
    let first = side.len() - second;
    first >= min_part_size && second >= min_part_size
}

/// Exhaustive minimum-cut bipartition with the documented tie-break.
pub fn exact_bipartition(graph: &CouplingGraph, min_part_size: usize) -> Option<Bipartition> {
    let n = graph.len();
    if !(2..=63).contains(&n) {
        return None;
    }
    let mut best: Option<Bipartition> = None;
    for mask in 1u64..(1u64 << (n - 1)) {
        let side: Vec<bool> = (0..n)
            .map(|i| i > 0 && (mask >> (i - 1)) & 1 == 1)
            .collect();
        if !sizes_ok(&side, min_part_size) {
            continue;
        }
        let candidate = Bipartition {
            cut: graph.cut(&side),
            side,
        };
        if best.as_ref().is_none_or(|b| candidate.better_than(b)) {
            best = Some(candidate);
        }
    }
    best
}

/// Greedy refinement from a size-balanced seed and from a global minimum
/// cut seed. Each pass applies the single move or pairwise swap that cuts
/// the most weight while respecting `min_part_size`, until none helps.
pub fn heuristic_bipartition(graph: &CouplingGraph, min_part_size: usize) -> Option<Bipartition> {
    let n = graph.len();
    if n < 2 || n < 2 * min_part_size.max(1) {
        return None;
    }
    let mut seeds = Vec::new();
    let half = n.div_ceil(2);
    seeds.push((0..n).map(|i| i >= half).collect::<Vec<bool>>());
    let min_cut_side = stoer_wagner(graph);
    if sizes_ok(&min_cut_side, min_part_size) {
        seeds.push(min_cut_side);
    }

    let mut best: Option<Bipartition> = None;
    for seed in seeds {
        let side = refine(graph, seed, min_part_size);
        let candidate = Bipartition::canonical(side.clone(), graph.cut(&side));
        if best.as_ref().is_none_or(|b| candidate.better_than(b)) {
            best = Some(candidate);
        }
    }
    best
}

fn refine(graph: &CouplingGraph, mut side: Vec<bool>, min_part_size: usize) -> Vec<bool> {
    let n = graph.len();
    loop {
        // external - internal weight per vertex
        let gain: Vec<i128> = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&u| u != v)
                    .map(|u| {
                        let w = graph.weight(v, u) as i128;
                        if side[u] != side[v] {
                            w
                        } else {
                            -w
                        }
                    })
                    .sum()
            })
            .collect();
        let second = side.iter().filter(|s| **s).count();
        let first = n - second;

        let mut best: Option<(i128, Vec<usize>)> = None;
        let mut consider = |g: i128, moved: Vec<usize>| {
            if g > 0 && best.as_ref().is_none_or(|(bg, _)| g > *bg) {
                best = Some((g, moved));
            }
        };
        for v in 0..n {
            let from = if side[v] { second } else { first };
            if from > min_part_size.max(1) {
                consider(gain[v], vec![v]);
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if side[a] != side[b] {
                    let g = gain[a] + gain[b] - 2 * graph.weight(a, b) as i128;
                    consider(g, vec![a, b]);
                }
            }
        }
        match best {
            Some((_, moved)) => {
                for v in moved {
                    side[v] = !side[v];
                }
            }
            None => return side,
        }
    }
}

/// Global minimum cut (Stoer–Wagner). Returns a side vector with both
/// parts non-empty; needs at least two vertices.
pub fn stoer_wagner(graph: &CouplingGraph) -> Vec<bool> {
    let n = graph.len();
    let mut w: Vec<Vec<u128>> = (0..n)
        .map(|a| (0..n).map(|b| graph.weight(a, b) as u128).collect())
        .collect();
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u128, Vec<usize>)> = None;

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![0u128; n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&v| !added[v])
                .max_by(|&&a, &&b| key[a].cmp(&key[b]).then_with(|| b.cmp(&a)))
                .expect("unvisited vertex");
            added[next] = true;
            order.push(next);
            for &v in &active {
                if !added[v] {
                    key[v] += w[next][v];
                }
            }
        }
        let last = order[order.len() - 1];
        let prev = order[order.len() - 2];
        let cut = key[last];
        if best.as_ref().is_none_or(|(c, _)| cut < *c) {
            best = Some((cut, groups[last].clone()));
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &v in &active {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }

    let mut side = vec![false; n];
    if let Some((_, group)) = best {
        for v in group {
            side[v] = true;
        }
    }
    side
}

fn part_cbom(facts: &CodeFacts, classes: &BTreeSet<&str>) -> u64 {
    facts
        .invocations
        .iter()
        .filter(|rec| classes.contains(rec.callee_class.as_str()))
        .map(|rec| rec.count)
        .sum()
}

/// Propose a two-way split of `component` minimizing cross-coupling.
pub fn propose_partition(
    facts: &CodeFacts,
    component: &str,
    options: &PartitionOptions,
) -> Result<PartitionPlan, ReconfigError> {
    if options.parts != 2 {
        return Err(ReconfigError::UnsupportedParts(options.parts));
    }
    let graph = CouplingGraph::of_component(facts, component)?;
    let min_part_size = options.min_part_size.max(1);
    let needed = options.parts * min_part_size;
    if graph.len() < needed {
        return Err(ReconfigError::NotPartitionable {
            component: component.to_string(),
            classes: graph.len(),
            parts: options.parts,
            min_part_size,
            needed,
        });
    }
    let method = match options.mode {
        SearchMode::Exact => SearchMethod::Exact,
        SearchMode::Heuristic => SearchMethod::Heuristic,
        SearchMode::Auto if graph.len() <= EXACT_LIMIT => SearchMethod::Exact,
        SearchMode::Auto => SearchMethod::Heuristic,
    };
    let split = match method {
        SearchMethod::Exact => exact_bipartition(&graph, min_part_size),
        SearchMethod::Heuristic => heuristic_bipartition(&graph, min_part_size),
    }
    .ok_or_else(|| ReconfigError::NotPartitionable {
        component: component.to_string(),
        classes: graph.len(),
        parts: options.parts,
        min_part_size,
        needed,
    })?;

    let mut parts = Vec::new();
    for (i, which) in [false, true].into_iter().enumerate() {
        let classes: Vec<String> = graph
            .classes
            .iter()
            .zip(&split.side)
            .filter(|(_, s)| **s == which)
            .map(|(c, _)| c.clone())
            .collect();
        let members: BTreeSet<&str> = classes.iter().map(String::as_str).collect();
        parts.push(PlanPart {
            name: format!("{component}_{}", i + 1),
            predicted_cbom: part_cbom(facts, &members),
            classes,
        });
    }
    Ok(PartitionPlan {
        component: component.to_string(),
        parts,
        cross_coupling: split.cut,
        method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Improved,
    NotImproved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartEvaluation {
    pub name: String,
    pub classes: Vec<String>,
    pub cbom: u64,
    pub wcm: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionEvaluation {
    pub component: String,
    pub original_cbom: u64,
    pub original_wcm: u64,
    pub parts: Vec<PartEvaluation>,
    pub cross_coupling: u64,
    pub verdict: Verdict,
}

fn check_plan(facts: &CodeFacts, plan: &PartitionPlan) -> Result<(), ReconfigError> {
    if facts.component(&plan.component).is_none() {
        return Err(ReconfigError::StalePlan(format!(
            "component `{}` is not in the facts",
            plan.component
        )));
    }
    let expected: BTreeSet<&str> = facts
        .classes
        .iter()
        .filter(|c| c.component == plan.component)
        .map(|c| c.id.as_str())
        .collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for part in &plan.parts {
        if part.classes.is_empty() {
            return Err(ReconfigError::StalePlan(format!(
                "part `{}` is empty",
                part.name
            )));
        }
        for class in &part.classes {
            if facts.class(class).is_none() {
                return Err(ReconfigError::StalePlan(format!(
                    "class `{class}` is not in the facts"
                )));
            }
            if !expected.contains(class.as_str()) {
                return Err(ReconfigError::StalePlan(format!(
                    "class `{class}` is not in component `{}`",
                    plan.component
                )));
            }
            if !seen.insert(class.as_str()) {
                return Err(ReconfigError::StalePlan(format!(
                    "class `{class}` appears in more than one part"
                )));
            }
        }
    }
    if let Some(missing) = expected.difference(&seen).next() {
        return Err(ReconfigError::StalePlan(format!(
            "class `{missing}` is not assigned to any part"
        )));
    }
    Ok(())
}

/// Metrics of each part as if it were a component. The split counts as an
/// improvement when every part's CBOM is below the original's.
pub fn evaluate_partition(
    facts: &CodeFacts,
    plan: &PartitionPlan,
) -> Result<PartitionEvaluation, ReconfigError> {
    check_plan(facts, plan)?;
    let mut parts = Vec::new();
    let mut original_cbom = 0;
    let mut original_wcm = 0;
    for part in &plan.parts {
        let members: BTreeSet<&str> = part.classes.iter().map(String::as_str).collect();
        let cbom = part_cbom(facts, &members);
        let wcm = facts
            .classes
            .iter()
            .filter(|c| members.contains(c.id.as_str()))
            .map(class_wmc)
            .sum();
        original_cbom += cbom;
        original_wcm += wcm;
        parts.push(PartEvaluation {
            name: part.name.clone(),
            classes: part.classes.clone(),
            cbom,
            wcm,
        });
    }

    let part_index: HashMap<&str, usize> = plan
        .parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.classes.iter().map(move |c| (c.as_str(), i)))
        .collect();
    let cross_coupling = facts
        .calls
        .iter()
        .filter_map(|e| {
            let a = part_index.get(e.caller.as_str())?;
            let b = part_index.get(e.callee.as_str())?;
            (a != b).then_some(e.count)
        })
        .sum();

    let max_part = parts.iter().map(|p| p.cbom).max().unwrap_or(0);
    let verdict = if max_part < original_cbom {
        Verdict::Improved
    } else {
        Verdict::NotImproved
    };
    Ok(PartitionEvaluation {
        component: plan.component.clone(),
        original_cbom,
        original_wcm,
        parts,
        cross_coupling,
        verdict,
    })
}

/// Replace the planned component by its parts. Only class membership
/// changes; inheritance, invocations and calls are untouched.
pub fn apply_partition(
    facts: &CodeFacts,
    plan: &PartitionPlan,
) -> Result<CodeFacts, ReconfigError> {
    check_plan(facts, plan)?;
    let original = facts
        .component(&plan.component)
        .cloned()
        .expect("checked by check_plan");
    for part in &plan.parts {
        if part.name != plan.component && facts.component(&part.name).is_some() {
            return Err(ReconfigError::PartNameTaken(part.name.clone()));
        }
    }
    let mut next = facts.clone();
    next.components.retain(|c| c.id != plan.component);
    let mut assignment: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, part) in plan.parts.iter().enumerate() {
        let name = if original.name == original.id {
            part.name.clone()
        } else {
            format!("{}_{}", original.name, i + 1)
        };
        next.components.push(ComponentRecord {
            id: part.name.clone(),
            name,
            category: original.category,
        });
        for class in &part.classes {
            assignment.insert(class.as_str(), part.name.as_str());
        }
    }
    for class in &mut next.classes {
        if let Some(part) = assignment.get(class.id.as_str()) {
            class.component = part.to_string();
        }
    }
    next.normalize();
    let report = validate_facts(&next);
    if !report.is_empty() {
        return Err(ReconfigError::InvalidFacts(report));
    }
    Ok(next)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDocument {
    schema_version: String,
    plans: Vec<PartitionPlan>,
}

pub fn save_plans(plans: &[PartitionPlan]) -> Vec<u8> {
    to_pretty_json(&PlanDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        plans: plans.to_vec(),
    })
}

pub fn load_plans(bytes: &[u8]) -> Result<Vec<PartitionPlan>, ReconfigError> {
    check_version(bytes)?;
    let doc: PlanDocument = serde_json::from_slice(bytes).map_err(|e| FactsError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(doc.plans)
}
