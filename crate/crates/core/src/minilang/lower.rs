use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ast::{MiniOoAst, Receiver};
use super::cfg::{build_cfg, count_decisions};
use crate::model::{
    CallEdge, ClassRecord, CodeFacts, ComponentRecord, InheritanceEdge, InvocationRecord,
    MethodRecord,
};

/// Class-to-component assignment used when lowering.
#[derive(Debug, Clone, Default)]
pub struct ComponentMap {
    pub classes: BTreeMap<String, String>,
    /// Component for classes missing from `classes`.
    pub default_component: Option<String>,
}

impl ComponentMap {
    pub fn component_for(&self, class: &str) -> Option<&str> {
        self.classes
            .get(class)
            .or(self.default_component.as_ref())
            .map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowerError {
    #[error("class `{class}` (line {line}) has no component mapping")]
    UnmappedClass { class: String, line: usize },
    #[error("class `{class}` declared twice (line {line})")]
    DuplicateClass { class: String, line: usize },
    #[error("method `{class}.{method}` declared twice (line {line})")]
    DuplicateMethod {
        class: String,
        method: String,
        line: usize,
    },
}

impl LowerError {
    pub fn code(&self) -> &'static str {
        match self {
            LowerError::UnmappedClass { .. } => "unmapped_class",
            LowerError::DuplicateClass { .. } => "duplicate_class",
            LowerError::DuplicateMethod { .. } => "duplicate_method",
        }
    }
}

/// A call site that could not be resolved; its record was dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedCallee {
    pub caller_class: String,
    pub caller_method: String,
    pub receiver: String,
    pub method: String,
    pub line: usize,
    pub column: usize,
}

impl UnresolvedCallee {
    pub fn code(&self) -> &'static str {
        "unresolved_callee"
    }
}

impl std::fmt::Display for UnresolvedCallee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: call to undeclared {}.{}() from {}.{}",
            self.line,
            self.column,
            self.receiver,
            self.method,
            self.caller_class,
            self.caller_method
        )
    }
}

#[derive(Debug, Clone)]
pub struct Lowered {
    pub facts: CodeFacts,
    pub warnings: Vec<UnresolvedCallee>,
}

/// Lower a parsed program to facts. Every `extends` clause becomes an
/// inheritance edge and every resolvable call site adds 1 to both the
/// callee's invocation record and the caller-to-callee class call edge.
/// Calls resolve by explicit receiver class only; `self` means the
/// enclosing class.
pub fn lower_to_facts(ast: &MiniOoAst, map: &ComponentMap) -> Result<Lowered, LowerError> {
    let mut declared: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for class in &ast.classes {
        if declared.contains_key(class.name.as_str()) {
            return Err(LowerError::DuplicateClass {
                class: class.name.clone(),
                line: class.span.line,
            });
        }
        let mut methods = BTreeSet::new();
        for method in &class.methods {
            if !methods.insert(method.name.as_str()) {
                return Err(LowerError::DuplicateMethod {
                    class: class.name.clone(),
                    method: method.name.clone(),
                    line: method.span.line,
                });
            }
        }
        declared.insert(class.name.as_str(), methods);
    }

    let mut facts = CodeFacts::default();
    let mut components = BTreeSet::new();
    let mut warnings = Vec::new();

    for class in &ast.classes {
        let component =
            map.component_for(&class.name)
                .ok_or_else(|| LowerError::UnmappedClass {
                    class: class.name.clone(),
                    line: class.span.line,
                })?;
        components.insert(component.to_string());

        let mut record = ClassRecord::new(class.name.clone(), component);
        for method in &class.methods {
            record.methods.push(MethodRecord {
                name: method.name.clone(),
                decision_count: count_decisions(&method.body),
                cfg: Some(build_cfg(&method.body)),
            });

            let mut calls = Vec::new();
            for stmt in &method.body {
                stmt.visit_calls(&mut calls);
            }
            for call in calls {
                let target = match &call.receiver {
                    Receiver::SelfRef => class.name.as_str(),
                    Receiver::Class(name) => name.as_str(),
                };
                let resolved = declared
                    .get(target)
                    .is_some_and(|methods| methods.contains(call.method.as_str()));
                if !resolved {
                    warnings.push(UnresolvedCallee {
                        caller_class: class.name.clone(),
                        caller_method: method.name.clone(),
                        receiver: target.to_string(),
                        method: call.method.clone(),
                        line: call.span.line,
                        column: call.span.column,
                    });
                    continue;
                }
                facts.invocations.push(InvocationRecord {
                    callee_class: target.to_string(),
                    callee_method: call.method.clone(),
                    count: 1,
                });
                facts.calls.push(CallEdge {
                    caller: class.name.clone(),
                    callee: target.to_string(),
                    count: 1,
                });
            }
        }
        facts.classes.push(record);

        if let Some(parent) = &class.extends {
            facts.inheritance.push(InheritanceEdge {
                child: class.name.clone(),
                parent: parent.clone(),
            });
        }
    }

    facts.components = components.into_iter().map(ComponentRecord::new).collect();
    facts.normalize();
    Ok(Lowered { facts, warnings })
}
