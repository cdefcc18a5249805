//! Decision counting and control-flow graph construction for method bodies.
//!
//! Decision elements: each `if`, `while` and `for` counts one; a `switch`
//! counts one less than its number of arms (a `default` arm is an arm).
//! Boolean operators are not decision elements.

use std::collections::BTreeSet;

use super::ast::{ArmLabel, Stmt};
use crate::model::Cfg;

pub fn count_decisions(body: &[Stmt]) -> u64 {
    body.iter().map(stmt_decisions).sum()
}

fn stmt_decisions(stmt: &Stmt) -> u64 {
    match stmt {
        Stmt::If {
            then_branch,
            else_branch,
            ..
        } => 1 + count_decisions(then_branch) + else_branch.as_deref().map_or(0, count_decisions),
        Stmt::While { body, .. } | Stmt::For { body, .. } => 1 + count_decisions(body),
        Stmt::Switch { arms, .. } => {
            let nested: u64 = arms.iter().map(|arm| count_decisions(&arm.body)).sum();
            (arms.len() as u64).saturating_sub(1) + nested
        }
        Stmt::Block(body) => count_decisions(body),
        Stmt::Return(_) | Stmt::Assign { .. } | Stmt::Call(_) => 0,
    }
}

/// Build the single-entry, single-exit CFG of a method body.
///
/// Straight-line statements do not create nodes. A branch reuses the current
/// node when it has no successors yet; otherwise a join node is created.
/// `if` and `switch` add one node per arm, plus a fall-through edge from the
/// branch node when there is no `else`/`default`. Loops add a header and a
/// body node, with back edges from the body's ends to the header. Code after
/// `return` is unreachable and adds nothing. The exit node is created last.
pub fn build_cfg(body: &[Stmt]) -> Cfg {
    let mut builder = CfgBuilder::default();
    let entry = builder.node();
    let ends = builder.walk(body, vec![entry]);
    let exit = builder.node();
    for end in ends {
        builder.edge(end, exit);
    }
    for node in builder.exit_sources.clone() {
        builder.edge(node, exit);
    }
    Cfg {
        nodes: (0..builder.next).collect(),
        edges: builder.edges.into_iter().collect(),
        entry,
    }
}

#[derive(Default)]
struct CfgBuilder {
    next: u32,
    edges: BTreeSet<(u32, u32)>,
    out_degree: Vec<usize>,
    /// Nodes ending in `return`; linked to the exit once it exists.
    exit_sources: Vec<u32>,
}

impl CfgBuilder {
    fn node(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        self.out_degree.push(0);
        id
    }

    fn edge(&mut self, from: u32, to: u32) {
        if self.edges.insert((from, to)) {
            self.out_degree[from as usize] += 1;
        }
    }

    /// A node all of `preds` flow into, with no successors yet.
    fn settle(&mut self, preds: &[u32]) -> u32 {
        if let [only] = preds {
            if self.out_degree[*only as usize] == 0 && !self.exit_sources.contains(only) {
                return *only;
            }
        }
        let join = self.node();
        for &p in preds {
            self.edge(p, join);
        }
        join
    }

    fn arm(&mut self, branch: u32, body: &[Stmt]) -> Vec<u32> {
        let head = self.node();
        self.edge(branch, head);
        self.walk(body, vec![head])
    }

    /// Walk `body` starting from the dangling ends `preds`, returning the new
    /// dangling ends. An empty result means control never falls through.
    fn walk(&mut self, body: &[Stmt], mut preds: Vec<u32>) -> Vec<u32> {
        for stmt in body {
            if preds.is_empty() {
                break;
            }
            preds = match stmt {
                Stmt::If {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    let branch = self.settle(&preds);
                    let mut ends = self.arm(branch, then_branch);
                    match else_branch {
                        Some(els) => ends.extend(self.arm(branch, els)),
                        None => ends.push(branch),
                    }
                    ends
                }
                Stmt::While { body, .. } | Stmt::For { body, .. } => {
                    let header = self.node();
                    for &p in &preds {
                        self.edge(p, header);
                    }
                    for end in self.arm(header, body) {
                        self.edge(end, header);
                    }
                    vec![header]
                }
                Stmt::Switch { arms, .. } => {
                    let branch = self.settle(&preds);
                    let mut ends = Vec::new();
                    for arm in arms {
                        ends.extend(self.arm(branch, &arm.body));
                    }
                    if !arms.iter().any(|a| a.label == ArmLabel::Default) {
                        ends.push(branch);
                    }
                    ends
                }
                Stmt::Return(_) => {
                    let node = self.settle(&preds);
                    self.exit_sources.push(node);
                    Vec::new()
                }
                Stmt::Block(inner) => self.walk(inner, preds),
                Stmt::Assign { .. } | Stmt::Call(_) => preds,
            };
        }
        preds
    }
}
