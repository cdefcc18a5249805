//! Generators, independent oracles and property checks shared by the
//! property and acceptance test targets.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use compmetrics::facts_io::{load_facts, merge_facts, save_facts};
use compmetrics::metrics::{
    class_dit, class_noc, class_wmc, component_cbom, component_wcm, full_report, MetricsReport,
};
use compmetrics::minilang::ast::{
    ArmLabel, BinaryOp, Call, ClassDecl, Expr, Literal, MethodDecl, MiniOoAst, Receiver, Span,
    Stmt, SwitchArm, UnaryOp,
};
use compmetrics::minilang::{build_cfg, count_decisions, parse_source, print_source};
use compmetrics::model::{
    classes_of, validate_facts, CallEdge, ClassRecord, CodeFacts, ComponentRecord, InheritanceEdge,
    InvocationRecord, MethodRecord,
};
use compmetrics::reconfig::{
    apply_partition, propose_partition, select_max, select_threshold, PartitionOptions,
    PartitionPlan, PlanPart, SearchMethod, SearchMode,
};
use compmetrics::reuse::{
    load_ledger, record_reuse, save_ledger, victims, ReuseLedger, VictimRule,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn hr_portal() -> CodeFacts {
    load_facts(&std::fs::read(fixture("hr_portal.facts")).unwrap()).unwrap()
}

// ---------------------------------------------------------------- generators

#[derive(Debug, Clone)]
struct ClassSpec {
    component: usize,
    decisions: Vec<u64>,
    invocations: Vec<u64>,
    parent: Option<usize>,
}

fn class_spec() -> impl Strategy<Value = ClassSpec> {
    (
        0usize..4,
        prop::collection::vec((0u64..30, 0u64..50), 0..4),
        prop::option::of(0usize..64),
    )
        .prop_map(|(component, methods, parent)| ClassSpec {
            component,
            decisions: methods.iter().map(|m| m.0).collect(),
            invocations: methods.iter().map(|m| m.1).collect(),
            parent,
        })
}

/// Valid, normalized facts: up to 4 components, up to 10 classes, a random
/// inheritance forest, invocation records and class call edges.
pub fn arb_facts() -> impl Strategy<Value = CodeFacts> {
    (
        1usize..5,
        prop::collection::vec(class_spec(), 0..10),
        prop::collection::vec((0usize..64, 0usize..64, 1u64..20), 0..15),
    )
        .prop_map(|(ncomp, specs, calls)| {
            let mut facts = CodeFacts::default();
            for c in 0..ncomp {
                facts.components.push(ComponentRecord::new(format!("C{c}")));
            }
            let ids: Vec<String> = (0..specs.len()).map(|i| format!("K{i:02}")).collect();
            for (i, spec) in specs.iter().enumerate() {
                let mut class =
                    ClassRecord::new(ids[i].clone(), format!("C{}", spec.component % ncomp));
                for (m, (&d, &n)) in spec.decisions.iter().zip(&spec.invocations).enumerate() {
                    let name = format!("m{m}");
                    class.methods.push(MethodRecord::new(&name, d));
                    facts.invocations.push(InvocationRecord {
                        callee_class: ids[i].clone(),
                        callee_method: name,
                        count: n,
                    });
                }
                facts.classes.push(class);
                // parents always have a smaller index, so the forest is acyclic
                if let (Some(p), true) = (spec.parent, i > 0) {
                    facts.inheritance.push(InheritanceEdge {
                        child: ids[i].clone(),
                        parent: ids[p % i].clone(),
                    });
                }
            }
            if !ids.is_empty() {
                for (a, b, n) in calls {
                    facts.calls.push(CallEdge {
                        caller: ids[a % ids.len()].clone(),
                        callee: ids[b % ids.len()].clone(),
                        count: n,
                    });
                }
            }
            facts.normalized()
        })
}

/// One component of `n` classes with random symmetric call weights.
pub fn arb_component(max_classes: usize) -> impl Strategy<Value = CodeFacts> {
    (2usize..=max_classes)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0usize..n, 0usize..n, 0u64..25), 0..(n * 3)),
                prop::collection::vec(1u64..40, n),
            )
        })
        .prop_map(|(n, edges, counts)| component_facts(n, &edges, &counts))
}

pub fn component_facts(n: usize, edges: &[(usize, usize, u64)], counts: &[u64]) -> CodeFacts {
    let mut facts = CodeFacts {
        components: vec![ComponentRecord::new("Comp")],
        ..Default::default()
    };
    for (i, &count) in counts.iter().enumerate().take(n) {
        let id = format!("Class{i:02}");
        facts.classes.push(
            ClassRecord::new(&id, "Comp").with_method(MethodRecord::new("run", i as u64 % 4)),
        );
        facts.invocations.push(InvocationRecord {
            callee_class: id,
            callee_method: "run".into(),
            count,
        });
    }
    for &(a, b, w) in edges {
        facts.calls.push(CallEdge {
            caller: format!("Class{a:02}"),
            callee: format!("Class{b:02}"),
            count: w,
        });
    }
    facts.normalized()
}

// ------------------------------------------------------------------ oracles

/// Minimum cut over every bipartition of `component`'s classes into two
/// non-empty sides, computed straight from the call edge list.
pub fn brute_force_min_cut(facts: &CodeFacts, component: &str) -> u64 {
    let classes: Vec<&str> = facts
        .classes
        .iter()
        .filter(|c| c.component == component)
        .map(|c| c.id.as_str())
        .collect();
    let n = classes.len();
    let mut best = u64::MAX;
    for subset in 1u32..((1u32 << n) - 1) {
        let inside: BTreeSet<&str> = (0..n)
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| classes[i])
            .collect();
        let cut: u64 = facts
            .calls
            .iter()
            .filter(|e| {
                classes.contains(&e.caller.as_str()) && classes.contains(&e.callee.as_str())
            })
            .filter(|e| inside.contains(e.caller.as_str()) != inside.contains(e.callee.as_str()))
            .map(|e| e.count)
            .sum();
        best = best.min(cut);
    }
    best
}

fn oracle_wmc(class: &ClassRecord) -> u64 {
    class
        .methods
        .iter()
        .fold(0, |acc, m| acc + m.decision_count + 1)
}

fn oracle_depth(facts: &CodeFacts, class: &str) -> u64 {
    match facts.inheritance.iter().find(|e| e.child == class) {
        Some(edge) => 1 + oracle_depth(facts, &edge.parent),
        None => 0,
    }
}

// ---------------------------------------------------------------- properties

pub type PropResult = Result<(), TestError<String>>;

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), TestError<S::Value>> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test)
}

fn stringify<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> PropResult {
    r.map_err(|e| match e {
        TestError::Abort(reason) => TestError::Abort(reason),
        TestError::Fail(reason, value) => TestError::Fail(reason, format!("{value:?}")),
    })
}

pub fn wmc_wcm_additivity(cases: u32) -> PropResult {
    stringify(run(cases, arb_facts(), |facts| {
        let report = full_report(&facts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for class in &facts.classes {
            prop_assert_eq!(class_wmc(class), oracle_wmc(class));
            prop_assert_eq!(report.class(&class.id).unwrap().wmc, oracle_wmc(class));
        }
        for component in &facts.components {
            let expected: u64 = facts
                .classes
                .iter()
                .filter(|c| c.component == component.id)
                .map(oracle_wmc)
                .sum();
            prop_assert_eq!(component_wcm(&facts, &component.id).unwrap(), expected);
            prop_assert_eq!(report.component(&component.id).unwrap().wcm, expected);
        }
        // Moving a class conserves total WCM and shifts exactly its WMC.
        if let (Some(class), true) = (facts.classes.first(), facts.components.len() > 1) {
            let from = class.component.clone();
            let to = facts
                .components
                .iter()
                .find(|c| c.id != from)
                .unwrap()
                .id
                .clone();
            let mut moved = facts.clone();
            moved.classes[0].component = to.clone();
            let w = class_wmc(class);
            prop_assert_eq!(
                component_wcm(&moved, &from).unwrap() + w,
                component_wcm(&facts, &from).unwrap()
            );
            prop_assert_eq!(
                component_wcm(&moved, &to).unwrap(),
                component_wcm(&facts, &to).unwrap() + w
            );
        }
        Ok(())
    }))
}

pub fn dit_recurrence(cases: u32) -> PropResult {
    stringify(run(cases, arb_facts(), |facts| {
        for edge in &facts.inheritance {
            prop_assert_eq!(
                class_dit(&facts, &edge.child).unwrap(),
                class_dit(&facts, &edge.parent).unwrap() + 1
            );
        }
        for class in &facts.classes {
            prop_assert_eq!(
                class_dit(&facts, &class.id).unwrap(),
                oracle_depth(&facts, &class.id)
            );
        }
        Ok(())
    }))
}

pub fn noc_sum(cases: u32) -> PropResult {
    stringify(run(cases, arb_facts(), |facts| {
        let total: u64 = facts
            .classes
            .iter()
            .map(|c| class_noc(&facts, &c.id).unwrap())
            .sum();
        prop_assert_eq!(total, facts.inheritance.len() as u64);
        Ok(())
    }))
}

pub fn cbom_additivity(cases: u32) -> PropResult {
    let strategy = arb_facts().prop_flat_map(|facts| {
        let n = facts.classes.len();
        (Just(facts), prop::collection::vec(0usize..4, n))
    });
    stringify(run(cases, strategy, |(facts, assignment)| {
        let total: u64 = facts.invocations.iter().map(|r| r.count).sum();
        let sum = |f: &CodeFacts| -> u64 {
            f.components
                .iter()
                .map(|c| component_cbom(f, &c.id).unwrap())
                .sum()
        };
        prop_assert_eq!(sum(&facts), total);

        // arbitrary reassignment of classes to components
        let mut reassigned = facts.clone();
        let ncomp = facts.components.len();
        for (class, target) in reassigned.classes.iter_mut().zip(&assignment) {
            class.component = format!("C{}", target % ncomp);
        }
        prop_assert_eq!(sum(&reassigned), total);

        // splitting one component in two: parts add up to the original
        let comp = facts.components[0].id.clone();
        let members: Vec<String> = classes_of(&facts, &comp)
            .unwrap()
            .iter()
            .map(|c| c.id.clone())
            .collect();
        if members.len() >= 2 {
            let (left, right): (Vec<_>, Vec<_>) = members
                .iter()
                .zip(&assignment)
                .partition(|(_, t)| *t % 2 == 0);
            let mut left: Vec<String> = left.into_iter().map(|(c, _)| c.clone()).collect();
            let mut right: Vec<String> = right.into_iter().map(|(c, _)| c.clone()).collect();
            if left.is_empty() {
                left.push(right.pop().unwrap());
            }
            if right.is_empty() {
                right.push(left.pop().unwrap());
            }
            let plan = PartitionPlan {
                component: comp.clone(),
                parts: vec![
                    PlanPart {
                        name: format!("{comp}_1"),
                        classes: left,
                        predicted_cbom: 0,
                    },
                    PlanPart {
                        name: format!("{comp}_2"),
                        classes: right,
                        predicted_cbom: 0,
                    },
                ],
                cross_coupling: 0,
                method: SearchMethod::Exact,
            };
            let split =
                apply_partition(&facts, &plan).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(
                component_cbom(&split, &format!("{comp}_1")).unwrap()
                    + component_cbom(&split, &format!("{comp}_2")).unwrap(),
                component_cbom(&facts, &comp).unwrap()
            );
            prop_assert_eq!(sum(&split), total);
            prop_assert!(validate_facts(&split).is_empty());
        }
        Ok(())
    }))
}

fn cbom_report() -> impl Strategy<Value = MetricsReport> {
    prop::collection::vec(0u64..500, 1..8).prop_map(|cboms| {
        let facts = CodeFacts {
            components: (0..cboms.len())
                .map(|i| ComponentRecord::new(format!("C{i}")))
                .collect(),
            ..Default::default()
        };
        let mut report = full_report(&facts).unwrap();
        for (row, cbom) in report.components.iter_mut().zip(cboms) {
            row.cbom = cbom;
        }
        report
    })
}

pub fn threshold_antitone(cases: u32) -> PropResult {
    let strategy = (cbom_report(), 0u64..600, 0u64..600, 1u64..10);
    stringify(run(cases, strategy, |(report, a, b, scale)| {
        let (p1, p2) = (a.min(b), a.max(b));
        let low: BTreeSet<String> = select_threshold(&report, p1).into_iter().collect();
        let high: BTreeSet<String> = select_threshold(&report, p2).into_iter().collect();
        prop_assert!(high.is_subset(&low));

        let chosen = select_max(&report).unwrap();
        let chosen_cbom = report.component(&chosen).unwrap().cbom;
        prop_assert!(report.components.iter().all(|c| c.cbom <= chosen_cbom));
        let mut scaled = report.clone();
        scaled.components.iter_mut().for_each(|c| c.cbom *= scale);
        prop_assert_eq!(select_max(&scaled).unwrap(), chosen);
        Ok(())
    }))
}

pub fn ledger_fold_and_round_trip(cases: u32) -> PropResult {
    let strategy = prop::collection::vec((0usize..5, 1u64..20), 0..30);
    stringify(run(cases, strategy, |events| {
        let names = ["Webtier", "Businesstier", "DAO", "Auth", "Mail"];
        let mut ledger = ReuseLedger::default();
        for &(who, delta) in &events {
            let next = record_reuse(&ledger, names[who], delta).unwrap();
            for (name, count) in &ledger.entries {
                prop_assert!(next.count(name) >= *count);
            }
            ledger = next;
        }
        prop_assert_eq!(ledger.total(), events.iter().map(|e| e.1).sum::<u64>());
        for name in names {
            let expected: u64 = events
                .iter()
                .filter(|e| names[e.0] == name)
                .map(|e| e.1)
                .sum();
            prop_assert_eq!(ledger.count(name), expected);
        }
        if !ledger.entries.is_empty() {
            prop_assert!(victims(&ledger, VictimRule::BelowThreshold(0))
                .unwrap()
                .is_empty());
            let mut previous: BTreeSet<String> = BTreeSet::new();
            for t in [0, 5, 10, 20, 40, 1000] {
                let now: BTreeSet<String> = victims(&ledger, VictimRule::BelowThreshold(t))
                    .unwrap()
                    .into_iter()
                    .map(|v| v.0)
                    .collect();
                prop_assert!(previous.is_subset(&now));
                previous = now;
            }
        }

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger");
        ledger.updated_at = "2026-10-19T00:00:00Z".into();
        save_ledger(&ledger, &path).unwrap();
        prop_assert_eq!(load_ledger(&path).unwrap(), ledger);
        Ok(())
    }))
}

pub fn fact_file_round_trip(cases: u32) -> PropResult {
    let strategy = (arb_facts(), arb_facts());
    stringify(run(cases, strategy, |(facts, other)| {
        let bytes = save_facts(&facts).unwrap();
        prop_assert_eq!(&load_facts(&bytes).unwrap(), &facts);
        prop_assert_eq!(save_facts(&facts).unwrap(), bytes);
        prop_assert_eq!(validate_facts(&facts), validate_facts(&facts));
        prop_assert_eq!(
            merge_facts(&[facts.clone(), CodeFacts::default()]).unwrap(),
            facts.clone()
        );

        // the union of classes_of over components partitions the classes
        let mut seen: Vec<String> = Vec::new();
        for c in &facts.components {
            seen.extend(
                classes_of(&facts, &c.id)
                    .unwrap()
                    .iter()
                    .map(|k| k.id.clone()),
            );
        }
        seen.sort();
        let all: Vec<String> = facts.classes.iter().map(|c| c.id.clone()).collect();
        prop_assert_eq!(seen, all);

        // merge associativity on a conflict-free triple: rename `other`
        let rename = |f: &CodeFacts, tag: &str| {
            let mut g = f.clone();
            for c in &mut g.components {
                c.id = format!("{tag}{}", c.id);
                c.name = c.id.clone();
            }
            for c in &mut g.classes {
                c.id = format!("{tag}{}", c.id);
                c.name = c.id.clone();
                c.component = format!("{tag}{}", c.component);
            }
            for e in &mut g.inheritance {
                e.child = format!("{tag}{}", e.child);
                e.parent = format!("{tag}{}", e.parent);
            }
            for r in &mut g.invocations {
                r.callee_class = format!("{tag}{}", r.callee_class);
            }
            for e in &mut g.calls {
                e.caller = format!("{tag}{}", e.caller);
                e.callee = format!("{tag}{}", e.callee);
            }
            g.normalized()
        };
        let b = rename(&other, "x");
        let c = facts.clone();
        let left =
            merge_facts(&[merge_facts(&[facts.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let right = merge_facts(&[facts.clone(), merge_facts(&[b, c]).unwrap()]).unwrap();
        prop_assert_eq!(left, right);
        Ok(())
    }))
}

/// Cross-coupling of the proposed plan equals the brute-force optimum.
pub fn partition_matches_oracle(cases: u32, mode: SearchMode) -> PropResult {
    stringify(run(cases, arb_component(10), |facts| {
        let options = PartitionOptions {
            mode,
            ..Default::default()
        };
        let plan = propose_partition(&facts, "Comp", &options).unwrap();
        prop_assert_eq!(plan.cross_coupling, brute_force_min_cut(&facts, "Comp"));
        prop_assert_eq!(&propose_partition(&facts, "Comp", &options).unwrap(), &plan);
        let predicted: u64 = plan.parts.iter().map(|p| p.predicted_cbom).sum();
        prop_assert_eq!(predicted, component_cbom(&facts, "Comp").unwrap());
        for part in &plan.parts {
            prop_assert!(part.predicted_cbom < predicted);
        }
        // totals survive materializing the split
        let split = apply_partition(&facts, &plan).unwrap();
        let wcm = |f: &CodeFacts| -> u64 {
            f.components
                .iter()
                .map(|c| component_wcm(f, &c.id).unwrap())
                .sum()
        };
        prop_assert_eq!(wcm(&split), wcm(&facts));
        Ok(())
    }))
}

// ---------------------------------------------------------------- MiniOO

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "count", "total", "x1", "ready"]).prop_map(String::from)
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        (-50i64..50).prop_map(Literal::Int),
        prop::sample::select(vec!["", "ok", "login page"]).prop_map(|s| Literal::Str(s.into())),
        any::<bool>().prop_map(Literal::Bool),
    ]
}

fn call() -> impl Strategy<Value = Call> {
    (
        prop_oneof![
            Just(Receiver::SelfRef),
            prop::sample::select(vec!["A", "B", "Dao"]).prop_map(|s| Receiver::Class(s.into())),
        ],
        prop::sample::select(vec!["run", "save", "load"]),
    )
        .prop_map(|(receiver, method)| Call {
            receiver,
            method: method.into(),
            args: vec![],
            span: Span::default(),
        })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        ident().prop_map(Expr::Var),
        literal().prop_map(Expr::Lit),
        call().prop_map(Expr::Call),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![UnaryOp::Not, UnaryOp::Neg]),
                inner.clone()
            )
                .prop_map(|(op, e)| Expr::Unary(op, Box::new(e))),
            (
                prop::sample::select(vec![
                    BinaryOp::Or,
                    BinaryOp::And,
                    BinaryOp::Eq,
                    BinaryOp::Lt,
                    BinaryOp::Add,
                    BinaryOp::Mul,
                    BinaryOp::Sub,
                ]),
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Expr::Binary(op, Box::new(l), Box::new(r))),
        ]
    })
}

fn simple_stmt() -> impl Strategy<Value = Stmt> {
    prop_oneof![
        (ident(), expr()).prop_map(|(target, value)| Stmt::Assign { target, value }),
        call().prop_map(Stmt::Call),
    ]
}

/// Statement lists without dead code after `return`.
fn stmts() -> impl Strategy<Value = Vec<Stmt>> {
    let leaf = simple_stmt();
    let stmt = leaf.prop_recursive(4, 40, 4, |inner| {
        let body = prop::collection::vec(inner.clone(), 0..3);
        prop_oneof![
            (expr(), body.clone(), prop::option::of(body.clone())).prop_map(|(cond, t, e)| {
                Stmt::If {
                    cond,
                    then_branch: t,
                    else_branch: e,
                }
            }),
            (expr(), body.clone()).prop_map(|(cond, body)| Stmt::While { cond, body }),
            (
                prop::option::of(simple_stmt()),
                prop::option::of(expr()),
                prop::option::of(simple_stmt()),
                body.clone()
            )
                .prop_map(|(init, cond, step, body)| Stmt::For {
                    init: init.map(Box::new),
                    cond,
                    step: step.map(Box::new),
                    body,
                }),
            (
                expr(),
                prop::collection::vec((literal(), body.clone()), 1..4),
                prop::option::of(body.clone())
            )
                .prop_map(|(scrutinee, cases, default)| {
                    let mut arms: Vec<SwitchArm> = cases
                        .into_iter()
                        .map(|(lit, body)| SwitchArm {
                            label: ArmLabel::Case(lit),
                            body,
                        })
                        .collect();
                    if let Some(body) = default {
                        arms.push(SwitchArm {
                            label: ArmLabel::Default,
                            body,
                        });
                    }
                    Stmt::Switch { scrutinee, arms }
                }),
            body.prop_map(Stmt::Block),
        ]
    });
    (
        prop::collection::vec(stmt, 0..5),
        prop::option::of(prop::option::of(expr())),
    )
        .prop_map(|(mut body, ret)| {
            if let Some(value) = ret {
                body.push(Stmt::Return(value));
            }
            body
        })
}

fn switches_without_default(body: &[Stmt]) -> u64 {
    body.iter()
        .map(|s| match s {
            Stmt::If {
                then_branch,
                else_branch,
                ..
            } => {
                switches_without_default(then_branch)
                    + else_branch.as_deref().map_or(0, switches_without_default)
            }
            Stmt::While { body, .. } | Stmt::For { body, .. } | Stmt::Block(body) => {
                switches_without_default(body)
            }
            Stmt::Switch { arms, .. } => {
                let own = u64::from(!arms.iter().any(|a| a.label == ArmLabel::Default));
                own + arms
                    .iter()
                    .map(|a| switches_without_default(&a.body))
                    .sum::<u64>()
            }
            _ => 0,
        })
        .sum()
}

pub fn minioo_round_trip_and_cfg(cases: u32) -> PropResult {
    let strategy = prop::collection::vec(stmts(), 1..3);
    stringify(run(cases, strategy, |bodies| {
        let ast = MiniOoAst {
            classes: vec![ClassDecl {
                name: "A".into(),
                extends: Some("B".into()),
                methods: bodies
                    .iter()
                    .enumerate()
                    .map(|(i, body)| MethodDecl {
                        name: format!("m{i}"),
                        params: vec!["p".into()],
                        body: body.clone(),
                        span: Span::default(),
                    })
                    .collect(),
                span: Span::default(),
            }],
        };
        let text = print_source(&ast);
        let reparsed =
            parse_source(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&reparsed, &ast);

        for body in &bodies {
            let cfg = build_cfg(body);
            let facts = CodeFacts {
                components: vec![ComponentRecord::new("C")],
                classes: vec![ClassRecord::new("A", "C").with_method(MethodRecord {
                    name: "m".into(),
                    decision_count: 0,
                    cfg: Some(cfg.clone()),
                })],
                ..Default::default()
            };
            prop_assert!(
                validate_facts(&facts).is_empty(),
                "{:?}",
                validate_facts(&facts)
            );
            // each branch node contributes out-degree - 1 choices
            let mut out: HashMap<u32, u64> = HashMap::new();
            for (from, _) in &cfg.edges {
                *out.entry(*from).or_default() += 1;
            }
            let choices: u64 = out.values().map(|d| d.saturating_sub(1)).sum();
            prop_assert_eq!(
                choices,
                count_decisions(body) + switches_without_default(body)
            );
        }
        Ok(())
    }))
}
