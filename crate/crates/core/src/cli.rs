//! Command-line surface.
//!
//! Exit codes: 0 on success, 1 on domain errors (unknown component, invalid
//! facts, unsplittable component, ledger problems), 2 on usage and input
//! syntax errors. Every error is reported on stderr as one line starting
//! with `error[<code>]:`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::facts_io::{load_facts, merge_facts, save_facts, FactsError};
use crate::metrics::{full_report, MetricsError, MetricsReport};
use crate::minilang::{lower_to_facts, parse_source, ComponentMap, LowerError, MiniOoAst};
use crate::model::{Category, CodeFacts};
use crate::reconfig::{
    apply_partition, evaluate_partition, load_plans, propose_partition, save_plans, select,
    PartitionEvaluation, PartitionOptions, PartitionPlan, ReconfigError, ReconfigPolicy,
};
use crate::render::{csv_block, render_report, table, to_json, RenderFormat};
use crate::reuse::{
    load_ledger, record_reuse, save_ledger, victims, LedgerError, ReuseLedger, VictimRule,
    DEFAULT_LEDGER_PATH,
};

pub const LEDGER_ENV: &str = "COMPMETRICS_LEDGER";

#[derive(Debug, Parser)]
#[command(
    name = "compmetrics",
    version,
    about = "Component reusability metrics and reconfiguration"
)]
struct Cli {
    /// Reuse ledger file [env: COMPMETRICS_LEDGER] [default: ./compmetrics-ledger]
    #[arg(long, global = true, value_name = "PATH")]
    ledger: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Config file mapping MiniOO classes to components
    #[arg(long = "component-map", global = true, value_name = "FILE")]
    component_map: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Structured,
    Csv,
}

impl From<FormatArg> for RenderFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => RenderFormat::Table,
            FormatArg::Structured => RenderFormat::Structured,
            FormatArg::Csv => RenderFormat::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute WMC, WCM, DIT, NOC and CBOM for fact files and/or .moo sources
    Analyze {
        #[arg(required = true, value_name = "INPUT")]
        inputs: Vec<PathBuf>,
    },
    /// Show the component reuse relation from the ledger
    Report,
    /// Record reuse events or list victim components
    Reuse {
        #[command(subcommand)]
        action: ReuseAction,
    },
    /// Select highly coupled components and propose a two-way split
    Reconfigure(ReconfigureArgs),
}

#[derive(Debug, Subcommand)]
enum ReuseAction {
    /// Add N reuses of a component
    Record {
        name: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// List rarely reused components (default: strictly below the median)
    Victims {
        #[arg(long)]
        threshold: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Max,
    Threshold,
}

#[derive(Debug, Args)]
struct ReconfigureArgs {
    #[arg(required = true, value_name = "INPUT")]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// CBOM threshold for --strategy threshold
    #[arg(long = "P", visible_alias = "p", value_name = "N")]
    p: Option<u64>,
    /// Smallest allowed part
    #[arg(long = "min-part-size", default_value_t = 1)]
    min_part_size: usize,
    /// Write the proposed plans to this file
    #[arg(long = "emit-plan", value_name = "FILE")]
    emit_plan: Option<PathBuf>,
    /// Apply plans from this file and print the resulting facts
    #[arg(long = "apply-plan", value_name = "FILE", conflicts_with_all = ["strategy", "emit_plan"])]
    apply_plan: Option<PathBuf>,
    /// Where to write facts produced by --apply-plan (default: stdout)
    #[arg(long, value_name = "FILE", requires = "apply_plan")]
    out: Option<PathBuf>,
}

/// Process environment relevant to the CLI.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// Value of `COMPMETRICS_LEDGER`, if set.
    pub ledger: Option<PathBuf>,
}

impl Env {
    pub fn from_process() -> Self {
        Self {
            ledger: std::env::var_os(LEDGER_ENV).map(PathBuf::from),
        }
    }
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    message: String,
    exit: i32,
}

impl CliError {
    fn domain(code: &'static str, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
            exit: 1,
        }
    }

    fn usage(code: &'static str, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
            exit: 2,
        }
    }
}

fn facts_error(path: &Path, e: FactsError) -> CliError {
    let message = format!("{}: {e}", path.display());
    match e {
        FactsError::Parse { .. } | FactsError::UnsupportedVersion(_) => {
            CliError::usage(e.code(), message)
        }
        _ => CliError::domain(e.code(), message),
    }
}

impl From<FactsError> for CliError {
    fn from(e: FactsError) -> Self {
        match e {
            FactsError::Parse { .. } | FactsError::UnsupportedVersion(_) => {
                CliError::usage(e.code(), e)
            }
            _ => CliError::domain(e.code(), e),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::domain(e.code(), e)
    }
}

impl From<ReconfigError> for CliError {
    fn from(e: ReconfigError) -> Self {
        match &e {
            ReconfigError::PlanFile(
                FactsError::Parse { .. } | FactsError::UnsupportedVersion(_),
            ) => CliError::usage(e.code(), e),
            _ => CliError::domain(e.code(), e),
        }
    }
}

impl From<LedgerError> for CliError {
    fn from(e: LedgerError) -> Self {
        CliError::domain(e.code(), e)
    }
}

impl From<LowerError> for CliError {
    fn from(e: LowerError) -> Self {
        CliError::domain(e.code(), e)
    }
}

/// Parse `args` (including the program name) and run the command, writing
/// data to `out` and diagnostics to `err`. Returns the exit code.
pub fn run(args: &[OsString], env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or_default();
            let _ = writeln!(err, "error[usage]: {}", first.trim_start_matches("error: "));
            for line in lines {
                let _ = writeln!(err, "{line}");
            }
            return 2;
        }
    };
    let mut diagnostics = Vec::new();
    let result = dispatch(&cli, env, out, &mut diagnostics);
    for line in diagnostics {
        let _ = writeln!(err, "{line}");
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.code, e.message);
            e.exit
        }
    }
}

fn dispatch(
    cli: &Cli,
    env: &Env,
    out: &mut dyn Write,
    diagnostics: &mut Vec<String>,
) -> Result<(), CliError> {
    let format = RenderFormat::from(cli.format);
    let ledger_path = cli
        .ledger
        .clone()
        .or_else(|| env.ledger.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_LEDGER_PATH));

    let text = match &cli.command {
        Command::Analyze { inputs } => {
            let facts = load_inputs(inputs, cli.component_map.as_deref(), diagnostics)?;
            let report = full_report(&facts)?;
            render_report(&report, format)
        }
        Command::Report => {
            let ledger = load_ledger(&ledger_path)?;
            render_relation(&ledger, format)?
        }
        Command::Reuse { action } => match action {
            ReuseAction::Record { name, n } => {
                let ledger = load_ledger(&ledger_path)?;
                let mut next = record_reuse(&ledger, name, *n)?;
                next.updated_at =
                    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
                save_ledger(&next, &ledger_path)?;
                render_counts(&[(name.clone(), next.count(name))], format)
            }
            ReuseAction::Victims { threshold } => {
                let ledger = load_ledger(&ledger_path)?;
                let rule = threshold.map_or(VictimRule::BelowMedian, VictimRule::BelowThreshold);
                render_counts(&victims(&ledger, rule)?, format)
            }
        },
        Command::Reconfigure(args) => reconfigure(cli, args, format, diagnostics)?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::domain("io_error", e))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentMapFile {
    default_component: Option<String>,
    #[serde(default)]
    component_map: BTreeMap<String, String>,
    #[serde(default)]
    categories: BTreeMap<String, Category>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::domain("io_error", format!("{}: {e}", path.display())))
}

fn load_inputs(
    inputs: &[PathBuf],
    map_path: Option<&Path>,
    diagnostics: &mut Vec<String>,
) -> Result<CodeFacts, CliError> {
    let mut parts = Vec::new();
    let mut program = MiniOoAst::default();
    let mut has_sources = false;
    for path in inputs {
        let bytes = read(path)?;
        if path.extension().is_some_and(|ext| ext == "moo") {
            let text = String::from_utf8(bytes).map_err(|_| {
                CliError::usage(
                    "syntax_error",
                    format!("{}: not valid UTF-8", path.display()),
                )
            })?;
            let ast = parse_source(&text)
                .map_err(|e| CliError::usage("syntax_error", format!("{}: {e}", path.display())))?;
            program.classes.extend(ast.classes);
            has_sources = true;
        } else {
            parts.push(load_facts(&bytes).map_err(|e| facts_error(path, e))?);
        }
    }

    if has_sources {
        let config = match map_path {
            Some(path) => {
                let text = String::from_utf8(read(path)?).map_err(|_| {
                    CliError::usage(
                        "config_error",
                        format!("{}: not valid UTF-8", path.display()),
                    )
                })?;
                toml::from_str::<ComponentMapFile>(&text).map_err(|e| {
                    CliError::usage("config_error", format!("{}: {e}", path.display()))
                })?
            }
            None => ComponentMapFile::default(),
        };
        let map = ComponentMap {
            classes: config.component_map,
            default_component: config.default_component,
        };
        let lowered = lower_to_facts(&program, &map)?;
        for warning in &lowered.warnings {
            diagnostics.push(format!("warning[{}]: {warning}", warning.code()));
        }
        let mut facts = lowered.facts;
        for component in &mut facts.components {
            if let Some(category) = config.categories.get(&component.id) {
                component.category = *category;
            }
        }
        parts.push(facts);
    }

    Ok(merge_facts(&parts)?)
}

#[derive(Serialize)]
struct RelationRow<'a> {
    component: &'a str,
    count: u64,
    victim: bool,
}

fn render_relation(ledger: &ReuseLedger, format: RenderFormat) -> Result<String, CliError> {
    let victim_names: Vec<String> = if ledger.entries.is_empty() {
        Vec::new()
    } else {
        victims(ledger, VictimRule::BelowMedian)?
            .into_iter()
            .map(|(name, _)| name)
            .collect()
    };
    let rows: Vec<RelationRow> = ledger
        .entries
        .iter()
        .map(|(name, count)| RelationRow {
            component: name,
            count: *count,
            victim: victim_names.contains(name),
        })
        .collect();
    let header = ["component", "count", "victim"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.component.to_string(),
                r.count.to_string(),
                if r.victim { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    Ok(match format {
        RenderFormat::Table => table(&header, &cells),
        RenderFormat::Csv => csv_block(&header, &cells),
        RenderFormat::Structured => to_json(&rows),
    })
}

fn render_counts(rows: &[(String, u64)], format: RenderFormat) -> String {
    #[derive(Serialize)]
    struct Row<'a> {
        component: &'a str,
        count: u64,
    }
    let header = ["component", "count"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(name, count)| vec![name.clone(), count.to_string()])
        .collect();
    match format {
        RenderFormat::Table => table(&header, &cells),
        RenderFormat::Csv => csv_block(&header, &cells),
        RenderFormat::Structured => to_json(
            &rows
                .iter()
                .map(|(component, count)| Row {
                    component,
                    count: *count,
                })
                .collect::<Vec<_>>(),
        ),
    }
}

#[derive(Serialize)]
struct Proposal {
    plan: PartitionPlan,
    evaluation: PartitionEvaluation,
}

#[derive(Serialize)]
struct ReconfigureOutput<'a> {
    strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    cbom: BTreeMap<&'a str, u64>,
    selected: Vec<String>,
    proposals: Vec<Proposal>,
}

fn reconfigure(
    cli: &Cli,
    args: &ReconfigureArgs,
    format: RenderFormat,
    diagnostics: &mut Vec<String>,
) -> Result<String, CliError> {
    let facts = load_inputs(&args.inputs, cli.component_map.as_deref(), diagnostics)?;

    if let Some(plan_path) = &args.apply_plan {
        let plans = load_plans(&read(plan_path)?)?;
        let mut current = facts;
        for plan in &plans {
            let evaluation = evaluate_partition(&current, plan)?;
            diagnostics.push(format!(
                "applied plan for {}: cross_coupling {}, verdict {}",
                plan.component,
                evaluation.cross_coupling,
                verdict_text(&evaluation)
            ));
            current = apply_partition(&current, plan)?;
        }
        let bytes = save_facts(&current)?;
        return match &args.out {
            Some(path) => {
                fs::write(path, &bytes).map_err(|e| {
                    CliError::domain("io_error", format!("{}: {e}", path.display()))
                })?;
                Ok(String::new())
            }
            None => Ok(String::from_utf8(bytes).expect("JSON is UTF-8")),
        };
    }

    let (policy, strategy_name) = match (args.strategy, args.p) {
        (None, _) => {
            return Err(CliError::usage(
                "usage",
                "reconfigure needs --strategy max|threshold (or --apply-plan)",
            ))
        }
        (Some(StrategyArg::Max), _) => (ReconfigPolicy::MaxCbom, "max"),
        (Some(StrategyArg::Threshold), Some(p)) => (ReconfigPolicy::Threshold { p }, "threshold"),
        (Some(StrategyArg::Threshold), None) => {
            return Err(CliError::usage(
                "usage",
                "--strategy threshold requires --P <N>",
            ))
        }
    };

    let report = full_report(&facts)?;
    let selected = select(&report, policy)?;
    let options = PartitionOptions {
        min_part_size: args.min_part_size,
        ..Default::default()
    };
    let mut proposals = Vec::new();
    for component in &selected {
        let plan = propose_partition(&facts, component, &options)?;
        let evaluation = evaluate_partition(&facts, &plan)?;
        proposals.push(Proposal { plan, evaluation });
    }

    if let Some(path) = &args.emit_plan {
        let plans: Vec<PartitionPlan> = proposals.iter().map(|p| p.plan.clone()).collect();
        fs::write(path, save_plans(&plans))
            .map_err(|e| CliError::domain("io_error", format!("{}: {e}", path.display())))?;
    }

    let output = ReconfigureOutput {
        strategy: strategy_name,
        p: args.p.filter(|_| strategy_name == "threshold"),
        cbom: report
            .components
            .iter()
            .map(|c| (c.component.as_str(), c.cbom))
            .collect(),
        selected,
        proposals,
    };
    Ok(render_reconfigure(&output, &report, format))
}

fn verdict_text(evaluation: &PartitionEvaluation) -> &'static str {
    match evaluation.verdict {
        crate::reconfig::Verdict::Improved => "improved",
        crate::reconfig::Verdict::NotImproved => "not_improved",
    }
}

fn render_reconfigure(
    output: &ReconfigureOutput,
    report: &MetricsReport,
    format: RenderFormat,
) -> String {
    let part_rows = || -> Vec<Vec<String>> {
        output
            .proposals
            .iter()
            .flat_map(|p| {
                p.plan
                    .parts
                    .iter()
                    .zip(&p.evaluation.parts)
                    .map(move |(part, eval)| {
                        vec![
                            p.plan.component.clone(),
                            part.name.clone(),
                            part.classes.join(";"),
                            part.predicted_cbom.to_string(),
                            eval.wcm.to_string(),
                            p.evaluation.cross_coupling.to_string(),
                            verdict_text(&p.evaluation).to_string(),
                        ]
                    })
            })
            .collect()
    };
    match format {
        RenderFormat::Structured => to_json(output),
        RenderFormat::Csv => csv_block(
            &[
                "component",
                "part",
                "classes",
                "predicted_cbom",
                "wcm",
                "cross_coupling",
                "verdict",
            ],
            &part_rows(),
        ),
        RenderFormat::Table => {
            let mut text = String::from("CBOM\n");
            let cbom_rows: Vec<Vec<String>> = report
                .components
                .iter()
                .map(|c| vec![c.component.clone(), c.cbom.to_string()])
                .collect();
            text.push_str(&table(&["component", "cbom"], &cbom_rows));
            let rule = match output.p {
                Some(p) => format!("CBOM > {p}"),
                None => "max CBOM".to_string(),
            };
            text.push_str(&format!("\nCr ({rule}): {}\n", output.selected.join(", ")));
            for proposal in &output.proposals {
                let plan = &proposal.plan;
                let eval = &proposal.evaluation;
                text.push_str(&format!(
                    "\nPlan for {} ({} search, cross_coupling {})\n",
                    plan.component,
                    match plan.method {
                        crate::reconfig::SearchMethod::Exact => "exact",
                        crate::reconfig::SearchMethod::Heuristic => "heuristic",
                    },
                    plan.cross_coupling
                ));
                let rows: Vec<Vec<String>> = plan
                    .parts
                    .iter()
                    .zip(&eval.parts)
                    .map(|(part, e)| {
                        vec![
                            part.name.clone(),
                            part.classes.join(", "),
                            part.predicted_cbom.to_string(),
                            e.wcm.to_string(),
                        ]
                    })
                    .collect();
                text.push_str(&table(&["part", "classes", "cbom", "wcm"], &rows));
                let max_part = eval.parts.iter().map(|p| p.cbom).max().unwrap_or(0);
                text.push_str(&format!(
                    "verdict: {} (max part CBOM {} vs {})\n",
                    verdict_text(eval),
                    max_part,
                    eval.original_cbom
                ));
            }
            text
        }
    }
}
