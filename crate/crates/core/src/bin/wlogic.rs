use std::io::Read;
use std::process::ExitCode;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wlogic::calculi::LogicId;
use wlogic::interpolation::{craig_with, InterpolationError};
use wlogic::prover::{decide_with, proof_to_text, prove_with, ProveError, ProveOutcome, SearchConfig, Verdict};
use wlogic::semantics::{check_conditions, enumerate_countermodel, model_from_text, model_to_text, Model, RandomModelConfig};
use wlogic::sequent::Sequent;
use wlogic::suites::{self, SuiteReport};
use wlogic::syntax::{parse_with, Formula, SymbolTable};

const FORMAT_VERSION: u32 = 1;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "wlogic", version, about = "Proof search, interpolation and countermodels for classical and constructive non-normal modal logics")]
struct Cli {
    /// Logic name, e.g. M, KT, WMC, WKD.
    #[arg(long, global = true)]
    logic: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_nodes: u64,
    #[arg(long, global = true, default_value_t = 30)]
    timeout_secs: u64,
    #[arg(long, global = true, default_value_t = 4)]
    max_worlds: usize,
    /// Seed for randomized commands; a fresh one is chosen and logged if absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line, each with a `version` field.
    Structured,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Fault {
    /// Random models skip the neighbourhood added for (N).
    SkipNRepair,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Soundness,
    Hereditariness,
    Admissibility,
    Disjunction,
    Interpolation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a derivation of a sequent `A, B |- C` or a formula.
    Prove { input: String },
    /// Theorem or NonTheorem.
    Decide { formula: String },
    /// Interpolant for a theorem `A -> B`, with certificates.
    Interpolate {
        a: String,
        b: String,
        /// Simplify the interpolant (re-certified).
        #[arg(long)]
        simplify: bool,
    },
    /// Search for a refuting model with at most --max-worlds worlds.
    Countermodel { formula: String },
    /// Check the frame conditions of a model file (`-` for stdin), and
    /// optionally the validity of formulas in it.
    CheckModel { file: String, formulas: Vec<String> },
    /// Axiom matrix, catalogue derivations and non-theorem list.
    Selftest,
    /// Randomized property suites.
    Fuzz {
        /// Samples per suite and logic.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
}

struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let code = match run(&cli) {
        Ok(c) => c,
        Err(Failure(c, msg)) => {
            if cli.format == Format::Structured {
                emit_json(json!({ "kind": "error", "exit": c, "message": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            c
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Prove { input } => cmd_prove(cli, input),
        Command::Decide { formula } => cmd_decide(cli, formula),
        Command::Interpolate { a, b, simplify } => cmd_interpolate(cli, a, b, *simplify),
        Command::Countermodel { formula } => cmd_countermodel(cli, formula),
        Command::CheckModel { file, formulas } => cmd_check_model(cli, file, formulas),
        Command::Selftest => cmd_selftest(cli),
        Command::Fuzz { count, suite, inject_fault } => cmd_fuzz(cli, *count, suite, *inject_fault),
    }
}

fn emit_json(mut v: Value) {
    v["version"] = json!(FORMAT_VERSION);
    println!("{v}");
}

fn logic(cli: &Cli) -> Result<LogicId, Failure> {
    let name = cli.logic.as_deref().ok_or_else(|| usage("--logic is required"))?;
    name.parse().map_err(|e| usage(format!("{e}")))
}

fn config(cli: &Cli) -> SearchConfig {
    SearchConfig {
        max_nodes: cli.max_nodes,
        timeout: Some(Duration::from_secs(cli.timeout_secs)),
        ..SearchConfig::default()
    }
}

fn budget(e: ProveError) -> Failure {
    match e {
        ProveError::ModeMismatch => usage(e.to_string()),
        _ => Failure(EXIT_BUDGET, e.to_string()),
    }
}

fn formulas(texts: &[&str]) -> Result<(Vec<Formula>, SymbolTable), Failure> {
    let mut table = SymbolTable::reserving(texts.iter().copied());
    let fs = texts
        .iter()
        .map(|t| parse_with(t, &mut table).map_err(|e| usage(format!("cannot parse {t:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    Ok((fs, table))
}

fn bindings_json(table: &SymbolTable) -> Value {
    Value::Object(table.bindings().map(|(n, k)| (n.to_string(), json!(format!("p{k}")))).collect())
}

fn print_bindings(table: &SymbolTable) {
    if !table.is_empty() {
        let b: Vec<String> = table.bindings().map(|(n, k)| format!("{n} = p{k}")).collect();
        println!("atoms: {}", b.join(", "));
    }
}

fn cmd_prove(cli: &Cli, input: &str) -> Outcome {
    let logic = logic(cli)?;
    let mut table = SymbolTable::reserving([input]);
    let goal = Sequent::parse(input, logic.mode(), &mut table).map_err(|e| usage(e.to_string()))?;
    let outcome = prove_with(logic, &goal, &config(cli)).map_err(budget)?;
    let structured = cli.format == Format::Structured;
    match outcome {
        ProveOutcome::Proved(d) => {
            let text = proof_to_text(logic, &d);
            if structured {
                emit_json(json!({
                    "kind": "proof", "logic": logic.to_string(), "sequent": goal.to_string(),
                    "atoms": bindings_json(&table), "height": d.height(), "size": d.size(), "proof": text,
                }));
            } else {
                print_bindings(&table);
                println!("Proved {goal} in {logic} (height {}, {} nodes)", d.height(), d.size());
                print!("{text}");
            }
            Ok(EXIT_OK)
        }
        ProveOutcome::NotDerivable(stats) => {
            if structured {
                emit_json(json!({
                    "kind": "not_derivable", "logic": logic.to_string(), "sequent": goal.to_string(),
                    "atoms": bindings_json(&table),
                    "nodes": stats.nodes, "loop_hits": stats.loop_hits, "memo_hits": stats.memo_hits,
                }));
            } else {
                print_bindings(&table);
                println!("Not derivable: {goal} in {logic}");
                println!("nodes {} loop hits {} memo hits {}", stats.nodes, stats.loop_hits, stats.memo_hits);
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_decide(cli: &Cli, text: &str) -> Outcome {
    let logic = logic(cli)?;
    let (fs, table) = formulas(&[text])?;
    let verdict = decide_with(logic, &fs[0], &config(cli)).map_err(budget)?;
    if cli.format == Format::Structured {
        emit_json(json!({
            "kind": "verdict", "logic": logic.to_string(), "formula": fs[0].to_string(),
            "atoms": bindings_json(&table), "verdict": verdict.to_string(),
        }));
    } else {
        print_bindings(&table);
        println!("{verdict}");
    }
    Ok(if verdict == Verdict::Theorem { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_interpolate(cli: &Cli, a: &str, b: &str, simplify: bool) -> Outcome {
    let logic = logic(cli)?;
    let (fs, table) = formulas(&[a, b])?;
    let res = match craig_with(logic, &fs[0], &fs[1], simplify) {
        Ok(r) => r,
        Err(InterpolationError::NotATheorem(f)) => {
            if cli.format == Format::Structured {
                emit_json(json!({ "kind": "not_theorem", "logic": logic.to_string(), "formula": f.to_string() }));
            } else {
                println!("{f} is not a theorem of {logic}");
            }
            return Ok(EXIT_NEGATIVE);
        }
        Err(InterpolationError::Prove(e)) => return Err(budget(e)),
        Err(e @ InterpolationError::NotConstructive) => return Err(usage(e.to_string())),
        Err(e) => return Err(Failure(EXIT_BUDGET, e.to_string())),
    };
    let left = proof_to_text(logic, &res.left_certificate);
    let right = proof_to_text(logic, &res.right_certificate);
    if cli.format == Format::Structured {
        emit_json(json!({
            "kind": "interpolant", "logic": logic.to_string(), "atoms": bindings_json(&table),
            "a": fs[0].to_string(), "b": fs[1].to_string(), "interpolant": res.interpolant.to_string(),
            "left_certificate": left, "right_certificate": right,
        }));
    } else {
        print_bindings(&table);
        println!("interpolant: {}", res.interpolant);
        println!("left certificate:\n{left}");
        println!("right certificate:\n{right}");
    }
    Ok(EXIT_OK)
}

fn cmd_countermodel(cli: &Cli, text: &str) -> Outcome {
    let logic = logic(cli)?;
    let (fs, table) = formulas(&[text])?;
    let structured = cli.format == Format::Structured;
    match enumerate_countermodel(logic, &fs[0], cli.max_worlds) {
        Some(cm) => {
            let model = model_to_text(&cm.model);
            if structured {
                emit_json(json!({
                    "kind": "countermodel", "logic": logic.to_string(), "formula": fs[0].to_string(),
                    "atoms": bindings_json(&table), "world": cm.world, "model": model,
                }));
            } else {
                print_bindings(&table);
                println!("refuted at world {}", cm.world);
                print!("{model}");
            }
            Ok(EXIT_OK)
        }
        None => {
            if structured {
                emit_json(json!({
                    "kind": "no_countermodel", "logic": logic.to_string(), "formula": fs[0].to_string(),
                    "max_worlds": cli.max_worlds,
                }));
            } else {
                println!("none up to size {}", cli.max_worlds);
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

/// Accepts the text model format, or a structured record with a `model` field.
fn read_model(file: &str) -> Result<Model, Failure> {
    let mut raw = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut raw).map_err(|e| usage(e.to_string()))?;
    } else {
        raw = std::fs::read_to_string(file).map_err(|e| usage(format!("{file}: {e}")))?;
    }
    let text = if raw.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(raw.trim()).map_err(|e| usage(e.to_string()))?;
        v["model"].as_str().ok_or_else(|| usage("record has no model field"))?.to_string()
    } else {
        raw
    };
    model_from_text(&text).map_err(|e| usage(format!("line {}: {}", e.line, e.message)))
}

fn cmd_check_model(cli: &Cli, file: &str, texts: &[String]) -> Outcome {
    let logic = logic(cli)?;
    let model = read_model(file)?;
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let (fs, _) = formulas(&refs)?;
    let report = check_conditions(&model, logic);
    let kind_ok = model.kind == logic.mode();
    let mut ok = report.satisfied() && kind_ok;
    let structured = cli.format == Format::Structured;
    if !structured {
        println!("{} worlds, {:?} model, checked against {logic}", model.worlds, model.kind);
        if !kind_ok {
            println!("model kind does not match {logic}");
        }
    }
    for c in &report.checks {
        let status = match (&c.witness, c.required) {
            (None, _) => "holds",
            (Some(_), true) => "FAILS",
            (Some(_), false) => "fails (not required)",
        };
        if structured {
            emit_json(json!({
                "kind": "condition", "condition": c.condition.to_string(), "required": c.required,
                "holds": c.witness.is_none(), "witness": c.witness,
            }));
        } else {
            match &c.witness {
                Some(w) => {
                    let sets: Vec<String> = [w.alpha, w.beta].into_iter().flatten().map(world_set).collect();
                    println!("{:<3} {status}  at world {} {}", c.condition.to_string(), w.world, sets.join(" "));
                }
                None => println!("{:<3} {status}", c.condition.to_string()),
            }
        }
    }
    for f in &fs {
        let refuted: Vec<usize> = (0..model.worlds).filter(|&w| !model.forces(w, f)).collect();
        ok &= refuted.is_empty();
        if structured {
            emit_json(json!({ "kind": "validity", "formula": f.to_string(), "valid": refuted.is_empty(), "refuting_worlds": refuted }));
        } else if refuted.is_empty() {
            println!("valid: {f}");
        } else {
            println!("not valid: {f} (refuted at {refuted:?})");
        }
    }
    if structured {
        emit_json(json!({ "kind": "summary", "ok": ok }));
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn world_set(s: u64) -> String {
    let ws: Vec<String> = (0..64).filter(|w| s >> w & 1 == 1).map(|w: u32| w.to_string()).collect();
    format!("{{{}}}", ws.join(","))
}

fn cmd_selftest(cli: &Cli) -> Outcome {
    let logics = match &cli.logic {
        Some(_) => vec![logic(cli)?],
        None => LogicId::all(),
    };
    let sections = [
        ("axiom matrix", suites::full_matrix(&logics)),
        ("catalogue", logics.iter().flat_map(|&l| suites::catalogue_cells(l)).collect()),
        ("non-theorems", suites::negative_cells().into_iter().filter(|c| logics.contains(&c.logic)).collect()),
    ];
    let (mut total, mut bad) = (0, 0);
    for (section, cells) in &sections {
        if cli.format == Format::Text {
            println!("# {section}");
        }
        for c in cells {
            total += 1;
            bad += usize::from(!c.ok());
            if cli.format == Format::Structured {
                let got = match &c.got {
                    Ok(v) => json!(v.to_string()),
                    Err(e) => json!(format!("error: {e}")),
                };
                emit_json(json!({
                    "kind": "cell", "section": section, "logic": c.logic.to_string(), "schema": c.schema,
                    "formula": c.formula.to_string(), "expected": c.expected.to_string(), "got": got, "ok": c.ok(),
                }));
            } else {
                println!("{c}");
            }
        }
    }
    if cli.format == Format::Structured {
        emit_json(json!({ "kind": "summary", "cells": total, "mismatches": bad }));
    } else {
        println!("{total} cells, {bad} mismatches");
    }
    Ok(if bad == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_fuzz(cli: &Cli, count: usize, only: &[Suite], fault: Option<Fault>) -> Outcome {
    let logics = match &cli.logic {
        Some(_) => vec![logic(cli)?],
        None => LogicId::all(),
    };
    let seed = cli.seed.unwrap_or_else(|| {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
    });
    let structured = cli.format == Format::Structured;
    if structured {
        emit_json(json!({ "kind": "fuzz_start", "seed": seed, "count": count }));
    } else {
        println!("seed {seed}");
    }
    let enabled = |s: Suite| only.is_empty() || only.contains(&s);
    let mut cfg = RandomModelConfig::new(cli.max_worlds.max(1));
    cfg.skip_n_repair = fault == Some(Fault::SkipNRepair);

    let mut reports: Vec<(u64, SuiteReport)> = Vec::new();
    for (k, &l) in logics.iter().enumerate() {
        let s = seed.wrapping_add(k as u64);
        if enabled(Suite::Soundness) {
            reports.push((s, suites::soundness(l, count * 10, s, &cfg)));
        }
        if enabled(Suite::Admissibility) {
            for r in suites::admissibility(l, count, 6, s) {
                reports.push((s, r));
            }
        }
        if l.is_constructive() && enabled(Suite::Disjunction) {
            reports.push((s, suites::disjunction_property(l, count, 6, s)));
        }
        if l.is_constructive() && enabled(Suite::Interpolation) {
            reports.push((s, suites::interpolation_contract(l, count, 6, s)));
        }
    }
    if enabled(Suite::Hereditariness) {
        reports.push((seed, suites::hereditariness(count * 5, seed)));
    }

    let mut violations = 0;
    for (s, r) in &reports {
        violations += r.failures.len();
        if structured {
            emit_json(json!({ "kind": "suite", "name": r.name, "seed": s, "checks": r.checks, "failures": r.failures }));
        } else {
            println!("{r}");
            for f in &r.failures {
                println!("  [seed {s}] {f}");
            }
        }
    }
    if structured {
        emit_json(json!({ "kind": "summary", "seed": seed, "violations": violations }));
    } else {
        println!("{violations} violations");
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}
