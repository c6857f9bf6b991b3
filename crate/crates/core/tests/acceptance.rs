//! Acceptance gate: ten criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use wlogic::calculi::LogicId;
use wlogic::semantics::RandomModelConfig;
use wlogic::suites::{self, SuiteReport};

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: usize, title: &'static str, limit: Duration, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= limit;
    let detail = if ok && !pass { format!("{detail}; exceeded {limit:?}") } else { detail };
    Outcome { id, title, pass, detail, elapsed }
}

fn summarize(reports: &[SuiteReport]) -> (bool, String) {
    let checks: u64 = reports.iter().map(|r| r.checks).sum();
    let failures: Vec<&String> = reports.iter().flat_map(|r| &r.failures).collect();
    let mut detail = format!("{checks} checks, {} failures", failures.len());
    for f in failures.iter().take(5) {
        detail.push_str("\n      ");
        detail.push_str(f);
    }
    (failures.is_empty(), detail)
}

fn axiom_matrix() -> (bool, String) {
    let cells: Vec<_> = LogicId::all_constructive().into_iter().flat_map(suites::catalogue_cells).collect();
    let bad: Vec<String> = cells.iter().filter(|c| !c.ok()).map(|c| c.to_string()).collect();
    (bad.is_empty(), format!("{} schema instances, {} wrong {}", cells.len(), bad.len(), bad.join("; ")))
}

fn negative_matrix() -> (bool, String) {
    let cells = suites::negative_cells();
    let bad: Vec<String> = cells.iter().filter(|c| !c.ok()).map(|c| c.to_string()).collect();
    (bad.is_empty(), format!("{} cells, {} wrong {}", cells.len(), bad.len(), bad.join("; ")))
}

fn admissibility() -> (bool, String) {
    let reports: Vec<SuiteReport> = LogicId::all()
        .into_iter()
        .enumerate()
        .flat_map(|(k, l)| suites::admissibility(l, 500, 6, 1000 + k as u64))
        .collect();
    summarize(&reports)
}

fn disjunction() -> (bool, String) {
    let reports: Vec<SuiteReport> = LogicId::all_constructive()
        .into_iter()
        .enumerate()
        .map(|(k, l)| suites::disjunction_property(l, 200, 6, 2000 + k as u64))
        .collect();
    summarize(&reports)
}

fn interpolation() -> (bool, String) {
    let reports: Vec<SuiteReport> = LogicId::all_constructive()
        .into_iter()
        .enumerate()
        .map(|(k, l)| suites::interpolation_contract(l, 100, 6, 3000 + k as u64))
        .collect();
    summarize(&reports)
}

fn soundness() -> (bool, String) {
    let cfg = RandomModelConfig::new(4);
    let reports: Vec<SuiteReport> = LogicId::all()
        .into_iter()
        .enumerate()
        .map(|(k, l)| suites::soundness(l, 1000, 4000 + k as u64, &cfg))
        .collect();
    summarize(&reports)
}

fn hereditariness() -> (bool, String) {
    let r = suites::hereditariness(400, 5000);
    let ok = r.passed() && r.checks >= 1000;
    let (_, detail) = summarize(&[r]);
    (ok, detail)
}

fn termination() -> (bool, String) {
    summarize(&[suites::termination(&LogicId::all(), 7, 2)])
}

fn inclusions() -> (bool, String) {
    summarize(&[suites::inclusions(100, 6000)])
}

fn countermodels() -> (bool, String) {
    let (r, found) = suites::countermodel_cross_check(4);
    let (ok, detail) = summarize(&[r]);
    (ok, format!("{found} witnesses; {detail}"))
}

fn main() {
    let secs = Duration::from_secs;
    let outcomes = vec![
        run(1, "axiom matrix", secs(10), axiom_matrix),
        run(2, "negative matrix", secs(30), negative_matrix),
        run(3, "structural admissibility", secs(600), admissibility),
        run(4, "disjunction property", secs(600), disjunction),
        run(5, "interpolation contract", secs(600), interpolation),
        run(6, "soundness fuzz", secs(600), soundness),
        run(7, "hereditariness fuzz", secs(600), hereditariness),
        run(8, "termination", secs(600), termination),
        run(9, "inclusions", secs(600), inclusions),
        run(10, "countermodel cross-check", secs(600), countermodels),
    ];
    for o in &outcomes {
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("{mark} criterion {:>2} {:<26} {:>8.2?}  {}", o.id, o.title, o.elapsed, o.detail);
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
