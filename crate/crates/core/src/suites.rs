//! Property suites shared by the `selftest` and `fuzz` commands and the
//! acceptance tests. Every suite is deterministic given its seed.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculi::{
    hilbert_catalogue, instantiate_axiom, AxiomId, Base, Family, LogicId, SchemaInstance, LATTICE_ARROWS,
};
use crate::interpolation::{craig, interpolate_derivation, Partition};
use crate::prover::{check, decide, prove, prove_with, ProveError, ProveOutcome, SearchConfig, Verdict};
use crate::semantics::{enumerate_countermodel, is_model_for, random_model_with, RandomModelConfig};
use crate::sequent::{Mode, Sequent};
use crate::syntax::Formula;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> SuiteReport {
        SuiteReport { name: name.into(), checks: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checks, {} failures", self.name, self.checks, self.failures.len())
    }
}

// ---------------------------------------------------------------------------
// Formula generation

pub struct Sampler {
    pub rng: ChaCha8Rng,
    pub atoms: u32,
}

impl Sampler {
    pub fn new(seed: u64, atoms: u32) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), atoms }
    }

    /// Random formula of size (node count) between 1 and `max_size`.
    pub fn formula(&mut self, max_size: usize) -> Formula {
        let size = self.rng.gen_range(1..=max_size.max(1));
        self.formula_of_size(size)
    }

    pub fn formula_of_size(&mut self, size: usize) -> Formula {
        if size <= 1 {
            let k = self.rng.gen_range(0..=self.atoms * 3);
            return if k == 0 { Formula::Bottom } else { Formula::atom(1 + (k - 1) % self.atoms) };
        }
        let ops = if size < 3 { 2 } else { 7 };
        match self.rng.gen_range(0..ops) {
            0 => Formula::boxed(self.formula_of_size(size - 1)),
            1 => Formula::dia(self.formula_of_size(size - 1)),
            k => {
                let l = self.rng.gen_range(1..size - 1);
                let a = self.formula_of_size(l);
                let b = self.formula_of_size(size - 1 - l);
                match k {
                    2 | 3 => Formula::imp(a, b),
                    4 | 5 => Formula::and(a, b),
                    _ => Formula::or(a, b),
                }
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}

/// Every formula with at most `max_size` nodes over `p1..pk` and `⊥`.
pub fn all_formulas(max_size: usize, atoms: u32) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut level = Vec::new();
        if size == 1 {
            level.push(Formula::Bottom);
            level.extend((1..=atoms).map(Formula::atom));
        } else {
            for a in &by_size[size - 1] {
                level.push(Formula::boxed(a.clone()));
                level.push(Formula::dia(a.clone()));
            }
            for l in 1..size - 1 {
                for a in &by_size[l] {
                    for b in &by_size[size - 1 - l] {
                        level.push(Formula::and(a.clone(), b.clone()));
                        level.push(Formula::or(a.clone(), b.clone()));
                        level.push(Formula::imp(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

// ---------------------------------------------------------------------------
// Axiom matrices

/// Whether an axiom schema, instantiated at `A = p1`, `B = p2`, is a theorem
/// of `logic`.
pub fn expected_theorem(logic: LogicId, ax: AxiomId) -> bool {
    let f = logic.features();
    let classical = logic.family == Family::Classical;
    match ax {
        AxiomId::DualAnd => true,
        AxiomId::Dual | AxiomId::DualOr => classical,
        AxiomId::CDia => classical && f.c,
        AxiomId::KBox | AxiomId::KDia | AxiomId::CBox => f.c,
        AxiomId::NBox | AxiomId::NDia => f.n,
        AxiomId::PBox | AxiomId::PDia => f.p || f.d || f.t,
        AxiomId::D => f.d || f.t,
        AxiomId::TBox | AxiomId::TDia => f.t,
        _ => unreachable!("rule schemata have no theorem instance"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCell {
    pub logic: LogicId,
    pub schema: String,
    pub formula: Formula,
    pub expected: Verdict,
    pub got: Result<Verdict, ProveError>,
}

impl MatrixCell {
    pub fn ok(&self) -> bool {
        self.got == Ok(self.expected)
    }
}

impl fmt::Display for MatrixCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let got = match &self.got {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let mark = if self.ok() { "ok" } else { "MISMATCH" };
        write!(f, "{:<5} {:<7} expected {:<10} got {:<10} {mark}  {}", self.logic, self.schema, self.expected, got, self.formula)
    }
}

fn cell(logic: LogicId, schema: &str, formula: Formula, expected: bool) -> MatrixCell {
    let got = decide(logic, &formula);
    let expected = if expected { Verdict::Theorem } else { Verdict::NonTheorem };
    MatrixCell { logic, schema: schema.to_string(), formula, expected, got }
}

fn p() -> Formula {
    Formula::atom(1)
}

fn q() -> Formula {
    Formula::atom(2)
}

/// Theorem instances of a rule schema: the premise is chosen to be a
/// theorem, so the conclusion must be one too.
fn rule_instance(ax: AxiomId) -> (Formula, Formula) {
    let (a, b) = match ax {
        AxiomId::Nec => (Formula::imp(p(), p()), q()),
        AxiomId::MonBox | AxiomId::MonDia => (Formula::and(p(), q()), p()),
        AxiomId::RDualAnd => (p(), Formula::not(p())),
        _ => (p(), Formula::or(Formula::not(p()), p())),
    };
    match instantiate_axiom(ax, &a, &b) {
        SchemaInstance::Rule { premise, conclusion } => (premise, conclusion),
        SchemaInstance::Axiom(_) => unreachable!(),
    }
}

/// Each schema of the logic's Hilbert catalogue is derivable: axioms
/// instantiated at `p1, p2`, rules at an instance with a theorem premise
/// (both premise and conclusion are checked).
pub fn catalogue_cells(logic: LogicId) -> Vec<MatrixCell> {
    let mut out = Vec::new();
    for ax in hilbert_catalogue(logic) {
        if ax.is_rule() {
            let (prem, concl) = rule_instance(ax);
            out.push(cell(logic, &format!("{ax}:pre"), prem, true));
            out.push(cell(logic, ax.name(), concl, true));
        } else {
            let f = instantiate_axiom(ax, &p(), &q()).formula().cloned().unwrap();
            out.push(cell(logic, ax.name(), f, true));
        }
    }
    out
}

/// Every axiom and excluded middle against every logic.
pub fn full_matrix(logics: &[LogicId]) -> Vec<MatrixCell> {
    let mut out = Vec::new();
    for &l in logics {
        for ax in AxiomId::AXIOMS {
            let f = instantiate_axiom(ax, &p(), &q()).formula().cloned().unwrap();
            out.push(cell(l, ax.name(), f, expected_theorem(l, ax)));
        }
        out.push(cell(l, "EM", Formula::or(p(), Formula::not(p())), l.family == Family::Classical));
    }
    out
}

/// The fixed non-theorem list and its classical counterparts.
pub fn negative_cells() -> Vec<MatrixCell> {
    let em = Formula::or(p(), Formula::not(p()));
    let dual_or = instantiate_axiom(AxiomId::DualOr, &p(), &q()).formula().cloned().unwrap();
    let c_dia = instantiate_axiom(AxiomId::CDia, &p(), &q()).formula().cloned().unwrap();
    let c_box = instantiate_axiom(AxiomId::CBox, &p(), &q()).formula().cloned().unwrap();
    let mut out = Vec::new();
    for l in LogicId::all_constructive() {
        out.push(cell(l, "EM", em.clone(), false));
        out.push(cell(l, "dual|", dual_or.clone(), false));
    }
    for b in [Base::MC, Base::K] {
        out.push(cell(LogicId::constructive(b), "C<>", c_dia.clone(), false));
    }
    out.push(cell(LogicId::constructive(Base::M), "C[]", c_box.clone(), false));
    for l in LogicId::all_classical() {
        out.push(cell(l, "EM", em.clone(), true));
    }
    out.push(cell(LogicId::classical(Base::K), "dual|", dual_or, true));
    out.push(cell(LogicId::classical(Base::K), "C<>", c_dia, true));
    out.push(cell(LogicId::classical(Base::M), "C[]", c_box, false));
    out
}

// ---------------------------------------------------------------------------
// Sampling theorems and derivable sequents

fn proof_of(logic: LogicId, s: &Sequent) -> Option<crate::prover::Derivation> {
    prove(logic, s).ok().and_then(ProveOutcome::derivation)
}

fn is_theorem(logic: LogicId, f: &Formula) -> bool {
    decide(logic, f) == Ok(Verdict::Theorem)
}

/// Up to `count` distinct theorems: catalogue instances first, then random
/// formulas of size ≤ `max_size` that the prover accepts.
pub fn sample_theorems(logic: LogicId, count: usize, max_size: usize, sampler: &mut Sampler) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for ax in AxiomId::AXIOMS {
        let f = instantiate_axiom(ax, &p(), &q()).formula().cloned().unwrap();
        if expected_theorem(logic, ax) && !out.contains(&f) && is_theorem(logic, &f) {
            out.push(f);
        }
    }
    let mut attempts = 0;
    while out.len() < count && attempts < count * 400 {
        attempts += 1;
        let f = sampler.formula(max_size);
        if matches!(f, Formula::Imp(..) | Formula::Or(..) | Formula::And(..) | Formula::Box(_) | Formula::Dia(_))
            && !out.contains(&f)
            && is_theorem(logic, &f)
        {
            out.push(f);
        }
    }
    out.truncate(count);
    out
}

/// Random sequent over the sampler's atoms; the succedent is often built
/// from antecedent material so that a fair share is derivable.
fn random_sequent(mode: Mode, max_size: usize, s: &mut Sampler) -> Sequent {
    let n_ant = s.rng.gen_range(0..=3);
    let antecedent: Vec<Formula> = (0..n_ant).map(|_| s.formula(max_size)).collect();
    let max_succ = if mode == Mode::Constructive { 1 } else { 2 };
    let n_succ = s.rng.gen_range(0..=max_succ);
    let mut succedent = Vec::new();
    for _ in 0..n_succ {
        let f = if !antecedent.is_empty() && s.coin(0.5) {
            let a = antecedent[s.index(antecedent.len())].clone();
            let mut subs: Vec<Formula> = a.subformula_closure().into_iter().filter(|g| g.size() <= max_size).collect();
            subs.push(a);
            let g = subs[s.index(subs.len())].clone();
            if s.coin(0.3) && g.size() < max_size {
                Formula::or(g, s.formula(max_size.saturating_sub(1).max(1)))
            } else {
                g
            }
        } else {
            s.formula(max_size)
        };
        succedent.push(f);
    }
    Sequent { antecedent, succedent, mode }
}

/// Distinct derivable sequents with their derivations.
pub fn sample_derivable(
    logic: LogicId,
    count: usize,
    max_size: usize,
    sampler: &mut Sampler,
) -> Vec<(Sequent, crate::prover::Derivation)> {
    let mut out: Vec<(Sequent, crate::prover::Derivation)> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let s = random_sequent(logic.mode(), max_size, sampler);
        if out.iter().any(|(t, _)| t == &s) {
            continue;
        }
        if let Some(d) = proof_of(logic, &s) {
            out.push((s, d));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Structural admissibility

fn bounded(h: usize) -> SearchConfig {
    SearchConfig { max_height: Some(h), max_nodes: 2_000_000, ..SearchConfig::default() }
}

/// Weakening (height-preserving), contraction (height-preserving) and cut
/// probes over `count` sampled derivable sequents.
pub fn admissibility(logic: LogicId, count: usize, max_size: usize, seed: u64) -> [SuiteReport; 3] {
    let mut s = Sampler::new(seed, 3);
    let mut weak = SuiteReport::new(format!("weakening {logic}"));
    let mut contr = SuiteReport::new(format!("contraction {logic}"));
    let mut cut = SuiteReport::new(format!("cut {logic}"));
    let samples = sample_derivable(logic, count, max_size, &mut s);
    if samples.len() < count {
        weak.fail(format!("only {} derivable sequents sampled", samples.len()));
    }
    let constructive = logic.mode() == Mode::Constructive;
    for (k, (seq, d)) in samples.iter().enumerate() {
        let h = d.height();

        // left weakening, and right weakening where the succedent has room
        let a = s.formula(max_size);
        let mut w = seq.clone();
        w.antecedent.push(a.clone());
        weak.checks += 1;
        match prove_with(logic, &w, &bounded(h)) {
            Ok(ProveOutcome::Proved(_)) => {}
            other => weak.fail(format!("{logic} #{k}: {w} not derivable within height {h}: {other:?}")),
        }
        if !constructive || seq.succedent.is_empty() {
            let mut w = seq.clone();
            w.succedent.push(a);
            weak.checks += 1;
            match prove_with(logic, &w, &bounded(h)) {
                Ok(ProveOutcome::Proved(_)) => {}
                other => weak.fail(format!("{logic} #{k}: {w} not derivable within height {h}: {other:?}")),
            }
        }

        // contraction: duplicate a formula, derive, contract at that height
        let sides = [(true, !seq.antecedent.is_empty()), (false, !constructive && !seq.succedent.is_empty())];
        for (left, ok) in sides {
            if !ok {
                continue;
            }
            let mut dup = seq.clone();
            let v = if left { &mut dup.antecedent } else { &mut dup.succedent };
            let i = s.rng.gen_range(0..v.len());
            let f = v[i].clone();
            v.push(f);
            contr.checks += 1;
            match prove(logic, &dup) {
                Ok(ProveOutcome::Proved(dd)) => match prove_with(logic, seq, &bounded(dd.height())) {
                    Ok(ProveOutcome::Proved(_)) => {}
                    other => contr.fail(format!("{logic} #{k}: {seq} not derivable within height {} of {dup}: {other:?}", dd.height())),
                },
                other => contr.fail(format!("{logic} #{k}: duplicated sequent {dup} not derivable: {other:?}")),
            }
        }

        // cut on a succedent formula against a derivable sequent using it
        if let Some(cf) = seq.succedent.first().cloned() {
            if let Some(right) = cut_partner(logic, &cf, max_size, &mut s) {
                // Γ ⇒ A, Δ1 and Π, A ⇒ Δ2 give Γ, Π ⇒ Δ1, Δ2
                let mut antecedent = seq.antecedent.clone();
                let mut pi = right.antecedent.clone();
                if let Some(i) = pi.iter().position(|g| *g == cf) {
                    pi.remove(i);
                }
                antecedent.extend(pi);
                let mut succedent = seq.succedent[1..].to_vec();
                succedent.extend(right.succedent.iter().cloned());
                let concl = Sequent { antecedent, succedent, mode: seq.mode };
                cut.checks += 1;
                match prove(logic, &concl) {
                    Ok(ProveOutcome::Proved(_)) => {}
                    other => cut.fail(format!("{logic} #{k}: cut of {cf} from {seq} and {right} gives underivable {concl}: {other:?}")),
                }
            }
        }
    }
    if cut.checks < (count as u64) / 4 {
        cut.fail(format!("only {} cut probes formed", cut.checks));
    }
    [weak, contr, cut]
}

/// A derivable sequent `Γ', A ⇒ Δ'` that is not derivable without `A`.
fn cut_partner(logic: LogicId, a: &Formula, max_size: usize, s: &mut Sampler) -> Option<Sequent> {
    let mode = logic.mode();
    for _ in 0..40 {
        let mut ant = vec![a.clone()];
        if s.coin(0.5) {
            ant.push(s.formula(max_size));
        }
        let mut subs: Vec<Formula> = a.subformula_closure().into_iter().collect();
        subs.extend(ant.iter().skip(1).cloned());
        let succ_f = match s.rng.gen_range(0..4) {
            0 => s.formula(max_size),
            1 => Formula::or(subs[s.index(subs.len())].clone(), s.formula(3)),
            _ => subs[s.index(subs.len())].clone(),
        };
        let mut succ = vec![succ_f];
        if mode == Mode::Classical && s.coin(0.3) {
            succ.push(s.formula(max_size));
        }
        let cand = Sequent { antecedent: ant.clone(), succedent: succ.clone(), mode };
        let without = Sequent { antecedent: ant[1..].to_vec(), succedent: succ, mode };
        if proof_of(logic, &cand).is_some() && proof_of(logic, &without).is_none() {
            return Some(cand);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Disjunction property

pub fn disjunction_property(logic: LogicId, count: usize, max_size: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new(format!("disjunction {logic}"));
    let mut s = Sampler::new(seed, 3);
    let mut found = Vec::new();
    let mut attempts = 0;
    while found.len() < count && attempts < count * 500 {
        attempts += 1;
        let (a, b) = (s.formula(max_size), s.formula(max_size));
        let f = Formula::or(a.clone(), b.clone());
        if !found.contains(&f) && is_theorem(logic, &f) {
            found.push(f);
            r.checks += 1;
            if !is_theorem(logic, &a) && !is_theorem(logic, &b) {
                r.fail(format!("{logic}: {a} | {b} is a theorem but neither disjunct is"));
            }
        }
    }
    if found.len() < count {
        r.fail(format!("{logic}: only {} disjunctive theorems sampled", found.len()));
    }
    r
}

// ---------------------------------------------------------------------------
// Interpolation

/// Random `A → B` theorem candidates; `B` reuses material of `A`.
fn implication_pair(max_size: usize, s: &mut Sampler) -> (Formula, Formula) {
    let a = s.formula(max_size);
    let subs: Vec<Formula> = a.subformula_closure().into_iter().collect();
    let pick = subs[s.index(subs.len())].clone();
    let b = match s.rng.gen_range(0..4) {
        0 => s.formula(max_size),
        1 => Formula::or(pick, s.formula(3)),
        2 => match s.rng.gen_range(0..2) {
            0 => Formula::dia(pick),
            _ => Formula::boxed(pick),
        },
        _ => pick,
    };
    let a = if s.coin(0.3) { Formula::and(a, s.formula(3)) } else { a };
    (a, b)
}

pub fn interpolation_contract(logic: LogicId, count: usize, max_size: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new(format!("interpolation {logic}"));
    let mut s = Sampler::new(seed, 3);
    let mut seen = Vec::new();
    let mut attempts = 0;
    while seen.len() < count && attempts < count * 300 {
        attempts += 1;
        let (a, b) = implication_pair(max_size, &mut s);
        let f = Formula::imp(a.clone(), b.clone());
        if seen.contains(&f) || !is_theorem(logic, &f) {
            continue;
        }
        seen.push(f);
        r.checks += 1;
        match craig(logic, &a, &b) {
            Ok(res) => {
                let c = &res.interpolant;
                let vars_ok = c.vars().is_subset(&a.vars()) && c.vars().is_subset(&b.vars());
                let left_ok = check(logic, &res.left_certificate)
                    && res.left_certificate.conclusion == Sequent::single(vec![a.clone()], c.clone(), Mode::Constructive);
                let right_ok = check(logic, &res.right_certificate)
                    && res.right_certificate.conclusion == Sequent::single(vec![c.clone()], b.clone(), Mode::Constructive);
                if !(vars_ok && left_ok && right_ok) {
                    r.fail(format!("{logic}: {a} -> {b}: interpolant {c} (vars {vars_ok}, left {left_ok}, right {right_ok})"));
                }
            }
            Err(e) => r.fail(format!("{logic}: {a} -> {b}: {e}")),
        }
    }
    if seen.len() < count {
        r.fail(format!("{logic}: only {} implication theorems sampled", seen.len()));
    }
    r
}

/// Interpolation over every split of the antecedent of sampled derivable
/// sequents with at most four antecedent formulas.
pub fn interpolation_partitions(logic: LogicId, count: usize, max_size: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new(format!("interpolation partitions {logic}"));
    let mut s = Sampler::new(seed, 3);
    for (seq, d) in sample_derivable(logic, count, max_size, &mut s) {
        let n = seq.antecedent.len().min(4);
        for mask in 0..(1u64 << n) {
            r.checks += 1;
            let part = Partition::from_mask(&seq.antecedent, mask);
            if let Err(e) = interpolate_derivation(logic, &d, &part) {
                r.fail(format!("{logic}: {seq} split {mask:b}: {e}"));
            }
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Semantics

/// `pairs` (random model, theorem) validity checks.
pub fn soundness(logic: LogicId, pairs: usize, seed: u64, cfg: &RandomModelConfig) -> SuiteReport {
    let mut r = SuiteReport::new(format!("soundness {logic}"));
    let mut s = Sampler::new(seed, cfg.atoms.max(1));
    let theorems = sample_theorems(logic, 150, 7, &mut s);
    if theorems.is_empty() {
        r.fail(format!("{logic}: no theorems sampled"));
        return r;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut i = 0;
    while (r.checks as usize) < pairs {
        let model = match random_model_with(logic, cfg, &mut rng) {
            Ok(m) => m,
            Err(e) => {
                r.fail(format!("{logic}: {e}"));
                return r;
            }
        };
        // several theorems per model
        for _ in 0..4 {
            let f = &theorems[i % theorems.len()];
            i += 1;
            r.checks += 1;
            if !model.valid(f) {
                let w = (0..model.worlds).find(|&w| !model.forces(w, f)).unwrap();
                r.fail(format!(
                    "{logic} seed {seed}: theorem {f} fails at world {w} of\n{}",
                    crate::semantics::model_to_text(&model)
                ));
            }
        }
    }
    r
}

/// Forcing is upward closed along the order, over random constructive models.
pub fn hereditariness(models: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("hereditariness");
    let mut s = Sampler::new(seed, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4e7);
    let logics = LogicId::all_constructive();
    for k in 0..models {
        let logic = logics[k % logics.len()];
        let model = match random_model_with(logic, &RandomModelConfig::new(5), &mut rng) {
            Ok(m) => m,
            Err(e) => {
                r.fail(e.to_string());
                continue;
            }
        };
        for _ in 0..3 {
            let f = s.formula(9);
            let t = model.truth_set(&f);
            for w in 0..model.worlds {
                for v in 0..model.worlds {
                    if model.leq(w, v) {
                        r.checks += 1;
                        if t >> w & 1 == 1 && t >> v & 1 == 0 {
                            r.fail(format!("{f} forced at {w} but not at {v} >= {w} in\n{}", crate::semantics::model_to_text(&model)));
                        }
                    }
                }
            }
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Termination, inclusions, countermodels

/// Decides every formula of size ≤ `max_size` over `atoms` atoms in every
/// listed logic under the default budget.
pub fn termination(logics: &[LogicId], max_size: usize, atoms: u32) -> SuiteReport {
    let mut r = SuiteReport::new(format!("termination size<={max_size}"));
    let formulas = all_formulas(max_size, atoms);
    for &l in logics {
        for f in &formulas {
            r.checks += 1;
            if let Err(e) = decide(l, f) {
                r.fail(format!("{l}: {f}: {e}"));
            }
        }
    }
    r
}

/// Sampled theorems of the source of every lattice arrow are theorems of
/// its target, and constructive theorems are classical theorems.
pub fn inclusions(count: usize, seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("inclusions");
    let pools: Vec<(LogicId, Vec<Formula>)> = LogicId::all()
        .into_iter()
        .enumerate()
        .map(|(k, l)| {
            let mut s = Sampler::new(seed + k as u64, 2);
            (l, sample_theorems(l, count, 7, &mut s))
        })
        .collect();
    let pool = |l: LogicId| &pools.iter().find(|(m, _)| *m == l).unwrap().1;
    let edge = |src: LogicId, dst: LogicId, r: &mut SuiteReport| {
        let thms = pool(src);
        if thms.len() < count {
            r.fail(format!("{src}: only {} theorems sampled", thms.len()));
        }
        for f in thms {
            r.checks += 1;
            if !is_theorem(dst, f) {
                r.fail(format!("{f} is a theorem of {src} but not of {dst}"));
            }
        }
    };
    for family in [Family::Classical, Family::Constructive] {
        for (a, b) in LATTICE_ARROWS {
            edge(LogicId { family, base: a }, LogicId { family, base: b }, &mut r);
        }
    }
    for l in LogicId::all_constructive() {
        edge(l, l.counterpart(), &mut r);
    }
    r
}

/// Countermodels for the negative matrix are verified, and no theorem of it
/// receives one.
pub fn countermodel_cross_check(max_worlds: usize) -> (SuiteReport, usize) {
    let mut r = SuiteReport::new("countermodels");
    let mut found = 0;
    for c in negative_cells() {
        r.checks += 1;
        let witness = enumerate_countermodel(c.logic, &c.formula, max_worlds);
        match (&c.got, witness) {
            (Ok(Verdict::Theorem), Some(w)) => {
                r.fail(format!("{} {}: prover says Theorem but world {} of a model refutes it", c.logic, c.formula, w.world))
            }
            (_, Some(w)) => {
                found += 1;
                if !is_model_for(&w.model, c.logic) || w.model.forces(w.world, &c.formula) {
                    r.fail(format!("{} {}: countermodel does not verify", c.logic, c.formula));
                }
                if c.got != Ok(Verdict::NonTheorem) {
                    r.fail(format!("{} {}: countermodel found but prover says {:?}", c.logic, c.formula, c.got));
                }
            }
            (_, None) => {}
        }
    }
    (r, found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_space_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| all_formulas(n, 2).len()).collect();
        // 3, 6, 39, 186, 1182 formulas of each exact size
        assert_eq!(counts, vec![3, 9, 48, 234, 1416]);
        assert!(all_formulas(4, 2).iter().all(|f| f.size() <= 4));
    }

    #[test]
    fn sampler_respects_size() {
        let mut s = Sampler::new(1, 3);
        for _ in 0..200 {
            let f = s.formula(6);
            assert!(f.size() <= 6 && f.atoms().iter().all(|&a| (1..=3).contains(&a)));
        }
    }

    #[test]
    fn catalogue_rows_are_theorems() {
        for l in [LogicId::constructive(Base::MN), LogicId::constructive(Base::KT), LogicId::classical(Base::MCD)] {
            for c in catalogue_cells(l) {
                assert!(c.ok(), "{c}");
            }
        }
    }
}
