//! Backward proof search with ancestor loop checking, proof objects and the
//! proof checker.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use crate::calculi::{backward_applications, check_step, LogicId, Principal, RuleId, RuleInstance};
use crate::sequent::{Mode, Sequent, SequentKey};
use crate::syntax::{Formula, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: RuleId,
    pub principal: Vec<Principal>,
    pub children: Vec<Derivation>,
}

impl Derivation {
    /// Longest branch; leaves have height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn instance(&self) -> RuleInstance {
        RuleInstance {
            rule: self.rule,
            conclusion: self.conclusion.clone(),
            premises: self.children.iter().map(|c| c.conclusion.clone()).collect(),
            principal: self.principal.clone(),
        }
    }

    /// Every rule used, in preorder.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut out = vec![self.rule];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }

    /// Preorder list of `(depth, node)`.
    pub fn preorder(&self) -> Vec<(usize, &Derivation)> {
        fn go<'a>(d: &'a Derivation, depth: usize, out: &mut Vec<(usize, &'a Derivation)>) {
            out.push((depth, d));
            for c in &d.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }
}

/// True iff every node of `d` is a correct rule instance of `logic`.
pub fn check(logic: LogicId, d: &Derivation) -> bool {
    check_step(logic, &d.instance()) && d.children.iter().all(|c| check(logic, c))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub loop_hits: u64,
    pub memo_hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveOutcome {
    Proved(Derivation),
    NotDerivable(SearchStats),
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved(_))
    }

    pub fn derivation(self) -> Option<Derivation> {
        match self {
            ProveOutcome::Proved(d) => Some(d),
            ProveOutcome::NotDerivable(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProveError {
    #[error("search budget exhausted after {nodes} nodes")]
    NodeBudget { nodes: u64 },
    #[error("search timed out after {0:?}")]
    Timeout(Duration),
    #[error("sequent mode does not match the logic")]
    ModeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Theorem,
    NonTheorem,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Theorem => "Theorem",
            Verdict::NonTheorem => "NonTheorem",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_nodes: u64,
    pub timeout: Option<Duration>,
    /// Bounds the derivation height. Disables invertible-first application
    /// and loop checking so that every derivation up to the bound is found.
    pub max_height: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_nodes: 1_000_000, timeout: Some(Duration::from_secs(30)), max_height: None }
    }
}

pub fn prove(logic: LogicId, goal: &Sequent) -> Result<ProveOutcome, ProveError> {
    prove_with(logic, goal, &SearchConfig::default())
}

pub fn prove_with(logic: LogicId, goal: &Sequent, config: &SearchConfig) -> Result<ProveOutcome, ProveError> {
    if goal.mode != logic.mode() || !goal.is_well_formed() {
        return Err(ProveError::ModeMismatch);
    }
    let mut s = Search {
        logic,
        config: *config,
        start: Instant::now(),
        stats: SearchStats::default(),
        ancestors: HashMap::new(),
        failed: HashSet::new(),
        bounded_failed: HashSet::new(),
    };
    let result = match config.max_height {
        Some(h) => s.bounded(goal, h)?,
        None => match s.search(goal, 0)? {
            Found::Proved(d) => Some(d),
            Found::Failed(_) => None,
        },
    };
    Ok(match result {
        Some(d) => ProveOutcome::Proved(d),
        None => ProveOutcome::NotDerivable(s.stats),
    })
}

/// `Theorem` iff `⇒ f` is derivable.
pub fn decide(logic: LogicId, f: &Formula) -> Result<Verdict, ProveError> {
    decide_with(logic, f, &SearchConfig::default())
}

pub fn decide_with(logic: LogicId, f: &Formula, config: &SearchConfig) -> Result<Verdict, ProveError> {
    let goal = Sequent::theorem(f.clone(), logic.mode());
    Ok(match prove_with(logic, &goal, config)? {
        ProveOutcome::Proved(_) => Verdict::Theorem,
        ProveOutcome::NotDerivable(_) => Verdict::NonTheorem,
    })
}

/// Deducibility of `f` from finitely many assumptions.
pub fn prove_from(logic: LogicId, assumptions: &[Formula], f: &Formula) -> Result<ProveOutcome, ProveError> {
    let goal = Sequent::single(assumptions.to_vec(), f.clone(), logic.mode());
    prove(logic, &goal)
}

enum Found {
    Proved(Derivation),
    /// Failure that may depend on loop blocking against the ancestor at
    /// this depth; `usize::MAX` when unconditional.
    Failed(usize),
}

struct Search {
    logic: LogicId,
    config: SearchConfig,
    start: Instant,
    stats: SearchStats,
    ancestors: HashMap<SequentKey, usize>,
    failed: HashSet<SequentKey>,
    bounded_failed: HashSet<(Sequent, usize)>,
}

impl Search {
    fn tick(&mut self) -> Result<(), ProveError> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.config.max_nodes {
            return Err(ProveError::NodeBudget { nodes: self.stats.nodes });
        }
        if self.stats.nodes % 1024 == 0 {
            if let Some(t) = self.config.timeout {
                let e = self.start.elapsed();
                if e > t {
                    return Err(ProveError::Timeout(e));
                }
            }
        }
        Ok(())
    }

    fn leaf(inst: RuleInstance) -> Derivation {
        Derivation { conclusion: inst.conclusion, rule: inst.rule, principal: inst.principal, children: vec![] }
    }

    fn search(&mut self, goal: &Sequent, depth: usize) -> Result<Found, ProveError> {
        self.tick()?;
        let key = goal.key();
        if self.failed.contains(&key) {
            self.stats.memo_hits += 1;
            return Ok(Found::Failed(usize::MAX));
        }
        let apps = backward_applications(self.logic, goal);
        if let Some(inst) = apps.iter().find(|i| i.premises.is_empty()) {
            return Ok(Found::Proved(Self::leaf(inst.clone())));
        }
        self.ancestors.insert(key.clone(), depth);
        let result = self.expand(goal, apps, depth);
        self.ancestors.remove(&key);
        let result = result?;
        if let Found::Failed(dep) = result {
            if dep >= depth {
                self.failed.insert(key);
                return Ok(Found::Failed(usize::MAX));
            }
        }
        Ok(result)
    }

    fn expand(&mut self, goal: &Sequent, apps: Vec<RuleInstance>, depth: usize) -> Result<Found, ProveError> {
        let mode = goal.mode;
        // An invertible step whose premise repeats an ancestor is skipped;
        // the goal then falls back to full branching.
        let invertible = apps.iter().position(|i| {
            self.eagerly_invertible(mode, goal, i) && i.premises.iter().all(|p| !self.ancestors.contains_key(&p.key()))
        });
        let candidates: Vec<RuleInstance> = match invertible {
            Some(k) => vec![apps[k].clone()],
            None => apps,
        };
        let mut dep = usize::MAX;
        'instances: for inst in candidates {
            let mut children = Vec::with_capacity(inst.premises.len());
            for p in &inst.premises {
                if let Some(&d) = self.ancestors.get(&p.key()) {
                    self.stats.loop_hits += 1;
                    dep = dep.min(d);
                    continue 'instances;
                }
            }
            for p in &inst.premises {
                match self.search(p, depth + 1)? {
                    Found::Proved(d) => children.push(d),
                    Found::Failed(d) => {
                        dep = dep.min(d);
                        continue 'instances;
                    }
                }
            }
            return Ok(Found::Proved(Derivation {
                conclusion: inst.conclusion,
                rule: inst.rule,
                principal: inst.principal,
                children,
            }));
        }
        Ok(Found::Failed(dep))
    }

    /// Invertible rules applied without backtracking. The reflexivity rules
    /// qualify only when they add a formula not already present.
    fn eagerly_invertible(&self, mode: Mode, goal: &Sequent, inst: &RuleInstance) -> bool {
        if !inst.rule.is_invertible(mode) {
            return false;
        }
        match inst.rule {
            RuleId::TBox | RuleId::ITBox => {
                let body = goal.antecedent[inst.principal[0].index].box_body().unwrap();
                !goal.antecedent.contains(body)
            }
            RuleId::TDia => {
                let body = goal.succedent[inst.principal[0].index].dia_body().unwrap();
                !goal.succedent.contains(body)
            }
            _ => true,
        }
    }

    /// Exhaustive search for a derivation of height at most `h`.
    fn bounded(&mut self, goal: &Sequent, h: usize) -> Result<Option<Derivation>, ProveError> {
        self.tick()?;
        let memo = (goal.canonical(), h);
        if self.bounded_failed.contains(&memo) {
            self.stats.memo_hits += 1;
            return Ok(None);
        }
        let apps = backward_applications(self.logic, goal);
        if let Some(inst) = apps.iter().find(|i| i.premises.is_empty()) {
            return Ok(Some(Self::leaf(inst.clone())));
        }
        if h > 0 {
            'instances: for inst in apps {
                let mut children = Vec::new();
                for p in &inst.premises {
                    match self.bounded(p, h - 1)? {
                        Some(d) => children.push(d),
                        None => continue 'instances,
                    }
                }
                return Ok(Some(Derivation {
                    conclusion: inst.conclusion,
                    rule: inst.rule,
                    principal: inst.principal,
                    children,
                }));
            }
        }
        self.bounded_failed.insert(memo);
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Text serialization
//
// proof 1
// logic WK
// 0 iK[] s0 | []p1 |- []p1
// 1 init a0,s0 | p1 |- p1

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("proof text line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

pub fn proof_to_text(logic: LogicId, d: &Derivation) -> String {
    let mut out = format!("proof 1\nlogic {logic}\n");
    for (depth, node) in d.preorder() {
        let pr = if node.principal.is_empty() {
            "-".to_string()
        } else {
            node.principal.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        };
        out.push_str(&format!("{depth} {} {pr} | {}\n", node.rule, node.conclusion));
    }
    out
}

pub fn proof_from_text(text: &str) -> Result<(LogicId, Derivation), ProofParseError> {
    let err = |line: usize, message: String| ProofParseError { line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == "proof 1" => {}
        _ => return Err(err(1, "expected header 'proof 1'".into())),
    }
    let logic: LogicId = match lines.next() {
        Some((n, l)) => l
            .trim()
            .strip_prefix("logic ")
            .ok_or_else(|| err(n + 1, "expected 'logic <NAME>'".into()))?
            .trim()
            .parse()
            .map_err(|e: crate::calculi::UnknownLogic| err(n + 1, e.to_string()))?,
        None => return Err(err(2, "missing logic line".into())),
    };
    let body: Vec<(usize, &str)> = lines.collect();
    let mut table = SymbolTable::reserving(body.iter().map(|(_, l)| *l));
    let mut nodes: Vec<(usize, Derivation)> = Vec::new();
    for (n, line) in &body {
        let n = n + 1;
        let (head, seq) = line.split_once(" | ").ok_or_else(|| err(n, "missing ' | ' separator".into()))?;
        let mut parts = head.split_whitespace();
        let depth: usize = parts
            .next()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| err(n, "bad depth".into()))?;
        let rule: RuleId = parts
            .next()
            .ok_or_else(|| err(n, "missing rule".into()))?
            .parse()
            .map_err(|e: crate::calculi::UnknownRule| err(n, e.to_string()))?;
        let principal = match parts.next() {
            Some("-") | None => Vec::new(),
            Some(p) => p.split(',').map(|x| x.parse()).collect::<Result<Vec<Principal>, _>>().map_err(|e| err(n, e))?,
        };
        let conclusion = Sequent::parse(seq, logic.mode(), &mut table).map_err(|e| err(n, e.to_string()))?;
        nodes.push((depth, Derivation { conclusion, rule, principal, children: vec![] }));
    }
    // Rebuild the tree from preorder depths.
    let mut stack: Vec<(usize, Derivation)> = Vec::new();
    for (depth, node) in nodes {
        if stack.is_empty() && depth != 0 || !stack.is_empty() && depth > stack.last().unwrap().0 + 1 {
            return Err(err(0, format!("inconsistent depth {depth}")));
        }
        while stack.len() > 1 && stack.last().unwrap().0 >= depth {
            let (_, child) = stack.pop().unwrap();
            stack.last_mut().unwrap().1.children.push(child);
        }
        if stack.len() == 1 && depth == 0 {
            return Err(err(0, "more than one root".into()));
        }
        stack.push((depth, node));
    }
    while stack.len() > 1 {
        let (_, child) = stack.pop().unwrap();
        stack.last_mut().unwrap().1.children.push(child);
    }
    let (_, root) = stack.pop().ok_or_else(|| err(0, "empty proof".into()))?;
    Ok((logic, root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn logic(n: &str) -> LogicId {
        n.parse().unwrap()
    }

    fn f(t: &str) -> Formula {
        parse(t).unwrap()
    }

    fn verdict(l: &str, t: &str) -> Verdict {
        decide(logic(l), &f(t)).unwrap()
    }

    #[test]
    fn decide_examples() {
        assert_eq!(verdict("WK", "[](p1 -> p2) -> ([]p1 -> []p2)"), Verdict::Theorem);
        assert_eq!(verdict("WMC", "<>(p1 | p2) -> <>p1 | <>p2"), Verdict::NonTheorem);
        assert_eq!(verdict("WM", "~([]p1 & <>~p1)"), Verdict::Theorem);
        assert_eq!(verdict("WK", "p1 | ~p1"), Verdict::NonTheorem);
        assert_eq!(verdict("K", "[]p1 | <>~p1"), Verdict::Theorem);
        assert_eq!(verdict("WMN", "[]top"), Verdict::Theorem);
        assert_eq!(verdict("WMN", "~<>bot"), Verdict::Theorem);
        assert_eq!(verdict("WM", "[]p1 & []p2 -> [](p1 & p2)"), Verdict::NonTheorem);
    }

    #[test]
    fn proofs_check() {
        for (l, t) in [
            ("WK", "[](p1 -> p2) -> ([]p1 -> []p2)"),
            ("WMT", "[]p1 -> p1"),
            ("WMT", "p1 -> <>p1"),
            ("KT", "[]p1 | <>~p1 | p2"),
            ("WMCD", "[]p1 -> <>p1"),
        ] {
            let d = prove(logic(l), &Sequent::theorem(f(t), logic(l).mode())).unwrap().derivation().expect(t);
            assert!(check(logic(l), &d), "{l} {t}");
        }
    }

    #[test]
    fn prove_from_examples() {
        let wk = logic("WK");
        assert!(prove_from(logic("WM"), &[f("p1")], &f("p1")).unwrap().is_proved());
        let d = prove_from(wk, &[f("[]p1"), f("[](p1 -> p2)")], &f("[]p2")).unwrap().derivation().unwrap();
        assert!(check(wk, &d));
        assert!(prove_from(logic("WM"), &[f("p1 | ~p1")], &f("p1 | ~p1")).unwrap().is_proved());
    }

    #[test]
    fn hand_written_t_box_derivation() {
        // []p ⇒ p by iT□ then init; then R→.
        let m = Mode::Constructive;
        let p = f("p1");
        let bp = f("[]p1");
        let init = Derivation {
            conclusion: Sequent::single(vec![bp.clone(), p.clone()], p.clone(), m),
            rule: RuleId::Init,
            principal: vec![Principal::ant(1), Principal::succ(0)],
            children: vec![],
        };
        let t = Derivation {
            conclusion: Sequent::single(vec![bp.clone()], p.clone(), m),
            rule: RuleId::ITBox,
            principal: vec![Principal::ant(0)],
            children: vec![init],
        };
        let d = Derivation {
            conclusion: Sequent::theorem(f("[]p1 -> p1"), m),
            rule: RuleId::RImp,
            principal: vec![Principal::succ(0)],
            children: vec![t],
        };
        assert_eq!(d.height(), 2);
        assert!(check(logic("WMT"), &d));
        assert!(!check(logic("WM"), &d));
    }

    #[test]
    fn node_budget_is_an_error() {
        let cfg = SearchConfig { max_nodes: 3, ..SearchConfig::default() };
        let r = decide_with(logic("WK"), &f("[](p1 -> p2) -> ([]p1 -> []p2)"), &cfg);
        assert!(matches!(r, Err(ProveError::NodeBudget { .. })));
    }

    #[test]
    fn height_bounded_search() {
        let wk = logic("WK");
        let goal = Sequent::theorem(f("[](p1 -> p2) -> ([]p1 -> []p2)"), Mode::Constructive);
        let d = prove(wk, &goal).unwrap().derivation().unwrap();
        let h = d.height();
        let at = |h| SearchConfig { max_height: Some(h), ..SearchConfig::default() };
        assert!(prove_with(wk, &goal, &at(h)).unwrap().is_proved());
        assert!(!prove_with(wk, &goal, &at(h - 1)).unwrap().is_proved() || h == 0);
    }

    #[test]
    fn text_round_trip() {
        let l = logic("WKT");
        let goal = Sequent::theorem(f("[](p1 -> p2) & []p1 -> p2 & <>p1"), Mode::Constructive);
        let d = prove(l, &goal).unwrap().derivation().unwrap();
        let text = proof_to_text(l, &d);
        let (l2, d2) = proof_from_text(&text).unwrap();
        assert_eq!(l2, l);
        assert_eq!(d2, d);
        assert!(proof_from_text("proof 1\nlogic WK\n1 init - | p1 |- p1\n").is_err());
    }
}
