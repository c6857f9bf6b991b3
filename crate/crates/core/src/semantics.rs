//! Finite neighbourhood models, classical and constructive.
//!
//! Worlds are `0..n` with `n ≤ 64`; a set of worlds is a `u64` bitmask.
//! A classical model is stored with the identity order, under which the
//! constructive forcing clauses reduce to the classical ones.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculi::{Features, LogicId};
use crate::sequent::Mode;
use crate::syntax::Formula;

pub type WorldSet = u64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub kind: Mode,
    pub worlds: usize,
    /// `up[w]` is the set of `v` with `w ≤ v`.
    pub up: Vec<WorldSet>,
    pub neighbourhoods: Vec<Vec<WorldSet>>,
    /// Atoms not listed are false everywhere.
    pub valuation: BTreeMap<u32, WorldSet>,
}

fn full(n: usize) -> WorldSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bit(w: usize) -> WorldSet {
    1u64 << w
}

fn members(s: WorldSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

impl Model {
    /// One world, no neighbourhoods, empty valuation.
    pub fn single(kind: Mode) -> Model {
        Model { kind, worlds: 1, up: vec![1], neighbourhoods: vec![vec![]], valuation: BTreeMap::new() }
    }

    pub fn all_worlds(&self) -> WorldSet {
        full(self.worlds)
    }

    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.up[w] >> v & 1 == 1
    }

    /// Reflexive and transitive order, identity for classical models,
    /// hereditary valuation, neighbourhoods inside `W`.
    pub fn is_well_formed(&self) -> bool {
        let n = self.worlds;
        if n == 0 || n > 64 || self.up.len() != n || self.neighbourhoods.len() != n {
            return false;
        }
        let all = self.all_worlds();
        for w in 0..n {
            if self.up[w] & !all != 0 || self.up[w] & bit(w) == 0 {
                return false;
            }
            if self.kind == Mode::Classical && self.up[w] != bit(w) {
                return false;
            }
            for v in members(self.up[w]) {
                if self.up[v] & !self.up[w] != 0 {
                    return false;
                }
            }
            if self.neighbourhoods[w].iter().any(|a| a & !all != 0) {
                return false;
            }
        }
        self.valuation.values().all(|&s| s & !all == 0 && members(s).all(|w| self.up[w] & !s == 0))
    }

    /// `[f]`, the set of worlds forcing `f`.
    pub fn truth_set(&self, f: &Formula) -> WorldSet {
        let mut memo = HashMap::new();
        self.truth_memo(f, &mut memo)
    }

    fn truth_memo(&self, f: &Formula, memo: &mut HashMap<Formula, WorldSet>) -> WorldSet {
        if let Some(&s) = memo.get(f) {
            return s;
        }
        let all = self.all_worlds();
        let s = match f {
            Formula::Atom(k) => self.valuation.get(k).copied().unwrap_or(0),
            Formula::Bottom => 0,
            Formula::And(a, b) => self.truth_memo(a, memo) & self.truth_memo(b, memo),
            Formula::Or(a, b) => self.truth_memo(a, memo) | self.truth_memo(b, memo),
            Formula::Imp(a, b) => {
                let (x, y) = (self.truth_memo(a, memo), self.truth_memo(b, memo));
                let holds = (!x | y) & all;
                self.box_of(holds)
            }
            Formula::Box(a) => {
                let x = self.truth_memo(a, memo);
                let local = self.local(|ns| ns.iter().any(|&al| al & !x == 0));
                self.box_of(local)
            }
            Formula::Dia(a) => {
                let x = self.truth_memo(a, memo);
                let local = self.local(|ns| ns.iter().all(|&al| al & x != 0));
                self.box_of(local)
            }
        };
        memo.insert(f.clone(), s);
        s
    }

    fn local(&self, pred: impl Fn(&[WorldSet]) -> bool) -> WorldSet {
        (0..self.worlds).filter(|&v| pred(&self.neighbourhoods[v])).fold(0, |s, v| s | bit(v))
    }

    /// Worlds all of whose successors lie in `s`.
    fn box_of(&self, s: WorldSet) -> WorldSet {
        (0..self.worlds).filter(|&w| self.up[w] & !s == 0).fold(0, |acc, w| acc | bit(w))
    }

    pub fn forces(&self, world: usize, f: &Formula) -> bool {
        self.truth_set(f) >> world & 1 == 1
    }

    pub fn valid(&self, f: &Formula) -> bool {
        self.truth_set(f) == self.all_worlds()
    }
}

pub fn forces(model: &Model, world: usize, f: &Formula) -> bool {
    model.forces(world, f)
}

pub fn valid_in_model(model: &Model, f: &Formula) -> bool {
    model.valid(f)
}

// ---------------------------------------------------------------------------
// Conditions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    C,
    N,
    D,
    P,
    T,
}

impl Condition {
    pub const ALL: [Condition; 5] = [Condition::C, Condition::N, Condition::D, Condition::P, Condition::T];

    pub fn required_by(self, f: Features) -> bool {
        match self {
            Condition::C => f.c,
            Condition::N => f.n,
            Condition::D => f.d,
            Condition::P => f.p,
            Condition::T => f.t,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C => "C",
            Condition::N => "N",
            Condition::D => "D",
            Condition::P => "P",
            Condition::T => "T",
        };
        f.write_str(s)
    }
}

/// A world and up to two of its neighbourhoods at which a condition fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub world: usize,
    pub alpha: Option<WorldSet>,
    pub beta: Option<WorldSet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub required: bool,
    /// `None` when the condition holds.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    /// All conditions required by the logic hold.
    pub fn satisfied(&self) -> bool {
        self.checks.iter().all(|c| !c.required || c.witness.is_none())
    }

    pub fn holds(&self, cond: Condition) -> bool {
        self.checks.iter().any(|c| c.condition == cond && c.witness.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| c.required && c.witness.is_some())
    }
}

/// First counterexample to `cond` in the model.
pub fn condition_witness(model: &Model, cond: Condition) -> Option<Witness> {
    for w in 0..model.worlds {
        let ns = &model.neighbourhoods[w];
        let at = |alpha: Option<WorldSet>, beta: Option<WorldSet>| Some(Witness { world: w, alpha, beta });
        match cond {
            Condition::N if ns.is_empty() => return at(None, None),
            Condition::P => {
                if ns.contains(&0) {
                    return at(Some(0), None);
                }
            }
            Condition::T => {
                if let Some(&a) = ns.iter().find(|&&a| a & bit(w) == 0) {
                    return at(Some(a), None);
                }
            }
            Condition::C | Condition::D => {
                for &a in ns {
                    for &b in ns {
                        let bad = match cond {
                            Condition::C => !ns.contains(&(a & b)),
                            _ => a & b == 0,
                        };
                        if bad {
                            return at(Some(a), Some(b));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    None
}

pub fn check_conditions(model: &Model, logic: LogicId) -> ConditionReport {
    let f = logic.features();
    let checks = Condition::ALL
        .iter()
        .map(|&c| ConditionCheck { condition: c, required: c.required_by(f), witness: condition_witness(model, c) })
        .collect();
    ConditionReport { checks }
}

/// A model of the right kind for `logic`, well formed and meeting its conditions.
pub fn is_model_for(model: &Model, logic: LogicId) -> bool {
    model.kind == logic.mode() && model.is_well_formed() && check_conditions(model, logic).satisfied()
}

// ---------------------------------------------------------------------------
// Random models

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomModelConfig {
    pub max_worlds: usize,
    /// Atoms `p1..pk` receive a valuation.
    pub atoms: u32,
    /// Fault injection: skip adding a neighbourhood when (N) requires one.
    pub skip_n_repair: bool,
    pub max_attempts: usize,
}

impl RandomModelConfig {
    pub fn new(max_worlds: usize) -> RandomModelConfig {
        RandomModelConfig { max_worlds, atoms: 3, skip_n_repair: false, max_attempts: 1000 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("no model for {logic} found after {attempts} attempts")]
    ResampleBudget { logic: LogicId, attempts: usize },
    #[error("max_worlds must be between 1 and 64")]
    BadWorldCount,
}

pub fn random_model(logic: LogicId, max_worlds: usize, seed: u64) -> Result<Model, SemanticsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model_with(logic, &RandomModelConfig::new(max_worlds), &mut rng)
}

pub fn random_model_with(logic: LogicId, cfg: &RandomModelConfig, rng: &mut impl Rng) -> Result<Model, SemanticsError> {
    if cfg.max_worlds == 0 || cfg.max_worlds > 64 {
        return Err(SemanticsError::BadWorldCount);
    }
    let feats = logic.features();
    for _ in 0..cfg.max_attempts {
        let n = rng.gen_range(1..=cfg.max_worlds);
        let all = full(n);
        let mut up: Vec<WorldSet> = (0..n).map(bit).collect();
        if logic.mode() == Mode::Constructive {
            let density = rng.gen_range(0.0..0.6);
            for (w, row) in up.iter_mut().enumerate() {
                for v in 0..n {
                    if v != w && rng.gen_bool(density) {
                        *row |= bit(v);
                    }
                }
            }
            // reflexive-transitive closure
            loop {
                let mut changed = false;
                for w in 0..n {
                    let mut reach = up[w];
                    for v in members(up[w]) {
                        reach |= up[v];
                    }
                    if reach != up[w] {
                        up[w] = reach;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let random_set = |rng: &mut dyn rand::RngCore| rng.gen::<u64>() & all;
        let mut neighbourhoods = Vec::with_capacity(n);
        for w in 0..n {
            let k = rng.gen_range(0..=3);
            // With (D) required, most families share a common world.
            let core = if feats.d && rng.gen_bool(0.8) { bit(rng.gen_range(0..n)) } else { 0 };
            let mut ns: Vec<WorldSet> = (0..k).map(|_| random_set(rng) | core).collect();
            if feats.n && ns.is_empty() && !cfg.skip_n_repair {
                ns.push(random_set(rng) | core | if feats.d || feats.p { bit(rng.gen_range(0..n)) } else { 0 });
            }
            if feats.t {
                for a in ns.iter_mut() {
                    *a |= bit(w);
                }
            }
            if feats.c {
                loop {
                    let mut extra = Vec::new();
                    for &a in &ns {
                        for &b in &ns {
                            if !ns.contains(&(a & b)) && !extra.contains(&(a & b)) {
                                extra.push(a & b);
                            }
                        }
                    }
                    if extra.is_empty() {
                        break;
                    }
                    ns.extend(extra);
                }
            }
            ns.sort_unstable();
            ns.dedup();
            neighbourhoods.push(ns);
        }
        let mut valuation = BTreeMap::new();
        for k in 1..=cfg.atoms {
            let seedset = random_set(rng);
            let closed = members(seedset).fold(0, |s, w| s | up[w]);
            valuation.insert(k, closed);
        }
        let m = Model { kind: logic.mode(), worlds: n, up, neighbourhoods, valuation };
        let violated = |c: Condition| c.required_by(feats) && condition_witness(&m, c).is_some();
        if violated(Condition::D) || violated(Condition::P) {
            continue;
        }
        return Ok(m);
    }
    Err(SemanticsError::ResampleBudget { logic, attempts: cfg.max_attempts })
}

// ---------------------------------------------------------------------------
// Countermodel search
//
// For a fixed order and valuation, the truth set of every subformula is
// determined once we fix, for each modal subformula m and world v, the
// "local" value of m at v (for □B: some α ∈ N(v) lies inside [B]; for ◇B:
// every α ∈ N(v) meets [B]). The search guesses these local values, modal
// subformula by modal subformula, and keeps a guess only when every world
// can realise its local values with a neighbourhood family meeting the
// logic's conditions. Realisability is decided exactly: a realising family
// can always be shrunk to one witness per existential demand (closed under
// intersection when (C) is required).

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub model: Model,
    pub world: usize,
}

/// One local constraint: the value of `□B` or `◇B` at a world, with `[B]`.
#[derive(Clone, Copy, Debug)]
struct Local {
    is_box: bool,
    body: WorldSet,
    value: bool,
}

impl Local {
    /// Constraint every neighbourhood must meet.
    fn universal_ok(&self, a: WorldSet) -> bool {
        match (self.is_box, self.value) {
            (true, false) => a & !self.body != 0,
            (false, true) => a & self.body != 0,
            _ => true,
        }
    }

    /// Demand met by a single neighbourhood, if the constraint is existential.
    fn existential(&self) -> Option<Box<dyn Fn(WorldSet) -> bool>> {
        let body = self.body;
        match (self.is_box, self.value) {
            (true, true) => Some(Box::new(move |a| a & !body == 0)),
            (false, false) => Some(Box::new(move |a| a & body == 0)),
            _ => None,
        }
    }
}

fn close_under_intersection(fam: &mut Vec<WorldSet>) {
    loop {
        let mut extra = Vec::new();
        for &a in fam.iter() {
            for &b in fam.iter() {
                let c = a & b;
                if !fam.contains(&c) && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return;
        }
        fam.extend(extra);
    }
}

/// A neighbourhood family for world `w` meeting `constraints` and the
/// conditions in `feats`, if one exists.
fn realise(n: usize, w: usize, constraints: &[Local], feats: Features) -> Option<Vec<WorldSet>> {
    let good = |a: WorldSet| -> bool {
        constraints.iter().all(|c| c.universal_ok(a))
            && (!feats.t || a & bit(w) != 0)
            && (!(feats.p || feats.d) || a != 0)
    };
    let goods: Vec<WorldSet> = (0..=full(n)).filter(|&a| good(a)).collect();
    let demands: Vec<Box<dyn Fn(WorldSet) -> bool>> = constraints.iter().filter_map(|c| c.existential()).collect();
    let options: Vec<Vec<WorldSet>> = demands.iter().map(|d| goods.iter().copied().filter(|&a| d(a)).collect()).collect();
    if options.iter().any(|o| o.is_empty()) {
        return None;
    }
    if demands.is_empty() {
        return if feats.n {
            goods.first().map(|&a| vec![a])
        } else {
            Some(vec![])
        };
    }
    let mut choice = vec![0usize; options.len()];
    loop {
        let mut fam: Vec<WorldSet> = choice.iter().enumerate().map(|(i, &k)| options[i][k]).collect();
        fam.sort_unstable();
        fam.dedup();
        if feats.c {
            close_under_intersection(&mut fam);
        }
        let ok = fam.iter().all(|&a| good(a)) && (!feats.d || fam.iter().all(|&a| fam.iter().all(|&b| a & b != 0)));
        if ok {
            fam.sort_unstable();
            return Some(fam);
        }
        // next choice
        let mut i = 0;
        loop {
            if i == choice.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All preorders on `n` worlds up to isomorphism, as up-set vectors.
fn preorders(n: usize) -> Vec<Vec<WorldSet>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut up: Vec<WorldSet> = (0..n).map(bit).collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[a] |= bit(b);
            }
        }
        let transitive = (0..n).all(|a| members(up[a]).all(|b| up[b] & !up[a] == 0));
        if !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut img = vec![0u64; n];
                for a in 0..n {
                    img[p[a]] = members(up[a]).fold(0, |s, b| s | bit(p[b]));
                }
                img
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(up);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn up_sets(n: usize, up: &[WorldSet]) -> Vec<WorldSet> {
    (0..=full(n)).filter(|&s| members(s).all(|w| up[w] & !s == 0)).collect()
}

struct Enumerator<'a> {
    n: usize,
    up: &'a [WorldSet],
    feats: Features,
    subs: &'a [Formula],
    index: &'a HashMap<Formula, usize>,
    truth: Vec<WorldSet>,
    locals: Vec<Vec<Local>>,
    families: Vec<Vec<WorldSet>>,
}

impl Enumerator<'_> {
    fn box_of(&self, s: WorldSet) -> WorldSet {
        (0..self.n).filter(|&w| self.up[w] & !s == 0).fold(0, |acc, w| acc | bit(w))
    }

    /// Extends the guess from subformula `i` on; true once the last
    /// subformula is fixed and refuted somewhere.
    fn search(&mut self, i: usize) -> bool {
        if i == self.subs.len() {
            return self.truth[i - 1] != full(self.n);
        }
        let f = &self.subs[i];
        let t = |g: &Formula| self.truth[self.index[g]];
        let all = full(self.n);
        let (is_box, body) = match f {
            Formula::Atom(_) | Formula::Bottom => return self.search(i + 1),
            Formula::And(a, b) => {
                self.truth[i] = t(a) & t(b);
                return self.search(i + 1);
            }
            Formula::Or(a, b) => {
                self.truth[i] = t(a) | t(b);
                return self.search(i + 1);
            }
            Formula::Imp(a, b) => {
                self.truth[i] = self.box_of((!t(a) | t(b)) & all);
                return self.search(i + 1);
            }
            Formula::Box(a) => (true, t(a)),
            Formula::Dia(a) => (false, t(a)),
        };
        for local in 0..=all {
            let saved = self.families.clone();
            let mut ok = true;
            for w in 0..self.n {
                self.locals[w].push(Local { is_box, body, value: local >> w & 1 == 1 });
                if ok {
                    match realise(self.n, w, &self.locals[w], self.feats) {
                        Some(fam) => self.families[w] = fam,
                        None => ok = false,
                    }
                }
            }
            if ok {
                self.truth[i] = self.box_of(local);
                if self.search(i + 1) {
                    return true;
                }
            }
            for w in 0..self.n {
                self.locals[w].pop();
            }
            self.families = saved;
        }
        false
    }
}

/// Exhaustive search for a model of `logic` with at most `max_worlds`
/// worlds refuting `f` at some world. Only atoms of `f` are valued.
pub fn enumerate_countermodel(logic: LogicId, f: &Formula, max_worlds: usize) -> Option<Countermodel> {
    let subs: Vec<Formula> = f.subformula_closure().into_iter().collect();
    let index: HashMap<Formula, usize> = subs.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let atoms: Vec<u32> = f.atoms().into_iter().collect();
    let feats = logic.features();
    let constructive = logic.mode() == Mode::Constructive;
    for n in 1..=max_worlds.min(6) {
        let orders = if constructive { preorders(n) } else { vec![(0..n).map(bit).collect()] };
        for up in &orders {
            let ups = if constructive { up_sets(n, up) } else { (0..=full(n)).collect() };
            let mut choice = vec![0usize; atoms.len()];
            loop {
                let mut truth = vec![0; subs.len()];
                for (k, &a) in atoms.iter().enumerate() {
                    truth[index[&Formula::Atom(a)]] = ups[choice[k]];
                }
                let mut e = Enumerator {
                    n,
                    up,
                    feats,
                    subs: &subs,
                    index: &index,
                    truth,
                    locals: vec![Vec::new(); n],
                    families: vec![Vec::new(); n],
                };
                // worlds must be realisable even with no modal constraints
                let base_ok = (0..n).all(|w| match realise(n, w, &[], feats) {
                    Some(fam) => {
                        e.families[w] = fam;
                        true
                    }
                    None => false,
                });
                if base_ok && e.search(0) {
                    let refuted = e.truth[subs.len() - 1];
                    let world = (0..n).find(|&w| refuted >> w & 1 == 0).unwrap();
                    let valuation = atoms.iter().enumerate().map(|(k, &a)| (a, ups[choice[k]])).collect();
                    let model = Model {
                        kind: logic.mode(),
                        worlds: n,
                        up: up.clone(),
                        neighbourhoods: e.families,
                        valuation,
                    };
                    debug_assert!(is_model_for(&model, logic) && !model.forces(world, f));
                    if is_model_for(&model, logic) && !model.forces(world, f) {
                        return Some(Countermodel { model, world });
                    }
                }
                let mut k = 0;
                loop {
                    if k == choice.len() {
                        break;
                    }
                    choice[k] += 1;
                    if choice[k] < ups.len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Text format
//
// model 1
// kind constructive
// worlds 2
// order 0 1
// neighbourhoods 0: {0,1} {}
// neighbourhoods 1:
// valuation p1: {1}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("model text line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

fn set_text(s: WorldSet) -> String {
    let inner: Vec<String> = members(s).map(|w| w.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn model_to_text(m: &Model) -> String {
    let mut out = String::from("model 1\n");
    let kind = match m.kind {
        Mode::Classical => "classical",
        Mode::Constructive => "constructive",
    };
    out.push_str(&format!("kind {kind}\nworlds {}\n", m.worlds));
    for w in 0..m.worlds {
        for v in members(m.up[w]) {
            if v != w {
                out.push_str(&format!("order {w} {v}\n"));
            }
        }
    }
    for w in 0..m.worlds {
        let sets: Vec<String> = m.neighbourhoods[w].iter().map(|&a| set_text(a)).collect();
        if sets.is_empty() {
            out.push_str(&format!("neighbourhoods {w}:\n"));
        } else {
            out.push_str(&format!("neighbourhoods {w}: {}\n", sets.join(" ")));
        }
    }
    for (k, s) in &m.valuation {
        out.push_str(&format!("valuation p{k}: {}\n", set_text(*s)));
    }
    out
}

fn parse_set(text: &str, n: usize) -> Result<WorldSet, String> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected a world set, found '{text}'"))?;
    let mut s = 0;
    for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
        let w: usize = part.trim().parse().map_err(|_| format!("bad world '{part}'"))?;
        if w >= n {
            return Err(format!("world {w} out of range"));
        }
        s |= bit(w);
    }
    Ok(s)
}

pub fn model_from_text(text: &str) -> Result<Model, ModelParseError> {
    let err = |line: usize, message: String| ModelParseError { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("missing {what}")));
    let (ln, header) = next("header")?;
    if header != "model 1" {
        return Err(err(ln, "expected header 'model 1'".into()));
    }
    let (ln, kind) = next("kind")?;
    let kind = match kind {
        "kind classical" => Mode::Classical,
        "kind constructive" => Mode::Constructive,
        _ => return Err(err(ln, "expected 'kind classical' or 'kind constructive'".into())),
    };
    let (ln, worlds) = next("worlds")?;
    let n: usize = worlds
        .strip_prefix("worlds ")
        .and_then(|t| t.trim().parse().ok())
        .filter(|&n| (1..=64).contains(&n))
        .ok_or_else(|| err(ln, "expected 'worlds <1..64>'".into()))?;
    let mut m = Model { kind, worlds: n, up: (0..n).map(bit).collect(), neighbourhoods: vec![Vec::new(); n], valuation: BTreeMap::new() };
    let mut seen_neigh = vec![false; n];
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("order ") {
            let ws: Vec<usize> = rest.split_whitespace().map(|t| t.parse()).collect::<Result<_, _>>().map_err(|_| err(ln, "bad order pair".into()))?;
            match ws[..] {
                [a, b] if a < n && b < n => m.up[a] |= bit(b),
                _ => return Err(err(ln, "bad order pair".into())),
            }
        } else if let Some(rest) = line.strip_prefix("neighbourhoods ") {
            let (w, sets) = rest.split_once(':').ok_or_else(|| err(ln, "expected 'neighbourhoods w: ...'".into()))?;
            let w: usize = w.trim().parse().ok().filter(|&w| w < n).ok_or_else(|| err(ln, "bad world".into()))?;
            if seen_neigh[w] {
                return Err(err(ln, format!("neighbourhoods of world {w} listed twice")));
            }
            seen_neigh[w] = true;
            m.neighbourhoods[w] = sets.split_whitespace().map(|s| parse_set(s, n)).collect::<Result<_, _>>().map_err(|e| err(ln, e))?;
        } else if let Some(rest) = line.strip_prefix("valuation p") {
            let (k, set) = rest.split_once(':').ok_or_else(|| err(ln, "expected 'valuation pK: {...}'".into()))?;
            let k: u32 = k.trim().parse().ok().filter(|&k| k >= 1).ok_or_else(|| err(ln, "bad atom index".into()))?;
            let s = parse_set(set.trim(), n).map_err(|e| err(ln, e))?;
            if m.valuation.insert(k, s).is_some() {
                return Err(err(ln, format!("atom p{k} valued twice")));
            }
        } else {
            return Err(err(ln, format!("unrecognised line '{line}'")));
        }
    }
    if !m.is_well_formed() {
        return Err(err(0, "order is not a preorder, valuation is not hereditary, or a classical model has an order".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(t: &str) -> Formula {
        parse(t).unwrap()
    }

    fn logic(n: &str) -> LogicId {
        n.parse().unwrap()
    }

    #[test]
    fn forcing_examples() {
        for kind in [Mode::Classical, Mode::Constructive] {
            let empty = Model::single(kind);
            assert!(empty.forces(0, &f("<>bot")));
            assert!(!empty.forces(0, &f("[]top")));
            assert!(!empty.valid(&f("~<>bot")));
            assert!(empty.valid(&f("top")));
            let mut m = Model::single(kind);
            m.neighbourhoods[0] = vec![1];
            m.valuation.insert(1, 1);
            assert!(m.forces(0, &f("[]p1")));
        }
    }

    #[test]
    fn condition_examples() {
        let m = Model::single(Mode::Constructive);
        let r = check_conditions(&m, logic("WMN"));
        assert!(!r.satisfied());
        assert_eq!(r.failures().next().unwrap().witness.unwrap().world, 0);

        let mut m = Model {
            kind: Mode::Classical,
            worlds: 2,
            up: vec![1, 2],
            neighbourhoods: vec![vec![1, 2], vec![]],
            valuation: BTreeMap::new(),
        };
        assert!(condition_witness(&m, Condition::C).is_some());
        assert!(condition_witness(&m, Condition::D).is_some());
        m.neighbourhoods = vec![vec![1, 3], vec![2]];
        assert!(condition_witness(&m, Condition::T).is_none());
    }

    #[test]
    fn random_models_meet_conditions() {
        for l in LogicId::all() {
            for seed in 0..40 {
                let m = random_model(l, 4, seed).unwrap();
                assert!(is_model_for(&m, l), "{l} seed {seed}: {m:?}");
            }
        }
        assert_eq!(random_model(logic("WM"), 1, 9).unwrap().worlds, 1);
    }

    #[test]
    fn countermodel_examples() {
        let c = enumerate_countermodel(logic("WM"), &f("~<>bot"), 1).unwrap();
        assert_eq!(c.model.worlds, 1);
        assert!(c.model.neighbourhoods[0].is_empty());
        let c = enumerate_countermodel(logic("WK"), &f("<>(p1 | p2) -> <>p1 | <>p2"), 3).unwrap();
        assert!(is_model_for(&c.model, logic("WK")));
        assert!(enumerate_countermodel(logic("WK"), &f("[](p1 -> p2) -> ([]p1 -> []p2)"), 3).is_none());
        assert!(enumerate_countermodel(logic("WK"), &f("p1 | ~p1"), 2).is_some());
        assert!(enumerate_countermodel(logic("K"), &f("p1 | ~p1"), 3).is_none());
    }

    #[test]
    fn text_round_trip() {
        for seed in 0..30 {
            let m = random_model(logic(if seed % 2 == 0 { "WKT" } else { "MCD" }), 5, seed).unwrap();
            let t = model_to_text(&m);
            let back = model_from_text(&t).unwrap();
            assert_eq!(back, m);
            assert_eq!(model_to_text(&back), t);
        }
        assert!(model_from_text("model 1\nkind classical\nworlds 2\norder 0 1\n").is_err());
    }
}
