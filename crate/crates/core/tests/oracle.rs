//! Cross-check of the prover against a naive height-bounded prover written
//! directly from the rule schemata. The oracle works on sets, enumerates
//! every subset of a boxed context, never prunes and applies no rule
//! priority.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wlogic::calculi::LogicId;
use wlogic::prover::{check, prove, ProveOutcome};
use wlogic::sequent::{Mode, Sequent};
use wlogic::syntax::Formula;

type Set = BTreeSet<Formula>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Seq(Set, Set);

fn rule_names(logic: &str) -> Vec<&'static str> {
    let (w, base) = match logic.strip_prefix('W') {
        Some(b) => (true, b),
        None => (false, logic),
    };
    let v: &[&str] = if w {
        match base {
            "M" => &["iM[]", "iM<>", "idual&M"],
            "MN" => &["iM[]", "iM<>", "idual&M", "iN[]", "iN<>"],
            "MC" => &["iC[]", "iC<>", "idual&C"],
            "K" => &["iK[]", "iK<>", "idual&K"],
            "MP" => &["iM[]", "iM<>", "idual&M", "iP[]", "iP<>"],
            "MNP" => &["iM[]", "iM<>", "idual&M", "iN[]", "iN<>", "iP[]", "iP<>"],
            "MD" => &["iM[]", "iM<>", "idual&M", "iD", "iD[]", "iP[]", "iP<>"],
            "MND" => &["iM[]", "iM<>", "idual&M", "iN[]", "iN<>", "iD", "iD[]", "iP[]", "iP<>"],
            "MCD" => &["iC[]", "iC<>", "idual&C", "iCD", "iCD[]"],
            "KD" => &["iK[]", "iK<>", "idual&K", "iCD", "iCD[]"],
            "MT" => &["iM[]", "iM<>", "idual&M", "iT[]", "iT<>"],
            "MNT" => &["iM[]", "iM<>", "idual&M", "iN[]", "iN<>", "iT[]", "iT<>"],
            "MCT" => &["iC[]", "iC<>", "idual&C", "iT[]", "iT<>"],
            "KT" => &["iK[]", "iK<>", "idual&K", "iT[]", "iT<>"],
            _ => unreachable!(),
        }
    } else {
        match base {
            "M" => &["M[]", "M<>", "dual&M", "dual|M"],
            "MN" => &["M[]", "M<>", "dual&M", "dual|M", "N[]", "N<>"],
            "MC" => &["C[]", "C<>", "dual&C", "dual|C"],
            "K" => &["K[]", "K<>"],
            "MP" => &["M[]", "M<>", "dual&M", "dual|M", "P[]", "P<>"],
            "MNP" => &["M[]", "M<>", "dual&M", "dual|M", "N[]", "N<>", "P[]", "P<>"],
            "MD" => &["M[]", "M<>", "dual&M", "dual|M", "D", "D[]", "D<>", "P[]", "P<>"],
            "MND" => &["M[]", "M<>", "dual&M", "dual|M", "N[]", "N<>", "D", "D[]", "D<>", "P[]", "P<>"],
            "MCD" => &["C[]", "C<>", "dual&C", "dual|C", "CD"],
            "KD" => &["K[]", "K<>", "CD"],
            "MT" => &["M[]", "M<>", "dual&M", "dual|M", "T[]", "T<>"],
            "MNT" => &["M[]", "M<>", "dual&M", "dual|M", "N[]", "N<>", "T[]", "T<>"],
            "MCT" => &["C[]", "C<>", "dual&C", "dual|C", "T[]", "T<>"],
            "KT" => &["K[]", "K<>", "T[]", "T<>"],
            _ => unreachable!(),
        }
    };
    v.to_vec()
}

fn set<I: IntoIterator<Item = Formula>>(i: I) -> Set {
    i.into_iter().collect()
}

fn subsets(v: &[Formula]) -> Vec<Set> {
    (0..1u32 << v.len())
        .map(|m| set((0..v.len()).filter(|i| m >> i & 1 == 1).map(|i| v[i].clone())))
        .collect()
}

fn boxes(s: &Set) -> Vec<Formula> {
    s.iter().filter_map(|f| f.box_body().cloned()).collect()
}

fn dias(s: &Set) -> Vec<Formula> {
    s.iter().filter_map(|f| f.dia_body().cloned()).collect()
}

fn plus(s: &Set, fs: &[Formula]) -> Set {
    let mut s = s.clone();
    s.extend(fs.iter().cloned());
    s
}

struct Oracle {
    classical: bool,
    rules: Vec<&'static str>,
    memo: HashMap<(Seq, usize), bool>,
}

impl Oracle {
    fn new(logic: &str) -> Oracle {
        Oracle { classical: !logic.starts_with('W'), rules: rule_names(logic), memo: HashMap::new() }
    }

    /// All premise lists of rule instances concluding `s`.
    fn instances(&self, s: &Seq) -> Vec<Vec<Seq>> {
        use Formula as F;
        let (g, d) = (&s.0, &s.1);
        let mut out: Vec<Vec<Seq>> = Vec::new();
        let c = self.classical;
        let sq = |a: Set, b: Set| Seq(a, b);
        for f in g {
            match f {
                F::And(a, b) => out.push(vec![sq(plus(g, &[(**a).clone(), (**b).clone()]), d.clone())]),
                F::Or(a, b) => out.push(vec![sq(plus(g, &[(**a).clone()]), d.clone()), sq(plus(g, &[(**b).clone()]), d.clone())]),
                F::Imp(a, b) => {
                    let left = if c { sq(g.clone(), plus(d, &[(**a).clone()])) } else { sq(g.clone(), set([(**a).clone()])) };
                    out.push(vec![left, sq(plus(g, &[(**b).clone()]), d.clone())]);
                }
                _ => {}
            }
        }
        for f in d {
            let rest = || {
                if c {
                    let mut r = d.clone();
                    r.remove(f);
                    r
                } else {
                    Set::new()
                }
            };
            match f {
                F::And(a, b) => out.push(vec![sq(g.clone(), plus(&rest(), &[(**a).clone()])), sq(g.clone(), plus(&rest(), &[(**b).clone()]))]),
                F::Or(a, b) if c => out.push(vec![sq(g.clone(), plus(&rest(), &[(**a).clone(), (**b).clone()]))]),
                F::Or(a, b) => {
                    out.push(vec![sq(g.clone(), set([(**a).clone()]))]);
                    out.push(vec![sq(g.clone(), set([(**b).clone()]))]);
                }
                F::Imp(a, b) => out.push(vec![sq(plus(g, &[(**a).clone()]), plus(&rest(), &[(**b).clone()]))]),
                _ => {}
            }
        }
        let gb = boxes(g);
        let gd = dias(g);
        let db = boxes(d);
        let dd = dias(d);
        let bsubs = subsets(&gb);
        let dsubs = subsets(&dd);
        let one = |f: &Formula| set([f.clone()]);
        let two = |a: &Formula, b: &Formula| set([a.clone(), b.clone()]);
        for r in &self.rules {
            match *r {
                "iM[]" | "M[]" => {
                    for a in &gb {
                        for b in &db {
                            out.push(vec![sq(one(a), one(b))]);
                        }
                    }
                }
                "iM<>" | "M<>" => {
                    for a in &gd {
                        for b in &dd {
                            out.push(vec![sq(one(a), one(b))]);
                        }
                    }
                }
                "iD" | "D" => {
                    for a in &gb {
                        for b in &dd {
                            out.push(vec![sq(one(a), one(b))]);
                        }
                    }
                }
                "idual&M" | "dual&M" => {
                    for a in &gb {
                        for b in &gd {
                            out.push(vec![sq(two(a, b), Set::new())]);
                        }
                    }
                }
                "dual|M" => {
                    for a in &db {
                        for b in &dd {
                            out.push(vec![sq(Set::new(), two(a, b))]);
                        }
                    }
                }
                "iN[]" | "N[]" => {
                    for a in &db {
                        out.push(vec![sq(Set::new(), one(a))]);
                    }
                }
                "iP<>" | "P<>" => {
                    for a in &dd {
                        out.push(vec![sq(Set::new(), one(a))]);
                    }
                }
                "iN<>" | "N<>" => {
                    for a in &gd {
                        out.push(vec![sq(one(a), Set::new())]);
                    }
                }
                "iP[]" | "P[]" => {
                    for a in &gb {
                        out.push(vec![sq(one(a), Set::new())]);
                    }
                }
                "iD[]" | "D[]" => {
                    for a in &gb {
                        for b in &gb {
                            out.push(vec![sq(two(a, b), Set::new())]);
                        }
                    }
                }
                "D<>" => {
                    for a in &dd {
                        for b in &dd {
                            out.push(vec![sq(Set::new(), two(a, b))]);
                        }
                    }
                }
                "iT[]" | "T[]" => {
                    for a in &gb {
                        out.push(vec![sq(plus(g, &[a.clone()]), d.clone())]);
                    }
                }
                "iT<>" => {
                    for a in &dd {
                        out.push(vec![sq(g.clone(), one(a))]);
                    }
                }
                "T<>" => {
                    for a in &dd {
                        out.push(vec![sq(g.clone(), plus(d, &[a.clone()]))]);
                    }
                }
                "iC[]" | "iK[]" => {
                    for b in &db {
                        for s in &bsubs {
                            if *r == "iK[]" || !s.is_empty() {
                                out.push(vec![sq(s.clone(), one(b))]);
                            }
                        }
                    }
                }
                "iC<>" | "iK<>" => {
                    for a in &gd {
                        for b in &dd {
                            for s in &bsubs {
                                out.push(vec![sq(plus(s, &[a.clone()]), one(b))]);
                            }
                        }
                    }
                }
                "idual&C" | "idual&K" => {
                    for a in &gd {
                        for s in &bsubs {
                            if *r == "idual&K" || !s.is_empty() {
                                out.push(vec![sq(plus(s, &[a.clone()]), Set::new())]);
                            }
                        }
                    }
                }
                "iCD" => {
                    for a in &dd {
                        for s in &bsubs {
                            out.push(vec![sq(s.clone(), one(a))]);
                        }
                    }
                }
                "iCD[]" => {
                    for s in &bsubs {
                        out.push(vec![sq(s.clone(), Set::new())]);
                    }
                }
                "C[]" | "K[]" => {
                    for b in &db {
                        for s in &bsubs {
                            if *r == "K[]" || !s.is_empty() {
                                for t in &dsubs {
                                    out.push(vec![sq(s.clone(), plus(t, &[b.clone()]))]);
                                }
                            }
                        }
                    }
                }
                "C<>" => {
                    for a in &gd {
                        for b in &dd {
                            for s in &bsubs {
                                for t in &dsubs {
                                    out.push(vec![sq(plus(s, &[a.clone()]), plus(t, &[b.clone()]))]);
                                }
                            }
                        }
                    }
                }
                "K<>" => {
                    for a in &gd {
                        for s in &bsubs {
                            for t in &dsubs {
                                out.push(vec![sq(plus(s, &[a.clone()]), t.clone())]);
                            }
                        }
                    }
                }
                "dual&C" => {
                    for b in &gd {
                        for s in &bsubs {
                            if !s.is_empty() {
                                out.push(vec![sq(plus(s, &[b.clone()]), Set::new())]);
                            }
                        }
                    }
                }
                "dual|C" => {
                    for a in &db {
                        for b in &dd {
                            for t in &dsubs {
                                out.push(vec![sq(Set::new(), plus(t, &[a.clone(), b.clone()]))]);
                            }
                        }
                    }
                }
                "CD" => {
                    for s in &bsubs {
                        for t in &dsubs {
                            out.push(vec![sq(s.clone(), t.clone())]);
                        }
                    }
                }
                other => panic!("oracle has no rule {other}"),
            }
        }
        out
    }

    fn axiom(s: &Seq) -> bool {
        s.0.contains(&Formula::Bottom) || s.0.iter().any(|f| f.is_atom() && s.1.contains(f))
    }

    fn provable(&mut self, s: &Seq, h: usize) -> bool {
        if Self::axiom(s) {
            return true;
        }
        if h == 0 {
            return false;
        }
        if let Some(&b) = self.memo.get(&(s.clone(), h)) {
            return b;
        }
        let res = self.instances(s).iter().any(|ps| ps.iter().all(|p| self.provable(p, h - 1)));
        self.memo.insert((s.clone(), h), res);
        res
    }
}

fn random_formula(rng: &mut ChaCha8Rng, size: usize) -> Formula {
    if size <= 1 {
        return match rng.gen_range(0..5) {
            0 => Formula::Bottom,
            1 | 2 => Formula::atom(1),
            _ => Formula::atom(2),
        };
    }
    let choices = if size < 3 { 2 } else { 5 };
    match rng.gen_range(0..choices) {
        0 => Formula::boxed(random_formula(rng, size - 1)),
        1 => Formula::dia(random_formula(rng, size - 1)),
        k => {
            let l = rng.gen_range(1..size - 1);
            let a = random_formula(rng, l);
            let b = random_formula(rng, size - 1 - l);
            match k {
                2 => Formula::and(a, b),
                3 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
    }
}

fn random_sequent(rng: &mut ChaCha8Rng, mode: Mode) -> Sequent {
    let n_ant = rng.gen_range(0..3);
    let n_succ = match mode {
        Mode::Constructive => rng.gen_range(0..2),
        Mode::Classical => rng.gen_range(0..3),
    };
    let gen = |rng: &mut ChaCha8Rng| {
        let size = rng.gen_range(1..6);
        random_formula(rng, size)
    };
    let antecedent = (0..n_ant).map(|_| gen(rng)).collect();
    let succedent = (0..n_succ).map(|_| gen(rng)).collect();
    Sequent { antecedent, succedent, mode }
}

const ORACLE_HEIGHT: usize = 7;

fn cross_check(logic: LogicId, samples: usize, seed: u64) {
    let name = logic.name();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle = Oracle::new(&name);
    let (mut proved, mut refuted) = (0, 0);
    for _ in 0..samples {
        let s = random_sequent(&mut rng, logic.mode());
        let key = Seq(set(s.antecedent.iter().cloned()), set(s.succedent.iter().cloned()));
        match prove(logic, &s).unwrap() {
            ProveOutcome::Proved(d) => {
                assert!(check(logic, &d), "{name}: proof of {s} does not check");
                assert!(oracle.provable(&key, d.height()), "{name}: oracle has no proof of {s} at height {}", d.height());
                proved += 1;
            }
            ProveOutcome::NotDerivable(_) => {
                assert!(!oracle.provable(&key, ORACLE_HEIGHT), "{name}: prover missed a proof of {s}");
                refuted += 1;
            }
        }
    }
    assert!(proved > samples / 20 && refuted > samples / 20, "{name}: degenerate sample {proved}/{refuted}");
}

#[test]
fn constructive_logics_agree_with_oracle() {
    for (k, l) in LogicId::all_constructive().into_iter().enumerate() {
        cross_check(l, 1500, 100 + k as u64);
    }
}

#[test]
fn classical_logics_agree_with_oracle() {
    for (k, l) in LogicId::all_classical().into_iter().enumerate() {
        cross_check(l, 1500, 200 + k as u64);
    }
}
