//! Multiset sequents and their set projections.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{parse_with, Formula, ParseError, SymbolTable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    /// At most one formula in the succedent.
    Constructive,
}

/// `Γ ⇒ Δ` over finite multisets. Order of the vectors is irrelevant for
/// equality, see [`Sequent::same_multisets`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
    pub mode: Mode,
}

/// Duplicate-free projection of a sequent, used for loop checking and
/// failure memoization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequentKey {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SequentError {
    #[error("constructive sequents take at most one succedent formula, found {0}")]
    SuccedentTooLarge(usize),
    #[error("in antecedent formula {index}: {source}")]
    Antecedent { index: usize, source: ParseError },
    #[error("in succedent formula {index}: {source}")]
    Succedent { index: usize, source: ParseError },
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>, mode: Mode) -> Result<Sequent, SequentError> {
        if mode == Mode::Constructive && succedent.len() > 1 {
            return Err(SequentError::SuccedentTooLarge(succedent.len()));
        }
        Ok(Sequent { antecedent, succedent, mode })
    }

    /// `Γ ⇒ A`.
    pub fn single(antecedent: Vec<Formula>, goal: Formula, mode: Mode) -> Sequent {
        Sequent { antecedent, succedent: vec![goal], mode }
    }

    /// `⇒ A`.
    pub fn theorem(goal: Formula, mode: Mode) -> Sequent {
        Sequent::single(Vec::new(), goal, mode)
    }

    pub fn is_well_formed(&self) -> bool {
        self.mode == Mode::Classical || self.succedent.len() <= 1
    }

    pub fn key(&self) -> SequentKey {
        key_of(self)
    }

    /// Multiset equality on both sides.
    pub fn same_multisets(&self, other: &Sequent) -> bool {
        self.mode == other.mode
            && multiset_eq(&self.antecedent, &other.antecedent)
            && multiset_eq(&self.succedent, &other.succedent)
    }

    /// Copy with both sides sorted canonically.
    pub fn canonical(&self) -> Sequent {
        let mut s = self.clone();
        s.antecedent.sort();
        s.succedent.sort();
        s
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }

    /// Parses `A1, A2 |- B`, `A1 |-`, `|- B`. Without a turnstile the text is a
    /// single formula to be proved from no assumptions.
    pub fn parse(text: &str, mode: Mode, table: &mut SymbolTable) -> Result<Sequent, SequentError> {
        let (left, right) = match split_turnstile(text) {
            Some((l, r)) => (l, r),
            None => ("", text),
        };
        let parse_side = |side: &str, table: &mut SymbolTable, ant: bool| -> Result<Vec<Formula>, SequentError> {
            if side.trim().is_empty() {
                return Ok(Vec::new());
            }
            side.split(',')
                .enumerate()
                .map(|(index, piece)| {
                    parse_with(piece, table).map_err(|source| {
                        if ant {
                            SequentError::Antecedent { index, source }
                        } else {
                            SequentError::Succedent { index, source }
                        }
                    })
                })
                .collect()
        };
        let antecedent = parse_side(left, table, true)?;
        let succedent = parse_side(right, table, false)?;
        Sequent::new(antecedent, succedent, mode)
    }
}

fn split_turnstile(text: &str) -> Option<(&str, &str)> {
    for t in ["|-", "⊢", "=>", "⇒"] {
        if let Some(i) = text.find(t) {
            return Some((&text[..i], &text[i + t.len()..]));
        }
    }
    None
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Formula]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let (a, s) = (join(&self.antecedent), join(&self.succedent));
        match (a.is_empty(), s.is_empty()) {
            (true, true) => f.write_str("|-"),
            (true, false) => write!(f, "|- {s}"),
            (false, true) => write!(f, "{a} |-"),
            (false, false) => write!(f, "{a} |- {s}"),
        }
    }
}

/// `∧Γ → ∨Δ`, or `∨Δ` when `Γ` is empty, with `∨∅ = ⊥`. Both folds are
/// left-associative over the canonical order.
pub fn interpret(s: &Sequent) -> Formula {
    let fold = |v: &[Formula], op: fn(Formula, Formula) -> Formula| -> Option<Formula> {
        let mut sorted = v.to_vec();
        sorted.sort();
        sorted.into_iter().reduce(op)
    };
    let right = fold(&s.succedent, Formula::or).unwrap_or(Formula::Bottom);
    match fold(&s.antecedent, Formula::and) {
        Some(left) => Formula::imp(left, right),
        None => right,
    }
}

pub fn key_of(s: &Sequent) -> SequentKey {
    SequentKey { antecedent: sorted_set(&s.antecedent), succedent: sorted_set(&s.succedent) }
}

fn sorted_set(v: &[Formula]) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Multiset helpers shared by the calculi and the prover.

pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<&Formula> = a.iter().collect();
    let mut y: Vec<&Formula> = b.iter().collect();
    x.sort();
    y.sort();
    x == y
}

/// `a ⊆ b` as multisets.
pub fn multiset_subset(a: &[Formula], b: &[Formula]) -> bool {
    let mut pool: Vec<&Formula> = b.iter().collect();
    for f in a {
        match pool.iter().position(|g| *g == f) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Removes one occurrence of `f`; `None` if absent.
pub fn remove_one(v: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let i = v.iter().position(|g| g == f)?;
    let mut out = v.to_vec();
    out.remove(i);
    Some(out)
}

/// `v` without the element at `index`.
pub fn without(v: &[Formula], index: usize) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.remove(index);
    out
}
