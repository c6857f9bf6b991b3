//! Modal formulas: representation, parsing, rendering and the syntactic
//! measures used by the calculi and by interpolation.
//!
//! The derived connectives are not part of the tree. `top`, `~A` and
//! `A <-> B` are expanded while parsing into `bot -> bot`, `A -> bot` and
//! `(A -> B) & (B -> A)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A propositional bimodal formula.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    /// Propositional variable `p<k>`, `k >= 1`.
    Atom(u32),
    Bottom,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
}

/// An element of `var(A)`: either `bot` or an atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Bottom,
    Atom(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Bottom => f.write_str("bot"),
            Var::Atom(i) => write!(f, "p{i}"),
        }
    }
}

impl Formula {
    pub fn atom(index: u32) -> Formula {
        assert!(index >= 1, "atom indices start at 1");
        Formula::Atom(index)
    }

    pub fn bot() -> Formula {
        Formula::Bottom
    }

    pub fn top() -> Formula {
        Formula::imp(Formula::Bottom, Formula::Bottom)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bottom)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Arc::new(a))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Imp(a, b) if **a == Formula::Bottom && **b == Formula::Bottom)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Body of a `[]A` formula.
    pub fn box_body(&self) -> Option<&Formula> {
        match self {
            Formula::Box(a) => Some(a),
            _ => None,
        }
    }

    /// Body of a `<>A` formula.
    pub fn dia_body(&self) -> Option<&Formula> {
        match self {
            Formula::Dia(a) => Some(a),
            _ => None,
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bottom => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![a, b],
            Formula::Box(a) | Formula::Dia(a) => vec![a],
        }
    }

    /// Number of binary connectives and modalities.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.complexity() + b.complexity()
            }
            Formula::Box(a) | Formula::Dia(a) => 1 + a.complexity(),
        }
    }

    /// Number of nodes of the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::Box(a) | Formula::Dia(a) => 1 + a.modal_depth(),
        }
    }

    /// `var(A)`: always contains `bot`, plus every atom of the formula.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::from([Var::Bottom]);
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(i) => {
                out.insert(Var::Atom(*i));
            }
            Formula::Bottom => {}
            _ => {
                for c in self.children() {
                    c.collect_atoms(out);
                }
            }
        }
    }

    /// Atom indices occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<u32> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Atom(i) => Some(i),
                Var::Bottom => None,
            })
            .collect()
    }

    /// The smallest set containing the formula and closed under immediate
    /// subformulas.
    pub fn subformula_closure(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Formula::Atom(_) => 0,
            Formula::Bottom => 1,
            Formula::And(..) => 2,
            Formula::Or(..) => 3,
            Formula::Imp(..) => 4,
            Formula::Box(_) => 5,
            Formula::Dia(_) => 6,
        }
    }

    fn structural_cmp(&self, other: &Formula) -> Ordering {
        use Formula::*;
        match (self, other) {
            (Atom(a), Atom(b)) => a.cmp(b),
            (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
                a1.structural_cmp(a2).then_with(|| b1.structural_cmp(b2))
            }
            (Box(a), Box(b)) | (Dia(a), Dia(b)) => a.structural_cmp(b),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

/// Canonical total order: by complexity, then structurally.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        self.complexity()
            .cmp(&other.complexity())
            .then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `var(Γ)` for a multiset of formulas.
pub fn vars_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Var> {
    let mut out = BTreeSet::from([Var::Bottom]);
    for f in fs {
        f.collect_atoms(&mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Rendering

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Bottom => PREC_ATOM,
        _ if f.is_top() => PREC_ATOM,
        Formula::Imp(_, b) if **b == Formula::Bottom => PREC_UNARY,
        Formula::Box(_) | Formula::Dia(_) => PREC_UNARY,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Imp(..) => PREC_IMP,
    }
}

fn write_at(out: &mut String, f: &Formula, min_prec: u8) {
    if precedence(f) < min_prec {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    use std::fmt::Write;
    match f {
        Formula::Atom(i) => {
            let _ = write!(out, "p{i}");
        }
        Formula::Bottom => out.push_str("bot"),
        _ if f.is_top() => out.push_str("top"),
        Formula::Imp(a, b) if **b == Formula::Bottom => {
            out.push('~');
            write_at(out, a, PREC_UNARY);
        }
        Formula::Box(a) => {
            out.push_str("[]");
            write_at(out, a, PREC_UNARY);
        }
        Formula::Dia(a) => {
            out.push_str("<>");
            write_at(out, a, PREC_UNARY);
        }
        Formula::And(a, b) => {
            write_at(out, a, PREC_AND);
            out.push_str(" & ");
            write_at(out, b, PREC_UNARY);
        }
        Formula::Or(a, b) => {
            write_at(out, a, PREC_OR);
            out.push_str(" | ");
            write_at(out, b, PREC_AND);
        }
        Formula::Imp(a, b) => {
            write_at(out, a, PREC_OR);
            out.push_str(" -> ");
            write_at(out, b, PREC_IMP);
        }
    }
}

/// ASCII rendering with minimal parentheses.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Bot,
    Top,
    Ident(String),
    Indexed(u32),
    And,
    Or,
    Imp,
    Iff,
    Not,
    Box,
    Dia,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Bot => "'bot'".into(),
            Tok::Top => "'top'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Indexed(i) => format!("'p{i}'"),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Not => "'~'".into(),
            Tok::Box => "'[]'".into(),
            Tok::Dia => "'<>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| ParseError { position, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let rest_starts = |s: &str| {
            let s: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&s)
        };
        let tok = if c.is_whitespace() {
            i += 1;
            continue;
        } else if rest_starts("<->") {
            i += 3;
            Tok::Iff
        } else if rest_starts("->") {
            i += 2;
            Tok::Imp
        } else if rest_starts("[]") {
            i += 2;
            Tok::Box
        } else if rest_starts("<>") {
            i += 2;
            Tok::Dia
        } else {
            i += 1;
            match c {
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '→' => Tok::Imp,
                '↔' => Tok::Iff,
                '~' | '¬' => Tok::Not,
                '□' => Tok::Box,
                '◇' | '◊' => Tok::Dia,
                '⊥' => Tok::Bot,
                '⊤' => Tok::Top,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    match word.as_str() {
                        "bot" => Tok::Bot,
                        "top" => Tok::Top,
                        _ => match indexed_atom(&word) {
                            Some(Ok(k)) => Tok::Indexed(k),
                            Some(Err(m)) => return Err(err(start, m)),
                            None => Tok::Ident(word),
                        },
                    }
                }
                other => return Err(err(start, format!("unexpected character '{other}'"))),
            }
        };
        toks.push((start, tok));
    }
    Ok(toks)
}

/// `p<digits>` names atom `<digits>`; anything else is a free identifier.
fn indexed_atom(word: &str) -> Option<Result<u32, String>> {
    let digits = word.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(match digits.parse::<u32>() {
        Ok(0) => Err("atom indices start at 1 (p0 is not an atom)".into()),
        Ok(k) => Ok(k),
        Err(_) => Err(format!("atom index {digits} out of range")),
    })
}

/// Maps free identifiers to atom indices. Shared between several formulas
/// so that `p` denotes the same atom everywhere in one invocation.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: BTreeMap<String, u32>,
    reserved: BTreeSet<u32>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table that will not hand out any index written explicitly
    /// as `p<k>` in `texts`.
    pub fn reserving<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut table = SymbolTable::new();
        for text in texts {
            if let Ok(toks) = lex(text) {
                for (_, t) in toks {
                    if let Tok::Indexed(k) = t {
                        table.reserved.insert(k);
                    }
                }
            }
        }
        table
    }

    fn index_of(&mut self, name: &str) -> u32 {
        if let Some(&k) = self.names.get(name) {
            return k;
        }
        let used: BTreeSet<u32> = self.names.values().copied().chain(self.reserved.iter().copied()).collect();
        let k = (1..).find(|k| !used.contains(k)).expect("unbounded range");
        self.names.insert(name.to_string(), k);
        k
    }

    /// Identifier assignments, in name order.
    pub fn bindings(&self) -> impl Iterator<Item = (&str, u32)> {
        self.names.iter().map(|(n, k)| (n.as_str(), *k))
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

struct Parser<'t> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    table: &'t mut SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        match self.peek() {
            Some(Tok::Imp) => {
                self.pos += 1;
                let right = self.formula()?;
                Ok(Formula::imp(left, right))
            }
            Some(Tok::Iff) => {
                self.pos += 1;
                let right = self.disjunction()?;
                Ok(Formula::iff(left, right))
            }
            _ => Ok(left),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Dia => Ok(Formula::dia(self.unary()?)),
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Bot => Ok(Formula::Bottom),
            Tok::Top => Ok(Formula::top()),
            Tok::Indexed(k) => Ok(Formula::Atom(k)),
            Tok::Ident(name) => Ok(Formula::Atom(self.table.index_of(&name))),
            Tok::LParen => {
                let inner = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                self.error(format!("expected a formula, found {}", other.describe()))
            }
        }
    }
}

/// Parses with a caller-supplied identifier table.
pub fn parse_with(text: &str, table: &mut SymbolTable) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), table };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        let d = t.describe();
        return p.error(format!("unexpected {d} after complete formula"));
    }
    Ok(f)
}

/// Parses a single formula; bare identifiers get fresh indices in order of
/// first occurrence, avoiding any explicit `p<k>` in the text.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut table = SymbolTable::reserving([text]);
    parse_with(text, &mut table)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
