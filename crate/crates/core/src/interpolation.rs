//! Craig interpolants from derivations of the constructive calculi, by
//! induction on the derivation with the antecedent split into a left and a
//! right part. The succedent always belongs to the right part.

use crate::calculi::{LogicId, RuleId, Side};
use crate::prover::{check, prove, Derivation, ProveError, ProveOutcome};
use crate::sequent::{multiset_eq, remove_one, Mode, Sequent};
use crate::syntax::{vars_of, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

impl Partition {
    pub fn new(left: Vec<Formula>, right: Vec<Formula>) -> Partition {
        Partition { left, right }
    }

    /// Splits `antecedent` by a bitmask over positions (bit set = left).
    pub fn from_mask(antecedent: &[Formula], mask: u64) -> Partition {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, f) in antecedent.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left.push(f.clone());
            } else {
                right.push(f.clone());
            }
        }
        Partition { left, right }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationResult {
    pub interpolant: Formula,
    /// Derivation of `Γ₁ ⇒ C`.
    pub left_certificate: Derivation,
    /// Derivation of `C, Γ₂ ⇒ Δ`.
    pub right_certificate: Derivation,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InterpolationError {
    #[error("interpolation is only available for the constructive logics")]
    NotConstructive,
    #[error("the derivation does not check in {0}")]
    InvalidDerivation(LogicId),
    #[error("the partition does not split the antecedent of the conclusion")]
    BadPartition,
    #[error("{0} is not a theorem")]
    NotATheorem(Formula),
    #[error("certificate for {which} could not be proved: {sequent}")]
    CertificateFailure { which: &'static str, sequent: String },
    #[error("interpolant {0} violates the variable condition")]
    VariableCondition(Formula),
    #[error(transparent)]
    Prove(#[from] ProveError),
}

/// Interpolant for `part.left ; part.right ⇒ Δ`, where `d` derives the
/// conclusion with that antecedent. Certificates are found by proof search.
pub fn interpolate_derivation(
    logic: LogicId,
    d: &Derivation,
    part: &Partition,
) -> Result<InterpolationResult, InterpolationError> {
    interpolate_with(logic, d, part, false)
}

/// As [`interpolate_derivation`], optionally rewriting `⊤`/`⊥` absorptions
/// in the interpolant. A simplified interpolant is kept only if its
/// certificates are found.
pub fn interpolate_with(
    logic: LogicId,
    d: &Derivation,
    part: &Partition,
    simplify_result: bool,
) -> Result<InterpolationResult, InterpolationError> {
    if !logic.is_constructive() {
        return Err(InterpolationError::NotConstructive);
    }
    let both: Vec<Formula> = part.left.iter().chain(part.right.iter()).cloned().collect();
    if !multiset_eq(&both, &d.conclusion.antecedent) {
        return Err(InterpolationError::BadPartition);
    }
    if !check(logic, d) {
        return Err(InterpolationError::InvalidDerivation(logic));
    }
    let raw = extract(d, &part.left, &part.right);
    let delta = d.conclusion.succedent.clone();
    if simplify_result {
        let s = simplify(&raw);
        if s != raw {
            if let Ok(r) = certify(logic, s, part, &delta) {
                return Ok(r);
            }
        }
    }
    certify(logic, raw, part, &delta)
}

/// Interpolant for a theorem `a → b`, from a proof of `a ⇒ b` split as
/// `({a} ; ∅)`.
pub fn craig(logic: LogicId, a: &Formula, b: &Formula) -> Result<InterpolationResult, InterpolationError> {
    craig_with(logic, a, b, false)
}

pub fn craig_with(
    logic: LogicId,
    a: &Formula,
    b: &Formula,
    simplify_result: bool,
) -> Result<InterpolationResult, InterpolationError> {
    if !logic.is_constructive() {
        return Err(InterpolationError::NotConstructive);
    }
    let goal = Sequent::single(vec![a.clone()], b.clone(), Mode::Constructive);
    let d = match prove(logic, &goal)? {
        ProveOutcome::Proved(d) => d,
        ProveOutcome::NotDerivable(_) => return Err(InterpolationError::NotATheorem(Formula::imp(a.clone(), b.clone()))),
    };
    interpolate_with(logic, &d, &Partition::new(vec![a.clone()], vec![]), simplify_result)
}

fn certify(
    logic: LogicId,
    c: Formula,
    part: &Partition,
    delta: &[Formula],
) -> Result<InterpolationResult, InterpolationError> {
    let allowed_left = vars_of(part.left.iter());
    let allowed_right = vars_of(part.right.iter().chain(delta.iter()));
    let vc = c.vars();
    if !vc.is_subset(&allowed_left) || !vc.is_subset(&allowed_right) {
        return Err(InterpolationError::VariableCondition(c));
    }
    let left_goal = Sequent::single(part.left.clone(), c.clone(), Mode::Constructive);
    let mut right_ant = vec![c.clone()];
    right_ant.extend(part.right.iter().cloned());
    let right_goal = Sequent { antecedent: right_ant, succedent: delta.to_vec(), mode: Mode::Constructive };
    let run = |which: &'static str, s: &Sequent| -> Result<Derivation, InterpolationError> {
        match prove(logic, s)? {
            ProveOutcome::Proved(d) => Ok(d),
            ProveOutcome::NotDerivable(_) => Err(InterpolationError::CertificateFailure { which, sequent: s.to_string() }),
        }
    };
    let left_certificate = run("left", &left_goal)?;
    let right_certificate = run("right", &right_goal)?;
    Ok(InterpolationResult { interpolant: c, left_certificate, right_certificate })
}

/// Which part the principal occurrence belongs to; removes it from that part.
fn take(f: &Formula, left: &mut Vec<Formula>, right: &mut Vec<Formula>) -> Side {
    if let Some(l) = remove_one(left, f) {
        *left = l;
        Side::Ant
    } else {
        *right = remove_one(right, f).expect("principal formula in partition");
        Side::Succ
    }
}

/// Splits box bodies used in a premise according to where their boxed
/// formulas sit.
fn split_boxes(bodies: &[Formula], left: &[Formula], right: &[Formula]) -> (Vec<Formula>, Vec<Formula>) {
    let mut lpool: Vec<Formula> = left.iter().filter_map(|f| f.box_body().cloned()).collect();
    let mut rpool: Vec<Formula> = right.iter().filter_map(|f| f.box_body().cloned()).collect();
    let (mut sl, mut sr) = (Vec::new(), Vec::new());
    for b in bodies {
        if let Some(rest) = remove_one(&lpool, b) {
            lpool = rest;
            sl.push(b.clone());
        } else {
            rpool = remove_one(&rpool, b).expect("box body in partition");
            sr.push(b.clone());
        }
    }
    (sl, sr)
}

fn plus(v: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut v = v.to_vec();
    v.push(f.clone());
    v
}

const LEFT: Side = Side::Ant;

/// The interpolant for `d` with antecedent split `(left ; right)`.
fn extract(d: &Derivation, left: &[Formula], right: &[Formula]) -> Formula {
    use Formula as F;
    use RuleId::*;
    if left.is_empty() {
        return F::top();
    }
    let c = &d.conclusion;
    let (mut l, mut r) = (left.to_vec(), right.to_vec());
    let principal_ant = d.principal.iter().find(|p| p.side == Side::Ant).map(|p| c.antecedent[p.index].clone());
    let principal_succ = d.principal.iter().find(|p| p.side == Side::Succ).map(|p| c.succedent[p.index].clone());
    let prem = |k: usize| &d.children[k];
    let top_or = |side: Side, f: Formula| if side == LEFT { f } else { F::top() };
    match d.rule {
        Init => {
            let p = principal_ant.unwrap();
            let side = take(&p, &mut l, &mut r);
            top_or(side, p)
        }
        LBot => {
            let side = take(&F::Bottom, &mut l, &mut r);
            top_or(side, F::Bottom)
        }
        LAnd => {
            let f = principal_ant.unwrap();
            let side = take(&f, &mut l, &mut r);
            let (a, b) = binary(&f);
            if side == LEFT {
                l.extend([a, b]);
            } else {
                r.extend([a, b]);
            }
            extract(prem(0), &l, &r)
        }
        LOr => {
            let f = principal_ant.unwrap();
            let side = take(&f, &mut l, &mut r);
            let (a, b) = binary(&f);
            if side == LEFT {
                F::or(extract(prem(0), &plus(&l, &a), &r), extract(prem(1), &plus(&l, &b), &r))
            } else {
                F::and(extract(prem(0), &l, &plus(&r, &a)), extract(prem(1), &l, &plus(&r, &b)))
            }
        }
        RImp => {
            let (a, _) = binary(&principal_succ.unwrap());
            extract(prem(0), &l, &plus(&r, &a))
        }
        RAnd => F::and(extract(prem(0), &l, &r), extract(prem(1), &l, &r)),
        ROrI | ITDia => extract(prem(0), &l, &r),
        LImp => {
            let f = principal_ant.unwrap();
            let side = take(&f, &mut l, &mut r);
            let (_, b) = binary(&f);
            if side == LEFT {
                // first premise keeps the whole antecedent; parts swap roles
                let j = extract(prem(0), &r, &plus(&l, &f));
                let i2 = extract(prem(1), &plus(&l, &b), &r);
                F::imp(j, i2)
            } else {
                let i1 = extract(prem(0), &l, &plus(&r, &f));
                let i2 = extract(prem(1), &l, &plus(&r, &b));
                F::and(i1, i2)
            }
        }
        ITBox => {
            let f = principal_ant.unwrap();
            let a = f.box_body().unwrap().clone();
            if l.contains(&f) {
                extract(prem(0), &plus(&l, &a), &r)
            } else {
                extract(prem(0), &l, &plus(&r, &a))
            }
        }
        IMBox | IMDia | ID => {
            let f = principal_ant.unwrap();
            let side = take(&f, &mut l, &mut r);
            if side != LEFT {
                return F::top();
            }
            let body = f.box_body().or(f.dia_body()).unwrap().clone();
            let i = extract(prem(0), &[body], &[]);
            if f.box_body().is_some() {
                F::boxed(i)
            } else {
                F::dia(i)
            }
        }
        IDualAndM | IDBox => {
            let f1 = c.antecedent[d.principal[0].index].clone();
            let f2 = c.antecedent[d.principal[1].index].clone();
            let s1 = take(&f1, &mut l, &mut r);
            let s2 = take(&f2, &mut l, &mut r);
            let b1 = f1.box_body().unwrap().clone();
            let b2 = f2.box_body().or(f2.dia_body()).unwrap().clone();
            match (s1 == LEFT, s2 == LEFT) {
                (true, true) => F::Bottom,
                (false, false) => F::top(),
                (true, false) => F::boxed(extract(prem(0), &[b1], &[b2])),
                (false, true) => {
                    let i = extract(prem(0), &[b2], &[b1]);
                    if d.rule == IDualAndM {
                        F::dia(i)
                    } else {
                        F::boxed(i)
                    }
                }
            }
        }
        INBox | IPDia => F::top(),
        INDia | IPBox => {
            let f = principal_ant.unwrap();
            top_or(take(&f, &mut l, &mut r), F::Bottom)
        }
        ICBox | IKBox | ICD => {
            let (sl, sr) = split_boxes(&prem(0).conclusion.antecedent, &l, &r);
            if sl.is_empty() {
                F::top()
            } else {
                F::boxed(extract(prem(0), &sl, &sr))
            }
        }
        ICDia | IKDia => {
            let f = principal_ant.unwrap();
            let a = f.dia_body().unwrap().clone();
            let side = take(&f, &mut l, &mut r);
            let rest = remove_one(&prem(0).conclusion.antecedent, &a).unwrap();
            let (sl, sr) = split_boxes(&rest, &l, &r);
            if side == LEFT {
                F::dia(extract(prem(0), &plus(&sl, &a), &sr))
            } else if sl.is_empty() {
                F::top()
            } else {
                F::boxed(extract(prem(0), &sl, &plus(&sr, &a)))
            }
        }
        IDualAndC | IDualAndK => {
            let f = principal_ant.unwrap();
            let b = f.dia_body().unwrap().clone();
            let side = take(&f, &mut l, &mut r);
            let rest = remove_one(&prem(0).conclusion.antecedent, &b).unwrap();
            let (sl, sr) = split_boxes(&rest, &l, &r);
            if side == LEFT {
                if sr.is_empty() {
                    F::Bottom
                } else {
                    F::dia(extract(prem(0), &plus(&sl, &b), &sr))
                }
            } else if sl.is_empty() {
                F::top()
            } else {
                F::boxed(extract(prem(0), &sl, &plus(&sr, &b)))
            }
        }
        ICDBox => {
            let (sl, sr) = split_boxes(&prem(0).conclusion.antecedent, &l, &r);
            if sl.is_empty() {
                F::top()
            } else if sr.is_empty() {
                F::Bottom
            } else {
                F::boxed(extract(prem(0), &sl, &sr))
            }
        }
        other => unreachable!("classical rule {other} in a constructive derivation"),
    }
}

fn binary(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!("binary connective expected"),
    }
}

/// Removes `⊤`/`⊥` units bottom-up using constructively valid equivalences.
pub fn simplify(f: &Formula) -> Formula {
    use Formula as F;
    match f {
        F::Atom(_) | F::Bottom => f.clone(),
        _ if f.is_top() => f.clone(),
        F::And(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_top() {
                b
            } else if b.is_top() || a == b {
                a
            } else if a == F::Bottom || b == F::Bottom {
                F::Bottom
            } else {
                F::and(a, b)
            }
        }
        F::Or(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a == F::Bottom || a == b {
                b
            } else if b == F::Bottom {
                a
            } else if a.is_top() || b.is_top() {
                F::top()
            } else {
                F::or(a, b)
            }
        }
        F::Imp(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_top() {
                b
            } else if b.is_top() || a == F::Bottom || a == b {
                F::top()
            } else {
                F::imp(a, b)
            }
        }
        F::Box(a) => F::boxed(simplify(a)),
        F::Dia(a) => F::dia(simplify(a)),
    }
}
