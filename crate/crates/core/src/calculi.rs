//! The 28 logics, their axiom schemata and their sequent rules, read both
//! backwards (for proof search) and forwards (for proof checking).
//!
//! Modal rules that carry a boxed context (`C`, `K`, `CD` families) are
//! applied backwards with *every* boxed antecedent formula unboxed into the
//! premise; left weakening is height-preserving admissible, so nothing is
//! lost. The forward checker accepts any sub-multiset of the boxed context.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::sequent::{multiset_eq, multiset_subset, remove_one, without, Mode, Sequent};
use crate::syntax::Formula;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Classical,
    Constructive,
}

impl Family {
    pub fn mode(self) -> Mode {
        match self {
            Family::Classical => Mode::Classical,
            Family::Constructive => Mode::Constructive,
        }
    }
}

/// One point of the 14-point lattice shared by both families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    M,
    MN,
    MC,
    K,
    MP,
    MNP,
    MD,
    MND,
    MCD,
    KD,
    MT,
    MNT,
    MCT,
    KT,
}

impl Base {
    pub const ALL: [Base; 14] = [
        Base::M,
        Base::MN,
        Base::MC,
        Base::K,
        Base::MP,
        Base::MNP,
        Base::MD,
        Base::MND,
        Base::MCD,
        Base::KD,
        Base::MT,
        Base::MNT,
        Base::MCT,
        Base::KT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Base::M => "M",
            Base::MN => "MN",
            Base::MC => "MC",
            Base::K => "K",
            Base::MP => "MP",
            Base::MNP => "MNP",
            Base::MD => "MD",
            Base::MND => "MND",
            Base::MCD => "MCD",
            Base::KD => "KD",
            Base::MT => "MT",
            Base::MNT => "MNT",
            Base::MCT => "MCT",
            Base::KT => "KT",
        }
    }

    /// Model conditions characterising the logic. `D` logics also list `P`,
    /// which `D` implies once `α = β` is allowed.
    pub fn features(self) -> Features {
        let (c, n, d, p, t) = match self {
            Base::M => (false, false, false, false, false),
            Base::MN => (false, true, false, false, false),
            Base::MC => (true, false, false, false, false),
            Base::K => (true, true, false, false, false),
            Base::MP => (false, false, false, true, false),
            Base::MNP => (false, true, false, true, false),
            Base::MD => (false, false, true, true, false),
            Base::MND => (false, true, true, true, false),
            Base::MCD => (true, false, true, true, false),
            Base::KD => (true, true, true, true, false),
            Base::MT => (false, false, false, false, true),
            Base::MNT => (false, true, false, false, true),
            Base::MCT => (true, false, false, false, true),
            Base::KT => (true, true, false, false, true),
        };
        Features { c, n, d, p, t }
    }
}

/// Which of the conditions (C), (N), (D), (P), (T) a logic imposes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Features {
    pub c: bool,
    pub n: bool,
    pub d: bool,
    pub p: bool,
    pub t: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicId {
    pub family: Family,
    pub base: Base,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown logic '{0}' (expected one of M, MN, MC, K, MP, MNP, MD, MND, MCD, KD, MT, MNT, MCT, KT, optionally prefixed with W)")]
pub struct UnknownLogic(pub String);

impl LogicId {
    pub fn classical(base: Base) -> LogicId {
        LogicId { family: Family::Classical, base }
    }

    pub fn constructive(base: Base) -> LogicId {
        LogicId { family: Family::Constructive, base }
    }

    /// All 28 logics, classical first.
    pub fn all() -> Vec<LogicId> {
        let mut v: Vec<LogicId> = Base::ALL.iter().map(|b| LogicId::classical(*b)).collect();
        v.extend(Base::ALL.iter().map(|b| LogicId::constructive(*b)));
        v
    }

    pub fn all_constructive() -> Vec<LogicId> {
        Base::ALL.iter().map(|b| LogicId::constructive(*b)).collect()
    }

    pub fn all_classical() -> Vec<LogicId> {
        Base::ALL.iter().map(|b| LogicId::classical(*b)).collect()
    }

    pub fn mode(self) -> Mode {
        self.family.mode()
    }

    pub fn features(self) -> Features {
        self.base.features()
    }

    pub fn is_constructive(self) -> bool {
        self.family == Family::Constructive
    }

    /// Same base point in the other family.
    pub fn counterpart(self) -> LogicId {
        match self.family {
            Family::Classical => LogicId::constructive(self.base),
            Family::Constructive => LogicId::classical(self.base),
        }
    }

    pub fn name(self) -> String {
        match self.family {
            Family::Classical => self.base.name().to_string(),
            Family::Constructive => format!("W{}", self.base.name()),
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for LogicId {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = match s.strip_prefix('W') {
            Some(rest) => (Family::Constructive, rest),
            None => (Family::Classical, s),
        };
        Base::ALL
            .iter()
            .find(|b| b.name() == rest)
            .map(|&base| LogicId { family, base })
            .ok_or_else(|| UnknownLogic(s.to_string()))
    }
}

/// Inclusion arrows of the lattice (source is included in target).
pub const LATTICE_ARROWS: [(Base, Base); 23] = [
    (Base::M, Base::MN),
    (Base::M, Base::MC),
    (Base::MN, Base::K),
    (Base::MC, Base::K),
    (Base::MP, Base::MNP),
    (Base::MD, Base::MND),
    (Base::MD, Base::MCD),
    (Base::MND, Base::KD),
    (Base::MCD, Base::KD),
    (Base::MT, Base::MNT),
    (Base::MT, Base::MCT),
    (Base::MNT, Base::KT),
    (Base::MCT, Base::KT),
    (Base::MN, Base::MNP),
    (Base::MNP, Base::MND),
    (Base::MND, Base::MNT),
    (Base::MC, Base::MCD),
    (Base::MCD, Base::MCT),
    (Base::MP, Base::MD),
    (Base::M, Base::MP),
    (Base::MD, Base::MT),
    (Base::KD, Base::KT),
    (Base::K, Base::KD),
];

// ---------------------------------------------------------------------------
// Axioms

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    KBox,
    KDia,
    CBox,
    CDia,
    NBox,
    NDia,
    TBox,
    TDia,
    D,
    PBox,
    PDia,
    Dual,
    DualAnd,
    DualOr,
    // rule schemata
    Nec,
    MonBox,
    MonDia,
    RDualAnd,
    RDualOr,
}

/// An instantiated schema: an axiom is a formula, a rule a premise/conclusion pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SchemaInstance {
    Axiom(Formula),
    Rule { premise: Formula, conclusion: Formula },
}

impl SchemaInstance {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            SchemaInstance::Axiom(f) => Some(f),
            SchemaInstance::Rule { .. } => None,
        }
    }
}

impl AxiomId {
    pub const AXIOMS: [AxiomId; 14] = [
        AxiomId::KBox,
        AxiomId::KDia,
        AxiomId::CBox,
        AxiomId::CDia,
        AxiomId::NBox,
        AxiomId::NDia,
        AxiomId::TBox,
        AxiomId::TDia,
        AxiomId::D,
        AxiomId::PBox,
        AxiomId::PDia,
        AxiomId::Dual,
        AxiomId::DualAnd,
        AxiomId::DualOr,
    ];

    pub fn is_rule(self) -> bool {
        matches!(self, AxiomId::Nec | AxiomId::MonBox | AxiomId::MonDia | AxiomId::RDualAnd | AxiomId::RDualOr)
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::KBox => "K[]",
            AxiomId::KDia => "K<>",
            AxiomId::CBox => "C[]",
            AxiomId::CDia => "C<>",
            AxiomId::NBox => "N[]",
            AxiomId::NDia => "N<>",
            AxiomId::TBox => "T[]",
            AxiomId::TDia => "T<>",
            AxiomId::D => "D",
            AxiomId::PBox => "P[]",
            AxiomId::PDia => "P<>",
            AxiomId::Dual => "dual",
            AxiomId::DualAnd => "dual&",
            AxiomId::DualOr => "dual|",
            AxiomId::Nec => "nec",
            AxiomId::MonBox => "mon[]",
            AxiomId::MonDia => "mon<>",
            AxiomId::RDualAnd => "Rdual&",
            AxiomId::RDualOr => "Rdual|",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Substitutes `a`, `b` for the schematic letters `A`, `B`.
pub fn instantiate_axiom(ax: AxiomId, a: &Formula, b: &Formula) -> SchemaInstance {
    use Formula as F;
    let (a, b) = (a.clone(), b.clone());
    let axiom = |f| SchemaInstance::Axiom(f);
    match ax {
        AxiomId::KBox => axiom(F::imp(
            F::boxed(F::imp(a.clone(), b.clone())),
            F::imp(F::boxed(a), F::boxed(b)),
        )),
        AxiomId::KDia => axiom(F::imp(F::boxed(F::imp(a.clone(), b.clone())), F::imp(F::dia(a), F::dia(b)))),
        AxiomId::CBox => axiom(F::imp(
            F::and(F::boxed(a.clone()), F::boxed(b.clone())),
            F::boxed(F::and(a, b)),
        )),
        AxiomId::CDia => axiom(F::imp(F::dia(F::or(a.clone(), b.clone())), F::or(F::dia(a), F::dia(b)))),
        AxiomId::NBox => axiom(F::boxed(F::top())),
        AxiomId::NDia => axiom(F::not(F::dia(F::Bottom))),
        AxiomId::TBox => axiom(F::imp(F::boxed(a.clone()), a)),
        AxiomId::TDia => axiom(F::imp(a.clone(), F::dia(a))),
        AxiomId::D => axiom(F::imp(F::boxed(a.clone()), F::dia(a))),
        AxiomId::PBox => axiom(F::not(F::boxed(F::Bottom))),
        AxiomId::PDia => axiom(F::dia(F::top())),
        AxiomId::Dual => axiom(F::iff(F::boxed(a.clone()), F::not(F::dia(F::not(a))))),
        AxiomId::DualAnd => axiom(F::not(F::and(F::boxed(a.clone()), F::dia(F::not(a))))),
        AxiomId::DualOr => axiom(F::or(F::boxed(a.clone()), F::dia(F::not(a)))),
        AxiomId::Nec => SchemaInstance::Rule { premise: a.clone(), conclusion: F::boxed(a) },
        AxiomId::MonBox => SchemaInstance::Rule {
            premise: F::imp(a.clone(), b.clone()),
            conclusion: F::imp(F::boxed(a), F::boxed(b)),
        },
        AxiomId::MonDia => SchemaInstance::Rule {
            premise: F::imp(a.clone(), b.clone()),
            conclusion: F::imp(F::dia(a), F::dia(b)),
        },
        AxiomId::RDualAnd => SchemaInstance::Rule {
            premise: F::not(F::and(a.clone(), b.clone())),
            conclusion: F::not(F::and(F::boxed(a), F::dia(b))),
        },
        AxiomId::RDualOr => SchemaInstance::Rule {
            premise: F::or(a.clone(), b.clone()),
            conclusion: F::or(F::boxed(a), F::dia(b)),
        },
    }
}

/// The modal axioms and rules of a logic's Hilbert system.
pub fn hilbert_catalogue(logic: LogicId) -> Vec<AxiomId> {
    use AxiomId::*;
    use Base as B;
    match logic.family {
        Family::Classical => {
            let mut v = vec![Dual, MonBox];
            v.extend(match logic.base {
                B::M => vec![],
                B::MN => vec![NBox],
                B::MC => vec![CBox],
                B::K => vec![NBox, CBox],
                B::MP => vec![PBox],
                B::MNP => vec![NBox, PBox],
                B::MD => vec![D],
                B::MND => vec![NBox, D],
                B::MCD => vec![CBox, D],
                B::KD => vec![NBox, CBox, D],
                B::MT => vec![TBox],
                B::MNT => vec![NBox, TBox],
                B::MCT => vec![CBox, TBox],
                B::KT => vec![NBox, CBox, TBox],
            });
            v
        }
        Family::Constructive => {
            let mut v = vec![DualAnd, MonBox, MonDia];
            v.extend(match logic.base {
                B::M => vec![],
                B::MN => vec![NBox],
                B::MC => vec![CBox, KDia],
                B::K => vec![CBox, KDia, NBox],
                B::MP => vec![PDia],
                B::MNP => vec![NBox, PDia],
                B::MD => vec![D, PDia],
                B::MND => vec![NBox, D],
                B::MCD => vec![CBox, KDia, D, PDia],
                B::KD => vec![CBox, KDia, NBox, D],
                B::MT => vec![TBox, TDia],
                B::MNT => vec![NBox, TBox, TDia],
                B::MCT => vec![CBox, KDia, TBox, TDia],
                B::KT => vec![CBox, KDia, NBox, TBox, TDia],
            });
            v
        }
    }
}

// ---------------------------------------------------------------------------
// Rules

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    // propositional, both modes
    Init,
    LBot,
    LAnd,
    LOr,
    RImp,
    RAnd,
    LImp,
    /// Classical `R∨` (both disjuncts into the succedent).
    ROr,
    /// Constructive `R∨ᵢ` (one disjunct).
    ROrI,
    // classical modal
    MBox,
    MDia,
    DualAndM,
    DualOrM,
    CBox,
    CDia,
    DualAndC,
    DualOrC,
    KBox,
    KDia,
    NBox,
    NDia,
    PBox,
    PDia,
    TBox,
    TDia,
    D,
    DBox,
    DDia,
    CD,
    // constructive modal
    IMBox,
    IMDia,
    IDualAndM,
    INBox,
    INDia,
    ICBox,
    ICDia,
    IDualAndC,
    IKBox,
    IKDia,
    IDualAndK,
    ITBox,
    ITDia,
    IPBox,
    IPDia,
    ID,
    IDBox,
    ICD,
    ICDBox,
}

impl RuleId {
    pub const ALL: [RuleId; 48] = [
        RuleId::Init,
        RuleId::LBot,
        RuleId::LAnd,
        RuleId::LOr,
        RuleId::RImp,
        RuleId::RAnd,
        RuleId::LImp,
        RuleId::ROr,
        RuleId::ROrI,
        RuleId::MBox,
        RuleId::MDia,
        RuleId::DualAndM,
        RuleId::DualOrM,
        RuleId::CBox,
        RuleId::CDia,
        RuleId::DualAndC,
        RuleId::DualOrC,
        RuleId::KBox,
        RuleId::KDia,
        RuleId::NBox,
        RuleId::NDia,
        RuleId::PBox,
        RuleId::PDia,
        RuleId::TBox,
        RuleId::TDia,
        RuleId::D,
        RuleId::DBox,
        RuleId::DDia,
        RuleId::CD,
        RuleId::IMBox,
        RuleId::IMDia,
        RuleId::IDualAndM,
        RuleId::INBox,
        RuleId::INDia,
        RuleId::ICBox,
        RuleId::ICDia,
        RuleId::IDualAndC,
        RuleId::IKBox,
        RuleId::IKDia,
        RuleId::IDualAndK,
        RuleId::ITBox,
        RuleId::ITDia,
        RuleId::IPBox,
        RuleId::IPDia,
        RuleId::ID,
        RuleId::IDBox,
        RuleId::ICD,
        RuleId::ICDBox,
    ];

    pub fn arity(self) -> usize {
        match self {
            RuleId::Init | RuleId::LBot => 0,
            RuleId::LOr | RuleId::RAnd | RuleId::LImp => 2,
            _ => 1,
        }
    }

    /// `None` for the propositional rules shared by both modes.
    pub fn mode(self) -> Option<Mode> {
        use RuleId::*;
        match self {
            Init | LBot | LAnd | LOr | RImp | RAnd | LImp => None,
            ROr | MBox | MDia | DualAndM | DualOrM | CBox | CDia | DualAndC | DualOrC | KBox | KDia | NBox
            | NDia | PBox | PDia | TBox | TDia | D | DBox | DDia | CD => Some(Mode::Classical),
            _ => Some(Mode::Constructive),
        }
    }

    pub fn name(self) -> &'static str {
        use RuleId::*;
        match self {
            Init => "init",
            LBot => "Lbot",
            LAnd => "Land",
            LOr => "Lor",
            RImp => "Rimp",
            RAnd => "Rand",
            LImp => "Limp",
            ROr => "Ror",
            ROrI => "Ror_i",
            MBox => "M[]",
            MDia => "M<>",
            DualAndM => "dual&M",
            DualOrM => "dual|M",
            CBox => "C[]",
            CDia => "C<>",
            DualAndC => "dual&C",
            DualOrC => "dual|C",
            KBox => "K[]",
            KDia => "K<>",
            NBox => "N[]",
            NDia => "N<>",
            PBox => "P[]",
            PDia => "P<>",
            TBox => "T[]",
            TDia => "T<>",
            D => "D",
            DBox => "D[]",
            DDia => "D<>",
            CD => "CD",
            IMBox => "iM[]",
            IMDia => "iM<>",
            IDualAndM => "idual&M",
            INBox => "iN[]",
            INDia => "iN<>",
            ICBox => "iC[]",
            ICDia => "iC<>",
            IDualAndC => "idual&C",
            IKBox => "iK[]",
            IKDia => "iK<>",
            IDualAndK => "idual&K",
            ITBox => "iT[]",
            ITDia => "iT<>",
            IPBox => "iP[]",
            IPDia => "iP<>",
            ID => "iD",
            IDBox => "iD[]",
            ICD => "iCD",
            ICDBox => "iCD[]",
        }
    }

    /// Rules whose backward application loses no derivability.
    pub fn is_invertible(self, mode: Mode) -> bool {
        use RuleId::*;
        match self {
            LAnd | LOr | RImp | RAnd => true,
            LImp | ROr => mode == Mode::Classical,
            TBox | TDia | ITBox => true,
            _ => false,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown rule name '{0}'")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL.iter().copied().find(|r| r.name() == s).ok_or_else(|| UnknownRule(s.to_string()))
    }
}

fn propositional(mode: Mode) -> Vec<RuleId> {
    use RuleId::*;
    match mode {
        Mode::Classical => vec![Init, LBot, LAnd, LOr, RImp, RAnd, LImp, ROr],
        Mode::Constructive => vec![Init, LBot, LAnd, LOr, RImp, RAnd, LImp, ROrI],
    }
}

fn modal_rules(logic: LogicId) -> Vec<RuleId> {
    use Base as B;
    use RuleId::*;
    match logic.family {
        Family::Classical => {
            let m = vec![MBox, MDia, DualAndM, DualOrM];
            let mn = [m.clone(), vec![NBox, NDia]].concat();
            let mc = vec![CBox, CDia, DualAndC, DualOrC];
            let k = vec![KBox, KDia];
            let d = vec![D, DBox, DDia, PBox, PDia];
            let p = vec![PBox, PDia];
            let t = vec![TBox, TDia];
            match logic.base {
                B::M => m,
                B::MN => mn,
                B::MC => mc,
                B::K => k,
                B::MP => [m, p].concat(),
                B::MNP => [mn, p].concat(),
                B::MD => [m, d].concat(),
                B::MND => [mn, d].concat(),
                B::MCD => [mc, vec![CD]].concat(),
                B::KD => [k, vec![CD]].concat(),
                B::MT => [m, t].concat(),
                B::MNT => [mn, t].concat(),
                B::MCT => [mc, t].concat(),
                B::KT => [k, t].concat(),
            }
        }
        Family::Constructive => {
            let m = vec![IMBox, IMDia, IDualAndM];
            let mn = [m.clone(), vec![INBox, INDia]].concat();
            let mc = vec![ICBox, ICDia, IDualAndC];
            let k = vec![IKBox, IKDia, IDualAndK];
            let d = vec![ID, IDBox, IPBox, IPDia];
            let p = vec![IPBox, IPDia];
            let t = vec![ITBox, ITDia];
            match logic.base {
                B::M => m,
                B::MN => mn,
                B::MC => mc,
                B::K => k,
                B::MP => [m, p].concat(),
                B::MNP => [mn, p].concat(),
                B::MD => [m, d].concat(),
                B::MND => [mn, d].concat(),
                B::MCD => [mc, vec![ICD, ICDBox]].concat(),
                B::KD => [k, vec![ICD, ICDBox]].concat(),
                B::MT => [m, t].concat(),
                B::MNT => [mn, t].concat(),
                B::MCT => [mc, t].concat(),
                B::KT => [k, t].concat(),
            }
        }
    }
}

/// The rules of a logic's calculus, propositional rules first, in a fixed
/// order that the prover follows.
pub fn rules_for(logic: LogicId) -> Vec<RuleId> {
    let mut v = propositional(logic.mode());
    v.extend(modal_rules(logic));
    v
}

// ---------------------------------------------------------------------------
// Rule instances

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ant,
    Succ,
}

/// A principal formula occurrence, by position in the conclusion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Principal {
    pub side: Side,
    pub index: usize,
}

impl Principal {
    pub fn ant(index: usize) -> Principal {
        Principal { side: Side::Ant, index }
    }

    pub fn succ(index: usize) -> Principal {
        Principal { side: Side::Succ, index }
    }
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Ant => write!(f, "a{}", self.index),
            Side::Succ => write!(f, "s{}", self.index),
        }
    }
}

impl FromStr for Principal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (side, rest) = if let Some(r) = s.strip_prefix('a') {
            (Side::Ant, r)
        } else if let Some(r) = s.strip_prefix('s') {
            (Side::Succ, r)
        } else {
            return Err(format!("bad principal '{s}'"));
        };
        let index = rest.parse().map_err(|_| format!("bad principal '{s}'"))?;
        Ok(Principal { side, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
    pub principal: Vec<Principal>,
}

fn box_bodies(v: &[Formula]) -> Vec<Formula> {
    v.iter().filter_map(|f| f.box_body().cloned()).collect()
}

fn dia_bodies(v: &[Formula]) -> Vec<Formula> {
    v.iter().filter_map(|f| f.dia_body().cloned()).collect()
}

fn with(mut v: Vec<Formula>, extra: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    v.extend(extra);
    v
}

/// Indices of the first occurrence of each distinct formula satisfying `pred`.
fn distinct_positions(v: &[Formula], pred: impl Fn(&Formula) -> bool) -> Vec<usize> {
    let mut seen = HashSet::new();
    (0..v.len()).filter(|&i| pred(&v[i]) && seen.insert(&v[i])).collect()
}

struct Builder<'a> {
    goal: &'a Sequent,
    out: Vec<RuleInstance>,
}

impl Builder<'_> {
    fn seq(&self, ant: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent { antecedent: ant, succedent: succ, mode: self.goal.mode }
    }

    fn push(&mut self, rule: RuleId, principal: Vec<Principal>, premises: Vec<(Vec<Formula>, Vec<Formula>)>) {
        let premises = premises.into_iter().map(|(a, s)| self.seq(a, s)).collect();
        self.out.push(RuleInstance { rule, conclusion: self.goal.clone(), premises, principal });
    }
}

/// Every rule instance of `logic` whose conclusion is `goal`, in rule-table
/// order, then by leftmost principal formula.
pub fn backward_applications(logic: LogicId, goal: &Sequent) -> Vec<RuleInstance> {
    let mut b = Builder { goal, out: Vec::new() };
    if goal.mode != logic.mode() || !goal.is_well_formed() {
        return b.out;
    }
    for rule in rules_for(logic) {
        match goal.mode {
            Mode::Constructive => constructive_instances(&mut b, rule),
            Mode::Classical => classical_instances(&mut b, rule),
        }
    }
    b.out
}

fn constructive_instances(b: &mut Builder<'_>, rule: RuleId) {
    use Formula as F;
    use RuleId::*;
    let ant = b.goal.antecedent.clone();
    let succ = b.goal.succedent.clone();
    let goal_succ = succ.first().cloned();
    let boxes = box_bodies(&ant);
    let is_box = |f: &F| f.box_body().is_some();
    let is_dia = |f: &F| f.dia_body().is_some();
    let succ_box = goal_succ.as_ref().and_then(|f| f.box_body().cloned());
    let succ_dia = goal_succ.as_ref().and_then(|f| f.dia_body().cloned());
    match rule {
        Init => {
            if let Some(g @ F::Atom(_)) = &goal_succ {
                if let Some(i) = ant.iter().position(|f| f == g) {
                    b.push(Init, vec![Principal::ant(i), Principal::succ(0)], vec![]);
                }
            }
        }
        LBot => {
            if let Some(i) = ant.iter().position(|f| *f == F::Bottom) {
                b.push(LBot, vec![Principal::ant(i)], vec![]);
            }
        }
        LAnd => {
            for i in distinct_positions(&ant, |f| matches!(f, F::And(..))) {
                if let F::And(x, y) = &ant[i] {
                    let prem = with(without(&ant, i), [(**x).clone(), (**y).clone()]);
                    b.push(LAnd, vec![Principal::ant(i)], vec![(prem, succ.clone())]);
                }
            }
        }
        LOr => {
            for i in distinct_positions(&ant, |f| matches!(f, F::Or(..))) {
                if let F::Or(x, y) = &ant[i] {
                    let rest = without(&ant, i);
                    b.push(
                        LOr,
                        vec![Principal::ant(i)],
                        vec![(with(rest.clone(), [(**x).clone()]), succ.clone()), (with(rest, [(**y).clone()]), succ.clone())],
                    );
                }
            }
        }
        RImp => {
            if let Some(F::Imp(x, y)) = &goal_succ {
                b.push(RImp, vec![Principal::succ(0)], vec![(with(ant.clone(), [(**x).clone()]), vec![(**y).clone()])]);
            }
        }
        RAnd => {
            if let Some(F::And(x, y)) = &goal_succ {
                b.push(
                    RAnd,
                    vec![Principal::succ(0)],
                    vec![(ant.clone(), vec![(**x).clone()]), (ant.clone(), vec![(**y).clone()])],
                );
            }
        }
        LImp => {
            for i in distinct_positions(&ant, |f| matches!(f, F::Imp(..))) {
                if let F::Imp(x, y) = &ant[i] {
                    b.push(
                        LImp,
                        vec![Principal::ant(i)],
                        vec![(ant.clone(), vec![(**x).clone()]), (with(without(&ant, i), [(**y).clone()]), succ.clone())],
                    );
                }
            }
        }
        ROrI => {
            if let Some(F::Or(x, y)) = &goal_succ {
                b.push(ROrI, vec![Principal::succ(0)], vec![(ant.clone(), vec![(**x).clone()])]);
                b.push(ROrI, vec![Principal::succ(0)], vec![(ant.clone(), vec![(**y).clone()])]);
            }
        }
        IMBox => {
            if let Some(bb) = &succ_box {
                for i in distinct_positions(&ant, is_box) {
                    let a = ant[i].box_body().unwrap().clone();
                    b.push(IMBox, vec![Principal::ant(i), Principal::succ(0)], vec![(vec![a], vec![bb.clone()])]);
                }
            }
        }
        IMDia => {
            if let Some(bb) = &succ_dia {
                for i in distinct_positions(&ant, is_dia) {
                    let a = ant[i].dia_body().unwrap().clone();
                    b.push(IMDia, vec![Principal::ant(i), Principal::succ(0)], vec![(vec![a], vec![bb.clone()])]);
                }
            }
        }
        IDualAndM => {
            for i in distinct_positions(&ant, is_box) {
                for j in distinct_positions(&ant, is_dia) {
                    let a = ant[i].box_body().unwrap().clone();
                    let c = ant[j].dia_body().unwrap().clone();
                    b.push(IDualAndM, vec![Principal::ant(i), Principal::ant(j)], vec![(vec![a, c], vec![])]);
                }
            }
        }
        INBox => {
            if let Some(a) = &succ_box {
                b.push(INBox, vec![Principal::succ(0)], vec![(vec![], vec![a.clone()])]);
            }
        }
        INDia | IPBox => {
            let pick: fn(&F) -> Option<&F> = if rule == INDia { F::dia_body } else { F::box_body };
            for i in distinct_positions(&ant, |f| pick(f).is_some()) {
                let a = pick(&ant[i]).unwrap().clone();
                b.push(rule, vec![Principal::ant(i)], vec![(vec![a], vec![])]);
            }
        }
        ICBox | IKBox => {
            if let Some(bb) = &succ_box {
                if rule == IKBox || !boxes.is_empty() {
                    b.push(rule, vec![Principal::succ(0)], vec![(boxes.clone(), vec![bb.clone()])]);
                }
            }
        }
        ICDia | IKDia => {
            if let Some(bb) = &succ_dia {
                for i in distinct_positions(&ant, is_dia) {
                    let a = ant[i].dia_body().unwrap().clone();
                    b.push(rule, vec![Principal::ant(i), Principal::succ(0)], vec![(with(boxes.clone(), [a]), vec![bb.clone()])]);
                }
            }
        }
        IDualAndC | IDualAndK => {
            if rule == IDualAndK || !boxes.is_empty() {
                for i in distinct_positions(&ant, is_dia) {
                    let a = ant[i].dia_body().unwrap().clone();
                    b.push(rule, vec![Principal::ant(i)], vec![(with(boxes.clone(), [a]), vec![])]);
                }
            }
        }
        ITBox => {
            for i in distinct_positions(&ant, is_box) {
                let a = ant[i].box_body().unwrap().clone();
                b.push(ITBox, vec![Principal::ant(i)], vec![(with(ant.clone(), [a]), succ.clone())]);
            }
        }
        ITDia => {
            if let Some(a) = &succ_dia {
                b.push(ITDia, vec![Principal::succ(0)], vec![(ant.clone(), vec![a.clone()])]);
            }
        }
        IPDia => {
            if let Some(a) = &succ_dia {
                b.push(IPDia, vec![Principal::succ(0)], vec![(vec![], vec![a.clone()])]);
            }
        }
        ID => {
            if let Some(bb) = &succ_dia {
                for i in distinct_positions(&ant, is_box) {
                    let a = ant[i].box_body().unwrap().clone();
                    b.push(ID, vec![Principal::ant(i), Principal::succ(0)], vec![(vec![a], vec![bb.clone()])]);
                }
            }
        }
        IDBox => {
            let pos = distinct_positions(&ant, is_box);
            for (x, &i) in pos.iter().enumerate() {
                for &j in &pos[x + 1..] {
                    let a = ant[i].box_body().unwrap().clone();
                    let c = ant[j].box_body().unwrap().clone();
                    b.push(IDBox, vec![Principal::ant(i), Principal::ant(j)], vec![(vec![a, c], vec![])]);
                }
            }
        }
        ICD => {
            if let Some(a) = &succ_dia {
                b.push(ICD, vec![Principal::succ(0)], vec![(boxes.clone(), vec![a.clone()])]);
            }
        }
        ICDBox => {
            if !boxes.is_empty() {
                b.push(ICDBox, vec![], vec![(boxes.clone(), vec![])]);
            }
        }
        _ => {}
    }
}

fn classical_instances(b: &mut Builder<'_>, rule: RuleId) {
    use Formula as F;
    use RuleId::*;
    let ant = b.goal.antecedent.clone();
    let succ = b.goal.succedent.clone();
    let boxes = box_bodies(&ant);
    let dias = dia_bodies(&succ);
    let is_box = |f: &F| f.box_body().is_some();
    let is_dia = |f: &F| f.dia_body().is_some();
    let first_dia_succ = succ.iter().position(is_dia);
    match rule {
        Init => {
            for j in distinct_positions(&succ, F::is_atom) {
                if let Some(i) = ant.iter().position(|f| *f == succ[j]) {
                    b.push(Init, vec![Principal::ant(i), Principal::succ(j)], vec![]);
                    return;
                }
            }
        }
        LBot => {
            if let Some(i) = ant.iter().position(|f| *f == F::Bottom) {
                b.push(LBot, vec![Principal::ant(i)], vec![]);
            }
        }
        LAnd => {
            for i in distinct_positions(&ant, |f| matches!(f, F::And(..))) {
                if let F::And(x, y) = &ant[i] {
                    let prem = with(without(&ant, i), [(**x).clone(), (**y).clone()]);
                    b.push(LAnd, vec![Principal::ant(i)], vec![(prem, succ.clone())]);
                }
            }
        }
        LOr => {
            for i in distinct_positions(&ant, |f| matches!(f, F::Or(..))) {
                if let F::Or(x, y) = &ant[i] {
                    let rest = without(&ant, i);
                    b.push(
                        LOr,
                        vec![Principal::ant(i)],
                        vec![(with(rest.clone(), [(**x).clone()]), succ.clone()), (with(rest, [(**y).clone()]), succ.clone())],
                    );
                }
            }
        }
        RImp => {
            for j in distinct_positions(&succ, |f| matches!(f, F::Imp(..))) {
                if let F::Imp(x, y) = &succ[j] {
                    b.push(
                        RImp,
                        vec![Principal::succ(j)],
                        vec![(with(ant.clone(), [(**x).clone()]), with(without(&succ, j), [(**y).clone()]))],
                    );
                }
            }
        }
        RAnd => {
            for j in distinct_positions(&succ, |f| matches!(f, F::And(..))) {
                if let F::And(x, y) = &succ[j] {
                    let rest = without(&succ, j);
                    b.push(
                        RAnd,
                        vec![Principal::succ(j)],
                        vec![(ant.clone(), with(rest.clone(), [(**x).clone()])), (ant.clone(), with(rest, [(**y).clone()]))],
                    );
                }
            }
        }
        ROr => {
            for j in distinct_positions(&succ, |f| matches!(f, F::Or(..))) {
                if let F::Or(x, y) = &succ[j] {
                    b.push(
                        ROr,
                        vec![Principal::succ(j)],
                        vec![(ant.clone(), with(without(&succ, j), [(**x).clone(), (**y).clone()]))],
                    );
                }
            }
        }
        LImp => {
            for i in distinct_positions(&ant, |f| matches!(f, F::Imp(..))) {
                if let F::Imp(x, y) = &ant[i] {
                    let rest = without(&ant, i);
                    b.push(
                        LImp,
                        vec![Principal::ant(i)],
                        vec![(rest.clone(), with(succ.clone(), [(**x).clone()])), (with(rest, [(**y).clone()]), succ.clone())],
                    );
                }
            }
        }
        MBox | MDia | D => {
            let (left, right): (fn(&F) -> Option<&F>, fn(&F) -> Option<&F>) = match rule {
                MBox => (F::box_body, F::box_body),
                MDia => (F::dia_body, F::dia_body),
                _ => (F::box_body, F::dia_body),
            };
            for i in distinct_positions(&ant, |f| left(f).is_some()) {
                for j in distinct_positions(&succ, |f| right(f).is_some()) {
                    let a = left(&ant[i]).unwrap().clone();
                    let c = right(&succ[j]).unwrap().clone();
                    b.push(rule, vec![Principal::ant(i), Principal::succ(j)], vec![(vec![a], vec![c])]);
                }
            }
        }
        DualAndM => {
            for i in distinct_positions(&ant, is_box) {
                for j in distinct_positions(&ant, is_dia) {
                    let a = ant[i].box_body().unwrap().clone();
                    let c = ant[j].dia_body().unwrap().clone();
                    b.push(DualAndM, vec![Principal::ant(i), Principal::ant(j)], vec![(vec![a, c], vec![])]);
                }
            }
        }
        DualOrM => {
            for i in distinct_positions(&succ, is_box) {
                for j in distinct_positions(&succ, is_dia) {
                    let a = succ[i].box_body().unwrap().clone();
                    let c = succ[j].dia_body().unwrap().clone();
                    b.push(DualOrM, vec![Principal::succ(i), Principal::succ(j)], vec![(vec![], vec![a, c])]);
                }
            }
        }
        CBox | KBox => {
            if rule == KBox || !boxes.is_empty() {
                for j in distinct_positions(&succ, is_box) {
                    let a = succ[j].box_body().unwrap().clone();
                    b.push(rule, vec![Principal::succ(j)], vec![(boxes.clone(), with(vec![a], dias.clone()))]);
                }
            }
        }
        CDia => {
            if let Some(j) = first_dia_succ {
                for i in distinct_positions(&ant, is_dia) {
                    let a = ant[i].dia_body().unwrap().clone();
                    b.push(CDia, vec![Principal::ant(i), Principal::succ(j)], vec![(with(boxes.clone(), [a]), dias.clone())]);
                }
            }
        }
        KDia => {
            for i in distinct_positions(&ant, is_dia) {
                let a = ant[i].dia_body().unwrap().clone();
                b.push(KDia, vec![Principal::ant(i)], vec![(with(boxes.clone(), [a]), dias.clone())]);
            }
        }
        DualAndC => {
            if !boxes.is_empty() {
                for i in distinct_positions(&ant, is_dia) {
                    let a = ant[i].dia_body().unwrap().clone();
                    b.push(DualAndC, vec![Principal::ant(i)], vec![(with(boxes.clone(), [a]), vec![])]);
                }
            }
        }
        DualOrC => {
            if let Some(j) = first_dia_succ {
                for i in distinct_positions(&succ, is_box) {
                    let a = succ[i].box_body().unwrap().clone();
                    b.push(DualOrC, vec![Principal::succ(i), Principal::succ(j)], vec![(vec![], with(vec![a], dias.clone()))]);
                }
            }
        }
        NBox | PDia => {
            let pick: fn(&F) -> Option<&F> = if rule == NBox { F::box_body } else { F::dia_body };
            for j in distinct_positions(&succ, |f| pick(f).is_some()) {
                let a = pick(&succ[j]).unwrap().clone();
                b.push(rule, vec![Principal::succ(j)], vec![(vec![], vec![a])]);
            }
        }
        NDia | PBox => {
            let pick: fn(&F) -> Option<&F> = if rule == NDia { F::dia_body } else { F::box_body };
            for i in distinct_positions(&ant, |f| pick(f).is_some()) {
                let a = pick(&ant[i]).unwrap().clone();
                b.push(rule, vec![Principal::ant(i)], vec![(vec![a], vec![])]);
            }
        }
        TBox => {
            for i in distinct_positions(&ant, is_box) {
                let a = ant[i].box_body().unwrap().clone();
                b.push(TBox, vec![Principal::ant(i)], vec![(with(ant.clone(), [a]), succ.clone())]);
            }
        }
        TDia => {
            for j in distinct_positions(&succ, is_dia) {
                let a = succ[j].dia_body().unwrap().clone();
                b.push(TDia, vec![Principal::succ(j)], vec![(ant.clone(), with(succ.clone(), [a]))]);
            }
        }
        DBox => {
            let pos = distinct_positions(&ant, is_box);
            for (x, &i) in pos.iter().enumerate() {
                for &j in &pos[x + 1..] {
                    let a = ant[i].box_body().unwrap().clone();
                    let c = ant[j].box_body().unwrap().clone();
                    b.push(DBox, vec![Principal::ant(i), Principal::ant(j)], vec![(vec![a, c], vec![])]);
                }
            }
        }
        DDia => {
            let pos = distinct_positions(&succ, is_dia);
            for (x, &i) in pos.iter().enumerate() {
                for &j in &pos[x + 1..] {
                    let a = succ[i].dia_body().unwrap().clone();
                    let c = succ[j].dia_body().unwrap().clone();
                    b.push(DDia, vec![Principal::succ(i), Principal::succ(j)], vec![(vec![], vec![a, c])]);
                }
            }
        }
        CD => {
            if !boxes.is_empty() || !dias.is_empty() {
                b.push(CD, vec![], vec![(boxes.clone(), dias.clone())]);
            }
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Forward checking

/// Whether `inst` is a correct instance of one of the rules of `logic`.
pub fn check_step(logic: LogicId, inst: &RuleInstance) -> bool {
    let mode = logic.mode();
    if !rules_for(logic).contains(&inst.rule) || inst.premises.len() != inst.rule.arity() {
        return false;
    }
    let all = std::iter::once(&inst.conclusion).chain(inst.premises.iter());
    if all.clone().any(|s| s.mode != mode || !s.is_well_formed()) {
        return false;
    }
    check_shape(inst).unwrap_or(false)
}

fn check_shape(inst: &RuleInstance) -> Option<bool> {
    use Formula as F;
    use RuleId::*;
    let c = &inst.conclusion;
    let ps = &inst.premises;
    let pr = &inst.principal;
    let classical = c.mode == Mode::Classical;
    let get = |k: usize, side: Side| -> Option<(usize, &F)> {
        let p = pr.get(k)?;
        if p.side != side {
            return None;
        }
        let v = match side {
            Side::Ant => &c.antecedent,
            Side::Succ => &c.succedent,
        };
        v.get(p.index).map(|f| (p.index, f))
    };
    let ant = &c.antecedent;
    let succ = &c.succedent;
    let boxes = box_bodies(ant);
    let dias = dia_bodies(succ);
    let prem = |k: usize| &ps[k];
    let is = |s: &Sequent, a: &[F], b: &[F]| multiset_eq(&s.antecedent, a) && multiset_eq(&s.succedent, b);
    let single_succ = |f: &F| -> bool { succ.len() == 1 && &succ[0] == f };
    let n_pr = |n: usize| pr.len() == n;
    let distinct = |x: usize, y: usize| -> bool { pr[x].index != pr[y].index };

    let ok = match inst.rule {
        Init => {
            let (_, a) = get(0, Side::Ant)?;
            let (_, s) = get(1, Side::Succ)?;
            n_pr(2) && a.is_atom() && a == s
        }
        LBot => n_pr(1) && *get(0, Side::Ant)?.1 == F::Bottom,
        LAnd => {
            let (i, f) = get(0, Side::Ant)?;
            let F::And(x, y) = f else { return Some(false) };
            n_pr(1) && is(prem(0), &with(without(ant, i), [(**x).clone(), (**y).clone()]), succ)
        }
        LOr => {
            let (i, f) = get(0, Side::Ant)?;
            let F::Or(x, y) = f else { return Some(false) };
            let rest = without(ant, i);
            n_pr(1) && is(prem(0), &with(rest.clone(), [(**x).clone()]), succ) && is(prem(1), &with(rest, [(**y).clone()]), succ)
        }
        RImp => {
            let (j, f) = get(0, Side::Succ)?;
            let F::Imp(x, y) = f else { return Some(false) };
            n_pr(1) && is(prem(0), &with(ant.clone(), [(**x).clone()]), &with(without(succ, j), [(**y).clone()]))
        }
        RAnd => {
            let (j, f) = get(0, Side::Succ)?;
            let F::And(x, y) = f else { return Some(false) };
            let rest = without(succ, j);
            n_pr(1)
                && is(prem(0), ant, &with(rest.clone(), [(**x).clone()]))
                && is(prem(1), ant, &with(rest, [(**y).clone()]))
        }
        ROr => {
            let (j, f) = get(0, Side::Succ)?;
            let F::Or(x, y) = f else { return Some(false) };
            n_pr(1) && is(prem(0), ant, &with(without(succ, j), [(**x).clone(), (**y).clone()]))
        }
        ROrI => {
            let (_, f) = get(0, Side::Succ)?;
            let F::Or(x, y) = f else { return Some(false) };
            n_pr(1) && (is(prem(0), ant, &[(**x).clone()]) || is(prem(0), ant, &[(**y).clone()]))
        }
        LImp => {
            let (i, f) = get(0, Side::Ant)?;
            let F::Imp(x, y) = f else { return Some(false) };
            let rest = without(ant, i);
            let right = is(prem(1), &with(rest.clone(), [(**y).clone()]), succ);
            let left = if classical {
                is(prem(0), &rest, &with(succ.clone(), [(**x).clone()]))
            } else {
                is(prem(0), ant, &[(**x).clone()])
            };
            n_pr(1) && left && right
        }
        MBox | IMBox | MDia | IMDia | D | ID => {
            let (la, ra): (fn(&F) -> Option<&F>, fn(&F) -> Option<&F>) = match inst.rule {
                MBox | IMBox => (F::box_body, F::box_body),
                MDia | IMDia => (F::dia_body, F::dia_body),
                _ => (F::box_body, F::dia_body),
            };
            let a = la(get(0, Side::Ant)?.1)?;
            let (_, sf) = get(1, Side::Succ)?;
            let b = ra(sf)?;
            n_pr(2) && (classical || single_succ(sf)) && is(prem(0), &[a.clone()], &[b.clone()])
        }
        DualAndM | IDualAndM => {
            let a = get(0, Side::Ant)?.1.box_body()?;
            let b = get(1, Side::Ant)?.1.dia_body()?;
            n_pr(2) && is(prem(0), &[a.clone(), b.clone()], &[])
        }
        DualOrM => {
            let a = get(0, Side::Succ)?.1.box_body()?;
            let b = get(1, Side::Succ)?.1.dia_body()?;
            n_pr(2) && is(prem(0), &[], &[a.clone(), b.clone()])
        }
        NBox | INBox | PDia | IPDia => {
            let (_, sf) = get(0, Side::Succ)?;
            let a = if matches!(inst.rule, NBox | INBox) { sf.box_body()? } else { sf.dia_body()? };
            n_pr(1) && (classical || single_succ(sf)) && is(prem(0), &[], &[a.clone()])
        }
        NDia | INDia | PBox | IPBox => {
            let f = get(0, Side::Ant)?.1;
            let a = if matches!(inst.rule, NDia | INDia) { f.dia_body()? } else { f.box_body()? };
            n_pr(1) && is(prem(0), &[a.clone()], &[])
        }
        TBox | ITBox => {
            let a = get(0, Side::Ant)?.1.box_body()?;
            n_pr(1) && is(prem(0), &with(ant.clone(), [a.clone()]), succ)
        }
        TDia => {
            let a = get(0, Side::Succ)?.1.dia_body()?;
            n_pr(1) && is(prem(0), ant, &with(succ.clone(), [a.clone()]))
        }
        ITDia => {
            let (_, sf) = get(0, Side::Succ)?;
            let a = sf.dia_body()?;
            n_pr(1) && single_succ(sf) && is(prem(0), ant, &[a.clone()])
        }
        DBox | IDBox => {
            let a = get(0, Side::Ant)?.1.box_body()?;
            let b = get(1, Side::Ant)?.1.box_body()?;
            n_pr(2) && distinct(0, 1) && is(prem(0), &[a.clone(), b.clone()], &[])
        }
        DDia => {
            let a = get(0, Side::Succ)?.1.dia_body()?;
            let b = get(1, Side::Succ)?.1.dia_body()?;
            n_pr(2) && distinct(0, 1) && is(prem(0), &[], &[a.clone(), b.clone()])
        }
        // boxed-context rules: the premise antecedent draws on the box bodies
        ICBox | IKBox | ICD => {
            let (_, sf) = get(0, Side::Succ)?;
            let a = if inst.rule == ICD { sf.dia_body()? } else { sf.box_body()? };
            let p = prem(0);
            n_pr(1)
                && single_succ(sf)
                && p.succedent == [a.clone()]
                && multiset_subset(&p.antecedent, &boxes)
                && (inst.rule != ICBox || !p.antecedent.is_empty())
        }
        ICDia | IKDia => {
            let a = get(0, Side::Ant)?.1.dia_body()?;
            let (_, sf) = get(1, Side::Succ)?;
            let b = sf.dia_body()?;
            let p = prem(0);
            let Some(rest) = remove_one(&p.antecedent, a) else { return Some(false) };
            n_pr(2) && single_succ(sf) && p.succedent == [b.clone()] && multiset_subset(&rest, &boxes)
        }
        IDualAndC | IDualAndK => {
            let a = get(0, Side::Ant)?.1.dia_body()?;
            let p = prem(0);
            let Some(rest) = remove_one(&p.antecedent, a) else { return Some(false) };
            n_pr(1)
                && p.succedent.is_empty()
                && multiset_subset(&rest, &boxes)
                && (inst.rule != IDualAndC || !rest.is_empty())
        }
        ICDBox => n_pr(0) && prem(0).succedent.is_empty() && multiset_subset(&prem(0).antecedent, &boxes),
        CBox | KBox => {
            let a = get(0, Side::Succ)?.1.box_body()?;
            let p = prem(0);
            let Some(rest) = remove_one(&p.succedent, a) else { return Some(false) };
            n_pr(1)
                && multiset_subset(&p.antecedent, &boxes)
                && multiset_subset(&rest, &dias)
                && (inst.rule != CBox || !p.antecedent.is_empty())
        }
        CDia => {
            let a = get(0, Side::Ant)?.1.dia_body()?;
            let b = get(1, Side::Succ)?.1.dia_body()?;
            let p = prem(0);
            let Some(ant_rest) = remove_one(&p.antecedent, a) else { return Some(false) };
            let dias_rest = remove_one(&dias, b)?;
            let Some(succ_rest) = remove_one(&p.succedent, b) else { return Some(false) };
            n_pr(2) && multiset_subset(&ant_rest, &boxes) && multiset_subset(&succ_rest, &dias_rest)
        }
        KDia => {
            let a = get(0, Side::Ant)?.1.dia_body()?;
            let p = prem(0);
            let Some(ant_rest) = remove_one(&p.antecedent, a) else { return Some(false) };
            n_pr(1) && multiset_subset(&ant_rest, &boxes) && multiset_subset(&p.succedent, &dias)
        }
        DualAndC => {
            let a = get(0, Side::Ant)?.1.dia_body()?;
            let p = prem(0);
            let Some(rest) = remove_one(&p.antecedent, a) else { return Some(false) };
            n_pr(1) && p.succedent.is_empty() && !rest.is_empty() && multiset_subset(&rest, &boxes)
        }
        DualOrC => {
            let a = get(0, Side::Succ)?.1.box_body()?;
            let b = get(1, Side::Succ)?.1.dia_body()?;
            let p = prem(0);
            let Some(rest) = remove_one(&p.succedent, a) else { return Some(false) };
            let Some(rest) = remove_one(&rest, b) else { return Some(false) };
            let dias_rest = remove_one(&dias, b)?;
            n_pr(2) && p.antecedent.is_empty() && multiset_subset(&rest, &dias_rest)
        }
        CD => {
            let p = prem(0);
            n_pr(0) && multiset_subset(&p.antecedent, &boxes) && multiset_subset(&p.succedent, &dias)
        }
    };
    Some(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SymbolTable};

    fn cseq(text: &str) -> Sequent {
        Sequent::parse(text, Mode::Constructive, &mut SymbolTable::reserving([text])).unwrap()
    }

    fn kseq(text: &str) -> Sequent {
        Sequent::parse(text, Mode::Classical, &mut SymbolTable::reserving([text])).unwrap()
    }

    fn logic(name: &str) -> LogicId {
        name.parse().unwrap()
    }

    #[test]
    fn logic_names_round_trip() {
        let all = LogicId::all();
        assert_eq!(all.len(), 28);
        for l in all {
            assert_eq!(l.name().parse::<LogicId>().unwrap(), l);
        }
        assert!("WS4".parse::<LogicId>().is_err());
    }

    #[test]
    fn rule_tables() {
        let modal = |n: &str| modal_rules(logic(n));
        use RuleId::*;
        assert_eq!(modal("WK"), vec![IKBox, IKDia, IDualAndK]);
        assert_eq!(modal("WMND"), [modal("WMN"), vec![ID, IDBox, IPBox, IPDia]].concat());
        assert_eq!(modal("K"), vec![KBox, KDia]);
        assert_eq!(modal("WMD"), vec![IMBox, IMDia, IDualAndM, ID, IDBox, IPBox, IPDia]);
        assert_eq!(modal("WKT"), vec![IKBox, IKDia, IDualAndK, ITBox, ITDia]);
        for l in LogicId::all() {
            for r in rules_for(l) {
                assert!(r.mode().map_or(true, |m| m == l.mode()), "{r} in {l}");
            }
        }
    }

    #[test]
    fn axiom_instances() {
        let (p, q) = (parse("p1").unwrap(), parse("p2").unwrap());
        let inst = |ax| instantiate_axiom(ax, &p, &q).formula().cloned().unwrap();
        assert_eq!(inst(AxiomId::CBox), parse("[]p1 & []p2 -> [](p1 & p2)").unwrap());
        assert_eq!(inst(AxiomId::NDia), parse("~<>bot").unwrap());
        assert_eq!(inst(AxiomId::TDia), parse("p1 -> <>p1").unwrap());
        assert_eq!(inst(AxiomId::KBox), parse("[](p1 -> p2) -> ([]p1 -> []p2)").unwrap());
        assert!(instantiate_axiom(AxiomId::Nec, &p, &q).formula().is_none());
    }

    #[test]
    fn wk_modal_applications() {
        let goal = cseq("[]p, <>q |- <>r");
        let apps = backward_applications(logic("WK"), &goal);
        let got: Vec<(RuleId, Vec<Sequent>)> = apps.iter().map(|a| (a.rule, a.premises.clone())).collect();
        let p = |t: &str| cseq(t);
        assert_eq!(
            got,
            vec![(RuleId::IKDia, vec![p("p1, p2 |- p3")]), (RuleId::IDualAndK, vec![p("p1, p2 |-")])]
        );
    }

    #[test]
    fn r_and_and_n_box() {
        let goal = cseq("p3 |- p1 & p2");
        let apps = backward_applications(logic("WM"), &goal);
        assert_eq!(apps.len(), 1);
        assert_eq!(apps[0].rule, RuleId::RAnd);
        assert_eq!(apps[0].premises, vec![cseq("p3 |- p1"), cseq("p3 |- p2")]);

        let goal = cseq("|- []top");
        let apps = backward_applications(logic("WMN"), &goal);
        let rules: Vec<RuleId> = apps.iter().map(|a| a.rule).collect();
        assert_eq!(rules, vec![RuleId::INBox]);
        assert_eq!(apps[0].premises, vec![cseq("|- top")]);
    }

    #[test]
    fn emitted_instances_check() {
        let goals = [
            "[]p1, <>p2, p1 -> p2, p3 & p4 |- <>p3",
            "[]p1, []p2, <>p1 |- []p3",
            "[](p1 | p2), <>p3 |-",
            "p1 | p2, []p1 |- p1 | p2",
        ];
        for l in LogicId::all_constructive() {
            for g in goals {
                for inst in backward_applications(l, &cseq(g)) {
                    assert!(check_step(l, &inst), "{l}: {:?}", inst);
                }
            }
        }
        let cgoals = ["[]p1, <>p2 |- []p3, <>p4, p1", "p1 -> p2, []p1 |- <>p1, <>p2, p3 | p4", "[]p1, []p2 |-"];
        for l in LogicId::all_classical() {
            for g in cgoals {
                for inst in backward_applications(l, &kseq(g)) {
                    assert!(check_step(l, &inst), "{l}: {:?}", inst);
                }
            }
        }
    }

    #[test]
    fn check_step_examples() {
        let ok = RuleInstance {
            rule: RuleId::IKBox,
            conclusion: cseq("[]p1 |- []p1"),
            premises: vec![cseq("p1 |- p1")],
            principal: vec![Principal::succ(0)],
        };
        assert!(check_step(logic("WK"), &ok));
        assert!(!check_step(logic("WM"), &ok));

        let no_box = RuleInstance {
            rule: RuleId::ICBox,
            conclusion: cseq("p1 |- []p1"),
            premises: vec![cseq("p1 |- p1")],
            principal: vec![Principal::succ(0)],
        };
        assert!(!check_step(logic("WMC"), &no_box));

        let contextful = RuleInstance {
            rule: RuleId::MBox,
            conclusion: kseq("p2, []p1 |- []p3"),
            premises: vec![kseq("p1, p2 |- p3")],
            principal: vec![Principal::ant(1), Principal::succ(0)],
        };
        assert!(!check_step(logic("M"), &contextful));
        let contextfree = RuleInstance { premises: vec![kseq("p1 |- p3")], ..contextful };
        assert!(check_step(logic("M"), &contextfree));
    }
}
