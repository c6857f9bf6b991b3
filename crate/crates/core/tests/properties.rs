use proptest::prelude::*;

use wlogic::calculi::{backward_applications, check_step, LogicId};
use wlogic::interpolation::{interpolate_derivation, Partition};
use wlogic::prover::{check, decide, proof_from_text, proof_to_text, prove, Verdict};
use wlogic::semantics::{enumerate_countermodel, model_from_text, model_to_text, random_model, Model};
use wlogic::sequent::{interpret, Mode, Sequent};
use wlogic::suites;
use wlogic::syntax::{parse, Formula, Var};

fn formula(atoms: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Bottom), (1..=atoms).prop_map(Formula::atom)];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::dia),
        ]
    })
}

fn small_formula() -> impl Strategy<Value = Formula> {
    formula(3).prop_filter("size", |f| f.size() <= 7)
}

fn logic() -> impl Strategy<Value = LogicId> {
    prop::sample::select(LogicId::all())
}

fn sequent(mode: Mode) -> impl Strategy<Value = Sequent> {
    let max_succ = if mode == Mode::Constructive { 1 } else { 2 };
    (prop::collection::vec(small_formula(), 0..=3), prop::collection::vec(small_formula(), 0..=max_succ))
        .prop_map(move |(antecedent, succedent)| Sequent { antecedent, succedent, mode })
}

fn logic_and_sequent() -> impl Strategy<Value = (LogicId, Sequent)> {
    logic().prop_flat_map(|l| (Just(l), sequent(l.mode())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_render(f in formula(4)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn vars_contain_bottom_and_grow_with_subformulas(f in formula(3)) {
        let vars = f.vars();
        prop_assert!(vars.contains(&Var::Bottom));
        for g in f.subformula_closure() {
            prop_assert!(g.vars().is_subset(&vars));
        }
    }

    #[test]
    fn immediate_subformulas_are_simpler(f in formula(3)) {
        for c in f.children() {
            prop_assert!(c.complexity() < f.complexity());
        }
    }

    #[test]
    fn backward_steps_are_checked_and_analytic((l, s) in logic_and_sequent()) {
        let closure: std::collections::BTreeSet<Formula> =
            s.formulas().flat_map(|f| f.subformula_closure()).collect();
        for inst in backward_applications(l, &s) {
            prop_assert!(check_step(l, &inst), "{:?}", inst.rule);
            for p in &inst.premises {
                prop_assert!(p.is_well_formed());
                if l.mode() == Mode::Constructive {
                    prop_assert!(p.succedent.len() <= 1);
                }
                for f in p.formulas() {
                    prop_assert!(closure.contains(f) || f.is_top() || *f == Formula::Bottom, "{} not in closure", f);
                }
            }
        }
    }

    #[test]
    fn sequents_agree_with_their_formula((l, s) in logic_and_sequent()) {
        let derivable = prove(l, &s).unwrap().is_proved();
        let theorem = decide(l, &interpret(&s)).unwrap() == Verdict::Theorem;
        prop_assert_eq!(derivable, theorem, "{}", s);
    }

    #[test]
    fn proofs_check_and_round_trip((l, s) in logic_and_sequent()) {
        if let Some(d) = prove(l, &s).unwrap().derivation() {
            prop_assert!(check(l, &d));
            prop_assert_eq!(&d.conclusion, &s);
            let (l2, d2) = proof_from_text(&proof_to_text(l, &d)).unwrap();
            prop_assert_eq!(l2, l);
            prop_assert_eq!(d2, d);
        }
    }

    #[test]
    fn models_round_trip(l in logic(), worlds in 1usize..6, seed in any::<u64>()) {
        let m = random_model(l, worlds, seed).unwrap();
        prop_assert_eq!(model_from_text(&model_to_text(&m)).unwrap(), m.clone());
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<Model>(&json).unwrap(), m);
    }

    #[test]
    fn random_models_satisfy_their_conditions(l in logic(), worlds in 1usize..6, seed in any::<u64>()) {
        let m = random_model(l, worlds, seed).unwrap();
        prop_assert!(m.is_well_formed());
        prop_assert!(wlogic::semantics::is_model_for(&m, l));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn countermodels_only_for_non_theorems(l in logic(), f in small_formula()) {
        if let Some(cm) = enumerate_countermodel(l, &f, 2) {
            prop_assert!(wlogic::semantics::is_model_for(&cm.model, l));
            prop_assert!(!cm.model.forces(cm.world, &f));
            prop_assert_eq!(decide(l, &f).unwrap(), Verdict::NonTheorem);
        }
    }

    #[test]
    fn empty_left_part_gives_closed_certificate(
        l in prop::sample::select(LogicId::all_constructive()),
        s in sequent(Mode::Constructive),
    ) {
        if let Some(d) = prove(l, &s).unwrap().derivation() {
            let part = Partition::new(Vec::new(), s.antecedent.clone());
            let res = interpolate_derivation(l, &d, &part).unwrap();
            prop_assert!(res.left_certificate.conclusion.antecedent.is_empty());
            prop_assert!(check(l, &res.left_certificate) && check(l, &res.right_certificate));
        }
    }
}

#[test]
fn every_partition_interpolates() {
    for (k, l) in LogicId::all_constructive().into_iter().enumerate() {
        let r = suites::interpolation_partitions(l, 40, 6, 77 + k as u64);
        assert!(r.checks >= 40, "{r}");
        assert!(r.passed(), "{r}: {:?}", r.failures);
    }
}

#[test]
fn disjunction_property_is_two_sided() {
    // the converse direction holds by right disjunction
    for l in LogicId::all_constructive() {
        let f = Formula::or(Formula::atom(1), Formula::imp(Formula::atom(2), Formula::atom(2)));
        assert_eq!(decide(l, &f).unwrap(), Verdict::Theorem);
    }
}
