mod common;

use std::collections::BTreeSet;

use glproof::check::{check_proof, end_active_report, normal_form_report};
use glproof::format::{parse_proof_file, print_proof};
use glproof::formula::{parse_formula, print_formula, Formula};
use glproof::oracle::{oracle_validity, ModelBound, OracleVerdict};
use glproof::proof::{AnyProof, Calculus};
use glproof::render::{render, RenderFormat};
use glproof::search::{prove_formula, FormulaOutcome, SearchConfig};
use glproof::semantics::{conclusion_interpretation, eval, parse_model};
use glproof::sequent::{
    parse_gentzen, parse_labeled, parse_nested, GentzenSequent, Label, LabeledFormula,
    LabeledSequent, LinearNestedSequent,
};
use glproof::transform::{linearize, normalize_lngl, to_end_active};
use proptest::prelude::*;

use common::arb_formula;

fn cfg() -> SearchConfig {
    SearchConfig {
        fuel: 20_000,
        ..SearchConfig::default()
    }
}

fn arb_gentzen() -> impl Strategy<Value = GentzenSequent> {
    (
        prop::collection::vec(arb_formula(3), 0..3),
        prop::collection::vec(arb_formula(3), 0..3),
    )
        .prop_map(|(a, c)| GentzenSequent::new(a, c))
}

fn arb_labeled() -> impl Strategy<Value = LabeledSequent> {
    let label = || prop::sample::select(vec!["x", "y", "z", "x1"]);
    let lf = || (label(), arb_formula(2)).prop_map(|(l, f)| LabeledFormula::new(Label::new(l), f));
    (
        prop::collection::btree_set((label(), label()), 0..3),
        prop::collection::vec(lf(), 0..3),
        prop::collection::vec(lf(), 0..3),
    )
        .prop_map(|(rel, a, c)| {
            let relations: BTreeSet<(Label, Label)> =
                rel.into_iter().map(|(x, y)| (Label::new(x), Label::new(y))).collect();
            LabeledSequent::new(relations, a, c)
        })
}

fn arb_model() -> impl Strategy<Value = String> {
    (1usize..5)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n * n),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(n, edges, p, q)| {
            let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let mut rel = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if edges[i * n + j] {
                        rel.push(format!("w{i}<w{j}"));
                    }
                }
            }
            let val = |v: &[bool]| -> String {
                (0..n).filter(|i| v[*i]).map(|i| format!(" w{i}")).collect()
            };
            format!(
                "worlds: {}\nrel: {}\nval p:{}\nval q:{}\n",
                worlds.join(" "),
                rel.join("; "),
                val(&p),
                val(&q)
            )
        })
}

fn sound(p: &AnyProof) -> bool {
    let f = conclusion_interpretation(p).expect("tree conclusion");
    oracle_validity(&f, ModelBound::default_for(&f)).unwrap().is_valid()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formula_print_parse_round_trip(f in arb_formula(5)) {
        let text = print_formula(&f);
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(print_formula(&back), text);
    }

    #[test]
    fn connectives_and_weight(f in arb_formula(5)) {
        prop_assert_eq!(f.weight(), f.connectives() + count_atoms(&f));
    }

    #[test]
    fn gentzen_round_trip(s in arb_gentzen()) {
        prop_assert_eq!(parse_gentzen(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn labeled_round_trip(s in arb_labeled()) {
        prop_assert_eq!(parse_labeled(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn nested_round_trip(cs in prop::collection::vec(arb_gentzen(), 1..4)) {
        let g = LinearNestedSequent::new(cs);
        prop_assert_eq!(parse_nested(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn model_text_round_trip(text in arb_model()) {
        let m = parse_model(&text).unwrap();
        prop_assert!(m.is_transitive());
        prop_assert!(m.is_acyclic());
        prop_assert_eq!(parse_model(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn loeb_holds_in_every_model(text in arb_model(), a in arb_formula(2)) {
        let m = parse_model(&text).unwrap();
        let boxed = Formula::boxed(a.clone());
        let loeb = Formula::implies(Formula::boxed(Formula::implies(boxed.clone(), a)), boxed);
        for w in m.worlds() {
            prop_assert!(eval(&m, w, &loeb).unwrap());
        }
    }

    #[test]
    fn countermodels_refute(f in arb_formula(3)) {
        if let OracleVerdict::Countermodel { model, world } =
            oracle_validity(&f, ModelBound::default_for(&f)).unwrap()
        {
            prop_assert!(!eval(&model, &world, &f).unwrap());
            prop_assert!(model.is_transitive() && model.is_acyclic());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn search_results_check_and_agree(f in arb_formula(3)) {
        let valid = oracle_validity(&f, ModelBound::default_for(&f)).unwrap().is_valid();
        for calculus in [Calculus::GLseq, Calculus::CSGL] {
            match prove_formula(&f, calculus, cfg()).unwrap() {
                FormulaOutcome::Proved(p) => {
                    prop_assert!(valid, "{} proved an invalid {}", calculus, f);
                    let report = check_proof(&p);
                    prop_assert!(report.accepted, "{}", report);
                    prop_assert!(sound(&p));
                    let text = print_proof(&p);
                    prop_assert_eq!(parse_proof_file(&text).unwrap(), p.clone());
                    for fmt in [RenderFormat::Text, RenderFormat::Dot, RenderFormat::Latex] {
                        prop_assert!(!render(&p, fmt).is_empty());
                    }
                }
                FormulaOutcome::NotProved { .. } => prop_assert!(!valid, "{} missed {}", calculus, f),
            }
        }
    }

    #[test]
    fn pipeline_invariants(f in arb_formula(3)) {
        if let FormulaOutcome::Proved(AnyProof::Labeled(p)) = prove_formula(&f, Calculus::CSGL, cfg()).unwrap() {
            let active = to_end_active(&p).unwrap();
            prop_assert_eq!(active.conclusion(), p.conclusion());
            prop_assert!(end_active_report(&active).accepted);
            let (lngl, path) = linearize(&active).unwrap();
            prop_assert_eq!(path, vec![Label::new("x")]);
            let lngl_any: AnyProof = lngl.clone().into();
            prop_assert!(check_proof(&lngl_any).accepted);
            prop_assert!(sound(&lngl_any));
            let normal = normalize_lngl(&lngl).unwrap();
            prop_assert_eq!(normal.conclusion(), lngl.conclusion());
            prop_assert!(normal_form_report(&normal).accepted);
            prop_assert!(check_proof(&normal.into()).accepted);
        }
    }
}

fn count_atoms(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) => 1,
        Formula::Not(a) | Formula::Box(a) => count_atoms(a),
        Formula::Or(a, b) => count_atoms(a) + count_atoms(b),
    }
}
