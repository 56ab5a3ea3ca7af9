mod common;

use glproof::check::{check_csgl, check_g3gl, check_glseq, G3GLMode};
use glproof::formula::parse_formula;
use glproof::proof::{AnyProof, Calculus, Meta, Rule};
use glproof::search::{decide_csgl, SearchConfig};
use glproof::sequent::{parse_gentzen, parse_labeled, Label, LabeledFormula, LabeledSequent};
use glproof::transform::{
    admit, admit_contract, admit_substitution, admit_weaken, apply_inverse, prove_general_id,
    prove_general_id_gentzen, AdmittedRule, TransformError,
};

use common::hp::{hp_violations, search_proofs};

fn csgl(text: &str) -> glproof::proof::Proof<LabeledSequent> {
    let t = LabeledSequent::of_formula(&Label::new("x"), parse_formula(text).unwrap());
    decide_csgl(&t, SearchConfig::default()).unwrap().proof().unwrap()
}

#[test]
fn hp_properties_on_search_proofs() {
    let proofs = search_proofs(60, 11);
    let mut total = 0;
    for p in &proofs {
        let (violations, checks) = hp_violations(p);
        assert!(violations.is_empty(), "{}", violations.join("\n"));
        total += checks;
    }
    assert!(total > proofs.len());
}

#[test]
fn general_identity_in_labeled_calculi() {
    let context = parse_labeled("xRy; x: q |- y: r").unwrap();
    let x = Label::new("x");
    for text in ["p", "[]p", "~[]p | q", "[](p -> q) & ~r", "~~(p | []q)"] {
        let f = parse_formula(text).unwrap();
        let p = prove_general_id(Calculus::CSGL, &context, &x, &f).unwrap();
        let report = check_csgl(&p);
        assert!(report.accepted, "{text}: {report}");
        let mut expected = context.clone();
        expected.add_left(&x, f.clone());
        expected.add_right(&x, f.clone());
        assert_eq!(p.conclusion(), &expected);
        let g3 = prove_general_id(Calculus::G3GL, &context, &x, &f).unwrap();
        assert!(check_g3gl(&g3, G3GLMode::Strict).accepted, "{text}");
    }
    assert!(matches!(
        prove_general_id(Calculus::GLseq, &context, &x, &parse_formula("p").unwrap()),
        Err(TransformError::NotApplicable(_))
    ));
}

#[test]
fn general_identity_in_glseq() {
    let context = parse_gentzen("q |- r").unwrap();
    let p = prove_general_id_gentzen(&context, &parse_formula("[]p | ~q").unwrap());
    assert!(check_glseq(&p).accepted);
    assert_eq!(p.height(), 0);
}

#[test]
fn weakening_renames_clashing_eigenlabels() {
    let p = csgl("[]p -> [][]p");
    let fresh: Vec<Label> = p
        .root
        .walk()
        .into_iter()
        .filter_map(|(_, n)| n.meta.fresh.clone())
        .collect();
    assert!(!fresh.is_empty());
    let mut extra = LabeledSequent::default();
    for y in &fresh {
        extra.relations.insert((Label::new("x"), y.clone()));
        extra.antecedent.push(LabeledFormula::new(y.clone(), parse_formula("q").unwrap()));
    }
    extra.antecedent.sort();
    let w = admit_weaken(&p, &extra).unwrap();
    let report = check_csgl(&w);
    assert!(report.accepted, "{report}");
    assert_eq!(w.conclusion(), &p.conclusion().union(&extra));
    assert!(w.height() <= p.height());
}

#[test]
fn weakening_that_breaks_the_tree_shape_is_refused() {
    let p = csgl("p | ~p");
    let extra = parse_labeled("yRx |-").unwrap();
    assert!(admit_weaken(&p, &extra).is_ok());
    let cyclic = parse_labeled("xRy; yRx |-").unwrap();
    assert!(matches!(admit_weaken(&p, &cyclic), Err(TransformError::ShapeViolation(_))));
}

#[test]
fn substitution_merges_labels() {
    let p = csgl("[](p & q) -> []p & []q");
    let mut extra = parse_labeled("xRz; z: r |-").unwrap();
    extra.antecedent.sort();
    let w = admit_weaken(&p, &extra).unwrap();
    let s = admit_substitution(&w, &Label::new("z"), &Label::new("x"));
    // merging z into its parent creates xRx, which no tree sequent has
    assert!(matches!(s, Err(TransformError::ShapeViolation(_))));
    let same = admit_substitution(&p, &Label::new("x"), &Label::new("x")).unwrap();
    assert_eq!(same, p);
    let renamed = admit_substitution(&p, &Label::new("x"), &Label::new("u")).unwrap();
    assert!(check_csgl(&renamed).accepted);
    assert_eq!(renamed.conclusion(), &p.conclusion().substitute(&Label::new("x"), &Label::new("u")));
}

#[test]
fn contraction_on_the_left() {
    let f = parse_formula("[]p & []q").unwrap();
    let x = Label::new("x");
    let base = parse_labeled("|- x: [](p & q)").unwrap();
    let mut context = base.clone();
    context.add_left(&x, f.clone());
    let p = prove_general_id(Calculus::CSGL, &LabeledSequent::default(), &x, &f).unwrap();
    let doubled = admit_weaken(&p, &parse_labeled("x: []p & []q |-").unwrap()).unwrap();
    let c = admit_contract(&doubled, true, &x, &f).unwrap();
    assert!(check_csgl(&c).accepted);
    assert_eq!(c.conclusion(), p.conclusion());
    assert!(c.height() <= doubled.height());
}

#[test]
fn contraction_of_a_right_box_principal_is_unsupported() {
    let p = csgl("[]p -> [][]p");
    let x = Label::new("x");
    let f = parse_formula("[][]p").unwrap();
    let inv = apply_inverse(
        Rule::OrR,
        &Meta::at(&x, parse_formula("[]p -> [][]p").unwrap()),
        0,
        &AnyProof::from(p),
    )
    .unwrap();
    let AnyProof::Labeled(q) = inv else { panic!("labeled") };
    let doubled = admit_weaken(&q, &parse_labeled("|- x: [][]p").unwrap()).unwrap();
    assert!(matches!(
        admit_contract(&doubled, false, &x, &f),
        Err(TransformError::Unsupported(_))
    ));
}

#[test]
fn inverse_of_a_rule_that_does_not_match_is_an_error() {
    let p: AnyProof = csgl("p | ~p").into();
    let meta = Meta::at(&Label::new("x"), parse_formula("p & q").unwrap());
    assert!(apply_inverse(Rule::OrR, &meta, 0, &p).is_err());
}

#[test]
fn admit_dispatch_checks_the_proof_kind() {
    let p: AnyProof = csgl("p | ~p").into();
    let rule = AdmittedRule::WeakenGentzen(parse_gentzen("q |-").unwrap());
    assert!(matches!(admit(&rule, &p), Err(TransformError::NotApplicable(_))));
}
