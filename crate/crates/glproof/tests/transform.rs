use glproof::check::{
    check_csgl, check_g3gl, check_glseq, check_lngl, end_active_report, normal_form_report,
    G3GLMode,
};
use glproof::formula::{parse_formula, Formula};
use glproof::oracle::is_valid;
use glproof::proof::{Calculus, Proof};
use glproof::search::{decide_csgl, decide_csgl_with, CsglStrategy, SearchConfig};
use glproof::semantics::lns_interpretation;
use glproof::sequent::{path_projection, GentzenSequent, Label, LabeledSequent};
use glproof::transform::{
    csgl_to_g3gl_embed, glseq_to_g3gl, linearize, lngl_to_glseq, normalize_lngl, to_end_active,
};

const CORPUS: [&str; 11] = [
    "[]([]p -> p) -> []p",
    "[](p -> q) -> ([]p -> []q)",
    "[]p -> [][]p",
    "p | ~p",
    "[](p | ~p)",
    "[][](p | ~p)",
    "[][][](p | ~p)",
    "[][]([][]p -> [][][]p)",
    "[]([]([]p -> p) -> []p)",
    "[]p | []q -> [](p | q)",
    "[](p & q) | []([]r -> r) -> [](p | []r)",
];

fn csgl_proof(f: &Formula, strategy: CsglStrategy) -> Proof<LabeledSequent> {
    let t = LabeledSequent::of_formula(&Label::new("x"), f.clone());
    decide_csgl_with(&t, SearchConfig::default(), strategy)
        .unwrap()
        .proof()
        .unwrap_or_else(|| panic!("{f} not proved"))
}

#[test]
fn full_pipeline_on_corpus() {
    for text in CORPUS {
        let f = parse_formula(text).unwrap();
        let csgl = csgl_proof(&f, CsglStrategy::Leaf);
        assert!(check_csgl(&csgl).accepted, "{text}");
        let active = to_end_active(&csgl).unwrap();
        assert!(end_active_report(&active).accepted, "{text}");
        assert_eq!(active.conclusion(), csgl.conclusion());
        let (lngl, path) = linearize(&active).unwrap();
        let report = check_lngl(&lngl);
        assert!(report.accepted, "{text}: {report}");
        assert_eq!(path, vec![Label::new("x")]);
        assert_eq!(lngl.conclusion().to_string(), format!("|- {f}"));
        let normal = normalize_lngl(&lngl).unwrap();
        let report = check_lngl(&normal);
        assert!(report.accepted, "{text}: {report}");
        assert!(normal_form_report(&normal).accepted, "{text}");
        assert_eq!(normal.conclusion(), lngl.conclusion());
        let glseq = lngl_to_glseq(&normal).unwrap();
        let report = check_glseq(&glseq);
        assert!(report.accepted, "{text}: {report}");
        assert_eq!(glseq.conclusion(), &GentzenSequent::of_formula(f.clone()));
        let g3 = glseq_to_g3gl(&glseq).unwrap();
        let report = check_g3gl(&g3, G3GLMode::Extended);
        assert!(report.accepted, "{text}: {report}");
        assert_eq!(g3.conclusion(), csgl.conclusion());
    }
}

#[test]
fn deferred_proofs_become_end_active() {
    for text in CORPUS {
        let f = parse_formula(text).unwrap();
        let csgl = csgl_proof(&f, CsglStrategy::Deferred);
        assert!(check_csgl(&csgl).accepted, "{text}");
        let active = to_end_active(&csgl).unwrap();
        let report = check_csgl(&active);
        assert!(report.accepted, "{text}: {report}");
        assert!(end_active_report(&active).accepted, "{text}");
        assert_eq!(active.conclusion(), csgl.conclusion());
        let (lngl, _) = linearize(&active).unwrap();
        assert!(check_lngl(&lngl).accepted, "{text}");
    }
}

#[test]
fn some_deferred_proof_is_not_end_active() {
    let found = CORPUS.iter().any(|text| {
        let f = parse_formula(text).unwrap();
        !end_active_report(&csgl_proof(&f, CsglStrategy::Deferred)).accepted
    });
    assert!(found);
}

#[test]
fn end_active_input_is_a_fixpoint() {
    let f = parse_formula(CORPUS[0]).unwrap();
    let csgl = csgl_proof(&f, CsglStrategy::Leaf);
    assert_eq!(to_end_active(&csgl).unwrap(), csgl);
}

#[test]
fn linearized_conclusions_are_projections_and_valid() {
    for text in CORPUS {
        let f = parse_formula(text).unwrap();
        let active = to_end_active(&csgl_proof(&f, CsglStrategy::Deferred)).unwrap();
        let (lngl, path) = linearize(&active).unwrap();
        assert_eq!(&path_projection(active.conclusion(), &path).unwrap(), lngl.conclusion());
        assert!(is_valid(&lns_interpretation(lngl.conclusion())).unwrap());
    }
}

#[test]
fn embedding_is_extended_only() {
    let f = parse_formula("[]p -> [][]p").unwrap();
    let t = LabeledSequent::of_formula(&Label::new("x"), f);
    let p = decide_csgl(&t, SearchConfig::default()).unwrap().proof().unwrap();
    let g3 = csgl_to_g3gl_embed(&p);
    assert_eq!(g3.calculus, Calculus::G3GLext);
    assert!(check_g3gl(&g3, G3GLMode::Extended).accepted);
    let strict = Proof::new(Calculus::G3GL, g3.root.clone());
    assert!(!check_g3gl(&strict, G3GLMode::Strict).accepted);
}
