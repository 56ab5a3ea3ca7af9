use glproof::check::{check_glcirc, check_k4seq_prefix, ReasonCode};
use glproof::format::parse_proof_file;
use glproof::proof::{Address, AnyProof, Calculus, CyclicDerivation, Node, Rule};
use glproof::sequent::GentzenSequent;
use glproof::transform::unfold_glcirc;

fn lob() -> CyclicDerivation {
    let text = include_str!("fixtures/lob_cyclic.glp");
    match parse_proof_file(text).unwrap() {
        AnyProof::Cyclic(d) => d,
        other => panic!("expected a cyclic derivation, got {}", other.calculus()),
    }
}

/// For each open leaf, the number of box4 nodes on its path from the root.
fn box4_per_open_leaf(root: &Node<GentzenSequent>) -> Vec<usize> {
    let mut out = Vec::new();
    for (addr, node) in root.walk() {
        if node.rule != Rule::Open {
            continue;
        }
        let count = (0..addr.depth())
            .filter(|k| root.get(&Address(addr.0[..*k].to_vec())).unwrap().rule == Rule::Box4)
            .count();
        out.push(count);
    }
    out
}

#[test]
fn lob_fixture_is_accepted() {
    let d = lob();
    let report = check_glcirc(&d);
    assert!(report.accepted, "{report}");
    assert_eq!(d.backlinks.len(), 1);
}

#[test]
fn depth_zero_keeps_the_finite_derivation() {
    let d = lob();
    let p = unfold_glcirc(&d, 0);
    assert_eq!(p.calculus, Calculus::K4seq);
    assert_eq!(p.size(), d.root.size());
    assert!(check_k4seq_prefix(&p).accepted);
}

#[test]
fn each_unfolding_adds_a_copy_of_the_cycle() {
    let d = lob();
    // the companion subtree minus the open leaf it replaces
    let companion = d.root.get(&Address(vec![0, 0, 0])).unwrap().size();
    let mut previous = unfold_glcirc(&d, 0);
    for depth in 1..=4 {
        let p = unfold_glcirc(&d, depth);
        assert_eq!(p.size(), previous.size() + companion - 1, "depth {depth}");
        let report = check_k4seq_prefix(&p);
        assert!(report.accepted, "depth {depth}: {report}");
        let counts = box4_per_open_leaf(&p.root);
        assert_eq!(counts, vec![depth + 2]);
        previous = p;
    }
}

#[test]
fn unfolded_prefix_is_not_a_finished_k4_proof() {
    let p = unfold_glcirc(&lob(), 2);
    let report = glproof::check::check_k4seq(&p);
    assert!(report.has(ReasonCode::OpenLeaf));
}

#[test]
fn missing_box4_on_the_cycle_is_linted() {
    let text = "calculus: GLcirc\n\
        (rule negL (concl \"~~p |- p\") (meta principal=\"~~p\")\n\
          (prems (rule negR (concl \"|- p, ~p\") (meta principal=\"~p\")\n\
            (prems (open (concl \"p |- p\") (backlink .))))))\n";
    let AnyProof::Cyclic(d) = parse_proof_file(text).unwrap() else { panic!("cyclic") };
    let report = check_glcirc(&d);
    assert!(report.has(ReasonCode::BadBacklink) || report.has(ReasonCode::LintNoBoxOnCycle));
}

#[test]
fn open_leaf_without_backlink_is_rejected() {
    let text = "calculus: GLcirc\n\
        (rule box4 (concl \"[]p |- []p\") (meta principal=\"[]p\" boxes=\"[]p\")\n\
          (prems (open (concl \"p, []p |- p\"))))\n";
    let AnyProof::Cyclic(d) = parse_proof_file(text).unwrap() else { panic!("cyclic") };
    assert_eq!(check_glcirc(&d).codes().into_iter().collect::<Vec<_>>(), vec![ReasonCode::OpenLeaf]);
}
