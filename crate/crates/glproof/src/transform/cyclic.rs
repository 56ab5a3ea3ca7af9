use crate::proof::{Address, Calculus, CyclicDerivation, Meta, Node, Proof, Rule};
use crate::sequent::GentzenSequent;

fn unfold(d: &CyclicDerivation, addr: &Address, remaining: usize) -> Node<GentzenSequent> {
    let node = d.root.get(addr).expect("address exists");
    if node.rule == Rule::Open {
        return match d.backlinks.get(addr) {
            Some(target) if remaining > 0 => unfold(d, target, remaining - 1),
            _ => Node::leaf(Rule::Open, node.conclusion.clone(), Meta::default()),
        };
    }
    let premises = (0..node.premises.len())
        .map(|i| unfold(d, &addr.child(i), remaining))
        .collect();
    Node::new(node.rule, node.conclusion.clone(), node.meta.clone(), premises)
}

/// Replaces each backlinked leaf by a copy of its companion's subtree,
/// `depth` times along every branch. The result is a finite prefix of the
/// non-wellfounded K4seq proof the cyclic derivation folds up.
pub fn unfold_glcirc(d: &CyclicDerivation, depth: usize) -> Proof<GentzenSequent> {
    Proof::new(Calculus::K4seq, unfold(d, &Address::root(), depth))
}
