//! Rule permutation and the end-activation of CSGL proofs.

use std::collections::{BTreeMap, BTreeSet};

use crate::check::end_active_violation;
use crate::proof::{Address, Node, Proof};
use crate::relabel::{canonical_labels, labels_in, rename_node, FreshLabels};
use crate::rules::{labeled_premises, Expected};
use crate::sequent::{Label, LabeledSequent};

use super::admit::invert_labeled;
use super::TransformError;

fn premises_of(node_rule: crate::proof::Rule, meta: &crate::proof::Meta, s: &LabeledSequent) -> Result<Vec<LabeledSequent>, TransformError> {
    match labeled_premises(node_rule, meta, s) {
        Ok(Expected::Premises(ps)) => Ok(ps),
        Ok(_) => Err(TransformError::NotPermutable(format!("{node_rule} is structural"))),
        Err(e) => Err(TransformError::NotPermutable(e.message)),
    }
}

/// Gives every label introduced inside `node` (absent from its conclusion) a
/// new name.
fn refresh(node: &Node<LabeledSequent>, gen: &mut FreshLabels) -> Node<LabeledSequent> {
    let keep = node.conclusion.labels();
    let inner: BTreeSet<Label> = labels_in(node).difference(&keep).cloned().collect();
    let map: BTreeMap<Label, Label> = inner.into_iter().map(|l| (l, gen.fresh())).collect();
    rename_node(node, &map)
}

fn replace(root: &mut Node<LabeledSequent>, addr: &Address, node: Node<LabeledSequent>) {
    *root.get_mut(addr).expect("address exists") = node;
}

/// Exchanges the non-end-active local or propagation rule at `addr` with the
/// end-active rule directly below it. Premises of the lower rule that did
/// not contain the upper rule receive its inverse.
pub fn permute_down(p: &Proof<LabeledSequent>, addr: &Address) -> Result<Proof<LabeledSequent>, TransformError> {
    let upper = p
        .root
        .get(addr)
        .ok_or_else(|| TransformError::NotPermutable(format!("no node at {addr}")))?;
    if !(upper.rule.is_local() || upper.rule.is_propagation()) {
        return Err(TransformError::NotPermutable(format!("{} is not a local or propagation rule", upper.rule)));
    }
    if end_active_violation(upper).is_none() {
        return Err(TransformError::NotPermutable(format!("{} at {addr} is already end-active", upper.rule)));
    }
    let below = addr
        .parent()
        .ok_or_else(|| TransformError::NotPermutable("no rule below the root".into()))?;
    let lower = p.root.get(&below).expect("parent exists");
    if lower.rule.is_initial() {
        return Err(TransformError::NotPermutable("the rule below is initial".into()));
    }
    if let Some(v) = end_active_violation(lower) {
        return Err(TransformError::NotPermutable(format!("the rule below is not end-active: {v}")));
    }
    let slot = *addr.0.last().expect("non-root address");
    let mut gen = FreshLabels::avoiding("y", &p.root);

    let mut rebuilt = Vec::new();
    for (j, q) in premises_of(upper.rule, &upper.meta, &lower.conclusion)?.into_iter().enumerate() {
        let wanted = premises_of(lower.rule, &lower.meta, &q)?;
        let mut subproofs = Vec::new();
        for (l, w) in wanted.iter().enumerate() {
            let sub = if l == slot {
                upper.premises[j].clone()
            } else {
                invert_labeled(&lower.premises[l], upper.rule, &upper.meta, j)
                    .map_err(|e| TransformError::NotPermutable(e.to_string()))?
            };
            if &sub.conclusion != w {
                return Err(TransformError::NotPermutable(format!(
                    "premise {l} of the exchanged {} would be \"{}\" instead of \"{w}\"",
                    lower.rule, sub.conclusion
                )));
            }
            subproofs.push(sub);
        }
        let copy = Node::new(lower.rule, q, lower.meta.clone(), subproofs);
        // duplicated subproofs need their own eigenlabels
        rebuilt.push(if j == 0 { copy } else { refresh(&copy, &mut gen) });
    }
    let swapped = Node::new(upper.rule, lower.conclusion.clone(), upper.meta.clone(), rebuilt);
    let mut root = p.root.clone();
    replace(&mut root, &below, swapped);
    Ok(Proof::new(p.calculus, root))
}

fn bottom_most<F: Fn(&Node<LabeledSequent>) -> bool>(root: &Node<LabeledSequent>, pick: F) -> Option<Address> {
    root.breadth_first()
        .into_iter()
        .find(|a| pick(root.get(a).expect("address exists")))
}

fn is_flat_formula_sequent(s: &LabeledSequent) -> bool {
    s.is_flat() && s.antecedent.is_empty() && s.consequent.len() == 1
}

/// End-activation with the number of permutations and id pushes performed.
pub fn to_end_active_with_report(
    p: &Proof<LabeledSequent>,
) -> Result<(Proof<LabeledSequent>, usize), TransformError> {
    if !is_flat_formula_sequent(p.conclusion()) {
        return Err(TransformError::NotApplicable(format!(
            "end-activation needs a conclusion of the form |- x: A, got \"{}\"",
            p.conclusion()
        )));
    }
    let nodes = p.size();
    let guard = (nodes * nodes).max(64);
    let mut steps = 0;
    let mut cur = p.clone();
    while let Some(addr) = bottom_most(&cur.root, |n| {
        (n.rule.is_local() || n.rule.is_propagation()) && end_active_violation(n).is_some()
    }) {
        cur = permute_down(&cur, &addr)?;
        steps += 1;
        if steps > guard {
            return Err(TransformError::InternalNonTermination(steps));
        }
    }
    while let Some(addr) = bottom_most(&cur.root, |n| {
        n.rule.is_initial() && end_active_violation(n).is_some()
    }) {
        let leaf = cur.root.get(&addr).expect("address exists").clone();
        let below = addr.parent().expect("the root sequent has a single label");
        let base = cur.root.get(&below).expect("parent exists").conclusion.clone();
        if labeled_premises(leaf.rule, &leaf.meta, &base).is_err() {
            return Err(TransformError::NotPermutable(format!(
                "{} at {addr} does not close \"{base}\"",
                leaf.rule
            )));
        }
        replace(&mut cur.root, &below, Node::leaf(leaf.rule, base, leaf.meta));
        steps += 1;
        if steps > guard {
            return Err(TransformError::InternalNonTermination(steps));
        }
    }
    Ok((canonical_labels(&cur), steps))
}

/// Permutes non-end-active rules down until every local, propagation and
/// initial rule is end-active. Requires a conclusion `⊢ x: A`.
pub fn to_end_active(p: &Proof<LabeledSequent>) -> Result<Proof<LabeledSequent>, TransformError> {
    to_end_active_with_report(p).map(|(q, _)| q)
}
