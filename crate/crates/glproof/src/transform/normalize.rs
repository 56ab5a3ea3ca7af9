//! LNGL normal form: above every boxR, a block of 4L inferences followed by a
//! block of boxL inferences, and no further propagations before the next boxR.

use std::collections::BTreeMap;

use crate::formula::Formula;
use crate::proof::{Meta, Node, Proof, Rule};
use crate::sequent::{insert_sorted, remove_one, LinearNestedSequent};

use super::TransformError;

/// Antecedent additions per component index.
type Additions = BTreeMap<usize, Vec<Formula>>;

fn with_additions(g: &LinearNestedSequent, extra: &Additions) -> LinearNestedSequent {
    let mut out = g.clone();
    for (k, fs) in extra {
        for f in fs {
            out.components[*k].add_left(f.clone());
        }
    }
    out
}

/// For each propagation, the largest number of times it occurs on one branch
/// above `node` before the next boxR.
fn phase_counts(node: &Node<LinearNestedSequent>) -> BTreeMap<(Rule, Formula), usize> {
    match node.rule {
        Rule::BoxR => BTreeMap::new(),
        r if r.is_propagation() => {
            let mut counts = phase_counts(&node.premises[0]);
            let f = node.meta.principal.clone().expect("checked propagation has a principal");
            *counts.entry((r, f)).or_insert(0) += 1;
            counts
        }
        _ => {
            let mut counts = BTreeMap::new();
            for p in &node.premises {
                for (k, n) in phase_counts(p) {
                    let e = counts.entry(k).or_insert(0);
                    *e = n.max(*e);
                }
            }
            counts
        }
    }
}

fn added_by(rule: Rule, f: &Formula) -> Formula {
    if rule == Rule::BoxL {
        f.unbox().expect("propagated formulas are boxed").clone()
    } else {
        f.clone()
    }
}

fn normalize(
    node: &Node<LinearNestedSequent>,
    extra: &Additions,
) -> Result<Node<LinearNestedSequent>, TransformError> {
    let conclusion = with_additions(&node.conclusion, extra);
    match node.rule {
        r if r.is_propagation() => {
            // already supplied by the block below
            let end = node.conclusion.len() - 1;
            let f = node.meta.principal.clone().expect("checked propagation has a principal");
            let mut rest = extra.clone();
            let slot = rest.entry(end).or_default();
            let added = added_by(r, &f);
            if !remove_one(slot, &added) {
                return Err(TransformError::NotNormalForm(format!("{r} of {f} outside its block")));
            }
            normalize(&node.premises[0], &rest)
        }
        Rule::BoxR => {
            let premise = &node.premises[0];
            let end = premise.conclusion.len() - 1;
            let counts = phase_counts(premise);
            let mut block: Vec<(Rule, Formula)> = Vec::new();
            for rule in [Rule::FourL, Rule::BoxL] {
                for ((r, f), n) in &counts {
                    if *r == rule {
                        block.extend(std::iter::repeat_n((rule, f.clone()), *n));
                    }
                }
            }
            let mut above = extra.clone();
            let mut sequents = vec![with_additions(&premise.conclusion, &above)];
            for (rule, f) in &block {
                insert_sorted(above.entry(end).or_default(), added_by(*rule, f));
                sequents.push(with_additions(&premise.conclusion, &above));
            }
            let mut top = normalize(premise, &above)?;
            for ((rule, f), s) in block.iter().zip(&sequents).rev() {
                top = Node::new(*rule, s.clone(), Meta::principal(f.clone()), vec![top]);
            }
            Ok(Node::new(Rule::BoxR, conclusion, node.meta.clone(), vec![top]))
        }
        _ => {
            let premises = node
                .premises
                .iter()
                .map(|p| normalize(p, extra))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Node::new(node.rule, conclusion, node.meta.clone(), premises))
        }
    }
}

/// Moves every propagation into the block directly above its boxR. A
/// propagation used on several branches is applied once in the block, as
/// often as the most demanding branch needs it; branches that used it less
/// carry the extra formulas as weakening.
pub fn normalize_lngl(
    p: &Proof<LinearNestedSequent>,
) -> Result<Proof<LinearNestedSequent>, TransformError> {
    Ok(Proof::new(p.calculus, normalize(&p.root, &Additions::new())?))
}
