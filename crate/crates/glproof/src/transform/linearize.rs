//! From end-active CSGL proofs to LNGL proofs, following one branch of the
//! tree sequent at a time.

use crate::check::end_active_report;
use crate::proof::{Calculus, Meta, Node, Proof, Rule};
use crate::sequent::{path_projection, path_to, GentzenSequent, Label, LabeledSequent, LinearNestedSequent};

use super::TransformError;

type Translated = (Vec<Label>, Node<LinearNestedSequent>);

fn project(t: &LabeledSequent, path: &[Label]) -> Result<LinearNestedSequent, TransformError> {
    path_projection(t, path).map_err(|e| TransformError::NotEndActive(e.to_string()))
}

fn principal(node: &Node<LabeledSequent>) -> Meta {
    Meta::principal(node.meta.principal.clone().expect("checked rules carry a principal"))
}

fn label_of(node: &Node<LabeledSequent>) -> Label {
    node.meta.label.clone().expect("checked rules carry a label")
}

fn translate(node: &Node<LabeledSequent>) -> Result<Translated, TransformError> {
    let t = &node.conclusion;
    let unexpected = |x: &Label| {
        TransformError::NotEndActive(format!("{} at {x} is off the end of its branch", node.rule))
    };
    match node.rule {
        Rule::Id1 | Rule::Id2 => {
            let x = label_of(node);
            let path = path_to(t, &x);
            let g = project(t, &path)?;
            Ok((path, Node::leaf(node.rule, g, principal(node))))
        }
        Rule::NegL | Rule::NegR | Rule::OrR => {
            let x = label_of(node);
            let (path, sub) = translate(&node.premises[0])?;
            if path.last() == Some(&x) {
                let g = project(t, &path)?;
                Ok((path, Node::new(node.rule, g, principal(node), vec![sub])))
            } else if !path.contains(&x) {
                Ok((path, sub))
            } else {
                Err(unexpected(&x))
            }
        }
        Rule::OrL => {
            let x = label_of(node);
            let (left_path, left) = translate(&node.premises[0])?;
            let (right_path, right) = translate(&node.premises[1])?;
            if left_path.last() == Some(&x) && right_path.last() == Some(&x) {
                let g = project(t, &left_path)?;
                Ok((left_path, Node::new(Rule::OrL, g, principal(node), vec![left, right])))
            } else if !left_path.contains(&x) {
                Ok((left_path, left))
            } else if !right_path.contains(&x) {
                Ok((right_path, right))
            } else {
                Err(unexpected(&x))
            }
        }
        Rule::BoxL | Rule::FourL => {
            let x = label_of(node);
            let y = node.meta.aux.clone().expect("checked propagation has a target");
            let (path, sub) = translate(&node.premises[0])?;
            if path.last() == Some(&y) {
                if path.len() < 2 || path[path.len() - 2] != x {
                    return Err(unexpected(&x));
                }
                let g = project(t, &path)?;
                Ok((path, Node::new(node.rule, g, principal(node), vec![sub])))
            } else if !path.contains(&y) {
                Ok((path, sub))
            } else {
                Err(unexpected(&y))
            }
        }
        Rule::BoxR => {
            let x = label_of(node);
            let y = node.meta.fresh.clone().expect("checked boxR has a fresh label");
            let (mut path, sub) = translate(&node.premises[0])?;
            if path.last() == Some(&y) {
                path.pop();
                let g = project(t, &path)?;
                Ok((path, Node::new(Rule::BoxR, g, principal(node), vec![sub])))
            } else if let Some(k) = path.iter().position(|l| l == &x) {
                // the boxed formula stays in a component of the branch
                let f = node.meta.principal.clone().expect("checked boxR has a principal");
                let extra = GentzenSequent::new(vec![], vec![f]);
                let p = super::admit_weaken_nested(&Proof::new(Calculus::LNGL, sub), k, &extra)?;
                Ok((path, p.root))
            } else {
                Ok((path, sub))
            }
        }
        other => Err(TransformError::NotApplicable(format!("{other} is not a CSGL rule"))),
    }
}

/// Translates an end-active CSGL proof into LNGL. The returned path is the
/// branch of the conclusion whose projection the LNGL proof concludes.
pub fn linearize(
    p: &Proof<LabeledSequent>,
) -> Result<(Proof<LinearNestedSequent>, Vec<Label>), TransformError> {
    let report = end_active_report(p);
    if let Some(f) = report.failures.first() {
        return Err(TransformError::NotEndActive(format!("{}: {}", f.address, f.message)));
    }
    let (path, root) = translate(&p.root)?;
    Ok((Proof::new(Calculus::LNGL, root), path))
}
