//! Translations LNGL → GLseq → G3GLext, and the CSGL → G3GLext embedding.

use crate::check::{modal_block, normal_form_report};
use crate::formula::Formula;
use crate::proof::{Address, Calculus, Meta, Node, Proof, Rule};
use crate::relabel::FreshLabels;
use crate::rules::{gentzen_premises, labeled_premises, Expected};
use crate::sequent::{GentzenSequent, Label, LabeledSequent, LinearNestedSequent};

use super::admit::weaken_gentzen;
use super::TransformError;

fn to_gentzen(
    root: &Node<LinearNestedSequent>,
    addr: &Address,
) -> Result<Node<GentzenSequent>, TransformError> {
    let node = root.get(addr).expect("address exists");
    let end = node.conclusion.end().clone();
    let f = node.meta.principal.clone();
    let meta = || Meta::principal(f.clone().expect("checked rules carry a principal"));
    match node.rule {
        Rule::Id1 | Rule::Id2 => Ok(Node::leaf(Rule::Id, end, meta())),
        r if r.is_local() => {
            let premises = (0..node.premises.len())
                .map(|i| to_gentzen(root, &addr.child(i)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Node::new(r, end, meta(), premises))
        }
        Rule::BoxR => {
            let block = modal_block(root, addr)
                .map_err(|(at, message)| TransformError::NotNormalForm(format!("{at}: {message}")))?;
            let top = to_gentzen(root, &block.top)?;
            let (only_four, both, only_boxl) = block.partition();
            let boxes: Vec<Formula> = only_four.into_iter().chain(both).chain(only_boxl).collect();
            let modal = meta().with_boxes(boxes);
            let premise = gentzen_premises(Rule::BoxGL, &modal, &end, Rule::BoxGL)
                .map_err(|e| TransformError::NotNormalForm(e.message))?
                .remove(0);
            let extra = premise.minus(&top.conclusion).ok_or_else(|| {
                TransformError::NotNormalForm(format!(
                    "\"{}\" does not weaken to \"{premise}\"",
                    top.conclusion
                ))
            })?;
            let top = weaken_gentzen(&top, &extra);
            Ok(Node::new(Rule::BoxGL, end, modal, vec![top]))
        }
        r => Err(TransformError::NotNormalForm(format!("{r} outside a modal block at {addr}"))),
    }
}

/// Reads each end component as a Gentzen sequent; a boxR with its block of
/// propagations becomes a single boxGL whose boxed context is Σ1, Σ2, Σ3.
pub fn lngl_to_glseq(
    p: &Proof<LinearNestedSequent>,
) -> Result<Proof<GentzenSequent>, TransformError> {
    if p.conclusion().len() != 1 {
        return Err(TransformError::NotApplicable(format!(
            "conclusion \"{}\" has more than one component",
            p.conclusion()
        )));
    }
    let report = normal_form_report(p);
    if let Some(f) = report.failures.first() {
        return Err(TransformError::NotNormalForm(format!("{}: {}", f.address, f.message)));
    }
    Ok(Proof::new(Calculus::GLseq, to_gentzen(&p.root, &Address::root())?))
}

fn general_id_at(s: &LabeledSequent, x: &Label, f: &Formula) -> Node<LabeledSequent> {
    let mut context = s.clone();
    context.remove_left(x, f);
    context.remove_right(x, f);
    super::prove_general_id(Calculus::G3GLext, &context, x, f)
        .expect("G3GLext is a labeled calculus")
        .root
}

fn one_premise(rule: Rule, meta: &Meta, s: &LabeledSequent) -> LabeledSequent {
    match labeled_premises(rule, meta, s) {
        Ok(Expected::Premises(mut ps)) => ps.remove(0),
        other => panic!("template step {rule} failed on \"{s}\": {other:?}"),
    }
}

fn to_labeled(
    node: &Node<GentzenSequent>,
    x: &Label,
    labels: &mut FreshLabels,
) -> Result<Node<LabeledSequent>, TransformError> {
    let s = node.conclusion.labeled(x);
    let f = node.meta.principal.clone().expect("checked rules carry a principal");
    match node.rule {
        Rule::Id => Ok(general_id_at(&s, x, &f)),
        r if r.is_local() => {
            let premises = node
                .premises
                .iter()
                .map(|p| to_labeled(p, x, labels))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Node::new(r, s, Meta::at(x, f), premises))
        }
        Rule::BoxGL => {
            let boxes = node.meta.boxes.clone().unwrap_or_default();
            let y = labels.fresh();
            let box_r = Meta::at(x, f.clone()).with_fresh(&y);
            let mut steps = vec![(Rule::BoxR, box_r.clone(), s.clone())];
            let mut cur = one_premise(Rule::BoxR, &box_r, &s);
            for rule in [Rule::FourL, Rule::BoxL] {
                for b in &boxes {
                    let meta = Meta::at(x, b.clone()).with_aux(&y);
                    let next = one_premise(rule, &meta, &cur);
                    steps.push((rule, meta, cur));
                    cur = next;
                }
            }
            let body = node.premises[0].conclusion.labeled(&y);
            steps.push((Rule::Weaken, Meta::default(), cur));
            steps.push((Rule::Subst, Meta::substitution(x, &y), body));
            let mut top = to_labeled(&node.premises[0], x, labels)?;
            for (rule, meta, conclusion) in steps.into_iter().rev() {
                top = Node::new(rule, conclusion, meta, vec![top]);
            }
            Ok(top)
        }
        r => Err(TransformError::NotApplicable(format!("{r} is not a GLseq rule"))),
    }
}

/// `Γ ⊢ Δ` in GLseq to `x: Γ ⊢ x: Δ` in G3GLext. Each boxGL becomes boxR,
/// a 4L and a boxL per boxed context formula, a weakening down to the
/// fresh world, and a substitution renaming the translated premise onto it.
pub fn glseq_to_g3gl(p: &Proof<GentzenSequent>) -> Result<Proof<LabeledSequent>, TransformError> {
    if p.calculus != Calculus::GLseq {
        return Err(TransformError::NotApplicable(format!("{} is not GLseq", p.calculus)));
    }
    let x = Label::new("x");
    let mut labels = FreshLabels::new("y", [x.clone()].into());
    Ok(Proof::new(Calculus::G3GLext, to_labeled(&p.root, &x, &mut labels)?))
}

/// Every CSGL rule is a G3GLext rule; only the tag changes.
pub fn csgl_to_g3gl_embed(p: &Proof<LabeledSequent>) -> Proof<LabeledSequent> {
    Proof::new(Calculus::G3GLext, p.root.clone())
}
