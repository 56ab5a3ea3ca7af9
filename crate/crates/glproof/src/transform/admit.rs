//! Admissible rules as proof constructions: weakening, substitution,
//! contraction and rule inversion, each pushed up to the leaves of an existing
//! proof instead of being recorded as an inference.

use std::collections::BTreeMap;

use crate::formula::Formula;
use crate::proof::{AnyProof, Calculus, Meta, Node, Proof, Rule};
use crate::relabel::{rename_node, FreshLabels};
use crate::rules::{gentzen_premises, labeled_premises, nested_premises, Expected};
use crate::sequent::{
    tree_root, GentzenSequent, Label, LabeledFormula, LabeledSequent, LinearNestedSequent,
};

use super::TransformError;

/// An admissible rule instance, applied to the conclusion of a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmittedRule {
    /// adds the given relational atoms and labeled formulas
    Weaken(LabeledSequent),
    /// adds formulas to one component of a linear nested sequent
    WeakenNested {
        component: usize,
        extra: GentzenSequent,
    },
    WeakenGentzen(GentzenSequent),
    ContractLeft(LabeledFormula),
    ContractRight(LabeledFormula),
    /// replaces `from` by `to` everywhere
    Substitute { from: Label, to: Label },
}

pub fn admit(rule: &AdmittedRule, p: &AnyProof) -> Result<AnyProof, TransformError> {
    let mismatch = || TransformError::NotApplicable(format!("rule does not apply to {} proofs", p.calculus()));
    Ok(match (rule, p) {
        (AdmittedRule::Weaken(extra), AnyProof::Labeled(q)) => admit_weaken(q, extra)?.into(),
        (AdmittedRule::WeakenNested { component, extra }, AnyProof::Nested(q)) => {
            admit_weaken_nested(q, *component, extra)?.into()
        }
        (AdmittedRule::WeakenGentzen(extra), AnyProof::Gentzen(q)) => {
            admit_weaken_gentzen(q, extra).into()
        }
        (AdmittedRule::ContractLeft(lf), AnyProof::Labeled(q)) => {
            admit_contract(q, true, &lf.label, &lf.formula)?.into()
        }
        (AdmittedRule::ContractRight(lf), AnyProof::Labeled(q)) => {
            admit_contract(q, false, &lf.label, &lf.formula)?.into()
        }
        (AdmittedRule::Substitute { from, to }, AnyProof::Labeled(q)) => {
            admit_substitution(q, from, to)?.into()
        }
        _ => return Err(mismatch()),
    })
}

fn require_trees(p: &Proof<LabeledSequent>) -> Result<(), TransformError> {
    if p.calculus != Calculus::CSGL {
        return Ok(());
    }
    for (addr, n) in p.root.walk() {
        if let Err(e) = tree_root(&n.conclusion) {
            return Err(TransformError::ShapeViolation(format!("at {addr}: {e}")));
        }
    }
    Ok(())
}

fn generator(p: &Proof<LabeledSequent>, extra: &[&Label]) -> FreshLabels {
    let mut gen = FreshLabels::avoiding("y", &p.root);
    for l in extra {
        gen.reserve(l);
    }
    gen
}

fn single_premise(node: &Node<LabeledSequent>) -> &Node<LabeledSequent> {
    &node.premises[0]
}

/// Renames `old` to a fresh label throughout `node`.
fn rename_away(node: &Node<LabeledSequent>, old: &Label, gen: &mut FreshLabels) -> (Node<LabeledSequent>, Label) {
    let new = gen.fresh();
    let map = BTreeMap::from([(old.clone(), new.clone())]);
    (rename_node(node, &map), new)
}

fn weaken_labeled(
    node: &Node<LabeledSequent>,
    extra: &LabeledSequent,
    gen: &mut FreshLabels,
) -> Node<LabeledSequent> {
    let conclusion = node.conclusion.union(extra);
    let mut meta = node.meta.clone();
    let premises = match node.rule {
        Rule::Weaken => node.premises.clone(),
        Rule::BoxR => {
            let y = node.meta.fresh.clone().expect("checked boxR has a fresh label");
            let mut premise = single_premise(node).clone();
            if extra.mentions(&y) {
                let (renamed, fresh) = rename_away(&premise, &y, gen);
                premise = renamed;
                meta.fresh = Some(fresh);
            }
            vec![weaken_labeled(&premise, extra, gen)]
        }
        Rule::Subst => {
            let from = node.meta.from.clone().expect("checked substitution has from");
            let mut premise = single_premise(node).clone();
            if extra.mentions(&from) {
                let (renamed, fresh) = rename_away(&premise, &from, gen);
                premise = renamed;
                meta.from = Some(fresh);
            }
            vec![weaken_labeled(&premise, extra, gen)]
        }
        _ => node
            .premises
            .iter()
            .map(|p| weaken_labeled(p, extra, gen))
            .collect(),
    };
    Node::new(node.rule, conclusion, meta, premises)
}

/// Height-preserving weakening for labeled proofs; eigenlabels that clash
/// with the added material are renamed.
pub fn admit_weaken(
    p: &Proof<LabeledSequent>,
    extra: &LabeledSequent,
) -> Result<Proof<LabeledSequent>, TransformError> {
    let labels = extra.labels();
    let mut gen = generator(p, &labels.iter().collect::<Vec<_>>());
    let out = Proof::new(p.calculus, weaken_labeled(&p.root, extra, &mut gen));
    require_trees(&out)?;
    Ok(out)
}

fn weaken_nested(
    node: &Node<LinearNestedSequent>,
    component: usize,
    extra: &GentzenSequent,
) -> Node<LinearNestedSequent> {
    let mut conclusion = node.conclusion.clone();
    conclusion.components[component] = conclusion.components[component].union(extra);
    let premises = node
        .premises
        .iter()
        .map(|p| weaken_nested(p, component, extra))
        .collect();
    Node::new(node.rule, conclusion, node.meta.clone(), premises)
}

pub fn admit_weaken_nested(
    p: &Proof<LinearNestedSequent>,
    component: usize,
    extra: &GentzenSequent,
) -> Result<Proof<LinearNestedSequent>, TransformError> {
    if component >= p.root.conclusion.len() {
        return Err(TransformError::NotApplicable(format!(
            "component {component} does not exist"
        )));
    }
    Ok(Proof::new(p.calculus, weaken_nested(&p.root, component, extra)))
}

pub(crate) fn weaken_gentzen(node: &Node<GentzenSequent>, extra: &GentzenSequent) -> Node<GentzenSequent> {
    let premises = match node.rule {
        // the modal rules absorb context in their conclusion
        Rule::BoxGL | Rule::Box4 => node.premises.clone(),
        _ => node.premises.iter().map(|p| weaken_gentzen(p, extra)).collect(),
    };
    Node::new(node.rule, node.conclusion.union(extra), node.meta.clone(), premises)
}

pub fn admit_weaken_gentzen(p: &Proof<GentzenSequent>, extra: &GentzenSequent) -> Proof<GentzenSequent> {
    Proof::new(p.calculus, weaken_gentzen(&p.root, extra))
}

fn substitute_node(
    node: &Node<LabeledSequent>,
    from: &Label,
    to: &Label,
    gen: &mut FreshLabels,
) -> Result<Node<LabeledSequent>, TransformError> {
    let map = BTreeMap::from([(from.clone(), to.clone())]);
    let conclusion = node.conclusion.substitute(from, to);
    let (meta, premises) = match node.rule {
        Rule::BoxR => {
            let y = node.meta.fresh.clone().expect("checked boxR has a fresh label");
            let mut premise = single_premise(node).clone();
            let mut meta = node.meta.clone();
            if &y == from || &y == to {
                let (renamed, fresh) = rename_away(&premise, &y, gen);
                premise = renamed;
                meta.fresh = Some(fresh);
            }
            (meta.rename(&map), vec![substitute_node(&premise, from, to, gen)?])
        }
        Rule::Subst => {
            let a = node.meta.from.clone().expect("checked substitution has from");
            let b = node.meta.to.clone().expect("checked substitution has to");
            let mut premise = single_premise(node).clone();
            let mut a_new = a.clone();
            if &a == from || &a == to || &b == from {
                let (renamed, fresh) = rename_away(&premise, &a, gen);
                premise = renamed;
                a_new = fresh;
            }
            let b_new = if &b == from { to.clone() } else { b };
            let meta = Meta::substitution(&a_new, &b_new);
            (meta, vec![substitute_node(&premise, from, to, gen)?])
        }
        _ => {
            let premises = node
                .premises
                .iter()
                .map(|p| substitute_node(p, from, to, gen))
                .collect::<Result<Vec<_>, _>>()?;
            (node.meta.rename(&map), premises)
        }
    };
    Ok(Node::new(node.rule, conclusion, meta, premises))
}

/// The substitution rule `(to/from)` pushed to the leaves.
pub fn admit_substitution(
    p: &Proof<LabeledSequent>,
    from: &Label,
    to: &Label,
) -> Result<Proof<LabeledSequent>, TransformError> {
    if from == to {
        return Ok(p.clone());
    }
    let mut gen = generator(p, &[from, to]);
    let out = Proof::new(p.calculus, substitute_node(&p.root, from, to, &mut gen)?);
    require_trees(&out)?;
    Ok(out)
}

type ExpectedFn<'a, S> = dyn Fn(&Node<S>, &S) -> Result<Expected<S>, TransformError> + 'a;

/// Generic inversion: rewrites conclusions with `op` down to the inference
/// whose principal formula `op` removes, and splices out that inference.
fn invert_node<S: Clone + PartialEq + std::fmt::Display>(
    node: &Node<S>,
    i: usize,
    op: &dyn Fn(&S) -> Option<S>,
    is_principal: &dyn Fn(&Node<S>) -> bool,
    expected: &ExpectedFn<'_, S>,
    contained: &dyn Fn(&S, &S) -> bool,
) -> Result<Node<S>, TransformError> {
    let target = op(&node.conclusion).ok_or_else(|| {
        TransformError::NotApplicable(format!("no principal formula in \"{}\"", node.conclusion))
    })?;
    if is_principal(node) {
        return node
            .premises
            .get(i)
            .cloned()
            .ok_or_else(|| TransformError::NotApplicable(format!("no premise {i}")));
    }
    let recurse = |p: &Node<S>| invert_node(p, i, op, is_principal, expected, contained);
    let premises = match expected(node, &target)? {
        Expected::Premises(wanted) => {
            let mut out = Vec::new();
            for (p, w) in node.premises.iter().zip(&wanted) {
                let q = if &p.conclusion == w { p.clone() } else { recurse(p)? };
                if &q.conclusion != w {
                    return Err(TransformError::NotApplicable(format!(
                        "inversion produced \"{}\" where \"{w}\" was needed",
                        q.conclusion
                    )));
                }
                out.push(q);
            }
            out
        }
        Expected::Weakening => {
            let p = &node.premises[0];
            if contained(&p.conclusion, &target) {
                vec![p.clone()]
            } else {
                vec![recurse(p)?]
            }
        }
        Expected::Substitution { .. } => {
            return Err(TransformError::Unsupported(
                "inversion through a substitution".into(),
            ))
        }
    };
    Ok(Node::new(node.rule, target, node.meta.clone(), premises))
}

fn labeled_expected(node: &Node<LabeledSequent>, s: &LabeledSequent) -> Result<Expected<LabeledSequent>, TransformError> {
    labeled_premises(node.rule, &node.meta, s)
        .map_err(|e| TransformError::NotApplicable(e.message))
}

/// Inverts a local or propagation rule with the given metadata in a labeled proof.
pub(crate) fn invert_labeled(
    node: &Node<LabeledSequent>,
    rule: Rule,
    meta: &Meta,
    i: usize,
) -> Result<Node<LabeledSequent>, TransformError> {
    if !(rule.is_local() || rule.is_propagation()) {
        return Err(TransformError::Unsupported(format!("inversion of {rule}")));
    }
    let op = |s: &LabeledSequent| match labeled_premises(rule, meta, s) {
        Ok(Expected::Premises(ps)) => ps.into_iter().nth(i),
        _ => None,
    };
    let is_principal = |n: &Node<LabeledSequent>| {
        n.rule == rule
            && n.meta.principal == meta.principal
            && n.meta.label == meta.label
            && (!rule.is_propagation() || n.meta.aux == meta.aux)
    };
    let contained = |a: &LabeledSequent, b: &LabeledSequent| b.minus(a).is_some();
    invert_node(node, i, &op, &is_principal, &labeled_expected, &contained)
}

fn local_step(s: &GentzenSequent, rule: Rule, f: &Formula, i: usize) -> Option<GentzenSequent> {
    gentzen_premises(rule, &Meta::principal(f.clone()), s, Rule::BoxGL)
        .ok()
        .and_then(|ps| ps.into_iter().nth(i))
}

fn invert_gentzen(p: &Proof<GentzenSequent>, rule: Rule, f: &Formula, i: usize) -> Result<Node<GentzenSequent>, TransformError> {
    if !rule.is_local() {
        return Err(TransformError::Unsupported(format!("inversion of {rule} in {}", p.calculus)));
    }
    let modal = if p.calculus == Calculus::GLseq { Rule::BoxGL } else { Rule::Box4 };
    let op = |s: &GentzenSequent| local_step(s, rule, f, i);
    let is_principal = |n: &Node<GentzenSequent>| n.rule == rule && n.meta.principal.as_ref() == Some(f);
    let expected = |n: &Node<GentzenSequent>, s: &GentzenSequent| {
        gentzen_premises(n.rule, &n.meta, s, modal)
            .map(Expected::Premises)
            .map_err(|e| TransformError::NotApplicable(e.message))
    };
    let contained = |a: &GentzenSequent, b: &GentzenSequent| b.minus(a).is_some();
    invert_node(&p.root, i, &op, &is_principal, &expected, &contained)
}

fn invert_nested(p: &Proof<LinearNestedSequent>, rule: Rule, f: &Formula, i: usize) -> Result<Node<LinearNestedSequent>, TransformError> {
    let k = p.root.conclusion.len() - 1;
    if rule.is_propagation() {
        let body = f
            .unbox()
            .ok_or_else(|| TransformError::NotApplicable(format!("{f} is not boxed")))?;
        let penultimate_has = p.root.conclusion.penultimate().is_some_and(|c| c.antecedent.contains(f));
        if !penultimate_has {
            return Err(TransformError::NotApplicable(format!("{f} is not in the penultimate component")));
        }
        let added = if rule == Rule::BoxL { body.clone() } else { f.clone() };
        return Ok(weaken_nested(&p.root, k, &GentzenSequent::new(vec![added], vec![])));
    }
    if !rule.is_local() {
        return Err(TransformError::Unsupported(format!("inversion of {rule} in LNGL")));
    }
    let op = |s: &LinearNestedSequent| {
        let c = s.components.get(k)?;
        let mut out = s.clone();
        out.components[k] = local_step(c, rule, f, i)?;
        Some(out)
    };
    let is_principal = |n: &Node<LinearNestedSequent>| {
        n.rule == rule && n.meta.principal.as_ref() == Some(f) && n.conclusion.len() == k + 1
    };
    let expected = |n: &Node<LinearNestedSequent>, s: &LinearNestedSequent| {
        nested_premises(n.rule, &n.meta, s)
            .map(Expected::Premises)
            .map_err(|e| TransformError::NotApplicable(e.message))
    };
    let contained = |_: &LinearNestedSequent, _: &LinearNestedSequent| false;
    invert_node(&p.root, i, &op, &is_principal, &expected, &contained)
}

/// A proof of the `i`-th premise of `rule` applied (with `meta`) to the
/// conclusion of `p`, of no greater height. Labeled proofs need the principal
/// label in `meta`; LNGL principals are taken from the end component.
pub fn apply_inverse(rule: Rule, meta: &Meta, i: usize, p: &AnyProof) -> Result<AnyProof, TransformError> {
    let principal = meta
        .principal
        .as_ref()
        .ok_or_else(|| TransformError::NotApplicable("missing principal formula".into()))?;
    Ok(match p {
        AnyProof::Labeled(q) => {
            Proof::new(q.calculus, invert_labeled(&q.root, rule, meta, i)?).into()
        }
        AnyProof::Gentzen(q) => Proof::new(q.calculus, invert_gentzen(q, rule, principal, i)?).into(),
        AnyProof::Nested(q) => Proof::new(q.calculus, invert_nested(q, rule, principal, i)?).into(),
        AnyProof::Cyclic(_) => {
            return Err(TransformError::Unsupported("inversion in cyclic derivations".into()))
        }
    })
}

fn count(items: &[LabeledFormula], x: &Label, f: &Formula) -> usize {
    items.iter().filter(|lf| &lf.label == x && &lf.formula == f).count()
}

fn rule_side_left(rule: Rule) -> Option<bool> {
    match rule {
        Rule::NegL | Rule::OrL | Rule::BoxL | Rule::FourL | Rule::ContractL => Some(true),
        Rule::NegR | Rule::OrR | Rule::BoxR | Rule::ContractR => Some(false),
        _ => None,
    }
}

/// The formulas a local rule adds to premise `j`, as (left, formula).
fn local_aux(rule: Rule, f: &Formula, j: usize) -> Vec<(bool, Formula)> {
    match (rule, f) {
        (Rule::NegL, Formula::Not(a)) => vec![(false, (**a).clone())],
        (Rule::NegR, Formula::Not(a)) => vec![(true, (**a).clone())],
        (Rule::OrR, Formula::Or(a, b)) => vec![(false, (**a).clone()), (false, (**b).clone())],
        (Rule::OrL, Formula::Or(a, b)) => {
            vec![(true, if j == 0 { (**a).clone() } else { (**b).clone() })]
        }
        _ => vec![],
    }
}

fn contract_node(
    node: &Node<LabeledSequent>,
    left: bool,
    x: &Label,
    f: &Formula,
) -> Result<Node<LabeledSequent>, TransformError> {
    let side = if left { &node.conclusion.antecedent } else { &node.conclusion.consequent };
    if count(side, x, f) < 2 {
        return Err(TransformError::NotApplicable(format!(
            "{x}: {f} does not occur twice in \"{}\"",
            node.conclusion
        )));
    }
    let mut conclusion = node.conclusion.clone();
    if left {
        conclusion.remove_left(x, f);
    } else {
        conclusion.remove_right(x, f);
    }
    let principal_here = node.meta.label.as_ref() == Some(x)
        && node.meta.principal.as_ref() == Some(f)
        && rule_side_left(node.rule) == Some(left);
    if principal_here && node.rule == Rule::BoxR {
        return Err(TransformError::Unsupported(
            "contraction of a boxed formula introduced by boxR".into(),
        ));
    }
    if principal_here && node.rule.is_local() {
        let mut premises = Vec::new();
        for (j, p) in node.premises.iter().enumerate() {
            let mut q = invert_labeled(p, node.rule, &node.meta, j)?;
            for (aux_left, g) in local_aux(node.rule, f, j) {
                q = contract_node(&q, aux_left, x, &g)?;
            }
            premises.push(q);
        }
        return Ok(Node::new(node.rule, conclusion, node.meta.clone(), premises));
    }
    let premises = match node.rule {
        Rule::Subst => return Err(TransformError::Unsupported("contraction through a substitution".into())),
        Rule::Weaken => {
            let p = &node.premises[0];
            let side = if left { &p.conclusion.antecedent } else { &p.conclusion.consequent };
            if count(side, x, f) >= 2 {
                vec![contract_node(p, left, x, f)?]
            } else {
                vec![p.clone()]
            }
        }
        _ => node
            .premises
            .iter()
            .map(|p| contract_node(p, left, x, f))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(Node::new(node.rule, conclusion, node.meta.clone(), premises))
}

/// Contraction of two copies of `x: f` on one side of the conclusion.
pub fn admit_contract(
    p: &Proof<LabeledSequent>,
    left: bool,
    x: &Label,
    f: &Formula,
) -> Result<Proof<LabeledSequent>, TransformError> {
    Ok(Proof::new(p.calculus, contract_node(&p.root, left, x, f)?))
}

fn general_id(s: &LabeledSequent, x: &Label, f: &Formula) -> Node<LabeledSequent> {
    let meta = Meta::at(x, f.clone());
    match f {
        Formula::Atom(_) => Node::leaf(Rule::Id1, s.clone(), meta),
        Formula::Box(_) => Node::leaf(Rule::Id2, s.clone(), meta),
        Formula::Not(a) => {
            let mut upper = s.clone();
            upper.remove_right(x, f);
            upper.add_left(x, (**a).clone());
            let mut top = upper.clone();
            top.remove_left(x, f);
            top.add_right(x, (**a).clone());
            let neg_l = Node::new(Rule::NegL, upper, meta.clone(), vec![general_id(&top, x, a)]);
            Node::new(Rule::NegR, s.clone(), meta, vec![neg_l])
        }
        Formula::Or(a, b) => {
            let mut upper = s.clone();
            upper.remove_right(x, f);
            upper.add_right(x, (**a).clone());
            upper.add_right(x, (**b).clone());
            let mut base = upper.clone();
            base.remove_left(x, f);
            let branch = |g: &Formula| {
                let mut t = base.clone();
                t.add_left(x, g.clone());
                general_id(&t, x, g)
            };
            let or_l = Node::new(Rule::OrL, upper, meta.clone(), vec![branch(a), branch(b)]);
            Node::new(Rule::OrR, s.clone(), meta, vec![or_l])
        }
    }
}

/// A proof of `context, x: f ⊢ x: f, context` in a labeled calculus, by
/// induction on `f`.
pub fn prove_general_id(
    calculus: Calculus,
    context: &LabeledSequent,
    x: &Label,
    f: &Formula,
) -> Result<Proof<LabeledSequent>, TransformError> {
    if !matches!(calculus, Calculus::CSGL | Calculus::G3GL | Calculus::G3GLext) {
        return Err(TransformError::NotApplicable(format!("{calculus} is not a labeled calculus")));
    }
    let mut s = context.clone();
    s.add_left(x, f.clone());
    s.add_right(x, f.clone());
    let p = Proof::new(calculus, general_id(&s, x, f));
    require_trees(&p)?;
    Ok(p)
}

/// In GLseq every identity sequent is an axiom instance.
pub fn prove_general_id_gentzen(context: &GentzenSequent, f: &Formula) -> Proof<GentzenSequent> {
    let s = context.clone().with_left(f.clone()).with_right(f.clone());
    Proof::new(Calculus::GLseq, Node::leaf(Rule::Id, s, Meta::principal(f.clone())))
}
