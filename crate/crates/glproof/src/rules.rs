//! Premise reconstruction: given a rule, its metadata and a conclusion, the
//! premises the rule demands. Checkers compare these with the recorded
//! premises; transformations use them to rebuild proofs.

use crate::check::ReasonCode;
use crate::formula::Formula;
use crate::proof::{Meta, Rule};
use crate::sequent::{
    multiset_minus, GentzenSequent, Label, LabeledSequent, LinearNestedSequent,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleError {
    pub code: ReasonCode,
    pub message: String,
}

impl RuleError {
    pub fn new(code: ReasonCode, message: impl Into<String>) -> RuleError {
        RuleError {
            code,
            message: message.into(),
        }
    }

    fn schema(message: impl Into<String>) -> RuleError {
        RuleError::new(ReasonCode::SchemaMismatch, message)
    }
}

/// What the recorded premises of a node must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected<S> {
    Premises(Vec<S>),
    /// one premise contained in the conclusion
    Weakening,
    /// one premise that becomes the conclusion under `from := to`
    Substitution { from: Label, to: Label },
}

fn principal(meta: &Meta) -> Result<&Formula, RuleError> {
    meta.principal
        .as_ref()
        .ok_or_else(|| RuleError::schema("missing principal formula"))
}

fn label(meta: &Meta) -> Result<&Label, RuleError> {
    meta.label
        .as_ref()
        .ok_or_else(|| RuleError::schema("missing principal label"))
}

fn aux(meta: &Meta) -> Result<&Label, RuleError> {
    meta.aux
        .as_ref()
        .ok_or_else(|| RuleError::schema("missing auxiliary label"))
}

fn expect_not(f: &Formula) -> Result<&Formula, RuleError> {
    match f {
        Formula::Not(a) => Ok(a),
        _ => Err(RuleError::schema(format!("{f} is not a negation"))),
    }
}

fn expect_or(f: &Formula) -> Result<(&Formula, &Formula), RuleError> {
    match f {
        Formula::Or(a, b) => Ok((a, b)),
        _ => Err(RuleError::schema(format!("{f} is not a disjunction"))),
    }
}

fn expect_box(f: &Formula) -> Result<&Formula, RuleError> {
    f.unbox()
        .ok_or_else(|| RuleError::schema(format!("{f} is not a boxed formula")))
}

fn missing(side: &str, what: impl std::fmt::Display) -> RuleError {
    RuleError::schema(format!("{what} does not occur in the {side}"))
}

/// Gentzen rules; `modal` is the calculus' modal rule (`boxGL` or `box4`).
pub fn gentzen_premises(
    rule: Rule,
    meta: &Meta,
    concl: &GentzenSequent,
    modal: Rule,
) -> Result<Vec<GentzenSequent>, RuleError> {
    let mut s = concl.clone();
    match rule {
        Rule::Id => {
            let f = principal(meta)?;
            if !concl.antecedent.contains(f) || !concl.consequent.contains(f) {
                return Err(RuleError::schema(format!("{f} is not on both sides")));
            }
            Ok(vec![])
        }
        Rule::NegL => {
            let f = principal(meta)?;
            let a = expect_not(f)?;
            if !s.remove_left(f) {
                return Err(missing("antecedent", f));
            }
            Ok(vec![s.with_right(a.clone())])
        }
        Rule::NegR => {
            let f = principal(meta)?;
            let a = expect_not(f)?;
            if !s.remove_right(f) {
                return Err(missing("consequent", f));
            }
            Ok(vec![s.with_left(a.clone())])
        }
        Rule::OrL => {
            let f = principal(meta)?;
            let (a, b) = expect_or(f)?;
            if !s.remove_left(f) {
                return Err(missing("antecedent", f));
            }
            Ok(vec![s.clone().with_left(a.clone()), s.with_left(b.clone())])
        }
        Rule::OrR => {
            let f = principal(meta)?;
            let (a, b) = expect_or(f)?;
            if !s.remove_right(f) {
                return Err(missing("consequent", f));
            }
            Ok(vec![s.with_right(a.clone()).with_right(b.clone())])
        }
        Rule::BoxGL | Rule::Box4 if rule == modal => {
            let f = principal(meta)?;
            let body = expect_box(f)?;
            if !concl.consequent.contains(f) {
                return Err(missing("consequent", f));
            }
            let boxes = meta.boxes.as_ref().ok_or_else(|| {
                RuleError::new(ReasonCode::BadPartition, "missing boxed context")
            })?;
            if let Some(b) = boxes.iter().find(|b| !b.is_box()) {
                return Err(RuleError::new(
                    ReasonCode::BadPartition,
                    format!("{b} in the boxed context is not boxed"),
                ));
            }
            let mut sorted = boxes.clone();
            sorted.sort();
            if multiset_minus(&concl.antecedent, &sorted).is_none() {
                return Err(RuleError::new(
                    ReasonCode::BadPartition,
                    "boxed context is not contained in the antecedent",
                ));
            }
            let mut ant = sorted.clone();
            ant.extend(sorted.iter().map(|b| b.unbox().unwrap().clone()));
            if rule == Rule::BoxGL {
                ant.push(f.clone());
            }
            Ok(vec![GentzenSequent::new(ant, vec![body.clone()])])
        }
        _ => Err(RuleError::new(
            ReasonCode::UnknownRule,
            format!("rule {rule} is not part of this calculus"),
        )),
    }
}

pub fn labeled_premises(
    rule: Rule,
    meta: &Meta,
    concl: &LabeledSequent,
) -> Result<Expected<LabeledSequent>, RuleError> {
    let mut s = concl.clone();
    let done = |v: Vec<LabeledSequent>| Ok(Expected::Premises(v));
    match rule {
        Rule::Id1 | Rule::Id2 => {
            let f = principal(meta)?;
            let x = label(meta)?;
            let shape_ok = if rule == Rule::Id1 {
                f.is_atom()
            } else {
                f.is_box()
            };
            if !shape_ok {
                return Err(RuleError::schema(format!("{f} has the wrong shape for {rule}")));
            }
            if !concl.has_left(x, f) || !concl.has_right(x, f) {
                return Err(RuleError::schema(format!("{x}: {f} is not on both sides")));
            }
            done(vec![])
        }
        Rule::Ir => {
            let x = label(meta)?;
            if !concl.relations.contains(&(x.clone(), x.clone())) {
                return Err(RuleError::schema(format!("{x}R{x} does not occur")));
            }
            done(vec![])
        }
        Rule::Tr => {
            let path = meta
                .path
                .as_ref()
                .filter(|p| p.len() == 3)
                .ok_or_else(|| RuleError::schema("tr needs path=\"x y z\""))?;
            let (x, y, z) = (&path[0], &path[1], &path[2]);
            if !concl.relations.contains(&(x.clone(), y.clone()))
                || !concl.relations.contains(&(y.clone(), z.clone()))
            {
                return Err(RuleError::schema(format!("{x}R{y}, {y}R{z} do not occur")));
            }
            s.relations.insert((x.clone(), z.clone()));
            done(vec![s])
        }
        Rule::NegL => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let a = expect_not(f)?;
            if !s.remove_left(x, f) {
                return Err(missing("antecedent", format!("{x}: {f}")));
            }
            s.add_right(x, a.clone());
            done(vec![s])
        }
        Rule::NegR => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let a = expect_not(f)?;
            if !s.remove_right(x, f) {
                return Err(missing("consequent", format!("{x}: {f}")));
            }
            s.add_left(x, a.clone());
            done(vec![s])
        }
        Rule::OrL => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let (a, b) = expect_or(f)?;
            if !s.remove_left(x, f) {
                return Err(missing("antecedent", format!("{x}: {f}")));
            }
            let mut left = s.clone();
            left.add_left(x, a.clone());
            s.add_left(x, b.clone());
            done(vec![left, s])
        }
        Rule::OrR => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let (a, b) = expect_or(f)?;
            if !s.remove_right(x, f) {
                return Err(missing("consequent", format!("{x}: {f}")));
            }
            s.add_right(x, a.clone());
            s.add_right(x, b.clone());
            done(vec![s])
        }
        Rule::BoxL | Rule::FourL => {
            let (f, x, y) = (principal(meta)?, label(meta)?, aux(meta)?);
            let body = expect_box(f)?;
            if !concl.has_left(x, f) {
                return Err(missing("antecedent", format!("{x}: {f}")));
            }
            if !concl.relations.contains(&(x.clone(), y.clone())) {
                return Err(RuleError::schema(format!("{x}R{y} does not occur")));
            }
            let added = if rule == Rule::BoxL { body } else { f };
            s.add_left(y, added.clone());
            done(vec![s])
        }
        Rule::BoxR => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let body = expect_box(f)?;
            let y = meta
                .fresh
                .as_ref()
                .ok_or_else(|| RuleError::schema("missing fresh label"))?;
            if concl.mentions(y) {
                return Err(RuleError::new(
                    ReasonCode::FreshnessViolation,
                    format!("label {y} occurs in the conclusion"),
                ));
            }
            if !s.remove_right(x, f) {
                return Err(missing("consequent", format!("{x}: {f}")));
            }
            s.relations.insert((x.clone(), y.clone()));
            s.add_left(y, f.clone());
            s.add_right(y, body.clone());
            done(vec![s])
        }
        Rule::ContractL | Rule::ContractR => {
            let (f, x) = (principal(meta)?, label(meta)?);
            if rule == Rule::ContractL {
                if !concl.has_left(x, f) {
                    return Err(missing("antecedent", format!("{x}: {f}")));
                }
                s.add_left(x, f.clone());
            } else {
                if !concl.has_right(x, f) {
                    return Err(missing("consequent", format!("{x}: {f}")));
                }
                s.add_right(x, f.clone());
            }
            done(vec![s])
        }
        Rule::Cut => {
            let (f, x) = (principal(meta)?, label(meta)?);
            let mut left = s.clone();
            left.add_right(x, f.clone());
            s.add_left(x, f.clone());
            done(vec![left, s])
        }
        Rule::Weaken => Ok(Expected::Weakening),
        Rule::Subst => {
            let from = meta
                .from
                .clone()
                .ok_or_else(|| RuleError::schema("missing from label"))?;
            let to = meta
                .to
                .clone()
                .ok_or_else(|| RuleError::schema("missing to label"))?;
            Ok(Expected::Substitution { from, to })
        }
        _ => Err(RuleError::new(
            ReasonCode::UnknownRule,
            format!("rule {rule} does not act on labeled sequents"),
        )),
    }
}

/// Whether `small` is contained in `big` (relational atoms as a set, formulas as multisets).
pub fn labeled_contained(small: &LabeledSequent, big: &LabeledSequent) -> bool {
    big.minus(small).is_some()
}

fn locate(g: &LinearNestedSequent, left: bool, f: &Formula) -> Option<usize> {
    g.components.iter().position(|c| {
        if left {
            c.antecedent.contains(f)
        } else {
            c.consequent.contains(f)
        }
    })
}

fn away_from_end(g: &LinearNestedSequent, left: bool, f: &Formula, side: &str) -> RuleError {
    match locate(g, left, f) {
        Some(i) => RuleError::new(
            ReasonCode::NonEndApplication,
            format!("{f} is principal in component {} rather than at the end", i + 1),
        ),
        None => missing(side, f),
    }
}

pub fn nested_premises(
    rule: Rule,
    meta: &Meta,
    concl: &LinearNestedSequent,
) -> Result<Vec<LinearNestedSequent>, RuleError> {
    let mut g = concl.clone();
    let n = g.len();
    match rule {
        Rule::Id1 | Rule::Id2 => {
            let f = principal(meta)?;
            let shape_ok = if rule == Rule::Id1 {
                f.is_atom()
            } else {
                f.is_box()
            };
            if !shape_ok {
                return Err(RuleError::schema(format!("{f} has the wrong shape for {rule}")));
            }
            let end = g.end();
            if end.antecedent.contains(f) && end.consequent.contains(f) {
                return Ok(vec![]);
            }
            let elsewhere = g
                .components
                .iter()
                .any(|c| c.antecedent.contains(f) && c.consequent.contains(f));
            if elsewhere {
                Err(RuleError::new(
                    ReasonCode::NonEndApplication,
                    format!("{f} closes a component other than the end one"),
                ))
            } else {
                Err(RuleError::schema(format!("{f} is not on both sides of the end component")))
            }
        }
        Rule::NegL | Rule::OrL => {
            let f = principal(meta)?;
            if !g.end_mut().remove_left(f) {
                return Err(away_from_end(concl, true, f, "antecedent"));
            }
            if rule == Rule::NegL {
                let a = expect_not(f)?;
                g.end_mut().add_right(a.clone());
                Ok(vec![g])
            } else {
                let (a, b) = expect_or(f)?;
                let mut left = g.clone();
                left.end_mut().add_left(a.clone());
                g.end_mut().add_left(b.clone());
                Ok(vec![left, g])
            }
        }
        Rule::NegR | Rule::OrR => {
            let f = principal(meta)?;
            if !g.end_mut().remove_right(f) {
                return Err(away_from_end(concl, false, f, "consequent"));
            }
            if rule == Rule::NegR {
                let a = expect_not(f)?;
                g.end_mut().add_left(a.clone());
            } else {
                let (a, b) = expect_or(f)?;
                g.end_mut().add_right(a.clone());
                g.end_mut().add_right(b.clone());
            }
            Ok(vec![g])
        }
        Rule::BoxL | Rule::FourL => {
            let f = principal(meta)?;
            let body = expect_box(f)?;
            let in_penultimate = g
                .penultimate()
                .is_some_and(|c| c.antecedent.contains(f));
            if !in_penultimate {
                return Err(match locate(concl, true, f) {
                    Some(i) => RuleError::new(
                        ReasonCode::NonEndApplication,
                        format!("{f} propagates from component {} of {n}", i + 1),
                    ),
                    None => missing("penultimate component", f),
                });
            }
            let added = if rule == Rule::BoxL { body } else { f };
            g.end_mut().add_left(added.clone());
            Ok(vec![g])
        }
        Rule::BoxR => {
            let f = principal(meta)?;
            let body = expect_box(f)?;
            if !g.end_mut().remove_right(f) {
                return Err(away_from_end(concl, false, f, "consequent"));
            }
            Ok(vec![g.pushed(GentzenSequent::new(
                vec![f.clone()],
                vec![body.clone()],
            ))])
        }
        _ => Err(RuleError::new(
            ReasonCode::UnknownRule,
            format!("rule {rule} is not part of LNGL"),
        )),
    }
}
