//! Proof checkers and the end-active / normal-form shape reports.
//!
//! Checking never searches: premises are rebuilt from each conclusion and its
//! metadata (see [`crate::rules`]) and compared with the recorded premises.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::formula::Formula;
use crate::proof::{Address, AnyProof, Calculus, CyclicDerivation, Node, Proof, Rule};
use crate::rules::{
    gentzen_premises, labeled_contained, labeled_premises, nested_premises, Expected, RuleError,
};
use crate::sequent::{tree_root, GentzenSequent, Label, LabeledSequent, LinearNestedSequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ReasonCode {
    WrongPremiseCount,
    SchemaMismatch,
    BadPartition,
    FreshnessViolation,
    UnknownRuleInStrictMode,
    UnknownRule,
    NotATree,
    NonEndApplication,
    BadBacklink,
    OpenLeaf,
    LintNoBoxOnCycle,
    NotEndActive,
    BlockViolation,
    CalculusMismatch,
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    #[serde(serialize_with = "address_text")]
    pub address: Address,
    pub code: ReasonCode,
    pub message: String,
}

fn address_text<S: serde::Serializer>(a: &Address, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

impl fmt::Display for Failure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}\t{}\t{}", self.code, self.address, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn from_failures(failures: Vec<Failure>) -> CheckReport {
        CheckReport {
            accepted: failures.is_empty(),
            failures,
        }
    }

    pub fn codes(&self) -> BTreeSet<ReasonCode> {
        self.failures.iter().map(|f| f.code).collect()
    }

    pub fn has(&self, code: ReasonCode) -> bool {
        self.failures.iter().any(|f| f.code == code)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for f in &self.failures {
            writeln!(out, "{f}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G3GLMode {
    Strict,
    Extended,
}

fn fail(out: &mut Vec<Failure>, address: &Address, code: ReasonCode, message: impl Into<String>) {
    out.push(Failure {
        address: address.clone(),
        code,
        message: message.into(),
    });
}

fn fail_rule(out: &mut Vec<Failure>, address: &Address, e: RuleError) {
    fail(out, address, e.code, e.message);
}

fn calculus_guard(out: &mut Vec<Failure>, actual: Calculus, allowed: &[Calculus]) -> bool {
    if allowed.contains(&actual) {
        return true;
    }
    fail(
        out,
        &Address::root(),
        ReasonCode::CalculusMismatch,
        format!("proof is tagged {actual}"),
    );
    false
}

/// Compares rebuilt premises with the recorded ones.
fn compare<S: PartialEq + fmt::Display + Clone>(
    out: &mut Vec<Failure>,
    addr: &Address,
    rule: Rule,
    expected: &[S],
    actual: &[Node<S>],
) {
    if expected.len() != actual.len() {
        fail(
            out,
            addr,
            ReasonCode::WrongPremiseCount,
            format!("{rule} needs {} premises, found {}", expected.len(), actual.len()),
        );
        return;
    }
    for (i, (e, a)) in expected.iter().zip(actual).enumerate() {
        if *e != a.conclusion {
            fail(
                out,
                addr,
                ReasonCode::SchemaMismatch,
                format!("premise {i} should be \"{e}\" but is \"{}\"", a.conclusion),
            );
        }
    }
}

fn check_gentzen_node(
    out: &mut Vec<Failure>,
    addr: &Address,
    node: &Node<GentzenSequent>,
    modal: Rule,
) {
    match gentzen_premises(node.rule, &node.meta, &node.conclusion, modal) {
        Ok(expected) => compare(out, addr, node.rule, &expected, &node.premises),
        Err(e) => fail_rule(out, addr, e),
    }
}

fn check_gentzen(p: &Proof<GentzenSequent>, calculus: Calculus, modal: Rule) -> CheckReport {
    let mut out = Vec::new();
    if calculus_guard(&mut out, p.calculus, &[calculus]) {
        for (addr, node) in p.root.walk() {
            if node.rule == Rule::Open {
                fail(&mut out, &addr, ReasonCode::OpenLeaf, "open leaf in a finite proof");
                continue;
            }
            check_gentzen_node(&mut out, &addr, node, modal);
        }
    }
    CheckReport::from_failures(out)
}

pub fn check_glseq(p: &Proof<GentzenSequent>) -> CheckReport {
    check_gentzen(p, Calculus::GLseq, Rule::BoxGL)
}

pub fn check_k4seq(p: &Proof<GentzenSequent>) -> CheckReport {
    check_gentzen(p, Calculus::K4seq, Rule::Box4)
}

/// K4seq checking that tolerates open leaves, for finite unfoldings of cyclic proofs.
pub fn check_k4seq_prefix(p: &Proof<GentzenSequent>) -> CheckReport {
    let mut out = Vec::new();
    if calculus_guard(&mut out, p.calculus, &[Calculus::K4seq]) {
        for (addr, node) in p.root.walk() {
            if node.rule == Rule::Open {
                if !node.premises.is_empty() {
                    fail(&mut out, &addr, ReasonCode::WrongPremiseCount, "open leaves have no premises");
                }
                continue;
            }
            check_gentzen_node(&mut out, &addr, node, Rule::Box4);
        }
    }
    CheckReport::from_failures(out)
}

const STRICT_RULES: [Rule; 10] = [
    Rule::Id1,
    Rule::Id2,
    Rule::Ir,
    Rule::Tr,
    Rule::NegL,
    Rule::NegR,
    Rule::OrL,
    Rule::OrR,
    Rule::BoxL,
    Rule::BoxR,
];

const ADMITTED_RULES: [Rule; 6] = [
    Rule::FourL,
    Rule::Weaken,
    Rule::ContractL,
    Rule::ContractR,
    Rule::Subst,
    Rule::Cut,
];

const TREE_RULES: [Rule; 9] = [
    Rule::Id1,
    Rule::Id2,
    Rule::NegL,
    Rule::NegR,
    Rule::OrL,
    Rule::OrR,
    Rule::BoxL,
    Rule::BoxR,
    Rule::FourL,
];

fn check_labeled_node(out: &mut Vec<Failure>, addr: &Address, node: &Node<LabeledSequent>) {
    let expected = match labeled_premises(node.rule, &node.meta, &node.conclusion) {
        Ok(e) => e,
        Err(e) => return fail_rule(out, addr, e),
    };
    match expected {
        Expected::Premises(ps) => compare(out, addr, node.rule, &ps, &node.premises),
        Expected::Weakening | Expected::Substitution { .. } if node.premises.len() != 1 => fail(
            out,
            addr,
            ReasonCode::WrongPremiseCount,
            format!("{} needs 1 premise, found {}", node.rule, node.premises.len()),
        ),
        Expected::Weakening => {
            if !labeled_contained(&node.premises[0].conclusion, &node.conclusion) {
                fail(
                    out,
                    addr,
                    ReasonCode::SchemaMismatch,
                    "premise is not contained in the conclusion",
                );
            }
        }
        Expected::Substitution { from, to } => {
            let image = node.premises[0].conclusion.substitute(&from, &to);
            if image != node.conclusion {
                fail(
                    out,
                    addr,
                    ReasonCode::SchemaMismatch,
                    format!("substituting {to} for {from} in the premise gives \"{image}\""),
                );
            }
        }
    }
}

/// Every `boxR` uses its own fresh label, absent from the end sequent.
fn global_freshness(out: &mut Vec<Failure>, root: &Node<LabeledSequent>) {
    let end_labels = root.conclusion.labels();
    let mut seen: BTreeMap<Label, Address> = BTreeMap::new();
    for (addr, node) in root.walk() {
        if node.rule != Rule::BoxR {
            continue;
        }
        let Some(y) = &node.meta.fresh else { continue };
        if end_labels.contains(y) {
            fail(
                out,
                &addr,
                ReasonCode::FreshnessViolation,
                format!("fresh label {y} occurs in the end sequent"),
            );
        }
        if let Some(first) = seen.get(y) {
            fail(
                out,
                &addr,
                ReasonCode::FreshnessViolation,
                format!("fresh label {y} already introduced at {first}"),
            );
        } else {
            seen.insert(y.clone(), addr);
        }
    }
}

pub fn check_g3gl(p: &Proof<LabeledSequent>, mode: G3GLMode) -> CheckReport {
    let mut out = Vec::new();
    let allowed: &[Calculus] = match mode {
        G3GLMode::Strict => &[Calculus::G3GL],
        G3GLMode::Extended => &[Calculus::G3GL, Calculus::G3GLext, Calculus::CSGL],
    };
    if !calculus_guard(&mut out, p.calculus, allowed) {
        return CheckReport::from_failures(out);
    }
    for (addr, node) in p.root.walk() {
        let strict = STRICT_RULES.contains(&node.rule);
        let admitted = ADMITTED_RULES.contains(&node.rule);
        if !strict && !(admitted && mode == G3GLMode::Extended) {
            let code = if admitted {
                ReasonCode::UnknownRuleInStrictMode
            } else {
                ReasonCode::UnknownRule
            };
            fail(&mut out, &addr, code, format!("rule {} is not available", node.rule));
            continue;
        }
        check_labeled_node(&mut out, &addr, node);
    }
    global_freshness(&mut out, &p.root);
    CheckReport::from_failures(out)
}

pub fn check_csgl(p: &Proof<LabeledSequent>) -> CheckReport {
    let mut out = Vec::new();
    if !calculus_guard(&mut out, p.calculus, &[Calculus::CSGL]) {
        return CheckReport::from_failures(out);
    }
    for (addr, node) in p.root.walk() {
        if let Err(e) = tree_root(&node.conclusion) {
            let message = match e {
                crate::sequent::TreeError::NotATree(d) => d.to_string(),
                other => other.to_string(),
            };
            fail(&mut out, &addr, ReasonCode::NotATree, message);
            continue;
        }
        if !TREE_RULES.contains(&node.rule) {
            fail(
                &mut out,
                &addr,
                ReasonCode::UnknownRule,
                format!("rule {} is not a tree-sequent rule", node.rule),
            );
            continue;
        }
        check_labeled_node(&mut out, &addr, node);
    }
    global_freshness(&mut out, &p.root);
    CheckReport::from_failures(out)
}

pub fn check_lngl(p: &Proof<LinearNestedSequent>) -> CheckReport {
    let mut out = Vec::new();
    if calculus_guard(&mut out, p.calculus, &[Calculus::LNGL]) {
        for (addr, node) in p.root.walk() {
            match nested_premises(node.rule, &node.meta, &node.conclusion) {
                Ok(expected) => compare(&mut out, &addr, node.rule, &expected, &node.premises),
                Err(e) => fail_rule(&mut out, &addr, e),
            }
        }
    }
    CheckReport::from_failures(out)
}

pub fn check_glcirc(d: &CyclicDerivation) -> CheckReport {
    let mut out = Vec::new();
    let nodes: BTreeMap<Address, &Node<GentzenSequent>> = d.root.walk().into_iter().collect();
    for (addr, node) in &nodes {
        if node.rule == Rule::Open {
            if !node.premises.is_empty() {
                fail(&mut out, addr, ReasonCode::WrongPremiseCount, "open leaves have no premises");
            }
            if !d.backlinks.contains_key(addr) {
                fail(&mut out, addr, ReasonCode::OpenLeaf, "open leaf without a backlink");
            }
            continue;
        }
        check_gentzen_node(&mut out, addr, node, Rule::Box4);
    }
    for (leaf, target) in &d.backlinks {
        let Some(source) = nodes.get(leaf) else {
            fail(&mut out, leaf, ReasonCode::BadBacklink, "not-ancestor: no node at this address");
            continue;
        };
        if source.rule != Rule::Open {
            fail(&mut out, leaf, ReasonCode::BadBacklink, "backlinks start at open leaves");
            continue;
        }
        if target == leaf {
            fail(&mut out, leaf, ReasonCode::BadBacklink, "self: a leaf cannot link to itself");
            continue;
        }
        let Some(companion) = nodes.get(target).filter(|_| target.is_prefix_of(leaf)) else {
            fail(
                &mut out,
                leaf,
                ReasonCode::BadBacklink,
                format!("not-ancestor: {target} is not on the path to this leaf"),
            );
            continue;
        };
        if companion.conclusion != source.conclusion {
            fail(
                &mut out,
                leaf,
                ReasonCode::BadBacklink,
                format!(
                    "sequent-mismatch: \"{}\" against \"{}\"",
                    source.conclusion, companion.conclusion
                ),
            );
            continue;
        }
        let on_cycle = (target.depth()..leaf.depth()).any(|k| {
            let a = Address(leaf.0[..k].to_vec());
            nodes.get(&a).is_some_and(|n| n.rule == Rule::Box4)
        });
        if !on_cycle {
            fail(
                &mut out,
                leaf,
                ReasonCode::LintNoBoxOnCycle,
                format!("no box4 between {target} and this leaf"),
            );
        }
    }
    CheckReport::from_failures(out)
}

/// Whether a single CSGL node satisfies its end-active clause; `None` when it does.
pub fn end_active_violation(node: &Node<LabeledSequent>) -> Option<String> {
    let t = &node.conclusion;
    let x = node.meta.label.as_ref()?;
    match node.rule {
        r if r.is_initial() || r.is_local() => {
            (!t.is_leaf(x)).then(|| format!("{r} is principal at {x}, which is not a leaf"))
        }
        r if r.is_propagation() => {
            let y = node.meta.aux.as_ref()?;
            if !t.is_pre_leaf(x) {
                Some(format!("{r} propagates from {x}, which is not a pre-leaf"))
            } else if !t.is_leaf(y) {
                Some(format!("{r} propagates to {y}, which is not a leaf"))
            } else {
                None
            }
        }
        _ => None,
    }
}

pub fn end_active_report(p: &Proof<LabeledSequent>) -> CheckReport {
    let mut out = Vec::new();
    for (addr, node) in p.root.walk() {
        if let Some(message) = end_active_violation(node) {
            fail(&mut out, &addr, ReasonCode::NotEndActive, message);
        }
    }
    CheckReport::from_failures(out)
}

/// Propagation counts of a normal-form modal block, per boxed formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModalBlock {
    pub four: BTreeMap<Formula, usize>,
    pub boxl: BTreeMap<Formula, usize>,
    /// address of the first node above both blocks
    pub top: Address,
}

impl ModalBlock {
    /// Σ1 (4L only), Σ2 (both), Σ3 (boxL only), as boxed formulas.
    pub fn partition(&self) -> (Vec<Formula>, Vec<Formula>, Vec<Formula>) {
        let mut only_four = Vec::new();
        let mut both = Vec::new();
        let mut only_boxl = Vec::new();
        let keys: BTreeSet<&Formula> = self.four.keys().chain(self.boxl.keys()).collect();
        for f in keys {
            let k = self.multiplicity(f);
            let bucket = match (self.four.contains_key(f), self.boxl.contains_key(f)) {
                (true, false) => &mut only_four,
                (true, true) => &mut both,
                _ => &mut only_boxl,
            };
            bucket.extend(std::iter::repeat_n(f.clone(), k));
        }
        (only_four, both, only_boxl)
    }

    pub fn multiplicity(&self, f: &Formula) -> usize {
        let a = self.four.get(f).copied().unwrap_or(0);
        let b = self.boxl.get(f).copied().unwrap_or(0);
        a.max(b)
    }
}

/// Reads the 4L block and then the boxL block directly above the `boxR` at `addr`.
pub fn modal_block(
    root: &Node<LinearNestedSequent>,
    addr: &Address,
) -> Result<ModalBlock, (Address, String)> {
    let node = root.get(addr).expect("address exists");
    let mut block = ModalBlock::default();
    let mut cur = addr.child(0);
    let mut phase = Rule::FourL;
    loop {
        let n = root.get(&cur).expect("premise exists");
        match n.rule {
            Rule::FourL | Rule::BoxL => {
                if n.rule == Rule::FourL && phase == Rule::BoxL {
                    return Err((cur, "4L above the boxL block".into()));
                }
                phase = n.rule;
                let Some(f) = n.meta.principal.clone() else {
                    return Err((cur, "propagation without a principal formula".into()));
                };
                let map = if n.rule == Rule::FourL {
                    &mut block.four
                } else {
                    &mut block.boxl
                };
                *map.entry(f).or_insert(0) += 1;
                cur = cur.child(0);
            }
            _ => break,
        }
    }
    let context = &node.conclusion.end().antecedent;
    for f in block.four.keys().chain(block.boxl.keys()) {
        let available = context.iter().filter(|g| *g == f).count();
        if block.multiplicity(f) > available {
            return Err((
                addr.clone(),
                format!("{f} is propagated more often than it occurs"),
            ));
        }
    }
    block.top = cur;
    Ok(block)
}

pub fn normal_form_report(p: &Proof<LinearNestedSequent>) -> CheckReport {
    let mut out = Vec::new();
    for (addr, node) in p.root.walk() {
        if node.rule != Rule::BoxR {
            continue;
        }
        let block = match modal_block(&p.root, &addr) {
            Ok(b) => b,
            Err((at, message)) => {
                fail(&mut out, &at, ReasonCode::BlockViolation, message);
                continue;
            }
        };
        let mut stack = vec![block.top.clone()];
        while let Some(a) = stack.pop() {
            let n = p.root.get(&a).expect("address exists");
            if n.rule.is_propagation() {
                fail(
                    &mut out,
                    &a,
                    ReasonCode::BlockViolation,
                    format!("{} inside the local phase above the boxR at {addr}", n.rule),
                );
            }
            if n.rule != Rule::BoxR {
                stack.extend((0..n.premises.len()).map(|i| a.child(i)));
            }
        }
    }
    CheckReport::from_failures(out)
}

/// Dispatches on the calculus tag; G3GL is checked strictly, G3GLext extended.
pub fn check_proof(p: &AnyProof) -> CheckReport {
    match p {
        AnyProof::Gentzen(p) if p.calculus == Calculus::K4seq => check_k4seq(p),
        AnyProof::Gentzen(p) => check_glseq(p),
        AnyProof::Labeled(p) => match p.calculus {
            Calculus::CSGL => check_csgl(p),
            Calculus::G3GL => check_g3gl(p, G3GLMode::Strict),
            _ => check_g3gl(p, G3GLMode::Extended),
        },
        AnyProof::Nested(p) => check_lngl(p),
        AnyProof::Cyclic(d) => check_glcirc(d),
    }
}
