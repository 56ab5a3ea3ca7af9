//! Gentzen, labeled/tree and linear nested sequents.
//!
//! Multisets are kept as sorted vectors so that structural equality is
//! multiset equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{is_identifier, parse_formula, Formula, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Label {
        Label(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Label {
        Label::new(s)
    }
}

/// `x: φ`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledFormula {
    pub label: Label,
    pub formula: Formula,
}

impl LabeledFormula {
    pub fn new(label: Label, formula: Formula) -> LabeledFormula {
        LabeledFormula { label, formula }
    }
}

impl fmt::Display for LabeledFormula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}: {}", self.label, self.formula)
    }
}

pub(crate) fn insert_sorted<T: Ord>(items: &mut Vec<T>, item: T) {
    let at = items.partition_point(|x| x <= &item);
    items.insert(at, item);
}

pub(crate) fn remove_one<T: Ord>(items: &mut Vec<T>, item: &T) -> bool {
    match items.binary_search(item) {
        Ok(i) => {
            items.remove(i);
            true
        }
        Err(_) => false,
    }
}

/// Multiset difference `big - small`, or `None` when `small` is not contained in `big`.
pub(crate) fn multiset_minus<T: Ord + Clone>(big: &[T], small: &[T]) -> Option<Vec<T>> {
    let mut out = big.to_vec();
    for item in small {
        if !remove_one(&mut out, item) {
            return None;
        }
    }
    Some(out)
}

pub(crate) fn multiset_union<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a.iter().chain(b.iter()).cloned().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GentzenSequent {
    pub antecedent: Vec<Formula>,
    pub consequent: Vec<Formula>,
}

impl GentzenSequent {
    pub fn new(mut antecedent: Vec<Formula>, mut consequent: Vec<Formula>) -> GentzenSequent {
        antecedent.sort();
        consequent.sort();
        GentzenSequent {
            antecedent,
            consequent,
        }
    }

    pub fn empty() -> GentzenSequent {
        GentzenSequent::default()
    }

    /// `⊢ φ`
    pub fn of_formula(f: Formula) -> GentzenSequent {
        GentzenSequent::new(vec![], vec![f])
    }

    pub fn add_left(&mut self, f: Formula) {
        insert_sorted(&mut self.antecedent, f);
    }

    pub fn add_right(&mut self, f: Formula) {
        insert_sorted(&mut self.consequent, f);
    }

    pub fn remove_left(&mut self, f: &Formula) -> bool {
        remove_one(&mut self.antecedent, f)
    }

    pub fn remove_right(&mut self, f: &Formula) -> bool {
        remove_one(&mut self.consequent, f)
    }

    pub fn with_left(mut self, f: Formula) -> GentzenSequent {
        self.add_left(f);
        self
    }

    pub fn with_right(mut self, f: Formula) -> GentzenSequent {
        self.add_right(f);
        self
    }

    /// Multiset union of both sides.
    pub fn union(&self, other: &GentzenSequent) -> GentzenSequent {
        GentzenSequent {
            antecedent: multiset_union(&self.antecedent, &other.antecedent),
            consequent: multiset_union(&self.consequent, &other.consequent),
        }
    }

    /// `self - other`, if `other` is a sub-multiset on both sides.
    pub fn minus(&self, other: &GentzenSequent) -> Option<GentzenSequent> {
        Some(GentzenSequent {
            antecedent: multiset_minus(&self.antecedent, &other.antecedent)?,
            consequent: multiset_minus(&self.consequent, &other.consequent)?,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.antecedent.is_empty() && self.consequent.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.antecedent
            .iter()
            .chain(self.consequent.iter())
            .map(Formula::weight)
            .sum()
    }

    /// Same sequent with duplicates removed.
    pub fn to_set(&self) -> GentzenSequent {
        let mut s = self.clone();
        s.antecedent.dedup();
        s.consequent.dedup();
        s
    }

    pub fn labeled(&self, label: &Label) -> LabeledSequent {
        LabeledSequent::new(
            BTreeSet::new(),
            self.antecedent
                .iter()
                .map(|f| LabeledFormula::new(label.clone(), f.clone()))
                .collect(),
            self.consequent
                .iter()
                .map(|f| LabeledFormula::new(label.clone(), f.clone()))
                .collect(),
        )
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_sides(out: &mut fmt::Formatter<'_>, left: &str, right: &str) -> fmt::Result {
    match (left.is_empty(), right.is_empty()) {
        (true, true) => out.write_str("|-"),
        (true, false) => write!(out, "|- {right}"),
        (false, true) => write!(out, "{left} |-"),
        (false, false) => write!(out, "{left} |- {right}"),
    }
}

impl fmt::Display for GentzenSequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sides(out, &join(&self.antecedent), &join(&self.consequent))
    }
}

/// A labeled sequent `R, Γ ⊢ Δ`. Tree sequents share this representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabeledSequent {
    pub relations: BTreeSet<(Label, Label)>,
    pub antecedent: Vec<LabeledFormula>,
    pub consequent: Vec<LabeledFormula>,
}

impl LabeledSequent {
    pub fn new(
        relations: BTreeSet<(Label, Label)>,
        mut antecedent: Vec<LabeledFormula>,
        mut consequent: Vec<LabeledFormula>,
    ) -> LabeledSequent {
        antecedent.sort();
        consequent.sort();
        LabeledSequent {
            relations,
            antecedent,
            consequent,
        }
    }

    /// `⊢ x: φ`
    pub fn of_formula(label: &Label, f: Formula) -> LabeledSequent {
        LabeledSequent::new(
            BTreeSet::new(),
            vec![],
            vec![LabeledFormula::new(label.clone(), f)],
        )
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.relations {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        for lf in self.antecedent.iter().chain(self.consequent.iter()) {
            out.insert(lf.label.clone());
        }
        out
    }

    pub fn mentions(&self, label: &Label) -> bool {
        self.relations
            .iter()
            .any(|(a, b)| a == label || b == label)
            || self
                .antecedent
                .iter()
                .chain(self.consequent.iter())
                .any(|lf| &lf.label == label)
    }

    pub fn has_left(&self, label: &Label, f: &Formula) -> bool {
        self.antecedent
            .iter()
            .any(|lf| &lf.label == label && &lf.formula == f)
    }

    pub fn has_right(&self, label: &Label, f: &Formula) -> bool {
        self.consequent
            .iter()
            .any(|lf| &lf.label == label && &lf.formula == f)
    }

    pub fn add_left(&mut self, label: &Label, f: Formula) {
        insert_sorted(&mut self.antecedent, LabeledFormula::new(label.clone(), f));
    }

    pub fn add_right(&mut self, label: &Label, f: Formula) {
        insert_sorted(&mut self.consequent, LabeledFormula::new(label.clone(), f));
    }

    pub fn remove_left(&mut self, label: &Label, f: &Formula) -> bool {
        remove_one(
            &mut self.antecedent,
            &LabeledFormula::new(label.clone(), f.clone()),
        )
    }

    pub fn remove_right(&mut self, label: &Label, f: &Formula) -> bool {
        remove_one(
            &mut self.consequent,
            &LabeledFormula::new(label.clone(), f.clone()),
        )
    }

    /// Γ(x) as a multiset.
    pub fn left_at(&self, label: &Label) -> Vec<Formula> {
        self.antecedent
            .iter()
            .filter(|lf| &lf.label == label)
            .map(|lf| lf.formula.clone())
            .collect()
    }

    /// Δ(x) as a multiset.
    pub fn right_at(&self, label: &Label) -> Vec<Formula> {
        self.consequent
            .iter()
            .filter(|lf| &lf.label == label)
            .map(|lf| lf.formula.clone())
            .collect()
    }

    /// The flat sequent Γ(x) ⊢ Δ(x).
    pub fn component(&self, label: &Label) -> GentzenSequent {
        GentzenSequent {
            antecedent: self.left_at(label),
            consequent: self.right_at(label),
        }
    }

    pub fn union(&self, other: &LabeledSequent) -> LabeledSequent {
        LabeledSequent {
            relations: self.relations.union(&other.relations).cloned().collect(),
            antecedent: multiset_union(&self.antecedent, &other.antecedent),
            consequent: multiset_union(&self.consequent, &other.consequent),
        }
    }

    /// Removes `other`'s formulas (as multisets) and relational atoms.
    pub fn minus(&self, other: &LabeledSequent) -> Option<LabeledSequent> {
        if !other.relations.is_subset(&self.relations) {
            return None;
        }
        Some(LabeledSequent {
            relations: self.relations.difference(&other.relations).cloned().collect(),
            antecedent: multiset_minus(&self.antecedent, &other.antecedent)?,
            consequent: multiset_minus(&self.consequent, &other.consequent)?,
        })
    }

    /// Replaces every occurrence of `from` by `to`.
    pub fn substitute(&self, from: &Label, to: &Label) -> LabeledSequent {
        let swap = |l: &Label| if l == from { to.clone() } else { l.clone() };
        LabeledSequent::new(
            self.relations.iter().map(|(a, b)| (swap(a), swap(b))).collect(),
            self.antecedent
                .iter()
                .map(|lf| LabeledFormula::new(swap(&lf.label), lf.formula.clone()))
                .collect(),
            self.consequent
                .iter()
                .map(|lf| LabeledFormula::new(swap(&lf.label), lf.formula.clone()))
                .collect(),
        )
    }

    /// Renames labels through `map`; unmapped labels are kept.
    pub fn rename(&self, map: &BTreeMap<Label, Label>) -> LabeledSequent {
        let swap = |l: &Label| map.get(l).cloned().unwrap_or_else(|| l.clone());
        LabeledSequent::new(
            self.relations.iter().map(|(a, b)| (swap(a), swap(b))).collect(),
            self.antecedent
                .iter()
                .map(|lf| LabeledFormula::new(swap(&lf.label), lf.formula.clone()))
                .collect(),
            self.consequent
                .iter()
                .map(|lf| LabeledFormula::new(swap(&lf.label), lf.formula.clone()))
                .collect(),
        )
    }

    pub fn is_flat(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn children(&self, label: &Label) -> Vec<Label> {
        self.relations
            .iter()
            .filter(|(a, _)| a == label)
            .map(|(_, b)| b.clone())
            .collect()
    }

    pub fn parent(&self, label: &Label) -> Option<Label> {
        self.relations
            .iter()
            .find(|(_, b)| b == label)
            .map(|(a, _)| a.clone())
    }

    /// A label is a leaf when it has no outgoing relational atom.
    pub fn is_leaf(&self, label: &Label) -> bool {
        !self.relations.iter().any(|(a, _)| a == label)
    }

    /// Every child is a leaf.
    pub fn is_pre_leaf(&self, label: &Label) -> bool {
        self.children(label).iter().all(|c| self.is_leaf(c))
    }

    pub fn weight(&self) -> usize {
        self.antecedent
            .iter()
            .chain(self.consequent.iter())
            .map(|lf| lf.formula.weight())
            .sum()
    }
}

impl fmt::Display for LabeledSequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .relations
            .iter()
            .map(|(a, b)| format!("{a}R{b}"))
            .collect();
        if !self.antecedent.is_empty() {
            parts.push(join(&self.antecedent));
        }
        write_sides(out, &parts.join("; "), &join(&self.consequent))
    }
}

/// `Γ1 ⊢ Δ1 // ... // Γn ⊢ Δn`, always with at least one component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearNestedSequent {
    pub components: Vec<GentzenSequent>,
}

impl LinearNestedSequent {
    pub fn new(components: Vec<GentzenSequent>) -> LinearNestedSequent {
        assert!(!components.is_empty(), "a nested sequent has a component");
        LinearNestedSequent { components }
    }

    pub fn single(s: GentzenSequent) -> LinearNestedSequent {
        LinearNestedSequent { components: vec![s] }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> &GentzenSequent {
        self.components.last().expect("nonempty")
    }

    pub fn end_mut(&mut self) -> &mut GentzenSequent {
        self.components.last_mut().expect("nonempty")
    }

    /// The component before the end one, if any.
    pub fn penultimate(&self) -> Option<&GentzenSequent> {
        let n = self.components.len();
        if n >= 2 {
            self.components.get(n - 2)
        } else {
            None
        }
    }

    pub fn pushed(&self, s: GentzenSequent) -> LinearNestedSequent {
        let mut c = self.components.clone();
        c.push(s);
        LinearNestedSequent { components: c }
    }

    pub fn weight(&self) -> usize {
        self.components.iter().map(GentzenSequent::weight).sum()
    }
}

impl fmt::Display for LinearNestedSequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        out.write_str(&parts.join(" // "))
    }
}

// ---------------------------------------------------------------------------
// Parsing

fn char_offset(text: &str, byte: usize) -> usize {
    text[..byte].chars().count()
}

fn shift(err: SyntaxError, base: usize) -> SyntaxError {
    SyntaxError {
        position: err.position + base,
        expected: err.expected,
    }
}

fn split_turnstile(text: &str) -> Result<(usize, &str, &str), SyntaxError> {
    match text.find("|-") {
        Some(i) => Ok((i, &text[..i], &text[i + 2..])),
        None => Err(SyntaxError {
            position: text.chars().count(),
            expected: "'|-'".into(),
        }),
    }
}

/// Splits on `sep`, returning each piece with its byte offset.
fn pieces(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((start, &text[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_formula_list(text: &str, base: usize) -> Result<Vec<Formula>, SyntaxError> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    pieces(text, ',')
        .into_iter()
        .map(|(off, piece)| {
            parse_formula(piece).map_err(|e| shift(e, base + char_offset(text, off)))
        })
        .collect()
}

pub fn parse_gentzen(text: &str) -> Result<GentzenSequent, SyntaxError> {
    let (at, left, right) = split_turnstile(text)?;
    let ant = parse_formula_list(left, 0)?;
    let cons = parse_formula_list(right, char_offset(text, at + 2))?;
    Ok(GentzenSequent::new(ant, cons))
}

fn parse_labeled_list(text: &str, base: usize) -> Result<Vec<LabeledFormula>, SyntaxError> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    pieces(text, ',')
        .into_iter()
        .map(|(off, piece)| {
            let at = base + char_offset(text, off);
            let colon = piece.find(':').ok_or_else(|| SyntaxError {
                position: at + piece.chars().count(),
                expected: "':'".into(),
            })?;
            let name = piece[..colon].trim();
            if !is_identifier(name) {
                return Err(SyntaxError {
                    position: at,
                    expected: "label".into(),
                });
            }
            let formula = parse_formula(&piece[colon + 1..])
                .map_err(|e| shift(e, at + char_offset(piece, colon + 1)))?;
            Ok(LabeledFormula::new(Label::new(name), formula))
        })
        .collect()
}

fn parse_relation(piece: &str) -> Option<(Label, Label)> {
    let trimmed = piece.trim();
    let r = trimmed.find('R')?;
    let (a, b) = (&trimmed[..r], &trimmed[r + 1..]);
    if is_identifier(a) && is_identifier(b) {
        Some((Label::new(a), Label::new(b)))
    } else {
        None
    }
}

pub fn parse_labeled(text: &str) -> Result<LabeledSequent, SyntaxError> {
    let (at, left, right) = split_turnstile(text)?;
    let mut relations = BTreeSet::new();
    let mut ant = Vec::new();
    for (off, piece) in pieces(left, ';') {
        if piece.trim().is_empty() {
            continue;
        }
        if piece.contains(':') {
            ant.extend(parse_labeled_list(piece, char_offset(left, off))?);
        } else {
            match parse_relation(piece) {
                Some(rel) => {
                    relations.insert(rel);
                }
                None => {
                    return Err(SyntaxError {
                        position: char_offset(left, off),
                        expected: "relational atom".into(),
                    })
                }
            }
        }
    }
    let cons = parse_labeled_list(right, char_offset(text, at + 2))?;
    Ok(LabeledSequent::new(relations, ant, cons))
}

pub fn parse_nested(text: &str) -> Result<LinearNestedSequent, SyntaxError> {
    let mut components = Vec::new();
    let mut start = 0;
    let mut rest = text;
    loop {
        match rest.find("//") {
            Some(i) => {
                let piece = &rest[..i];
                components.push(
                    parse_gentzen(piece).map_err(|e| shift(e, char_offset(text, start)))?,
                );
                start += i + 2;
                rest = &rest[i + 2..];
            }
            None => {
                components
                    .push(parse_gentzen(rest).map_err(|e| shift(e, char_offset(text, start)))?);
                break;
            }
        }
    }
    Ok(LinearNestedSequent::new(components))
}

// ---------------------------------------------------------------------------
// Tree structure

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeDefect {
    Cycle,
    Disconnected,
    MultiRoot,
    DanglingLabel,
}

impl fmt::Display for TreeDefect {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            TreeDefect::Cycle => "cycle",
            TreeDefect::Disconnected => "disconnected",
            TreeDefect::MultiRoot => "multi-root",
            TreeDefect::DanglingLabel => "dangling-label",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(TreeDefect),
    #[error("bad path: {0}")]
    BadPath(String),
}

fn has_directed_cycle(relations: &BTreeSet<(Label, Label)>) -> bool {
    let mut succ: BTreeMap<&Label, Vec<&Label>> = BTreeMap::new();
    for (a, b) in relations {
        succ.entry(a).or_default().push(b);
    }
    // 0 = unseen, 1 = on stack, 2 = done
    let mut state: BTreeMap<&Label, u8> = BTreeMap::new();
    fn visit<'a>(
        n: &'a Label,
        succ: &BTreeMap<&'a Label, Vec<&'a Label>>,
        state: &mut BTreeMap<&'a Label, u8>,
    ) -> bool {
        match state.get(n) {
            Some(1) => return true,
            Some(2) => return false,
            _ => {}
        }
        state.insert(n, 1);
        if let Some(next) = succ.get(n) {
            for m in next {
                if visit(m, succ, state) {
                    return true;
                }
            }
        }
        state.insert(n, 2);
        false
    }
    let nodes: Vec<&Label> = succ.keys().copied().collect();
    nodes.into_iter().any(|n| visit(n, &succ, &mut state))
}

fn undirected_connected(relations: &BTreeSet<(Label, Label)>) -> bool {
    let mut adj: BTreeMap<&Label, Vec<&Label>> = BTreeMap::new();
    for (a, b) in relations {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(start) = adj.keys().next().copied() else {
        return true;
    };
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            stack.extend(adj[n].iter().copied());
        }
    }
    seen.len() == adj.len()
}

/// The root of a tree sequent; doubles as the tree validator.
pub fn tree_root(t: &LabeledSequent) -> Result<Label, TreeError> {
    if t.relations.is_empty() {
        let labels = t.labels();
        return match labels.len() {
            1 => Ok(labels.into_iter().next().unwrap()),
            _ => Err(TreeError::NotATree(TreeDefect::Disconnected)),
        };
    }
    if has_directed_cycle(&t.relations) {
        return Err(TreeError::NotATree(TreeDefect::Cycle));
    }
    if !undirected_connected(&t.relations) {
        return Err(TreeError::NotATree(TreeDefect::Disconnected));
    }
    let mut in_degree: BTreeMap<&Label, usize> = BTreeMap::new();
    for (a, b) in &t.relations {
        in_degree.entry(a).or_insert(0);
        *in_degree.entry(b).or_insert(0) += 1;
    }
    let roots: Vec<&Label> = in_degree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(l, _)| *l)
        .collect();
    if roots.len() != 1 {
        return Err(TreeError::NotATree(TreeDefect::MultiRoot));
    }
    if in_degree.values().any(|d| *d > 1) {
        return Err(TreeError::NotATree(TreeDefect::Cycle));
    }
    let in_tree: BTreeSet<&Label> = in_degree.keys().copied().collect();
    for lf in t.antecedent.iter().chain(t.consequent.iter()) {
        if !in_tree.contains(&lf.label) {
            return Err(TreeError::NotATree(TreeDefect::DanglingLabel));
        }
    }
    Ok(roots[0].clone())
}

/// The labels from the root down to `label`.
pub fn path_to(t: &LabeledSequent, label: &Label) -> Vec<Label> {
    let mut path = vec![label.clone()];
    let mut cur = label.clone();
    while let Some(p) = t.parent(&cur) {
        path.push(p.clone());
        cur = p;
        if path.len() > t.relations.len() + 1 {
            break;
        }
    }
    path.reverse();
    path
}

/// Projection along any root-anchored path; the path need not reach a leaf.
pub(crate) fn project(t: &LabeledSequent, path: &[Label]) -> LinearNestedSequent {
    LinearNestedSequent::new(path.iter().map(|l| t.component(l)).collect())
}

/// Γ(y1) ⊢ Δ(y1) // ... // Γ(yn) ⊢ Δ(yn) for a root-to-leaf path y1..yn.
pub fn path_projection(
    t: &LabeledSequent,
    path: &[Label],
) -> Result<LinearNestedSequent, TreeError> {
    let root = tree_root(t)?;
    if path.first() != Some(&root) {
        return Err(TreeError::BadPath("path does not start at the root".into()));
    }
    for w in path.windows(2) {
        if !t.relations.contains(&(w[0].clone(), w[1].clone())) {
            return Err(TreeError::BadPath(format!("no relational atom {}R{}", w[0], w[1])));
        }
    }
    if !t.is_leaf(path.last().unwrap()) {
        return Err(TreeError::BadPath("path does not end at a leaf".into()));
    }
    Ok(project(t, path))
}

/// The tree of flat sequents drawn from a tree sequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeView {
    pub label: Label,
    pub sequent: GentzenSequent,
    pub children: Vec<TreeView>,
}

impl TreeView {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(TreeView::node_count).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.children.len() + self.children.iter().map(TreeView::edge_count).sum::<usize>()
    }
}

pub fn tree_view(t: &LabeledSequent) -> Result<TreeView, TreeError> {
    let root = tree_root(t)?;
    fn build(t: &LabeledSequent, label: &Label) -> TreeView {
        TreeView {
            label: label.clone(),
            sequent: t.component(label),
            children: t.children(label).iter().map(|c| build(t, c)).collect(),
        }
    }
    Ok(build(t, &root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> LabeledSequent {
        parse_labeled(s).unwrap()
    }

    #[test]
    fn gentzen_round_trip() {
        let s = parse_gentzen("q, p |- r").unwrap();
        assert_eq!(s.to_string(), "p, q |- r");
        assert_eq!(parse_gentzen("|-").unwrap(), GentzenSequent::empty());
        assert_eq!(parse_gentzen(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn labeled_round_trip() {
        let s = lab("xRy; xRz; x: p, y: q |- z: r");
        assert_eq!(s.relations.len(), 2);
        assert_eq!(s.to_string(), "xRy; xRz; x: p, y: q |- z: r");
        assert_eq!(lab(&s.to_string()), s);
        let only_rel = lab("xRy |- ");
        assert_eq!(only_rel.to_string(), "xRy |-");
    }

    #[test]
    fn nested_round_trip() {
        let g = parse_nested("p |- q // r |- s").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.to_string(), "p |- q // r |- s");
    }

    #[test]
    fn turnstile_is_not_a_disjunction() {
        let s = parse_gentzen("p | q |- q").unwrap();
        assert_eq!(s.antecedent.len(), 1);
        assert_eq!(s.consequent.len(), 1);
    }

    #[test]
    fn roots() {
        assert_eq!(tree_root(&lab("xRy; x: p |- y: q")).unwrap(), Label::new("x"));
        assert_eq!(tree_root(&lab("x: p |- x: q")).unwrap(), Label::new("x"));
        assert_eq!(
            tree_root(&lab("xRy; yRx |- ")),
            Err(TreeError::NotATree(TreeDefect::Cycle))
        );
        assert_eq!(
            tree_root(&lab("xRz; yRz |- ")),
            Err(TreeError::NotATree(TreeDefect::MultiRoot))
        );
        assert_eq!(
            tree_root(&lab("xRy |- z: p")),
            Err(TreeError::NotATree(TreeDefect::DanglingLabel))
        );
        assert_eq!(
            tree_root(&lab("x: p |- y: p")),
            Err(TreeError::NotATree(TreeDefect::Disconnected))
        );
    }

    #[test]
    fn projections() {
        let flat = lab("x: p |- x: q");
        let g = path_projection(&flat, &[Label::new("x")]).unwrap();
        assert_eq!(g, parse_nested("p |- q").unwrap());

        let t = lab("xRy; x: p, y: q |- y: r");
        let g = path_projection(&t, &[Label::new("x"), Label::new("y")]).unwrap();
        assert_eq!(g, parse_nested("p |- // q |- r").unwrap());

        let t = lab("xRy; xRz; x: p |- z: q");
        let g = path_projection(&t, &[Label::new("x"), Label::new("y")]).unwrap();
        assert_eq!(g, parse_nested("p |- // |- ").unwrap());
        assert!(path_projection(&t, &[Label::new("y")]).is_err());
        assert!(path_projection(&t, &[Label::new("x")]).is_err());
    }

    #[test]
    fn views() {
        let v = tree_view(&lab("x: p |- x: q")).unwrap();
        assert_eq!(v.node_count(), 1);
        let v = tree_view(&lab("xRy |- ")).unwrap();
        assert_eq!((v.node_count(), v.edge_count()), (2, 1));
        assert!(v.sequent.is_empty() && v.children[0].sequent.is_empty());
        let v = tree_view(&lab("xRy; xRz; x: p |- z: q")).unwrap();
        assert_eq!(v.label, Label::new("x"));
        let kids: Vec<&str> = v.children.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(kids, vec!["y", "z"]);
    }

    #[test]
    fn leaves_and_pre_leaves() {
        let t = lab("xRy; yRz; xRw |- ");
        let l = Label::new;
        assert!(t.is_leaf(&l("z")) && t.is_leaf(&l("w")));
        assert!(!t.is_leaf(&l("x")));
        assert!(t.is_pre_leaf(&l("y")));
        assert!(!t.is_pre_leaf(&l("x")));
    }
}
