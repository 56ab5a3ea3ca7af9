//! Proof trees, rule identifiers, node metadata and cyclic derivations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::formula::{Formula, SyntaxError};
use crate::sequent::{
    parse_gentzen, parse_labeled, parse_nested, GentzenSequent, Label, LabeledSequent,
    LinearNestedSequent,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Calculus {
    GLseq,
    K4seq,
    G3GL,
    G3GLext,
    CSGL,
    LNGL,
    GLcirc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequentKind {
    Gentzen,
    Labeled,
    Nested,
}

impl Calculus {
    pub fn sequent_kind(self) -> SequentKind {
        match self {
            Calculus::GLseq | Calculus::K4seq | Calculus::GLcirc => SequentKind::Gentzen,
            Calculus::G3GL | Calculus::G3GLext | Calculus::CSGL => SequentKind::Labeled,
            Calculus::LNGL => SequentKind::Nested,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Calculus::GLseq => "GLseq",
            Calculus::K4seq => "K4seq",
            Calculus::G3GL => "G3GL",
            Calculus::G3GLext => "G3GLext",
            Calculus::CSGL => "CSGL",
            Calculus::LNGL => "LNGL",
            Calculus::GLcirc => "GLcirc",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(self.name())
    }
}

impl FromStr for Calculus {
    type Err = String;

    fn from_str(s: &str) -> Result<Calculus, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "glseq" => Calculus::GLseq,
            "k4seq" => Calculus::K4seq,
            "g3gl" => Calculus::G3GL,
            "g3glext" => Calculus::G3GLext,
            "csgl" => Calculus::CSGL,
            "lngl" => Calculus::LNGL,
            "glcirc" => Calculus::GLcirc,
            _ => return Err(format!("unknown calculus '{s}'")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Id,
    Id1,
    Id2,
    Ir,
    Tr,
    NegL,
    NegR,
    OrL,
    OrR,
    BoxL,
    BoxR,
    FourL,
    BoxGL,
    Box4,
    Weaken,
    ContractL,
    ContractR,
    Cut,
    Subst,
    Open,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Id,
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
        Rule::FourL,
        Rule::BoxGL,
        Rule::Box4,
        Rule::Weaken,
        Rule::ContractL,
        Rule::ContractR,
        Rule::Cut,
        Rule::Subst,
        Rule::Open,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::Id1 => "id1",
            Rule::Id2 => "id2",
            Rule::Ir => "ir",
            Rule::Tr => "tr",
            Rule::NegL => "negL",
            Rule::NegR => "negR",
            Rule::OrL => "orL",
            Rule::OrR => "orR",
            Rule::BoxL => "boxL",
            Rule::BoxR => "boxR",
            Rule::FourL => "4L",
            Rule::BoxGL => "boxGL",
            Rule::Box4 => "box4",
            Rule::Weaken => "w",
            Rule::ContractL => "cL",
            Rule::ContractR => "cR",
            Rule::Cut => "cut",
            Rule::Subst => "subst",
            Rule::Open => "open",
        }
    }

    /// Display form used in rendered proofs.
    pub fn symbol(self) -> &'static str {
        match self {
            Rule::NegL => "¬L",
            Rule::NegR => "¬R",
            Rule::OrL => "∨L",
            Rule::OrR => "∨R",
            Rule::BoxL => "□L",
            Rule::BoxR => "□R",
            Rule::BoxGL => "□GL",
            Rule::Box4 => "□4",
            Rule::Subst => "(x/y)",
            other => other.name(),
        }
    }

    pub fn is_initial(self) -> bool {
        matches!(self, Rule::Id | Rule::Id1 | Rule::Id2 | Rule::Ir)
    }

    pub fn is_local(self) -> bool {
        matches!(self, Rule::NegL | Rule::NegR | Rule::OrL | Rule::OrR)
    }

    pub fn is_propagation(self) -> bool {
        matches!(self, Rule::BoxL | Rule::FourL)
    }

    pub fn is_modal(self) -> bool {
        matches!(self, Rule::BoxR | Rule::BoxGL | Rule::Box4)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Rule, String> {
        if let Some(r) = Rule::ALL.iter().find(|r| r.name() == s) {
            return Ok(*r);
        }
        Ok(match s {
            "~L" => Rule::NegL,
            "~R" => Rule::NegR,
            "|L" => Rule::OrL,
            "|R" => Rule::OrR,
            "[]L" => Rule::BoxL,
            "[]R" => Rule::BoxR,
            "[]GL" => Rule::BoxGL,
            "[]4" => Rule::Box4,
            "(x/y)" => Rule::Subst,
            _ => return Err(format!("unknown rule '{s}'")),
        })
    }
}

/// Per-node data that, with the conclusion, determines the premises.
///
/// `principal` is the principal formula (for `cut`, the cut formula), `label`
/// its label, `aux` the target label of a propagation rule, `fresh` the label
/// introduced by `boxR`, `boxes` the boxed context kept by `boxGL`/`box4`,
/// `from`/`to` the substitution of `subst`, and `path` the labels `x y z` of
/// `tr`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Meta {
    pub principal: Option<Formula>,
    pub label: Option<Label>,
    pub aux: Option<Label>,
    pub fresh: Option<Label>,
    pub boxes: Option<Vec<Formula>>,
    pub from: Option<Label>,
    pub to: Option<Label>,
    pub path: Option<Vec<Label>>,
}

impl Meta {
    pub fn principal(f: Formula) -> Meta {
        Meta {
            principal: Some(f),
            ..Meta::default()
        }
    }

    pub fn at(label: &Label, f: Formula) -> Meta {
        Meta {
            principal: Some(f),
            label: Some(label.clone()),
            ..Meta::default()
        }
    }

    pub fn with_aux(mut self, aux: &Label) -> Meta {
        self.aux = Some(aux.clone());
        self
    }

    pub fn with_fresh(mut self, fresh: &Label) -> Meta {
        self.fresh = Some(fresh.clone());
        self
    }

    pub fn with_boxes(mut self, boxes: Vec<Formula>) -> Meta {
        self.boxes = Some(boxes);
        self
    }

    pub fn substitution(from: &Label, to: &Label) -> Meta {
        Meta {
            from: Some(from.clone()),
            to: Some(to.clone()),
            ..Meta::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Meta::default()
    }

    /// Renames every label mentioned.
    pub fn rename(&self, map: &BTreeMap<Label, Label>) -> Meta {
        let swap = |l: &Option<Label>| {
            l.as_ref()
                .map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
        };
        Meta {
            principal: self.principal.clone(),
            label: swap(&self.label),
            aux: swap(&self.aux),
            fresh: swap(&self.fresh),
            boxes: self.boxes.clone(),
            from: swap(&self.from),
            to: swap(&self.to),
            path: self.path.as_ref().map(|p| {
                p.iter()
                    .map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
                    .collect()
            }),
        }
    }
}

/// A premise-index path from the root; the root is `.`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(pub Vec<usize>);

impl Address {
    pub fn root() -> Address {
        Address(vec![])
    }

    pub fn child(&self, i: usize) -> Address {
        let mut v = self.0.clone();
        v.push(i);
        Address(v)
    }

    pub fn parent(&self) -> Option<Address> {
        let mut v = self.0.clone();
        v.pop()?;
        Some(Address(v))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Proper-ancestor-or-self test.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return out.write_str(".");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        out.write_str(&parts.join("/"))
    }
}

impl FromStr for Address {
    type Err = String;

    fn from_str(s: &str) -> Result<Address, String> {
        let s = s.trim();
        if s.is_empty() || s == "." {
            return Ok(Address::root());
        }
        s.split('/')
            .map(|p| p.parse::<usize>().map_err(|_| format!("bad address '{s}'")))
            .collect::<Result<Vec<_>, _>>()
            .map(Address)
    }
}

/// Sequent types that can appear in proof files.
pub trait SequentText: Clone + Eq + fmt::Display + fmt::Debug {
    fn parse_text(text: &str) -> Result<Self, SyntaxError>;
}

impl SequentText for GentzenSequent {
    fn parse_text(text: &str) -> Result<Self, SyntaxError> {
        parse_gentzen(text)
    }
}

impl SequentText for LabeledSequent {
    fn parse_text(text: &str) -> Result<Self, SyntaxError> {
        parse_labeled(text)
    }
}

impl SequentText for LinearNestedSequent {
    fn parse_text(text: &str) -> Result<Self, SyntaxError> {
        parse_nested(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node<S> {
    pub rule: Rule,
    pub conclusion: S,
    pub meta: Meta,
    pub premises: Vec<Node<S>>,
}

impl<S: Clone> Node<S> {
    pub fn new(rule: Rule, conclusion: S, meta: Meta, premises: Vec<Node<S>>) -> Node<S> {
        Node {
            rule,
            conclusion,
            meta,
            premises,
        }
    }

    pub fn leaf(rule: Rule, conclusion: S, meta: Meta) -> Node<S> {
        Node::new(rule, conclusion, meta, vec![])
    }

    /// Longest root-to-leaf path, counted in edges.
    pub fn height(&self) -> usize {
        self.premises
            .iter()
            .map(|p| p.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Node::size).sum::<usize>()
    }

    pub fn get(&self, addr: &Address) -> Option<&Node<S>> {
        let mut cur = self;
        for i in &addr.0 {
            cur = cur.premises.get(*i)?;
        }
        Some(cur)
    }

    pub fn get_mut(&mut self, addr: &Address) -> Option<&mut Node<S>> {
        let mut cur = self;
        for i in &addr.0 {
            cur = cur.premises.get_mut(*i)?;
        }
        Some(cur)
    }

    /// Every node with its address, parents before children, left to right.
    pub fn walk(&self) -> Vec<(Address, &Node<S>)> {
        let mut out = Vec::new();
        let mut stack = vec![(Address::root(), self)];
        while let Some((addr, node)) = stack.pop() {
            for (i, p) in node.premises.iter().enumerate().rev() {
                stack.push((addr.child(i), p));
            }
            out.push((addr, node));
        }
        out
    }

    /// Addresses in breadth-first order, leftmost first within a level.
    pub fn breadth_first(&self) -> Vec<Address> {
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::from([(Address::root(), self)]);
        while let Some((addr, node)) = queue.pop_front() {
            for (i, p) in node.premises.iter().enumerate() {
                queue.push_back((addr.child(i), p));
            }
            out.push(addr);
        }
        out
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.walk().iter().filter(|(_, n)| n.rule == rule).count()
    }

    pub fn map<T: Clone>(&self, f: &impl Fn(&Node<S>) -> (T, Meta)) -> Node<T> {
        let (conclusion, meta) = f(self);
        Node {
            rule: self.rule,
            conclusion,
            meta,
            premises: self.premises.iter().map(|p| p.map(f)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof<S> {
    pub calculus: Calculus,
    pub root: Node<S>,
}

impl<S: Clone> Proof<S> {
    pub fn new(calculus: Calculus, root: Node<S>) -> Proof<S> {
        Proof { calculus, root }
    }

    pub fn conclusion(&self) -> &S {
        &self.root.conclusion
    }

    pub fn height(&self) -> usize {
        self.root.height()
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }
}

/// A finite K4seq derivation whose open leaves point back at ancestors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDerivation {
    pub root: Node<GentzenSequent>,
    pub backlinks: BTreeMap<Address, Address>,
}

impl CyclicDerivation {
    /// Collects backlinks from `meta`-free open leaves given separately.
    pub fn new(root: Node<GentzenSequent>, backlinks: BTreeMap<Address, Address>) -> Self {
        CyclicDerivation { root, backlinks }
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyProof {
    Gentzen(Proof<GentzenSequent>),
    Labeled(Proof<LabeledSequent>),
    Nested(Proof<LinearNestedSequent>),
    Cyclic(CyclicDerivation),
}

impl AnyProof {
    pub fn calculus(&self) -> Calculus {
        match self {
            AnyProof::Gentzen(p) => p.calculus,
            AnyProof::Labeled(p) => p.calculus,
            AnyProof::Nested(p) => p.calculus,
            AnyProof::Cyclic(_) => Calculus::GLcirc,
        }
    }

    pub fn conclusion_text(&self) -> String {
        match self {
            AnyProof::Gentzen(p) => p.conclusion().to_string(),
            AnyProof::Labeled(p) => p.conclusion().to_string(),
            AnyProof::Nested(p) => p.conclusion().to_string(),
            AnyProof::Cyclic(d) => d.root.conclusion.to_string(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            AnyProof::Gentzen(p) => p.size(),
            AnyProof::Labeled(p) => p.size(),
            AnyProof::Nested(p) => p.size(),
            AnyProof::Cyclic(d) => d.size(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            AnyProof::Gentzen(p) => p.height(),
            AnyProof::Labeled(p) => p.height(),
            AnyProof::Nested(p) => p.height(),
            AnyProof::Cyclic(d) => d.root.height(),
        }
    }
}

impl From<Proof<GentzenSequent>> for AnyProof {
    fn from(p: Proof<GentzenSequent>) -> AnyProof {
        AnyProof::Gentzen(p)
    }
}

impl From<Proof<LabeledSequent>> for AnyProof {
    fn from(p: Proof<LabeledSequent>) -> AnyProof {
        AnyProof::Labeled(p)
    }
}

impl From<Proof<LinearNestedSequent>> for AnyProof {
    fn from(p: Proof<LinearNestedSequent>) -> AnyProof {
        AnyProof::Nested(p)
    }
}

impl From<CyclicDerivation> for AnyProof {
    fn from(d: CyclicDerivation) -> AnyProof {
        AnyProof::Cyclic(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
        }
        assert_eq!("[]R".parse::<Rule>().unwrap(), Rule::BoxR);
        assert!("box5".parse::<Rule>().is_err());
    }

    #[test]
    fn addresses() {
        let a: Address = "0/1/0".parse().unwrap();
        assert_eq!(a.to_string(), "0/1/0");
        assert_eq!(".".parse::<Address>().unwrap(), Address::root());
        assert!(Address::root().is_prefix_of(&a));
        assert_eq!(a.parent().unwrap().to_string(), "0/1");
    }

    #[test]
    fn heights_count_edges() {
        let s = GentzenSequent::empty();
        let leaf = Node::leaf(Rule::Id, s.clone(), Meta::default());
        assert_eq!(leaf.height(), 0);
        let two = Node::new(Rule::NegR, s.clone(), Meta::default(), vec![leaf.clone()]);
        let three = Node::new(Rule::OrL, s, Meta::default(), vec![two, leaf]);
        assert_eq!(three.height(), 2);
        assert_eq!(three.size(), 4);
        let order: Vec<String> = three.walk().iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(order, vec![".", "0", "0/0", "1"]);
        let bfs: Vec<String> = three.breadth_first().iter().map(|a| a.to_string()).collect();
        assert_eq!(bfs, vec![".", "0", "1", "0/0"]);
    }
}
