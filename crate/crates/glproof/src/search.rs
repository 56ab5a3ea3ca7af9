//! Backward proof search for GLseq and CSGL.
//!
//! Both deciders apply the invertible local rules eagerly (¬L, ¬R, ∨R before
//! the branching ∨L), close with an identity when possible, and otherwise
//! branch over the boxed formulas of the consequent. Every modal step adds
//! the refuted box to the antecedent of a sequent whose boxed antecedent
//! already contains the current one, so branches are bounded by the number of
//! boxed subformulas. Search completeness is checked empirically against the
//! model oracle rather than proven.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::formula::Formula;
use crate::oracle::{oracle_validity, ModelBound, OracleVerdict};
use crate::proof::{AnyProof, Calculus, Meta, Node, Proof, Rule};
use crate::relabel::{canonical_labels, FreshLabels};
use crate::semantics::{gentzen_interpretation, tree_interpretation};
use crate::sequent::{GentzenSequent, Label, LabeledSequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// maximum number of search nodes visited
    pub fuel: usize,
    /// key failure caching and loop checks on the underlying sets
    pub set_mode: bool,
    pub loop_check: bool,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            fuel: 100_000,
            set_mode: true,
            loop_check: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search fuel exhausted after {0} nodes")]
    FuelExhausted(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult<S> {
    Proved(Proof<S>),
    NotProved {
        saturated: S,
        hint: Option<OracleVerdict>,
    },
}

impl<S> SearchResult<S> {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn proof(self) -> Option<Proof<S>> {
        match self {
            SearchResult::Proved(p) => Some(p),
            SearchResult::NotProved { .. } => None,
        }
    }
}

fn hint_for(f: &Formula) -> Option<OracleVerdict> {
    oracle_validity(f, ModelBound::default_for(f)).ok()
}

/// A failed branch and whether a loop check cut something below it.
struct Failed<S> {
    saturated: S,
    pruned: bool,
}

type Step<T, S> = Result<Result<T, Failed<S>>, SearchError>;

fn set_key(s: &GentzenSequent, set_mode: bool) -> GentzenSequent {
    if set_mode {
        s.to_set()
    } else {
        s.clone()
    }
}

struct GentzenSearch {
    cfg: SearchConfig,
    used: usize,
    failed: HashSet<GentzenSequent>,
}

/// The first principal formula for a local rule in the fixed order.
fn local_choice(ant: &[Formula], cons: &[Formula]) -> Option<(Rule, Formula)> {
    let neg = |f: &&Formula| matches!(f, Formula::Not(_));
    let or = |f: &&Formula| matches!(f, Formula::Or(..));
    if let Some(f) = ant.iter().find(neg) {
        return Some((Rule::NegL, f.clone()));
    }
    if let Some(f) = cons.iter().find(neg) {
        return Some((Rule::NegR, f.clone()));
    }
    if let Some(f) = cons.iter().find(or) {
        return Some((Rule::OrR, f.clone()));
    }
    ant.iter().find(or).map(|f| (Rule::OrL, f.clone()))
}

fn distinct_boxes(items: &[Formula]) -> Vec<Formula> {
    let set: BTreeSet<&Formula> = items.iter().filter(|f| f.is_box()).collect();
    set.into_iter().cloned().collect()
}

impl GentzenSearch {
    fn prove(
        &mut self,
        s: &GentzenSequent,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> Step<Node<GentzenSequent>, GentzenSequent> {
        self.used += 1;
        if self.used > self.cfg.fuel {
            return Err(SearchError::FuelExhausted(self.cfg.fuel));
        }
        let key = set_key(s, self.cfg.set_mode);
        if self.failed.contains(&key) {
            return Ok(Err(Failed {
                saturated: s.clone(),
                pruned: false,
            }));
        }
        if self.cfg.loop_check && ancestors.contains(&key) {
            return Ok(Err(Failed {
                saturated: s.clone(),
                pruned: true,
            }));
        }
        ancestors.push(key.clone());
        let result = self.expand(s, ancestors);
        ancestors.pop();
        if let Ok(Err(f)) = &result {
            if !f.pruned {
                self.failed.insert(key);
            }
        }
        result
    }

    fn expand(
        &mut self,
        s: &GentzenSequent,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> Step<Node<GentzenSequent>, GentzenSequent> {
        if let Some(f) = s.antecedent.iter().find(|f| s.consequent.contains(f)) {
            return Ok(Ok(Node::leaf(Rule::Id, s.clone(), Meta::principal(f.clone()))));
        }
        if let Some((rule, f)) = local_choice(&s.antecedent, &s.consequent) {
            let meta = Meta::principal(f);
            let premises = crate::rules::gentzen_premises(rule, &meta, s, Rule::BoxGL)
                .expect("search applies rules to present formulas");
            let mut built = Vec::new();
            for p in &premises {
                match self.prove(p, ancestors)? {
                    Ok(n) => built.push(n),
                    Err(f) => return Ok(Err(f)),
                }
            }
            return Ok(Ok(Node::new(rule, s.clone(), meta, built)));
        }
        let boxes = distinct_boxes(&s.antecedent);
        let mut pruned = false;
        for goal in distinct_boxes(&s.consequent) {
            let meta = Meta::principal(goal).with_boxes(boxes.clone());
            let premise = crate::rules::gentzen_premises(Rule::BoxGL, &meta, s, Rule::BoxGL)
                .expect("boxed context comes from the antecedent")
                .remove(0);
            match self.prove(&premise, ancestors)? {
                Ok(n) => return Ok(Ok(Node::new(Rule::BoxGL, s.clone(), meta, vec![n]))),
                Err(f) => pruned |= f.pruned,
            }
        }
        Ok(Err(Failed {
            saturated: s.clone(),
            pruned,
        }))
    }
}

pub fn decide_glseq(
    s: &GentzenSequent,
    cfg: SearchConfig,
) -> Result<SearchResult<GentzenSequent>, SearchError> {
    let mut search = GentzenSearch {
        cfg,
        used: 0,
        failed: HashSet::new(),
    };
    Ok(match search.prove(s, &mut Vec::new())? {
        Ok(root) => SearchResult::Proved(Proof::new(Calculus::GLseq, root)),
        Err(f) => SearchResult::NotProved {
            saturated: f.saturated,
            hint: hint_for(&gentzen_interpretation(s)),
        },
    })
}

/// Rule-choice discipline for CSGL search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CsglStrategy {
    /// Work only at the leaf of a single branch of the tree, propagating from
    /// its parent first. Output proofs are end-active.
    #[default]
    Leaf,
    /// Close and decompose anywhere on the branch, and try boxR before ∨L.
    /// Terminates, but produces proofs with rule applications away from the
    /// leaves; used to exercise the end-activation pass.
    Deferred,
}

struct TreeSearch {
    cfg: SearchConfig,
    strategy: CsglStrategy,
    used: usize,
    labels: FreshLabels,
    failed: HashSet<(GentzenSequent, Vec<Formula>)>,
}

type Propagated = BTreeSet<(Label, Label, Rule, Formula)>;

/// The branch of the tree being worked on, root first, and the propagation
/// instances already applied along it.
#[derive(Clone)]
struct Branch {
    path: Vec<Label>,
    done: Propagated,
}

impl Branch {
    fn leaf(&self) -> &Label {
        self.path.last().expect("nonempty path")
    }

    fn after(&self, rule: Rule, meta: &Meta) -> Branch {
        let mut next = self.clone();
        if let Some(y) = &meta.fresh {
            next.path.push(y.clone());
        }
        if rule.is_propagation() {
            let (x, y) = (meta.label.clone().unwrap(), meta.aux.clone().unwrap());
            next.done.insert((x, y, rule, meta.principal.clone().unwrap()));
        }
        next
    }

    /// The next unapplied 4L instance on the edge, then the next boxL.
    fn propagation(&self, t: &LabeledSequent, parent: &Label, child: &Label) -> Option<(Rule, Meta)> {
        let boxes = distinct_boxes(&t.left_at(parent));
        for rule in [Rule::FourL, Rule::BoxL] {
            for f in &boxes {
                let key = (parent.clone(), child.clone(), rule, f.clone());
                if !self.done.contains(&key) {
                    return Some((rule, Meta::at(parent, f.clone()).with_aux(child)));
                }
            }
        }
        None
    }
}

type TreeStep = Step<Node<LabeledSequent>, LabeledSequent>;

impl TreeSearch {
    fn tick(&mut self) -> Result<(), SearchError> {
        self.used += 1;
        if self.used > self.cfg.fuel {
            Err(SearchError::FuelExhausted(self.cfg.fuel))
        } else {
            Ok(())
        }
    }

    fn apply(
        &mut self,
        rule: Rule,
        meta: Meta,
        t: &LabeledSequent,
        br: &Branch,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        let premises = match crate::rules::labeled_premises(rule, &meta, t)
            .expect("search applies rules to present formulas")
        {
            crate::rules::Expected::Premises(ps) => ps,
            _ => unreachable!("search emits no structural rules"),
        };
        let next = br.after(rule, &meta);
        let mut built = Vec::new();
        for p in &premises {
            match self.prove(p, &next, ancestors)? {
                Ok(n) => built.push(n),
                Err(f) => return Ok(Err(f)),
            }
        }
        Ok(Ok(Node::new(rule, t.clone(), meta, built)))
    }

    fn prove(
        &mut self,
        t: &LabeledSequent,
        br: &Branch,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        self.tick()?;
        match self.strategy {
            CsglStrategy::Leaf => self.prove_leaf(t, br, ancestors),
            CsglStrategy::Deferred => self.prove_deferred(t, br, ancestors),
        }
    }

    fn initial(t: &LabeledSequent, x: &Label) -> Option<(Rule, Meta)> {
        let cons = t.right_at(x);
        t.left_at(x)
            .into_iter()
            .find(|f| (f.is_atom() || f.is_box()) && cons.contains(f))
            .map(|f| {
                let rule = if f.is_atom() { Rule::Id1 } else { Rule::Id2 };
                (rule, Meta::at(x, f))
            })
    }

    fn prove_leaf(
        &mut self,
        t: &LabeledSequent,
        br: &Branch,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        let path = &br.path;
        let leaf = br.leaf().clone();
        if path.len() >= 2 {
            if let Some((rule, meta)) = br.propagation(t, &path[path.len() - 2], &leaf) {
                return self.apply(rule, meta, t, br, ancestors);
            }
        }
        let component = t.component(&leaf);
        let parent_boxes = match path.len() {
            n if n >= 2 => distinct_boxes(&t.left_at(&path[n - 2])),
            _ => vec![],
        };
        let key = (set_key(&component, self.cfg.set_mode), parent_boxes);
        if self.failed.contains(&key) {
            return Ok(Err(Failed {
                saturated: t.clone(),
                pruned: false,
            }));
        }
        if self.cfg.loop_check && ancestors.contains(&key.0) {
            return Ok(Err(Failed {
                saturated: t.clone(),
                pruned: true,
            }));
        }
        ancestors.push(key.0.clone());
        let result = self.expand_leaf(t, br, &leaf, ancestors);
        ancestors.pop();
        if let Ok(Err(f)) = &result {
            if !f.pruned {
                self.failed.insert(key);
            }
        }
        result
    }

    fn expand_leaf(
        &mut self,
        t: &LabeledSequent,
        br: &Branch,
        leaf: &Label,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        if let Some((rule, meta)) = Self::initial(t, leaf) {
            return self.apply(rule, meta, t, br, ancestors);
        }
        if let Some((rule, f)) = local_choice(&t.left_at(leaf), &t.right_at(leaf)) {
            return self.apply(rule, Meta::at(leaf, f), t, br, ancestors);
        }
        self.modal(t, br, leaf, ancestors)
    }

    fn modal(
        &mut self,
        t: &LabeledSequent,
        br: &Branch,
        leaf: &Label,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        let mut pruned = false;
        for goal in distinct_boxes(&t.right_at(leaf)) {
            let y = self.labels.fresh();
            let meta = Meta::at(leaf, goal).with_fresh(&y);
            match self.apply(Rule::BoxR, meta, t, br, ancestors)? {
                Ok(n) => return Ok(Ok(n)),
                Err(f) => pruned |= f.pruned,
            }
        }
        Ok(Err(Failed {
            saturated: t.clone(),
            pruned,
        }))
    }

    fn prove_deferred(
        &mut self,
        t: &LabeledSequent,
        br: &Branch,
        ancestors: &mut Vec<GentzenSequent>,
    ) -> TreeStep {
        let path = &br.path;
        for x in path {
            if let Some((rule, meta)) = Self::initial(t, x) {
                return self.apply(rule, meta, t, br, ancestors);
            }
        }
        for x in path.iter().rev() {
            let (ant, cons) = (t.left_at(x), t.right_at(x));
            if let Some((rule, f)) = local_choice(&ant, &cons).filter(|(r, _)| *r != Rule::OrL) {
                return self.apply(rule, Meta::at(x, f), t, br, ancestors);
            }
        }
        for w in path.windows(2) {
            if let Some((rule, meta)) = br.propagation(t, &w[0], &w[1]) {
                return self.apply(rule, meta, t, br, ancestors);
            }
        }
        let attempt = self.modal(t, br, br.leaf(), ancestors)?;
        if attempt.is_ok() {
            return Ok(attempt);
        }
        for x in path.iter().rev() {
            if let Some(f) = t.left_at(x).into_iter().find(|f| matches!(f, Formula::Or(..))) {
                return self.apply(Rule::OrL, Meta::at(x, f), t, br, ancestors);
            }
        }
        Ok(attempt)
    }
}

pub fn decide_csgl(
    t: &LabeledSequent,
    cfg: SearchConfig,
) -> Result<SearchResult<LabeledSequent>, SearchError> {
    decide_csgl_with(t, cfg, CsglStrategy::Leaf)
}

/// CSGL search for a flat sequent, with an explicit strategy.
pub fn decide_csgl_with(
    t: &LabeledSequent,
    cfg: SearchConfig,
    strategy: CsglStrategy,
) -> Result<SearchResult<LabeledSequent>, SearchError> {
    let root = crate::sequent::tree_root(t).expect("search starts from a tree sequent");
    let mut search = TreeSearch {
        cfg,
        strategy,
        used: 0,
        labels: FreshLabels::new("y", t.labels()),
        failed: HashSet::new(),
    };
    // a non-flat start is searched from its root branch only
    let br = Branch {
        path: crate::sequent::path_to(t, &first_leaf(t, &root)),
        done: Propagated::new(),
    };
    Ok(match search.prove(t, &br, &mut Vec::new())? {
        Ok(node) => SearchResult::Proved(canonical_labels(&Proof::new(Calculus::CSGL, node))),
        Err(f) => SearchResult::NotProved {
            saturated: f.saturated,
            hint: tree_interpretation(t).ok().and_then(|g| hint_for(&g)),
        },
    })
}

fn first_leaf(t: &LabeledSequent, root: &Label) -> Label {
    let mut cur = root.clone();
    while let Some(c) = t.children(&cur).into_iter().next() {
        cur = c;
    }
    cur
}

/// Outcome of proving a single formula, independent of the calculus.
#[derive(Clone, Debug)]
pub enum FormulaOutcome {
    Proved(AnyProof),
    NotProved {
        saturated: String,
        hint: Option<OracleVerdict>,
    },
}

/// Searches for `⊢ φ` in GLseq, or `⊢ x: φ` in CSGL, with the given configuration.
pub fn prove_formula(
    f: &Formula,
    calculus: Calculus,
    cfg: SearchConfig,
) -> Result<FormulaOutcome, SearchError> {
    Ok(match calculus {
        Calculus::CSGL => {
            let t = LabeledSequent::of_formula(&Label::new("x"), f.clone());
            match decide_csgl(&t, cfg)? {
                SearchResult::Proved(p) => FormulaOutcome::Proved(p.into()),
                SearchResult::NotProved { saturated, hint } => FormulaOutcome::NotProved {
                    saturated: saturated.to_string(),
                    hint,
                },
            }
        }
        _ => match decide_glseq(&GentzenSequent::of_formula(f.clone()), cfg)? {
            SearchResult::Proved(p) => FormulaOutcome::Proved(p.into()),
            SearchResult::NotProved { saturated, hint } => FormulaOutcome::NotProved {
                saturated: saturated.to_string(),
                hint,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_csgl, check_glseq, end_active_report};
    use crate::formula::parse_formula;

    fn glseq(text: &str) -> SearchResult<GentzenSequent> {
        let s = GentzenSequent::of_formula(parse_formula(text).unwrap());
        decide_glseq(&s, SearchConfig::default()).unwrap()
    }

    fn csgl(text: &str, strategy: CsglStrategy) -> SearchResult<LabeledSequent> {
        let t = LabeledSequent::of_formula(&Label::new("x"), parse_formula(text).unwrap());
        decide_csgl_with(&t, SearchConfig::default(), strategy).unwrap()
    }

    const VALID: [&str; 6] = [
        "[]([]p -> p) -> []p",
        "p | ~p",
        "[]p -> [][]p",
        "[](p & q) -> []p & []q",
        "[]p & []q -> [](p & q)",
        "[]([]p -> p) -> [][]p",
    ];

    const INVALID: [&str; 4] = ["[]p -> p", "p", "[]p | []~p", "[][]p -> []p"];

    #[test]
    fn glseq_proofs_check() {
        for f in VALID {
            let p = glseq(f).proof().unwrap_or_else(|| panic!("{f} not proved"));
            let report = check_glseq(&p);
            assert!(report.accepted, "{f}: {:?}", report.failures);
        }
    }

    #[test]
    fn glseq_refutes_with_hint() {
        for f in INVALID {
            match glseq(f) {
                SearchResult::NotProved { hint, .. } => {
                    assert!(matches!(hint, Some(OracleVerdict::Countermodel { .. })), "{f}")
                }
                SearchResult::Proved(_) => panic!("{f} proved"),
            }
        }
    }

    #[test]
    fn identity_closes_immediately() {
        let s = crate::sequent::parse_gentzen("p |- p").unwrap();
        let p = decide_glseq(&s, SearchConfig::default()).unwrap().proof().unwrap();
        assert_eq!(p.root.rule, Rule::Id);
        assert_eq!(p.height(), 0);
    }

    #[test]
    fn csgl_proofs_check_and_are_end_active() {
        for f in VALID {
            let p = csgl(f, CsglStrategy::Leaf).proof().unwrap_or_else(|| panic!("{f}"));
            let report = check_csgl(&p);
            assert!(report.accepted, "{f}: {:?}", report.failures);
            assert!(end_active_report(&p).accepted, "{f}");
        }
        for f in INVALID {
            assert!(!csgl(f, CsglStrategy::Leaf).is_proved(), "{f}");
        }
    }

    #[test]
    fn deferred_strategy_agrees() {
        for f in VALID {
            let p = csgl(f, CsglStrategy::Deferred).proof().unwrap();
            let report = check_csgl(&p);
            assert!(report.accepted, "{f}: {:?}", report.failures);
        }
        for f in INVALID {
            assert!(!csgl(f, CsglStrategy::Deferred).is_proved(), "{f}");
        }
    }

    #[test]
    fn fuel_is_enforced() {
        let s = GentzenSequent::of_formula(parse_formula(VALID[0]).unwrap());
        let cfg = SearchConfig {
            fuel: 2,
            ..SearchConfig::default()
        };
        assert_eq!(decide_glseq(&s, cfg), Err(SearchError::FuelExhausted(2)));
    }
}
