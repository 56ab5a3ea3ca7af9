//! Finite Kripke models, evaluation, and formula interpretations of sequents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{is_identifier, Formula};
use crate::proof::AnyProof;
use crate::sequent::{tree_root, GentzenSequent, Label, LabeledSequent, LinearNestedSequent, TreeError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("relation is not irreflexive after transitive closure at world {0}")]
    Reflexive(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("label {0} has no assigned world")]
    Unassigned(String),
}

/// A finite transitive, irreflexive Kripke model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    worlds: Vec<String>,
    successors: Vec<BTreeSet<usize>>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
}

impl Model {
    /// Builds a model, closing `rel` transitively and rejecting reflexive loops.
    pub fn new(
        worlds: Vec<String>,
        rel: &[(String, String)],
        valuation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Model, ModelError> {
        let index: BTreeMap<&str, usize> = worlds
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();
        let find = |w: &str| {
            index
                .get(w)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(w.to_string()))
        };
        let mut successors = vec![BTreeSet::new(); worlds.len()];
        for (a, b) in rel {
            successors[find(a)?].insert(find(b)?);
        }
        loop {
            let mut changed = false;
            for w in 0..worlds.len() {
                let reach: Vec<usize> = successors[w]
                    .iter()
                    .flat_map(|u| successors[*u].iter().copied())
                    .collect();
                for u in reach {
                    changed |= successors[w].insert(u);
                }
            }
            if !changed {
                break;
            }
        }
        for (w, succ) in successors.iter().enumerate() {
            if succ.contains(&w) {
                return Err(ModelError::Reflexive(worlds[w].clone()));
            }
        }
        let mut val = BTreeMap::new();
        for (atom, ws) in valuation {
            let set: BTreeSet<usize> = ws.iter().map(|w| find(w)).collect::<Result<_, _>>()?;
            val.insert(atom.clone(), set);
        }
        Ok(Model {
            worlds,
            successors,
            valuation: val,
        })
    }

    /// Model on worlds `w0..w{n-1}` from index data; `parents` gives the tree shape.
    pub(crate) fn from_tree(parents: &[Option<usize>], true_atoms: &[BTreeSet<String>]) -> Model {
        let worlds: Vec<String> = (0..parents.len()).map(|i| format!("w{i}")).collect();
        let rel: Vec<(String, String)> = parents
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (worlds[p].clone(), worlds[i].clone())))
            .collect();
        let mut val: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, atoms) in true_atoms.iter().enumerate() {
            for a in atoms {
                val.entry(a.clone()).or_default().push(worlds[i].clone());
            }
        }
        Model::new(worlds, &rel, &val).expect("trees are irreflexive")
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    /// All pairs of the (transitively closed) accessibility relation.
    pub fn relation(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (w, succ) in self.successors.iter().enumerate() {
            for u in succ {
                out.push((self.worlds[w].clone(), self.worlds[*u].clone()));
            }
        }
        out
    }

    pub fn related(&self, w: &str, u: &str) -> Result<bool, ModelError> {
        let (w, u) = (self.index(w)?, self.index(u)?);
        Ok(self.successors[w].contains(&u))
    }

    fn index(&self, w: &str) -> Result<usize, ModelError> {
        self.worlds
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| ModelError::UnknownWorld(w.to_string()))
    }

    fn holds(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => self
                .valuation
                .get(&**a)
                .is_some_and(|ws| ws.contains(&w)),
            Formula::Not(g) => !self.holds(w, g),
            Formula::Or(a, b) => self.holds(w, a) || self.holds(w, b),
            Formula::Box(g) => self.successors[w].iter().all(|u| self.holds(*u, g)),
        }
    }

    /// The converse relation has no cycles (checked by depth-first search).
    pub fn is_acyclic(&self) -> bool {
        let n = self.worlds.len();
        let mut state = vec![0u8; n];
        fn visit(w: usize, succ: &[BTreeSet<usize>], state: &mut [u8]) -> bool {
            match state[w] {
                1 => return false,
                2 => return true,
                _ => {}
            }
            state[w] = 1;
            for u in &succ[w] {
                if !visit(*u, succ, state) {
                    return false;
                }
            }
            state[w] = 2;
            true
        }
        (0..n).all(|w| visit(w, &self.successors, &mut state))
    }

    pub fn is_transitive(&self) -> bool {
        self.successors.iter().all(|succ| {
            succ.iter()
                .all(|u| self.successors[*u].is_subset(succ))
        })
    }
}

pub fn eval(m: &Model, w: &str, f: &Formula) -> Result<bool, ModelError> {
    Ok(m.holds(m.index(w)?, f))
}

impl fmt::Display for Model {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "worlds: {}", self.worlds.join(" "))?;
        let pairs: Vec<String> = self
            .relation()
            .into_iter()
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        writeln!(out, "rel: {}", pairs.join("; "))?;
        for (atom, ws) in &self.valuation {
            let names: Vec<&str> = ws.iter().map(|w| self.worlds[*w].as_str()).collect();
            writeln!(out, "val {atom}: {}", names.join(" "))?;
        }
        Ok(())
    }
}

/// Reads the `worlds:` / `rel:` / `val p:` text format.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut worlds: Option<Vec<String>> = None;
    let mut rel = Vec::new();
    let mut val: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let bad = |line: usize, message: &str| ModelError::Syntax {
        line,
        message: message.to_string(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((head, rest)) = content.split_once(':') else {
            return Err(bad(line, "expected ':'"));
        };
        let head = head.trim();
        if head == "worlds" {
            if worlds.is_some() {
                return Err(bad(line, "duplicate worlds line"));
            }
            let ws: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if ws.is_empty() {
                return Err(bad(line, "a model needs a world"));
            }
            let distinct: BTreeSet<&String> = ws.iter().collect();
            if distinct.len() != ws.len() {
                return Err(bad(line, "duplicate world"));
            }
            worlds = Some(ws);
        } else if head == "rel" {
            for pair in rest.split(';') {
                let pair = pair.trim();
                if pair.is_empty() {
                    continue;
                }
                let Some((a, b)) = pair.split_once('<') else {
                    return Err(bad(line, "expected w<u"));
                };
                let (a, b) = (a.trim(), b.trim());
                if a.is_empty() || b.is_empty() {
                    return Err(bad(line, "expected w<u"));
                }
                rel.push((a.to_string(), b.to_string()));
            }
        } else if let Some(atom) = head.strip_prefix("val ") {
            let atom = atom.trim();
            if !is_identifier(atom) {
                return Err(bad(line, "expected atom name"));
            }
            val.entry(atom.to_string())
                .or_default()
                .extend(rest.split_whitespace().map(str::to_string));
        } else {
            return Err(bad(line, "expected worlds, rel or val"));
        }
    }
    let worlds = worlds.ok_or_else(|| bad(0, "missing worlds line"))?;
    Model::new(worlds, &rel, &val)
}

/// Labels mapped to worlds.
pub type Assignment = BTreeMap<Label, String>;

pub fn eval_labeled_sequent(
    m: &Model,
    a: &Assignment,
    s: &LabeledSequent,
) -> Result<bool, ModelError> {
    let world = |l: &Label| -> Result<usize, ModelError> {
        let w = a
            .get(l)
            .ok_or_else(|| ModelError::Unassigned(l.to_string()))?;
        m.index(w)
    };
    for (x, y) in &s.relations {
        if !m.successors[world(x)?].contains(&world(y)?) {
            return Ok(true);
        }
    }
    for lf in &s.antecedent {
        if !m.holds(world(&lf.label)?, &lf.formula) {
            return Ok(true);
        }
    }
    for lf in &s.consequent {
        if m.holds(world(&lf.label)?, &lf.formula) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `p0 | ~p0`, standing in for the empty conjunction.
pub fn verum() -> Formula {
    let p = Formula::atom("p0");
    Formula::or(p.clone(), Formula::not(p))
}

pub fn falsum() -> Formula {
    Formula::not(verum())
}

fn disjunction(items: Vec<Formula>) -> Option<Formula> {
    let mut iter = items.into_iter();
    let first = iter.next()?;
    Some(iter.fold(first, Formula::or))
}

fn conjunction(items: &[Formula]) -> Option<Formula> {
    let mut iter = items.iter().cloned();
    let first = iter.next()?;
    Some(iter.fold(first, Formula::and))
}

/// `⋀Γ → (⋁Δ ∨ extra...)`; an empty Γ drops the implication.
fn implication(ant: &[Formula], cons: &[Formula], extra: Vec<Formula>) -> Formula {
    let mut right: Vec<Formula> = cons.to_vec();
    right.extend(extra);
    let right = disjunction(right);
    match (conjunction(ant), right) {
        (None, Some(r)) => r,
        (None, None) => falsum(),
        (Some(l), Some(r)) => Formula::implies(l, r),
        (Some(l), None) => Formula::not(l),
    }
}

pub fn gentzen_interpretation(s: &GentzenSequent) -> Formula {
    implication(&s.antecedent, &s.consequent, vec![])
}

pub fn lns_interpretation(g: &LinearNestedSequent) -> Formula {
    let mut iter = g.components.iter().rev();
    let end = iter.next().expect("nonempty");
    let mut acc = gentzen_interpretation(end);
    for c in iter {
        acc = implication(&c.antecedent, &c.consequent, vec![Formula::boxed(acc)]);
    }
    acc
}

/// Formula interpretation of a tree sequent, read from its root.
pub fn tree_interpretation(t: &LabeledSequent) -> Result<Formula, TreeError> {
    let root = tree_root(t)?;
    fn at(t: &LabeledSequent, x: &Label) -> Formula {
        let kids: Vec<Formula> = t
            .children(x)
            .iter()
            .map(|c| Formula::boxed(at(t, c)))
            .collect();
        implication(&t.left_at(x), &t.right_at(x), kids)
    }
    Ok(at(t, &root))
}

/// The formula interpretation of a proof's conclusion. Labeled conclusions
/// must be tree sequents.
pub fn conclusion_interpretation(p: &AnyProof) -> Result<Formula, TreeError> {
    match p {
        AnyProof::Gentzen(q) => Ok(gentzen_interpretation(q.conclusion())),
        AnyProof::Nested(q) => Ok(lns_interpretation(q.conclusion())),
        AnyProof::Labeled(q) => tree_interpretation(q.conclusion()),
        AnyProof::Cyclic(d) => Ok(gentzen_interpretation(&d.root.conclusion)),
    }
}
