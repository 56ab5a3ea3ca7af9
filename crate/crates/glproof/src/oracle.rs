//! Validity oracle over finite transitive irreflexive trees.
//!
//! A world-type procedure decides the question: a world is described by its
//! atom valuation and the set of boxed subformulas true there, and a set of
//! true boxes is realizable when every false box has a witness successor whose
//! box set is strictly larger and includes the refuted box. The ranks computed
//! along the way give the depth of the smallest realizing tree. When a
//! countermodel exists, a sweep over every tree with at most four worlds and
//! every valuation, smallest first, looks for a smaller one than the extracted
//! tree.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{closure, Formula};
use crate::semantics::{eval, Model};

/// Trees deeper than `depth` worlds (counted along a branch) are not searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelBound {
    pub depth: usize,
}

impl ModelBound {
    /// One world per boxed subformula plus the root.
    pub fn default_for(f: &Formula) -> ModelBound {
        ModelBound {
            depth: closure(f).boxed.len() + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Valid { bound_too_small: bool },
    Countermodel { model: Model, world: String },
}

impl OracleVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleVerdict::Valid { .. })
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Valid { bound_too_small: false } => writeln!(out, "valid"),
            OracleVerdict::Valid { bound_too_small: true } => {
                writeln!(out, "valid (bound below the default; BoundTooSmall)")
            }
            OracleVerdict::Countermodel { model, world } => {
                writeln!(out, "countermodel at {world}")?;
                write!(out, "{model}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("formula too large for the oracle: {boxes} boxed subformulas, {atoms} atoms")]
pub struct OracleTooLarge {
    pub boxes: usize,
    pub atoms: usize,
}

const MAX_BOXES: usize = 22;
const MAX_ATOMS: usize = 16;
const SWEEP_WORLDS: usize = 4;
const SWEEP_BITS: usize = 14;

/// Subformulas in bottom-up order, each referring to earlier entries.
enum Node {
    Atom(usize),
    Not(usize),
    Or(usize, usize),
    Box(usize, usize),
}

struct Compiled {
    atoms: Vec<String>,
    nodes: Vec<Node>,
    /// node index of each boxed subformula's body
    bodies: Vec<usize>,
    top: usize,
}

fn compile(f: &Formula) -> Compiled {
    let mut atoms: Vec<String> = f.atoms().iter().map(|a| a.to_string()).collect();
    atoms.sort();
    let mut seen: Vec<Formula> = Vec::new();
    let mut nodes = Vec::new();
    let mut bodies = Vec::new();
    fn go(
        f: &Formula,
        atoms: &[String],
        seen: &mut Vec<Formula>,
        nodes: &mut Vec<Node>,
        bodies: &mut Vec<usize>,
    ) -> usize {
        if let Some(i) = seen.iter().position(|g| g == f) {
            return i;
        }
        let node = match f {
            Formula::Atom(a) => Node::Atom(atoms.iter().position(|b| **b == **a).unwrap()),
            Formula::Not(g) => Node::Not(go(g, atoms, seen, nodes, bodies)),
            Formula::Or(a, b) => {
                let a = go(a, atoms, seen, nodes, bodies);
                let b = go(b, atoms, seen, nodes, bodies);
                Node::Or(a, b)
            }
            Formula::Box(g) => {
                let body = go(g, atoms, seen, nodes, bodies);
                bodies.push(body);
                Node::Box(bodies.len() - 1, body)
            }
        };
        seen.push(f.clone());
        nodes.push(node);
        nodes.len() - 1
    }
    let top = go(f, &atoms, &mut seen, &mut nodes, &mut bodies);
    Compiled {
        atoms,
        nodes,
        bodies,
        top,
    }
}

impl Compiled {
    /// Truth of every node at a world with the given atoms and true boxes.
    fn truth(&self, valuation: u64, boxes: u64, out: &mut Vec<bool>) {
        out.clear();
        for node in &self.nodes {
            let v = match node {
                Node::Atom(a) => valuation >> a & 1 == 1,
                Node::Not(g) => !out[*g],
                Node::Or(a, b) => out[*a] || out[*b],
                Node::Box(j, _) => boxes >> j & 1 == 1,
            };
            out.push(v);
        }
    }

    /// Truth of every node as a world bitmask over a small explicit tree.
    fn sweep_eval(&self, succ: &[u32], val: &[u32], all: u32) -> u32 {
        let mut masks: Vec<u32> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let m = match node {
                Node::Atom(a) => val[*a],
                Node::Not(g) => !masks[*g] & all,
                Node::Or(a, b) => masks[*a] | masks[*b],
                Node::Box(_, body) => {
                    let body = masks[*body];
                    (0..succ.len())
                        .filter(|w| succ[*w] & !body == 0)
                        .fold(0, |acc, w| acc | 1 << w)
                }
            };
            masks.push(m);
        }
        masks[self.top]
    }
}

/// Parent arrays of rooted trees on `n` worlds with world 0 as the root.
fn skeletons(n: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![None]];
    for i in 1..n {
        let mut next = Vec::new();
        for s in &out {
            for p in 0..i {
                let mut t = s.clone();
                t.push(Some(p));
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn tree_depth(parents: &[Option<usize>]) -> usize {
    (0..parents.len())
        .map(|mut w| {
            let mut d = 1;
            while let Some(p) = parents[w] {
                w = p;
                d += 1;
            }
            d
        })
        .max()
        .unwrap_or(0)
}

fn build_model(c: &Compiled, parents: &[Option<usize>], valuations: &[u64]) -> Model {
    let atoms: Vec<BTreeSet<String>> = valuations
        .iter()
        .map(|v| {
            c.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| v >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    Model::from_tree(parents, &atoms)
}

/// Smallest countermodel among trees of at most `max_worlds` worlds.
fn sweep(c: &Compiled, bound: ModelBound, max_worlds: usize) -> Option<Model> {
    let na = c.atoms.len();
    for n in 1..=max_worlds {
        if na * n > SWEEP_BITS {
            break;
        }
        let all: u32 = (1 << n) - 1;
        for parents in skeletons(n) {
            if tree_depth(&parents) > bound.depth {
                continue;
            }
            let mut succ = vec![0u32; n];
            for w in 1..n {
                let mut p = parents[w];
                while let Some(q) = p {
                    succ[q] |= 1 << w;
                    p = parents[q];
                }
            }
            for bits in 0u64..(1u64 << (na * n)) {
                let per_world: Vec<u64> = (0..n)
                    .map(|w| (bits >> (w * na)) & ((1u64 << na) - 1))
                    .collect();
                let val: Vec<u32> = (0..na)
                    .map(|a| {
                        (0..n)
                            .filter(|w| per_world[*w] >> a & 1 == 1)
                            .fold(0, |acc, w| acc | 1 << w)
                    })
                    .collect();
                if c.sweep_eval(&succ, &val, all) & 1 == 0 {
                    return Some(build_model(c, &parents, &per_world));
                }
            }
        }
    }
    None
}

struct Types {
    nb: usize,
    na: usize,
    /// per state (valuation, boxes): bodies that hold, and whether the top formula holds
    body_mask: Vec<u64>,
    top: Vec<bool>,
    /// minimal depth of a tree realizing a box set; `usize::MAX` if none
    rank: Vec<usize>,
}

impl Types {
    fn state(&self, valuation: u64, boxes: u64) -> usize {
        ((boxes as usize) << self.na) | valuation as usize
    }

    /// Candidate witnesses for refuting box `j` above a world with true boxes `boxes`.
    fn witnesses(&self, boxes: u64, j: usize) -> impl Iterator<Item = (u64, u64)> + '_ {
        let need = boxes | 1 << j;
        let full: u64 = (1u64 << self.nb) - 1;
        let free = full & !need;
        // enumerate supersets of `need` in increasing order of the free bits
        let mut sub: u64 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let cur = need | sub;
            if sub == free {
                done = true;
            } else {
                sub = (sub.wrapping_sub(free)) & free;
            }
            Some(cur)
        })
        .flat_map(move |t| (0..1u64 << self.na).map(move |v| (v, t)))
        .filter(move |(v, t)| {
            let m = self.body_mask[self.state(*v, *t)];
            m & boxes == boxes && m >> j & 1 == 0 && self.rank[*t as usize] != usize::MAX
        })
    }
}

fn world_types(c: &Compiled) -> Types {
    let nb = c.bodies.len();
    let na = c.atoms.len();
    let states = 1usize << (nb + na);
    let mut body_mask = vec![0u64; states];
    let mut top = vec![false; states];
    let mut truth = Vec::new();
    for boxes in 0..1u64 << nb {
        for v in 0..1u64 << na {
            c.truth(v, boxes, &mut truth);
            let s = ((boxes as usize) << na) | v as usize;
            body_mask[s] = c
                .bodies
                .iter()
                .enumerate()
                .filter(|(_, b)| truth[**b])
                .fold(0, |acc, (j, _)| acc | 1 << j);
            top[s] = truth[c.top];
        }
    }
    let mut types = Types {
        nb,
        na,
        body_mask,
        top,
        rank: vec![usize::MAX; 1 << nb],
    };
    let mut order: Vec<u64> = (0..1u64 << nb).collect();
    order.sort_by_key(|t| std::cmp::Reverse(t.count_ones()));
    for t in order {
        let mut rank = 1;
        for j in 0..nb {
            if t >> j & 1 == 1 {
                continue;
            }
            let best = types
                .witnesses(t, j)
                .map(|(_, t2)| types.rank[t2 as usize])
                .min();
            match best {
                Some(r) => rank = rank.max(r + 1),
                None => {
                    rank = usize::MAX;
                    break;
                }
            }
        }
        types.rank[t as usize] = rank;
    }
    types
}

/// Expands a world type into an explicit tree within `depth`.
fn extract(
    types: &Types,
    root: (u64, u64),
    depth: usize,
    parents: &mut Vec<Option<usize>>,
    valuations: &mut Vec<u64>,
    parent: Option<usize>,
) {
    let me = parents.len();
    parents.push(parent);
    valuations.push(root.0);
    let (_, boxes) = root;
    let mut children: Vec<(u64, u64)> = Vec::new();
    for j in 0..types.nb {
        if boxes >> j & 1 == 1 {
            continue;
        }
        let covered = children
            .iter()
            .any(|(v, t)| types.body_mask[types.state(*v, *t)] >> j & 1 == 0);
        if covered {
            continue;
        }
        let pick = types
            .witnesses(boxes, j)
            .filter(|(_, t)| types.rank[*t as usize] < depth)
            .min_by_key(|(_, t)| types.rank[*t as usize])
            .expect("ranked box sets have witnesses");
        children.push(pick);
    }
    for child in children {
        extract(types, child, depth - 1, parents, valuations, Some(me));
    }
}

pub fn oracle_validity(f: &Formula, bound: ModelBound) -> Result<OracleVerdict, OracleTooLarge> {
    let c = compile(f);
    let (nb, na) = (c.bodies.len(), c.atoms.len());
    if nb > MAX_BOXES || na > MAX_ATOMS {
        return Err(OracleTooLarge {
            boxes: nb,
            atoms: na,
        });
    }
    let types = world_types(&c);
    let mut refuting = None;
    'search: for boxes in 0..1u64 << nb {
        if types.rank[boxes as usize] > bound.depth {
            continue;
        }
        for v in 0..1u64 << na {
            if !types.top[types.state(v, boxes)] {
                refuting = Some((v, boxes));
                break 'search;
            }
        }
    }
    let Some(root) = refuting else {
        return Ok(OracleVerdict::Valid {
            bound_too_small: bound < ModelBound::default_for(f),
        });
    };
    let mut parents = Vec::new();
    let mut valuations = Vec::new();
    extract(&types, root, bound.depth, &mut parents, &mut valuations, None);
    let mut model = build_model(&c, &parents, &valuations);
    if parents.len() > 1 {
        if let Some(small) = sweep(&c, bound, (parents.len() - 1).min(SWEEP_WORLDS)) {
            model = small;
        }
    }
    let world = model.worlds()[0].clone();
    assert!(
        !eval(&model, &world, f).expect("root exists"),
        "oracle countermodel failed its self-check for {f}"
    );
    Ok(OracleVerdict::Countermodel { model, world })
}

/// `oracle_validity` at the default bound.
pub fn is_valid(f: &Formula) -> Result<bool, OracleTooLarge> {
    Ok(oracle_validity(f, ModelBound::default_for(f))?.is_valid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn verdict(s: &str) -> OracleVerdict {
        let f = parse_formula(s).unwrap();
        oracle_validity(&f, ModelBound::default_for(&f)).unwrap()
    }

    #[test]
    fn lob_is_valid() {
        assert!(verdict("[]([]p->p)->[]p").is_valid());
        assert!(verdict("p | ~p").is_valid());
        assert!(verdict("[]p -> [][]p").is_valid());
    }

    #[test]
    fn reflexivity_fails_with_a_small_model() {
        match verdict("[]p -> p") {
            OracleVerdict::Countermodel { model, world } => {
                assert!(model.world_count() <= 2);
                assert!(!eval(&model, &world, &parse_formula("[]p -> p").unwrap()).unwrap());
            }
            v => panic!("expected a countermodel, got {v:?}"),
        }
    }

    #[test]
    fn deep_countermodels_need_depth() {
        let f = parse_formula("[]q | []~q").unwrap();
        let deep = oracle_validity(&f, ModelBound { depth: 1 }).unwrap();
        assert_eq!(deep, OracleVerdict::Valid { bound_too_small: true });
    }

    #[test]
    fn skeleton_counts() {
        assert_eq!(skeletons(1).len(), 1);
        assert_eq!(skeletons(3).len(), 2);
        assert_eq!(skeletons(4).len(), 6);
    }
}
