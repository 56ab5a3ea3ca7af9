//! Canonical label names for labeled proofs.

use std::collections::{BTreeMap, BTreeSet};

use crate::proof::{Node, Proof};
use crate::sequent::{Label, LabeledSequent};

/// A label generator that skips names already in use.
#[derive(Clone, Debug)]
pub struct FreshLabels {
    next: usize,
    prefix: &'static str,
    taken: BTreeSet<Label>,
}

impl FreshLabels {
    pub fn new(prefix: &'static str, taken: BTreeSet<Label>) -> FreshLabels {
        FreshLabels {
            next: 1,
            prefix,
            taken,
        }
    }

    /// Generator avoiding every label occurring anywhere in `root`.
    pub fn avoiding(prefix: &'static str, root: &Node<LabeledSequent>) -> FreshLabels {
        FreshLabels::new(prefix, labels_in(root))
    }

    pub fn reserve(&mut self, label: &Label) {
        self.taken.insert(label.clone());
    }

    pub fn fresh(&mut self) -> Label {
        loop {
            let l = Label::new(&format!("{}{}", self.prefix, self.next));
            self.next += 1;
            if self.taken.insert(l.clone()) {
                return l;
            }
        }
    }
}

pub fn labels_in(root: &Node<LabeledSequent>) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    for (_, n) in root.walk() {
        out.extend(n.conclusion.labels());
        for l in [&n.meta.label, &n.meta.aux, &n.meta.fresh, &n.meta.from, &n.meta.to]
            .into_iter()
            .flatten()
        {
            out.insert(l.clone());
        }
        if let Some(p) = &n.meta.path {
            out.extend(p.iter().cloned());
        }
    }
    out
}

pub fn rename_node(node: &Node<LabeledSequent>, map: &BTreeMap<Label, Label>) -> Node<LabeledSequent> {
    node.map(&|n: &Node<LabeledSequent>| (n.conclusion.rename(map), n.meta.rename(map)))
}

/// Renames every label not in the end sequent to `y1, y2, ...` in
/// breadth-first order of first appearance. The renaming is injective, so
/// every rule instance stays an instance.
pub fn canonical_labels(p: &Proof<LabeledSequent>) -> Proof<LabeledSequent> {
    let fixed = p.root.conclusion.labels();
    let mut gen = FreshLabels::new("y", fixed.clone());
    let mut map: BTreeMap<Label, Label> = BTreeMap::new();
    for addr in p.root.breadth_first() {
        let n = p.root.get(&addr).expect("address exists");
        let mut seen: Vec<Label> = Vec::new();
        seen.extend(n.meta.fresh.iter().cloned());
        seen.extend(n.conclusion.labels());
        for l in seen {
            if !fixed.contains(&l) && !map.contains_key(&l) {
                map.insert(l, gen.fresh());
            }
        }
    }
    // labels mentioned only in metadata of leaves
    for l in labels_in(&p.root) {
        if !fixed.contains(&l) && !map.contains_key(&l) {
            map.insert(l, gen.fresh());
        }
    }
    Proof::new(p.calculus, rename_node(&p.root, &map))
}
