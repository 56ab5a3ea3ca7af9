#![allow(dead_code)]

use glproof::formula::Formula;
use proptest::prelude::*;
use rand::Rng;

pub mod hp;

pub const ATOMS: [&str; 2] = ["p", "q"];

/// Every formula over `p`, `q` with exactly `n` connectives, by table.
pub fn enumerate(max: usize) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = vec![ATOMS.iter().map(|a| Formula::atom(a)).collect()];
    for n in 1..=max {
        let mut level = Vec::new();
        for f in &by_size[n - 1] {
            level.push(Formula::not(f.clone()));
            level.push(Formula::boxed(f.clone()));
        }
        for k in 0..n {
            for a in &by_size[k] {
                for b in &by_size[n - 1 - k] {
                    level.push(Formula::or(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size
}

/// A random formula with at most `budget` connectives.
pub fn random_formula<R: Rng>(rng: &mut R, budget: usize) -> Formula {
    if budget == 0 || rng.gen_bool(0.15) {
        return Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, budget - 1)),
        1 => Formula::boxed(random_formula(rng, budget - 1)),
        _ => {
            let left = rng.gen_range(0..budget);
            Formula::or(
                random_formula(rng, left),
                random_formula(rng, budget - 1 - left),
            )
        }
    }
}

pub fn arb_formula(max_depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::atom("p")), Just(Formula::atom("q")), Just(Formula::atom("r"))];
    leaf.prop_recursive(max_depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    })
}
