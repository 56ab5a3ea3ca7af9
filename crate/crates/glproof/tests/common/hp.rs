//! Height-preservation checks for admissible rules and inverses.

use glproof::check::check_proof;
use glproof::formula::Formula;
use glproof::proof::{AnyProof, Calculus, Meta, Rule};
use glproof::rules::{gentzen_premises, labeled_premises, nested_premises, Expected};
use glproof::search::{prove_formula, FormulaOutcome, SearchConfig};
use glproof::sequent::{parse_gentzen, parse_labeled, GentzenSequent, Label, LabeledSequent};
use glproof::transform::{admit, apply_inverse, linearize, to_end_active, AdmittedRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random_formula;

/// `count` proofs of random valid formulas: GLseq and CSGL search results,
/// plus LNGL proofs obtained from some of the CSGL ones.
pub fn search_proofs(count: usize, seed: u64) -> Vec<AnyProof> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SearchConfig {
        fuel: 20_000,
        ..SearchConfig::default()
    };
    let mut out = Vec::new();
    while out.len() < count {
        let f = random_formula(&mut rng, 8);
        for calculus in [Calculus::GLseq, Calculus::CSGL] {
            if let Ok(FormulaOutcome::Proved(p)) = prove_formula(&f, calculus, cfg) {
                if let AnyProof::Labeled(q) = &p {
                    if out.len() % 3 == 0 {
                        if let Ok((lngl, _)) = to_end_active(q).and_then(|a| linearize(&a)) {
                            out.push(lngl.into());
                        }
                    }
                }
                out.push(p);
            }
        }
    }
    out.truncate(count);
    out
}

fn verify(what: &str, input: &AnyProof, output: &AnyProof, expected: &str, out: &mut Vec<String>) {
    if output.height() > input.height() {
        out.push(format!(
            "{what} on {}: height {} > {}",
            input.conclusion_text(),
            output.height(),
            input.height()
        ));
    }
    let report = check_proof(output);
    if !report.accepted {
        out.push(format!("{what} on {}: rejected\n{report}", input.conclusion_text()));
    }
    if output.conclusion_text() != expected {
        out.push(format!(
            "{what} on {}: concludes {} instead of {expected}",
            input.conclusion_text(),
            output.conclusion_text()
        ));
    }
}

fn local_rule(f: &Formula, left: bool) -> Option<(Rule, usize)> {
    match (f, left) {
        (Formula::Not(_), true) => Some((Rule::NegL, 1)),
        (Formula::Not(_), false) => Some((Rule::NegR, 1)),
        (Formula::Or(..), true) => Some((Rule::OrL, 2)),
        (Formula::Or(..), false) => Some((Rule::OrR, 1)),
        _ => None,
    }
}

/// A local rule applicable backwards to the conclusion, with its meta and
/// premise count.
fn labeled_step(s: &LabeledSequent) -> Option<(Rule, Meta, usize)> {
    for x in s.labels() {
        for (fs, left) in [(s.left_at(&x), true), (s.right_at(&x), false)] {
            for f in fs {
                if let Some((rule, n)) = local_rule(&f, left) {
                    return Some((rule, Meta::at(&x, f), n));
                }
            }
        }
    }
    None
}

fn gentzen_step(s: &GentzenSequent) -> Option<(Rule, Meta, usize)> {
    for (fs, left) in [(&s.antecedent, true), (&s.consequent, false)] {
        for f in fs {
            if let Some((rule, n)) = local_rule(f, left) {
                return Some((rule, Meta::principal(f.clone()), n));
            }
        }
    }
    None
}

fn expected_premises(p: &AnyProof, rule: Rule, meta: &Meta) -> Vec<String> {
    match p {
        AnyProof::Labeled(q) => match labeled_premises(rule, meta, q.conclusion()) {
            Ok(Expected::Premises(v)) => v.iter().map(|s| s.to_string()).collect(),
            _ => vec![],
        },
        AnyProof::Gentzen(q) => gentzen_premises(rule, meta, q.conclusion(), Rule::BoxGL)
            .map(|v| v.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default(),
        AnyProof::Nested(q) => nested_premises(rule, meta, q.conclusion())
            .map(|v| v.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default(),
        AnyProof::Cyclic(_) => vec![],
    }
}

fn next_step(p: &AnyProof) -> Option<(Rule, Meta, usize)> {
    match p {
        AnyProof::Labeled(q) => labeled_step(q.conclusion()),
        // GLseq id takes compound principals, so its inverses can grow
        AnyProof::Gentzen(_) => None,
        AnyProof::Nested(q) => gentzen_step(q.conclusion().end()),
        AnyProof::Cyclic(_) => None,
    }
}

fn weakening(p: &AnyProof) -> Option<(AdmittedRule, String)> {
    match p {
        AnyProof::Labeled(q) => {
            let root = Label::new("x");
            if !q.conclusion().mentions(&root) {
                return None;
            }
            let mut extra = parse_labeled("xRw; x: r, w: q |- w: []p, x1: p").ok()?;
            // keep the conclusion a tree: hang x1 below w
            extra.relations.insert((Label::new("w"), Label::new("x1")));
            let expected = q.conclusion().union(&extra).to_string();
            Some((AdmittedRule::Weaken(extra), expected))
        }
        AnyProof::Gentzen(q) => {
            let extra = parse_gentzen("r, []q |- []r, p").ok()?;
            let expected = q.conclusion().union(&extra).to_string();
            Some((AdmittedRule::WeakenGentzen(extra), expected))
        }
        AnyProof::Nested(q) => {
            let extra = parse_gentzen("r |- []q").ok()?;
            let mut g = q.conclusion().clone();
            g.components[0] = g.components[0].union(&extra);
            Some((AdmittedRule::WeakenNested { component: 0, extra }, g.to_string()))
        }
        AnyProof::Cyclic(_) => None,
    }
}

/// Weakening, then (for labeled and nested proofs) a chain of local inverses
/// down the first premise. Each output must re-check, conclude the expected
/// sequent, and be no taller than its input. Returns one line per violation and the number of checks.
pub fn hp_violations(p: &AnyProof) -> (Vec<String>, usize) {
    let mut out = Vec::new();
    let mut checks = 0;
    if let Some((rule, expected)) = weakening(p) {
        checks += 1;
        match admit(&rule, p) {
            Ok(w) => verify("weakening", p, &w, &expected, &mut out),
            Err(e) => out.push(format!("weakening on {}: {e}", p.conclusion_text())),
        }
    }
    let mut current = p.clone();
    for _ in 0..8 {
        let Some((rule, meta, n)) = next_step(&current) else { break };
        let premises = expected_premises(&current, rule, &meta);
        if premises.len() != n {
            out.push(format!("{rule} on {}: no expected premises", current.conclusion_text()));
            break;
        }
        let mut first = None;
        for (i, expected) in premises.iter().enumerate() {
            checks += 1;
            match apply_inverse(rule, &meta, i, &current) {
                Ok(q) => {
                    verify(&format!("{rule}-inverse {i}"), &current, &q, expected, &mut out);
                    first.get_or_insert(q);
                }
                Err(e) => out.push(format!("{rule}-inverse {i} on {}: {e}", current.conclusion_text())),
            }
        }
        match first {
            Some(q) => current = q,
            None => break,
        }
    }
    (out, checks)
}
