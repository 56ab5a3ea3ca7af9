//! Formulas of the modal language over atoms, negation, disjunction and box.
//!
//! Conjunction and implication exist only as input sugar: the parser rewrites
//! `a & b` to `~(~a | ~b)` and `a -> b` to `~a | b`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A modal formula. The derived ordering follows declaration order, so
/// atoms sort before negations, negations before disjunctions and
/// disjunctions before boxes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Arc<str>),
    Not(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: String,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// The body of a boxed formula.
    pub fn unbox(&self) -> Option<&Formula> {
        match self {
            Formula::Box(f) => Some(f),
            _ => None,
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Box(f) => 1 + f.weight(),
            Formula::Or(a, b) => 1 + a.weight() + b.weight(),
        }
    }

    /// Number of connective occurrences.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Box(f) => 1 + f.connectives(),
            Formula::Or(a, b) => 1 + a.connectives() + b.connectives(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) | Formula::Box(f) => f.collect_atoms(out),
            Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Box(f) => f.collect_subformulas(out),
            Formula::Or(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }
}

/// Subformula closure, node-count weight and the boxed subformulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub subformulas: BTreeSet<Formula>,
    pub weight: usize,
    pub boxed: BTreeSet<Formula>,
}

pub fn closure(f: &Formula) -> Closure {
    let subformulas = f.subformulas();
    let boxed = subformulas.iter().filter(|g| g.is_box()).cloned().collect();
    Closure {
        weight: f.weight(),
        subformulas,
        boxed,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => out.write_str(a),
            Formula::Not(f) => {
                out.write_str("~")?;
                write_operand(out, f)
            }
            Formula::Box(f) => {
                out.write_str("[]")?;
                write_operand(out, f)
            }
            Formula::Or(a, b) => {
                write!(out, "{a} | ")?;
                if matches!(**b, Formula::Or(..)) {
                    write!(out, "({b})")
                } else {
                    write!(out, "{b}")
                }
            }
        }
    }
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if matches!(f, Formula::Or(..)) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut parser = Parser::new(text);
    let f = parser.implication()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        let len = token.chars().count();
        if self.pos + len > self.chars.len() {
            return false;
        }
        if self.chars[self.pos..self.pos + len].iter().copied().eq(token.chars()) {
            self.pos += len;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.disjunction()?;
        if self.eat("->") {
            let right = self.implication()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.conjunction()?;
        loop {
            self.skip_ws();
            // `|-` is the sequent turnstile, never a disjunction
            if self.peek_str("|-") || !self.eat("|") {
                return Ok(left);
            }
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while self.eat("&") {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn peek_str(&self, token: &str) -> bool {
        let len = token.chars().count();
        self.pos + len <= self.chars.len()
            && self.chars[self.pos..self.pos + len].iter().copied().eq(token.chars())
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("[]") {
            return Ok(Formula::boxed(self.unary()?));
        }
        if self.eat("(") {
            let inner = self.implication()?;
            if !self.eat(")") {
                return Err(self.error("')'"));
            }
            return Ok(inner);
        }
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return Err(self.error("formula")),
        }
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        Ok(Formula::atom(&name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn loeb_axiom_expands_implications() {
        let f = parse_formula("[]([]p -> p) -> []p").unwrap();
        let expected = Formula::or(
            Formula::not(Formula::boxed(Formula::or(
                Formula::not(Formula::boxed(p())),
                p(),
            ))),
            Formula::boxed(p()),
        );
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "~[](~[]p | p) | []p");
    }

    #[test]
    fn double_negation_nests() {
        assert_eq!(
            parse_formula("~~p").unwrap(),
            Formula::not(Formula::not(p()))
        );
    }

    #[test]
    fn dangling_disjunction_reports_position() {
        let err = parse_formula("p |").unwrap_err();
        assert_eq!(err.position, 3);
        assert_eq!(err.expected, "formula");
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        assert_eq!(Formula::boxed(p()).to_string(), "[]p");
        assert_eq!(Formula::or(p(), Formula::not(p())).to_string(), "p | ~p");
        let q = Formula::atom("q");
        let right_nested = Formula::or(p(), Formula::or(q.clone(), p()));
        assert_eq!(right_nested.to_string(), "p | (q | p)");
        let left_nested = Formula::or(Formula::or(p(), q), p());
        assert_eq!(left_nested.to_string(), "p | q | p");
    }

    #[test]
    fn precedence_and_associativity() {
        let q = Formula::atom("q");
        let r = Formula::atom("r");
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::implies(p(), Formula::implies(q.clone(), r.clone()))
        );
        assert_eq!(
            parse_formula("p | q & r").unwrap(),
            Formula::or(p(), Formula::and(q.clone(), r.clone()))
        );
        assert_eq!(
            parse_formula("~p | q").unwrap(),
            Formula::or(Formula::not(p()), q.clone())
        );
        assert_eq!(
            parse_formula("[]p & q").unwrap(),
            Formula::and(Formula::boxed(p()), q)
        );
    }

    #[test]
    fn closure_of_small_formulas() {
        let c = closure(&p());
        assert_eq!(c.weight, 1);
        assert_eq!(c.subformulas.len(), 1);
        assert!(c.boxed.is_empty());

        let c = closure(&Formula::boxed(p()));
        assert_eq!(c.weight, 2);
        assert_eq!(c.subformulas.len(), 2);
        assert_eq!(c.boxed.len(), 1);
    }

    #[test]
    fn closure_of_loeb_axiom() {
        let f = parse_formula("[]([]p -> p) -> []p").unwrap();
        // Count nodes independently of `weight`: one per character class in the printed form.
        let printed = f.to_string();
        let nodes = printed.matches('~').count()
            + printed.matches("[]").count()
            + printed.matches('|').count()
            + printed.matches('p').count();
        let c = closure(&f);
        assert_eq!(c.weight, nodes);
        assert_eq!(c.weight, 10);
        let boxed: BTreeSet<Formula> = ["[]p", "[](~[]p | p)"]
            .iter()
            .map(|s| parse_formula(s).unwrap())
            .collect();
        assert_eq!(c.boxed, boxed);
    }

    #[test]
    fn constructor_order_is_atom_not_or_box() {
        let a = p();
        let n = Formula::not(p());
        let o = Formula::or(p(), p());
        let b = Formula::boxed(p());
        assert!(a < n && n < o && o < b);
    }

    #[test]
    fn rejects_bad_atoms_and_trailing_input() {
        assert!(parse_formula("P").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p_1 | x9").is_ok());
    }
}
