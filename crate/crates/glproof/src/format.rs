//! The `.glp` proof file format.
//!
//! ```text
//! calculus: CSGL
//! (rule boxR (concl "|- x: []p") (meta principal="[]p" label=x fresh=y)
//!   (prems
//!     (rule id2 ...)))
//! ```
//!
//! Open leaves of cyclic derivations are written
//! `(open (concl "...") (backlink 0/1))`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{is_identifier, parse_formula, Formula};
use crate::proof::{
    Address, AnyProof, Calculus, CyclicDerivation, Meta, Node, Proof, Rule, SequentKind,
    SequentText,
};
use crate::sequent::Label;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ProofFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Word(String),
    Text(String),
}

struct Lexer {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(text: &str, start_line: usize) -> Result<Lexer, ProofFileError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (start_line, 1);
    while let Some(c) = chars.next() {
        let (tl, tc) = (line, col);
        col += 1;
        match c {
            '\n' => {
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {}
            ';' if chars.peek() == Some(&';') => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 1;
                        break;
                    }
                }
            }
            '(' => tokens.push((Token::Open, tl, tc)),
            ')' => tokens.push((Token::Close, tl, tc)),
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => {
                            return Err(ProofFileError {
                                line: tl,
                                column: tc,
                                message: "unterminated string".into(),
                            })
                        }
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 2;
                            match chars.next() {
                                Some('n') => s.push('\n'),
                                Some(e) => s.push(e),
                                None => {
                                    return Err(ProofFileError {
                                        line: tl,
                                        column: tc,
                                        message: "unterminated string".into(),
                                    })
                                }
                            }
                        }
                        Some('\n') => {
                            line += 1;
                            col = 1;
                            s.push('\n');
                        }
                        Some(c) => {
                            col += 1;
                            s.push(c);
                        }
                    }
                }
                tokens.push((Token::Text(s), tl, tc));
            }
            c => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' || n == '"' {
                        break;
                    }
                    s.push(n);
                    chars.next();
                    col += 1;
                }
                tokens.push((Token::Word(s), tl, tc));
            }
        }
    }
    Ok(Lexer {
        tokens,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ProofFileError {
        let (line, column) = self.here();
        ProofFileError {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect_open(&mut self) -> Result<(), ProofFileError> {
        match self.peek() {
            Some(Token::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("expected '('")),
        }
    }

    fn expect_close(&mut self) -> Result<(), ProofFileError> {
        match self.peek() {
            Some(Token::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("expected ')'")),
        }
    }

    fn word(&mut self) -> Result<String, ProofFileError> {
        match self.peek() {
            Some(Token::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a word")),
        }
    }

    fn text(&mut self) -> Result<String, ProofFileError> {
        match self.peek() {
            Some(Token::Text(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a quoted string")),
        }
    }

    /// `(keyword` with the given keyword.
    fn at_form(&self, keyword: &str) -> bool {
        matches!(self.tokens.get(self.pos), Some((Token::Open, _, _)))
            && matches!(self.tokens.get(self.pos + 1), Some((Token::Word(w), _, _)) if w == keyword)
    }
}

struct Parsed<S> {
    node: Node<S>,
    backlinks: Vec<(Address, Address)>,
}

fn parse_label(lx: &Lexer, s: &str) -> Result<Label, ProofFileError> {
    if is_identifier(s) {
        Ok(Label::new(s))
    } else {
        Err(lx.error(format!("bad label '{s}'")))
    }
}

fn parse_formula_at(lx: &Lexer, s: &str) -> Result<Formula, ProofFileError> {
    parse_formula(s).map_err(|e| lx.error(format!("in formula \"{s}\": {e}")))
}

fn parse_meta(lx: &mut Lexer) -> Result<Meta, ProofFileError> {
    let mut meta = Meta::default();
    loop {
        match lx.peek() {
            Some(Token::Close) => {
                lx.pos += 1;
                return Ok(meta);
            }
            Some(Token::Word(_)) => {}
            _ => return Err(lx.error("expected key=value")),
        }
        let word = lx.word()?;
        let Some((key, inline)) = word.split_once('=') else {
            return Err(lx.error(format!("expected key=value, found '{word}'")));
        };
        let value = if inline.is_empty() {
            lx.text()?
        } else {
            inline.to_string()
        };
        let key = key.to_string();
        match key.as_str() {
            "principal" => meta.principal = Some(parse_formula_at(lx, &value)?),
            "label" => meta.label = Some(parse_label(lx, &value)?),
            "aux" => meta.aux = Some(parse_label(lx, &value)?),
            "fresh" => meta.fresh = Some(parse_label(lx, &value)?),
            "from" => meta.from = Some(parse_label(lx, &value)?),
            "to" => meta.to = Some(parse_label(lx, &value)?),
            "boxes" => {
                let boxes = if value.trim().is_empty() {
                    vec![]
                } else {
                    value
                        .split(',')
                        .map(|f| parse_formula_at(lx, f))
                        .collect::<Result<Vec<_>, _>>()?
                };
                meta.boxes = Some(boxes);
            }
            "path" => {
                meta.path = Some(
                    value
                        .split_whitespace()
                        .map(|l| parse_label(lx, l))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            _ => return Err(lx.error(format!("unknown meta key '{key}'"))),
        }
    }
}

fn parse_node<S: SequentText>(
    lx: &mut Lexer,
    addr: &Address,
    backlinks: &mut Vec<(Address, Address)>,
) -> Result<Node<S>, ProofFileError> {
    lx.expect_open()?;
    let head = lx.word()?;
    let rule = match head.as_str() {
        "rule" => {
            let name = lx.word()?;
            name.parse::<Rule>().map_err(|e| lx.error(e))?
        }
        "open" => Rule::Open,
        other => return Err(lx.error(format!("expected 'rule' or 'open', found '{other}'"))),
    };
    if !lx.at_form("concl") {
        return Err(lx.error("expected (concl \"...\")"));
    }
    lx.pos += 2;
    let text = lx.text()?;
    let conclusion =
        S::parse_text(&text).map_err(|e| lx.error(format!("in sequent \"{text}\": {e}")))?;
    lx.expect_close()?;
    let mut meta = Meta::default();
    let mut premises = Vec::new();
    loop {
        if lx.at_form("meta") {
            lx.pos += 2;
            meta = parse_meta(lx)?;
        } else if lx.at_form("backlink") {
            lx.pos += 2;
            let target = lx.word()?;
            let target: Address = target.parse().map_err(|e: String| lx.error(e))?;
            backlinks.push((addr.clone(), target));
            lx.expect_close()?;
        } else if lx.at_form("prems") {
            lx.pos += 2;
            while !matches!(lx.peek(), Some(Token::Close)) {
                if lx.peek().is_none() {
                    return Err(lx.error("unexpected end of input"));
                }
                let child = addr.child(premises.len());
                premises.push(parse_node(lx, &child, backlinks)?);
            }
            lx.pos += 1;
        } else {
            break;
        }
    }
    lx.expect_close()?;
    Ok(Node {
        rule,
        conclusion,
        meta,
        premises,
    })
}

fn parse_tree<S: SequentText>(lx: &mut Lexer) -> Result<Parsed<S>, ProofFileError> {
    let mut backlinks = Vec::new();
    let node = parse_node(lx, &Address::root(), &mut backlinks)?;
    if lx.peek().is_some() {
        return Err(lx.error("trailing input after the proof"));
    }
    Ok(Parsed { node, backlinks })
}

pub fn parse_proof_file(text: &str) -> Result<AnyProof, ProofFileError> {
    let mut header_line = 0;
    let mut calculus = None;
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        offset += line.len();
        let t = line.trim();
        if t.is_empty() || t.starts_with(";;") {
            continue;
        }
        header_line = i + 1;
        let Some(name) = t.strip_prefix("calculus:") else {
            return Err(ProofFileError {
                line: i + 1,
                column: 1,
                message: "expected 'calculus: <id>'".into(),
            });
        };
        calculus = Some(name.trim().parse::<Calculus>().map_err(|e| ProofFileError {
            line: i + 1,
            column: 11,
            message: e,
        })?);
        break;
    }
    let Some(calculus) = calculus else {
        return Err(ProofFileError {
            line: 1,
            column: 1,
            message: "expected 'calculus: <id>'".into(),
        });
    };
    let body = text.get(offset.min(text.len())..).unwrap_or("");
    let mut lx = lex(body, header_line + 1)?;
    let no_backlinks = |lx: &Lexer, b: &[(Address, Address)]| {
        if b.is_empty() {
            Ok(())
        } else {
            Err(lx.error("backlinks are only allowed in GLcirc derivations"))
        }
    };
    Ok(match calculus {
        Calculus::GLcirc => {
            let p = parse_tree(&mut lx)?;
            AnyProof::Cyclic(CyclicDerivation::new(
                p.node,
                p.backlinks.into_iter().collect::<BTreeMap<_, _>>(),
            ))
        }
        c => match c.sequent_kind() {
            SequentKind::Gentzen => {
                let p = parse_tree(&mut lx)?;
                no_backlinks(&lx, &p.backlinks)?;
                AnyProof::Gentzen(Proof::new(c, p.node))
            }
            SequentKind::Labeled => {
                let p = parse_tree(&mut lx)?;
                no_backlinks(&lx, &p.backlinks)?;
                AnyProof::Labeled(Proof::new(c, p.node))
            }
            SequentKind::Nested => {
                let p = parse_tree(&mut lx)?;
                no_backlinks(&lx, &p.backlinks)?;
                AnyProof::Nested(Proof::new(c, p.node))
            }
        },
    })
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn meta_text(meta: &Meta) -> String {
    let mut parts = Vec::new();
    if let Some(f) = &meta.principal {
        parts.push(format!("principal={}", quote(&f.to_string())));
    }
    if let Some(l) = &meta.label {
        parts.push(format!("label={l}"));
    }
    if let Some(l) = &meta.aux {
        parts.push(format!("aux={l}"));
    }
    if let Some(l) = &meta.fresh {
        parts.push(format!("fresh={l}"));
    }
    if let Some(b) = &meta.boxes {
        let list: Vec<String> = b.iter().map(|f| f.to_string()).collect();
        parts.push(format!("boxes={}", quote(&list.join(", "))));
    }
    if let Some(l) = &meta.from {
        parts.push(format!("from={l}"));
    }
    if let Some(l) = &meta.to {
        parts.push(format!("to={l}"));
    }
    if let Some(p) = &meta.path {
        let list: Vec<String> = p.iter().map(|l| l.to_string()).collect();
        parts.push(format!("path={}", quote(&list.join(" "))));
    }
    parts.join(" ")
}

fn write_node<S: SequentText>(
    out: &mut String,
    node: &Node<S>,
    addr: &Address,
    backlinks: &BTreeMap<Address, Address>,
    indent: usize,
) {
    let pad = "  ".repeat(indent);
    if node.rule == Rule::Open {
        let _ = write!(out, "{pad}(open (concl {})", quote(&node.conclusion.to_string()));
    } else {
        let _ = write!(
            out,
            "{pad}(rule {} (concl {})",
            node.rule.name(),
            quote(&node.conclusion.to_string())
        );
    }
    if !node.meta.is_empty() {
        let _ = write!(out, " (meta {})", meta_text(&node.meta));
    }
    if let Some(target) = backlinks.get(addr) {
        let _ = write!(out, " (backlink {target})");
    }
    if node.premises.is_empty() {
        out.push(')');
        return;
    }
    let _ = write!(out, "\n{pad}  (prems");
    for (i, p) in node.premises.iter().enumerate() {
        out.push('\n');
        write_node(out, p, &addr.child(i), backlinks, indent + 2);
    }
    out.push_str("))");
}

fn render<S: SequentText>(
    calculus: Calculus,
    root: &Node<S>,
    backlinks: &BTreeMap<Address, Address>,
) -> String {
    let mut out = format!("calculus: {calculus}\n");
    write_node(&mut out, root, &Address::root(), backlinks, 0);
    out.push('\n');
    out
}

pub fn print_proof(p: &AnyProof) -> String {
    let none = BTreeMap::new();
    match p {
        AnyProof::Gentzen(p) => render(p.calculus, &p.root, &none),
        AnyProof::Labeled(p) => render(p.calculus, &p.root, &none),
        AnyProof::Nested(p) => render(p.calculus, &p.root, &none),
        AnyProof::Cyclic(d) => render(Calculus::GLcirc, &d.root, &d.backlinks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOX_R: &str = r#"calculus: CSGL
(rule boxR (concl "x: []p |- x: []p") (meta principal="[]p" label=x fresh=y)
  (prems
    (rule 4L (concl "xRy; x: []p, y: []p |- y: p") (meta principal="[]p" label=x aux=y)
      (prems
        (rule boxL (concl "xRy; x: []p |- y: p") (meta principal="[]p" label=x aux=y))))))
"#;

    #[test]
    fn reads_labeled_proofs() {
        let p = parse_proof_file(BOX_R).unwrap();
        let AnyProof::Labeled(p) = p else {
            panic!("expected a labeled proof")
        };
        assert_eq!(p.calculus, Calculus::CSGL);
        assert_eq!(p.size(), 3);
        assert_eq!(p.root.meta.fresh, Some(Label::new("y")));
        assert_eq!(p.root.premises[0].rule, Rule::FourL);
    }

    #[test]
    fn printing_round_trips() {
        let p = parse_proof_file(BOX_R).unwrap();
        let text = print_proof(&p);
        assert_eq!(parse_proof_file(&text).unwrap(), p);
        assert_eq!(print_proof(&parse_proof_file(&text).unwrap()), text);
    }

    #[test]
    fn reads_backlinks() {
        let text = r#"calculus: GLcirc
(rule box4 (concl "|- []p") (meta principal="[]p" boxes="")
  (prems (open (concl "|- p") (backlink .))))"#;
        let AnyProof::Cyclic(d) = parse_proof_file(text).unwrap() else {
            panic!("expected a cyclic derivation")
        };
        assert_eq!(d.backlinks.get(&"0".parse().unwrap()), Some(&Address::root()));
        assert_eq!(d.root.meta.boxes, Some(vec![]));
        let again = parse_proof_file(&print_proof(&AnyProof::Cyclic(d.clone()))).unwrap();
        assert_eq!(again, AnyProof::Cyclic(d));
    }

    #[test]
    fn reports_positions() {
        let err = parse_proof_file("calculus: GLseq\n(rule id (concl \"p |- p\")").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("')'"));
        let err = parse_proof_file("calculus: nope\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_proof_file("calculus: GLseq\n(rule frob (concl \"p |- p\"))").unwrap_err();
        assert!(err.message.contains("unknown rule"));
        assert!(parse_proof_file("calculus: GLseq\n(rule id (concl \"p |- p\")) x").is_err());
        assert!(parse_proof_file("").is_err());
    }
}
