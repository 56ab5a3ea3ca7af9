//! Proof renderings: indented text, Graphviz DOT and LaTeX (bussproofs).

use std::fmt::{Display, Write};
use std::str::FromStr;

use crate::proof::{Address, AnyProof, Node, Rule};
use crate::sequent::{tree_view, LabeledSequent, TreeView};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Dot,
    Latex,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<RenderFormat, String> {
        match s {
            "text" => Ok(RenderFormat::Text),
            "dot" => Ok(RenderFormat::Dot),
            "latex" => Ok(RenderFormat::Latex),
            _ => Err(format!("unknown render format '{s}'")),
        }
    }
}

pub fn render(p: &AnyProof, format: RenderFormat) -> String {
    match format {
        RenderFormat::Text => render_text(p),
        RenderFormat::Dot => render_dot(p),
        RenderFormat::Latex => render_latex(p),
    }
}

fn text_lines<S: Display + Clone>(root: &Node<S>, backlinks: &dyn Fn(&Address) -> Option<String>, out: &mut String) {
    for (addr, node) in root.walk() {
        let indent = "  ".repeat(addr.depth());
        let link = backlinks(&addr).map(|t| format!("  -> {t}")).unwrap_or_default();
        let _ = writeln!(out, "{indent}{} {}{link}", node.rule.symbol(), node.conclusion);
    }
}

pub fn render_text(p: &AnyProof) -> String {
    let mut out = format!("{} proof of {}\n", p.calculus(), p.conclusion_text());
    let none = |_: &Address| None;
    match p {
        AnyProof::Gentzen(q) => text_lines(&q.root, &none, &mut out),
        AnyProof::Labeled(q) => text_lines(&q.root, &none, &mut out),
        AnyProof::Nested(q) => text_lines(&q.root, &none, &mut out),
        AnyProof::Cyclic(d) => {
            let links = |a: &Address| d.backlinks.get(a).map(|t| t.to_string());
            text_lines(&d.root, &links, &mut out)
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_id(addr: &Address) -> String {
    let digits: Vec<String> = addr.0.iter().map(|i| i.to_string()).collect();
    format!("n{}", digits.join("_"))
}

fn dot_nodes<S: Display + Clone>(root: &Node<S>, out: &mut String) {
    for (addr, node) in root.walk() {
        let _ = writeln!(
            out,
            "  {} [label=\"{}\\n{}\"];",
            node_id(&addr),
            dot_escape(node.rule.symbol()),
            dot_escape(&node.conclusion.to_string())
        );
        for i in 0..node.premises.len() {
            let _ = writeln!(out, "  {} -> {};", node_id(&addr.child(i)), node_id(&addr));
        }
    }
}

fn dot_tree(view: &TreeView, indent: &str, out: &mut String) {
    let _ = writeln!(
        out,
        "{indent}t_{} [label=\"{}: {}\"];",
        view.label,
        dot_escape(view.label.as_str()),
        dot_escape(&view.sequent.to_string())
    );
    for c in &view.children {
        let _ = writeln!(out, "{indent}t_{} -> t_{};", view.label, c.label);
        dot_tree(c, indent, out);
    }
}

/// The tree of components of a tree sequent as a DOT graph.
pub fn tree_sequent_dot(t: &LabeledSequent) -> Option<String> {
    let view = tree_view(t).ok()?;
    let mut out = String::from("digraph sequent {\n  node [shape=box];\n");
    dot_tree(&view, "  ", &mut out);
    out.push_str("}\n");
    Some(out)
}

pub fn render_dot(p: &AnyProof) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    match p {
        AnyProof::Gentzen(q) => dot_nodes(&q.root, &mut out),
        AnyProof::Nested(q) => dot_nodes(&q.root, &mut out),
        AnyProof::Labeled(q) => {
            dot_nodes(&q.root, &mut out);
            if let Ok(view) = tree_view(q.conclusion()) {
                out.push_str("  subgraph cluster_end {\n    label=\"end sequent\";\n");
                dot_tree(&view, "    ", &mut out);
                out.push_str("  }\n");
            }
        }
        AnyProof::Cyclic(d) => {
            dot_nodes(&d.root, &mut out);
            for (leaf, target) in &d.backlinks {
                let _ = writeln!(
                    out,
                    "  {} -> {} [style=dashed, constraint=false];",
                    node_id(leaf),
                    node_id(target)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Formula and sequent text in LaTeX math notation.
pub fn latex_math(text: &str) -> String {
    let table: [(&str, &str); 8] = [
        ("|-", "\\vdash"),
        ("//", "\\mathbin{/\\!/}"),
        ("->", "\\to"),
        ("[]", "\\Box"),
        ("~", "\\neg"),
        ("|", "\\lor"),
        ("&", "\\land"),
        ("_", "\\_"),
    ];
    let mut out = String::new();
    let mut rest = text;
    // a control word swallows a following letter unless separated
    let mut after_word = false;
    'outer: while !rest.is_empty() {
        for (from, to) in table {
            if let Some(r) = rest.strip_prefix(from) {
                out.push_str(to);
                after_word = to.ends_with(|c: char| c.is_ascii_alphabetic());
                rest = r;
                continue 'outer;
            }
        }
        let c = rest.chars().next().unwrap();
        if after_word && c.is_ascii_alphanumeric() {
            out.push(' ');
        }
        after_word = false;
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

fn latex_rule(rule: Rule) -> String {
    match rule {
        Rule::NegL => "$\\neg L$".into(),
        Rule::NegR => "$\\neg R$".into(),
        Rule::OrL => "$\\lor L$".into(),
        Rule::OrR => "$\\lor R$".into(),
        Rule::BoxL => "$\\Box L$".into(),
        Rule::BoxR => "$\\Box R$".into(),
        Rule::BoxGL => "$\\Box_{GL}$".into(),
        Rule::Box4 => "$\\Box_{4}$".into(),
        Rule::Subst => "$(x/y)$".into(),
        other => format!("${}$", other.name()),
    }
}

fn latex_node<S: Display>(node: &Node<S>, out: &mut String) {
    for p in &node.premises {
        latex_node(p, out);
    }
    let concl = latex_math(&node.conclusion.to_string());
    if node.rule == Rule::Open {
        let _ = writeln!(out, "\\AxiomC{{${concl}$}}");
        return;
    }
    if node.premises.is_empty() {
        out.push_str("\\AxiomC{}\n");
    }
    let _ = writeln!(out, "\\RightLabel{{\\scriptsize {}}}", latex_rule(node.rule));
    let inference = match node.premises.len() {
        0 | 1 => "UnaryInfC",
        2 => "BinaryInfC",
        _ => "TrinaryInfC",
    };
    let _ = writeln!(out, "\\{inference}{{${concl}$}}");
}

pub fn render_latex(p: &AnyProof) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    match p {
        AnyProof::Gentzen(q) => latex_node(&q.root, &mut out),
        AnyProof::Labeled(q) => latex_node(&q.root, &mut out),
        AnyProof::Nested(q) => latex_node(&q.root, &mut out),
        AnyProof::Cyclic(d) => latex_node(&d.root, &mut out),
    }
    out.push_str("\\end{prooftree}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_proof_file;

    const LEAF: &str = "calculus: CSGL\n(rule id1 (concl \"x: p |- x: p\") (meta label=x principal=\"p\"))\n";

    #[test]
    fn latex_symbols() {
        assert_eq!(latex_math("[]p -> ~q | r"), "\\Box p \\to \\neg q \\lor r");
        assert_eq!(latex_math("[][]p"), "\\Box\\Box p");
        assert_eq!(latex_math("p |- p"), "p \\vdash p");
    }

    #[test]
    fn renders_a_leaf() {
        let p = parse_proof_file(LEAF).unwrap();
        let text = render(&p, RenderFormat::Text);
        assert!(text.contains("id1 x: p |- x: p"));
        let dot = render(&p, RenderFormat::Dot);
        assert!(dot.starts_with("digraph proof {"));
        assert!(dot.contains("cluster_end"));
        let latex = render(&p, RenderFormat::Latex);
        assert!(latex.contains("\\AxiomC{}"));
        assert!(latex.contains("\\UnaryInfC{$x: p \\vdash x: p$}"));
    }
}
