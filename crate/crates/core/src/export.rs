//! Text, DOT and JSON renderings of decomposition trees.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::decomp::{DecompTree, NodeId, NodeKind};

fn label(kind: &NodeKind) -> String {
    match kind {
        NodeKind::Leaf(v) => v.to_string(),
        NodeKind::Linear(sign) => sign.to_string(),
        NodeKind::Prime(label) => label.to_string(),
    }
}

/// Indented outline, one node per line:
/// `P 3 1 4 2 [1..11] {1..11}`, `+ [3..8] {6..11}`, `5 [1]`.
pub fn to_text(tree: &DecompTree) -> String {
    let mut out = String::new();
    text_node(tree, tree.root(), 0, &mut out);
    out
}

fn text_node(tree: &DecompTree, id: NodeId, depth: usize, out: &mut String) {
    let node = tree.node(id);
    let indent = "  ".repeat(depth);
    let _ = match &node.kind {
        NodeKind::Leaf(v) => writeln!(out, "{indent}{v} {}", node.span),
        kind => {
            let prefix = if matches!(kind, NodeKind::Prime(_)) { "P " } else { "" };
            writeln!(
                out,
                "{indent}{prefix}{} {} {{{}..{}}}",
                label(kind),
                node.span,
                node.value_range.min,
                node.value_range.max
            )
        }
    };
    for &child in &node.children {
        text_node(tree, child, depth + 1, out);
    }
}

/// Graphviz digraph; node identifiers are preorder numbers `n0, n1, …`.
pub fn to_dot(tree: &DecompTree) -> String {
    let mut out = String::from("digraph decomposition {\n  node [shape=circle];\n");
    for (i, node) in tree.nodes().iter().enumerate() {
        let shape = match node.kind {
            NodeKind::Leaf(_) => "plaintext",
            NodeKind::Linear(_) => "circle",
            NodeKind::Prime(_) => "box",
        };
        let _ = writeln!(out, "  n{i} [label=\"{}\", shape={shape}];", label(&node.kind));
    }
    for (i, node) in tree.nodes().iter().enumerate() {
        for child in &node.children {
            let _ = writeln!(out, "  n{i} -> n{};", child.0);
        }
    }
    out.push_str("}\n");
    out
}

/// Recursive `{kind, sign?, label?, span, value_range, children}` object.
pub fn to_json(tree: &DecompTree) -> Value {
    json_node(tree, tree.root())
}

fn json_node(tree: &DecompTree, id: NodeId) -> Value {
    let node = tree.node(id);
    let children: Vec<Value> = node.children.iter().map(|&c| json_node(tree, c)).collect();
    let mut obj = json!({
        "span": [node.span.lo, node.span.hi],
        "value_range": [node.value_range.min, node.value_range.max],
        "children": children,
    });
    let map = obj.as_object_mut().unwrap();
    match &node.kind {
        NodeKind::Leaf(_) => {
            map.insert("kind".into(), "leaf".into());
        }
        NodeKind::Linear(sign) => {
            map.insert("kind".into(), "linear".into());
            map.insert("sign".into(), sign.to_string().into());
        }
        NodeKind::Prime(label) => {
            map.insert("kind".into(), "prime".into());
            map.insert("label".into(), json!(label.values()));
        }
    }
    obj
}
