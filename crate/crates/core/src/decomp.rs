//! Common intervals, strong intervals and the decomposition tree.
//!
//! A *common interval* of σ is a block of consecutive positions whose values
//! form an integer interval. The *strong* ones overlap no other common
//! interval, so they nest and form a tree. Every internal node of that tree
//! is either linear (children values monotone, labeled `+` or `-`) or prime
//! (labeled by a simple permutation giving the relative order of children).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{concat_minus, concat_plus, concat_rho};
use crate::error::{Error, Result};
use crate::perm::{normalize, Pattern, Permutation};

/// Inclusive 1-based position range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntervalSpan {
    pub lo: usize,
    pub hi: usize,
}

impl IntervalSpan {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(1 <= lo && lo <= hi);
        IntervalSpan { lo, hi }
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, other: &IntervalSpan) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Intersecting, with neither containing the other.
    pub fn overlaps(&self, other: &IntervalSpan) -> bool {
        (self.lo < other.lo && other.lo <= self.hi && self.hi < other.hi)
            || (other.lo < self.lo && self.lo <= other.hi && other.hi < self.hi)
    }
}

impl fmt::Display for IntervalSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "[{}]", self.lo)
        } else {
            write!(f, "[{}..{}]", self.lo, self.hi)
        }
    }
}

/// Inclusive range of values covered by a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueRange {
    pub min: u32,
    pub max: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf(u32),
    Linear(Sign),
    Prime(Pattern),
}

/// Index of a node inside its [`DecompTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    pub span: IntervalSpan,
    pub value_range: ValueRange,
}

impl DecompNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf(_))
    }

    pub fn arity(&self) -> usize {
        self.children.len()
    }

    /// Number of leaves below (and including) this node.
    pub fn size(&self) -> usize {
        self.span.width()
    }
}

/// Labels-only description of a tree, used to build custom trees and as the
/// decoration-free view of a [`DecompTree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Linear(Sign, Vec<Shape>),
    Prime(Pattern, Vec<Shape>),
}

impl Shape {
    /// The permutation decorating this shape, rebuilt from its labels alone.
    pub fn permutation(&self) -> Result<Pattern> {
        match self {
            Shape::Leaf => Ok(Pattern::singleton()),
            Shape::Linear(sign, children) => {
                if children.len() < 2 {
                    return Err(Error::MalformedTree(format!("linear node with {} children", children.len())));
                }
                let mut acc = Pattern::empty();
                for child in children {
                    let p = child.permutation()?;
                    acc = match sign {
                        Sign::Plus => concat_plus(&acc, &p),
                        Sign::Minus => concat_minus(&acc, &p),
                    };
                }
                Ok(acc)
            }
            Shape::Prime(label, children) => {
                if label.len() != children.len() {
                    return Err(Error::MalformedTree(format!(
                        "prime label {label} on a node with {} children",
                        children.len()
                    )));
                }
                if label.len() < 4 || has_proper_interval(label.values()) {
                    return Err(Error::MalformedTree(format!("prime label {label} is not simple")));
                }
                let blocks = children.iter().map(Shape::permutation).collect::<Result<Vec<_>>>()?;
                concat_rho(label, &blocks)
            }
        }
    }

    fn expanded(&self) -> Shape {
        match self {
            Shape::Leaf => Shape::Leaf,
            Shape::Prime(label, children) => Shape::Prime(label.clone(), children.iter().map(Shape::expanded).collect()),
            Shape::Linear(sign, children) => {
                let mut rest = children.iter().map(Shape::expanded);
                let mut acc = rest.next().expect("linear node without children");
                for child in rest {
                    acc = Shape::Linear(*sign, vec![acc, child]);
                }
                acc
            }
        }
    }
}

/// A decorated decomposition tree stored as a preorder arena (root first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTree {
    nodes: Vec<DecompNode>,
    source_size: usize,
    expanded: bool,
}

impl DecompTree {
    /// Builds and decorates a tree from labels. Linear nodes need at least
    /// two children; prime labels must be simple permutations of size equal
    /// to the arity (at least 4). The result counts as expanded when every
    /// linear node is binary.
    pub fn from_shape(shape: &Shape) -> Result<DecompTree> {
        let sigma = shape.permutation()?;
        let mut nodes = Vec::new();
        place(shape, 1, sigma.values(), &mut nodes);
        let expanded = nodes
            .iter()
            .all(|n| !matches!(n.kind, NodeKind::Linear(_)) || n.children.len() == 2);
        Ok(DecompTree { nodes, source_size: sigma.len(), expanded })
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &DecompNode {
        &self.nodes[id.0]
    }

    /// Nodes in preorder; a node's index is its [`NodeId`].
    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn is_expanded(&self) -> bool {
        self.expanded
    }

    /// Leaves, left to right.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.is_leaf()).map(|(i, _)| NodeId(i))
    }

    /// The topmost node covering exactly `span`.
    pub fn find_by_span(&self, span: IntervalSpan) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.span == span).map(NodeId)
    }

    /// The permutation read off the leaf decorations.
    pub fn decorated_permutation(&self) -> Permutation {
        let values = self
            .nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::Leaf(v) => Some(v),
                _ => None,
            })
            .collect();
        Permutation::new(values).expect("leaf decoration is a permutation")
    }

    /// The labels-only view of the subtree at `id`.
    pub fn shape_of(&self, id: NodeId) -> Shape {
        let node = self.node(id);
        let children = || node.children.iter().map(|&c| self.shape_of(c)).collect();
        match &node.kind {
            NodeKind::Leaf(_) => Shape::Leaf,
            NodeKind::Linear(sign) => Shape::Linear(*sign, children()),
            NodeKind::Prime(label) => Shape::Prime(label.clone(), children()),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape_of(self.root())
    }
}

fn place(shape: &Shape, lo: usize, sigma: &[u32], nodes: &mut Vec<DecompNode>) -> (NodeId, usize) {
    let id = NodeId(nodes.len());
    nodes.push(DecompNode {
        kind: NodeKind::Leaf(0),
        children: Vec::new(),
        span: IntervalSpan::new(lo, lo),
        value_range: ValueRange { min: 0, max: 0 },
    });
    let (kind, children, hi) = match shape {
        Shape::Leaf => (NodeKind::Leaf(sigma[lo - 1]), Vec::new(), lo),
        Shape::Linear(_, kids) | Shape::Prime(_, kids) => {
            let mut next = lo;
            let mut children = Vec::with_capacity(kids.len());
            for kid in kids {
                let (child, child_hi) = place(kid, next, sigma, nodes);
                children.push(child);
                next = child_hi + 1;
            }
            let kind = match shape {
                Shape::Linear(sign, _) => NodeKind::Linear(*sign),
                Shape::Prime(label, _) => NodeKind::Prime(label.clone()),
                Shape::Leaf => unreachable!(),
            };
            (kind, children, next - 1)
        }
    };
    let covered = &sigma[lo - 1..hi];
    let node = &mut nodes[id.0];
    node.kind = kind;
    node.children = children;
    node.span = IntervalSpan::new(lo, hi);
    node.value_range = ValueRange {
        min: *covered.iter().min().unwrap(),
        max: *covered.iter().max().unwrap(),
    };
    (id, hi)
}

/// Some common interval other than the singletons and the whole sequence.
fn has_proper_interval(values: &[u32]) -> bool {
    let n = values.len();
    interval_sweep(values).any(|s| s.lo != s.hi && s.width() != n)
}

fn interval_sweep(values: &[u32]) -> impl Iterator<Item = IntervalSpan> + '_ {
    (0..values.len()).flat_map(move |lo| {
        let mut min = u32::MAX;
        let mut max = 0;
        (lo..values.len()).filter_map(move |hi| {
            min = min.min(values[hi]);
            max = max.max(values[hi]);
            ((max - min) as usize == hi - lo).then(|| IntervalSpan::new(lo + 1, hi + 1))
        })
    })
}

/// All common intervals, ordered by `lo` then `hi`. O(n²).
pub fn common_intervals(sigma: &Permutation) -> Vec<IntervalSpan> {
    interval_sweep(sigma.values()).collect()
}

/// Common intervals overlapping no other common interval, ordered by `lo`
/// ascending then `hi` descending (the preorder of the inclusion tree).
pub fn strong_intervals(sigma: &Permutation) -> Vec<IntervalSpan> {
    let common = common_intervals(sigma);
    let mut strong: Vec<IntervalSpan> = common
        .iter()
        .filter(|s| !common.iter().any(|t| s.overlaps(t)))
        .copied()
        .collect();
    strong.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.hi.cmp(&a.hi)));
    strong
}

/// The labeled (non-expanded) decomposition tree of σ, with decoration.
pub fn decomposition_tree(sigma: &Permutation) -> DecompTree {
    let values = sigma.values();
    let strong = strong_intervals(sigma);
    let mut nodes: Vec<DecompNode> = Vec::with_capacity(strong.len());
    let mut stack: Vec<usize> = Vec::new();
    for span in strong {
        while let Some(&top) = stack.last() {
            if nodes[top].span.contains(&span) {
                break;
            }
            stack.pop();
        }
        let id = nodes.len();
        if let Some(&parent) = stack.last() {
            nodes[parent].children.push(NodeId(id));
        }
        let covered = &values[span.lo - 1..span.hi];
        nodes.push(DecompNode {
            kind: NodeKind::Leaf(values[span.lo - 1]),
            children: Vec::new(),
            span,
            value_range: ValueRange {
                min: *covered.iter().min().unwrap(),
                max: *covered.iter().max().unwrap(),
            },
        });
        stack.push(id);
    }
    for id in 0..nodes.len() {
        if nodes[id].children.is_empty() {
            continue;
        }
        let ranges: Vec<ValueRange> = nodes[id].children.iter().map(|c| nodes[c.0].value_range).collect();
        let increasing = ranges.windows(2).all(|w| w[0].max < w[1].min);
        let decreasing = ranges.windows(2).all(|w| w[0].min > w[1].max);
        nodes[id].kind = if increasing {
            NodeKind::Linear(Sign::Plus)
        } else if decreasing {
            NodeKind::Linear(Sign::Minus)
        } else {
            let mins: Vec<u32> = ranges.iter().map(|r| r.min).collect();
            NodeKind::Prime(normalize(&mins).expect("children cover disjoint values"))
        };
    }
    DecompTree { nodes, source_size: sigma.len(), expanded: false }
}

/// Replaces every linear node of arity `k` by a left comb of `k - 1` binary
/// nodes of the same sign. Prime nodes keep their arity. Idempotent.
pub fn expand_tree(tree: &DecompTree) -> DecompTree {
    let mut out = DecompTree::from_shape(&tree.shape().expanded()).expect("expansion of a valid tree");
    out.expanded = true;
    out
}

pub fn is_separable(sigma: &Permutation) -> bool {
    max_prime_arity(&decomposition_tree(sigma)) == 0
}

/// True iff σ has size at least 4 and no common interval besides the
/// singletons and σ itself.
pub fn is_simple(sigma: &Permutation) -> bool {
    sigma.len() >= 4 && !has_proper_interval(sigma.values())
}

/// The expanded decomposition tree of a separable σ, which is a binary
/// separating tree of σ.
pub fn separating_tree(sigma: &Permutation) -> Result<DecompTree> {
    let tree = decomposition_tree(sigma);
    if max_prime_arity(&tree) > 0 {
        return Err(Error::NotSeparable);
    }
    Ok(expand_tree(&tree))
}

/// Largest prime arity in the tree, 0 when there is no prime node.
pub fn max_prime_arity(tree: &DecompTree) -> usize {
    tree.nodes()
        .iter()
        .filter(|n| matches!(n.kind, NodeKind::Prime(_)))
        .map(DecompNode::arity)
        .max()
        .unwrap_or(0)
}

/// Rebuilds σ from the tree structure and labels, ignoring stored decoration.
pub fn tree_to_permutation(tree: &DecompTree) -> Result<Permutation> {
    let pattern = tree.shape().permutation()?;
    pattern
        .to_permutation()
        .ok_or_else(|| Error::MalformedTree("empty tree".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn span(lo: usize, hi: usize) -> IntervalSpan {
        IntervalSpan::new(lo, hi)
    }

    const FIGURE: &str = "5 1 10 9 6 7 8 11 2 4 3";

    #[test]
    fn figure_common_intervals() {
        let common = common_intervals(&perm(FIGURE));
        for s in [span(5, 7), span(3, 7), span(3, 8), span(3, 4), span(5, 6), span(6, 7), span(4, 7), span(10, 11), span(9, 11), span(1, 11)] {
            assert!(common.contains(&s), "{s}");
        }
        assert_eq!(common.len(), 11 + 10);
    }

    #[test]
    fn identity_and_simple_common_intervals() {
        assert_eq!(common_intervals(&Permutation::identity(6)).len(), 21);
        let simple = common_intervals(&perm("2 4 1 3"));
        let mut expected: Vec<_> = (1..=4).map(|i| span(i, i)).collect();
        expected.insert(0, span(1, 4));
        expected.sort();
        assert_eq!(simple, expected);
    }

    #[test]
    fn figure_strong_intervals() {
        let strong = strong_intervals(&perm(FIGURE));
        let mut expected: Vec<_> = (1..=11).map(|i| span(i, i)).collect();
        expected.extend([span(1, 11), span(5, 7), span(3, 7), span(3, 8), span(10, 11), span(9, 11)]);
        expected.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.hi.cmp(&a.hi)));
        assert_eq!(strong, expected);
    }

    #[test]
    fn identity_strong_intervals() {
        let strong = strong_intervals(&Permutation::identity(3));
        assert_eq!(strong, vec![span(1, 3), span(1, 1), span(2, 2), span(3, 3)]);
    }

    #[test]
    fn figure_tree() {
        let tree = decomposition_tree(&perm(FIGURE));
        let root = tree.node(tree.root());
        assert_eq!(root.kind, NodeKind::Prime(pat("3 1 4 2")));
        let child_spans: Vec<_> = root.children.iter().map(|&c| tree.node(c).span).collect();
        assert_eq!(child_spans, vec![span(1, 1), span(2, 2), span(3, 8), span(9, 11)]);
        let at = |s| tree.node(tree.find_by_span(s).unwrap());
        assert_eq!(at(span(3, 8)).kind, NodeKind::Linear(Sign::Plus));
        assert_eq!(at(span(3, 7)).kind, NodeKind::Linear(Sign::Minus));
        assert_eq!(at(span(3, 7)).arity(), 3);
        assert_eq!(at(span(5, 7)).kind, NodeKind::Linear(Sign::Plus));
        assert_eq!(at(span(9, 11)).kind, NodeKind::Linear(Sign::Plus));
        assert_eq!(at(span(10, 11)).kind, NodeKind::Linear(Sign::Minus));
        assert_eq!(max_prime_arity(&tree), 4);
        assert!(!tree.is_expanded());
        assert_eq!(tree_to_permutation(&tree).unwrap(), perm(FIGURE));
    }

    #[test]
    fn figure_expanded_tree() {
        let tree = expand_tree(&decomposition_tree(&perm(FIGURE)));
        assert!(tree.is_expanded());
        let expected = Shape::Prime(
            pat("3 1 4 2"),
            vec![
                Shape::Leaf,
                Shape::Leaf,
                Shape::Linear(
                    Sign::Plus,
                    vec![
                        Shape::Linear(
                            Sign::Minus,
                            vec![
                                Shape::Linear(Sign::Minus, vec![Shape::Leaf, Shape::Leaf]),
                                Shape::Linear(
                                    Sign::Plus,
                                    vec![Shape::Linear(Sign::Plus, vec![Shape::Leaf, Shape::Leaf]), Shape::Leaf],
                                ),
                            ],
                        ),
                        Shape::Leaf,
                    ],
                ),
                Shape::Linear(Sign::Plus, vec![Shape::Leaf, Shape::Linear(Sign::Minus, vec![Shape::Leaf, Shape::Leaf])]),
            ],
        );
        assert_eq!(tree.shape(), expected);
        assert_eq!(tree_to_permutation(&tree).unwrap(), perm(FIGURE));
        assert_eq!(expand_tree(&tree), tree);
    }

    #[test]
    fn contracted_separating_tree() {
        let tree = decomposition_tree(&perm("4 2 3 1 6 5 8 9 7"));
        let root = tree.node(tree.root());
        assert_eq!(root.kind, NodeKind::Linear(Sign::Plus));
        let spans: Vec<_> = root.children.iter().map(|&c| tree.node(c).span).collect();
        assert_eq!(spans, vec![span(1, 4), span(5, 6), span(7, 9)]);
        let first = tree.node(root.children[0]);
        assert_eq!(first.kind, NodeKind::Linear(Sign::Minus));
        let spans: Vec<_> = first.children.iter().map(|&c| tree.node(c).span).collect();
        assert_eq!(spans, vec![span(1, 1), span(2, 3), span(4, 4)]);
        assert_eq!(tree.node(tree.find_by_span(span(2, 3)).unwrap()).kind, NodeKind::Linear(Sign::Plus));
        assert_eq!(tree.node(tree.find_by_span(span(7, 9)).unwrap()).kind, NodeKind::Linear(Sign::Minus));
        assert_eq!(tree.node(tree.find_by_span(span(7, 8)).unwrap()).kind, NodeKind::Linear(Sign::Plus));
    }

    #[test]
    fn left_comb_expansion() {
        let shape = Shape::Linear(Sign::Plus, vec![Shape::Leaf; 4]);
        let tree = expand_tree(&DecompTree::from_shape(&shape).unwrap());
        let comb = Shape::Linear(
            Sign::Plus,
            vec![
                Shape::Linear(Sign::Plus, vec![Shape::Linear(Sign::Plus, vec![Shape::Leaf, Shape::Leaf]), Shape::Leaf]),
                Shape::Leaf,
            ],
        );
        assert_eq!(tree.shape(), comb);
        let binary = separating_tree(&perm("2 1 4 3")).unwrap();
        assert_eq!(expand_tree(&binary).shape(), binary.shape());
    }

    #[test]
    fn separability() {
        assert!(is_separable(&perm("4 2 3 1 6 5 8 9 7")));
        assert!(!is_separable(&perm("3 1 4 2")));
        assert!(!is_separable(&perm(FIGURE)));
        let t = separating_tree(&perm("4 2 3 1 6 5 8 9 7")).unwrap();
        assert_eq!(t.leaves().count(), 9);
        assert_eq!(t.len(), 17);
        let t = separating_tree(&perm("1 2")).unwrap();
        assert_eq!(t.shape(), Shape::Linear(Sign::Plus, vec![Shape::Leaf, Shape::Leaf]));
        assert_eq!(separating_tree(&perm("3 1 4 2")), Err(Error::NotSeparable));
    }

    #[test]
    fn single_leaf() {
        let tree = decomposition_tree(&perm("1"));
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.node(tree.root()).kind, NodeKind::Leaf(1));
        assert_eq!(tree_to_permutation(&tree).unwrap(), perm("1"));
        assert_eq!(max_prime_arity(&tree), 0);
    }

    #[test]
    fn simple_permutation_is_one_prime_node() {
        let tree = decomposition_tree(&perm("2 4 1 3"));
        assert_eq!(max_prime_arity(&tree), 4);
        assert_eq!(tree.node(tree.root()).kind, NodeKind::Prime(pat("2 4 1 3")));
        assert!(is_simple(&perm("2 4 1 3")));
        assert!(!is_simple(&perm("1 2")));
        assert!(!is_simple(&perm("2 1 3")));
    }

    #[test]
    fn malformed_shapes() {
        assert!(matches!(
            DecompTree::from_shape(&Shape::Linear(Sign::Plus, vec![Shape::Leaf])),
            Err(Error::MalformedTree(_))
        ));
        assert!(matches!(
            DecompTree::from_shape(&Shape::Prime(pat("1 2 3 4"), vec![Shape::Leaf; 4])),
            Err(Error::MalformedTree(_))
        ));
        assert!(matches!(
            DecompTree::from_shape(&Shape::Prime(pat("2 4 1 3"), vec![Shape::Leaf; 3])),
            Err(Error::MalformedTree(_))
        ));
    }

    #[test]
    fn built_tree_is_decorated() {
        let shape = Shape::Linear(
            Sign::Minus,
            vec![Shape::Prime(pat("2 4 1 3"), vec![Shape::Leaf; 4]), Shape::Leaf],
        );
        let tree = DecompTree::from_shape(&shape).unwrap();
        assert!(tree.is_expanded());
        assert_eq!(tree.decorated_permutation(), perm("3 5 2 4 1"));
        let prime = tree.node(NodeId(1));
        assert_eq!(prime.span, span(1, 4));
        assert_eq!(prime.value_range, ValueRange { min: 2, max: 5 });
    }
}
