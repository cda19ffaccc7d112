//! Marked stratification trees and their truncated first-Chern degrees.
//!
//! Every edge carries one integer numerator per declared bundle label; the
//! effective marking of the edge for label `L` is `numerator / d_L`. The index
//! of a root-to-leaf path is the number of strictly negative effective
//! markings on it. An edge whose marking is exactly zero counts as
//! non-negative; such a path contributes zero anyway.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub label: String,
    pub denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Internal(Vec<Edge>),
    Leaf(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Numerators, indexed like the tree's bundles.
    pub markings: Vec<BigInt>,
    pub child: Node,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratTree {
    dimension: usize,
    bundles: Vec<Bundle>,
    root: Node,
}

/// A root-to-leaf path: the child index taken at each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathIndex {
    pub path: Vec<usize>,
    pub index: usize,
    /// `Π m/d` along the path.
    pub coefficient: Rational,
    pub degree: u64,
}

impl Node {
    pub fn leaf(degree: u64) -> Node {
        Node::Leaf(degree)
    }

    pub fn internal(edges: Vec<Edge>) -> Node {
        Node::Internal(edges)
    }

    pub fn children(&self) -> &[Edge] {
        match self {
            Node::Internal(e) => e,
            Node::Leaf(_) => &[],
        }
    }

    fn edge_count(&self) -> usize {
        self.children().iter().map(|e| 1 + e.child.edge_count()).sum()
    }

    fn validate(&self, depth: usize, n: usize, nlabels: usize) -> Result<()> {
        match self {
            Node::Leaf(d) => {
                if *d == 0 {
                    return Err(Error::InvalidTree("leaf degree must be at least 1".into()));
                }
                if depth != n {
                    return Err(Error::DepthViolation(format!("leaf at depth {depth}, expected {n}")));
                }
                Ok(())
            }
            Node::Internal(edges) => {
                if edges.is_empty() {
                    return Err(Error::InvalidTree("internal node without children".into()));
                }
                if depth >= n {
                    return Err(Error::DepthViolation(format!("internal node at depth {depth} in a tree of dimension {n}")));
                }
                for e in edges {
                    if e.markings.len() != nlabels {
                        return Err(Error::ArityMismatch { expected: nlabels, got: e.markings.len() });
                    }
                    e.child.validate(depth + 1, n, nlabels)?;
                }
                Ok(())
            }
        }
    }

    fn zeroed(&self, nlabels: usize) -> Node {
        match self {
            Node::Leaf(d) => Node::Leaf(*d),
            Node::Internal(edges) => Node::Internal(
                edges
                    .iter()
                    .map(|e| Edge { markings: vec![BigInt::zero(); nlabels], child: e.child.zeroed(nlabels) })
                    .collect(),
            ),
        }
    }

    fn depth(&self) -> Option<usize> {
        match self {
            Node::Leaf(_) => Some(0),
            Node::Internal(edges) => {
                let mut d = None;
                for e in edges {
                    let c = e.child.depth()? + 1;
                    if d.is_some_and(|x| x != c) {
                        return None;
                    }
                    d = Some(c);
                }
                d
            }
        }
    }
}

impl StratTree {
    pub fn new(dimension: usize, bundles: Vec<Bundle>, root: Node) -> Result<Self> {
        for (i, b) in bundles.iter().enumerate() {
            if b.denominator == 0 {
                return Err(Error::InvalidTree(format!("bundle `{}` has denominator 0", b.label)));
            }
            if bundles[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::InvalidTree(format!("duplicate bundle `{}`", b.label)));
            }
        }
        root.validate(0, dimension, bundles.len())?;
        Ok(StratTree { dimension, bundles, root })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn edge_count(&self) -> usize {
        self.root.edge_count()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.bundles
            .iter()
            .position(|b| b.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn denominator(&self, label: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.bundles[label].denominator))
    }

    /// Effective marking `m/d` of `edge` for label index `label`.
    pub fn effective(&self, edge: &Edge, label: usize) -> Rational {
        Rational::new(edge.markings[label].clone(), BigInt::from(self.bundles[label].denominator))
    }

    /// All root-to-leaf paths with their index for `label`.
    pub fn paths(&self, label: &str) -> Result<Vec<PathIndex>> {
        let li = self.label_index(label)?;
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_paths(&self.root, li, &mut stack, 0, Rational::one(), &mut out);
        Ok(out)
    }

    fn collect_paths(
        &self,
        node: &Node,
        li: usize,
        stack: &mut Vec<usize>,
        index: usize,
        coeff: Rational,
        out: &mut Vec<PathIndex>,
    ) {
        match node {
            Node::Leaf(d) => out.push(PathIndex { path: stack.clone(), index, coefficient: coeff, degree: *d }),
            Node::Internal(edges) => {
                for (i, e) in edges.iter().enumerate() {
                    let mu = self.effective(e, li);
                    let idx = index + usize::from(mu.is_negative());
                    stack.push(i);
                    self.collect_paths(&e.child, li, stack, idx, &coeff * &mu, out);
                    stack.pop();
                }
            }
        }
    }

    /// `Σ C_σ·deg(σ)` over the paths of index exactly `l`.
    pub fn degree_by_index(&self, label: &str, l: usize) -> Result<Rational> {
        Ok(self
            .paths(label)?
            .into_iter()
            .filter(|p| p.index == l)
            .map(|p| p.coefficient * BigInt::from(p.degree))
            .sum())
    }

    /// `Σ_{j ≤ l}` [`degree_by_index`](Self::degree_by_index).
    pub fn degree_truncated(&self, label: &str, l: usize) -> Result<Rational> {
        Ok(self
            .paths(label)?
            .into_iter()
            .filter(|p| p.index <= l)
            .map(|p| p.coefficient * BigInt::from(p.degree))
            .sum())
    }

    /// Same value as [`degree_truncated`](Self::degree_truncated), by recursion
    /// on the top-level children: budget `l` below a positive edge, `l − 1`
    /// below a negative one.
    pub fn degree_recursive(&self, label: &str, l: usize) -> Result<Rational> {
        let li = self.label_index(label)?;
        Ok(self.recurse(&self.root, li, l as i64))
    }

    fn recurse(&self, node: &Node, li: usize, budget: i64) -> Rational {
        if budget < 0 {
            return Rational::zero();
        }
        match node {
            Node::Leaf(d) => Rational::from_integer(BigInt::from(*d)),
            Node::Internal(edges) => {
                let mut total = Rational::zero();
                for e in edges {
                    let mu = self.effective(e, li);
                    if mu.is_zero() {
                        continue;
                    }
                    let b = if mu.is_negative() { budget - 1 } else { budget };
                    total += mu * self.recurse(&e.child, li, b);
                }
                total
            }
        }
    }

    /// Sums `Σ_σ Π mark(e)·deg(σ)` split by index, for arbitrary edge marks.
    /// Entry `j` collects the paths with exactly `j` negative marks.
    pub fn sums_by_index<F>(&self, mark: F) -> Vec<Rational>
    where
        F: Fn(&Edge) -> Rational,
    {
        fn go<F: Fn(&Edge) -> Rational>(node: &Node, n: usize, mark: &F) -> Vec<Rational> {
            match node {
                Node::Leaf(d) => {
                    let mut v = vec![Rational::zero(); n + 1];
                    v[0] = Rational::from_integer(BigInt::from(*d));
                    v
                }
                Node::Internal(edges) => {
                    let mut acc = vec![Rational::zero(); n + 1];
                    for e in edges {
                        let mu = mark(e);
                        if mu.is_zero() {
                            continue;
                        }
                        let shift = usize::from(mu.is_negative());
                        let below = go(&e.child, n, mark);
                        for (j, v) in below.into_iter().enumerate() {
                            if j + shift <= n && !v.is_zero() {
                                acc[j + shift] += &mu * v;
                            }
                        }
                    }
                    acc
                }
            }
        }
        go(&self.root, self.dimension, &mark)
    }

    /// Adds zero-marked branches. Each insertion names the parent node by the
    /// child indices leading to it; the inserted subtree's own markings are
    /// replaced by zeros.
    pub fn refine(&self, insertions: &[Insertion]) -> Result<StratTree> {
        let nl = self.bundles.len();
        let mut root = self.root.clone();
        for ins in insertions {
            let depth = ins.parent.len();
            if depth >= self.dimension {
                return Err(Error::DepthViolation(format!("cannot insert below depth {depth}")));
            }
            let want = self.dimension - depth - 1;
            if ins.subtree.depth() != Some(want) {
                return Err(Error::DepthViolation(format!("inserted subtree must have uniform depth {want}")));
            }
            let mut node = &mut root;
            for &i in &ins.parent {
                node = match node {
                    Node::Internal(edges) => {
                        let len = edges.len();
                        &mut edges
                            .get_mut(i)
                            .ok_or_else(|| Error::InvalidArgument(format!("child {i} out of range ({len} children)")))?
                            .child
                    }
                    Node::Leaf(_) => return Err(Error::DepthViolation("insertion path passes through a leaf".into())),
                };
            }
            match node {
                Node::Internal(edges) => edges.push(Edge { markings: vec![BigInt::zero(); nl], child: ins.subtree.zeroed(nl) }),
                Node::Leaf(_) => return Err(Error::DepthViolation("cannot insert below a leaf".into())),
            }
        }
        StratTree::new(self.dimension, self.bundles.clone(), root)
    }

    /// Replaces `label` by its `f`-th power trivialization: numerators times
    /// `f`, and the denominator too unless `keep_denominator`.
    pub fn power_trivialization(&self, label: &str, f: u64, keep_denominator: bool) -> Result<StratTree> {
        if f == 0 {
            return Err(Error::InvalidArgument("f must be at least 1".into()));
        }
        let li = self.label_index(label)?;
        fn go(node: &Node, li: usize, f: &BigInt) -> Node {
            match node {
                Node::Leaf(d) => Node::Leaf(*d),
                Node::Internal(edges) => Node::Internal(
                    edges
                        .iter()
                        .map(|e| {
                            let mut m = e.markings.clone();
                            m[li] *= f;
                            Edge { markings: m, child: go(&e.child, li, f) }
                        })
                        .collect(),
                ),
            }
        }
        let mut bundles = self.bundles.clone();
        if !keep_denominator {
            bundles[li].denominator *= f;
        }
        StratTree::new(self.dimension, bundles, go(&self.root, li, &BigInt::from(f)))
    }

    /// Checks `whole = Σ parts + aux` on the effective markings of every edge.
    pub fn validate_product_trivialization(&self, parts: &[&str], whole: &str, aux: &str) -> Result<bool> {
        let pi: Vec<usize> = parts.iter().map(|p| self.label_index(p)).collect::<Result<_>>()?;
        let wi = self.label_index(whole)?;
        let ai = self.label_index(aux)?;
        fn go(t: &StratTree, node: &Node, pi: &[usize], wi: usize, ai: usize) -> bool {
            node.children().iter().all(|e| {
                let sum: Rational = pi.iter().map(|&i| t.effective(e, i)).sum::<Rational>() + t.effective(e, ai);
                sum == t.effective(e, wi) && go(t, &e.child, pi, wi, ai)
            })
        }
        Ok(go(self, &self.root, &pi, wi, ai))
    }

    /// Pretty JSON in the documented tree format. Fails only when a
    /// numerator does not fit in an `i64`.
    pub fn to_json(&self) -> Result<String> {
        let raw = self.to_raw()?;
        serde_json::to_string_pretty(&raw).map_err(|e| Error::InvalidTree(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<StratTree> {
        let raw: RawTree = serde_json::from_str(text).map_err(|e| Error::Parse { field: "tree".into(), message: e.to_string() })?;
        raw.into_tree()
    }

    fn to_raw(&self) -> Result<RawTree> {
        fn go(t: &StratTree, node: &Node) -> Result<RawNode> {
            Ok(match node {
                Node::Leaf(d) => RawNode { children: None, degree: Some(*d) },
                Node::Internal(edges) => {
                    let mut children = Vec::with_capacity(edges.len());
                    for e in edges {
                        let mut markings = BTreeMap::new();
                        for (b, m) in t.bundles.iter().zip(&e.markings) {
                            let v = m.to_i64().ok_or_else(|| Error::InvalidTree(format!("numerator {m} exceeds 64 bits")))?;
                            markings.insert(b.label.clone(), v);
                        }
                        children.push(RawEdge { markings, node: go(t, &e.child)? });
                    }
                    RawNode { children: Some(children), degree: None }
                }
            })
        }
        Ok(RawTree { dimension: self.dimension, bundles: self.bundles.clone(), root: go(self, &self.root)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub parent: Vec<usize>,
    pub subtree: Node,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTree {
    dimension: usize,
    bundles: Vec<Bundle>,
    root: RawNode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<RawEdge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    #[serde(default)]
    markings: BTreeMap<String, i64>,
    node: RawNode,
}

impl RawTree {
    fn into_tree(self) -> Result<StratTree> {
        let parse = |field: String, message: String| Error::Parse { field, message };
        for (i, b) in self.bundles.iter().enumerate() {
            if b.denominator == 0 {
                return Err(parse(format!("bundles[{i}].denominator"), "must be positive".into()));
            }
        }
        fn go(raw: RawNode, path: &str, bundles: &[Bundle], err: &dyn Fn(String, String) -> Error) -> Result<Node> {
            match (raw.children, raw.degree) {
                (Some(_), Some(_)) => Err(err(path.into(), "a node has either `children` or `degree`, not both".into())),
                (None, None) => Err(err(path.into(), "expected `children` or `degree`".into())),
                (None, Some(d)) => {
                    if d == 0 {
                        Err(err(format!("{path}.degree"), "leaf degree must be at least 1".into()))
                    } else {
                        Ok(Node::Leaf(d))
                    }
                }
                (Some(children), None) => {
                    let mut edges = Vec::with_capacity(children.len());
                    for (i, c) in children.into_iter().enumerate() {
                        let here = format!("{path}.children[{i}]");
                        if let Some(unknown) = c.markings.keys().find(|k| !bundles.iter().any(|b| &b.label == *k)) {
                            return Err(err(format!("{here}.markings.{unknown}"), "unknown bundle label".into()));
                        }
                        let markings = bundles
                            .iter()
                            .map(|b| BigInt::from(c.markings.get(&b.label).copied().unwrap_or(0)))
                            .collect();
                        edges.push(Edge { markings, child: go(c.node, &format!("{here}.node"), bundles, err)? });
                    }
                    Ok(Node::Internal(edges))
                }
            }
        }
        let root = go(self.root, "root", &self.bundles, &parse)?;
        StratTree::new(self.dimension, self.bundles, root).map_err(|e| parse("tree".into(), e.to_string()))
    }
}

/// How one node's children lift to a cover: for every child edge, the list
/// of components above it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverPlan {
    pub children: Vec<Vec<CoverPiece>>,
}

/// A component above a child stratum: its degree over that stratum, the new
/// numerator of its edge, and the plan for its own children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPiece {
    pub degree: u64,
    pub numerator: BigInt,
    pub below: CoverPlan,
}

impl CoverPlan {
    /// Each stratum has a single preimage of degree one.
    pub fn trivial(tree: &StratTree, label: &str) -> Result<CoverPlan> {
        let li = tree.label_index(label)?;
        fn go(node: &Node, li: usize) -> CoverPlan {
            CoverPlan {
                children: node
                    .children()
                    .iter()
                    .map(|e| vec![CoverPiece { degree: 1, numerator: e.markings[li].clone(), below: go(&e.child, li) }])
                    .collect(),
            }
        }
        Ok(go(tree.root(), li))
    }

    /// Degree-2 cover where every top-level child stratum has two preimages.
    pub fn duplicate(tree: &StratTree, label: &str) -> Result<CoverPlan> {
        let li = tree.label_index(label)?;
        let trivial = Self::trivial(tree, label)?;
        Ok(CoverPlan {
            children: tree
                .root()
                .children()
                .iter()
                .zip(trivial.children)
                .map(|(e, pieces)| {
                    let below = pieces[0].below.clone();
                    vec![
                        CoverPiece { degree: 1, numerator: e.markings[li].clone(), below: below.clone() },
                        CoverPiece { degree: 1, numerator: e.markings[li].clone(), below },
                    ]
                })
                .collect(),
        })
    }
}

/// Pulls `tree` back along a finite cover described by `plan` and returns the
/// covered tree (carrying only `label`) together with the cover degree `δ`.
///
/// Above an edge with numerator `m` whose parent component has degree `e`,
/// the components with degrees `e_j` and numerators `m'_j` must satisfy
/// `Σ m'_j·e_j = e·m`, and every `m'_j` must have the sign of `m` or be zero.
/// Covered leaves have degree `e_j·deg`.
pub fn cover(tree: &StratTree, label: &str, plan: &CoverPlan) -> Result<(StratTree, u64)> {
    let li = tree.label_index(label)?;
    let edges = tree.root().children();
    if plan.children.len() != edges.len() {
        return Err(Error::InvalidCover(format!("root has {} children, plan has {}", edges.len(), plan.children.len())));
    }
    let mut delta: Option<BigInt> = None;
    for (e, pieces) in edges.iter().zip(&plan.children) {
        let m = &e.markings[li];
        if m.is_zero() {
            continue;
        }
        let s: BigInt = pieces.iter().map(|p| &p.numerator * BigInt::from(p.degree)).sum();
        if !(&s % m).is_zero() {
            return Err(Error::InvalidCover("root edge sum is not an integer multiple of its marking".into()));
        }
        let d = s / m;
        match &delta {
            Some(prev) if *prev != d => return Err(Error::InvalidCover(format!("inconsistent cover degree: {prev} and {d}"))),
            _ => delta = Some(d),
        }
    }
    let delta = match delta {
        Some(d) => d,
        None => plan.children.first().map(|ps| ps.iter().map(|p| BigInt::from(p.degree)).sum()).unwrap_or_else(BigInt::one),
    };
    let delta_u = delta
        .to_u64()
        .filter(|d| *d > 0)
        .ok_or_else(|| Error::InvalidCover(format!("cover degree must be positive, got {delta}")))?;
    let root = cover_node(tree.root(), li, plan, delta_u, "root")?;
    let bundle = tree.bundles()[li].clone();
    let covered = StratTree::new(tree.dimension(), vec![bundle], root).map_err(|e| Error::InvalidCover(e.to_string()))?;
    Ok((covered, delta_u))
}

fn cover_node(node: &Node, li: usize, plan: &CoverPlan, parent_degree: u64, path: &str) -> Result<Node> {
    match node {
        Node::Leaf(d) => {
            if !plan.children.is_empty() {
                return Err(Error::InvalidCover(format!("{path}: plan continues below a leaf")));
            }
            Ok(Node::Leaf(d * parent_degree))
        }
        Node::Internal(edges) => {
            if plan.children.len() != edges.len() {
                return Err(Error::InvalidCover(format!("{path}: {} children, plan has {}", edges.len(), plan.children.len())));
            }
            let mut out = Vec::new();
            for (i, (e, pieces)) in edges.iter().zip(&plan.children).enumerate() {
                let here = format!("{path}.{i}");
                if pieces.is_empty() {
                    return Err(Error::InvalidCover(format!("{here}: no component above this stratum")));
                }
                let m = &e.markings[li];
                let mut s = BigInt::zero();
                for p in pieces {
                    if p.degree == 0 {
                        return Err(Error::InvalidCover(format!("{here}: component of degree 0")));
                    }
                    if (p.numerator.is_positive() && !m.is_positive()) || (p.numerator.is_negative() && !m.is_negative()) {
                        return Err(Error::InvalidCover(format!("{here}: numerator {} changes the sign of {m}", p.numerator)));
                    }
                    s += &p.numerator * BigInt::from(p.degree);
                }
                if s != m * BigInt::from(parent_degree) {
                    return Err(Error::InvalidCover(format!("{here}: Σ m'·e = {s}, expected {parent_degree}·{m}")));
                }
                for p in pieces {
                    let child = cover_node(&e.child, li, &p.below, p.degree, &here)?;
                    out.push(Edge { markings: vec![p.numerator.clone()], child });
                }
            }
            Ok(Node::Internal(out))
        }
    }
}

/// Tree for a single bundle `A` with all markings positive. `levels[i]` lists
/// the markings of the children of every node at depth `i`; `leaf_degrees`
/// gives the degree of the leaf under each last-level marking.
pub fn ample_tree(n: usize, levels: &[Vec<i64>], leaf_degrees: &[u64]) -> Result<StratTree> {
    if levels.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: levels.len() });
    }
    for m in levels.iter().flatten() {
        if *m <= 0 {
            return Err(Error::NonPositiveMarking(m.to_string()));
        }
    }
    if n > 0 && leaf_degrees.len() != levels[n - 1].len() {
        return Err(Error::ArityMismatch { expected: levels[n - 1].len(), got: leaf_degrees.len() });
    }
    if n == 0 && leaf_degrees.len() != 1 {
        return Err(Error::ArityMismatch { expected: 1, got: leaf_degrees.len() });
    }
    fn go(depth: usize, levels: &[Vec<i64>], leaf_degrees: &[u64], leaf_at: usize) -> Node {
        if depth == levels.len() {
            return Node::Leaf(leaf_degrees[leaf_at]);
        }
        Node::Internal(
            levels[depth]
                .iter()
                .enumerate()
                .map(|(i, &m)| Edge { markings: vec![BigInt::from(m)], child: go(depth + 1, levels, leaf_degrees, i) })
                .collect(),
        )
    }
    StratTree::new(n, vec![Bundle { label: "A".into(), denominator: 1 }], go(0, levels, leaf_degrees, 0))
}

/// Complete binary tree of depth `n` modelling `L = F − G` for nef `F`, `G`
/// with `F^{n−j}·G^j = f^{n−j} g^j`: each node has an `F`-child marked
/// `(F: f, G: 0, L: f)` and a `G`-child marked `(F: 0, G: g, L: −g)`.
pub fn nef_difference_tree(n: usize, f: &Rational, g: &Rational) -> Result<StratTree> {
    if !f.is_positive() || g.is_negative() {
        return Err(Error::InvalidArgument("need f > 0 and g ≥ 0".into()));
    }
    let lcm = f.denom().lcm(g.denom());
    let to_u64 = |x: &BigInt| x.to_u64().ok_or_else(|| Error::InvalidArgument("denominator too large".into()));
    let bundles = vec![
        Bundle { label: "F".into(), denominator: to_u64(f.denom())? },
        Bundle { label: "G".into(), denominator: to_u64(g.denom())? },
        Bundle { label: "L".into(), denominator: to_u64(&lcm)? },
    ];
    let lf = (f * Rational::from_integer(lcm.clone())).to_integer();
    let lg = (g * Rational::from_integer(lcm)).to_integer();
    let f_edge = vec![f.numer().clone(), BigInt::zero(), lf];
    let g_edge = vec![BigInt::zero(), g.numer().clone(), -lg];
    fn go(depth: usize, fe: &[BigInt], ge: &[BigInt]) -> Node {
        if depth == 0 {
            return Node::Leaf(1);
        }
        Node::Internal(vec![
            Edge { markings: fe.to_vec(), child: go(depth - 1, fe, ge) },
            Edge { markings: ge.to_vec(), child: go(depth - 1, fe, ge) },
        ])
    }
    StratTree::new(n, bundles, go(n, &f_edge, &g_edge))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CMaxAlgorithm {
    Brute,
    Dp,
}

/// `(−1)^i`. The sign convention of the leading coefficient lives here:
/// [`c_max`] returns the signed maximum `max_φ (−1)^i c(φ)_[≤i]` and
/// [`unsigned_leading`] turns it back into `c_[≤i]`.
pub fn index_sign(i: usize) -> Rational {
    if i % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn unsigned_leading(signed_max: Rational, i: usize) -> Rational {
    index_sign(i) * signed_max
}

/// `max_φ (−1)^i c(φ)_[≤i]` over assignments of a label to every edge.
pub fn c_max(tree: &StratTree, labels: &[&str], i: usize, algorithm: CMaxAlgorithm) -> Result<Rational> {
    if labels.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    let idx: Vec<usize> = labels.iter().map(|l| tree.label_index(l)).collect::<Result<_>>()?;
    match algorithm {
        CMaxAlgorithm::Dp => Ok(dp(tree, tree.root(), &idx, i as i64)),
        CMaxAlgorithm::Brute => Ok(brute(tree, &idx, i)),
    }
}

fn dp(tree: &StratTree, node: &Node, idx: &[usize], budget: i64) -> Rational {
    if budget < 0 {
        return Rational::zero();
    }
    match node {
        Node::Leaf(d) => index_sign(budget as usize) * BigInt::from(*d),
        Node::Internal(edges) => edges
            .iter()
            .map(|e| {
                idx.iter()
                    .map(|&l| {
                        let mu = tree.effective(e, l);
                        if mu.is_positive() {
                            &mu * dp(tree, &e.child, idx, budget)
                        } else if mu.is_negative() {
                            mu.abs() * dp(tree, &e.child, idx, budget - 1)
                        } else {
                            Rational::zero()
                        }
                    })
                    .max()
                    .expect("labels are non-empty")
            })
            .sum(),
    }
}

fn brute(tree: &StratTree, idx: &[usize], i: usize) -> Rational {
    let edges = tree.edge_count();
    let mut choice = vec![0usize; edges];
    let mut best: Option<Rational> = None;
    loop {
        let mut counter = 0;
        let value = brute_eval(tree, tree.root(), idx, &choice, &mut counter, i as i64);
        let signed = index_sign(i) * value;
        if best.as_ref().is_none_or(|b| signed > *b) {
            best = Some(signed);
        }
        let mut k = 0;
        while k < edges {
            choice[k] += 1;
            if choice[k] < idx.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == edges {
            break;
        }
    }
    best.expect("at least one assignment")
}

/// `c(φ)_[≤budget]` below `node`, edges numbered in pre-order.
fn brute_eval(tree: &StratTree, node: &Node, idx: &[usize], choice: &[usize], counter: &mut usize, budget: i64) -> Rational {
    match node {
        Node::Leaf(d) => {
            if budget >= 0 {
                Rational::from_integer(BigInt::from(*d))
            } else {
                Rational::zero()
            }
        }
        Node::Internal(edges) => {
            let mut total = Rational::zero();
            for e in edges {
                let mu = tree.effective(e, idx[choice[*counter]]);
                *counter += 1;
                let b = if mu.is_negative() { budget - 1 } else { budget };
                let below = brute_eval(tree, &e.child, idx, choice, counter, b);
                total += mu * below;
            }
            total
        }
    }
}
