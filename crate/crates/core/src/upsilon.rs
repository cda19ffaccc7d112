//! The index functions `υ_[≤i]`, `υᴺ_[≤i]` and `φ_[≤i]` of a marked tree over
//! a weighted simplex, their integrals against the uniform probability, and
//! the jet-order `χ^[1]` bound coefficient.
//!
//! At a point `t`, edge `e` is marked by the affine form
//! `Σ_l t_l·m_l(e)/d_l (+ s·p(e)/d_p)`, where `l` runs over the coordinate
//! labels and the optional term is the auxiliary twist `p` scaled by `s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, factorial_int, harmonic, pow_rational, to_f64, Rational};
use crate::error::{Error, Result};
use crate::mc::{estimate, MCConfig, McEstimate};
use crate::simplex::{affine_product_expectation, AffineForm, SimplexSpec};
use crate::strat::{c_max, unsigned_leading, Bundle, CMaxAlgorithm, Edge, Node, StratTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxTwist {
    /// Label index in the tree.
    pub label: usize,
    pub scale: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkedSimplexProblem {
    pub tree: StratTree,
    /// Label index of each simplex coordinate. Labels may repeat.
    pub coord_labels: Vec<usize>,
    pub simplex: SimplexSpec,
    pub aux: Option<AuxTwist>,
}

/// The edge forms along one root-to-leaf path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathForms {
    pub forms: Vec<AffineForm>,
    /// Pre-order numbers of the edges.
    pub edges: Vec<usize>,
    pub degree: u64,
}

impl MarkedSimplexProblem {
    pub fn new(tree: StratTree, coord_labels: &[&str], simplex: SimplexSpec, aux: Option<(&str, Rational)>) -> Result<Self> {
        if coord_labels.len() != simplex.r() {
            return Err(Error::ArityMismatch { expected: simplex.r(), got: coord_labels.len() });
        }
        let coord_labels = coord_labels.iter().map(|l| tree.label_index(l)).collect::<Result<_>>()?;
        let aux = match aux {
            Some((label, scale)) => Some(AuxTwist { label: tree.label_index(label)?, scale }),
            None => None,
        };
        Ok(MarkedSimplexProblem { tree, coord_labels, simplex, aux })
    }

    pub fn r(&self) -> usize {
        self.coord_labels.len()
    }

    pub fn edge_form(&self, edge: &Edge, with_aux: bool) -> AffineForm {
        let coeffs = self.coord_labels.iter().map(|&l| self.tree.effective(edge, l)).collect();
        let constant = match (&self.aux, with_aux) {
            (Some(a), true) => &a.scale * self.tree.effective(edge, a.label),
            _ => Rational::zero(),
        };
        AffineForm::new(constant, coeffs)
    }

    /// Every path with its forms, aux included when configured.
    pub fn path_forms(&self) -> Vec<PathForms> {
        fn go(p: &MarkedSimplexProblem, node: &Node, next: &mut usize, cur: &mut PathForms, out: &mut Vec<PathForms>) {
            match node {
                Node::Leaf(d) => out.push(PathForms { degree: *d, ..cur.clone() }),
                Node::Internal(edges) => {
                    for e in edges {
                        cur.forms.push(p.edge_form(e, true));
                        cur.edges.push(*next);
                        *next += 1;
                        go(p, &e.child, next, cur, out);
                        cur.forms.pop();
                        cur.edges.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = PathForms { forms: Vec::new(), edges: Vec::new(), degree: 0 };
        go(self, self.tree.root(), &mut 0, &mut cur, &mut out);
        out
    }

    fn eval_at(&self, t: &[Rational], i: usize, with_aux: bool) -> Result<Rational> {
        if t.len() != self.r() {
            return Err(Error::ArityMismatch { expected: self.r(), got: t.len() });
        }
        let by_index = self.tree.sums_by_index(|e| self.edge_form(e, with_aux).eval(t));
        Ok(by_index.into_iter().take(i + 1).sum())
    }
}

/// `υ_[≤i](t)` for any `t ∈ ℚ^r`; the aux twist is ignored.
pub fn upsilon_eval(prob: &MarkedSimplexProblem, t: &[Rational], i: usize) -> Result<Rational> {
    prob.eval_at(t, i, false)
}

/// `υᴺ_[≤i](t)`: every edge mark shifted by the scaled aux marking.
#[allow(non_snake_case)]
pub fn upsilon_N_eval(prob: &MarkedSimplexProblem, t: &[Rational], i: usize) -> Result<Rational> {
    if prob.aux.is_none() {
        return Err(Error::AuxMissing);
    }
    prob.eval_at(t, i, true)
}

/// `φ_[≤i](u_1, …, u_p)`: the leading coefficient `c_[≤i]` for the bundles
/// `M_j` marked by `Σ_l u_{j,l}·m_l/d_l`, maximized over per-edge choices.
/// The aux twist is ignored.
pub fn phi_eval(prob: &MarkedSimplexProblem, points: &[Vec<Rational>], i: usize) -> Result<Rational> {
    if points.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    let r = prob.r();
    if let Some(u) = points.iter().find(|u| u.len() != r) {
        return Err(Error::ArityMismatch { expected: r, got: u.len() });
    }
    let tree = &prob.tree;
    // edge marks in pre-order, one per point
    let mut marks: Vec<Vec<Rational>> = Vec::new();
    collect_marks(prob, tree.root(), points, &mut marks);
    let den = marks.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let denominator = u64::try_from(&den).map_err(|_| Error::InvalidArgument("common denominator exceeds 64 bits".into()))?;
    let scale = Rational::from_integer(den);

    fn rebuild(node: &Node, marks: &mut std::slice::Iter<Vec<Rational>>, scale: &Rational) -> Node {
        match node {
            Node::Leaf(d) => Node::Leaf(*d),
            Node::Internal(edges) => Node::Internal(
                edges
                    .iter()
                    .map(|e| {
                        let m = marks.next().expect("one mark row per edge");
                        let markings = m.iter().map(|x| (x * scale).to_integer()).collect();
                        Edge { markings, child: rebuild(&e.child, marks, scale) }
                    })
                    .collect(),
            ),
        }
    }
    let bundles: Vec<Bundle> = (1..=points.len()).map(|j| Bundle { label: format!("M{j}"), denominator }).collect();
    let derived = StratTree::new(tree.dimension(), bundles, rebuild(tree.root(), &mut marks.iter(), &scale))?;
    let labels: Vec<String> = (1..=points.len()).map(|j| format!("M{j}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let signed = c_max(&derived, &refs, i, CMaxAlgorithm::Dp)?;
    Ok(unsigned_leading(signed, i))
}

fn collect_marks(prob: &MarkedSimplexProblem, node: &Node, points: &[Vec<Rational>], out: &mut Vec<Vec<Rational>>) {
    for e in node.children() {
        let form = prob.edge_form(e, false);
        out.push(points.iter().map(|u| form.eval(u)).collect());
        collect_marks(prob, &e.child, points, out);
    }
}

/// Sign of an affine form on the simplex from its vertex values: `Some(0)`
/// when it vanishes identically there, `None` when it changes sign.
fn sign_on_simplex(form: &AffineForm, vertices: &[Vec<Rational>]) -> Option<i8> {
    let (mut pos, mut neg) = (false, false);
    for v in vertices {
        let x = form.eval(v);
        pos |= x.is_positive();
        neg |= x.is_negative();
    }
    match (pos, neg) {
        (true, true) => None,
        (true, false) => Some(1),
        (false, true) => Some(-1),
        (false, false) => Some(0),
    }
}

/// `∫ υ_[≤i] dP` over the uniform probability on the simplex (aux included
/// when configured), exactly. Needs every edge form to keep one sign on the
/// simplex unless `i ≥ n`, where every path counts regardless of sign.
pub fn integrate_exact(prob: &MarkedSimplexProblem, i: usize) -> Result<Rational> {
    let a = &prob.simplex;
    let vertices: Vec<Vec<Rational>> = (0..a.r()).map(|l| a.vertex(l)).collect();
    let check = i < prob.tree.dimension();
    let mut total = Rational::zero();
    'paths: for path in prob.path_forms() {
        let mut index = 0;
        for (form, &edge) in path.forms.iter().zip(&path.edges) {
            match sign_on_simplex(form, &vertices) {
                Some(0) => continue 'paths,
                Some(s) => index += usize::from(s < 0),
                None if check => return Err(Error::NotSignConstant { edge }),
                None => {}
            }
        }
        if check && index > i {
            continue;
        }
        total += affine_product_expectation(a, &path.forms)? * BigInt::from(path.degree);
    }
    Ok(total)
}

struct FloatEdge {
    constant: f64,
    coeffs: Vec<f64>,
    child: FloatNode,
}

enum FloatNode {
    Leaf(f64),
    Internal(Vec<FloatEdge>),
}

impl FloatNode {
    fn compile(prob: &MarkedSimplexProblem, node: &Node) -> FloatNode {
        match node {
            Node::Leaf(d) => FloatNode::Leaf(*d as f64),
            Node::Internal(edges) => FloatNode::Internal(
                edges
                    .iter()
                    .map(|e| {
                        let f = prob.edge_form(e, true);
                        FloatEdge {
                            constant: to_f64(&f.constant),
                            coeffs: f.coeffs.iter().map(to_f64).collect(),
                            child: FloatNode::compile(prob, &e.child),
                        }
                    })
                    .collect(),
            ),
        }
    }

    fn eval(&self, t: &[f64], budget: i64) -> f64 {
        if budget < 0 {
            return 0.0;
        }
        match self {
            FloatNode::Leaf(d) => *d,
            FloatNode::Internal(edges) => edges
                .iter()
                .map(|e| {
                    let mu = e.constant + e.coeffs.iter().zip(t).map(|(c, x)| c * x).sum::<f64>();
                    if mu == 0.0 {
                        0.0
                    } else {
                        mu * e.child.eval(t, budget - i64::from(mu < 0.0))
                    }
                })
                .sum(),
        }
    }
}

/// Monte-Carlo `∫ υ_[≤i] dP` (aux included when configured).
pub fn integrate_mc(prob: &MarkedSimplexProblem, i: usize, cfg: &MCConfig) -> Result<McEstimate> {
    let root = FloatNode::compile(prob, prob.tree.root());
    estimate(&prob.simplex, cfg, |t| root.eval(t, i as i64))
}

/// The problem on the jet simplex `Δ_(1×r, …, k×r)`: coordinate `(j−1)r + l`
/// carries base label `l`, and the aux label is scaled by `H_k/(kr)`.
pub fn harmonic_twist(tree: &StratTree, base_labels: &[&str], aux_label: &str, k: usize) -> Result<MarkedSimplexProblem> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if base_labels.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    let r = base_labels.len();
    let coords: Vec<&str> = (0..k).flat_map(|_| base_labels.iter().copied()).collect();
    let scale = harmonic(k as u64) / Rational::from_integer(BigInt::from(k * r));
    MarkedSimplexProblem::new(tree.clone(), &coords, SimplexSpec::jets(k, r), Some((aux_label, scale)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationMode {
    Exact,
    MonteCarlo(MCConfig),
    /// Exact when the problem is sign-constant, Monte-Carlo otherwise.
    Auto(MCConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    Exact(Rational),
    Approx { value: f64, stderr: f64 },
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Exact(v) => to_f64(v),
            Estimate::Approx { value, .. } => *value,
        }
    }
}

/// `∫ υ_[≤i] dP` by the requested route.
pub fn integrate(prob: &MarkedSimplexProblem, i: usize, mode: IntegrationMode) -> Result<Estimate> {
    let mc = |cfg: &MCConfig| integrate_mc(prob, i, cfg).map(|e| Estimate::Approx { value: e.mean, stderr: e.stderr });
    match mode {
        IntegrationMode::Exact => integrate_exact(prob, i).map(Estimate::Exact),
        IntegrationMode::MonteCarlo(cfg) => mc(&cfg),
        IntegrationMode::Auto(cfg) => match integrate_exact(prob, i) {
            Err(Error::NotSignConstant { .. }) => mc(&cfg),
            other => other.map(Estimate::Exact),
        },
    }
}

/// Coefficient of `m^{n+kr−1}/(n+kr−1)!` in the upper bound for `χ^[1]` of
/// the order-`k` jet bundle: `binom(n+kr−1, kr−1)/(k!)^r·∫ υ^{N_k}_[≤1] dP`.
pub fn jet_chi1_bound_coeff(
    tree: &StratTree,
    base_labels: &[&str],
    aux_label: &str,
    k: usize,
    mode: IntegrationMode,
) -> Result<Estimate> {
    let prob = harmonic_twist(tree, base_labels, aux_label, k)?;
    let n = tree.dimension() as u64;
    let kr = (k * base_labels.len()) as u64;
    let factor = Rational::from_integer(BigInt::from(binomial(n + kr - 1, kr - 1)))
        / pow_rational(&Rational::from_integer(factorial_int(k as u64)), base_labels.len() as u32);
    Ok(match integrate(&prob, 1, mode)? {
        Estimate::Exact(v) => Estimate::Exact(v * factor),
        Estimate::Approx { value, stderr } => {
            let f = to_f64(&factor);
            Estimate::Approx { value: value * f, stderr: stderr * f }
        }
    })
}
