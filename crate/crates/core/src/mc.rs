//! Seeded Monte-Carlo on weighted simplexes and the simplex probability
//! experiments (Dirichlet density, jet-coordinate moments, variance bound,
//! averaging experiment).
//!
//! Determinism: samples are drawn in blocks of [`BLOCK_SIZE`]. Block `b` uses
//! a ChaCha8 generator seeded with `seed` on stream `b`. Each coordinate
//! vector is built from independent standard exponentials `z_i` as
//! `t_i = z_i / (a_i Σ z)`. Blocks are reduced in block order, so a result
//! depends only on `(seed, samples)`; the worker count changes speed only.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{harmonic, harmonic_squares, pow_rational, to_f64, Rational};
use crate::error::{Error, Result};
use crate::lattice::multi_indices;
use crate::simplex::{affine_product_expectation, monomial_moment, AffineForm, SimplexSpec};
use crate::strat::StratTree;
use crate::upsilon::{harmonic_twist, integrate_exact, integrate_mc, MarkedSimplexProblem};

/// Seed used when none is given: the ASCII bytes of "jetsegre".
pub const DEFAULT_SEED: u64 = 0x6A65_7473_6567_7265;

pub const BLOCK_SIZE: u64 = 4096;

/// Statistical acceptance threshold, in standard errors.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MCConfig {
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig { seed: DEFAULT_SEED, samples: 1_000_000, workers: default_workers() }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl MCConfig {
    pub fn new(seed: u64, samples: u64, workers: usize) -> Self {
        MCConfig { seed, samples, workers }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::ZeroSamples);
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl McEstimate {
    fn from_sums(count: u64, sum: f64, sumsq: f64) -> Self {
        let n = count as f64;
        let mean = sum / n;
        let var = if count > 1 { ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0) } else { 0.0 };
        McEstimate { mean, stderr: (var / n).sqrt(), samples: count }
    }

    /// `(mean − exact)/stderr`; zero when both the error and stderr vanish.
    pub fn zscore(&self, exact: f64) -> f64 {
        zscore(self.mean, exact, self.stderr)
    }
}

pub fn zscore(estimate: f64, exact: f64, stderr: f64) -> f64 {
    let diff = estimate - exact;
    if stderr > 0.0 {
        diff / stderr
    } else if diff.abs() <= 1e-12 * exact.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

fn draw(rng: &mut ChaCha8Rng, weights: &[u64], t: &mut [f64]) {
    let mut total = 0.0;
    for z in t.iter_mut() {
        *z = rng.sample::<f64, _>(Exp1);
        total += *z;
    }
    for (z, &a) in t.iter_mut().zip(weights) {
        *z /= total * a as f64;
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Uniform points of `Δ_a`, in the same order the parallel estimators use.
pub fn sample_simplex(a: &SimplexSpec, cfg: &MCConfig) -> impl Iterator<Item = Vec<f64>> {
    let weights = a.weights().to_vec();
    let seed = cfg.seed;
    let samples = cfg.samples;
    let mut rng = block_rng(seed, 0);
    (0..samples).map(move |i| {
        if i > 0 && i % BLOCK_SIZE == 0 {
            rng = block_rng(seed, i / BLOCK_SIZE);
        }
        let mut t = vec![0.0; weights.len()];
        draw(&mut rng, &weights, &mut t);
        t
    })
}

/// Means of `dims` statistics computed by `f` on uniform samples of `Δ_a`.
/// `f` writes its values into the output slice and returns `false` to reject
/// a sample, which is then redrawn.
pub fn estimate_many<F>(a: &SimplexSpec, cfg: &MCConfig, dims: usize, f: F) -> Result<Vec<McEstimate>>
where
    F: Fn(&[f64], &mut [f64]) -> bool + Sync,
{
    cfg.validate()?;
    let weights = a.weights();
    let blocks = cfg.samples.div_ceil(BLOCK_SIZE);
    let run_block = |b: u64| {
        let mut rng = block_rng(cfg.seed, b);
        let count = BLOCK_SIZE.min(cfg.samples - b * BLOCK_SIZE);
        let mut t = vec![0.0; weights.len()];
        let mut out = vec![0.0; dims];
        let mut sums = vec![(0.0f64, 0.0f64); dims];
        for _ in 0..count {
            loop {
                draw(&mut rng, weights, &mut t);
                if f(&t, &mut out) {
                    break;
                }
            }
            for (s, &v) in sums.iter_mut().zip(&out) {
                s.0 += v;
                s.1 += v * v;
            }
        }
        (count, sums)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let parts: Vec<(u64, Vec<(f64, f64)>)> = pool.install(|| (0..blocks).into_par_iter().map(run_block).collect());
    let mut count = 0u64;
    let mut totals = vec![(0.0f64, 0.0f64); dims];
    for (c, sums) in parts {
        count += c;
        for (t, s) in totals.iter_mut().zip(sums) {
            t.0 += s.0;
            t.1 += s.1;
        }
    }
    Ok(totals.into_iter().map(|(s, q)| McEstimate::from_sums(count, s, q)).collect())
}

pub fn estimate<F>(a: &SimplexSpec, cfg: &MCConfig, f: F) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    Ok(estimate_many(a, cfg, 1, |t, out| {
        out[0] = f(t);
        true
    })?[0])
}

/// The jet-coordinate split of a point of `Δ_(1×r, …, k×r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetsSplit {
    /// `Y_j = Σ_l X_{j,l}`.
    pub y: Vec<f64>,
    /// `Y'_j = j·Y_j`; sums to one.
    pub y_prime: Vec<f64>,
    /// `Z^j_l = X_{j,l}/Y_j`, one point of `Δ^{r−1}` per `j`.
    pub z: Vec<Vec<f64>>,
}

/// Splits a sample of the jet simplex (coordinate `(j−1)·r + l`). `None` when
/// some `Y_j` vanishes, an event of probability zero.
pub fn jets_decomposition(sample: &[f64], k: usize, r: usize) -> Option<JetsSplit> {
    if sample.len() != k * r {
        return None;
    }
    let mut y = Vec::with_capacity(k);
    let mut z = Vec::with_capacity(k);
    for j in 0..k {
        let block = &sample[j * r..(j + 1) * r];
        let s: f64 = block.iter().sum();
        if s <= 0.0 {
            return None;
        }
        y.push(s);
        z.push(block.iter().map(|x| x / s).collect());
    }
    let y_prime = y.iter().enumerate().map(|(j, v)| (j + 1) as f64 * v).collect();
    Some(JetsSplit { y, y_prime, z })
}

/// Comparison of one exact moment with its Monte-Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub name: String,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    /// The same moment by an independent exact route, when there is one.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact_alt: Option<Rational>,
    pub estimate: f64,
    pub stderr: f64,
    pub zscore: f64,
}

impl MomentCheck {
    fn new(name: String, exact: Rational, exact_alt: Option<Rational>, est: McEstimate) -> Self {
        let z = est.zscore(to_f64(&exact));
        MomentCheck { name, exact, exact_alt, estimate: est.mean, stderr: est.stderr, zscore: z }
    }

    pub fn routes_agree(&self) -> bool {
        self.exact_alt.as_ref().is_none_or(|alt| *alt == self.exact)
    }

    pub fn within(&self, threshold: f64) -> bool {
        self.zscore.abs() <= threshold
    }
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn max_abs_z(rows: &[MomentCheck]) -> f64 {
    rows.iter().map(|r| r.zscore.abs()).fold(0.0, f64::max)
}

fn exps_name(prefix: &str, p: &[u32]) -> String {
    let parts: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{e}", i + 1) })
        .collect();
    format!("E[{}]", parts.join("*"))
}

/// Every monomial moment with `1 ≤ |p| ≤ max_degree` against its estimate.
pub fn sampler_moment_check(a: &SimplexSpec, max_degree: u32, cfg: &MCConfig) -> Result<Vec<MomentCheck>> {
    let ps: Vec<Vec<u32>> = (1..=max_degree).flat_map(|d| multi_indices(a.r(), d)).collect();
    let est = estimate_many(a, cfg, ps.len(), |t, out| {
        for (o, p) in out.iter_mut().zip(&ps) {
            *o = t.iter().zip(p).map(|(x, &e)| x.powi(e as i32)).product();
        }
        true
    })?;
    ps.iter()
        .zip(est)
        .map(|(p, e)| Ok(MomentCheck::new(exps_name("t", p), monomial_moment(a, p)?, None, e)))
        .collect()
}

fn y_form(k: usize, r: usize, j: usize) -> AffineForm {
    let mut c = vec![Rational::zero(); k * r];
    for l in 0..r {
        c[(j - 1) * r + l] = Rational::one();
    }
    AffineForm::linear(c)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `E[Y_j] = 1/(jk)`, `E[Y_j²] = (r+1)/(j²k(kr+1))` and
/// `E[Y_jY_l] = r/(jlk(kr+1))`: closed forms, exact expectations on the jet
/// simplex, and estimates.
pub fn jets_moment_check(k: usize, r: usize, cfg: &MCConfig) -> Result<Vec<MomentCheck>> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidArgument("k and r must be positive".into()));
    }
    let a = SimplexSpec::jets(k, r);
    let (ki, ri) = (k as i64, r as i64);
    let mut rows: Vec<(String, Rational, Vec<usize>)> = Vec::new();
    for j in 1..=k {
        let ji = j as i64;
        rows.push((format!("E[Y{j}]"), q(1, ji * ki), vec![j]));
        rows.push((format!("E[Y{j}^2]"), q(ri + 1, ji * ji * ki * (ki * ri + 1)), vec![j, j]));
    }
    for j in 1..=k {
        for l in j + 1..=k {
            rows.push((format!("E[Y{j}*Y{l}]"), q(ri, j as i64 * l as i64 * ki * (ki * ri + 1)), vec![j, l]));
        }
    }
    let factors: Vec<Vec<usize>> = rows.iter().map(|r| r.2.clone()).collect();
    let est = estimate_many(&a, cfg, rows.len(), |t, out| {
        let Some(s) = jets_decomposition(t, k, r) else { return false };
        for (o, f) in out.iter_mut().zip(&factors) {
            *o = f.iter().map(|&j| s.y[j - 1]).product();
        }
        true
    })?;
    rows.into_iter()
        .zip(est)
        .map(|((name, closed, fs), e)| {
            let forms: Vec<AffineForm> = fs.iter().map(|&j| y_form(k, r, j)).collect();
            let alt = affine_product_expectation(&a, &forms)?;
            Ok(MomentCheck::new(name, closed, Some(alt), e))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletReport {
    pub k: usize,
    pub r: usize,
    #[serde(serialize_with = "ser_rational")]
    pub density_constant: Rational,
    /// Total mass of the density; exactly one.
    #[serde(serialize_with = "ser_rational")]
    pub normalization: Rational,
    /// `exact` by the density on `Δ^{k−1}`, `exact_alt` on the jet simplex.
    pub rows: Vec<MomentCheck>,
    pub max_zscore: f64,
}

impl DirichletReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.normalization.is_one() && self.rows.iter().all(|r| r.routes_agree() && r.within(threshold))
    }
}

/// Moments of `(Y'_1, …, Y'_k)` with `1 ≤ |q| ≤ 2` under the density
/// `C·(y_1⋯y_k)^{r−1}`, against the jet-simplex moments and samples.
pub fn dirichlet_density_check(k: usize, r: usize, cfg: &MCConfig) -> Result<DirichletReport> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidArgument("k and r must be positive".into()));
    }
    let jets = SimplexSpec::jets(k, r);
    let base = SimplexSpec::standard(k);
    let fact = |n: usize| Rational::from_integer(crate::arith::factorial_int(n as u64));
    let c = fact(k * r - 1) / (fact(k - 1) * pow_rational(&fact(r - 1), k as u32));
    let shift = vec![(r - 1) as u32; k];
    let normalization = &c * monomial_moment(&base, &shift)?;
    let qs: Vec<Vec<u32>> = (1..=2).flat_map(|d| multi_indices(k, d)).collect();
    let est = estimate_many(&jets, cfg, qs.len(), |t, out| {
        let Some(s) = jets_decomposition(t, k, r) else { return false };
        for (o, qv) in out.iter_mut().zip(&qs) {
            *o = s.y_prime.iter().zip(qv).map(|(y, &e)| y.powi(e as i32)).product();
        }
        true
    })?;
    let mut rows = Vec::with_capacity(qs.len());
    for (qv, e) in qs.iter().zip(est) {
        let p: Vec<u32> = qv.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let density = &c * monomial_moment(&base, &p)?;
        let mut forms = Vec::new();
        for (j, &e) in qv.iter().enumerate() {
            for _ in 0..e {
                let mut f = y_form(k, r, j + 1);
                f.coeffs.iter_mut().for_each(|x| *x *= BigInt::from(j + 1));
                forms.push(f);
            }
        }
        let direct = affine_product_expectation(&jets, &forms)?;
        rows.push(MomentCheck::new(exps_name("Y'", qv), density, Some(direct), e));
    }
    let max_zscore = max_abs_z(&rows);
    Ok(DirichletReport { k, r, density_constant: c, normalization, rows, max_zscore })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub j: usize,
    pub l: usize,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub product_of_means: Rational,
    pub exact_holds: bool,
    pub estimate: f64,
    pub stderr: f64,
    pub zscore: f64,
    /// `estimate ≤ E[Y_j]E[Y_l] + 4σ`.
    pub empirical_holds: bool,
}

/// `E[Y_jY_l] ≤ E[Y_j]E[Y_l]` for `j ≠ l`, exactly and empirically.
pub fn negative_correlation_check(k: usize, r: usize, cfg: &MCConfig) -> Result<Vec<CorrelationRow>> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let a = SimplexSpec::jets(k, r);
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|j| (j + 1..=k).map(move |l| (j, l))).collect();
    let est = estimate_many(&a, cfg, pairs.len(), |t, out| {
        let Some(s) = jets_decomposition(t, k, r) else { return false };
        for (o, &(j, l)) in out.iter_mut().zip(&pairs) {
            *o = s.y[j - 1] * s.y[l - 1];
        }
        true
    })?;
    pairs
        .iter()
        .zip(est)
        .map(|(&(j, l), e)| {
            let exact = affine_product_expectation(&a, &[y_form(k, r, j), y_form(k, r, l)])?;
            let pm = q(1, (j * k) as i64) * q(1, (l * k) as i64);
            let bound = to_f64(&pm);
            Ok(CorrelationRow {
                j,
                l,
                exact_holds: exact <= pm,
                zscore: e.zscore(to_f64(&exact)),
                exact,
                product_of_means: pm,
                estimate: e.mean,
                stderr: e.stderr,
                empirical_holds: e.mean <= bound + Z_THRESHOLD * e.stderr,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    #[serde(serialize_with = "ser_rational")]
    pub variance: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub e_s2: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub holds: bool,
}

/// `Var[A] ≤ (2/k²)·(Σ_{j≤k} 1/j²)·E[S²]` with `A = Σ_{j,l} t_{j,l} d_l` on
/// the jet simplex and `S = Σ_l d_l T_l` on `Δ^{r−1}`, all exact.
pub fn variance_bound_check(k: usize, r: usize, d: &[Rational]) -> Result<VarianceReport> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidArgument("k and r must be positive".into()));
    }
    if d.len() != r {
        return Err(Error::ArityMismatch { expected: r, got: d.len() });
    }
    let jets = SimplexSpec::jets(k, r);
    let a_form = AffineForm::linear((0..k).flat_map(|_| d.iter().cloned()).collect());
    let mean = affine_product_expectation(&jets, std::slice::from_ref(&a_form))?;
    let second = affine_product_expectation(&jets, &[a_form.clone(), a_form])?;
    let variance = second - &mean * &mean;
    let s_form = AffineForm::linear(d.to_vec());
    let e_s2 = affine_product_expectation(&SimplexSpec::standard(r), &[s_form.clone(), s_form])?;
    let kk = Rational::from_integer(BigInt::from(k * k));
    let bound = Rational::from_integer(BigInt::from(2)) / kk * harmonic_squares(k as u64) * &e_s2;
    Ok(VarianceReport { holds: variance <= bound, variance, e_s2, bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragingRow {
    pub k: usize,
    /// `∫ υ^{N_k}_[≤j] dP`.
    pub integral: f64,
    pub stderr: f64,
    pub exact: bool,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact_value: Option<Rational>,
    /// `(kr)^n·∫/H_k^n`.
    pub scaled: f64,
    pub scaled_stderr: f64,
    /// `(kr)^n·∫/(log k)^n`; absent for `k = 1`.
    pub scaled_log: Option<f64>,
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    pub gap: f64,
    /// Upper bound on `|scaled − target|` from the per-path variance estimate.
    pub gap_bound: f64,
}

/// For each `k`, integrates `υ^{N_k}_[≤j]` on the jet simplex and compares the
/// `H_k`-scaled value with `deg c_1(whole)_[≤j]`.
pub fn averaging_experiment(
    tree: &StratTree,
    parts: &[&str],
    whole: &str,
    aux: &str,
    j: usize,
    k_values: &[usize],
    cfg: &MCConfig,
) -> Result<Vec<AveragingRow>> {
    if !tree.validate_product_trivialization(parts, whole, aux)? {
        return Err(Error::InvalidTrivialization(format!("`{whole}` is not the sum of the parts and `{aux}` on every edge")));
    }
    let n = tree.dimension();
    let r = parts.len();
    let target = tree.degree_truncated(whole, j)?;
    let mut rows = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let prob = harmonic_twist(tree, parts, aux, k)?;
        let (integral, stderr, exact_value) = match integrate_exact(&prob, j) {
            Ok(v) => (to_f64(&v), 0.0, Some(v)),
            Err(Error::NotSignConstant { .. }) => {
                let e = integrate_mc(&prob, j, cfg)?;
                (e.mean, e.stderr, None)
            }
            Err(e) => return Err(e),
        };
        let h = harmonic(k as u64);
        let kr = Rational::from_integer(BigInt::from(k * r));
        let scale = to_f64(&pow_rational(&(&kr / &h), n as u32));
        let scaled = integral * scale;
        let scaled_log = (k > 1).then(|| integral * ((k * r) as f64 / (k as f64).ln()).powi(n as i32));
        let gap_bound = scale * (j as f64 + 1.0) * path_variance_bound(&prob, whole)?;
        rows.push(AveragingRow {
            k,
            integral,
            stderr,
            exact: exact_value.is_some(),
            exact_value,
            scaled,
            scaled_stderr: stderr * scale,
            scaled_log,
            gap: (scaled - to_f64(&target)).abs(),
            target: target.clone(),
            gap_bound,
        })
    }
    Ok(rows)
}

/// `Σ_σ deg(σ)·[Σ_p Π_{q<p} E(A_q²)·Var(A_p)·Π_{s>p} E(A_s)²]^{1/2}`.
fn path_variance_bound(prob: &MarkedSimplexProblem, _whole: &str) -> Result<f64> {
    let a = &prob.simplex;
    let mut total = 0.0;
    for path in prob.path_forms() {
        let mut m1 = Vec::with_capacity(path.forms.len());
        let mut m2 = Vec::with_capacity(path.forms.len());
        for f in &path.forms {
            m1.push(affine_product_expectation(a, std::slice::from_ref(f))?);
            m2.push(affine_product_expectation(a, &[f.clone(), f.clone()])?);
        }
        let n = path.forms.len();
        let mut s = Rational::zero();
        for p in 0..n {
            let mut term = &m2[p] - &m1[p] * &m1[p];
            for qi in 0..p {
                term *= &m2[qi];
            }
            for si in p + 1..n {
                term *= &m1[si] * &m1[si];
            }
            s += term;
        }
        if s.is_negative() {
            s = Rational::zero();
        }
        total += path.degree as f64 * to_f64(&s).sqrt();
    }
    Ok(total)
}

/// One experiment result in the shared record shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub params: Value,
    pub estimate: Value,
    pub stderr: Value,
    pub exact: Value,
    pub zscore: Value,
}

/// Float rendered with 17 significant digits; non-finite values become null.
pub fn float_value(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(serde_json::Number::from_string_unchecked(format!("{x:.16e}")))
    } else {
        Value::Null
    }
}

impl ExperimentRecord {
    pub fn from_moment(experiment: &str, params: Value, row: &MomentCheck) -> Self {
        ExperimentRecord {
            experiment: experiment.into(),
            params,
            estimate: float_value(row.estimate),
            stderr: float_value(row.stderr),
            exact: Value::String(row.exact.to_string()),
            zscore: float_value(row.zscore),
        }
    }

    pub fn from_averaging(params: Value, row: &AveragingRow) -> Self {
        let mut params = params;
        if let Value::Object(m) = &mut params {
            m.insert("k".into(), json!(row.k));
            m.insert("target".into(), Value::String(row.target.to_string()));
            m.insert("scaled".into(), float_value(row.scaled));
            m.insert("scaled_log".into(), row.scaled_log.map(float_value).unwrap_or(Value::Null));
            m.insert("gap".into(), float_value(row.gap));
            m.insert("gap_bound".into(), float_value(row.gap_bound));
        }
        ExperimentRecord {
            experiment: "averaging".into(),
            params,
            estimate: float_value(row.integral),
            stderr: float_value(row.stderr),
            exact: row.exact_value.as_ref().map(|v| Value::String(v.to_string())).unwrap_or(Value::Null),
            zscore: Value::Null,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn cfg(samples: u64) -> MCConfig {
        MCConfig::new(7, samples, 3)
    }

    #[test]
    fn samples_lie_on_the_simplex() {
        let a = SimplexSpec::new(vec![1, 2, 5]).unwrap();
        for t in sample_simplex(&a, &cfg(10_000)) {
            assert!(t.iter().all(|x| *x >= 0.0));
            let s: f64 = t.iter().zip(a.weights()).map(|(x, &w)| x * w as f64).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let a = SimplexSpec::new(vec![1, 3]).unwrap();
        let f = |t: &[f64]| t[0] * t[1];
        let one = estimate(&a, &MCConfig::new(11, 50_000, 1), f).unwrap();
        let four = estimate(&a, &MCConfig::new(11, 50_000, 4), f).unwrap();
        assert_eq!(one, four);
        // the streaming sampler sees the same points
        let seq: f64 = sample_simplex(&a, &MCConfig::new(11, 50_000, 1)).map(|t| f(&t)).sum::<f64>() / 50_000.0;
        assert!((seq - one.mean).abs() < 1e-12);
        assert_ne!(estimate(&a, &MCConfig::new(12, 50_000, 1), f).unwrap(), one);
    }

    #[test]
    fn zero_samples_rejected() {
        let a = SimplexSpec::standard(2);
        assert_eq!(estimate(&a, &cfg(0), |_| 0.0), Err(Error::ZeroSamples));
    }

    #[test]
    fn sampler_moments() {
        let rows = sampler_moment_check(&SimplexSpec::new(vec![1, 2]).unwrap(), 2, &cfg(200_000)).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.within(Z_THRESHOLD)), "{rows:?}");
    }

    #[test]
    fn decomposition() {
        let t = [0.1, 0.2, 0.35, 0.0];
        let s = jets_decomposition(&t, 2, 2).unwrap();
        assert!((s.y_prime.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(s.z[1], vec![1.0, 0.0]);
        assert!(jets_decomposition(&[0.5, 0.5, 0.0, 0.0], 2, 2).is_none());
    }

    #[test]
    fn jet_moments_small() {
        let rows = jets_moment_check(2, 2, &cfg(100_000)).unwrap();
        assert!(rows.iter().all(|r| r.routes_agree() && r.within(Z_THRESHOLD)), "{rows:?}");
    }

    #[test]
    fn density_constants() {
        let rep = dirichlet_density_check(2, 1, &cfg(50_000)).unwrap();
        assert_eq!(rep.density_constant, int(1));
        let rep = dirichlet_density_check(2, 2, &cfg(50_000)).unwrap();
        assert_eq!(rep.density_constant, int(6));
        assert!(rep.passes(Z_THRESHOLD), "{rep:?}");
    }

    #[test]
    fn correlations() {
        let rows = negative_correlation_check(2, 1, &cfg(50_000)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].exact, q(1, 12));
        assert_eq!(rows[0].product_of_means, q(1, 8));
        assert!(rows[0].exact_holds && rows[0].empirical_holds);
        assert!(negative_correlation_check(1, 3, &cfg(10)).is_err());
    }

    #[test]
    fn variance_bounds() {
        let rep = variance_bound_check(2, 1, &[int(1)]).unwrap();
        assert_eq!(rep.variance, q(1, 48));
        assert_eq!(rep.bound, q(5, 8));
        assert!(rep.holds);
        let rep = variance_bound_check(3, 2, &[int(0), int(0)]).unwrap();
        assert!(rep.variance.is_zero() && rep.bound.is_zero() && rep.holds);
    }

    #[test]
    fn float_rendering() {
        assert_eq!(float_value(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float_value(f64::NAN), Value::Null);
    }
}
