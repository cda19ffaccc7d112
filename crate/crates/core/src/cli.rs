//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the exit code and both output streams; `main` only
//! prints them.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage or input parse
//! errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{parse_rational, Rational};
use crate::error::Error;
use crate::lattice::{power_sum, power_sum_asymptotic};
use crate::mc::{self, float_value, ExperimentRecord, MCConfig, MomentCheck, DEFAULT_SEED, Z_THRESHOLD};
use crate::ring::Ring;
use crate::segre::{chi_leading_asymptotic, chi_leading_exact, gg_surface_class, gg_surface_coeffs, jet_rank, WeightedSplitBundle};
use crate::simplex::{cell_ratio, fundamental_domain_volume, monomial_moment, volume, SimplexSpec};
use crate::strat::{c_max, index_sign, unsigned_leading, CMaxAlgorithm, StratTree};
use crate::upsilon::{integrate, jet_chi1_bound_coeff, Estimate, IntegrationMode, MarkedSimplexProblem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "jetsegre", version, about = "Weighted Segre classes, stratification trees and simplex integrals")]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct McArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
}

impl McArgs {
    fn config(&self) -> MCConfig {
        MCConfig::new(self.seed, self.samples, self.workers.unwrap_or_else(mc::default_workers))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Green–Griffiths jet class of a surface: (α_k c1² − β_k c2)/k!.
    GgCoeff {
        #[arg(long)]
        k: u64,
    },
    /// Rank of the order-k weighted jet space in degree m on an n-fold.
    JetRank {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
    },
    /// Weighted Segre series of ⊕ L_i^(a_i), truncated at degree n.
    Whitney {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long)]
        n: u32,
    },
    /// Leading Euler characteristic coefficient of ⊕ L_i^(a_i); exact sum at m when given.
    ChiLeading {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u64>,
    },
    /// E[Π t_i^{p_i}] for the uniform probability on Δ_a.
    SimplexMoment {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
    },
    /// Euclidean volume of Δ_a.
    SimplexVolume {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
    },
    /// Σ_{a·l=m} Π l_i^{p_i}/p_i! and its leading coefficient.
    LatticeSum {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long)]
        m: u64,
    },
    /// Truncated degree deg c1(L)^n_[≤upto], or the index-exact part with --index.
    StratDegree {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long, conflicts_with = "index", required_unless_present = "index")]
        upto: Option<usize>,
        #[arg(long)]
        index: Option<usize>,
    },
    /// Leading coefficient c_[≤upto] over several bundle labels.
    StratCmax {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        label: Vec<String>,
        #[arg(long)]
        upto: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Dp)]
        algorithm: Algorithm,
    },
    /// ∫ υ_[≤upto] dP over Δ_a, coordinates marked by the given labels.
    UpsilonIntegrate {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        label: Vec<String>,
        /// Simplex weights; all ones by default.
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u64>>,
        #[arg(long)]
        upto: usize,
        /// Aux twist as LABEL or LABEL:SCALE.
        #[arg(long)]
        aux: Option<String>,
        /// Fail instead of falling back to Monte-Carlo.
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte-Carlo even when exact integration is possible.
        #[arg(long)]
        mc: bool,
        #[command(flatten)]
        sampling: McArgs,
    },
    /// χ^[1] bound coefficient of the order-k jet bundle.
    JetBound {
        #[arg(long)]
        tree: PathBuf,
        /// Base labels, one per simplex coordinate block.
        #[arg(long, value_delimiter = ',', required = true)]
        label: Vec<String>,
        #[arg(long)]
        aux: String,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long)]
        mc: bool,
        #[command(flatten)]
        sampling: McArgs,
    },
    /// Simplex probability experiments.
    McExperiment {
        #[arg(long, value_enum)]
        experiment: Experiment,
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Coefficients d_l for the variance check.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        d: Vec<Rational>,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Part labels for the averaging experiment.
        #[arg(long, value_delimiter = ',')]
        label: Vec<String>,
        #[arg(long)]
        whole: Option<String>,
        #[arg(long)]
        aux: Option<String>,
        /// Truncation index, or the maximal moment degree for `sampler`.
        #[arg(long)]
        upto: Option<usize>,
        #[command(flatten)]
        sampling: McArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Algorithm {
    Dp,
    Brute,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Experiment {
    Sampler,
    JetsMoments,
    Dirichlet,
    Correlation,
    Variance,
    Averaging,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number (p or p/q)"))
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

fn usage(field: &str, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(Error::Parse { field: field.into(), message: message.to_string() }.to_string())
}

fn require<T: Clone>(v: &Option<T>, field: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| usage(field, "required for this experiment"))
}

struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn scalar(text: String) -> Self {
        Output { json: Value::String(text.clone()), text }
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            let mut stdout = if cli.json { out.json.to_string() } else { out.text };
            stdout.push('\n');
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(e)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn load_tree(path: &PathBuf) -> Result<StratTree, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--tree", format!("{}: {e}", path.display())))?;
    Ok(StratTree::from_json(&text)?)
}

fn simplex(a: Vec<u64>) -> Result<SimplexSpec, Failure> {
    SimplexSpec::new(a).map_err(|e| usage("--a", e))
}

fn parse_aux(spec: &str) -> Result<(String, Rational), Failure> {
    match spec.split_once(':') {
        Some((label, scale)) => {
            let s = parse_rational(scale).ok_or_else(|| usage("--aux", format!("`{scale}` is not a rational number")))?;
            Ok((label.to_string(), s))
        }
        None => Ok((spec.to_string(), Rational::from_integer(BigInt::from(1)))),
    }
}

fn mode(exact: bool, mc: bool, cfg: MCConfig) -> IntegrationMode {
    if exact {
        IntegrationMode::Exact
    } else if mc {
        IntegrationMode::MonteCarlo(cfg)
    } else {
        IntegrationMode::Auto(cfg)
    }
}

fn estimate_output(e: &Estimate) -> Output {
    match e {
        Estimate::Exact(v) => Output {
            text: v.to_string(),
            json: json!({"exact": v.to_string(), "estimate": float_value(crate::arith::to_f64(v)), "stderr": float_value(0.0)}),
        },
        Estimate::Approx { value, stderr } => Output {
            text: format!("{} ± {}", float_value(*value), float_value(*stderr)),
            json: json!({"exact": null, "estimate": float_value(*value), "stderr": float_value(*stderr)}),
        },
    }
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::GgCoeff { k } => {
            let (alpha, beta) = gg_surface_coeffs(k)?;
            let class = gg_surface_class(k)?.render_over_common_denominator();
            let v = json!({"alpha": alpha.to_string(), "beta": beta.to_string(), "class": class});
            Ok(Output { text: v.to_string(), json: v })
        }
        Command::JetRank { n, k, m } => Ok(Output::scalar(jet_rank(n, k, m).to_string())),
        Command::Whitney { a, n } => {
            let ring = Ring::chern_roots(n, "x", a.len());
            let s = WeightedSplitBundle::line_bundles(&ring, &a)?.whitney()?;
            let top = s.component(n)?;
            Ok(Output { text: s.to_string(), json: json!({"series": s.to_string(), "top": top.to_string()}) })
        }
        Command::ChiLeading { a, n, m } => {
            let ring = Ring::chern_roots(n, "x", a.len());
            let b = WeightedSplitBundle::line_bundles(&ring, &a)?;
            let p = match m {
                Some(m) => chi_leading_exact(&b, n, m)?,
                None => chi_leading_asymptotic(&b, n)?,
            };
            Ok(Output::scalar(p.to_string()))
        }
        Command::SimplexMoment { a, p } => Ok(Output::scalar(monomial_moment(&simplex(a)?, &p)?.to_string())),
        Command::SimplexVolume { a } => {
            let a = simplex(a)?;
            let v = volume(&a);
            let mut j = json!({"volume": v.to_string(), "volume_f64": float_value(v.to_f64())});
            if a.r() >= 2 {
                j["fundamental_domain"] = Value::String(fundamental_domain_volume(&a)?.to_string());
                j["cell_ratio"] = Value::String(cell_ratio(&a)?.to_string());
            }
            Ok(Output { text: v.to_string(), json: j })
        }
        Command::LatticeSum { a, p, m } => {
            let a = simplex(a)?;
            let s = power_sum(&a, &p, m)?;
            let lead = power_sum_asymptotic(&a, &p)?;
            Ok(Output { text: s.to_string(), json: json!({"sum": s.to_string(), "leading": lead.to_string()}) })
        }
        Command::StratDegree { tree, label, upto, index } => {
            let t = load_tree(&tree)?;
            let v = match (upto, index) {
                (_, Some(i)) => t.degree_by_index(&label, i)?,
                (Some(u), None) => t.degree_truncated(&label, u)?,
                (None, None) => return Err(usage("--upto", "one of --upto or --index is required")),
            };
            Ok(Output::scalar(v.to_string()))
        }
        Command::StratCmax { tree, label, upto, algorithm } => {
            let t = load_tree(&tree)?;
            let refs: Vec<&str> = label.iter().map(String::as_str).collect();
            let alg = match algorithm {
                Algorithm::Dp => CMaxAlgorithm::Dp,
                Algorithm::Brute => CMaxAlgorithm::Brute,
            };
            let signed = c_max(&t, &refs, upto, alg)?;
            let value = unsigned_leading(signed.clone(), upto);
            Ok(Output {
                text: value.to_string(),
                json: json!({"value": value.to_string(), "signed_max": signed.to_string(), "sign": index_sign(upto).to_string()}),
            })
        }
        Command::UpsilonIntegrate { tree, label, a, upto, aux, exact, mc, sampling } => {
            let t = load_tree(&tree)?;
            let a = match a {
                Some(a) => simplex(a)?,
                None => SimplexSpec::standard(label.len()),
            };
            let refs: Vec<&str> = label.iter().map(String::as_str).collect();
            let aux = aux.as_deref().map(parse_aux).transpose()?;
            let prob = MarkedSimplexProblem::new(t, &refs, a, aux.as_ref().map(|(l, s)| (l.as_str(), s.clone())))?;
            Ok(estimate_output(&integrate(&prob, upto, mode(exact, mc, sampling.config()))?))
        }
        Command::JetBound { tree, label, aux, k, exact, mc, sampling } => {
            let t = load_tree(&tree)?;
            let refs: Vec<&str> = label.iter().map(String::as_str).collect();
            Ok(estimate_output(&jet_chi1_bound_coeff(&t, &refs, &aux, k, mode(exact, mc, sampling.config()))?))
        }
        Command::McExperiment { experiment, a, k, r, d, tree, label, whole, aux, upto, sampling } => {
            let cfg = sampling.config();
            let single_k = || match k.as_slice() {
                [k] => Ok(*k),
                _ => Err(usage("--k", "exactly one value required for this experiment")),
            };
            let params = json!({"seed": cfg.seed, "samples": cfg.samples});
            let records: Vec<ExperimentRecord> = match experiment {
                Experiment::Sampler => {
                    let a = simplex(require(&a, "--a")?)?;
                    let deg = upto.unwrap_or(2) as u32;
                    let rows = mc::sampler_moment_check(&a, deg, &cfg)?;
                    moment_records("sampler", &params, json!({"a": a.weights()}), &rows)
                }
                Experiment::JetsMoments => {
                    let (k, r) = (single_k()?, require(&r, "--r")?);
                    let rows = mc::jets_moment_check(k, r, &cfg)?;
                    moment_records("jets-moments", &params, json!({"k": k, "r": r}), &rows)
                }
                Experiment::Dirichlet => {
                    let (k, r) = (single_k()?, require(&r, "--r")?);
                    let rep = mc::dirichlet_density_check(k, r, &cfg)?;
                    let extra = json!({"k": k, "r": r, "density_constant": rep.density_constant.to_string(),
                        "normalization": rep.normalization.to_string()});
                    moment_records("dirichlet", &params, extra, &rep.rows)
                }
                Experiment::Correlation => {
                    let (k, r) = (single_k()?, require(&r, "--r")?);
                    mc::negative_correlation_check(k, r, &cfg)?
                        .into_iter()
                        .map(|row| ExperimentRecord {
                            experiment: "correlation".into(),
                            params: merge(&params, json!({"k": k, "r": r, "j": row.j, "l": row.l,
                                "product_of_means": row.product_of_means.to_string(),
                                "exact_holds": row.exact_holds, "empirical_holds": row.empirical_holds})),
                            estimate: float_value(row.estimate),
                            stderr: float_value(row.stderr),
                            exact: Value::String(row.exact.to_string()),
                            zscore: float_value(row.zscore),
                        })
                        .collect()
                }
                Experiment::Variance => {
                    let k = single_k()?;
                    let rep = mc::variance_bound_check(k, d.len(), &d)?;
                    let d_json: Vec<String> = d.iter().map(ToString::to_string).collect();
                    vec![ExperimentRecord {
                        experiment: "variance".into(),
                        params: json!({"k": k, "d": d_json, "e_s2": rep.e_s2.to_string(),
                            "bound": rep.bound.to_string(), "holds": rep.holds}),
                        estimate: Value::Null,
                        stderr: Value::Null,
                        exact: Value::String(rep.variance.to_string()),
                        zscore: Value::Null,
                    }]
                }
                Experiment::Averaging => {
                    let t = load_tree(&require(&tree, "--tree")?)?;
                    let whole = require(&whole, "--whole")?;
                    let aux = require(&aux, "--aux")?;
                    let j = require(&upto, "--upto")?;
                    if k.is_empty() {
                        return Err(usage("--k", "at least one value required"));
                    }
                    let parts: Vec<&str> = label.iter().map(String::as_str).collect();
                    let rows = mc::averaging_experiment(&t, &parts, &whole, &aux, j, &k, &cfg)?;
                    let base = merge(&params, json!({"j": j}));
                    rows.iter().map(|row| ExperimentRecord::from_averaging(base.clone(), row)).collect()
                }
            };
            let text = records.iter().map(record_line).collect::<Vec<_>>().join("\n");
            let json = serde_json::to_value(&records).map_err(|e| Failure::Domain(Error::InvalidArgument(e.to_string())))?;
            Ok(Output { text, json })
        }
    }
}

fn merge(base: &Value, extra: Value) -> Value {
    let mut out = base.clone();
    if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
        o.extend(e);
    }
    out
}

fn moment_records(experiment: &str, params: &Value, extra: Value, rows: &[MomentCheck]) -> Vec<ExperimentRecord> {
    rows.iter()
        .map(|row| {
            let mut p = merge(params, extra.clone());
            p["moment"] = Value::String(row.name.clone());
            if let Some(alt) = &row.exact_alt {
                p["exact_alt"] = Value::String(alt.to_string());
            }
            p["within_threshold"] = Value::Bool(row.within(Z_THRESHOLD));
            ExperimentRecord::from_moment(experiment, p, row)
        })
        .collect()
}

fn record_line(r: &ExperimentRecord) -> String {
    let label = r.params.get("moment").and_then(Value::as_str).map(str::to_string).unwrap_or_else(|| {
        let mut p = r.params.clone();
        if let Value::Object(m) = &mut p {
            m.remove("seed");
            m.remove("samples");
        }
        p.to_string()
    });
    format!("{} {} estimate={} stderr={} exact={} z={}", r.experiment, label, r.estimate, r.stderr, r.exact, r.zscore)
}
