//! Randomized property suites shared by the CLI and the acceptance tests.
//!
//! Every suite is a pure function of its [`SuiteConfig`]. Trial `i` draws
//! from ChaCha8 seeded with `seed` on stream `i`, trials run in parallel and
//! are collected in trial order, so reports are reproducible byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{self, AnalysisError, TailClass, TailConfig};
use crate::exact;
use crate::num17;
use crate::spaces::{embedding_chain, point_bound_slack, TreeFunction};
use crate::symbols::{Symbol, SymbolError};
use crate::testfns::{self, TestFnError};
use crate::tree::{TreeError, TreeShape, TreeTruncation, VertexId};
use crate::weights::{self, WeightTable};

/// Failures kept verbatim in a report; the total is always counted.
pub const MAX_LISTED_FAILURES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Weights,
    Embedding,
    Pointbound,
    Testfns,
    Sandwich,
    Isometry,
    Tails,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Weights,
        Suite::Embedding,
        Suite::Pointbound,
        Suite::Testfns,
        Suite::Sandwich,
        Suite::Isometry,
        Suite::Tails,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weights => "weights",
            Suite::Embedding => "embedding",
            Suite::Pointbound => "pointbound",
            Suite::Testfns => "testfns",
            Suite::Sandwich => "sandwich",
            Suite::Isometry => "isometry",
            Suite::Tails => "tails",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?}, expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    TestFn(#[from] TestFnError),
    #[error("suite {suite} needs depth at least {needed}, got {depth}")]
    TooShallow {
        suite: &'static str,
        needed: usize,
        depth: usize,
    },
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub shape: TreeShape,
    pub depth: usize,
    pub trials: u64,
    pub seed: u64,
    pub vertex_cap: usize,
    pub tail: TailConfig,
}

impl SuiteConfig {
    pub fn new(suite: Suite, trials: u64, seed: u64) -> Self {
        Self {
            suite,
            shape: TreeShape::Uniform(2),
            depth: 8,
            trials,
            seed,
            vertex_cap: crate::tree::DEFAULT_VERTEX_CAP,
            tail: TailConfig::default(),
        }
    }

    pub fn with_tree(mut self, shape: TreeShape, depth: usize) -> Self {
        self.shape = shape;
        self.depth = depth;
        self
    }
}

/// One violated check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub vertex: Option<VertexId>,
    pub depth: usize,
    #[serde(with = "num17")]
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    pub shape: String,
    pub depth: usize,
    pub checks: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub passed: bool,
    #[serde(with = "num17::map")]
    pub metrics: BTreeMap<String, f64>,
}

/// Accumulates checks; `slack < 0` is a failure.
#[derive(Default)]
struct Tally {
    checks: u64,
    failure_count: u64,
    failures: Vec<Failure>,
    min_slack: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            min_slack: f64::INFINITY,
            ..Self::default()
        }
    }

    fn check(&mut self, slack: f64, failure: impl FnOnce() -> (String, Option<VertexId>, usize)) {
        self.checks += 1;
        // NaN slack counts as a failure
        if slack < self.min_slack || slack.is_nan() {
            self.min_slack = slack;
        }
        if slack.is_nan() || slack < 0.0 {
            self.failure_count += 1;
            if self.failures.len() < MAX_LISTED_FAILURES {
                let (instance, vertex, depth) = failure();
                self.failures.push(Failure {
                    instance,
                    vertex,
                    depth,
                    slack,
                });
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failure_count += other.failure_count;
        let room = MAX_LISTED_FAILURES - self.failures.len().min(MAX_LISTED_FAILURES);
        self.failures.extend(other.failures.into_iter().take(room));
        if other.min_slack < self.min_slack || other.min_slack.is_nan() {
            self.min_slack = other.min_slack;
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
}

fn phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A random complex function: i.i.d. values, a vertexwise random walk whose
/// steps grow or decay like `|v|^p`, or a radial random walk.
pub fn random_function(tree: &Arc<TreeTruncation>, rng: &mut impl Rng) -> TreeFunction {
    let amplitude = 10f64.powf(rng.random_range(-1.0..1.0));
    match rng.random_range(0..3) {
        0 => {
            let values = (0..tree.vertex_count()).map(|_| unit_disk(rng) * amplitude).collect();
            TreeFunction::from_values(tree.clone(), values).expect("length matches")
        }
        1 => {
            let p = rng.random_range(-1.0..1.0);
            let mut d = vec![Complex64::new(0.0, 0.0); tree.vertex_count()];
            for (i, z) in d.iter_mut().enumerate().skip(1) {
                *z = unit_disk(rng) * amplitude * (tree.depth_of(i) as f64).powf(p);
            }
            TreeFunction::from_derivative(tree.clone(), unit_disk(rng) * amplitude, &d).expect("length matches")
        }
        _ => {
            let p = rng.random_range(-1.0..1.0);
            let mut acc = unit_disk(rng) * amplitude;
            let mut values = vec![acc];
            for j in 1..=tree.depth() {
                acc += unit_disk(rng) * amplitude * (j as f64).powf(p);
                values.push(acc);
            }
            TreeFunction::radial(tree.clone(), values).expect("length matches")
        }
    }
}

fn coef(rng: &mut impl Rng, lo: f64, hi: f64) -> String {
    format!("({:.4})", rng.random_range(lo..hi))
}

/// A random radial symbol: one of several expression families with random
/// coefficients, or a complex table with `depth + 1` entries.
pub fn random_radial_symbol(depth: usize, rng: &mut impl Rng) -> Symbol {
    let text = match rng.random_range(0..9) {
        0 => format!("{} + {}/ell(1,x)", coef(rng, -2.0, 2.0), coef(rng, -2.0, 2.0)),
        1 => format!("{}*exp(-{}*x) + {}", coef(rng, -2.0, 2.0), coef(rng, 0.1, 1.0), coef(rng, -1.0, 1.0)),
        2 => format!("{}*log(1+x)/Lambda(2,x) + {}", coef(rng, -2.0, 2.0), coef(rng, -1.0, 1.0)),
        3 => format!("{} + {}*sqrt(x)", coef(rng, -2.0, 2.0), coef(rng, -1.0, 1.0)),
        4 => format!("{}*min(x, {})", coef(rng, -2.0, 2.0), coef(rng, 1.0, 5.0)),
        5 => format!("{}/Lambda({},x) + {}", coef(rng, -2.0, 2.0), rng.random_range(1..4), coef(rng, -1.0, 1.0)),
        6 => format!("{}*ell({},x)", coef(rng, -2.0, 2.0), rng.random_range(1..4)),
        7 => format!("{}*pow(x, {})", coef(rng, -2.0, 2.0), coef(rng, -1.0, 1.0)),
        _ => {
            let amplitude = rng.random_range(0.1..3.0);
            return Symbol::Tabulated((0..=depth).map(|_| unit_disk(rng) * amplitude).collect());
        }
    };
    Symbol::radial(&text).expect("generated expressions parse")
}

/// A random symbol of any kind: radial, or explicit vertex values.
pub fn random_symbol(tree: &Arc<TreeTruncation>, rng: &mut impl Rng) -> Symbol {
    if rng.random_bool(0.3) {
        Symbol::Explicit(random_function(tree, rng).to_vertex_values())
    } else {
        random_radial_symbol(tree.depth(), rng)
    }
}

/// Index pairs `(m, n)`, `m != n`, exercised by the operator suites.
pub const DISTINCT_PAIRS: [(u32, u32); 6] = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)];

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    let tree = Arc::new(TreeTruncation::with_cap(cfg.shape.clone(), cfg.depth, cfg.vertex_cap)?);
    let mut metrics = BTreeMap::new();
    let tally = match cfg.suite {
        Suite::Weights => weights_suite(cfg, &mut metrics),
        Suite::Embedding => embedding_suite(cfg, &tree),
        Suite::Pointbound => pointbound_suite(cfg, &tree),
        Suite::Testfns => testfns_suite(&tree)?,
        Suite::Sandwich => sandwich_suite(cfg, &tree)?,
        Suite::Isometry => isometry_suite(cfg, &tree, &mut metrics)?,
        Suite::Tails => tails_suite(cfg, &tree)?,
    };
    metrics.insert("min_slack".into(), tally.min_slack);
    Ok(SuiteReport {
        suite: cfg.suite,
        seed: cfg.seed,
        trials: cfg.trials,
        shape: cfg.shape.to_string(),
        depth: cfg.depth,
        checks: tally.checks,
        failure_count: tally.failure_count,
        passed: tally.failure_count == 0,
        failures: tally.failures,
        metrics,
    })
}

/// Runs `body` for every trial in parallel and merges the tallies in order.
fn per_trial<F>(cfg: &SuiteConfig, body: F) -> Result<Tally, VerifyError>
where
    F: Fn(u64, &mut ChaCha8Rng, &mut Tally) -> Result<(), VerifyError> + Sync,
{
    let parts: Vec<Result<Tally, VerifyError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let mut tally = Tally::new();
            body(trial, &mut rng, &mut tally)?;
            Ok(tally)
        })
        .collect();
    let mut total = Tally::new();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

/// Iterated logarithms computed directly from their recursion.
fn ell_recursive(j: u32, x: f64) -> f64 {
    (0..j).fold(x, |l, _| 1.0 + l.ln())
}

/// Weight laws on `max(trials, 2)` log-spaced points of `[1, 10^6]`, `k <= 6`.
fn weights_suite(cfg: &SuiteConfig, metrics: &mut BTreeMap<String, f64>) -> Tally {
    const KMAX: u32 = 6;
    let points = cfg.trials.max(2);
    let mut tally = Tally::new();
    let mut worst_rel: f64 = 0.0;
    for i in 0..points {
        let x = 10f64.powf(6.0 * i as f64 / (points - 1) as f64);
        let lambda = |k| weights::lambda(k, x).expect("x >= 1");
        for k in 0..=KMAX {
            tally.check(lambda(k + 1) - lambda(k), || (format!("Λ_{k} <= Λ_{} at x={x:e}", k + 1), None, 0));
            let ell = weights::ell(k + 1, x).expect("x >= 1");
            tally.check(ell - 1.0, || (format!("ℓ_{} >= 1 at x={x:e}", k + 1), None, 0));
            let product: f64 = (0..k).map(|j| ell_recursive(j, x)).product();
            let rel = (lambda(k) - product).abs() / product;
            worst_rel = worst_rel.max(rel);
            tally.check(1e-12 - rel, || (format!("Λ_{k} = ∏ ℓ_j at x={x:e}"), None, 0));
        }
    }
    for k in 0..=KMAX + 1 {
        let at_one = weights::lambda(k, 1.0).expect("x = 1");
        tally.check(if at_one == 1.0 { 0.0 } else { -(at_one - 1.0).abs() }, || {
            (format!("Λ_{k}(1) = 1"), None, 0)
        });
    }
    metrics.insert("max_product_rel_error".into(), worst_rel);
    tally
}

fn embedding_suite(cfg: &SuiteConfig, tree: &Arc<TreeTruncation>) -> Tally {
    per_trial(cfg, |trial, rng, tally| {
        let f = random_function(tree, rng);
        let chain = embedding_chain(&f, 4);
        for k in 0..4 {
            tally.check(chain[k + 1] - chain[k] + 1e-12, || {
                (format!("trial {trial}: ‖f‖_{k} <= ‖f‖_{}", k + 1), None, tree.depth())
            });
        }
        Ok(())
    })
    .expect("embedding trials are infallible")
}

fn pointbound_suite(cfg: &SuiteConfig, tree: &Arc<TreeTruncation>) -> Tally {
    per_trial(cfg, |trial, rng, tally| {
        let f = random_function(tree, rng);
        for k in 0..=3 {
            let (slack, index) = point_bound_slack(&f, k);
            tally.check(slack + 1e-9, || {
                (
                    format!("trial {trial}: point bound, k={k}"),
                    Some(tree.vertex_at(index)),
                    tree.depth_of(index),
                )
            });
        }
        Ok(())
    })
    .expect("point-bound trials are infallible")
}

/// Deterministic: normalizations of the extremal test functions.
fn testfns_suite(tree: &Arc<TreeTruncation>) -> Result<Tally, VerifyError> {
    let depth = tree.depth();
    if depth < 2 {
        return Err(VerifyError::TooShallow {
            suite: "testfns",
            needed: 2,
            depth,
        });
    }
    let table = WeightTable::new(5, depth);
    let tol = 1e-12;
    let mut tally = Tally::new();
    for m in 0..=4u32 {
        for index in 1..tree.sphere_range(depth).start {
            let v = tree.vertex_at(index);
            let d = v.len();
            let fv = testfns::make_fv(&v, m, tree)?;
            let seminorm = fv.norm_with(m, &table).seminorm;
            tally.check(tol - (seminorm - 1.0).abs(), || (format!("‖f_v‖_{m} seminorm = 1"), Some(v.clone()), d));
            let chi = testfns::make_chi(&v, tree)?;
            let expected = table.lambda(m, d + 1);
            let got = chi.norm_with(m, &table).total;
            tally.check(tol * expected - (got - expected).abs(), || {
                (format!("‖χ_w‖_{m} = Λ_{m}(|w|+1)"), Some(v.clone()), d)
            });
        }
        for index in 1..tree.vertex_count() {
            let v = tree.vertex_at(index);
            let gk = testfns::make_gk(&v, m, tree)?;
            let total = gk.norm_with(m, &table).total;
            tally.check(2.0 + tol - total, || (format!("‖g_k‖_{m} <= 2"), Some(v.clone()), v.len()));
        }
        let half = testfns::make_half_chi_o(tree).norm_with(m, &table).total;
        tally.check(tol - (half - 1.0).abs(), || (format!("‖½χ_o‖_{m} = 1"), None, 0));
        let g = testfns::make_g_radial(m, tree).norm_with(m, &table).total;
        if m == 0 {
            tally.check(if g == 1.0 { 0.0 } else { -(g - 1.0).abs() }, || ("‖g‖_0 = 1".into(), None, 0));
        } else {
            tally.check(testfns::g_norm_bound(m) + 1e-9 - g, || (format!("‖g‖_{m} <= 2∏ℓ_j(2)"), None, 0));
        }
    }
    Ok(tally)
}

/// Lower bound `<=` exact `<=` upper bound for random radial symbols, and the
/// known values for `ψ ≡ 1` (`m > n`) and `ψ = χ_o`.
fn sandwich_suite(cfg: &SuiteConfig, tree: &Arc<TreeTruncation>) -> Result<Tally, VerifyError> {
    let mut tally = per_trial(cfg, |trial, rng, tally| {
        let symbol = random_radial_symbol(tree.depth(), rng);
        let (psi, _) = symbol.materialize(tree)?;
        for (m, n) in DISTINCT_PAIRS {
            let bounds = analysis::bounds_distinct(&psi, m, n)?;
            let solution = exact::exact_operator_norm(&psi, m, n);
            let slack = (solution.value - bounds.lower).min(bounds.upper - solution.value);
            tally.check(slack + exact::SANDWICH_TOL, || {
                (
                    format!("trial {trial}: {} (m={m}, n={n})", symbol.describe()),
                    Some(solution.v_star.clone()),
                    tree.depth(),
                )
            });
        }
        Ok(())
    })?;
    let one = testfns::make_one(tree);
    let chi_o = testfns::make_chi(&VertexId::root(), tree)?;
    for (m, n) in DISTINCT_PAIRS {
        let sandwich = exact::verify_sandwich(&chi_o, m, n, "χ_o");
        let ok = sandwich.is_ok();
        tally.check(if ok { 0.0 } else { -1.0 }, || (format!("χ_o sandwich (m={m}, n={n})"), None, tree.depth()));
        let v = exact::exact_operator_norm(&chi_o, m, n).value;
        tally.check(1e-12 - (v - 2.0).abs(), || (format!("‖M_χo‖ = 2 (m={m}, n={n})"), None, tree.depth()));
        if m > n {
            let v = exact::exact_operator_norm(&one, m, n).value;
            tally.check(1e-12 - (v - 1.0).abs(), || (format!("‖M_1‖ = 1 (m={m}, n={n})"), None, tree.depth()));
        }
    }
    Ok(tally)
}

/// Positive isometry defect for random symbols, and the closed-form defect
/// of unimodular constants at `|w| = 2`.
fn isometry_suite(
    cfg: &SuiteConfig,
    tree: &Arc<TreeTruncation>,
    metrics: &mut BTreeMap<String, f64>,
) -> Result<Tally, VerifyError> {
    if tree.depth() < 3 {
        return Err(VerifyError::TooShallow {
            suite: "isometry",
            needed: 3,
            depth: tree.depth(),
        });
    }
    let defects: Vec<Result<f64, VerifyError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let (psi, _) = random_symbol(tree, &mut rng).materialize(tree)?;
            let mut least = f64::INFINITY;
            for (m, n) in DISTINCT_PAIRS {
                least = least.min(analysis::isometry_defect(&psi, m, n)?.defect);
            }
            Ok(least)
        })
        .collect();
    let mut tally = Tally::new();
    let mut smallest = f64::INFINITY;
    for (trial, defect) in defects.into_iter().enumerate() {
        let defect = defect?;
        smallest = smallest.min(defect);
        tally.check(defect - 1e-6, || (format!("trial {trial}: defect > 1e-6"), None, tree.depth()));
    }
    metrics.insert("min_random_defect".into(), smallest);

    let mut rng = trial_rng(cfg.seed, u64::MAX);
    let constants: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain((0..7).map(|_| phase(&mut rng)))
        .collect();
    for c in constants {
        let psi = TreeFunction::constant(tree.clone(), c);
        for (m, n) in DISTINCT_PAIRS {
            let report = analysis::isometry_defect(&psi, m, n)?;
            let expected = (weights::lambda(m, 3.0).expect("x = 3") - weights::lambda(n, 3.0).expect("x = 3")).abs();
            let got = report.chi_defect_by_depth[0];
            tally.check(1e-9 - (got - expected).abs(), || {
                (format!("constant {c}: defect at |w|=2 (m={m}, n={n})"), None, 2)
            });
        }
    }
    Ok(tally)
}

/// `ψ ≡ c` for `c = 1` and `trials` random `c` with `1/2 <= |c| <= 2`: both
/// tails vanish for `m > n`, the `ν` tail grows for `m < n`.
fn tails_suite(cfg: &SuiteConfig, tree: &Arc<TreeTruncation>) -> Result<Tally, VerifyError> {
    if tree.depth() < 4 {
        return Err(VerifyError::TooShallow {
            suite: "tails",
            needed: 4,
            depth: tree.depth(),
        });
    }
    let mut tally = Tally::new();
    let mut constants = vec![Complex64::new(1.0, 0.0)];
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        constants.push(phase(&mut rng) * rng.random_range(0.5..2.0));
    }
    let verdict = |ok: bool| if ok { 0.0 } else { -1.0 };
    for c in constants {
        let psi = TreeFunction::constant(tree.clone(), c);
        for (m, n) in DISTINCT_PAIRS {
            let tail = analysis::classify_tail(&analysis::mu_nu_profile(&psi, m, n), &cfg.tail);
            if m > n {
                let ok = tail.mu == TailClass::Vanishing && tail.nu == TailClass::Vanishing;
                tally.check(verdict(ok), || {
                    (format!("ψ ≡ {c} (m={m}, n={n}): μ {:?}, ν {:?}", tail.mu, tail.nu), None, tree.depth())
                });
            } else {
                tally.check(verdict(tail.nu == TailClass::Growing), || {
                    (format!("ψ ≡ {c} (m={m}, n={n}): ν {:?}", tail.nu), None, tree.depth())
                });
            }
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(suite: Suite, trials: u64, depth: usize) -> SuiteReport {
        let cfg = SuiteConfig::new(suite, trials, 5).with_tree(TreeShape::Uniform(2), depth);
        run_suite(&cfg).unwrap()
    }

    #[test]
    fn every_suite_passes_small() {
        for suite in Suite::ALL {
            let report = run(suite, 8, 6);
            assert!(report.passed, "{suite}: {:?}", report.failures);
            assert!(report.checks > 0);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        for suite in [Suite::Embedding, Suite::Sandwich, Suite::Isometry] {
            let a = serde_json::to_string(&run(suite, 6, 5)).unwrap();
            let b = serde_json::to_string(&run(suite, 6, 5)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn generated_symbols_materialize() {
        let tree = Arc::new(TreeTruncation::uniform(2, 8).unwrap());
        for trial in 0..200 {
            let mut rng = trial_rng(9, trial);
            let symbol = random_symbol(&tree, &mut rng);
            let (psi, _) = symbol.materialize(&tree).unwrap();
            assert!(psi.sup_abs().is_finite());
        }
    }

    #[test]
    fn tally_records_failures() {
        let mut t = Tally::new();
        t.check(0.5, || unreachable!());
        t.check(-0.25, || ("x".into(), None, 3));
        t.check(f64::NAN, || ("nan".into(), None, 0));
        assert_eq!((t.checks, t.failure_count), (3, 2));
        assert_eq!(t.failures[0].slack, -0.25);
    }

    #[test]
    fn shallow_trees_are_rejected() {
        let cfg = SuiteConfig::new(Suite::Tails, 2, 1).with_tree(TreeShape::Uniform(2), 3);
        assert!(matches!(run_suite(&cfg), Err(VerifyError::TooShallow { .. })));
    }
}
