//! Exact operator norm of `M_ψ : 𝓛^(m) → 𝓛^(n)` restricted to a truncation.
//!
//! The unit ball is `{f : |f(o)| + sup_u |f'(u)| Λ_m(|u|) ≤ 1}` and the
//! objective is `|ψ(o) f(o)| + max_v |(ψf)'(v)| Λ_n(|v|)` with
//!
//! ```text
//! (ψf)'(v) = ψ'(v) f(v) + ψ(v⁻) f'(v)
//!          = ψ'(v) (f(o) + Σ_{o < u < v} f'(u)) + ψ(v) f'(v).
//! ```
//!
//! The maximum over `f` and the maximum over `v` commute. For a fixed `v`
//! and `|f(o)| = t`, each `|f'(u)|` is at most `(1 − t)/Λ_m(|u|)`, only the
//! derivative on the root path to `v` enters the term at `v`, and choosing
//! phases that turn every summand into a nonnegative real reaches the
//! triangle-inequality bound. The root term `|ψ(o)| t` only sees `|f(o)|`,
//! so it is attained at the same time. The result is affine in `t`, hence
//!
//! ```text
//! ‖M_ψ‖ = max_{v, t ∈ {0, 1}} |ψ(o)| t
//!         + Λ_n(|v|) [ |ψ'(v)| (t + (1 − t) Σ_{1 ≤ j < |v|} 1/Λ_m(j))
//!                      + |ψ(v)| (1 − t) / Λ_m(|v|) ].
//! ```
//!
//! [`random_search`] samples the unit ball independently of this argument,
//! including interior `t`, and must never beat the closed form.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::analysis::{bounds_distinct, AnalysisError};
use crate::num17;
use crate::spaces::TreeFunction;
use crate::symbols::FunctionJson;
use crate::testfns;
use crate::tree::{TreeTruncation, VertexId};
use crate::weights::WeightTable;

fn serialize_function<S: Serializer>(f: &TreeFunction, s: S) -> Result<S::Ok, S::Error> {
    FunctionJson::from(f).serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormSolution {
    pub m: u32,
    pub n: u32,
    pub depth: usize,
    #[serde(with = "num17")]
    pub value: f64,
    /// Vertex whose term attains the maximum.
    pub v_star: VertexId,
    /// `|f(o)|` of the witness, 0 or 1.
    pub t_star: u8,
    /// `‖witness‖_m`, equal to 1.
    #[serde(with = "num17")]
    pub witness_norm: f64,
    /// `‖ψ · witness‖_n`, at least `value`.
    #[serde(with = "num17")]
    pub image_norm: f64,
    #[serde(serialize_with = "serialize_function")]
    pub witness: TreeFunction,
}

/// `conj(z)/|z|`, or 1 for `z = 0`.
fn align(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z.conj() / r
    }
}

/// `Σ_{1 ≤ j < d} 1/Λ_m(j)` for `d = 0..=D` (entries 0 and 1 are zero).
fn path_sums(table: &WeightTable, m: u32) -> Vec<f64> {
    let depth = table.depth();
    let mut sums = vec![0.0; depth + 1];
    for d in 2..=depth {
        sums[d] = sums[d - 1] + 1.0 / table.lambda(m, d - 1);
    }
    sums
}

/// The norm-one function aligned with the term at `v` for `|f(o)| = t`,
/// `0 <= t <= 1`. Supported on the root path to `v` (constant below it).
pub fn aligned_path_function(psi: &TreeFunction, m: u32, index: usize, t: f64) -> TreeFunction {
    let tree = psi.tree();
    let table = WeightTable::new(m, tree.depth());
    let j = tree.depth_of(index);
    assert!(j >= 1, "aligned functions are built for non-root vertices");
    let parent = tree.parent_index_in_sphere(index, j);
    let here = psi.value_in_sphere(index, j);
    let slope = align(here - psi.value_in_sphere(parent, j - 1));
    let last = align(here);
    let mut derivative = vec![Complex64::new(0.0, 0.0); tree.vertex_count()];
    let path = tree.root_path(index);
    for (d, &u) in path.iter().enumerate().skip(1) {
        let phase = if u == index { last } else { slope };
        derivative[u] = phase * ((1.0 - t) / table.lambda(m, d));
    }
    TreeFunction::from_derivative(tree.clone(), slope * t, &derivative).expect("length matches")
}

pub fn exact_operator_norm(psi: &TreeFunction, m: u32, n: u32) -> NormSolution {
    let tree = psi.tree();
    let depth = tree.depth();
    let table = WeightTable::new(m.max(n), depth);
    let sums = path_sums(&table, m);
    let root = psi.root_value().norm();
    let radial = psi.is_radial();

    let mut best = (f64::NEG_INFINITY, 1usize, 1u8);
    for (j, &sum) in sums.iter().enumerate().skip(1) {
        let lam_n = table.lambda(n, j);
        let lam_m = table.lambda(m, j);
        let range = tree.sphere_range(j);
        let range = if radial { range.start..range.start + 1 } else { range };
        for i in range {
            let p = tree.parent_index_in_sphere(i, j);
            let here = psi.value_in_sphere(i, j);
            let slope = (here - psi.value_in_sphere(p, j - 1)).norm();
            let at_one = root + slope * lam_n;
            let at_zero = (slope * sum + here.norm() / lam_m) * lam_n;
            if at_one > best.0 {
                best = (at_one, i, 1);
            }
            if at_zero > best.0 {
                best = (at_zero, i, 0);
            }
        }
    }
    let (value, index, t_star) = best;
    let witness = if t_star == 1 {
        TreeFunction::constant(tree.clone(), Complex64::new(1.0, 0.0))
    } else {
        aligned_path_function(psi, m, index, 0.0)
    };
    let witness_norm = witness.norm_with(m, &table).total;
    let image_norm = psi.mul(&witness).norm_with(n, &table).total;
    NormSolution {
        m,
        n,
        depth,
        value,
        v_star: tree.vertex_at(index),
        t_star,
        witness_norm,
        image_norm,
        witness,
    }
}

/// Outcome of [`random_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    /// Largest `‖ψf‖_n` over all sampled unit-norm `f`.
    #[serde(with = "num17")]
    pub value: f64,
    /// Largest value among samples with `0 < |f(o)| < 1`.
    #[serde(with = "num17")]
    pub interior_t_value: f64,
    pub best_trial: u64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
enum SampleKind {
    Constant,
    Dense,
    AlignedPath,
    Sparse,
    ExtremalTestFunction,
}

const KINDS: [SampleKind; 5] = [
    SampleKind::Constant,
    SampleKind::Dense,
    SampleKind::AlignedPath,
    SampleKind::Sparse,
    SampleKind::ExtremalTestFunction,
];

fn random_unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
}

fn random_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Draws one function (not yet normalized) and whether its construction
/// fixed an interior `|f(o)|`.
fn draw(
    kind: SampleKind,
    psi: &TreeFunction,
    m: u32,
    table: &WeightTable,
    rng: &mut ChaCha8Rng,
) -> (TreeFunction, bool) {
    let tree: &Arc<TreeTruncation> = psi.tree();
    let count = tree.vertex_count();
    let depth = tree.depth();
    let random_vertex = |rng: &mut ChaCha8Rng| rng.random_range(1..count);
    match kind {
        SampleKind::Constant => (TreeFunction::constant(tree.clone(), random_phase(rng)), false),
        SampleKind::Dense => {
            let t = rng.random::<f64>();
            let mut d = vec![Complex64::new(0.0, 0.0); count];
            for j in 1..=depth {
                let w = table.lambda(m, j);
                for i in tree.sphere_range(j) {
                    d[i] = random_unit_disk(rng) / w;
                }
            }
            let f = TreeFunction::from_derivative(tree.clone(), random_phase(rng) * t, &d).unwrap();
            (f, false)
        }
        SampleKind::AlignedPath => {
            let index = random_vertex(rng);
            // strictly inside (0, 1)
            let t = rng.random_range(1e-6..1.0 - 1e-6);
            let mut f = aligned_path_function(psi, m, index, t);
            if rng.random_bool(0.5) {
                // scramble the phases of the derivative but keep the moduli
                let mut d = f.derivative().to_vertex_values();
                for z in d.iter_mut().filter(|z| z.norm() > 0.0) {
                    *z *= random_phase(rng);
                }
                let root = f.root_value() * random_phase(rng);
                f = TreeFunction::from_derivative(tree.clone(), root, &d).unwrap();
            }
            (f, true)
        }
        SampleKind::Sparse => {
            let t = rng.random::<f64>();
            let mut d = vec![Complex64::new(0.0, 0.0); count];
            let picks = rng.random_range(1..=depth.min(count - 1).max(1));
            for _ in 0..picks {
                let i = random_vertex(rng);
                d[i] = random_phase(rng) / table.lambda(m, tree.depth_of(i));
            }
            let f = TreeFunction::from_derivative(tree.clone(), random_phase(rng) * t, &d).unwrap();
            (f, false)
        }
        SampleKind::ExtremalTestFunction => {
            let v = tree.vertex_at(random_vertex(rng));
            let f = match rng.random_range(0..5) {
                0 if v.len() < depth => testfns::make_fv(&v, m, tree).unwrap(),
                1 => testfns::make_g_radial(m, tree),
                2 => testfns::make_gk(&v, m, tree).unwrap(),
                3 if v.len() > 3 => testfns::make_hk(&v, m, tree).unwrap(),
                _ => testfns::make_chi(&v, tree).unwrap(),
            };
            (f.scale(random_phase(rng)), false)
        }
    }
}

/// Lower bound on the exact norm from `trials` random unit-norm functions.
/// Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
/// result does not depend on the number of worker threads. Trial 0 is
/// always `f ≡ 1`.
pub fn random_search(psi: &TreeFunction, m: u32, n: u32, trials: u64, seed: u64) -> OracleResult {
    random_search_with(psi, m, n, trials, seed, &[])
}

/// As [`random_search`], additionally evaluating the given `extra`
/// functions (normalized first).
pub fn random_search_with(
    psi: &TreeFunction,
    m: u32,
    n: u32,
    trials: u64,
    seed: u64,
    extra: &[TreeFunction],
) -> OracleResult {
    let table = WeightTable::new(m.max(n), psi.tree().depth());
    let evaluate = |f: &TreeFunction| -> Option<f64> {
        let norm = f.norm_with(m, &table).total;
        if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
            return None;
        }
        let unit = f.scale(Complex64::new(1.0 / norm, 0.0));
        Some(psi.mul(&unit).norm_with(n, &table).total)
    };

    // (value, interior value, trial); ties keep the lower trial index
    type Acc = (f64, f64, u64);
    let combine = |a: Acc, b: Acc| -> Acc {
        let (value, trial) = if b.0 > a.0 || (b.0 == a.0 && b.2 < a.2) {
            (b.0, b.2)
        } else {
            (a.0, a.2)
        };
        (value, a.1.max(b.1), trial)
    };
    let identity = || (f64::NEG_INFINITY, f64::NEG_INFINITY, u64::MAX);

    let sampled = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (f, interior) = if trial == 0 {
                (TreeFunction::constant(psi.tree().clone(), Complex64::new(1.0, 0.0)), false)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let kind = KINDS[rng.random_range(0..KINDS.len())];
                draw(kind, psi, m, &table, &mut rng)
            };
            match evaluate(&f) {
                Some(v) => (v, if interior { v } else { f64::NEG_INFINITY }, trial),
                None => identity(),
            }
        })
        .reduce(identity, combine);

    let with_extra = extra
        .iter()
        .enumerate()
        .filter_map(|(k, f)| evaluate(f).map(|v| (v, f64::NEG_INFINITY, trials + k as u64)))
        .fold(sampled, combine);

    OracleResult {
        value: with_extra.0,
        interior_t_value: with_extra.1,
        best_trial: with_extra.2,
        trials,
        seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    #[serde(with = "num17")]
    pub lower: f64,
    #[serde(with = "num17")]
    pub exact: f64,
    #[serde(with = "num17")]
    pub upper: f64,
    /// `min(exact − lower, upper − exact)`.
    #[serde(with = "num17")]
    pub slack: f64,
}

pub const SANDWICH_TOL: f64 = 1e-9;

/// Checks `‖ψ‖_n ≤ exact ≤ |ψ(o)| + μ + ν` within [`SANDWICH_TOL`].
pub fn verify_sandwich(psi: &TreeFunction, m: u32, n: u32, symbol: &str) -> Result<SandwichReport, AnalysisError> {
    let bounds = bounds_distinct(psi, m, n)?;
    let exact = exact_operator_norm(psi, m, n).value;
    let report = SandwichReport {
        lower: bounds.lower,
        exact,
        upper: bounds.upper,
        slack: (exact - bounds.lower).min(bounds.upper - exact),
    };
    if report.slack < -SANDWICH_TOL {
        return Err(AnalysisError::SandwichViolated {
            symbol: symbol.to_string(),
            depth: psi.tree().depth(),
            lower: report.lower,
            exact,
            upper: report.upper,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Symbol;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tree(b: u32, d: usize) -> Arc<TreeTruncation> {
        Arc::new(TreeTruncation::uniform(b, d).unwrap())
    }

    /// Brute force over the closed form's ingredients, vertex by vertex and
    /// with a fine grid of `t`, using full norm computations on the aligned
    /// functions rather than the formula.
    fn brute_force(psi: &TreeFunction, m: u32, n: u32) -> f64 {
        let tree = psi.tree();
        let mut best: f64 = 0.0;
        for i in 1..tree.vertex_count() {
            for step in 0..=20 {
                let t = step as f64 / 20.0;
                let f = aligned_path_function(psi, m, i, t);
                assert!((f.norm(m).total - 1.0).abs() < 1e-12);
                best = best.max(psi.mul(&f).norm(n).total);
            }
        }
        best
    }

    #[test]
    fn unit_symbol_with_m_above_n() {
        let t = tree(2, 6);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        for (m, n) in [(1, 0), (2, 0), (3, 1), (2, 1)] {
            let s = exact_operator_norm(&one, m, n);
            assert_eq!(s.value, 1.0);
            assert_eq!(s.t_star, 1);
            assert_eq!(s.witness, one);
        }
    }

    #[test]
    fn chi_o_symbol() {
        let t = tree(2, 6);
        let psi = testfns::make_chi(&VertexId::root(), &t).unwrap();
        for (m, n) in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)] {
            let s = exact_operator_norm(&psi, m, n);
            assert_eq!(s.value, 2.0);
            assert_eq!(s.t_star, 1);
            assert_eq!(psi.mul(&s.witness).norm(n).total, 2.0);
        }
    }

    #[test]
    fn zero_symbol() {
        let t = tree(2, 4);
        assert_eq!(exact_operator_norm(&TreeFunction::zero(t), 0, 1).value, 0.0);
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let t = tree(2, 5);
        let values: Vec<_> = (0..t.vertex_count())
            .map(|i| Complex64::new((i as f64 * 1.3).sin() * 2.0, (i as f64 * 0.7).cos()))
            .collect();
        let psi = TreeFunction::from_values(t.clone(), values).unwrap();
        for (m, n) in [(0, 1), (1, 0), (2, 1), (1, 1)] {
            let s = exact_operator_norm(&psi, m, n);
            let bf = brute_force(&psi, m, n);
            assert!((s.value - bf).abs() < 1e-9, "({m},{n}) {} vs {bf}", s.value);
            assert!((s.witness_norm - 1.0).abs() < 1e-12);
            assert!(s.image_norm >= s.value - 1e-9);
        }
    }

    #[test]
    fn radial_fast_path_agrees_with_vertexwise() {
        let t = tree(3, 5);
        let (psi, _) = Symbol::radial("exp(-x) * Lambda(2, x) + 0.3").unwrap().materialize(&t).unwrap();
        let flat = TreeFunction::from_values(t.clone(), psi.to_vertex_values()).unwrap();
        for (m, n) in [(0, 2), (2, 0), (1, 3)] {
            let a = exact_operator_norm(&psi, m, n);
            let b = exact_operator_norm(&flat, m, n);
            assert_eq!(a.value, b.value);
            assert_eq!(a.v_star, b.v_star);
        }
    }

    #[test]
    fn oracle_never_beats_exact_and_finds_witness() {
        let t = tree(2, 6);
        let (psi, _) = Symbol::radial("1 + sqrt(x)/ell(1,x)").unwrap().materialize(&t).unwrap();
        for (m, n) in [(0, 1), (2, 1)] {
            let exact = exact_operator_norm(&psi, m, n);
            let oracle = random_search(&psi, m, n, 400, 3);
            assert!(oracle.value <= exact.value + 1e-9);
            assert!(oracle.interior_t_value <= exact.value + 1e-9);
            let injected = random_search_with(&psi, m, n, 10, 3, std::slice::from_ref(&exact.witness));
            assert!((injected.value - exact.value).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_is_deterministic_and_finds_constants() {
        let t = tree(2, 6);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        let a = random_search(&one, 2, 0, 1000, 11);
        let b = random_search(&one, 2, 0, 1000, 11);
        assert_eq!(a, b);
        assert!((a.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sandwich_examples() {
        let t = tree(2, 8);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        let r = verify_sandwich(&one, 1, 0, "1").unwrap();
        assert_eq!((r.lower, r.upper), (1.0, 2.0));
        assert!(r.lower <= r.exact && r.exact <= r.upper);
        let r = verify_sandwich(&TreeFunction::zero(t.clone()), 1, 0, "0").unwrap();
        assert_eq!((r.lower, r.exact, r.upper), (0.0, 0.0, 0.0));
        assert!(matches!(verify_sandwich(&one, 1, 1, "1"), Err(AnalysisError::SameIndex(1))));
    }

    #[test]
    fn monotone_in_depth_and_homogeneous() {
        let s = Symbol::radial("sqrt(x) + 1/Lambda(2,x)").unwrap();
        for (m, n) in [(0, 1), (1, 0), (2, 1)] {
            let mut last = 0.0;
            for d in [4, 6, 8] {
                let (psi, _) = s.materialize(&tree(2, d)).unwrap();
                let v = exact_operator_norm(&psi, m, n).value;
                assert!(v >= last);
                last = v;
                let k = Complex64::new(-1.5, 2.0);
                let scaled = exact_operator_norm(&psi.scale(k), m, n).value;
                assert!((scaled - k.norm() * v).abs() <= 1e-12 * scaled.max(1.0));
                assert!(v >= psi.norm(n).total - 1e-12);
            }
        }
    }
}
