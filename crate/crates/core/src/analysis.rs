//! Quantities attached to a multiplication operator `M_ψ : 𝓛^(m) → 𝓛^(n)`
//! on a truncation.
//!
//! * pointwise `μ(v) = |ψ'(v)| ℓ_m(|v|) Λ_n(|v|)` and
//!   `ν(v) = |ψ(v⁻)| Λ_n(|v|) / Λ_m(|v|)`, with per-sphere maxima and suprema;
//! * norm bounds, `‖ψ‖_n ≤ ‖M_ψ‖ ≤ |ψ(o)| + μ + ν` for `m ≠ n` and
//!   `max{‖ψ‖_k, ‖ψ‖_∞} ≤ ‖M_ψ‖ ≤ ‖ψ‖_∞ + sup |ψ'| Λ_{k+1}` for `m = n = k`;
//! * a tail classification of the profiles (heuristic: compactness is a
//!   limit statement and a truncation only shows finitely many spheres);
//! * the isometry defect over the canonical test functions.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{self, NormSolution};
use crate::num17;
use crate::spaces::TreeFunction;
use crate::symbols::RootConvention;
use crate::tree::VertexId;
use crate::weights::WeightTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("this computation needs distinct space indices, got m = n = {0}")]
    SameIndex(u32),
    #[error("isometry test set needs depth >= 3, got {0}")]
    TooShallow(usize),
    #[error(
        "sandwich violated for {symbol} at depth {depth}: lower {lower}, exact {exact}, upper {upper}"
    )]
    SandwichViolated {
        symbol: String,
        depth: usize,
        lower: f64,
        exact: f64,
        upper: f64,
    },
}

/// Per-sphere maxima of `μ(v)` and `ν(v)`. Entry `j - 1` is sphere `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuNuProfile {
    pub m: u32,
    pub n: u32,
    pub depth: usize,
    #[serde(with = "num17::vec")]
    pub mu_by_depth: Vec<f64>,
    #[serde(with = "num17::vec")]
    pub nu_by_depth: Vec<f64>,
    #[serde(with = "num17")]
    pub mu_sup: f64,
    #[serde(with = "num17")]
    pub nu_sup: f64,
    pub mu_argmax: VertexId,
    pub nu_argmax: VertexId,
}

/// `(μ(v), ν(v))` at a single non-root vertex index.
pub fn pointwise(psi: &TreeFunction, m: u32, n: u32, index: usize) -> (f64, f64) {
    let tree = psi.tree();
    let j = tree.depth_of(index);
    assert!(j >= 1, "μ and ν are defined on T \\ {{o}}");
    let table = WeightTable::new(m.max(n), tree.depth());
    let parent = tree.parent_index_in_sphere(index, j);
    let here = psi.value_in_sphere(index, j);
    let up = psi.value_in_sphere(parent, j - 1);
    let mu = (here - up).norm() * table.ell(m, j) * table.lambda(n, j);
    let nu = up.norm() * table.lambda(n, j) / table.lambda(m, j);
    (mu, nu)
}

pub fn mu_nu_profile(psi: &TreeFunction, m: u32, n: u32) -> MuNuProfile {
    let tree = psi.tree();
    let depth = tree.depth();
    let table = WeightTable::new(m.max(n), depth);
    let mut mu_by_depth = Vec::with_capacity(depth);
    let mut nu_by_depth = Vec::with_capacity(depth);
    let mut mu_best = (f64::NEG_INFINITY, 1);
    let mut nu_best = (f64::NEG_INFINITY, 1);
    for j in 1..=depth {
        let mu_w = table.ell(m, j) * table.lambda(n, j);
        let nu_w = table.lambda(n, j) / table.lambda(m, j);
        let range = tree.sphere_range(j);
        let (mu_j, nu_j) = match psi.radial_values() {
            Some(v) => {
                let first = range.start;
                (((v[j] - v[j - 1]).norm() * mu_w, first), (v[j - 1].norm() * nu_w, first))
            }
            None => {
                let mut mu_j = (f64::NEG_INFINITY, range.start);
                let mut nu_j = (f64::NEG_INFINITY, range.start);
                for i in range {
                    let p = tree.parent_index_in_sphere(i, j);
                    let here = psi.value_in_sphere(i, j);
                    let up = psi.value_in_sphere(p, j - 1);
                    let mu = (here - up).norm() * mu_w;
                    let nu = up.norm() * nu_w;
                    if mu > mu_j.0 {
                        mu_j = (mu, i);
                    }
                    if nu > nu_j.0 {
                        nu_j = (nu, i);
                    }
                }
                (mu_j, nu_j)
            }
        };
        mu_by_depth.push(mu_j.0);
        nu_by_depth.push(nu_j.0);
        if mu_j.0 > mu_best.0 {
            mu_best = mu_j;
        }
        if nu_j.0 > nu_best.0 {
            nu_best = nu_j;
        }
    }
    MuNuProfile {
        m,
        n,
        depth,
        mu_by_depth,
        nu_by_depth,
        mu_sup: mu_best.0,
        nu_sup: nu_best.0,
        mu_argmax: tree.vertex_at(mu_best.1),
        nu_argmax: tree.vertex_at(nu_best.1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBounds {
    #[serde(with = "num17")]
    pub lower: f64,
    #[serde(with = "num17")]
    pub upper: f64,
}

/// Bounds for `m ≠ n`: `‖ψ‖_n` and `|ψ(o)| + μ + ν`.
pub fn bounds_distinct(psi: &TreeFunction, m: u32, n: u32) -> Result<NormBounds, AnalysisError> {
    if m == n {
        return Err(AnalysisError::SameIndex(m));
    }
    let profile = mu_nu_profile(psi, m, n);
    Ok(bounds_distinct_from(psi, &profile))
}

fn bounds_distinct_from(psi: &TreeFunction, profile: &MuNuProfile) -> NormBounds {
    NormBounds {
        lower: psi.norm(profile.n).total,
        upper: psi.root_value().norm() + profile.mu_sup + profile.nu_sup,
    }
}

/// Bounds for `m = n = k`: `max{‖ψ‖_k, ‖ψ‖_∞}` and
/// `‖ψ‖_∞ + sup |ψ'(v)| Λ_{k+1}(|v|)`.
pub fn bounds_equal(psi: &TreeFunction, k: u32) -> NormBounds {
    let table = WeightTable::new(k + 1, psi.tree().depth());
    let sup = psi.sup_abs();
    let lower = psi.norm_with(k, &table).total.max(sup);
    let upper = sup + psi.norm_with(k + 1, &table).seminorm;
    NormBounds { lower, upper }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailClass {
    Vanishing,
    Bounded,
    Growing,
    Inconclusive,
}

/// Thresholds for [`classify_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailConfig {
    /// Absolute level under which a nonincreasing tail counts as vanishing.
    #[serde(with = "num17")]
    pub eps_tail: f64,
    /// Factor separating a trend from noise (default 2).
    #[serde(with = "num17")]
    pub trend_factor: f64,
    /// Tail maxima within this factor of the head maxima count as bounded.
    #[serde(with = "num17")]
    pub band_factor: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        Self {
            eps_tail: 1e-3,
            trend_factor: 2.0,
            band_factor: 10.0,
        }
    }
}

/// Classifies a per-depth series by comparing its first and last quarters
/// (at least two entries each).
///
/// * vanishing: the last quarter is nonincreasing and either lies entirely
///   below `eps_tail`, or strictly decreases and ends at most
///   `1 / trend_factor` of the first-quarter maximum;
/// * growing: the last-quarter minimum exceeds `trend_factor` times the
///   first-quarter maximum, or the last quarter strictly increases and ends
///   at least `trend_factor` times the first-quarter minimum;
/// * bounded: the last-quarter maximum is within `band_factor` of the
///   first-quarter maximum, in either direction;
/// * inconclusive otherwise.
pub fn classify_series(series: &[f64], cfg: &TailConfig) -> TailClass {
    let len = series.len();
    if len == 0 {
        return TailClass::Inconclusive;
    }
    let q = len.div_ceil(4).max(2).min(len);
    let head = &series[..q];
    let tail = &series[len - q..];
    let max = |s: &[f64]| s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
    let head_max = max(head);
    let head_min = min(head);
    let tail_max = max(tail);
    let tail_min = min(tail);
    let last = series[len - 1];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let strictly_decreasing = tail.windows(2).all(|w| w[1] < w[0]);
    let strictly_increasing = tail.windows(2).all(|w| w[1] > w[0]);

    if nonincreasing && tail_max < cfg.eps_tail {
        return TailClass::Vanishing;
    }
    if strictly_decreasing && last * cfg.trend_factor <= head_max {
        return TailClass::Vanishing;
    }
    if tail_min > cfg.trend_factor * head_max {
        return TailClass::Growing;
    }
    if strictly_increasing && head_min > 0.0 && last >= cfg.trend_factor * head_min {
        return TailClass::Growing;
    }
    if head_max > 0.0 && tail_max <= cfg.band_factor * head_max && tail_max * cfg.band_factor >= head_max {
        return TailClass::Bounded;
    }
    TailClass::Inconclusive
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    /// Always `"heuristic"`: finite profiles suggest, never decide, limits.
    pub method: &'static str,
    pub config: TailConfig,
    pub mu: TailClass,
    pub nu: TailClass,
    pub joint: TailClass,
}

pub fn classify_tail(profile: &MuNuProfile, cfg: &TailConfig) -> TailReport {
    let mu = classify_series(&profile.mu_by_depth, cfg);
    let nu = classify_series(&profile.nu_by_depth, cfg);
    use TailClass::*;
    let joint = match (mu, nu) {
        (Vanishing, Vanishing) => Vanishing,
        (Growing, _) | (_, Growing) => Growing,
        (Vanishing | Bounded, Vanishing | Bounded) => Bounded,
        _ => Inconclusive,
    };
    TailReport {
        method: "heuristic",
        config: *cfg,
        mu,
        nu,
        joint,
    }
}

/// Deviation from norm preservation over the canonical test functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    /// Largest `|‖ψf‖_n − ‖f‖_m|` over `f ∈ {1, ½χ_o, χ_w / ‖χ_w‖_m : 2 ≤ |w| ≤ D − 1}`.
    #[serde(with = "num17")]
    pub defect: f64,
    #[serde(with = "num17")]
    pub one: f64,
    #[serde(with = "num17")]
    pub half_chi_o: f64,
    /// Largest normalized point-mass contribution.
    #[serde(with = "num17")]
    pub chi_normalized: f64,
    /// `max_{|w| = d} |‖ψχ_w‖_n − ‖χ_w‖_m|` for unnormalized `χ_w`;
    /// entry `i` is depth `d = i + 2`.
    #[serde(with = "num17::vec")]
    pub chi_defect_by_depth: Vec<f64>,
}

/// `‖χ_w‖_k` for `1 <= |w| = d < D`: the larger of the terms at `w` and at
/// its children.
fn chi_norm(table: &WeightTable, k: u32, d: usize) -> f64 {
    table.lambda(k, d).max(table.lambda(k, d + 1))
}

pub fn isometry_defect(psi: &TreeFunction, m: u32, n: u32) -> Result<IsometryReport, AnalysisError> {
    if m == n {
        return Err(AnalysisError::SameIndex(m));
    }
    let tree = psi.tree();
    let depth = tree.depth();
    if depth < 3 {
        return Err(AnalysisError::TooShallow(depth));
    }
    let table = WeightTable::new(m.max(n), depth);
    let one = (psi.norm_with(n, &table).total - 1.0).abs();
    // ψ·½χ_o = ½ψ(o)χ_o and ‖χ_o‖_n = 1 + Λ_n(1) = 2
    let half_chi_o = (psi.root_value().norm() - 1.0).abs();
    let mut chi_normalized: f64 = 0.0;
    let mut chi_defect_by_depth = Vec::with_capacity(depth - 2);
    for d in 2..depth {
        let norm_m = chi_norm(&table, m, d);
        let norm_n = chi_norm(&table, n, d);
        let abs_values: Box<dyn Iterator<Item = f64>> = match psi.radial_values() {
            Some(v) => Box::new(std::iter::once(v[d].norm())),
            None => Box::new(tree.sphere_range(d).map(|i| psi.value_in_sphere(i, d).norm())),
        };
        let mut raw: f64 = 0.0;
        for a in abs_values {
            raw = raw.max((a * norm_n - norm_m).abs());
            chi_normalized = chi_normalized.max((a * norm_n / norm_m - 1.0).abs());
        }
        chi_defect_by_depth.push(raw);
    }
    Ok(IsometryReport {
        defect: one.max(half_chi_o).max(chi_normalized),
        one,
        half_chi_o,
        chi_normalized,
        chi_defect_by_depth,
    })
}

/// Everything known about `M_ψ` on one truncation.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorReport {
    pub m: u32,
    pub n: u32,
    pub depth: usize,
    pub vertex_count: usize,
    pub symbol: String,
    pub root_convention: RootConvention,
    /// `"distinct"` or `"equal"`: which pair of bounds applies.
    pub bounds_kind: &'static str,
    pub bounds: NormBounds,
    pub profile: MuNuProfile,
    pub tail: TailReport,
    pub isometry: Option<IsometryReport>,
    pub exact: Option<NormSolution>,
}

pub fn analyze(
    psi: &TreeFunction,
    symbol: String,
    root_convention: RootConvention,
    m: u32,
    n: u32,
    tail_cfg: &TailConfig,
    with_exact: bool,
) -> OperatorReport {
    let profile = mu_nu_profile(psi, m, n);
    let (bounds_kind, bounds) = if m == n {
        ("equal", bounds_equal(psi, m))
    } else {
        ("distinct", bounds_distinct_from(psi, &profile))
    };
    let tail = classify_tail(&profile, tail_cfg);
    let isometry = isometry_defect(psi, m, n).ok();
    let exact = with_exact.then(|| exact::exact_operator_norm(psi, m, n));
    OperatorReport {
        m,
        n,
        depth: psi.tree().depth(),
        vertex_count: psi.tree().vertex_count(),
        symbol,
        root_convention,
        bounds_kind,
        bounds,
        profile,
        tail,
        isometry,
        exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::make_chi;
    use crate::tree::TreeTruncation;
    use crate::weights::{ell, lambda};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tree(b: u32, d: usize) -> Arc<TreeTruncation> {
        Arc::new(TreeTruncation::uniform(b, d).unwrap())
    }

    fn chi_o(t: &Arc<TreeTruncation>) -> TreeFunction {
        make_chi(&VertexId::root(), t).unwrap()
    }

    #[test]
    fn constant_symbol_profile() {
        let t = tree(2, 10);
        let psi = TreeFunction::constant(t.clone(), Complex64::new(0.0, -3.0));
        for (m, n) in [(0, 1), (2, 0), (1, 1), (3, 2)] {
            let p = mu_nu_profile(&psi, m, n);
            assert!(p.mu_by_depth.iter().all(|&x| x == 0.0));
            for (i, nu) in p.nu_by_depth.iter().enumerate() {
                let x = (i + 1) as f64;
                let expected = 3.0 * lambda(n, x).unwrap() / lambda(m, x).unwrap();
                assert!((nu - expected).abs() <= 1e-12 * expected);
            }
        }
    }

    #[test]
    fn unit_symbol_nu_is_nonincreasing_when_m_exceeds_n() {
        let t = tree(2, 12);
        let psi = TreeFunction::constant(t.clone(), c(1.0));
        for (m, n) in [(1, 0), (2, 0), (2, 1), (4, 1)] {
            let p = mu_nu_profile(&psi, m, n);
            assert!(p.nu_by_depth.iter().all(|&x| x <= 1.0));
            assert!(p.nu_by_depth.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn chi_o_profile() {
        let t = tree(2, 6);
        let psi = chi_o(&t);
        for (m, n) in [(0, 1), (1, 0), (2, 3), (3, 1)] {
            let p = mu_nu_profile(&psi, m, n);
            assert_eq!(p.mu_by_depth[0], ell(m, 1.0).unwrap());
            assert_eq!(p.nu_by_depth[0], 1.0);
            assert!(p.mu_by_depth[1..].iter().all(|&x| x == 0.0));
            assert!(p.nu_by_depth[1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn nu_reads_the_parent_value() {
        // ψ = 0 at the root, 2 at [0], 5 at [1], 7 at [0, 0], 0 elsewhere
        let t = tree(2, 3);
        let mut values = vec![c(0.0); t.vertex_count()];
        values[t.index_of(&"0".parse().unwrap()).unwrap()] = c(2.0);
        values[t.index_of(&"1".parse().unwrap()).unwrap()] = c(5.0);
        values[t.index_of(&"0/0".parse().unwrap()).unwrap()] = c(7.0);
        let psi = TreeFunction::from_values(t.clone(), values).unwrap();
        let (m, n) = (1, 2);
        // at [0, 0]: ν = |ψ([0])| Λ_2(2) / Λ_1(2) = 2 ℓ_1(2); μ = |7 − 2| ℓ_1(2) Λ_2(2)
        let idx = t.index_of(&"0/0".parse().unwrap()).unwrap();
        let (mu, nu) = pointwise(&psi, m, n, idx);
        let l1 = 1.0 + 2f64.ln();
        assert!((nu - 2.0 * l1).abs() < 1e-12);
        assert!((mu - 5.0 * l1 * 2.0 * l1).abs() < 1e-12);
        // at [1, 0]: parent value 5, ψ = 0
        let idx = t.index_of(&"1/0".parse().unwrap()).unwrap();
        let (mu, nu) = pointwise(&psi, m, n, idx);
        assert!((nu - 5.0 * l1).abs() < 1e-12);
        assert!((mu - 5.0 * l1 * 2.0 * l1).abs() < 1e-12);
        let p = mu_nu_profile(&psi, m, n);
        assert!((p.nu_by_depth[1] - 5.0 * l1).abs() < 1e-12);
        // deeper vertices below ψ = 7 dominate the supremum
        assert_eq!(p.nu_argmax.parent().unwrap(), "0/0".parse().unwrap());
        // depth 1: ν uses ψ(o) = 0 even though ψ([1]) = 5
        assert_eq!(p.nu_by_depth[0], 0.0);
    }

    #[test]
    fn distinct_bounds_examples() {
        let t = tree(2, 9);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        let b = bounds_distinct(&one, 1, 0).unwrap();
        assert_eq!(b.lower, 1.0);
        assert_eq!(b.upper, 2.0);
        let zero = TreeFunction::zero(t.clone());
        assert_eq!(bounds_distinct(&zero, 2, 1).unwrap(), NormBounds { lower: 0.0, upper: 0.0 });
        let b = bounds_distinct(&chi_o(&t), 0, 1).unwrap();
        assert_eq!(b.lower, 2.0);
        assert_eq!(b.upper, 3.0);
        assert_eq!(bounds_distinct(&one, 2, 2), Err(AnalysisError::SameIndex(2)));
    }

    #[test]
    fn equal_bounds_examples() {
        let t = tree(2, 10);
        let psi = TreeFunction::constant(t.clone(), Complex64::new(3.0, 4.0));
        for k in 0..4 {
            let b = bounds_equal(&psi, k);
            assert!((b.lower - 5.0).abs() < 1e-15 && (b.upper - 5.0).abs() < 1e-15);
        }
        let b = bounds_equal(&chi_o(&t), 0);
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        let (psi, _) = crate::symbols::Symbol::radial("1/ell(1,x)").unwrap().materialize(&t).unwrap();
        let b = bounds_equal(&psi, 1);
        assert!(b.lower.is_finite() && b.upper.is_finite() && b.lower <= b.upper);
    }

    #[test]
    fn tail_examples() {
        let cfg = TailConfig::default();
        let t = tree(1, 14);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        let r = classify_tail(&mu_nu_profile(&one, 2, 0), &cfg);
        assert_eq!((r.mu, r.nu, r.joint), (TailClass::Vanishing, TailClass::Vanishing, TailClass::Vanishing));
        let r = classify_tail(&mu_nu_profile(&one, 0, 1), &cfg);
        assert_eq!(r.nu, TailClass::Growing);
        assert_eq!(r.joint, TailClass::Growing);
        let r = classify_tail(&mu_nu_profile(&TreeFunction::zero(t.clone()), 0, 1), &cfg);
        assert_eq!(r.joint, TailClass::Vanishing);
        let r = classify_tail(&mu_nu_profile(&one, 1, 1), &cfg);
        assert_eq!(r.nu, TailClass::Bounded);
    }

    #[test]
    fn series_classification_rules() {
        let cfg = TailConfig::default();
        let s = |f: &dyn Fn(f64) -> f64| (1..=16).map(|j| f(j as f64)).collect::<Vec<_>>();
        assert_eq!(classify_series(&s(&|_| 0.0), &cfg), TailClass::Vanishing);
        assert_eq!(classify_series(&s(&|j| 1.0 / j), &cfg), TailClass::Vanishing);
        assert_eq!(classify_series(&s(&|j| j * j), &cfg), TailClass::Growing);
        assert_eq!(classify_series(&s(&|j| 1.0 + j.ln()), &cfg), TailClass::Growing);
        assert_eq!(classify_series(&s(&|_| 3.0), &cfg), TailClass::Bounded);
        assert_eq!(classify_series(&s(&|j| 2.0 - 1.0 / j), &cfg), TailClass::Bounded);
        assert_eq!(classify_series(&s(&|j| 1.0 + 1.0 / j), &cfg), TailClass::Bounded);
        // a spike at the end: neither a clean trend nor within the band
        let mut spiky = s(&|_| 1e-3);
        spiky[15] = 1.0;
        assert_eq!(classify_series(&spiky, &cfg), TailClass::Inconclusive);
        assert_eq!(classify_series(&[], &cfg), TailClass::Inconclusive);
    }

    #[test]
    fn chi_norm_matches_full_computation() {
        let t = tree(2, 6);
        let table = WeightTable::new(4, 6);
        for d in 1..6 {
            let w = VertexId::from_path(vec![1; d]);
            let f = make_chi(&w, &t).unwrap();
            for k in 0..4 {
                assert_eq!(chi_norm(&table, k, d), f.norm(k).total);
            }
        }
    }

    #[test]
    fn isometry_examples() {
        let t = tree(2, 6);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        let r = isometry_defect(&one, 0, 1).unwrap();
        // |‖χ_w‖_1 − ‖χ_w‖_0| = Λ_1(3) − 1 at |w| = 2
        assert!((r.chi_defect_by_depth[0] - 2.0).abs() < 1e-12);
        assert!(r.defect >= 2.0 - 1e-12);
        let zero = TreeFunction::zero(t.clone());
        for (m, n) in [(0, 1), (2, 1), (3, 0)] {
            assert_eq!(isometry_defect(&zero, m, n).unwrap().defect, 1.0);
        }
        for phase in [0.0, 1.0, 2.5] {
            let u = TreeFunction::constant(t.clone(), Complex64::from_polar(1.0, phase));
            for (m, n) in [(0u32, 1u32), (1, 0), (1, 2), (3, 1)] {
                let r = isometry_defect(&u, m, n).unwrap();
                let expected = (lambda(m, 3.0).unwrap() - lambda(n, 3.0).unwrap()).abs();
                assert!((r.chi_defect_by_depth[0] - expected).abs() < 1e-9);
                assert!(r.defect > 0.0);
            }
        }
        assert_eq!(isometry_defect(&one, 1, 1), Err(AnalysisError::SameIndex(1)));
        let shallow = tree(2, 2);
        assert_eq!(
            isometry_defect(&TreeFunction::zero(shallow), 0, 1),
            Err(AnalysisError::TooShallow(2))
        );
    }

    #[test]
    fn isometry_defect_matches_direct_norms_for_explicit_symbols() {
        let t = tree(2, 5);
        let values: Vec<_> = (0..t.vertex_count())
            .map(|i| Complex64::new((i as f64 * 0.37).cos(), (i as f64 * 0.11).sin()))
            .collect();
        let psi = TreeFunction::from_values(t.clone(), values).unwrap();
        let (m, n) = (2, 1);
        let r = isometry_defect(&psi, m, n).unwrap();
        let mut raw_by_depth = vec![0.0f64; 3];
        let mut normalized = 0.0f64;
        for i in 0..t.vertex_count() {
            let d = t.depth_of(i);
            if !(2..5).contains(&d) {
                continue;
            }
            let chi = make_chi(&t.vertex_at(i), &t).unwrap();
            let image = psi.mul(&chi).norm(n).total;
            let norm_m = chi.norm(m).total;
            raw_by_depth[d - 2] = raw_by_depth[d - 2].max((image - norm_m).abs());
            normalized = normalized.max((image / norm_m - 1.0).abs());
        }
        for (a, b) in r.chi_defect_by_depth.iter().zip(&raw_by_depth) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((r.chi_normalized - normalized).abs() < 1e-12);
    }
}
