//! Functions on a truncation, their discrete derivatives, and the norms of
//! the iterated logarithmic Lipschitz spaces.
//!
//! `‖f‖_k = |f(o)| + sup_{1 ≤ |v| ≤ D} |f'(v)| Λ_k(|v|)`, where the supremum
//! runs over the truncation only. Reports carry the depth `D` so results are
//! never mistaken for norms on the infinite tree.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::num17;
use crate::tree::{TreeError, TreeTruncation, VertexId};
use crate::weights::WeightTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq)]
enum Values {
    /// One value per depth `0..=D`.
    Radial(Vec<Complex64>),
    /// One value per vertex, breadth-first.
    Vertexwise(Vec<Complex64>),
}

/// A complex-valued function on every vertex of a truncation.
///
/// Radial functions are stored per depth, which lets derivatives and norms
/// run over `1..=D` instead of over every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeFunction {
    tree: Arc<TreeTruncation>,
    values: Values,
}

/// Norm of a function in `𝓛^(k)` restricted to a truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub k: u32,
    pub depth: usize,
    #[serde(with = "num17")]
    pub root_abs: f64,
    #[serde(with = "num17")]
    pub seminorm: f64,
    #[serde(with = "num17")]
    pub total: f64,
    /// First vertex (breadth-first) attaining the seminorm.
    pub argmax: VertexId,
}

impl TreeFunction {
    pub fn radial(tree: Arc<TreeTruncation>, per_depth: Vec<Complex64>) -> Result<Self, FunctionError> {
        let expected = tree.depth() + 1;
        if per_depth.len() != expected {
            return Err(FunctionError::Length {
                expected,
                got: per_depth.len(),
            });
        }
        Ok(Self {
            tree,
            values: Values::Radial(per_depth),
        })
    }

    pub fn from_values(tree: Arc<TreeTruncation>, values: Vec<Complex64>) -> Result<Self, FunctionError> {
        let expected = tree.vertex_count();
        if values.len() != expected {
            return Err(FunctionError::Length {
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            tree,
            values: Values::Vertexwise(values),
        })
    }

    pub fn constant(tree: Arc<TreeTruncation>, c: Complex64) -> Self {
        let n = tree.depth() + 1;
        Self {
            tree,
            values: Values::Radial(vec![c; n]),
        }
    }

    pub fn zero(tree: Arc<TreeTruncation>) -> Self {
        Self::constant(tree, Complex64::new(0.0, 0.0))
    }

    /// Radial function from a per-depth rule.
    pub fn radial_from_fn(tree: Arc<TreeTruncation>, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let per_depth = (0..=tree.depth()).map(&mut f).collect();
        Self {
            tree,
            values: Values::Radial(per_depth),
        }
    }

    /// Rebuilds `f` from `f(o)` and its derivative by summing along root paths.
    /// `derivative[0]` is ignored.
    pub fn from_derivative(
        tree: Arc<TreeTruncation>,
        root: Complex64,
        derivative: &[Complex64],
    ) -> Result<Self, FunctionError> {
        let n = tree.vertex_count();
        if derivative.len() != n {
            return Err(FunctionError::Length {
                expected: n,
                got: derivative.len(),
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        values[0] = root;
        for j in 1..=tree.depth() {
            for i in tree.sphere_range(j) {
                let p = tree.parent_index_in_sphere(i, j);
                values[i] = values[p] + derivative[i];
            }
        }
        Ok(Self {
            tree,
            values: Values::Vertexwise(values),
        })
    }

    pub fn tree(&self) -> &Arc<TreeTruncation> {
        &self.tree
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.values, Values::Radial(_))
    }

    /// Per-depth values when the function is stored radially.
    pub fn radial_values(&self) -> Option<&[Complex64]> {
        match &self.values {
            Values::Radial(v) => Some(v),
            Values::Vertexwise(_) => None,
        }
    }

    #[inline]
    pub fn value(&self, index: usize) -> Complex64 {
        match &self.values {
            Values::Radial(v) => v[self.tree.depth_of(index)],
            Values::Vertexwise(v) => v[index],
        }
    }

    /// Value at `index` when the caller already knows its depth.
    #[inline]
    pub fn value_in_sphere(&self, index: usize, depth: usize) -> Complex64 {
        match &self.values {
            Values::Radial(v) => v[depth],
            Values::Vertexwise(v) => v[index],
        }
    }

    pub fn value_at(&self, v: &VertexId) -> Result<Complex64, TreeError> {
        let i = self.tree.index_of(v)?;
        Ok(self.value(i))
    }

    pub fn root_value(&self) -> Complex64 {
        match &self.values {
            Values::Radial(v) => v[0],
            Values::Vertexwise(v) => v[0],
        }
    }

    /// Values on every vertex, breadth-first.
    pub fn to_vertex_values(&self) -> Vec<Complex64> {
        match &self.values {
            Values::Vertexwise(v) => v.clone(),
            Values::Radial(v) => {
                let mut out = Vec::with_capacity(self.tree.vertex_count());
                for (j, value) in v.iter().enumerate() {
                    out.extend(std::iter::repeat_n(*value, self.tree.sphere_size(j)));
                }
                out
            }
        }
    }

    fn map_pointwise(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert!(
            Arc::ptr_eq(&self.tree, &other.tree) || self.tree == other.tree,
            "functions live on different truncations"
        );
        let values = match (&self.values, &other.values) {
            (Values::Radial(a), Values::Radial(b)) => {
                Values::Radial(a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect())
            }
            _ => {
                let mut out = Vec::with_capacity(self.tree.vertex_count());
                for j in 0..=self.tree.depth() {
                    for i in self.tree.sphere_range(j) {
                        out.push(op(self.value_in_sphere(i, j), other.value_in_sphere(i, j)));
                    }
                }
                Values::Vertexwise(out)
            }
        };
        Self {
            tree: self.tree.clone(),
            values,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.map_pointwise(other, |a, b| a + b)
    }

    /// Pointwise product, i.e. the multiplication operator applied to `other`.
    pub fn mul(&self, other: &Self) -> Self {
        self.map_pointwise(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let values = match &self.values {
            Values::Radial(v) => Values::Radial(v.iter().map(|x| x * c).collect()),
            Values::Vertexwise(v) => Values::Vertexwise(v.iter().map(|x| x * c).collect()),
        };
        Self {
            tree: self.tree.clone(),
            values,
        }
    }

    /// `f'(o) = 0`, `f'(v) = f(v) - f(v⁻)`.
    pub fn derivative(&self) -> Self {
        let values = match &self.values {
            Values::Radial(v) => {
                let mut d = vec![Complex64::new(0.0, 0.0); v.len()];
                for j in 1..v.len() {
                    d[j] = v[j] - v[j - 1];
                }
                Values::Radial(d)
            }
            Values::Vertexwise(v) => {
                let mut d = vec![Complex64::new(0.0, 0.0); v.len()];
                for j in 1..=self.tree.depth() {
                    for i in self.tree.sphere_range(j) {
                        d[i] = v[i] - v[self.tree.parent_index_in_sphere(i, j)];
                    }
                }
                Values::Vertexwise(d)
            }
        };
        Self {
            tree: self.tree.clone(),
            values,
        }
    }

    /// `sup_{v ∈ T_D} |f(v)|`.
    pub fn sup_abs(&self) -> f64 {
        let values = match &self.values {
            Values::Radial(v) | Values::Vertexwise(v) => v,
        };
        values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|f'(v)| Λ_k(|v|)` over each sphere `1..=D`, with the first
    /// vertex attaining it. Entry `j - 1` describes sphere `j`.
    pub fn weighted_derivative_profile(&self, k: u32, table: &WeightTable) -> Vec<(f64, usize)> {
        let tree = &self.tree;
        let mut out = Vec::with_capacity(tree.depth());
        for j in 1..=tree.depth() {
            let w = table.lambda(k, j);
            match &self.values {
                Values::Radial(v) => {
                    out.push(((v[j] - v[j - 1]).norm() * w, tree.sphere_range(j).start));
                }
                Values::Vertexwise(v) => {
                    let mut best = (f64::NEG_INFINITY, 0);
                    for i in tree.sphere_range(j) {
                        let p = tree.parent_index_in_sphere(i, j);
                        let term = (v[i] - v[p]).norm() * w;
                        if term > best.0 {
                            best = (term, i);
                        }
                    }
                    out.push(best);
                }
            }
        }
        out
    }

    /// `‖f‖_k` on the truncation.
    pub fn norm(&self, k: u32) -> NormReport {
        let table = WeightTable::new(k, self.tree.depth());
        self.norm_with(k, &table)
    }

    pub fn norm_with(&self, k: u32, table: &WeightTable) -> NormReport {
        let mut seminorm = f64::NEG_INFINITY;
        let mut argmax = 1;
        for (term, i) in self.weighted_derivative_profile(k, table) {
            if term > seminorm {
                seminorm = term;
                argmax = i;
            }
        }
        let root_abs = self.root_value().norm();
        NormReport {
            k,
            depth: self.tree.depth(),
            root_abs,
            seminorm,
            total: root_abs + seminorm,
            argmax: self.tree.vertex_at(argmax),
        }
    }
}

/// Worst-case slack of the point-evaluation bound on `T_D \ {o}`:
/// `min_v (B_k(v) - |f(v)|)` with `B_0(v) = (1 + |v|)‖f‖_0` and
/// `B_k(v) = ℓ_k(|v|)‖f‖_k` for `k >= 1`.
pub fn check_point_bound(f: &TreeFunction, k: u32) -> f64 {
    point_bound_slack(f, k).0
}

/// As [`check_point_bound`], also returning the index of the first vertex
/// attaining the minimum.
pub fn point_bound_slack(f: &TreeFunction, k: u32) -> (f64, usize) {
    let tree = f.tree();
    let table = WeightTable::new(k, tree.depth());
    let norm = f.norm_with(k, &table).total;
    let mut worst = (f64::INFINITY, 1);
    for j in 1..=tree.depth() {
        let bound = if k == 0 {
            (1.0 + j as f64) * norm
        } else {
            table.ell(k, j) * norm
        };
        let range = tree.sphere_range(j);
        let range = if f.is_radial() { range.start..range.start + 1 } else { range };
        for i in range {
            let slack = bound - f.value_in_sphere(i, j).norm();
            if slack < worst.0 {
                worst = (slack, i);
            }
        }
    }
    worst
}

/// `(‖f‖_0, …, ‖f‖_kmax)`; this is nondecreasing since the weights increase in `k`.
pub fn embedding_chain(f: &TreeFunction, kmax: u32) -> Vec<f64> {
    let table = WeightTable::new(kmax, f.tree().depth());
    (0..=kmax).map(|k| f.norm_with(k, &table).total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tree(b: u32, d: usize) -> Arc<TreeTruncation> {
        Arc::new(TreeTruncation::uniform(b, d).unwrap())
    }

    fn chi(t: &Arc<TreeTruncation>, v: &VertexId) -> TreeFunction {
        let mut values = vec![c(0.0); t.vertex_count()];
        values[t.index_of(v).unwrap()] = c(1.0);
        TreeFunction::from_values(t.clone(), values).unwrap()
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let t = tree(2, 4);
        let d = TreeFunction::constant(t.clone(), Complex64::new(2.0, -1.0)).derivative();
        assert!(d.to_vertex_values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn derivative_of_indicator() {
        let t = tree(2, 4);
        let w: VertexId = "0/1".parse().unwrap();
        let d = chi(&t, &w).derivative();
        for i in 0..t.vertex_count() {
            let v = t.vertex_at(i);
            let expected = if v == w {
                1.0
            } else if !v.is_root() && v.parent().unwrap() == w {
                -1.0
            } else {
                0.0
            };
            assert_eq!(d.value(i), c(expected), "at {v}");
        }
    }

    #[test]
    fn derivative_of_length_is_one_off_root() {
        let t = tree(3, 3);
        let f = TreeFunction::radial_from_fn(t.clone(), |j| c(j as f64));
        let d = f.derivative();
        assert_eq!(d.value(0), c(0.0));
        for i in 1..t.vertex_count() {
            assert_eq!(d.value(i), c(1.0));
        }
        // same through the vertexwise path
        let g = TreeFunction::from_values(t.clone(), f.to_vertex_values()).unwrap();
        assert_eq!(g.derivative().to_vertex_values(), d.to_vertex_values());
    }

    #[test]
    fn norm_examples() {
        let t = tree(2, 6);
        for k in 0..5 {
            assert_eq!(TreeFunction::constant(t.clone(), c(1.0)).norm(k).total, 1.0);
            let half_chi_o = chi(&t, &VertexId::root()).scale(c(0.5));
            assert!((half_chi_o.norm(k).total - 1.0).abs() < 1e-15);
        }
        // ‖χ_w‖_m = Λ_m(|w| + 1): the children of w dominate
        let w: VertexId = "1/0".parse().unwrap();
        let f = chi(&t, &w);
        for m in 1..5 {
            let expected = crate::weights::lambda(m, 3.0).unwrap();
            let r = f.norm(m);
            assert!((r.total - expected).abs() < 1e-12 * expected);
            assert_eq!(r.argmax, "1/0/0".parse().unwrap());
        }
        assert_eq!(f.norm(0).total, 1.0);
    }

    #[test]
    fn argmax_ties_go_to_first_vertex() {
        let t = tree(2, 3);
        let f = TreeFunction::radial_from_fn(t.clone(), |j| c(j as f64));
        assert_eq!(f.norm(0).argmax, "0".parse().unwrap());
        let g = TreeFunction::from_values(t.clone(), f.to_vertex_values()).unwrap();
        assert_eq!(g.norm(0).argmax, "0".parse().unwrap());
    }

    #[test]
    fn radial_and_vertexwise_agree() {
        let t = tree(2, 7);
        let f = TreeFunction::radial_from_fn(t.clone(), |j| Complex64::new((j as f64).sqrt(), 0.3 * j as f64));
        let g = TreeFunction::from_values(t.clone(), f.to_vertex_values()).unwrap();
        for k in 0..4 {
            assert_eq!(f.norm(k), g.norm(k));
            assert_eq!(check_point_bound(&f, k), check_point_bound(&g, k));
        }
    }

    #[test]
    fn point_bound_examples() {
        let t = tree(2, 8);
        let one = TreeFunction::constant(t.clone(), c(1.0));
        for k in 0..4 {
            assert!(check_point_bound(&one, k) >= 0.0);
        }
        let len = TreeFunction::radial_from_fn(t.clone(), |j| c(j as f64));
        assert_eq!(len.norm(0).total, 1.0);
        assert!(check_point_bound(&len, 0) >= 1.0);
    }

    #[test]
    fn embedding_examples() {
        let t = tree(2, 5);
        let chain = embedding_chain(&TreeFunction::constant(t.clone(), Complex64::new(0.0, 3.0)), 4);
        assert!(chain.iter().all(|&x| (x - 3.0).abs() < 1e-15));
        let f = chi(&t, &"0/0".parse().unwrap());
        let chain = embedding_chain(&f, 4);
        for k in 1..4 {
            assert!(chain[k + 1] > chain[k]);
        }
    }

    #[test]
    fn from_derivative_reconstructs() {
        let t = tree(3, 4);
        let values: Vec<_> = (0..t.vertex_count())
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64).cos()))
            .collect();
        let f = TreeFunction::from_values(t.clone(), values.clone()).unwrap();
        let d = f.derivative().to_vertex_values();
        let g = TreeFunction::from_derivative(t.clone(), f.root_value(), &d).unwrap();
        for (a, b) in g.to_vertex_values().iter().zip(&values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let t = tree(2, 3);
        assert!(TreeFunction::from_values(t.clone(), vec![c(0.0); 3]).is_err());
        assert!(TreeFunction::radial(t, vec![c(0.0); 3]).is_err());
    }
}
