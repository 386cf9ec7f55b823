//! Extremal test functions: point masses `χ_v`, the normalized point masses
//! `f_v` and `g_k`, the radial functions `g` and `h_k`, and the constants
//! `1` and `½χ_o`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::spaces::TreeFunction;
use crate::tree::{TreeError, TreeTruncation, VertexId};
use crate::weights::{ell_unchecked, lambda_unchecked};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TestFnError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{kind} needs a vertex other than the root")]
    RootVertex { kind: &'static str },
    #[error("{kind} at {vertex} needs depth {needed}, truncation has {depth}")]
    TooDeep {
        kind: &'static str,
        vertex: VertexId,
        needed: usize,
        depth: usize,
    },
    #[error("h_k needs |v_k| > 3, got {0}")]
    HkTooShallow(usize),
    #[error("{kind} needs a vertex")]
    MissingVertex { kind: &'static str },
    #[error("unknown test function kind `{0}`")]
    UnknownKind(String),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `χ_v`: 1 at `v`, 0 elsewhere.
pub fn make_chi(v: &VertexId, tree: &Arc<TreeTruncation>) -> Result<TreeFunction, TestFnError> {
    let index = tree.index_of(v)?;
    let mut values = vec![c(0.0); tree.vertex_count()];
    values[index] = c(1.0);
    Ok(TreeFunction::from_values(tree.clone(), values).expect("length matches"))
}

/// `f_v = χ_v / Λ_m(|v| + 1)`; requires `1 <= |v| <= D - 1` so the children
/// of `v` are present.
pub fn make_fv(v: &VertexId, m: u32, tree: &Arc<TreeTruncation>) -> Result<TreeFunction, TestFnError> {
    if v.is_root() {
        return Err(TestFnError::RootVertex { kind: "f_v" });
    }
    tree.index_of(v)?;
    if v.len() + 1 > tree.depth() {
        return Err(TestFnError::TooDeep {
            kind: "f_v",
            vertex: v.clone(),
            needed: v.len() + 1,
            depth: tree.depth(),
        });
    }
    let scale = 1.0 / lambda_unchecked(m, (v.len() + 1) as f64);
    Ok(make_chi(v, tree)?.scale(c(scale)))
}

/// `g(o) = 0`, `g(v) = ℓ_m(|v|)` otherwise.
pub fn make_g_radial(m: u32, tree: &Arc<TreeTruncation>) -> TreeFunction {
    TreeFunction::radial_from_fn(tree.clone(), |j| {
        if j == 0 {
            c(0.0)
        } else {
            c(ell_unchecked(m, j as f64))
        }
    })
}

/// `g_k = χ_{v_k⁻} / Λ_m(|v_k|)`.
pub fn make_gk(vk: &VertexId, m: u32, tree: &Arc<TreeTruncation>) -> Result<TreeFunction, TestFnError> {
    let parent = vk.parent().map_err(|_| TestFnError::RootVertex { kind: "g_k" })?;
    tree.index_of(vk)?;
    let scale = 1.0 / lambda_unchecked(m, vk.len() as f64);
    Ok(make_chi(&parent, tree)?.scale(c(scale)))
}

/// The radial function
/// `h_k(w) = 0` for `|w| <= 1`, `ℓ_m(|w|)² / ℓ_m(|v_k|)` for
/// `2 <= |w| < |v_k| - 1`, and `ℓ_m(|v_k|)` for `|w| >= |v_k| - 1`.
pub fn make_hk(vk: &VertexId, m: u32, tree: &Arc<TreeTruncation>) -> Result<TreeFunction, TestFnError> {
    let n = vk.len();
    if n <= 3 {
        return Err(TestFnError::HkTooShallow(n));
    }
    tree.index_of(vk)?;
    let top = ell_unchecked(m, n as f64);
    Ok(TreeFunction::radial_from_fn(tree.clone(), |j| {
        if j <= 1 {
            c(0.0)
        } else if j + 1 < n {
            let l = ell_unchecked(m, j as f64);
            c(l * l / top)
        } else {
            c(top)
        }
    }))
}

pub fn make_half_chi_o(tree: &Arc<TreeTruncation>) -> TreeFunction {
    TreeFunction::radial_from_fn(tree.clone(), |j| if j == 0 { c(0.5) } else { c(0.0) })
}

pub fn make_one(tree: &Arc<TreeTruncation>) -> TreeFunction {
    TreeFunction::constant(tree.clone(), c(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFnKind {
    Chi,
    #[serde(rename = "f_v")]
    Fv,
    GRadial,
    #[serde(rename = "g_k")]
    Gk,
    #[serde(rename = "h_k")]
    Hk,
    HalfChiO,
    One,
}

impl FromStr for TestFnKind {
    type Err = TestFnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "chi" => TestFnKind::Chi,
            "f_v" | "fv" => TestFnKind::Fv,
            "g_radial" | "g" => TestFnKind::GRadial,
            "g_k" | "gk" => TestFnKind::Gk,
            "h_k" | "hk" => TestFnKind::Hk,
            "half_chi_o" => TestFnKind::HalfChiO,
            "one" | "1" => TestFnKind::One,
            _ => return Err(TestFnError::UnknownKind(s.to_string())),
        })
    }
}

impl fmt::Display for TestFnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestFnKind::Chi => "chi",
            TestFnKind::Fv => "f_v",
            TestFnKind::GRadial => "g_radial",
            TestFnKind::Gk => "g_k",
            TestFnKind::Hk => "h_k",
            TestFnKind::HalfChiO => "half_chi_o",
            TestFnKind::One => "one",
        })
    }
}

/// A test function request: kind, target vertex where the kind needs one,
/// and space index `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunctionSpec {
    pub kind: TestFnKind,
    pub vertex: Option<VertexId>,
    pub m: u32,
}

impl TestFunctionSpec {
    pub fn build(&self, tree: &Arc<TreeTruncation>) -> Result<TreeFunction, TestFnError> {
        let vertex = |kind: &'static str| self.vertex.as_ref().ok_or(TestFnError::MissingVertex { kind });
        match self.kind {
            TestFnKind::Chi => make_chi(vertex("chi")?, tree),
            TestFnKind::Fv => make_fv(vertex("f_v")?, self.m, tree),
            TestFnKind::GRadial => Ok(make_g_radial(self.m, tree)),
            TestFnKind::Gk => make_gk(vertex("g_k")?, self.m, tree),
            TestFnKind::Hk => make_hk(vertex("h_k")?, self.m, tree),
            TestFnKind::HalfChiO => Ok(make_half_chi_o(tree)),
            TestFnKind::One => Ok(make_one(tree)),
        }
    }
}

/// `2 ∏_{j=1}^m ℓ_j(2)`, the bound on `‖g‖_m` for `m >= 1`.
pub fn g_norm_bound(m: u32) -> f64 {
    2.0 * (1..=m).map(|j| ell_unchecked(j, 2.0)).product::<f64>()
}
