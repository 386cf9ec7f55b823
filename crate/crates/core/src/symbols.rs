//! The multiplier `ψ`: a radial expression, a per-depth table, or explicit
//! per-vertex values, plus the JSON schema shared by symbols and functions.
//!
//! ```json
//! {"kind":"radial","expr":"1/ell(1,x)","root_value":[1,0]}
//! {"kind":"tabulated","values":[[1,0],[0.5,0.5]]}
//! {"kind":"explicit","values":[1,[0,1],2]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; a bare number is a real value.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, EvalError, Expr, ParseError};
use crate::spaces::{FunctionError, TreeFunction};
use crate::tree::{TreeError, TreeTruncation, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("malformed symbol JSON: {0}")]
    Json(String),
    #[error("in expression: {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation failed at depth {depth}: {source}")]
    Eval { depth: usize, source: EvalError },
    #[error("tabulated symbol has {got} values but the truncation needs depths 0..={depth}")]
    ShortTable { got: usize, depth: usize },
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// How `ψ(o)` was obtained for a radial symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootConvention {
    /// Supplied through `root_value`.
    Supplied,
    /// The expression evaluated at `x = 0`.
    AtZero,
    /// The expression is undefined at `x = 0` and was evaluated at `x = 1`.
    AtOne,
    /// Not a radial expression.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Radial {
        expr: Expr,
        source: String,
        root_value: Option<Complex64>,
    },
    /// Values at depths `0, 1, …`; at least `D + 1` entries.
    Tabulated(Vec<Complex64>),
    /// Values on every vertex, breadth-first.
    Explicit(Vec<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexRepr> for Complex64 {
    fn from(c: ComplexRepr) -> Self {
        match c {
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
            ComplexRepr::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SymbolJson {
    Radial {
        expr: String,
        #[serde(default)]
        root_value: Option<ComplexRepr>,
    },
    Tabulated {
        values: Vec<ComplexRepr>,
    },
    Explicit {
        values: Vec<ComplexRepr>,
    },
}

impl Symbol {
    pub fn radial(text: &str) -> Result<Self, SymbolError> {
        Ok(Symbol::Radial {
            expr: expr::parse(text)?,
            source: text.to_string(),
            root_value: None,
        })
    }

    pub fn constant(c: Complex64) -> Self {
        Symbol::Tabulated(vec![c])
    }

    pub fn with_root_value(self, root: Complex64) -> Self {
        match self {
            Symbol::Radial { expr, source, .. } => Symbol::Radial {
                expr,
                source,
                root_value: Some(root),
            },
            other => other,
        }
    }

    /// Reads the JSON schema described in the module docs. Errors carry the
    /// line and column reported by the JSON reader.
    pub fn from_json(text: &str) -> Result<Self, SymbolError> {
        let raw: SymbolJson = serde_json::from_str(text).map_err(|e| SymbolError::Json(e.to_string()))?;
        Ok(match raw {
            SymbolJson::Radial { expr: text, root_value } => Symbol::Radial {
                expr: expr::parse(&text)?,
                source: text,
                root_value: root_value.map(Into::into),
            },
            SymbolJson::Tabulated { values } => {
                Symbol::Tabulated(values.into_iter().map(Into::into).collect())
            }
            SymbolJson::Explicit { values } => {
                Symbol::Explicit(values.into_iter().map(Into::into).collect())
            }
        })
    }

    /// Radial and tabulated symbols are constant on spheres.
    pub fn is_radial(&self) -> bool {
        !matches!(self, Symbol::Explicit(_))
    }

    /// Evaluates `ψ` on every vertex of the truncation.
    ///
    /// A tabulated symbol shorter than `D + 1` entries is an error, except a
    /// single-entry table, which is read as a constant.
    pub fn materialize(&self, tree: &Arc<TreeTruncation>) -> Result<(TreeFunction, RootConvention), SymbolError> {
        let depth = tree.depth();
        match self {
            Symbol::Radial { expr, root_value, .. } => {
                let (root, convention) = match root_value {
                    Some(r) => (*r, RootConvention::Supplied),
                    None => match expr.eval(0.0) {
                        Ok(v) => (Complex64::new(v, 0.0), RootConvention::AtZero),
                        Err(_) => {
                            let v = expr.eval(1.0).map_err(|source| SymbolError::Eval { depth: 0, source })?;
                            (Complex64::new(v, 0.0), RootConvention::AtOne)
                        }
                    },
                };
                let mut values = Vec::with_capacity(depth + 1);
                values.push(root);
                for j in 1..=depth {
                    let v = expr
                        .eval(j as f64)
                        .map_err(|source| SymbolError::Eval { depth: j, source })?;
                    values.push(Complex64::new(v, 0.0));
                }
                Ok((TreeFunction::radial(tree.clone(), values)?, convention))
            }
            Symbol::Tabulated(values) if values.len() == 1 => Ok((
                TreeFunction::constant(tree.clone(), values[0]),
                RootConvention::NotApplicable,
            )),
            Symbol::Tabulated(values) => {
                if values.len() < depth + 1 {
                    return Err(SymbolError::ShortTable {
                        got: values.len(),
                        depth,
                    });
                }
                Ok((
                    TreeFunction::radial(tree.clone(), values[..=depth].to_vec())?,
                    RootConvention::NotApplicable,
                ))
            }
            Symbol::Explicit(values) => Ok((
                TreeFunction::from_values(tree.clone(), values.clone())?,
                RootConvention::NotApplicable,
            )),
        }
    }

    /// `ψ(v)`.
    pub fn eval_at(&self, v: &VertexId, tree: &TreeTruncation) -> Result<Complex64, SymbolError> {
        let index = tree.index_of(v)?;
        match self {
            Symbol::Radial { expr, root_value, .. } => {
                if v.is_root() {
                    if let Some(r) = root_value {
                        return Ok(*r);
                    }
                    return match expr.eval(0.0) {
                        Ok(x) => Ok(Complex64::new(x, 0.0)),
                        Err(_) => expr
                            .eval(1.0)
                            .map(|x| Complex64::new(x, 0.0))
                            .map_err(|source| SymbolError::Eval { depth: 0, source }),
                    };
                }
                expr.eval(v.len() as f64)
                    .map(|x| Complex64::new(x, 0.0))
                    .map_err(|source| SymbolError::Eval { depth: v.len(), source })
            }
            Symbol::Tabulated(values) if values.len() == 1 => Ok(values[0]),
            Symbol::Tabulated(values) => values.get(v.len()).copied().ok_or(SymbolError::ShortTable {
                got: values.len(),
                depth: v.len(),
            }),
            Symbol::Explicit(values) => {
                if values.len() != tree.vertex_count() {
                    return Err(FunctionError::Length {
                        expected: tree.vertex_count(),
                        got: values.len(),
                    }
                    .into());
                }
                Ok(values[index])
            }
        }
    }

    /// Short human-readable description for reports.
    pub fn describe(&self) -> String {
        match self {
            Symbol::Radial { source, .. } => format!("radial({source})"),
            Symbol::Tabulated(v) => format!("tabulated({} depths)", v.len()),
            Symbol::Explicit(v) => format!("explicit({} vertices)", v.len()),
        }
    }
}

/// JSON form of a function on a truncation, in the symbol schema.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionJson {
    Tabulated {
        #[serde(with = "crate::num17::complex_vec")]
        values: Vec<Complex64>,
    },
    Explicit {
        #[serde(with = "crate::num17::complex_vec")]
        values: Vec<Complex64>,
    },
}

impl From<&TreeFunction> for FunctionJson {
    fn from(f: &TreeFunction) -> Self {
        match f.radial_values() {
            Some(v) => FunctionJson::Tabulated { values: v.to_vec() },
            None => FunctionJson::Explicit {
                values: f.to_vertex_values(),
            },
        }
    }
}
