//! Iterated logarithms `ℓ_j` and their running products `Λ_k`.
//!
//! `ℓ_0(x) = x`, `ℓ_1(x) = 1 + ln x`, `ℓ_j(x) = 1 + ln ℓ_{j-1}(x)`, and
//! `Λ_k(x) = ℓ_0(x) ⋯ ℓ_{k-1}(x)` with `Λ_0 = 1`. All are defined for `x >= 1`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("weight argument {x} is below 1")]
pub struct DomainError {
    pub x: f64,
}

fn check(x: f64) -> Result<(), DomainError> {
    // also rejects NaN
    if x >= 1.0 {
        Ok(())
    } else {
        Err(DomainError { x })
    }
}

/// `ℓ_j(x)` for `x >= 1`.
pub fn ell(j: u32, x: f64) -> Result<f64, DomainError> {
    check(x)?;
    Ok(ell_unchecked(j, x))
}

/// `Λ_k(x)` for `x >= 1`.
pub fn lambda(k: u32, x: f64) -> Result<f64, DomainError> {
    check(x)?;
    Ok(lambda_unchecked(k, x))
}

pub(crate) fn ell_unchecked(j: u32, x: f64) -> f64 {
    let mut value = x;
    for _ in 0..j {
        value = 1.0 + value.ln();
    }
    value
}

pub(crate) fn lambda_unchecked(k: u32, x: f64) -> f64 {
    let mut product = 1.0;
    let mut factor = x;
    for _ in 0..k {
        product *= factor;
        factor = 1.0 + factor.ln();
    }
    product
}

/// `ℓ_0(x), …, ℓ_kmax(x)` and `Λ_0(x), …, Λ_kmax(x)`.
pub fn hierarchy(kmax: u32, x: f64) -> Result<(Vec<f64>, Vec<f64>), DomainError> {
    check(x)?;
    let ells = (0..=kmax).map(|j| ell_unchecked(j, x)).collect();
    let lambdas = (0..=kmax).map(|k| lambda_unchecked(k, x)).collect();
    Ok((ells, lambdas))
}

/// Per-depth memo of `ℓ_j(d)` and `Λ_k(d)` for integer depths `1..=depth`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    depth: usize,
    // row j holds ℓ_j(d) at position d; position 0 is unused
    ell: Vec<Vec<f64>>,
    lambda: Vec<Vec<f64>>,
}

impl WeightTable {
    /// Table covering `ℓ_0..=ℓ_kmax` and `Λ_0..=Λ_{kmax+1}`.
    pub fn new(kmax: u32, depth: usize) -> Self {
        let kmax = kmax as usize;
        let mut ell = vec![vec![f64::NAN; depth + 1]; kmax + 1];
        let mut lambda = vec![vec![f64::NAN; depth + 1]; kmax + 2];
        for d in 1..=depth {
            let x = d as f64;
            let mut factor = x;
            let mut product = 1.0;
            for j in 0..=kmax {
                ell[j][d] = factor;
                lambda[j][d] = product;
                product *= factor;
                factor = 1.0 + factor.ln();
            }
            lambda[kmax + 1][d] = product;
        }
        Self { depth, ell, lambda }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `ℓ_j(d)` for `1 <= d <= depth`.
    #[inline]
    pub fn ell(&self, j: u32, d: usize) -> f64 {
        debug_assert!(d >= 1 && d <= self.depth);
        self.ell[j as usize][d]
    }

    /// `Λ_k(d)` for `1 <= d <= depth`.
    #[inline]
    pub fn lambda(&self, k: u32, d: usize) -> f64 {
        debug_assert!(d >= 1 && d <= self.depth);
        self.lambda[k as usize][d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn ell_examples() {
        assert_eq!(ell(0, 7.0).unwrap(), 7.0);
        assert_eq!(ell(1, 1.0).unwrap(), 1.0);
        assert_eq!(ell(2, 1.0).unwrap(), 1.0);
        assert!((ell(1, E).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        for x in [1.0, 2.5, 1e6] {
            assert_eq!(lambda(0, x).unwrap(), 1.0);
        }
        assert_eq!(lambda(1, 5.0).unwrap(), 5.0);
        // e * (1 + ln e)
        assert!((lambda(2, E).unwrap() - 5.436_563_656_918_09).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(ell(1, 0.5).is_err());
        assert!(lambda(2, 0.0).is_err());
        assert!(ell(0, f64::NAN).is_err());
    }

    #[test]
    fn recursive_step_matches_definition() {
        for &x in &[1.0, 1.5, 3.0, 42.0, 1e5] {
            for k in 1..7 {
                let expected = lambda(k - 1, x).unwrap() * ell(k - 1, x).unwrap();
                let got = lambda(k, x).unwrap();
                assert!((got - expected).abs() <= 1e-12 * expected);
            }
        }
    }

    #[test]
    fn table_agrees_with_direct_evaluation() {
        let t = WeightTable::new(5, 40);
        for d in 1..=40 {
            for j in 0..=5 {
                assert_eq!(t.ell(j, d), ell(j, d as f64).unwrap());
            }
            for k in 0..=6 {
                let direct = lambda(k, d as f64).unwrap();
                assert!((t.lambda(k, d) - direct).abs() <= 1e-12 * direct);
            }
        }
    }

    #[test]
    fn hierarchy_lists() {
        let (ells, lambdas) = hierarchy(2, E).unwrap();
        assert_eq!(ells.len(), 3);
        assert_eq!(lambdas[0], 1.0);
        assert_eq!(lambdas[1], E);
    }
}
