//! `ker σ_n`: dimensions, eigenspace decomposition, tilde complements,
//! generators and the Hilbert series of `B(V) = ⊕ ker σ_n`.

mod decomp;
mod generators;
mod tower;

pub use decomp::{verify_decomposition, DecompPart, DecompositionReport};
pub use generators::{
    generated_dims, omega_k, listed_generators, verify_generator_examples, GeneratorReport, GeneratorSet,
};
pub use tower::{KernelTower, TowerDegree};

use serde::Serialize;
use thiserror::Error;

use crate::tensor::TensorError;
use crate::ybop::{YBData, YbError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("kernel dimension recurrences disagree at n = {n}")]
    Recurrence { n: usize },
    #[error("degree {n} not computed in this tower")]
    MissingDegree { n: usize },
    #[error(transparent)]
    Yb(#[from] YbError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// `C(n, k)`, zero when `k > n`.
pub fn binom(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i as i128 + 1))
}

/// `M(n) = dim ker σ_n`, computed from the operator.
pub fn kernel_dim_direct(yb: &YBData, n: usize) -> Result<usize, KernelError> {
    let sigma = yb.sigma(n)?;
    let rank = yb.ranker().rank(&sigma, &format!("sigma_{n} (m={})", yb.m()));
    Ok(sigma.cols() - rank)
}

/// `M(0..=n_max)` from `m^n = Σ_{i=0}^{m} C(m,i) M(n-i)`.
///
/// The companion relation `Σ_{i=0}^{m+1} (i-1) C(m+1,i) M(n-i) = 0` is
/// checked for every `n ≥ 1` before returning.
pub fn kernel_dims_recurrence(m: usize, n_max: usize) -> Result<Vec<i128>, KernelError> {
    let mut out: Vec<i128> = Vec::with_capacity(n_max + 1);
    let at = |v: &Vec<i128>, k: isize| if k < 0 { 0 } else { v[k as usize] };
    for n in 0..=n_max {
        let mut val = (m as i128).pow(n as u32);
        for i in 1..=m {
            val -= binom(m, i) * at(&out, n as isize - i as isize);
        }
        out.push(val);
    }
    for n in 1..=n_max {
        let s: i128 = (0..=m + 1)
            .map(|i| (i as i128 - 1) * binom(m + 1, i) * at(&out, n as isize - i as isize))
            .sum();
        if s != 0 {
            return Err(KernelError::Recurrence { n });
        }
    }
    Ok(out)
}

pub fn kernel_dim_recurrence(m: usize, n: usize) -> Result<i128, KernelError> {
    Ok(kernel_dims_recurrence(m, n)?[n])
}

/// The three `m = 2` recurrences, each evaluated for `1 ≤ n ≤ n_max`
/// against the given values `M(0..=n_max)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct M2Recurrences {
    pub three_two: bool,
    pub four_alternating: bool,
    pub two_alternating: bool,
}

impl M2Recurrences {
    pub fn all(&self) -> bool {
        self.three_two && self.four_alternating && self.two_alternating
    }
}

pub fn check_m2_recurrences(values: &[i128]) -> M2Recurrences {
    let at = |k: isize| if k < 0 { 0 } else { values[k as usize] };
    let alt = |n: usize| if n.is_multiple_of(2) { 1i128 } else { -1 };
    let range = 1..values.len();
    M2Recurrences {
        three_two: range.clone().all(|n| {
            let n = n as isize;
            values[n as usize] == 3 * at(n - 2) + 2 * at(n - 3)
        }),
        four_alternating: range.clone().all(|n| {
            values[n] == 4 * at(n as isize - 2) + alt(n + 1) * (n as i128 - 1)
        }),
        two_alternating: range.clone().all(|n| values[n] == 2 * at(n as isize - 1) + alt(n) * (n as i128 + 1)),
    }
}

/// Counting check `m^n = Σ_k C(m,k) M(n-k)`.
pub fn dimension_count(m: usize, values: &[i128]) -> bool {
    (0..values.len()).all(|n| {
        let s: i128 = (0..=n.min(m)).map(|k| binom(m, k) * values[n - k]).sum();
        s == (m as i128).pow(n as u32)
    })
}

/// Outcome of the Hilbert series identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub m: usize,
    /// `b_i = (i-1) C(m+1, i)` for `i = 0..=m+1`.
    pub b: Vec<i128>,
    /// Coefficients of `(1 - mq)(1 + q)^m`.
    pub product: Vec<i128>,
    pub identity_ok: bool,
    /// Power-series inverse of the product, up to the degree bound.
    pub inverse: Vec<i128>,
    pub inverse_matches_m: bool,
}

/// `1 - Σ b_i q^i = (1 - mq)(1+q)^m`, and the inverse series has
/// coefficients `M(n)`. Computed over the integers in a fresh variable `q`.
pub fn hilbert_check(m: usize, degree_bound: usize) -> Result<HilbertReport, KernelError> {
    let b: Vec<i128> = (0..=m + 1).map(|i| if i < 2 { 0 } else { (i as i128 - 1) * binom(m + 1, i) }).collect();
    let mut lhs: Vec<i128> = b.iter().map(|x| -x).collect();
    lhs[0] += 1;
    let mut product = vec![0i128; m + 2];
    for j in 0..=m {
        product[j] += binom(m, j);
        product[j + 1] -= m as i128 * binom(m, j);
    }
    let identity_ok = lhs == product;
    let mut inverse = vec![0i128; degree_bound + 1];
    inverse[0] = 1;
    for n in 1..=degree_bound {
        inverse[n] = -(1..=n.min(m + 1)).map(|i| product[i] * inverse[n - i]).sum::<i128>();
    }
    let expected = kernel_dims_recurrence(m, degree_bound)?;
    Ok(HilbertReport { m, b, product, identity_ok, inverse_matches_m: inverse == expected, inverse })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_values() {
        assert_eq!(kernel_dims_recurrence(2, 8).unwrap(), vec![1, 0, 3, 2, 9, 12, 31, 54, 117]);
        assert_eq!(kernel_dims_recurrence(1, 4).unwrap(), vec![1, 0, 1, 0, 1]);
        // 81 - 3*8 - 3*6 - 1*0
        assert_eq!(kernel_dim_recurrence(3, 4).unwrap(), 39);
        for m in 1..6 {
            assert_eq!(kernel_dim_recurrence(m, 0).unwrap(), 1);
        }
    }

    #[test]
    fn m2_recurrences_hold() {
        let v = kernel_dims_recurrence(2, 8).unwrap();
        assert!(check_m2_recurrences(&v).all());
        let mut bad = v.clone();
        bad[5] += 1;
        assert!(!check_m2_recurrences(&bad).all());
    }

    #[test]
    fn hilbert_examples() {
        let h = hilbert_check(2, 8).unwrap();
        assert_eq!(h.product, vec![1, 0, -3, -2]);
        assert!(h.identity_ok && h.inverse_matches_m);
        assert_eq!(hilbert_check(1, 4).unwrap().product, vec![1, 0, -1]);
        assert_eq!(hilbert_check(3, 4).unwrap().product, vec![1, 0, -6, -8, -3]);
        for m in 1..=6 {
            let h = hilbert_check(m, 8).unwrap();
            assert!(h.identity_ok && h.inverse_matches_m, "m={m}");
        }
    }

    #[test]
    fn direct_dims_small() {
        let yb = YBData::new(2).unwrap();
        let direct: Vec<usize> = (0..=4).map(|n| kernel_dim_direct(&yb, n).unwrap()).collect();
        assert_eq!(direct, vec![1, 0, 3, 2, 9]);
        assert!(dimension_count(2, &kernel_dims_recurrence(2, 8).unwrap()));
    }
}
