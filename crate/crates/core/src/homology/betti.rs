use serde::Serialize;

use super::complex::homology_dims;
use super::module::{require_valid, VModuleSpec};
use super::{binom_usize, increasing_subsets, HomologyError};
use crate::kernel::kernel_dims_recurrence;
use crate::scalar::RatFunc;
use crate::tensor::{tensor_dim, LinMap, SparseVec};
use crate::ybop::{bracket, YBData};

/// `l·m^n − r_1 M(n) − Σ_{k=1}^{m-1} (r_k + r_{k+1}) M(n-k) − r_m M(n-m)`,
/// with `M` of negative argument zero.
pub fn betti_from_ranks(l: usize, m: usize, r: &[usize], n: usize, big_m: &[i128]) -> i128 {
    let at = |k: usize| -> i128 { if k <= n { big_m[n - k] } else { 0 } };
    let rk = |k: usize| -> i128 { if (1..=r.len()).contains(&k) { r[k - 1] as i128 } else { 0 } };
    let mut out = l as i128 * (m as i128).pow(n as u32) - rk(1) * at(0);
    for k in 1..=m {
        out -= (rk(k) + rk(k + 1)) * at(k);
    }
    out
}

/// `r_k = dim (R_M ⊗ id)(M ⊗ [V]_k)` for `k = 1..=m`, from the action map.
pub fn r_ranks(spec: &VModuleSpec, yb: &YBData) -> Result<Vec<usize>, HomologyError> {
    let VModuleSpec::Finite { m, l, .. } = spec else {
        return Err(HomologyError::Precondition("r-ranks need a finite module".into()));
    };
    let act = spec.action(0);
    let mut out = Vec::with_capacity(*m);
    for k in 1..=*m {
        let head = act.kron(&LinMap::identity(tensor_dim(*m, k - 1)));
        let mut cols = Vec::new();
        for p in 0..*l {
            let e = SparseVec::basis(*l, p);
            for s in increasing_subsets(*m, k) {
                cols.push(head.apply(&e.tensor(&bracket(*m, &s)))?);
            }
        }
        let rows = head.rows();
        out.push(yb.ranker().span_dim(rows, &cols, &format!("r_{k} action (l={l}, m={m})")));
    }
    Ok(out)
}

/// The block presentation of `M ⊗ Λ^k → M ⊗ Λ^{k-1}`: block row `S`, block
/// column `S \ {i_j}` holding `(-1)^{j+1} A_{i_j}`.
pub fn stacked_presentation(spec: &VModuleSpec, k: usize) -> Result<LinMap, HomologyError> {
    let VModuleSpec::Finite { m, l, a } = spec else {
        return Err(HomologyError::Precondition("stacked presentations need a finite module".into()));
    };
    if k == 0 || k > *m {
        return Err(HomologyError::Precondition(format!("k = {k} outside 1..={m}")));
    }
    let rows_s = increasing_subsets(*m, k);
    let cols_t = increasing_subsets(*m, k - 1);
    let mut trip = Vec::new();
    for (si, s) in rows_s.iter().enumerate() {
        for (j, &i) in s.iter().enumerate() {
            let t: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
            let ti = cols_t.binary_search(&t).expect("subset listed");
            let sign = RatFunc::from_int(if j % 2 == 0 { 1 } else { -1 });
            for (r, c, v) in a[i].triplets() {
                trip.push((si * l + r, ti * l + c, &sign * v));
            }
        }
    }
    Ok(LinMap::from_triplets(rows_s.len() * l, cols_t.len() * l, trip)?)
}

/// `r_k` as ranks of the stacked presentations.
pub fn r_ranks_stacked(spec: &VModuleSpec, yb: &YBData) -> Result<Vec<usize>, HomologyError> {
    let m = spec.m();
    (1..=m)
        .map(|k| {
            let mat = stacked_presentation(spec, k)?;
            Ok(yb.ranker().rank(&mat, &format!("r_{k} stacked (m={m})")))
        })
        .collect()
}

/// Closed Betti formula at degree `n`.
pub fn betti_formula(spec: &VModuleSpec, yb: &YBData, n: usize) -> Result<i128, HomologyError> {
    require_valid(spec, yb)?;
    let VModuleSpec::Finite { m, l, .. } = spec else {
        return Err(HomologyError::Precondition("the Betti formula needs a finite module".into()));
    };
    let r = r_ranks(spec, yb)?;
    let big_m = kernel_dims_recurrence(*m, n)?;
    Ok(betti_from_ranks(*l, *m, &r, n, &big_m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub r: Vec<usize>,
    pub r_stacked: Vec<usize>,
    pub formula: Vec<i128>,
    pub direct: Vec<usize>,
    /// `0 ≤ r_k ≤ l·C(m,k)`.
    pub r_bounds_ok: bool,
}

impl BettiReport {
    pub fn ok(&self) -> bool {
        self.r == self.r_stacked
            && self.r_bounds_ok
            && self.formula.len() == self.direct.len()
            && self.formula.iter().zip(&self.direct).all(|(f, d)| *f == *d as i128)
    }
}

/// Both `r` computations, the closed formula and direct homology for
/// `n ≤ n_max`.
pub fn betti_check(spec: &VModuleSpec, yb: &YBData, n_max: usize) -> Result<BettiReport, HomologyError> {
    let VModuleSpec::Finite { m, l, .. } = spec else {
        return Err(HomologyError::Precondition("the Betti formula needs a finite module".into()));
    };
    let report = homology_dims(spec, yb, n_max)?;
    let r = r_ranks(spec, yb)?;
    let r_stacked = r_ranks_stacked(spec, yb)?;
    let big_m = kernel_dims_recurrence(*m, n_max)?;
    let formula = (0..=n_max).map(|n| betti_from_ranks(*l, *m, &r, n, &big_m)).collect();
    let r_bounds_ok = r.iter().enumerate().all(|(k, &rk)| rk <= l * binom_usize(*m, k + 1));
    Ok(BettiReport { r, r_stacked, formula, direct: report.dims(), r_bounds_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_arithmetic() {
        // zero action: l·m^n
        let big_m = kernel_dims_recurrence(2, 4).unwrap();
        assert_eq!(betti_from_ranks(1, 2, &[0, 0], 3, &big_m), 8);
        // 3·3^n − 2M(n) − 6M(n−1) − 6M(n−2) − 2M(n−3) = 3^n
        let big_m = kernel_dims_recurrence(3, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(betti_from_ranks(3, 3, &[2, 4, 2], n, &big_m), 3i128.pow(n as u32));
        }
    }

    #[test]
    fn triangular_example_ranks() {
        let spec = VModuleSpec::triangular_example();
        let yb = YBData::new(3).unwrap();
        assert_eq!(r_ranks(&spec, &yb).unwrap(), vec![2, 4, 2]);
        assert_eq!(r_ranks_stacked(&spec, &yb).unwrap(), vec![2, 4, 2]);
        assert_eq!(betti_formula(&spec, &yb, 3).unwrap(), 27);
    }

    #[test]
    fn zero_action_check() {
        let yb = YBData::new(2).unwrap();
        let rep = betti_check(&VModuleSpec::zero_action(1, 2), &yb, 4).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.r, vec![0, 0]);
        assert_eq!(rep.direct, vec![1, 2, 4, 8, 16]);
    }
}
